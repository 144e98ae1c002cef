//! The optimal embezzling catalyst family for trivial Hamiltonians and the
//! dimension-reduction step that proves its optimality by induction.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::spectra::{check_transformation, CatalystPair, ProbVec};

/// Largest catalyst dimension that is ever materialized as a vector.
pub const MAX_MATERIALIZED_DIM: usize = 1 << 24;

/// System dimension `m ≥ 2` and power `a ≥ 1`; catalyst dimension `n = m^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    m: usize,
    a: u32,
}

impl FamilyParams {
    pub fn new(m: usize, a: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("system dimension m must be ≥ 2, got {m}")));
        }
        if a < 1 {
            return Err(Error::InvalidParameter("power a must be ≥ 1".into()));
        }
        Ok(Self { m, a })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `m^a` as an exact integer; never overflows.
    pub fn n_big(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.m), self.a as usize)
    }

    pub fn n(&self) -> Result<usize> {
        self.m
            .checked_pow(self.a)
            .filter(|n| *n <= MAX_MATERIALIZED_DIM)
            .ok_or_else(|| Error::DimensionTooLarge(format!("{}^{}", self.m, self.a)))
    }
}

/// `(m−1)/(1+(m−1)a)`.
pub fn optimal_error(params: FamilyParams) -> Rational {
    let m1 = BigInt::from(params.m - 1);
    let denom = BigInt::one() + &m1 * BigInt::from(params.a);
    Rational::new(m1, denom)
}

/// The output catalyst `ω′` and input catalyst `ω` of the optimal family.
///
/// `ω′_1 = 1/(1+(m−1)a)`; for `i ≥ 2` in block `b` (that is
/// `m^{b−1} < i ≤ m^b`) the entry is `ω′_1·m^{1−b}`. The input keeps
/// `ω′_i` for `2 ≤ i ≤ n/m`, zeroes the rest and sets `ω_1 = m·ω′_1`.
/// Block membership uses integer powers only.
pub fn optimal_pair(params: FamilyParams) -> Result<CatalystPair<Rational>> {
    let n = params.n()?;
    let m = params.m;
    let head = Rational::new(BigInt::one(), BigInt::one() + BigInt::from(m - 1) * BigInt::from(params.a));

    let mut omega_out = Vec::with_capacity(n);
    omega_out.push(head.clone());
    let mut block_start = 1usize; // m^{b−1}
    let mut value = head.clone(); // ω′_1·m^{1−b}
    let mut b = 1u32;
    while b <= params.a {
        let block_end = block_start * m;
        for _ in block_start.max(1)..block_end {
            omega_out.push(value.clone());
        }
        block_start = block_end;
        value /= Rational::from_usize(m);
        b += 1;
    }
    debug_assert_eq!(omega_out.len(), n);

    let cut = n / m;
    let mut omega_in = vec![Rational::zero(); n];
    omega_in[0] = head * Rational::from_usize(m);
    omega_in[1..cut].clone_from_slice(&omega_out[1..cut]);

    CatalystPair::new(ProbVec::new(omega_in)?, ProbVec::new(omega_out)?, m)
}

/// Harmonic-weight comparison state `(1/C(n))·(1/i)` with `C(n) = Σ_{i≤n} 1/i`.
pub fn vdh_state(n: usize) -> Result<ProbVec<Rational>> {
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    let harmonic: Rational = (1..=n).map(|i| Rational::new(BigInt::one(), BigInt::from(i))).sum();
    let entries = (1..=n)
        .map(|i| Rational::new(BigInt::one(), BigInt::from(i)) / harmonic.clone())
        .collect();
    ProbVec::new(entries)
}

/// Moves all majorization slack onto `ω_1`: for `i ≥ 2`, `ω_i` becomes
/// `min(ω_i, ω′_i)` and `ω_1` absorbs the difference. Feasibility and the
/// trace distance are both preserved.
pub fn pile_slack<T: Scalar>(pair: &CatalystPair<T>) -> Result<CatalystPair<T>> {
    let w = pair.omega_in().entries();
    let wp = pair.omega_out().entries();
    let mut out = w.to_vec();
    let mut moved = T::zero();
    for i in 1..w.len() {
        if w[i] > wp[i] {
            moved = moved + (w[i].clone() - wp[i].clone());
            out[i] = wp[i].clone();
        }
    }
    out[0] = out[0].clone() + moved;
    CatalystPair::new(ProbVec::from_trusted(out), pair.omega_out().clone(), pair.system_dim())
}

/// Which construction [`reduce_pair`] used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionBranch {
    /// The cut fell exactly on an entry boundary (`ω̂_s = ω_s`).
    Truncate,
    /// The cut split entry `s`; the block `(s−1)m+1..sm` of the output was averaged.
    BlockAverage,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub pair: CatalystPair<Rational>,
    /// Output mass `δ = Σ_{i>k/m} ω′_i` that was cut away.
    pub delta: Rational,
    /// 1-based index `s` of the split input entry.
    pub split_index: usize,
    pub branch: ReductionBranch,
}

/// Maps a feasible pair in dimension `k` (a multiple of `m` with `k ≥ m²`)
/// to a feasible pair in dimension `k/m`.
///
/// The input must be in slack-piled normal form (see [`pile_slack`]). When
/// the split index is `s ≥ 2` the reduced distance is exactly
/// `d(pair)/(1−δ)`; for `s = 1` the construction stays feasible but only the
/// inequality `d(reduced)·(1−δ) ≥ 1−δ−ω′_1` is guaranteed.
pub fn reduce_pair(pair: &CatalystPair<Rational>) -> Result<Reduction> {
    let m = pair.system_dim();
    let k = pair.dim();
    if m < 2 || !k.is_multiple_of(m) {
        return Err(Error::InvalidParameter(format!("dimension {k} is not divisible by m = {m}")));
    }
    let n = k / m;
    if n < m {
        return Err(Error::NoSmallerDimension { dim: k, m });
    }
    if !check_transformation(pair)? {
        return Err(Error::InfeasiblePair);
    }
    let w = pair.omega_in().entries();
    let wp = pair.omega_out().entries();
    if let Some(i) = (1..k).find(|&i| w[i] > wp[i]) {
        return Err(Error::NotSlackPiled { index: i + 1 });
    }

    let delta: Rational = wp[n..].iter().cloned().sum();
    let kept = Rational::one() - &delta;

    // Smallest s with Σ_{i≤s} ω_i ≥ 1−δ; ω̂_s = 1−δ − Σ_{i<s} ω_i.
    let mut before = Rational::zero();
    let mut s = 0usize;
    while before.clone() + &w[s] < kept {
        before += &w[s];
        s += 1;
    }
    let hat = kept.clone() - &before;
    let split_index = s + 1;
    debug_assert!(split_index <= k / (m * m) || split_index == 1);

    let mut sigma = vec![Rational::zero(); n];
    sigma[..s].clone_from_slice(&w[..s]);
    sigma[s] = hat.clone();
    let mut sigma_out: Vec<Rational> = wp[..n].to_vec();

    let branch = if hat == w[s] {
        ReductionBranch::Truncate
    } else {
        let lo = s * m;
        let hi = lo + m;
        let l: Rational = sigma_out[lo..hi].iter().cloned().sum::<Rational>() / Rational::from_usize(m);
        // Interpolation between C ≥ C′ and C + ω̂_s ≥ C′ + m·l.
        let c: Rational = w[..s].iter().cloned().sum();
        let c_prime: Rational = wp[..lo].iter().cloned().sum();
        for j in 1..=m {
            let jj = Rational::from_usize(j);
            debug_assert!(c.clone() + jj.clone() / Rational::from_usize(m) * &hat >= c_prime.clone() + jj * &l);
        }
        for x in &mut sigma_out[lo..hi] {
            *x = l.clone();
        }
        ReductionBranch::BlockAverage
    };

    let scale = |v: Vec<Rational>| ProbVec::new(v.into_iter().map(|x| x / &kept).collect());
    let reduced = CatalystPair::new(scale(sigma)?, scale(sigma_out)?, m)?;
    debug_assert!(check_transformation(&reduced)?);
    Ok(Reduction { pair: reduced, delta, split_index, branch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::spectra::{majorizes, pad_pure, tensor_uniform, trace_distance};

    fn rv(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(a, b)| rational(a, b)).collect()
    }

    #[test]
    fn params_validation() {
        assert!(FamilyParams::new(1, 3).is_err());
        assert!(FamilyParams::new(2, 0).is_err());
        let huge = FamilyParams::new(10, 40).unwrap();
        assert!(matches!(huge.n(), Err(Error::DimensionTooLarge(_))));
        assert_eq!(huge.n_big().to_string().len(), 41);
        assert_eq!(optimal_error(huge), rational(9, 361));
        assert!(optimal_pair(huge).is_err());
    }

    #[test]
    fn optimal_pair_examples() {
        let p = optimal_pair(FamilyParams::new(2, 3).unwrap()).unwrap();
        assert_eq!(p.omega_out().entries(), rv(&[(1, 4), (1, 4), (1, 8), (1, 8), (1, 16), (1, 16), (1, 16), (1, 16)]));
        assert_eq!(p.omega_in().entries(), rv(&[(1, 2), (1, 4), (1, 8), (1, 8), (0, 1), (0, 1), (0, 1), (0, 1)]));

        let p = optimal_pair(FamilyParams::new(2, 1).unwrap()).unwrap();
        assert_eq!(p.omega_out().entries(), rv(&[(1, 2), (1, 2)]));
        assert_eq!(p.omega_in().entries(), rv(&[(1, 1), (0, 1)]));

        let p = optimal_pair(FamilyParams::new(3, 1).unwrap()).unwrap();
        assert_eq!(p.omega_out().entries(), rv(&[(1, 3), (1, 3), (1, 3)]));
        assert_eq!(p.omega_in().entries(), rv(&[(1, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn family_pair_majorization_m2_a3() {
        let p = optimal_pair(FamilyParams::new(2, 3).unwrap()).unwrap();
        let lhs = tensor_uniform(p.omega_in(), 2).unwrap();
        let rhs = pad_pure(p.omega_out(), 2).unwrap();
        assert!(majorizes(&lhs, &rhs).unwrap());
        assert_eq!(trace_distance(p.omega_in(), p.omega_out()).unwrap(), rational(1, 4));
        assert!(check_transformation(&p).unwrap());
    }

    #[test]
    fn optimal_error_examples() {
        let e = |m, a| optimal_error(FamilyParams::new(m, a).unwrap());
        assert_eq!(e(2, 3), rational(1, 4));
        assert_eq!(e(3, 3), rational(2, 7));
        assert_eq!(e(2, 1), rational(1, 2));
    }

    #[test]
    fn family_is_valid_and_optimal_error_matches() {
        for m in 2..=5 {
            for a in 1..=3 {
                let params = FamilyParams::new(m, a).unwrap();
                let p = optimal_pair(params).unwrap();
                assert!(check_transformation(&p).unwrap(), "m={m} a={a}");
                let d = optimal_error(params);
                assert_eq!(p.distance(), d);
                assert_eq!(d.clone() * Rational::from_usize(1 + (m - 1) * a as usize), Rational::from_usize(m - 1));
                if a > 1 {
                    assert!(d < optimal_error(FamilyParams::new(m, a - 1).unwrap()));
                }
                // Slack already piled: ω_1 > ω′_1 and ω_i ≤ ω′_i beyond.
                let (w, wp) = (p.omega_in().entries(), p.omega_out().entries());
                assert!(w[0] > wp[0]);
                assert!(w.iter().zip(wp).skip(1).all(|(x, y)| x <= y));
            }
        }
    }

    #[test]
    fn redistribution_reading_agrees_with_closed_form() {
        // Zeroing ω′ beyond n/m and moving the removed mass plus (m−1)ω′_1
        // onto the first entry is the same vector as the closed form.
        for m in 2..=4 {
            for a in 1..=3 {
                let params = FamilyParams::new(m, a).unwrap();
                let p = optimal_pair(params).unwrap();
                let wp = p.omega_out().entries();
                let n = wp.len();
                let removed: Rational = wp[n / m..].iter().cloned().sum();
                let mut rebuilt = wp.to_vec();
                for x in &mut rebuilt[n / m..] {
                    *x = Rational::zero();
                }
                rebuilt[0] = rebuilt[0].clone() + removed;
                assert_eq!(rebuilt, p.omega_in().entries());
                assert_eq!(rebuilt[0], wp[0].clone() * Rational::from_usize(m));
            }
        }
    }

    #[test]
    fn vdh_examples() {
        assert_eq!(vdh_state(1).unwrap().entries(), rv(&[(1, 1)]));
        assert_eq!(vdh_state(2).unwrap().entries(), rv(&[(2, 3), (1, 3)]));
        assert_eq!(vdh_state(4).unwrap().entries(), rv(&[(12, 25), (6, 25), (4, 25), (3, 25)]));
        for n in 1..40 {
            let v = vdh_state(n).unwrap();
            assert_eq!(v.entries().iter().cloned().sum::<Rational>(), Rational::one());
            assert!(v.entries().windows(2).all(|w| w[0] > w[1]));
        }
        assert!(vdh_state(0).is_err());
    }

    #[test]
    fn pile_slack_preserves_distance_and_feasibility() {
        let w = ProbVec::new(rv(&[(1, 2), (3, 10), (1, 5), (0, 1), (0, 1), (0, 1)])).unwrap();
        let wp = ProbVec::new(rv(&[(1, 4), (1, 4), (1, 8), (1, 8), (1, 8), (1, 8)])).unwrap();
        let pair = CatalystPair::new(w, wp, 2).unwrap();
        assert!(check_transformation(&pair).unwrap());
        let piled = pile_slack(&pair).unwrap();
        assert_eq!(piled.omega_in().entries(), rv(&[(5, 8), (1, 4), (1, 8), (0, 1), (0, 1), (0, 1)]));
        assert_eq!(piled.distance(), pair.distance());
        assert!(check_transformation(&piled).unwrap());
    }

    #[test]
    fn reduce_optimal_m2_a3() {
        let p = optimal_pair(FamilyParams::new(2, 3).unwrap()).unwrap();
        let r = reduce_pair(&p).unwrap();
        assert_eq!(r.delta, rational(1, 4));
        assert_eq!(r.pair.dim(), 4);
        assert_eq!(r.pair.distance(), rational(1, 3));
        assert_eq!(r.pair.distance(), optimal_error(FamilyParams::new(2, 2).unwrap()));
        assert!(check_transformation(&r.pair).unwrap());
        assert_eq!(r.branch, ReductionBranch::Truncate);
        assert_eq!(r.split_index, 2);
    }

    #[test]
    fn reduce_rejects_bad_inputs() {
        let base = optimal_pair(FamilyParams::new(2, 1).unwrap()).unwrap();
        assert_eq!(reduce_pair(&base).unwrap_err(), Error::NoSmallerDimension { dim: 2, m: 2 });
        let u = ProbVec::<Rational>::uniform(4).unwrap();
        assert_eq!(reduce_pair(&CatalystPair::new(u.clone(), u, 2).unwrap()).unwrap_err(), Error::InfeasiblePair);
        let odd = CatalystPair::new(ProbVec::pure(6).unwrap(), ProbVec::pure(6).unwrap(), 4).unwrap();
        assert!(matches!(reduce_pair(&odd), Err(Error::InvalidParameter(_))));
        let w = ProbVec::new(rv(&[(1, 2), (3, 10), (1, 5), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)])).unwrap();
        let wp = ProbVec::new(rv(&[(1, 4), (1, 4), (1, 8), (1, 8), (1, 16), (1, 16), (1, 16), (1, 16)])).unwrap();
        let pair = CatalystPair::new(w, wp, 2).unwrap();
        assert!(check_transformation(&pair).unwrap());
        assert_eq!(reduce_pair(&pair).unwrap_err(), Error::NotSlackPiled { index: 2 });
        let r = reduce_pair(&pile_slack(&pair).unwrap()).unwrap();
        assert!(check_transformation(&r.pair).unwrap());
    }

    #[test]
    fn reduce_block_average_branch() {
        // k = 16, m = 2, δ = 1/5: after piling, the cut lands inside ω_3.
        let mut w = rv(&[(9, 20), (1, 5), (1, 5), (1, 10), (1, 20)]);
        w.extend(std::iter::repeat_n(rational(0, 1), 11));
        let mut wp = rv(&[(1, 5), (1, 5), (3, 20), (1, 10)]);
        wp.extend(std::iter::repeat_n(rational(3, 80), 4));
        wp.extend(std::iter::repeat_n(rational(1, 40), 8));
        let pair = CatalystPair::new(ProbVec::new(w).unwrap(), ProbVec::new(wp).unwrap(), 2).unwrap();
        assert!(check_transformation(&pair).unwrap());
        let piled = pile_slack(&pair).unwrap();
        let r = reduce_pair(&piled).unwrap();
        assert_eq!(r.branch, ReductionBranch::BlockAverage);
        assert_eq!(r.split_index, 3);
        assert!(check_transformation(&r.pair).unwrap());
        assert_eq!(r.pair.distance() * (Rational::one() - &r.delta), piled.distance());
    }
}

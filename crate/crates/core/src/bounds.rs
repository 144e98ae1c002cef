//! Lower bounds on catalytic error.
//!
//! Two families: the bounded-dimension bound, which needs only the largest
//! catalyst energy, and the energy-constrained bound, which splits the
//! `D_{1/2}` constraint, lower-bounds the `ω` sub-problem by `ε_C` and solves
//! the remaining quadratic problem through its Lagrange dual.
//!
//! Every [`BoundReport`] states whether its formula measures trace distance
//! (`½ℓ1`) or plain `ℓ1`, and carries the trace-distance value separately.
//! Energy levels must be non-negative for the energy bounds: the step
//! `e^{−βE/2} ≥ e^{−βE}` used to merge the sub-problems fails otherwise.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hamiltonians::{FiniteSpectrum, Spectrum, MAX_LEVELS, SCHEMA};
use crate::scalar::Rational;

/// Relative tolerance when comparing inverse temperatures of two spectra.
const BETA_TOLERANCE: f64 = 1e-12;

/// Slack absorbing rounding in [`split_inequality_holds`].
const SPLIT_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    DimDiag,
    DimArbitrary,
    EnergyDiag,
    EnergyArbitrary,
    EnergyMaintext,
}

/// Distance measured by the formula a report was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceConvention {
    TraceDistance,
    L1,
}

/// Base of the Boltzmann weights `γ^{E}` inside `ε_C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaConvention {
    /// `γ = e^{−β}`.
    ExpBeta,
    /// `γ = e^{−β/2}`.
    ExpHalfBeta,
}

impl GammaConvention {
    fn exponent_scale(self) -> f64 {
        match self {
            Self::ExpBeta => 1.0,
            Self::ExpHalfBeta => 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// In the units of `convention`.
    pub bound: f64,
    /// Trace distance.
    pub bound_canonical: f64,
    pub convention: DistanceConvention,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaConvention>,
    pub intermediates: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(kind: BoundKind, bound: f64, convention: DistanceConvention, gamma: Option<GammaConvention>) -> Self {
        let bound_canonical = match convention {
            DistanceConvention::TraceDistance => bound,
            DistanceConvention::L1 => bound / 2.0,
        };
        Self { kind, bound, bound_canonical, convention, gamma, intermediates: BTreeMap::new(), notes: Vec::new() }
    }

    fn set(&mut self, key: &str, value: f64) {
        self.intermediates.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["schema"] = json!(SCHEMA);
        v
    }
}

fn check_same_beta(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > BETA_TOLERANCE * a.abs().max(b.abs()).max(1.0) {
        return Err(Error::BetaMismatch(a, b));
    }
    Ok(())
}

/// `A = Z_S/e^{−βE_max}`, summed relative to the top level.
pub fn amplification(sys: &FiniteSpectrum) -> f64 {
    let top = sys.max_energy();
    sys.levels().iter().map(|e| (-sys.beta() * (e - top)).exp()).sum()
}

/// `e^{−βE_max}/Z_C`, the smallest Gibbs weight.
fn min_gibbs_weight(cat: &FiniteSpectrum) -> f64 {
    let top = cat.max_energy();
    1.0 / cat.levels().iter().map(|e| (-cat.beta() * (e - top)).exp()).sum::<f64>()
}

/// `(A − 1)·e^{−βE_max^C}/Z_C`.
pub fn dim_bound_diag(sys: &FiniteSpectrum, cat: &FiniteSpectrum) -> Result<BoundReport> {
    check_same_beta(sys.beta(), cat.beta())?;
    let a = amplification(sys);
    let w = min_gibbs_weight(cat);
    let mut r = BoundReport::new(BoundKind::DimDiag, (a - 1.0) * w, DistanceConvention::TraceDistance, None);
    r.set("A", a);
    r.set("Z_S", sys.partition_function());
    r.set("Z_C", cat.partition_function());
    r.set("min_gibbs_weight_C", w);
    Ok(r)
}

/// Exact `(m−1)/n` for fully degenerate system and catalyst.
pub fn dim_bound_trivial(m: usize, n: usize) -> Result<Rational> {
    if m == 0 || n == 0 {
        return Err(Error::ZeroMultiplier);
    }
    Ok(Rational::new(BigInt::from(m - 1), BigInt::from(n)))
}

/// `(2^{κ₁} − 1)·e^{−βE_max^C}/Z_C`, clamped at zero.
pub fn dim_bound_arbitrary(kappa1: f64, cat: &FiniteSpectrum) -> Result<BoundReport> {
    if !kappa1.is_finite() {
        return Err(Error::InvalidParameter(format!("κ₁ must be finite, got {kappa1}")));
    }
    let w = min_gibbs_weight(cat);
    let raw = (kappa1.exp2() - 1.0) * w;
    let mut r = BoundReport::new(BoundKind::DimArbitrary, raw.max(0.0), DistanceConvention::TraceDistance, None);
    r.set("kappa", kappa1);
    r.set("Z_C", cat.partition_function());
    r.set("min_gibbs_weight_C", w);
    if raw <= 0.0 {
        r.notes.push("κ₁ ≤ 0: the transformation does not increase the divergence, bound is vacuous".into());
    }
    Ok(r)
}

/// `f(a) = ½·a²/(a²+1)` for `a ≥ 2`.
pub fn f_of(a: f64) -> Result<f64> {
    if !(a >= 2.0) {
        return Err(Error::AmplificationTooSmall(a));
    }
    if a.is_infinite() {
        return Ok(0.5);
    }
    Ok(0.5 / (1.0 + 1.0 / (a * a)))
}

/// Split forms used to decouple `ω` from `|ω − ω′|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitForm {
    /// `√x − √a·√y ≤ √|x−y| − f(a)·y`.
    General(f64),
    /// `√x − √(2y) ≤ √|x−y| − y/3`.
    MainText,
}

/// Whether the split inequality holds at `(x, y)`, up to a few ulps.
pub fn split_inequality_holds(x: f64, y: f64, form: SplitForm) -> Result<bool> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidParameter(format!("split inequality needs x, y ∈ [0,1], got ({x}, {y})")));
    }
    let (lhs, rhs) = match form {
        SplitForm::General(a) => {
            let f = f_of(a)?;
            (x.sqrt() - a.sqrt() * y.sqrt(), (x - y).abs().sqrt() - f * y)
        }
        SplitForm::MainText => (x.sqrt() - (2.0 * y).sqrt(), (x - y).abs().sqrt() - y / 3.0),
    };
    Ok(lhs <= rhs + SPLIT_SLACK)
}

/// Amplifications probed by [`split_fuzz`].
pub const FUZZ_AMPLIFICATIONS: [f64; 4] = [2.0, 4.0, 10.0, 100.0];

/// Violation counts from [`split_fuzz`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitFuzzReport {
    pub points: usize,
    pub seed: u64,
    pub general_violations: usize,
    pub maintext_violations: usize,
    /// First violating `(x, y, a)`; `a = 0` marks the main-text form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<(f64, f64, f64)>,
}

/// Uniform `(x, y) ∈ [0,1]²` with `a` cycling through [`FUZZ_AMPLIFICATIONS`];
/// every point also tests the main-text form. Deterministic in `seed`.
pub fn split_fuzz(points: usize, seed: u64) -> SplitFuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        SplitFuzzReport { points, seed, general_violations: 0, maintext_violations: 0, first_violation: None };
    for k in 0..points {
        let x: f64 = rng.gen();
        let y: f64 = rng.gen();
        let a = FUZZ_AMPLIFICATIONS[k % FUZZ_AMPLIFICATIONS.len()];
        if !split_inequality_holds(x, y, SplitForm::General(a)).expect("domain respected") {
            report.general_violations += 1;
            report.first_violation.get_or_insert((x, y, a));
        }
        if !split_inequality_holds(x, y, SplitForm::MainText).expect("domain respected") {
            report.maintext_violations += 1;
            report.first_violation.get_or_insert((x, y, 0.0));
        }
    }
    report
}

/// Result of the `ε_C` maximization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsC {
    pub value: f64,
    /// Right endpoint of the maximizing step; `1` for the top level of a finite spectrum.
    pub witness_w: f64,
    /// 1-based level `j(W)` on the maximizing step.
    pub witness_level: usize,
}

/// `max_{W∈(0,1)} W·γ^{E_{j(W)}}` with `j(W) = min{j : E_{j+1} > E/(1−W)}`.
///
/// `j(W)` is a step function, so only the right endpoints
/// `W_j = 1 − E/E_{j+1}` of non-empty steps are evaluated, each with value
/// `W_j·γ^{E_j}`. A finite spectrum adds the last step `W → 1` with value
/// `γ^{E_n}`. The scan stops once `γ^{E_j}` falls below the best candidate,
/// since every later candidate is bounded by it.
pub fn eps_c(cat: &Spectrum, energy: f64, gamma: GammaConvention) -> Result<EpsC> {
    let ground = cat.ground_energy();
    if ground < 0.0 {
        return Err(Error::InvalidParameter(format!("energy bounds need non-negative levels, ground is {ground}")));
    }
    if !(energy >= ground) || !energy.is_finite() {
        return Err(Error::InfeasibleEnergy { budget: energy, ground });
    }
    if let Spectrum::Unbounded(s) = cat {
        if s.tail_gap().is_none() {
            return Err(Error::EnvelopeNotTerminated(0));
        }
    }
    let scale = gamma.exponent_scale() * cat.beta();
    let weight = |e: f64| (-scale * e).exp();
    let mut best = EpsC { value: 0.0, witness_w: 0.0, witness_level: 0 };
    let len = cat.len();

    for j in 1..=MAX_LEVELS {
        let ej = cat.level(j);
        let envelope = weight(ej);
        if len == Some(j) {
            if envelope > best.value {
                best = EpsC { value: envelope, witness_w: 1.0, witness_level: j };
            }
            return Ok(best);
        }
        if best.value > 0.0 && envelope < best.value {
            return Ok(best);
        }
        let next = cat.level(j + 1);
        if next < ej {
            return Err(Error::InvalidParameter(format!("levels must ascend; E_{} > E_{}", j, j + 1)));
        }
        if next > energy && next > ej {
            let w = 1.0 - energy / next;
            let v = w * envelope;
            if v > best.value {
                best = EpsC { value: v, witness_w: w, witness_level: j };
            }
        }
    }
    Err(Error::EnvelopeNotTerminated(MAX_LEVELS))
}

fn energy_report(kind: BoundKind, a: f64, cat: &Spectrum, energy: f64) -> Result<BoundReport> {
    let eps = eps_c(cat, energy, GammaConvention::ExpBeta)?;
    let f = f_of(a)?;
    let z = cat.partition_function()?;
    let bound = 0.5 * f * f * eps.value * eps.value / z.value;
    let mut r = BoundReport::new(kind, bound, DistanceConvention::TraceDistance, Some(GammaConvention::ExpBeta));
    r.set("A", a);
    r.set("f_A", f);
    r.set("eps_C", eps.value);
    r.set("witness_W", eps.witness_w);
    r.set("witness_level_j", eps.witness_level as f64);
    r.set("Z_C", z.value);
    r.set("E", energy);
    Ok(r)
}

/// `½·f(A)²·ε_C²/Z_C` with `A = Z_S/e^{−βE_max^S}`.
pub fn energy_bound(sys: &FiniteSpectrum, cat: &Spectrum, energy: f64) -> Result<BoundReport> {
    check_same_beta(sys.beta(), cat.beta())?;
    let a = amplification(sys);
    let mut r = energy_report(BoundKind::EnergyDiag, a, cat, energy)?;
    r.set("Z_S", sys.partition_function());
    Ok(r)
}

/// `(1/9)·ε₁²/Z_C` in ℓ1 units with `γ = e^{−β/2}`; the two-level system
/// and split constant `1/3` are built in.
pub fn energy_bound_maintext(cat: &Spectrum, energy: f64) -> Result<BoundReport> {
    let eps = eps_c(cat, energy, GammaConvention::ExpHalfBeta)?;
    let z = cat.partition_function()?;
    let bound = eps.value * eps.value / (9.0 * z.value);
    let mut r = BoundReport::new(BoundKind::EnergyMaintext, bound, DistanceConvention::L1, Some(GammaConvention::ExpHalfBeta));
    r.set("eps_C", eps.value);
    r.set("witness_W", eps.witness_w);
    r.set("witness_level_j", eps.witness_level as f64);
    r.set("Z_C", z.value);
    r.set("E", energy);
    r.notes.push("ℓ1 distance; bound_canonical is the trace distance".into());
    Ok(r)
}

/// `½·f(2^{κ₂})²·ε_C²/Z_C`, clamped to zero when `2^{κ₂} < 2`.
pub fn energy_bound_arbitrary(kappa2: f64, cat: &Spectrum, energy: f64) -> Result<BoundReport> {
    if !kappa2.is_finite() {
        return Err(Error::InvalidParameter(format!("κ₂ must be finite, got {kappa2}")));
    }
    let a = kappa2.exp2();
    if a < 2.0 {
        // Still validate the energy budget.
        let eps = eps_c(cat, energy, GammaConvention::ExpBeta)?;
        let mut r = BoundReport::new(BoundKind::EnergyArbitrary, 0.0, DistanceConvention::TraceDistance, Some(GammaConvention::ExpBeta));
        r.set("kappa", kappa2);
        r.set("A", a);
        r.set("eps_C", eps.value);
        r.notes.push("2^κ₂ < 2: the split inequality is unproven, bound is vacuous".into());
        return Ok(r);
    }
    let mut r = energy_report(BoundKind::EnergyArbitrary, a, cat, energy)?;
    r.set("kappa", kappa2);
    Ok(r)
}

/// Normalization slack for [`primal_feasible_distance`].
pub const PRIMAL_NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// `Σ|ω_i − ω′_i|` if `(ω, ω′)` is feasible for the energy-constrained
/// primal: both normalized, `Σ E_i ω_i ≤ E` and
/// `Σ √ω′_i·e^{−βE_i/2} ≥ √A·Σ √ω_i·e^{−βE_i/2}`.
pub fn primal_feasible_distance(cat: &Spectrum, energy: f64, a: f64, omega: &[f64], omega_prime: &[f64]) -> Option<f64> {
    if omega.len() != omega_prime.len() || cat.len().is_some_and(|n| omega.len() > n) {
        return None;
    }
    let valid = |v: &[f64]| {
        v.iter().all(|x| *x >= 0.0 && x.is_finite())
            && (v.iter().sum::<f64>() - 1.0).abs() <= PRIMAL_NORMALIZATION_TOLERANCE
    };
    if !valid(omega) || !valid(omega_prime) {
        return None;
    }
    let beta = cat.beta();
    let mut mean = 0.0;
    let (mut lhs, mut rhs, mut l1) = (0.0, 0.0, 0.0);
    for (i, (w, wp)) in omega.iter().zip(omega_prime).enumerate() {
        let e = cat.level(i + 1);
        let g = (-0.5 * beta * e).exp();
        mean += e * w;
        lhs += wp.sqrt() * g;
        rhs += w.sqrt() * g;
        l1 += (w - wp).abs();
    }
    (mean <= energy && lhs >= a.sqrt() * rhs).then_some(l1)
}

//! Probability vectors and the majorization order.
//!
//! Majorization is only ever evaluated on descending-sorted vectors; callers
//! sort explicitly with [`ProbVec::sort_desc`]. Zero entries are kept so that
//! lengths line up across [`tensor_uniform`] and [`pad_pure`].

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Eigenvalue list of a diagonal state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec<T> {
    entries: Vec<T>,
    sorted_desc: bool,
}

impl<T: Scalar> ProbVec<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, e) in entries.iter().enumerate() {
            if !e.is_finite_value() || *e < T::zero() {
                return Err(Error::InvalidEntry { index });
            }
        }
        let sum = entries.iter().cloned().fold(T::zero(), |a, b| a + b);
        if (sum.clone() - T::one()).abs_val() > T::default_tolerance() {
            return Err(Error::NotNormalized { sum: format!("{sum:?}") });
        }
        let sorted_desc = is_non_increasing(&entries);
        Ok(Self { entries, sorted_desc })
    }

    /// Builds a vector whose validity the caller has already established.
    pub(crate) fn from_trusted(entries: Vec<T>) -> Self {
        let sorted_desc = is_non_increasing(&entries);
        Self { entries, sorted_desc }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let v = T::one() / T::from_usize(n);
        Ok(Self::from_trusted(vec![v; n]))
    }

    /// `(1, 0, …, 0)` of length `n`.
    pub fn pure(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let mut e = vec![T::zero(); n];
        e[0] = T::one();
        Ok(Self::from_trusted(e))
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_sorted_desc(&self) -> bool {
        self.sorted_desc
    }

    pub fn sort_desc(&self) -> Self {
        let mut e = self.entries.clone();
        e.sort_by(|a, b| b.partial_cmp(a).expect("entries are finite"));
        Self { entries: e, sorted_desc: true }
    }

    /// Number of strictly positive entries.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|e| **e > T::zero()).count()
    }

    /// Appends zeros up to length `n`.
    pub fn padded_to(&self, n: usize) -> Self {
        let mut e = self.entries.clone();
        if e.len() < n {
            e.resize(n, T::zero());
        }
        Self::from_trusted(e)
    }

    pub fn to_f64(&self) -> ProbVec<f64> {
        ProbVec::from_trusted(self.entries.iter().map(Scalar::to_f64).collect())
    }

    /// Kronecker product `self ⊗ other` in row-major index order.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut e = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            for b in &other.entries {
                e.push(a.clone() * b.clone());
            }
        }
        Self::from_trusted(e)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(Scalar::to_json).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("expected a JSON array".into()))?;
        let entries = arr.iter().map(T::from_json).collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl<T: Scalar> Serialize for ProbVec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ProbVec<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(D::Error::custom)
    }
}

fn is_non_increasing<T: PartialOrd>(e: &[T]) -> bool {
    e.windows(2).all(|w| w[0] >= w[1])
}

fn require_sorted<T: Scalar>(v: &ProbVec<T>) -> Result<()> {
    if v.sorted_desc {
        Ok(())
    } else {
        Err(Error::NotSorted)
    }
}

/// `v ⊗ I/m`: each entry becomes `m` copies of `v_i / m`, order preserved.
pub fn tensor_uniform<T: Scalar>(v: &ProbVec<T>, m: usize) -> Result<ProbVec<T>> {
    if m == 0 {
        return Err(Error::ZeroMultiplier);
    }
    require_sorted(v)?;
    let mm = T::from_usize(m);
    let mut e = Vec::with_capacity(v.len() * m);
    for x in &v.entries {
        let part = x.clone() / mm.clone();
        e.extend(std::iter::repeat_n(part, m));
    }
    Ok(ProbVec { entries: e, sorted_desc: true })
}

/// `v ⊗ |0⟩⟨0|` on an `m`-level system: `v` followed by `n(m−1)` zeros.
pub fn pad_pure<T: Scalar>(v: &ProbVec<T>, m: usize) -> Result<ProbVec<T>> {
    if m == 0 {
        return Err(Error::ZeroMultiplier);
    }
    require_sorted(v)?;
    Ok(v.padded_to(v.len() * m))
}

pub fn majorizes<T: Scalar>(p: &ProbVec<T>, q: &ProbVec<T>) -> Result<bool> {
    majorizes_with_tolerance(p, q, &T::default_tolerance())
}

/// `p ≻ q`: every prefix sum of `p` dominates that of `q`, allowing `tol`
/// slack in `q`'s favor.
pub fn majorizes_with_tolerance<T: Scalar>(p: &ProbVec<T>, q: &ProbVec<T>, tol: &T) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
    }
    require_sorted(p)?;
    require_sorted(q)?;
    let mut sp = T::zero();
    let mut sq = T::zero();
    for (a, b) in p.entries.iter().zip(&q.entries) {
        sp = sp + a.clone();
        sq = sq + b.clone();
        if sp.clone() + tol.clone() < sq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `½ Σ |p_i − q_i|`.
pub fn trace_distance<T: Scalar>(p: &ProbVec<T>, q: &ProbVec<T>) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
    }
    let total = p
        .entries
        .iter()
        .zip(&q.entries)
        .map(|(a, b)| (a.clone() - b.clone()).abs_val())
        .fold(T::zero(), |acc, x| acc + x);
    Ok(total / T::from_usize(2))
}

/// Input/output catalyst spectra for an `m`-level system, both descending.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalystPair<T> {
    omega_in: ProbVec<T>,
    omega_out: ProbVec<T>,
    system_dim: usize,
}

impl<T: Scalar> CatalystPair<T> {
    pub fn new(omega_in: ProbVec<T>, omega_out: ProbVec<T>, system_dim: usize) -> Result<Self> {
        if omega_in.len() != omega_out.len() {
            return Err(Error::LengthMismatch { left: omega_in.len(), right: omega_out.len() });
        }
        if system_dim == 0 {
            return Err(Error::ZeroMultiplier);
        }
        require_sorted(&omega_in)?;
        require_sorted(&omega_out)?;
        Ok(Self { omega_in, omega_out, system_dim })
    }

    pub fn omega_in(&self) -> &ProbVec<T> {
        &self.omega_in
    }

    pub fn omega_out(&self) -> &ProbVec<T> {
        &self.omega_out
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// Catalyst dimension `n`.
    pub fn dim(&self) -> usize {
        self.omega_in.len()
    }

    pub fn distance(&self) -> T {
        trace_distance(&self.omega_in, &self.omega_out).expect("lengths checked at construction")
    }
}

impl CatalystPair<Rational> {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "m": self.system_dim,
            "omega_in": self.omega_in.to_json(),
            "omega_out": self.omega_out.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"m\"".into()))?;
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
        let omega_in = ProbVec::from_json(field("omega_in")?)?;
        let omega_out = ProbVec::from_json(field("omega_out")?)?;
        Self::new(omega_in, omega_out, m as usize)
    }
}

/// Whether `ω ⊗ I/m ≻ ω′ ⊗ |0⟩⟨0|`.
pub fn check_transformation<T: Scalar>(pair: &CatalystPair<T>) -> Result<bool> {
    let lhs = tensor_uniform(&pair.omega_in, pair.system_dim)?;
    let rhs = pad_pure(&pair.omega_out, pair.system_dim)?;
    majorizes(&lhs, &rhs)
}

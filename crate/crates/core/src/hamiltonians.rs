//! Energy spectra at a fixed inverse temperature.
//!
//! Degenerate levels are written out by repetition. Unbounded spectra are
//! described by a level function `j ↦ E_j` (1-based) plus a declared
//! eventual level gap `Δ`, which is what certifies that the partition
//! function sum converges.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::spectra::ProbVec;

/// Summation stops once the geometric tail bound drops below this fraction
/// of the partial sum.
pub const TAIL_RELATIVE_TOLERANCE: f64 = 1e-15;

/// Hard cap on the number of levels visited by any unbounded summation.
pub const MAX_LEVELS: usize = 10_000_000;

pub const SCHEMA: &str = "thermocat/1";

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpectrum {
    levels: Vec<f64>,
    beta: f64,
}

impl FiniteSpectrum {
    pub fn new(mut levels: Vec<f64>, beta: f64) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyVector);
        }
        check_beta(beta)?;
        if let Some(i) = levels.iter().position(|e| !e.is_finite()) {
            return Err(Error::InvalidEntry { index: i });
        }
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { levels, beta })
    }

    /// `n` degenerate levels at energy zero.
    pub fn trivial(n: usize, beta: f64) -> Result<Self> {
        Self::new(vec![0.0; n], beta)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.levels[0]
    }

    pub fn max_energy(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|e| *e == self.levels[0])
    }

    pub fn partition_function(&self) -> f64 {
        neumaier_sum(self.levels.iter().map(|e| (-self.beta * e).exp()))
    }

    /// Gibbs weights `e^{−βE_i}/Z`, descending because levels ascend.
    pub fn thermal_weights(&self) -> ThermalWeights<f64> {
        // Shifting by the ground energy keeps the exponentials in range.
        let e0 = self.ground_energy();
        let raw: Vec<f64> = self.levels.iter().map(|e| (-self.beta * (e - e0)).exp()).collect();
        let shifted_z = neumaier_sum(raw.iter().copied());
        let mut weights: Vec<f64> = raw.iter().map(|w| w / shifted_z).collect();
        // Monotone rounding can break ties in the wrong direction.
        for i in 1..weights.len() {
            if weights[i] > weights[i - 1] {
                weights[i] = weights[i - 1];
            }
        }
        ThermalWeights {
            weights: ProbVec::from_trusted(weights),
            partition_function: shifted_z * (-self.beta * e0).exp(),
        }
    }

    /// Exact Gibbs weights, available only for a fully degenerate spectrum
    /// where they are uniform and `Z = n·e^{−βE}` collapses to the dimension
    /// when the common energy is zero.
    pub fn thermal_weights_exact(&self) -> Option<ThermalWeights<Rational>> {
        if !self.is_trivial() || self.levels[0] != 0.0 {
            return None;
        }
        Some(ThermalWeights {
            weights: ProbVec::uniform(self.dim()).ok()?,
            partition_function: Rational::from_usize(self.dim()),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({"kind": "finite", "levels": self.levels, "beta": self.beta})
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalWeights<T> {
    pub weights: ProbVec<T>,
    pub partition_function: T,
}

/// Level function of an unbounded spectrum.
#[derive(Clone)]
pub enum LevelFamily {
    /// `E_j = ħω·(j−1)`, ground state at zero.
    Harmonic { hbar_omega: f64 },
    /// `E_j = c·(j−1) + E₀`.
    LinearOffset { slope: f64, offset: f64 },
    /// Listed levels `E_1..E_k`, then continued linearly with `step`.
    Tabulated { prefix: Vec<f64>, step: f64 },
    Custom { name: String, level: Arc<dyn Fn(usize) -> f64 + Send + Sync> },
}

impl fmt::Debug for LevelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Harmonic { hbar_omega } => f.debug_struct("Harmonic").field("hbar_omega", hbar_omega).finish(),
            Self::LinearOffset { slope, offset } => {
                f.debug_struct("LinearOffset").field("slope", slope).field("offset", offset).finish()
            }
            Self::Tabulated { prefix, step } => {
                f.debug_struct("Tabulated").field("prefix", prefix).field("step", step).finish()
            }
            Self::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

impl LevelFamily {
    /// `E_j` for `j ≥ 1`.
    pub fn level(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        match self {
            Self::Harmonic { hbar_omega } => hbar_omega * (j - 1) as f64,
            Self::LinearOffset { slope, offset } => slope * (j - 1) as f64 + offset,
            Self::Tabulated { prefix, step } => {
                if j <= prefix.len() {
                    prefix[j - 1]
                } else {
                    prefix.last().copied().unwrap_or(0.0) + step * (j - prefix.len()) as f64
                }
            }
            Self::Custom { level, .. } => level(j),
        }
    }
}

#[derive(Debug, Clone)]
pub struct UnboundedSpectrum {
    family: LevelFamily,
    beta: f64,
    tail_gap: Option<f64>,
    closed_form_z: Option<f64>,
}

/// Partition function value with the width of its rigorous bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionFunction {
    pub value: f64,
    pub bracket_width: f64,
}

impl PartitionFunction {
    pub fn lower(&self) -> f64 {
        self.value - self.bracket_width / 2.0
    }

    pub fn upper(&self) -> f64 {
        self.value + self.bracket_width / 2.0
    }

    pub fn contains(&self, z: f64) -> bool {
        self.lower() <= z && z <= self.upper()
    }
}

impl UnboundedSpectrum {
    pub fn new(family: LevelFamily, beta: f64, tail_gap: Option<f64>, closed_form_z: Option<f64>) -> Result<Self> {
        check_beta(beta)?;
        if let Some(g) = tail_gap {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter(format!("tail gap must be positive, got {g}")));
            }
        }
        Ok(Self { family, beta, tail_gap, closed_form_z })
    }

    /// `E_j = ħω(j−1)` with the gap and closed-form `Z = 1/(1−e^{−βħω})` filled in.
    pub fn harmonic(hbar_omega: f64, beta: f64) -> Result<Self> {
        if !(hbar_omega > 0.0 && hbar_omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("ħω must be positive, got {hbar_omega}")));
        }
        let z = 1.0 / -(-beta * hbar_omega).exp_m1();
        Self::new(LevelFamily::Harmonic { hbar_omega }, beta, Some(hbar_omega), Some(z))
    }

    /// `E_j = c(j−1) + E₀` with `Z = e^{−βE₀}/(1−e^{−βc})`.
    pub fn linear_offset(slope: f64, offset: f64, beta: f64) -> Result<Self> {
        if !(slope > 0.0 && slope.is_finite()) || !offset.is_finite() {
            return Err(Error::InvalidParameter(format!("need slope > 0 and finite offset, got ({slope}, {offset})")));
        }
        let z = (-beta * offset).exp() / -(-beta * slope).exp_m1();
        Self::new(LevelFamily::LinearOffset { slope, offset }, beta, Some(slope), Some(z))
    }

    pub fn family(&self) -> &LevelFamily {
        &self.family
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tail_gap(&self) -> Option<f64> {
        self.tail_gap
    }

    pub fn closed_form_z(&self) -> Option<f64> {
        self.closed_form_z
    }

    pub fn level(&self, j: usize) -> f64 {
        self.family.level(j)
    }

    /// The closed form when one is attached, otherwise the certified sum.
    pub fn partition_function(&self) -> Result<PartitionFunction> {
        match self.closed_form_z {
            Some(z) => Ok(PartitionFunction { value: z, bracket_width: 0.0 }),
            None => self.partition_function_summed(),
        }
    }

    /// Sums `e^{−βE_j}` until the geometric tail bound
    /// `e^{−βE_{j+1}}/(1−e^{−βΔ})` is below `1e−15` of the partial sum, and
    /// returns the midpoint of `[partial − r, partial + tail + r]` where `r`
    /// covers floating-point rounding of the partial sum.
    pub fn partition_function_summed(&self) -> Result<PartitionFunction> {
        let gap = self.tail_gap.ok_or(Error::PartitionFunctionNotCertified)?;
        let ratio_denominator = -(-self.beta * gap).exp_m1();
        let mut acc = Neumaier::default();
        for j in 1..=MAX_LEVELS {
            acc.add((-self.beta * self.level(j)).exp());
            let partial = acc.total();
            let tail = (-self.beta * self.level(j + 1)).exp() / ratio_denominator;
            if partial > 0.0 && tail < TAIL_RELATIVE_TOLERANCE * partial {
                let rounding = 4.0 * f64::EPSILON * partial;
                let lo = partial - rounding;
                let hi = partial + tail + rounding;
                return Ok(PartitionFunction { value: 0.5 * (lo + hi), bracket_width: hi - lo });
            }
        }
        Err(Error::PartitionFunctionNotCertified)
    }

    pub fn to_json(&self) -> Value {
        let (family, params) = match &self.family {
            LevelFamily::Harmonic { hbar_omega } => ("harmonic", json!({"hbar_omega": hbar_omega})),
            LevelFamily::LinearOffset { slope, offset } => ("linear_offset", json!({"slope": slope, "offset": offset})),
            LevelFamily::Tabulated { prefix, step } => ("custom", json!({"prefix": prefix, "step": step})),
            LevelFamily::Custom { name, .. } => ("custom", json!({"name": name})),
        };
        json!({
            "kind": "unbounded",
            "family": family,
            "params": params,
            "beta": self.beta,
            "tail_gap": self.tail_gap,
        })
    }
}

/// Any catalyst spectrum the bounds accept.
#[derive(Debug, Clone)]
pub enum Spectrum {
    Finite(FiniteSpectrum),
    Unbounded(UnboundedSpectrum),
}

impl Spectrum {
    pub fn beta(&self) -> f64 {
        match self {
            Self::Finite(s) => s.beta,
            Self::Unbounded(s) => s.beta,
        }
    }

    /// `E_j` for `1 ≤ j ≤ len`.
    pub fn level(&self, j: usize) -> f64 {
        match self {
            Self::Finite(s) => s.levels[j - 1],
            Self::Unbounded(s) => s.level(j),
        }
    }

    /// Number of levels, `None` when unbounded.
    pub fn len(&self) -> Option<usize> {
        match self {
            Self::Finite(s) => Some(s.dim()),
            Self::Unbounded(_) => None,
        }
    }

    pub fn ground_energy(&self) -> f64 {
        self.level(1)
    }

    pub fn partition_function(&self) -> Result<PartitionFunction> {
        match self {
            Self::Finite(s) => Ok(PartitionFunction { value: s.partition_function(), bracket_width: 0.0 }),
            Self::Unbounded(s) => s.partition_function(),
        }
    }

    /// Same spectrum at another inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Ok(match self {
            Self::Finite(s) => Self::Finite(FiniteSpectrum::new(s.levels.clone(), beta)?),
            Self::Unbounded(s) => {
                let z = match &s.family {
                    LevelFamily::Harmonic { hbar_omega } => Some(1.0 / -(-beta * hbar_omega).exp_m1()),
                    LevelFamily::LinearOffset { slope, offset } => {
                        Some((-beta * offset).exp() / -(-beta * slope).exp_m1())
                    }
                    _ => None,
                };
                Self::Unbounded(UnboundedSpectrum::new(s.family.clone(), beta, s.tail_gap, z)?)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Finite(s) => s.to_json(),
            Self::Unbounded(s) => s.to_json(),
        }
    }

    /// Parses the spectrum schema:
    /// `{"kind":"finite","levels":[…],"beta":…}` or
    /// `{"kind":"unbounded","family":"harmonic"|"linear_offset"|"custom","params":{…},"beta":…,"tail_gap":…}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let beta = v
            .get("beta")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Parse("spectrum needs numeric \"beta\"".into()))?;
        match v.get("kind").and_then(Value::as_str) {
            Some("finite") => {
                let levels = v
                    .get("levels")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("finite spectrum needs \"levels\"".into()))?
                    .iter()
                    .map(|x| x.as_f64().ok_or_else(|| Error::Parse(format!("bad level {x}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Finite(FiniteSpectrum::new(levels, beta)?))
            }
            Some("unbounded") => {
                let params = v.get("params").cloned().unwrap_or(json!({}));
                let num = |k: &str| {
                    params
                        .get(k)
                        .and_then(Value::as_f64)
                        .ok_or_else(|| Error::Parse(format!("missing numeric param {k:?}")))
                };
                let tail_gap = v.get("tail_gap").and_then(Value::as_f64);
                let spec = match v.get("family").and_then(Value::as_str) {
                    Some("harmonic") => UnboundedSpectrum::harmonic(num("hbar_omega")?, beta)?,
                    Some("linear_offset") => UnboundedSpectrum::linear_offset(num("slope")?, num("offset")?, beta)?,
                    Some("custom") => {
                        let prefix = params
                            .get("prefix")
                            .and_then(Value::as_array)
                            .ok_or_else(|| Error::Parse("custom family needs \"prefix\" levels".into()))?
                            .iter()
                            .map(|x| x.as_f64().ok_or_else(|| Error::Parse(format!("bad level {x}"))))
                            .collect::<Result<Vec<_>>>()?;
                        let step = num("step")?;
                        if prefix.is_empty() || prefix.windows(2).any(|w| w[0] > w[1]) || !(step > 0.0) {
                            return Err(Error::Parse("custom levels must ascend with a positive step".into()));
                        }
                        UnboundedSpectrum::new(LevelFamily::Tabulated { prefix, step }, beta, tail_gap.or(Some(step)), None)?
                    }
                    other => return Err(Error::Parse(format!("unknown family {other:?}"))),
                };
                Ok(Self::Unbounded(spec))
            }
            other => Err(Error::Parse(format!("unknown spectrum kind {other:?}"))),
        }
    }
}

/// Energy `Ē + σ/√ε` above which any distribution with mean `Ē` and
/// variance `σ²` carries probability at most `ε`.
pub fn chebyshev_cutoff(mean: f64, variance: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0,1), got {eps}")));
    }
    if !(variance >= 0.0 && variance.is_finite()) || !mean.is_finite() {
        return Err(Error::InvalidParameter(format!("need finite mean and variance ≥ 0, got ({mean}, {variance})")));
    }
    Ok(mean + (variance / eps).sqrt())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("β must be positive and finite, got {beta}")))
    }
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for x in xs {
        acc.add(x);
    }
    acc.total()
}

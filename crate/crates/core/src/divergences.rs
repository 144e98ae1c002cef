//! Rényi divergences `D_α`, in bits.
//!
//! Diagonal (classical) inputs are supported for every `α ∈ [0, ∞]`. The
//! matrix path covers `α = 1/2` and `α = ∞` only, which is all the
//! state-dependent bounds need.
//!
//! Zero-probability conventions: terms with `p_i = 0` contribute nothing for
//! `α > 0`; `p_i > 0 = q_i` gives `+∞` for `α ≥ 1` and contributes nothing
//! for `α < 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::spectra::ProbVec;

/// All logarithms are base 2 so that `2^{κ}` inverts them.
pub const LOG_BASE: f64 = 2.0;

/// Largest matrix dimension the eigensolver path accepts.
pub const MAX_MATRIX_DIM: usize = 16;

/// Slack under which a divergence decrease still counts as monotone.
pub const MONOTONICITY_TOLERANCE: f64 = 1e-10;

const STATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Zero,
    /// Finite positive `α ≠ 1`.
    Interval(f64),
    One,
    Infinity,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidParameter(format!("α must be in [0, ∞], got {value}")));
        }
        Ok(if value == 0.0 {
            Self::Zero
        } else if value == 1.0 {
            Self::One
        } else if value.is_infinite() {
            Self::Infinity
        } else {
            Self::Interval(value)
        })
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Interval(a) => *a,
            Self::One => 1.0,
            Self::Infinity => f64::INFINITY,
        }
    }
}

/// Finite real or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DivergenceValue(f64);

impl DivergenceValue {
    pub const INFINITE: Self = Self(f64::INFINITY);

    pub fn finite(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        Self(x)
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

fn log2(x: f64) -> f64 {
    x.log2()
}

/// `log Σ exp(x_i)` without overflow.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

pub fn d_alpha_diag(p: &ProbVec<f64>, q: &ProbVec<f64>, alpha: Alpha) -> Result<DivergenceValue> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
    }
    let pairs = || p.entries().iter().zip(q.entries()).filter(|(pi, _)| **pi > 0.0);
    let unsupported = pairs().any(|(_, qi)| *qi == 0.0);
    let v = match alpha {
        Alpha::Zero => {
            let mass: f64 = pairs().map(|(_, qi)| *qi).sum();
            if mass == 0.0 {
                return Ok(DivergenceValue::INFINITE);
            }
            -log2(mass)
        }
        Alpha::One => {
            if unsupported {
                return Ok(DivergenceValue::INFINITE);
            }
            pairs().map(|(pi, qi)| pi * log2(pi / qi)).sum()
        }
        Alpha::Infinity => {
            if unsupported {
                return Ok(DivergenceValue::INFINITE);
            }
            let ratio = pairs().map(|(pi, qi)| pi / qi).fold(0.0, f64::max);
            log2(ratio)
        }
        Alpha::Interval(a) => {
            if a > 1.0 && unsupported {
                return Ok(DivergenceValue::INFINITE);
            }
            let logs: Vec<f64> = pairs()
                .filter(|(_, qi)| **qi > 0.0)
                .map(|(pi, qi)| a * pi.ln() + (1.0 - a) * qi.ln())
                .collect();
            if logs.is_empty() {
                return Ok(DivergenceValue::INFINITE);
            }
            log_sum_exp(&logs) / (a - 1.0) / std::f64::consts::LN_2
        }
    };
    Ok(DivergenceValue::finite(v))
}

/// Density matrix of dimension at most [`MAX_MATRIX_DIM`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianState {
    matrix: CMatrix,
}

impl HermitianState {
    /// Checks Hermiticity and unit trace to `1e−12`, and eigenvalues
    /// `≥ −1e−12`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.dim();
        if n == 0 || n > MAX_MATRIX_DIM {
            return Err(Error::InvalidState(format!("dimension {n} outside 1..={MAX_MATRIX_DIM}")));
        }
        if matrix.max_hermitian_defect() > STATE_TOLERANCE {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOLERANCE || tr.im.abs() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let e = hermitian_eigen(&matrix);
        if e.values[0] < -STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {}", e.values[0])));
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(p: &ProbVec<f64>) -> Result<Self> {
        Self::new(CMatrix::diagonal(p.entries()))
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = psi.len();
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Zeroes the off-diagonal elements.
    pub fn dephased(&self) -> Self {
        Self { matrix: self.matrix.dephased() }
    }
}

fn check_dims(rho: &HermitianState, sigma: &HermitianState) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::LengthMismatch { left: rho.dim(), right: sigma.dim() });
    }
    Ok(())
}

/// `log₂ min{λ : ρ ≤ λσ}`, the largest eigenvalue of `σ^{−1/2} ρ σ^{−1/2}`
/// on the support of `σ`; `+∞` when `ρ` leaks outside that support.
pub fn d_inf_matrix(rho: &HermitianState, sigma: &HermitianState) -> Result<DivergenceValue> {
    check_dims(rho, sigma)?;
    let es = hermitian_eigen(&sigma.matrix);
    let cutoff = STATE_TOLERANCE.max(es.values.last().copied().unwrap_or(0.0) * 1e-14);
    // Weight of ρ on the kernel of σ.
    let kernel = es.apply(|x| if x <= cutoff { 1.0 } else { 0.0 });
    let leak = kernel.mul(&rho.matrix).trace().re;
    if leak > 1e-10 {
        return Ok(DivergenceValue::INFINITE);
    }
    let inv_sqrt = es.apply(|x| if x <= cutoff { 0.0 } else { 1.0 / x.sqrt() });
    let sandwiched = inv_sqrt.mul(&rho.matrix).mul(&inv_sqrt);
    let top = hermitian_eigen(&sandwiched).values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(DivergenceValue::INFINITE);
    }
    Ok(DivergenceValue::finite(log2(top)))
}

/// `−2 log₂ tr[(ρ^{1/2} σ ρ^{1/2})^{1/2}]`.
pub fn d_half_matrix(rho: &HermitianState, sigma: &HermitianState) -> Result<DivergenceValue> {
    check_dims(rho, sigma)?;
    let root_rho = hermitian_eigen(&rho.matrix).apply(|x| x.max(0.0).sqrt());
    let inner = root_rho.mul(&sigma.matrix).mul(&root_rho);
    let fidelity_root: f64 = hermitian_eigen(&inner).values.iter().map(|x| x.max(0.0).sqrt()).sum();
    if fidelity_root <= 0.0 {
        return Ok(DivergenceValue::INFINITE);
    }
    Ok(DivergenceValue::finite(-2.0 * log2(fidelity_root)))
}

/// A diagonal (classical) state or a general density matrix.
#[derive(Debug, Clone)]
pub enum StateInput {
    Diagonal(ProbVec<f64>),
    Matrix(HermitianState),
}

fn d_against_thermal(state: &StateInput, tau: &ProbVec<f64>, alpha: Alpha) -> Result<DivergenceValue> {
    match state {
        StateInput::Diagonal(p) => d_alpha_diag(p, tau, alpha),
        StateInput::Matrix(rho) => {
            let sigma = HermitianState::diagonal(tau)?;
            match alpha {
                Alpha::Infinity => d_inf_matrix(rho, &sigma),
                Alpha::Interval(a) if a == 0.5 => d_half_matrix(rho, &sigma),
                other => Err(Error::InvalidParameter(format!("matrix divergence only for α ∈ {{1/2, ∞}}, got {other:?}"))),
            }
        }
    }
}

fn kappa(rho_in: &StateInput, rho_out: &StateInput, tau: &ProbVec<f64>, alpha: Alpha) -> Result<f64> {
    if tau.entries().iter().any(|t| *t <= 0.0) {
        return Err(Error::InvalidParameter("thermal weights must be strictly positive".into()));
    }
    let d_out = d_against_thermal(rho_out, tau, alpha)?.value();
    let d_in = d_against_thermal(rho_in, tau, alpha)?.value();
    match (d_out.is_infinite(), d_in.is_infinite()) {
        (false, false) => Ok(d_out - d_in),
        (true, false) => Ok(f64::INFINITY),
        _ => Err(Error::InvalidParameter("input divergence is infinite; κ is undefined".into())),
    }
}

/// `D_∞(ρ′‖τ) − D_∞(ρ‖τ)`.
pub fn kappa1(rho_in: &StateInput, rho_out: &StateInput, tau: &ProbVec<f64>) -> Result<f64> {
    kappa(rho_in, rho_out, tau, Alpha::Infinity)
}

/// `D_{1/2}(ρ′‖τ) − D_{1/2}(ρ‖τ)`.
pub fn kappa2(rho_in: &StateInput, rho_out: &StateInput, tau: &ProbVec<f64>) -> Result<f64> {
    kappa(rho_in, rho_out, tau, Alpha::Interval(0.5))
}

/// Grid of `α` values probed by [`monotonicity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid(pub Vec<Alpha>);

impl Default for AlphaGrid {
    fn default() -> Self {
        let finite = [0.1, 0.25, 0.5, 0.75, 0.9, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0];
        let mut v = vec![Alpha::Zero];
        v.extend(finite.iter().filter(|a| **a < 1.0).map(|a| Alpha::Interval(*a)));
        v.push(Alpha::One);
        v.extend(finite.iter().filter(|a| **a > 1.0).map(|a| Alpha::Interval(*a)));
        v.push(Alpha::Infinity);
        Self(v)
    }
}

impl AlphaGrid {
    /// The grid with the limit points `0`, `1`, `∞` guaranteed present.
    fn with_limits(&self) -> Vec<Alpha> {
        let mut v = self.0.clone();
        for lim in [Alpha::Zero, Alpha::One, Alpha::Infinity] {
            if !v.contains(&lim) {
                v.push(lim);
            }
        }
        v
    }
}

/// Outcome of checking `D_α(p_in‖τ) ≥ D_α(p_out‖τ)` over a finite grid.
///
/// A pass is a necessary-condition verdict only: no finite grid covers every
/// `α ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityVerdict {
    pub pass: bool,
    /// `α` with the most negative gap, on failure.
    pub witness_alpha: Option<f64>,
    /// Most negative `D_α(p_in‖τ) − D_α(p_out‖τ)` on failure.
    pub gap: Option<f64>,
    pub caveat: &'static str,
    #[serde(skip)]
    pub gaps: Vec<(f64, f64)>,
}

pub const GRID_CAVEAT: &str = "grid-necessary-only";

pub fn monotonicity_check(
    p_in: &ProbVec<f64>,
    p_out: &ProbVec<f64>,
    tau: &ProbVec<f64>,
    alphas: &AlphaGrid,
) -> Result<MonotonicityVerdict> {
    if p_in.len() != tau.len() || p_out.len() != tau.len() {
        return Err(Error::LengthMismatch { left: p_in.len().max(p_out.len()), right: tau.len() });
    }
    if tau.entries().iter().any(|t| *t <= 0.0) {
        return Err(Error::InvalidParameter("thermal weights must be strictly positive".into()));
    }
    let mut gaps = Vec::new();
    for alpha in alphas.with_limits() {
        let d_in = d_alpha_diag(p_in, tau, alpha)?.value();
        let d_out = d_alpha_diag(p_out, tau, alpha)?.value();
        let gap = if d_in == d_out { 0.0 } else { d_in - d_out };
        gaps.push((alpha.value(), gap));
    }
    gaps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let worst = gaps
        .iter()
        .copied()
        .filter(|(_, g)| *g < -MONOTONICITY_TOLERANCE)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    Ok(MonotonicityVerdict {
        pass: worst.is_none(),
        witness_alpha: worst.map(|w| w.0),
        gap: worst.map(|w| w.1),
        caveat: GRID_CAVEAT,
        gaps,
    })
}

//! Data behind the figures and the verdict table.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{dim_bound_diag, energy_bound};
use crate::catalysts::{optimal_error, optimal_pair, vdh_state, FamilyParams};
use crate::error::{Error, Result};
use crate::hamiltonians::{FiniteSpectrum, Spectrum, UnboundedSpectrum};
use crate::oracle::{nearest_feasible_partner, Side};
use crate::scalar::Rational;

/// Largest power accepted for the Fig. 3 sweep (`n = 2^a ≤ 256`).
pub const FIG3_MAX_A: u32 = 8;

/// One eigenvalue index of the optimal output catalyst against the
/// harmonic-weight state of the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub index: usize,
    pub omega_prime_ours: Rational,
    pub omega_vdh: Rational,
}

/// Fig. 1 uses `(m, a) = (2, 3)`, Fig. 2 uses `(3, 3)`.
pub fn spectrum_rows(m: usize, a: u32) -> Result<Vec<SpectrumRow>> {
    let pair = optimal_pair(FamilyParams::new(m, a)?)?;
    let vdh = vdh_state(pair.dim())?;
    Ok(pair
        .omega_out()
        .entries()
        .iter()
        .zip(vdh.entries())
        .enumerate()
        .map(|(i, (o, v))| SpectrumRow { index: i + 1, omega_prime_ours: o.clone(), omega_vdh: v.clone() })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub error_ours: Rational,
    /// `None` when the harmonic-weight state admits no partner at all.
    pub error_vdh: Option<Rational>,
}

/// Errors for `m = 2`, `n = 2^a`, `a = 1..=max_a`. The harmonic-weight
/// state is held fixed as the output catalyst and its best input is found
/// by LP; rows are computed in parallel and returned in order of `a`.
pub fn fig3_rows(max_a: u32) -> Result<Vec<ErrorRow>> {
    if !(1..=FIG3_MAX_A).contains(&max_a) {
        return Err(Error::InvalidParameter(format!("max_a must lie in 1..={FIG3_MAX_A}, got {max_a}")));
    }
    (1..=max_a)
        .into_par_iter()
        .map(|a| {
            let params = FamilyParams::new(2, a)?;
            let n = params.n()?;
            let error_vdh = match nearest_feasible_partner(&vdh_state(n)?, Side::Output, 2) {
                Ok((_, d)) => Some(d),
                Err(Error::Infeasible) => None,
                Err(e) => return Err(e),
            };
            Ok(ErrorRow { n, error_ours: optimal_error(params), error_vdh })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Cell {
    pub energy_levels: &'static str,
    pub dimension: &'static str,
    pub verdict: String,
    /// Trace-distance lower bound on the canonical example, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<&'static str>,
}

/// The verdict grid with a computed bound in every "No" cell.
pub fn table1() -> Result<Vec<Table1Cell>> {
    let deg = optimal_error(FamilyParams::new(2, 3)?);
    let two_level = FiniteSpectrum::new(vec![0.0, std::f64::consts::LN_2], 1.0)?;
    let dim = dim_bound_diag(&two_level, &two_level)?;
    let energy = energy_bound(
        &FiniteSpectrum::trivial(2, 1.0)?,
        &Spectrum::Unbounded(UnboundedSpectrum::harmonic(1.0, 1.0)?),
        1.0,
    )?;
    let cell = |energy_levels, dimension, verdict: String, bound, example| Table1Cell {
        energy_levels,
        dimension,
        verdict,
        bound,
        example,
    };
    Ok(vec![
        cell(
            "fully_degenerate",
            "bounded",
            format!("No, d ≥ {deg} at (m=2,n=8)"),
            Some(crate::scalar::rational_to_f64(&deg)),
            Some("trivial system m=2, trivial catalyst n=8"),
        ),
        cell("fully_degenerate", "unbounded", "Yes (error → 0 as n → ∞)".into(), None, None),
        cell(
            "bounded",
            "bounded",
            format!("No, d ≥ {:.6}", dim.bound),
            Some(dim.bound),
            Some("system and catalyst levels (0, ln 2), beta=1"),
        ),
        cell("bounded", "unbounded", "Probably, true at least for fully degenerate Hamiltonians".into(), None, None),
        cell("unbounded", "bounded", "N/A".into(), None, None),
        cell(
            "unbounded",
            "unbounded",
            format!("No if mean energy and Z finite, bound = {:.6e}", energy.bound),
            Some(energy.bound),
            Some("trivial system m=2, harmonic catalyst hbar_omega=1, beta=1, E=1"),
        ),
    ])
}

//! Exact linear programs for the minimum-trace-distance catalyst problem.
//!
//! Both catalyst spectra are taken in a common descending order, which turns
//! the joint problem into an LP over `ω`, `ω′` and auxiliary `t_i ≥ |ω_i − ω′_i|`.
//! All variables are implicitly non-negative. Every optimum returned by
//! [`solve_lp`] has been re-substituted into the original constraints in
//! exact arithmetic.

mod format;
mod simplex;

pub use format::{parse_lp, write_lp};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::catalysts::{optimal_error, FamilyParams};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::spectra::{trace_distance, ProbVec};

/// Largest catalyst dimension accepted by the embezzlement LP builders.
pub const LP_SIZE_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(&self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    fn holds(&self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    /// Sparse `(variable, coefficient)` pairs.
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// `minimize c·x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub var_names: Vec<String>,
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(var_names: Vec<String>) -> Self {
        Self { var_names, objective: Vec::new(), constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn add(&mut self, name: impl Into<String>, coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        self.constraints.push(Constraint { name: name.into(), coeffs, sense, rhs });
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Exact check of non-negativity and every constraint.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.sense.holds(&dot(&c.coeffs, x), &c.rhs))
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let in_range = |terms: &[(usize, Rational)]| terms.iter().all(|(j, _)| *j < n);
        if !in_range(&self.objective) || !self.constraints.iter().all(|c| in_range(&c.coeffs)) {
            return Err(Error::InvalidParameter("LP references an undeclared variable".into()));
        }
        Ok(())
    }
}

fn dot(terms: &[(usize, Rational)], x: &[Rational]) -> Rational {
    terms.iter().fold(Rational::zero(), |acc, (j, c)| acc + c * &x[*j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present iff `status` is optimal.
    pub value: Option<Rational>,
    /// Optimal assignment; empty otherwise.
    pub x: Vec<Rational>,
}

/// Solves exactly and verifies the optimum against the original constraints.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let sol = simplex::solve(p)?;
    if sol.status == LpStatus::Optimal {
        if !p.is_feasible(&sol.x) {
            return Err(Error::VerificationFailed("optimal vertex violates a constraint".into()));
        }
        let value = sol.value.as_ref().expect("optimal carries a value");
        if p.objective_at(&sol.x) != *value {
            return Err(Error::VerificationFailed("objective mismatch at optimal vertex".into()));
        }
    }
    Ok(sol)
}

fn one() -> Rational {
    Rational::one()
}

fn minus_one() -> Rational {
    -Rational::one()
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("system dimension m must be ≥ 2, got {m}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("catalyst dimension n must be ≥ 2, got {n}")));
    }
    if n > LP_SIZE_CAP {
        return Err(Error::SizeCapExceeded { n, cap: LP_SIZE_CAP });
    }
    Ok(())
}

/// Either a decision variable index or a fixed exact value.
#[derive(Clone)]
enum Entry {
    Var(usize),
    Fixed(Rational),
}

/// Accumulates `Σ coeff·entry` into variable terms plus a constant.
#[derive(Default)]
struct Affine {
    terms: Vec<(usize, Rational)>,
    constant: Rational,
}

impl Affine {
    fn push(&mut self, e: &Entry, c: Rational) {
        match e {
            Entry::Var(j) => self.terms.push((*j, c)),
            Entry::Fixed(v) => self.constant += c * v,
        }
    }

    /// Emits `terms + constant (sense) 0`. Rows without variables only arise
    /// from the order and normalization of a fixed side, which `ProbVec`
    /// already guarantees, so they are skipped.
    fn emit(self, p: &mut LpProblem, name: String, sense: Sense) {
        if !self.terms.is_empty() {
            p.add(name, self.terms, sense, -self.constant);
        }
    }
}

fn names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

/// Shared body of the full LP and the partner LPs. `t` holds the absolute
/// value variables; `w` and `wp` are input and output entries.
fn embezzle_constraints(p: &mut LpProblem, m: usize, w: &[Entry], wp: &[Entry], t: &[usize], prefix_limit: usize) {
    let n = w.len();
    let mr = Rational::from_usize(m);
    for i in 0..n {
        let mut lo = Affine::default();
        lo.push(&Entry::Var(t[i]), one());
        lo.push(&w[i], minus_one());
        lo.push(&wp[i], one());
        lo.emit(p, format!("abs_pos_{}", i + 1), Sense::Ge);
        let mut hi = Affine::default();
        hi.push(&Entry::Var(t[i]), one());
        hi.push(&w[i], one());
        hi.push(&wp[i], minus_one());
        hi.emit(p, format!("abs_neg_{}", i + 1), Sense::Ge);
    }
    for (label, v) in [("order_w", w), ("order_wp", wp)] {
        for i in 0..n - 1 {
            let mut a = Affine::default();
            a.push(&v[i], one());
            a.push(&v[i + 1], minus_one());
            a.emit(p, format!("{label}_{}", i + 1), Sense::Ge);
        }
    }
    for (label, v) in [("norm_w", w), ("norm_wp", wp)] {
        let mut a = Affine::default();
        for e in v {
            a.push(e, one());
        }
        a.constant -= one();
        a.emit(p, label.to_string(), Sense::Eq);
    }
    // k = q·m + r: Σ_{i≤q} ω_i + (r/m)·ω_{q+1} ≥ Σ_{i≤min(k,n)} ω′_i.
    for k in 1..=prefix_limit {
        let (q, r) = (k / m, k % m);
        let mut a = Affine::default();
        for e in w.iter().take(q.min(n)) {
            a.push(e, one());
        }
        if r > 0 && q < n {
            a.push(&w[q], Rational::from_usize(r) / &mr);
        }
        for e in wp.iter().take(k.min(n)) {
            a.push(e, minus_one());
        }
        a.emit(p, format!("prefix_{k}"), Sense::Ge);
    }
}

/// The full catalyst LP in `3n` variables `ω, ω′, t`, objective `½Σt`.
pub fn build_embezzle_lp(m: usize, n: usize) -> Result<LpProblem> {
    build_lp(m, n, n)
}

/// As [`build_embezzle_lp`] with the implied prefix constraints for
/// `n < k ≤ n·m` added back.
pub fn build_embezzle_lp_with_redundant_prefixes(m: usize, n: usize) -> Result<LpProblem> {
    build_lp(m, n, n * m)
}

fn build_lp(m: usize, n: usize, prefix_limit: usize) -> Result<LpProblem> {
    check_dims(m, n)?;
    let var_names = names("w", n).chain(names("wp", n)).chain(names("t", n)).collect();
    let mut p = LpProblem::new(var_names);
    let w: Vec<Entry> = (0..n).map(Entry::Var).collect();
    let wp: Vec<Entry> = (n..2 * n).map(Entry::Var).collect();
    let t: Vec<usize> = (2 * n..3 * n).collect();
    p.objective = t.iter().map(|&j| (j, Rational::new(BigInt::one(), BigInt::from(2)))).collect();
    embezzle_constraints(&mut p, m, &w, &wp, &t, prefix_limit);
    Ok(p)
}

/// Which catalyst is held fixed by [`nearest_feasible_partner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `fixed` is the input `ω`; optimize `ω′`.
    Input,
    /// `fixed` is the output `ω′`; optimize `ω`.
    Output,
}

/// Closest feasible partner of a fixed catalyst, with its trace distance.
/// Fails with [`Error::Infeasible`] when no partner exists, e.g. for a
/// full-rank fixed input or an output with `ω′_1 > 1/m`.
pub fn nearest_feasible_partner(fixed: &ProbVec<Rational>, side: Side, m: usize) -> Result<(ProbVec<Rational>, Rational)> {
    let n = fixed.len();
    check_dims(m, n)?;
    if !fixed.is_sorted_desc() {
        return Err(Error::NotSorted);
    }
    let free_prefix = match side {
        Side::Input => "wp",
        Side::Output => "w",
    };
    let mut p = LpProblem::new(names(free_prefix, n).chain(names("t", n)).collect());
    let free: Vec<Entry> = (0..n).map(Entry::Var).collect();
    let fixed_entries: Vec<Entry> = fixed.entries().iter().cloned().map(Entry::Fixed).collect();
    let t: Vec<usize> = (n..2 * n).collect();
    p.objective = t.iter().map(|&j| (j, Rational::new(BigInt::one(), BigInt::from(2)))).collect();
    let (w, wp) = match side {
        Side::Input => (&fixed_entries, &free),
        Side::Output => (&free, &fixed_entries),
    };
    embezzle_constraints(&mut p, m, w, wp, &t, n);
    let sol = solve_lp(&p)?;
    match sol.status {
        LpStatus::Optimal => {
            let partner = ProbVec::new(sol.x[..n].to_vec())?;
            let d = trace_distance(&partner, fixed)?;
            debug_assert_eq!(Some(&d), sol.value.as_ref());
            Ok((partner, d))
        }
        LpStatus::Infeasible => Err(Error::Infeasible),
        LpStatus::Unbounded => Err(Error::Unbounded),
    }
}

/// Whether the exact LP optimum at `n = m^a` equals the closed-form error.
pub fn certify_optimality(m: usize, a: u32) -> Result<bool> {
    let params = FamilyParams::new(m, a)?;
    let n = m
        .checked_pow(a)
        .filter(|n| *n <= LP_SIZE_CAP)
        .ok_or(Error::SizeCapExceeded { n: m.saturating_pow(a), cap: LP_SIZE_CAP })?;
    let sol = solve_lp(&build_embezzle_lp(m, n)?)?;
    Ok(sol.value == Some(optimal_error(params)))
}

/// Optimal value of the full LP.
pub fn lp_optimum(m: usize, n: usize) -> Result<Rational> {
    let sol = solve_lp(&build_embezzle_lp(m, n)?)?;
    sol.value.ok_or(Error::Infeasible)
}

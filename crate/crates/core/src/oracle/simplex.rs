//! Two-phase tableau simplex over exact rationals.
//!
//! Entering columns follow Dantzig's rule until a run of degenerate pivots
//! appears, at which point Bland's rule takes over until the objective moves
//! again. That keeps pivot counts low on the embezzlement LPs while retaining
//! Bland's termination guarantee.

use num_traits::{Signed, Zero};

use super::{LpProblem, LpSolution, LpStatus, Sense};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Degenerate pivots tolerated under Dantzig's rule before switching to Bland's.
const DEGENERATE_RUN: usize = 8;

struct Tableau {
    /// Constraint rows; the last entry of each row is its right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, last entry is minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns that may never enter (dropped artificials).
    banned: Vec<bool>,
    cols: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let pivot_row: Vec<Rational> = self.rows[r].iter().map(|x| x * &inv).collect();
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn choose_entering(&self, bland: bool) -> Option<usize> {
        let candidates = (0..self.cols).filter(|&j| !self.banned[j] && self.obj[j].is_negative());
        if bland {
            candidates.min()
        } else {
            candidates.min_by(|&a, &b| self.obj[a].cmp(&self.obj[b]).then(a.cmp(&b)))
        }
    }

    /// Minimum-ratio row; ties go to the smallest basic index.
    fn choose_leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[c].is_positive() {
                continue;
            }
            let ratio = self.rhs(i) / &row[c];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self) -> PhaseOutcome {
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= DEGENERATE_RUN;
            let Some(c) = self.choose_entering(bland) else {
                return PhaseOutcome::Optimal;
            };
            let Some(r) = self.choose_leaving(c) else {
                return PhaseOutcome::Unbounded;
            };
            if self.rhs(r).is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
        }
    }

    fn objective_value(&self) -> Rational {
        -self.obj[self.cols].clone()
    }
}

pub(super) fn solve(p: &LpProblem) -> Result<LpSolution> {
    let n = p.num_vars();
    let m = p.constraints.len();

    // Normalize every row to a non-negative right-hand side.
    let mut rows: Vec<(Vec<(usize, Rational)>, Sense, Rational)> = Vec::with_capacity(m);
    for c in &p.constraints {
        let mut coeffs: Vec<(usize, Rational)> = c.coeffs.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        let (mut sense, mut rhs) = (c.sense, c.rhs.clone());
        if rhs.is_negative() {
            for (_, v) in &mut coeffs {
                *v = -v.clone();
            }
            rhs = -rhs;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        rows.push((coeffs, sense, rhs));
    }

    let slack_count = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let cols = n + slack_count + art_count;
    let art_start = n + slack_count;

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        obj: vec![Rational::zero(); cols + 1],
        basis: Vec::with_capacity(m),
        banned: vec![false; cols],
        cols,
    };
    let (mut next_slack, mut next_art) = (n, art_start);
    for (coeffs, sense, rhs) in &rows {
        let mut row = vec![Rational::zero(); cols + 1];
        for (j, v) in coeffs {
            row[*j] += v;
        }
        row[cols] = rhs.clone();
        match sense {
            Sense::Le => {
                row[next_slack] = Rational::from_integer(1.into());
                t.basis.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                row[next_art] = Rational::from_integer(1.into());
                t.basis.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = Rational::from_integer(1.into());
                t.basis.push(next_art);
                next_art += 1;
            }
        }
        t.rows.push(row);
    }

    // Phase 1: minimize the sum of artificials.
    if art_count > 0 {
        for (i, row) in t.rows.iter().enumerate() {
            if t.basis[i] >= art_start {
                for j in 0..=cols {
                    if j < art_start || j == cols {
                        t.obj[j] -= &row[j];
                    }
                }
            }
        }
        if let PhaseOutcome::Unbounded = t.run() {
            return Err(Error::VerificationFailed("phase 1 reported unbounded".into()));
        }
        if t.objective_value().is_positive() {
            return Ok(LpSolution { status: LpStatus::Infeasible, value: None, x: vec![] });
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for j in art_start..cols {
            t.banned[j] = true;
        }
    }

    // Phase 2 reduced costs from the true objective.
    let mut obj = vec![Rational::zero(); cols + 1];
    for (j, v) in &p.objective {
        obj[*j] += v;
    }
    for (i, row) in t.rows.iter().enumerate() {
        let b = t.basis[i];
        if !obj[b].is_zero() {
            let f = obj[b].clone();
            for j in 0..=cols {
                if !row[j].is_zero() {
                    obj[j] -= &f * &row[j];
                }
            }
        }
    }
    t.obj = obj;
    if let PhaseOutcome::Unbounded = t.run() {
        return Ok(LpSolution { status: LpStatus::Unbounded, value: None, x: vec![] });
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i).clone();
        }
    }
    let value = t.objective_value();
    Ok(LpSolution { status: LpStatus::Optimal, value: Some(value), x })
}

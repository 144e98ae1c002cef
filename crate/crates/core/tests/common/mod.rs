//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use thermocat::hamiltonians::{LevelFamily, Spectrum, UnboundedSpectrum};

/// Grid spacing of the `ε_C` oracle.
pub const GRID_STEP: f64 = 1e-6;

/// `j(W) = min{j ≥ 1 : E_{j+1} > E/(1−W)}` by forward search from `hint`;
/// `n` for a finite spectrum when no such `j < n` exists.
pub fn j_of_w(cat: &Spectrum, energy: f64, w: f64, hint: usize) -> usize {
    let x = energy / (1.0 - w);
    let mut j = hint.max(1);
    loop {
        if cat.len() == Some(j) {
            return j;
        }
        if cat.level(j + 1) > x {
            return j;
        }
        j += 1;
    }
}

/// `max_W W·γ^{E_{j(W)}}` from the definition alone: a uniform grid on
/// `(0,1)`, then each step seen on the grid is followed by bisection to its
/// right edge, where the supremum of `W` on that step sits.
pub fn eps_c_grid(cat: &Spectrum, energy: f64, gamma_scale: f64) -> f64 {
    let weight = |j: usize| (-gamma_scale * cat.beta() * cat.level(j)).exp();
    let steps = (1.0 / GRID_STEP).round() as usize;
    let mut best = 0.0f64;
    let mut hint = 1;
    // (j, last grid W with that j, first grid W beyond it)
    let mut edges: Vec<(usize, f64, f64)> = Vec::new();
    for k in 1..steps {
        let w = k as f64 * GRID_STEP;
        let j = j_of_w(cat, energy, w, hint);
        best = best.max(w * weight(j));
        match edges.last_mut() {
            Some(last) if last.0 == j => last.1 = w,
            Some(last) => {
                last.2 = w;
                edges.push((j, w, 1.0));
            }
            None => edges.push((j, w, 1.0)),
        }
        hint = j;
    }
    for (j, mut lo, mut hi) in edges {
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if j_of_w(cat, energy, mid, j) == j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = best.max(lo * weight(j));
    }
    best
}

/// Levels `0, 0.3, 0.3, 1.2, 2.0`, then step `0.7`.
pub fn tabulated_spectrum(beta: f64) -> Spectrum {
    let family = LevelFamily::Tabulated { prefix: vec![0.0, 0.3, 0.3, 1.2, 2.0], step: 0.7 };
    Spectrum::Unbounded(UnboundedSpectrum::new(family, beta, Some(0.7), None).unwrap())
}

/// `E_j = 0.1·(j−1)²`.
pub fn quadratic_spectrum(beta: f64) -> Spectrum {
    let family = LevelFamily::Custom { name: "quadratic".into(), level: Arc::new(|j| 0.1 * ((j - 1) * (j - 1)) as f64) };
    Spectrum::Unbounded(UnboundedSpectrum::new(family, beta, Some(0.1), None).unwrap())
}

/// Random probability vector of length `n` with exponential weights.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Candidate primal point on the first `k` catalyst levels. `ω` is the
/// ground state mixed with a random vector and then pulled back toward the
/// ground state until its mean energy is at most `energy`. `ω′` mixes the
/// truncated Gibbs state with noise. Feasibility is left to the caller.
pub fn primal_candidate<R: Rng>(rng: &mut R, cat: &Spectrum, energy: f64, k: usize) -> (Vec<f64>, Vec<f64>) {
    let levels: Vec<f64> = (1..=k).map(|j| cat.level(j)).collect();
    let t = rng.gen::<f64>().powi(2) * 0.5;
    let mut w: Vec<f64> = random_simplex(rng, k).into_iter().map(|x| t * x).collect();
    w[0] += 1.0 - t;
    let mean: f64 = w.iter().zip(&levels).map(|(p, e)| p * e).sum();
    if mean > energy {
        let s = (energy - levels[0]) / (mean - levels[0]);
        for x in &mut w {
            *x *= s;
        }
        w[0] += 1.0 - s;
    }
    let gibbs: Vec<f64> = levels.iter().map(|e| (-cat.beta() * e).exp()).collect();
    let z: f64 = gibbs.iter().sum();
    let noise = random_simplex(rng, k);
    let s = rng.gen::<f64>().powi(2) * 0.5;
    let wp = gibbs.iter().zip(&noise).map(|(g, r)| (1.0 - s) * g / z + s * r).collect();
    (w, wp)
}

/// Discrete distribution on random support points in `[0, 10)`.
pub fn random_distribution<R: Rng>(rng: &mut R, support: usize) -> (Vec<f64>, Vec<f64>) {
    let xs = (0..support).map(|_| rng.gen_range(0.0..10.0)).collect();
    (xs, random_simplex(rng, support))
}

/// Mean and variance of a discrete distribution.
pub fn moments(xs: &[f64], ps: &[f64]) -> (f64, f64) {
    let mean: f64 = xs.iter().zip(ps).map(|(x, p)| x * p).sum();
    let var = xs.iter().zip(ps).map(|(x, p)| p * (x - mean).powi(2)).sum::<f64>();
    (mean, var)
}

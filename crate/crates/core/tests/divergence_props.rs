use proptest::prelude::*;

use num_complex::Complex64;
use thermocat::divergences::{d_alpha_diag, d_half_matrix, d_inf_matrix, Alpha, HermitianState};
use thermocat::linalg::CMatrix;
use thermocat::ProbVec;

fn normalized(raw: &[f64]) -> ProbVec<f64> {
    let s: f64 = raw.iter().sum();
    ProbVec::new(raw.iter().map(|x| x / s).collect()).unwrap()
}

fn positive_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..6).prop_flat_map(|n| (positive_vec(n), positive_vec(n)))
}

/// `ρ = Σ_k λ_k |v_k⟩⟨v_k|` with a random complex frame, Gram-Schmidt
/// orthonormalized.
fn rotated_state(eig: &[f64], frame: &[(f64, f64)]) -> HermitianState {
    let n = eig.len();
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for k in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(frame[k * n + i].0, frame[k * n + i].1)).collect();
        v[k] += Complex64::new(2.0, 0.0);
        for u in &cols {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    let s: f64 = eig.iter().sum();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| cols[k][i] * (eig[k] / s) * cols[k][j].conj()).sum()).collect())
        .collect();
    HermitianState::new(CMatrix::from_rows(&rows).unwrap()).unwrap()
}

fn state_and_reference() -> impl Strategy<Value = (HermitianState, HermitianState)> {
    (2usize..5).prop_flat_map(|n| (positive_vec(n), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n), positive_vec(n)))
        .prop_map(|(eig, frame, tau)| (rotated_state(&eig, &frame), HermitianState::diagonal(&normalized(&tau)).unwrap()))
}

const ALPHAS: [f64; 7] = [0.0, 0.3, 0.5, 1.0, 2.0, 7.5, f64::INFINITY];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn diagonal_divergence_is_additive((p1, q1) in pair(), (p2, q2) in pair()) {
        let (p1, q1, p2, q2) = (normalized(&p1), normalized(&q1), normalized(&p2), normalized(&q2));
        for a in ALPHAS {
            let alpha = Alpha::new(a).unwrap();
            let joint = d_alpha_diag(&p1.tensor(&p2), &q1.tensor(&q2), alpha).unwrap().value();
            let sum = d_alpha_diag(&p1, &q1, alpha).unwrap().value() + d_alpha_diag(&p2, &q2, alpha).unwrap().value();
            prop_assert!((joint - sum).abs() <= 1e-10, "α={a}: {joint} vs {sum}");
        }
    }

    #[test]
    fn diagonal_divergence_is_non_negative_and_monotone_in_alpha((p, q) in pair()) {
        let (p, q) = (normalized(&p), normalized(&q));
        let values: Vec<f64> = ALPHAS.iter().map(|a| d_alpha_diag(&p, &q, Alpha::new(*a).unwrap()).unwrap().value()).collect();
        for w in values.windows(2) {
            prop_assert!(w[0] >= -1e-12 && w[0] <= w[1] + 1e-10, "{values:?}");
        }
    }

    #[test]
    fn alpha_limits_are_continuous((p, q) in pair()) {
        let (p, q) = (normalized(&p), normalized(&q));
        let d = |a: f64| d_alpha_diag(&p, &q, Alpha::new(a).unwrap()).unwrap().value();
        prop_assert!((d(1.0 - 1e-6) - d(1.0)).abs() <= 1e-4);
        prop_assert!((d(1.0 + 1e-6) - d(1.0)).abs() <= 1e-4);
        prop_assert!((d(1e6) - d(f64::INFINITY)).abs() <= 1e-4);
    }

    #[test]
    fn matrix_forms_agree_on_commuting_pairs((p, q) in pair()) {
        let (p, q) = (normalized(&p), normalized(&q));
        let (rho, sigma) = (HermitianState::diagonal(&p).unwrap(), HermitianState::diagonal(&q).unwrap());
        let inf = d_alpha_diag(&p, &q, Alpha::Infinity).unwrap().value();
        let half = d_alpha_diag(&p, &q, Alpha::Interval(0.5)).unwrap().value();
        prop_assert!((d_inf_matrix(&rho, &sigma).unwrap().value() - inf).abs() <= 1e-10);
        prop_assert!((d_half_matrix(&rho, &sigma).unwrap().value() - half).abs() <= 1e-10);
    }

    #[test]
    fn matrix_divergences_are_non_negative_and_vanish_on_the_diagonal((rho, sigma) in state_and_reference()) {
        prop_assert!(d_inf_matrix(&rho, &sigma).unwrap().value() >= -1e-10);
        prop_assert!(d_half_matrix(&rho, &sigma).unwrap().value() >= -1e-10);
        prop_assert!(d_inf_matrix(&rho, &rho).unwrap().value().abs() <= 1e-9);
        prop_assert!(d_half_matrix(&rho, &rho).unwrap().value().abs() <= 1e-9);
    }

    #[test]
    fn dephasing_never_increases_divergence((rho, sigma) in state_and_reference()) {
        let deph = rho.dephased();
        prop_assert!(d_inf_matrix(&deph, &sigma).unwrap().value() <= d_inf_matrix(&rho, &sigma).unwrap().value() + 1e-10);
        prop_assert!(d_half_matrix(&deph, &sigma).unwrap().value() <= d_half_matrix(&rho, &sigma).unwrap().value() + 1e-10);
    }
}

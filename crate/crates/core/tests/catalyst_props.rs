use proptest::prelude::*;

use num_traits::{One, Zero};
use thermocat::catalysts::{optimal_error, optimal_pair, pile_slack, reduce_pair, vdh_state, FamilyParams, ReductionBranch};
use thermocat::oracle::{build_embezzle_lp, build_embezzle_lp_with_redundant_prefixes, lp_optimum, nearest_feasible_partner, solve_lp, LpStatus, Side};
use thermocat::scalar::rational;
use thermocat::spectra::check_transformation;
use thermocat::{CatalystPair, ProbVec, Rational};

fn sorted_exact(raw: &[u32]) -> ProbVec<Rational> {
    let total: u32 = raw.iter().sum();
    ProbVec::new(raw.iter().map(|x| rational(*x as i64, total as i64)).collect()).unwrap().sort_desc()
}

/// The reduction contract, checked on a slack-piled feasible pair.
fn assert_reduction(pair: &CatalystPair<Rational>) {
    let piled = pile_slack(pair).unwrap();
    assert!(check_transformation(&piled).unwrap());
    assert_eq!(piled.distance(), pair.distance());
    let red = reduce_pair(&piled).unwrap();
    assert_eq!(red.pair.dim() * piled.system_dim(), piled.dim());
    assert!(check_transformation(&red.pair).unwrap());
    let kept = Rational::one() - &red.delta;
    if red.split_index >= 2 {
        assert_eq!(red.pair.distance() * &kept, piled.distance());
    } else {
        assert!(red.pair.distance() * &kept >= kept - &piled.omega_out().entries()[0]);
    }
    assert!(matches!(red.branch, ReductionBranch::Truncate | ReductionBranch::BlockAverage));
}

#[test]
fn closed_form_error_identity() {
    for m in 2..=6usize {
        for a in 1..=6u32 {
            let e = optimal_error(FamilyParams::new(m, a).unwrap());
            let scale = rational(1 + (m as i64 - 1) * a as i64, 1);
            assert_eq!(e * scale, rational(m as i64 - 1, 1));
        }
    }
}

#[test]
fn harmonic_weight_state_is_normalized_and_strictly_decreasing() {
    for n in 1..=40 {
        let v = vdh_state(n).unwrap();
        assert_eq!(v.entries().iter().cloned().sum::<Rational>(), Rational::one());
        assert!(v.entries().windows(2).all(|w| w[0] > w[1]));
    }
}

#[test]
fn lp_optimum_is_monotone_in_dimension() {
    let values: Vec<Rational> = (2..=32).map(|n| lp_optimum(2, n).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    for a in 1..=5u32 {
        assert_eq!(values[(1usize << a) - 2], optimal_error(FamilyParams::new(2, a).unwrap()));
    }
}

#[test]
fn redundant_prefix_rows_do_not_move_the_optimum() {
    for (m, n) in [(2, 5), (2, 8), (3, 7), (3, 9)] {
        let lean = solve_lp(&build_embezzle_lp(m, n).unwrap()).unwrap();
        let full = solve_lp(&build_embezzle_lp_with_redundant_prefixes(m, n).unwrap()).unwrap();
        assert_eq!(lean.status, LpStatus::Optimal);
        assert_eq!(lean.value, full.value);
    }
}

#[test]
fn optimal_output_has_optimal_partner() {
    let pair = optimal_pair(FamilyParams::new(2, 3).unwrap()).unwrap();
    let (partner, d) = nearest_feasible_partner(pair.omega_out(), Side::Output, 2).unwrap();
    assert_eq!(d, rational(1, 4));
    let found = CatalystPair::new(partner, pair.omega_out().clone(), 2).unwrap();
    assert!(check_transformation(&found).unwrap());
}

#[test]
fn lp_solution_survives_pile_and_reduce() {
    let (m, n) = (2, 8);
    let sol = solve_lp(&build_embezzle_lp(m, n).unwrap()).unwrap();
    let w = ProbVec::new(sol.x[..n].to_vec()).unwrap();
    let wp = ProbVec::new(sol.x[n..2 * n].to_vec()).unwrap();
    let pair = CatalystPair::new(w, wp, m).unwrap();
    assert!(check_transformation(&pair).unwrap());
    assert_eq!(pair.distance(), rational(1, 4));
    assert_reduction(&pair);
}

#[test]
fn optimal_family_reduces_within_contract() {
    for (m, a) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
        assert_reduction(&optimal_pair(FamilyParams::new(m, a).unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_feasible_pairs_reduce_within_contract(raw in prop::collection::vec(1u32..30, 8)) {
        let out = sorted_exact(&raw);
        let Ok((input, d)) = nearest_feasible_partner(&out, Side::Output, 2) else {
            return Ok(());
        };
        let pair = CatalystPair::new(input, out, 2).unwrap();
        prop_assert!(check_transformation(&pair).unwrap());
        prop_assert_eq!(pair.distance(), d.clone());
        prop_assert!(d >= rational(1, 4) && d > Rational::zero());
        assert_reduction(&pair);
    }
}

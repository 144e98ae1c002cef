use proptest::prelude::*;

use thermocat::scalar::rational;
use thermocat::spectra::{majorizes, tensor_uniform, trace_distance};
use thermocat::{ProbVec, Rational};

/// Sorted descending, as the majorization check requires.
fn exact_vec(raw: &[u32]) -> ProbVec<Rational> {
    let total: u32 = raw.iter().sum();
    ProbVec::new(raw.iter().map(|x| rational(*x as i64, total as i64)).collect()).unwrap().sort_desc()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `D·p` for `D` a convex combination of permutation matrices.
fn birkhoff_apply(p: &[Rational], mix: &[u32]) -> Vec<Rational> {
    let perms = permutations(p.len());
    let total: u32 = mix.iter().sum();
    let mut out = vec![rational(0, 1); p.len()];
    for (perm, w) in perms.iter().zip(mix) {
        let w = rational(*w as i64, total as i64);
        for (i, &j) in perm.iter().enumerate() {
            out[i] += &w * &p[j];
        }
    }
    out
}

fn vec_and_mix() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (3usize..=4).prop_flat_map(|n| {
        let perms = (1..=n).product::<usize>();
        (prop::collection::vec(1u32..50, n), prop::collection::vec(0u32..5, perms).prop_filter("non-zero mix", |m| m.iter().any(|x| *x > 0)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubly_stochastic_image_is_majorized((raw, mix) in vec_and_mix()) {
        let p = exact_vec(&raw);
        let q = ProbVec::new(birkhoff_apply(p.entries(), &mix)).unwrap().sort_desc();
        prop_assert!(majorizes(&p, &q).unwrap());
    }

    #[test]
    fn majorization_is_reflexive_and_rejects_unsorted_input(raw in prop::collection::vec(1u32..50, 2..8)) {
        let p = exact_vec(&raw);
        prop_assert!(majorizes(&p, &p).unwrap());
        let mut rev = p.entries().to_vec();
        rev.reverse();
        let r = ProbVec::new(rev).unwrap();
        prop_assume!(!r.is_sorted_desc());
        prop_assert!(majorizes(&p, &r).is_err());
    }

    #[test]
    fn pure_and_uniform_bracket_everything(raw in prop::collection::vec(1u32..50, 1..8)) {
        let p = exact_vec(&raw);
        let n = p.len();
        prop_assert!(majorizes(&ProbVec::pure(n).unwrap(), &p).unwrap());
        prop_assert!(majorizes(&p, &ProbVec::uniform(n).unwrap()).unwrap());
    }

    #[test]
    fn tensoring_with_uniform_keeps_distance(a in prop::collection::vec(1u32..50, 2..6), b in prop::collection::vec(1u32..50, 2..6), m in 1usize..4) {
        prop_assume!(a.len() == b.len());
        let (p, q) = (exact_vec(&a), exact_vec(&b));
        let d = trace_distance(&p, &q).unwrap();
        let dm = trace_distance(&tensor_uniform(&p, m).unwrap(), &tensor_uniform(&q, m).unwrap()).unwrap();
        prop_assert_eq!(d, dm);
    }
}

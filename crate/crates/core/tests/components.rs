mod common;

use proptest::prelude::*;
use qrv_core::components::{
    classify_all, component_dimension, enumerate_components, is_component, is_nonempty, rank_box, RankSequence,
};
use qrv_core::ideals::generators_for_component;
use qrv_core::quiver::{AlgebraPresentation, DimensionVector, Quiver};
use qrv_core::verify::{
    achievable_rank_oracle, codim_check, membership_test, oracle_sweep, small_instances, Sampler, SampleConfig,
    ORACLE_AMBIENT_BOUND,
};

fn cfg(trials: usize) -> SampleConfig {
    SampleConfig::new(32003, 0, trials).unwrap()
}

fn rs(q: &Quiver, d: &[usize], r: &[usize]) -> RankSequence {
    RankSequence::new(q, DimensionVector(d.to_vec()), DimensionVector(r.to_vec())).unwrap()
}

#[test]
fn determinantal_dimension() {
    // Maps k^a -> k^b of rank at most k form a variety of dimension k(a+b-k).
    let q = common::quiver(2, &[(0, 1)]);
    for a in 0..=4 {
        for b in 0..=4 {
            for k in 0..=a.min(b) {
                let r = rs(&q, &[a, b], &[0, k]);
                assert_eq!(component_dimension(&q, &r).unwrap(), k * (a + b - k), "a={a} b={b} k={k}");
            }
        }
    }
}

#[test]
fn square_zero_matrices() {
    // n x n matrices with X^2 = 0 and rank k: dimension 2k(n-k), k <= n/2.
    let alg = AlgebraPresentation::radical_square_zero(common::quiver(1, &[(0, 0)]));
    let q = alg.quiver();
    for n in 1..=6 {
        for k in 0..=n {
            let r = rs(q, &[n], &[k]);
            assert_eq!(is_nonempty(q, &r), 2 * k <= n, "n={n} k={k}");
            if 2 * k <= n {
                assert_eq!(component_dimension(q, &r).unwrap(), 2 * k * (n - k));
            }
            assert_eq!(is_component(&alg, &r).unwrap(), k == n / 2);
        }
    }
}

#[test]
fn sweep_is_thread_count_independent() {
    let instances: Vec<_> = small_instances(2, 2, 2).into_iter().take(30).collect();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| oracle_sweep(&instances, &cfg(10)).unwrap().to_json())
    };
    assert_eq!(run(1), run(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn components_are_nonempty_strata((a, d) in common::rad2_with_dims(3, 3, 0, 3)) {
        let q = a.quiver();
        let all = classify_all(&a, &d).unwrap();
        prop_assert_eq!(all.len(), rank_box(&d).len());
        for rec in &all {
            prop_assert_eq!(rec.nonempty, is_nonempty(q, &rec.ranks));
            prop_assert!(!rec.is_component || rec.nonempty);
        }
        let comps = enumerate_components(&a, &d).unwrap();
        let filtered: Vec<_> = all.into_iter().filter(|c| c.is_component).collect();
        prop_assert!(!comps.is_empty());
        prop_assert_eq!(comps, filtered);
    }

    #[test]
    fn nonempty_matches_enumeration_over_f2((a, d) in common::rad2_with_dims(3, 3, 0, 2)) {
        prop_assume!(a.quiver().ambient_dimension(&d) <= ORACLE_AMBIENT_BOUND);
        let o = achievable_rank_oracle(&a, &d, 2).unwrap();
        prop_assert!(o.agreement, "{:?}", o.counterexamples);
    }

    #[test]
    fn samples_satisfy_their_equations((a, d) in common::rad2_with_dims(3, 3, 0, 3), seed in any::<u64>()) {
        let q = a.quiver();
        let c = cfg(1).with_seed(seed);
        for r in rank_box(&d) {
            let r = RankSequence::new(q, d.clone(), r).unwrap();
            if !is_nonempty(q, &r) {
                continue;
            }
            let sampler = Sampler::new(&a, r.clone()).unwrap();
            let n = sampler.sample_trial(&c, 0).unwrap();
            prop_assert!(n.satisfies(&a));
            prop_assert_eq!(&n, &sampler.sample_trial(&c, 0).unwrap());
            let g = generators_for_component(q, &d, r.ranks()).unwrap();
            prop_assert!(membership_test(&n, &g).unwrap());
        }
    }

    #[test]
    fn dimension_matches_jacobian((a, d) in common::rad2_with_dims(2, 3, 1, 2), seed in any::<u64>()) {
        for comp in enumerate_components(&a, &d).unwrap() {
            let rep = codim_check(&a, &comp.ranks, &cfg(3).with_seed(seed)).unwrap();
            prop_assert!(rep.agrees, "{:?}", rep);
            prop_assert_eq!(Some(rep.dimension), comp.dimension);
        }
    }
}

mod common;

use proptest::prelude::*;
use qrv_core::exactla::{Matrix, PrimeField};
use qrv_core::moduli::{balanced_weights, node_shape_check, reduce_by_weight, NodeShape, Weight};
use qrv_core::quiver::{embed_split_all, AlgebraPresentation, DimensionVector, Quiver, Representation};
use qrv_core::verify::{endomorphism_dim, is_schur, is_semistable_bruteforce};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All representations of `a` at `d` over `F_2`, by enumeration of entries.
fn all_reps(a: &AlgebraPresentation, d: &DimensionVector) -> Vec<Representation<PrimeField>> {
    let q = a.quiver();
    let f = PrimeField::new(2).unwrap();
    let shapes: Vec<(usize, usize)> = q.arrows().iter().map(|ar| (d[ar.head], d[ar.tail])).collect();
    let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut out = Vec::new();
    for code in 0u32..1 << total {
        let mut bit = 0;
        let mats = shapes
            .iter()
            .map(|&(r, c)| {
                let data = (0..r * c).map(|k| u64::from(code >> (bit + k) & 1)).collect();
                bit += r * c;
                Matrix::from_vec(&f, r, c, data).unwrap()
            })
            .collect();
        let m = Representation::new(q, &f, d.clone(), mats).unwrap();
        if m.satisfies(a) {
            out.push(m);
        }
    }
    out
}

/// Number of tuples `(phi_v)` with `phi_h M_a = M_a phi_t` for every arrow, over `F_2`.
fn count_endomorphisms(q: &Quiver, m: &Representation<PrimeField>) -> usize {
    let f = *m.field();
    let d = m.dims();
    let total: usize = d.entries().iter().map(|k| k * k).sum();
    (0u32..1 << total)
        .filter(|code| {
            let mut bit = 0;
            let phi: Vec<Matrix<PrimeField>> = d
                .entries()
                .iter()
                .map(|&k| {
                    let data = (0..k * k).map(|i| u64::from(code >> (bit + i) & 1)).collect();
                    bit += k * k;
                    Matrix::from_vec(&f, k, k, data).unwrap()
                })
                .collect();
            q.arrows().iter().enumerate().all(|(i, ar)| {
                phi[ar.head].mul(m.matrix(i)).unwrap() == m.matrix(i).mul(&phi[ar.tail]).unwrap()
            })
        })
        .count()
}

fn small_enough(a: &AlgebraPresentation, d: &DimensionVector, bound: usize) -> bool {
    a.quiver().ambient_dimension(d) <= bound && d.entries().iter().map(|k| k * k).sum::<usize>() <= bound
}

#[test]
fn known_schur_counts() {
    let arrow = AlgebraPresentation::radical_square_zero(common::quiver(2, &[(0, 1)]));
    let reps = all_reps(&arrow, &DimensionVector(vec![1, 1]));
    assert_eq!(reps.len(), 2);
    assert_eq!(reps.iter().filter(|m| is_schur(arrow.quiver(), m)).count(), 1);
    let lp = AlgebraPresentation::radical_square_zero(common::quiver(1, &[(0, 0)]));
    let reps = all_reps(&lp, &DimensionVector(vec![2]));
    // Zero and the three nonzero square-zero 2x2 matrices over F_2.
    assert_eq!(reps.len(), 4);
    assert!(reps.iter().all(|m| !is_schur(lp.quiver(), m)));
    assert_eq!(reps.iter().map(|m| count_endomorphisms(lp.quiver(), m)).collect::<Vec<_>>(), vec![16, 4, 4, 4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn endomorphism_dimension_counts_f2_points((a, d) in common::rad2_with_dims(2, 3, 0, 2), pick in any::<prop::sample::Index>()) {
        prop_assume!(small_enough(&a, &d, 9));
        let reps = all_reps(&a, &d);
        let m = &reps[pick.index(reps.len())];
        prop_assert_eq!(count_endomorphisms(a.quiver(), m), 1 << endomorphism_dim(a.quiver(), m));
    }

    #[test]
    fn schur_representations_are_one_sided_at_nodes((a, d) in common::rad2_with_dims(2, 3, 1, 2)) {
        prop_assume!(small_enough(&a, &d, 10));
        let q = a.quiver();
        for m in all_reps(&a, &d).iter().filter(|m| is_schur(q, m)) {
            for x in 0..q.vertex_count() {
                let h = qrv_core::quiver::h_matrix(q, m, x);
                let t = qrv_core::quiver::t_matrix(q, m, x);
                prop_assert!(h.is_zero() || t.is_zero(), "vertex {x} of {:?}", m);
            }
        }
    }

    #[test]
    fn reduction_is_bipartite(a in common::rad2(3, 5), w in prop::collection::vec(-2i64..=2, 3)) {
        let q = a.quiver();
        let theta = Weight(w[..q.vertex_count()].to_vec());
        let red = reduce_by_weight(&a, &theta).unwrap();
        let rq = red.algebra.quiver();
        let rw = red.weight(&theta);
        prop_assert!(!rq.has_oriented_cycle());
        for ar in rq.arrows() {
            prop_assert!(rw.0[ar.tail] > 0 && rw.0[ar.head] < 0);
        }
        for (v, image) in red.vertex_map.iter().enumerate() {
            prop_assert_eq!(image.is_none(), theta.0[v] == 0);
        }
        prop_assert_eq!(Weight::parse(q, &theta.format(q)).unwrap(), theta);
    }

    #[test]
    fn semistable_points_have_node_shapes(
        (a, d) in common::rad2_with_dims(2, 3, 0, 2),
        r_picks in prop::collection::vec(any::<prop::sample::Index>(), 2),
        seed in any::<u64>(),
    ) {
        let q = a.quiver();
        prop_assume!(d.total() <= 5 && d.total() > 0);
        let f = PrimeField::new(2).unwrap();
        let full = a.split_all_nodes().unwrap();
        let r = DimensionVector((0..q.vertex_count()).map(|x| r_picks[x].index(d[x] + 1)).collect());
        let m = Representation::random(full.algebra.quiver(), &f, full.split_dims(&d, &r).unwrap(), &mut ChaCha8Rng::seed_from_u64(seed));
        let n = embed_split_all(q, &full, &m).unwrap();
        for theta in balanced_weights(q.vertex_count(), 2, &d) {
            let ss = is_semistable_bruteforce(q, &n, &theta.0, false).unwrap();
            if ss {
                for x in 0..q.vertex_count() {
                    prop_assert_ne!(node_shape_check(&a, &n, &theta, x).unwrap(), NodeShape::Violation);
                }
            }
            let red = reduce_by_weight(&a, &theta).unwrap();
            let stripped = red.strip(&n).unwrap();
            let reduced_ss = is_semistable_bruteforce(red.algebra.quiver(), &stripped, &red.weight(&theta).0, false).unwrap();
            prop_assert_eq!(ss, reduced_ss, "theta {:?}", theta);
        }
    }
}

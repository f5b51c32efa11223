mod common;

use proptest::prelude::*;
use qrv_core::exactla::PrimeField;
use qrv_core::quiver::{
    embed_representation, embed_split_all, h_matrix, x_rank, AlgebraPresentation, DimensionVector, Representation,
    SplitContext,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

/// The algebra whose only relations are the length-two paths through `x`.
fn node_at(a: &AlgebraPresentation, x: usize) -> AlgebraPresentation {
    let q = a.quiver();
    let rels = q
        .in_arrows(x)
        .into_iter()
        .flat_map(|i| q.out_arrows(x).into_iter().map(move |o| vec![i, o]))
        .collect();
    AlgebraPresentation::new(q.clone(), rels, false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn embedding_preserves_rank_and_relations(
        (a, d) in common::rad2_with_dims(3, 4, 0, 3),
        pick in any::<prop::sample::Index>(),
        rank_pick in any::<prop::sample::Index>(),
        seed in any::<u64>(),
    ) {
        let x = pick.index(a.quiver().vertex_count());
        let alg = node_at(&a, x);
        prop_assert!(alg.is_node(x));
        let r = rank_pick.index(d[x] + 1);
        let (ax, split) = alg.split_node(x).unwrap();
        prop_assert!(ax.explicit_relations().is_empty());
        let ctx = SplitContext::new(split.clone(), &d, r).unwrap();
        let sd = ctx.split_dims(&d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Representation::random(ax.quiver(), &field(), sd, &mut rng);
        let big = embed_representation(alg.quiver(), &ctx, &m).unwrap();
        prop_assert_eq!(x_rank(alg.quiver(), &big, x), h_matrix(ax.quiver(), &m, split.head_index).rank());
        prop_assert!(big.satisfies(&alg));
    }

    #[test]
    fn splitting_keeps_other_node_statuses(a in common::rad2(3, 4), pick in any::<prop::sample::Index>()) {
        let q = a.quiver();
        let x = pick.index(q.vertex_count());
        let (ax, split) = a.split_node(x).unwrap();
        let sq = ax.quiver();
        prop_assert!(sq.is_source(split.tail_index));
        prop_assert!(sq.is_sink(split.head_index));
        prop_assert_eq!(sq.vertex_count(), q.vertex_count() + 1);
        prop_assert_eq!(sq.arrow_count(), q.arrow_count());
        for y in (0..q.vertex_count()).filter(|&y| y != x) {
            prop_assert_eq!(ax.is_node(split.image(y)), a.is_node(y));
        }
    }

    #[test]
    fn full_split_is_bipartite_and_free(a in common::rad2(3, 4)) {
        let full = a.split_all_nodes().unwrap();
        let sq = full.algebra.quiver();
        prop_assert!(full.algebra.explicit_relations().is_empty());
        for v in 0..sq.vertex_count() {
            prop_assert!(sq.is_source(v) || sq.is_sink(v));
        }
    }

    #[test]
    fn sequential_splits_match_split_all(a in common::rad2(3, 4)) {
        // Splitting every vertex one at a time gives the same arrows up to renaming.
        let full = a.split_all_nodes().unwrap();
        let mut cur = a.clone();
        for v in a.quiver().vertices() {
            let x = cur.quiver().vertex_index(v).unwrap();
            let (next, _) = cur.split_node(x).unwrap();
            cur = next;
        }
        let endpoints = |q: &qrv_core::quiver::Quiver| -> Vec<(String, String, String)> {
            q.arrows().iter().map(|ar| (ar.id.clone(), q.vertex_name(ar.tail).to_string(), q.vertex_name(ar.head).to_string())).collect()
        };
        prop_assert_eq!(endpoints(cur.quiver()), endpoints(full.algebra.quiver()));
        prop_assert!(cur.explicit_relations().is_empty());
    }

    #[test]
    fn long_paths_vanish_on_rad2_points(
        (a, d) in common::rad2_with_dims(3, 4, 0, 2),
        r_picks in prop::collection::vec(any::<prop::sample::Index>(), 3),
        seed in any::<u64>(),
    ) {
        let q = a.quiver();
        let full = a.split_all_nodes().unwrap();
        let r = DimensionVector((0..q.vertex_count()).map(|x| r_picks[x].index(d[x] + 1)).collect());
        let sd = full.split_dims(&d, &r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Representation::random(full.algebra.quiver(), &field(), sd, &mut rng);
        let n = embed_split_all(q, &full, &m).unwrap();
        prop_assert!(n.satisfies(&a));
        for x in 0..q.vertex_count() {
            prop_assert!(x_rank(q, &n, x) <= r[x]);
        }
        for (i, o) in q.composable_pairs() {
            for o2 in q.out_arrows(q.arrow(o).head) {
                prop_assert!(n.path_product(&[i, o, o2]).unwrap().is_zero());
            }
        }
    }
}

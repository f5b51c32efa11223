#![allow(dead_code)]

use proptest::prelude::*;
use qrv_core::quiver::{AlgebraPresentation, DimensionVector, Quiver};

/// Vertices `v0..`, arrows `a0..` with the given endpoints.
pub fn quiver(n: usize, arrows: &[(usize, usize)]) -> Quiver {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let triples = arrows
        .iter()
        .enumerate()
        .map(|(i, &(t, h))| (format!("a{i}"), vertices[t].clone(), vertices[h].clone()));
    Quiver::new(vertices.clone(), triples).expect("distinct names")
}

/// A quiver with up to `max_v` vertices and `max_a` arrows, loops allowed.
pub fn small_quiver(max_v: usize, max_a: usize) -> impl Strategy<Value = Quiver> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_a).prop_map(move |arrows| quiver(n, &arrows))
    })
}

pub fn rad2(max_v: usize, max_a: usize) -> impl Strategy<Value = AlgebraPresentation> {
    small_quiver(max_v, max_a).prop_map(AlgebraPresentation::radical_square_zero)
}

/// A radical square zero algebra with a dimension vector, entries in `lo..=hi`.
pub fn rad2_with_dims(max_v: usize, max_a: usize, lo: usize, hi: usize) -> impl Strategy<Value = (AlgebraPresentation, DimensionVector)> {
    rad2(max_v, max_a).prop_flat_map(move |a| {
        let n = a.quiver().vertex_count();
        (Just(a), prop::collection::vec(lo..=hi, n).prop_map(DimensionVector))
    })
}

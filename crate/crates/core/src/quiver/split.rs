use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::quiver::{AlgebraPresentation, Arrow, DimensionVector, Quiver, Representation};

/// Bookkeeping for one split node: `x` becomes a source `x_t` (carrying the
/// out-arrows) and a sink `x_h` (carrying the in-arrows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSplit {
    pub vertex: String,
    /// Index of `x` in the unsplit quiver.
    pub original_index: usize,
    pub tail_name: String,
    pub head_name: String,
    /// Indices of `x_t` and `x_h` in the split quiver.
    pub tail_index: usize,
    pub head_index: usize,
}

/// The fully split quiver of a radical square zero algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullSplit {
    pub algebra: AlgebraPresentation,
    /// One entry per original vertex, in vertex order.
    pub splits: Vec<NodeSplit>,
}

/// Where an arrow's split-side matrix sits inside the unsplit matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPlacement {
    pub row_offset: usize,
    pub col_offset: usize,
}

/// A single split at `x` together with the rank `r = d^x(x_h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitContext {
    pub split: NodeSplit,
    pub dim: usize,
    pub rank: usize,
}

fn fresh_name(base: &str, suffix: &str, taken: &HashSet<String>) -> String {
    let plain = format!("{base}_{suffix}");
    if !taken.contains(&plain) {
        return plain;
    }
    (1..)
        .map(|n| format!("{base}_{suffix}_{n}"))
        .find(|c| !taken.contains(c))
        .expect("some counter is free")
}

impl AlgebraPresentation {
    /// Splits the node `x`. Relations passing strictly through `x` are dropped.
    pub fn split_node(&self, x: usize) -> Result<(AlgebraPresentation, NodeSplit)> {
        let q = self.quiver();
        if x >= q.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{x}")));
        }
        if !self.is_node(x) {
            return Err(Error::NotANode(q.vertex_name(x).into()));
        }
        let mut taken: HashSet<String> = q.vertices().iter().cloned().collect();
        let name = q.vertex_name(x).to_string();
        let tail_name = fresh_name(&name, "t", &taken);
        taken.insert(tail_name.clone());
        let head_name = fresh_name(&name, "h", &taken);

        let mut vertices = Vec::with_capacity(q.vertex_count() + 1);
        for (y, v) in q.vertices().iter().enumerate() {
            if y == x {
                vertices.push(tail_name.clone());
                vertices.push(head_name.clone());
            } else {
                vertices.push(v.clone());
            }
        }
        let shift = |y: usize| if y > x { y + 1 } else { y };
        let arrows: Vec<Arrow> = q
            .arrows()
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                tail: if a.tail == x { x } else { shift(a.tail) },
                head: if a.head == x { x + 1 } else { shift(a.head) },
            })
            .collect();
        let split_quiver = Quiver::from_indexed(vertices, arrows)?;
        let relations: Vec<Vec<usize>> = self
            .explicit_relations()
            .iter()
            .filter(|p| p.windows(2).all(|w| q.arrow(w[0]).head != x))
            .cloned()
            .collect();
        let flag = self.rad_square_zero_flag() && !split_quiver.composable_pairs().is_empty();
        let algebra = AlgebraPresentation::new(split_quiver, relations, flag)?;
        let split = NodeSplit {
            vertex: name,
            original_index: x,
            tail_name,
            head_name,
            tail_index: x,
            head_index: x + 1,
        };
        Ok((algebra, split))
    }

    pub fn split_node_named(&self, x: &str) -> Result<(AlgebraPresentation, NodeSplit)> {
        self.split_node(self.quiver().vertex_index(x)?)
    }

    /// Splits every vertex; the result is bipartite with vertex order
    /// `x1_t, x1_h, x2_t, x2_h, ...` and no relations.
    pub fn split_all_nodes(&self) -> Result<FullSplit> {
        let q = self.quiver();
        if let Some(x) = (0..q.vertex_count()).find(|&x| !self.is_node(x)) {
            return Err(Error::NotANode(q.vertex_name(x).into()));
        }
        let mut taken: HashSet<String> = q.vertices().iter().cloned().collect();
        let mut vertices = Vec::with_capacity(2 * q.vertex_count());
        let mut splits = Vec::with_capacity(q.vertex_count());
        for (x, name) in q.vertices().iter().enumerate() {
            let tail_name = fresh_name(name, "t", &taken);
            taken.insert(tail_name.clone());
            let head_name = fresh_name(name, "h", &taken);
            taken.insert(head_name.clone());
            vertices.push(tail_name.clone());
            vertices.push(head_name.clone());
            splits.push(NodeSplit {
                vertex: name.clone(),
                original_index: x,
                tail_name,
                head_name,
                tail_index: 2 * x,
                head_index: 2 * x + 1,
            });
        }
        let arrows = q
            .arrows()
            .iter()
            .map(|a| Arrow { id: a.id.clone(), tail: 2 * a.tail, head: 2 * a.head + 1 })
            .collect();
        let algebra = AlgebraPresentation::free(Quiver::from_indexed(vertices, arrows)?);
        Ok(FullSplit { algebra, splits })
    }
}

impl NodeSplit {
    /// Index in the split quiver of an original vertex other than `x`.
    pub fn image(&self, y: usize) -> usize {
        debug_assert_ne!(y, self.original_index);
        if y > self.original_index {
            y + 1
        } else {
            y
        }
    }
}

/// `d^x_r`: `x_t` gets `d(x) - r`, `x_h` gets `r`.
pub fn split_dimvec(d: &DimensionVector, split: &NodeSplit, r: usize) -> Result<DimensionVector> {
    let x = split.original_index;
    let dx = *d.0.get(x).ok_or_else(|| Error::DimensionMismatch("vector too short".into()))?;
    if r > dx {
        return Err(Error::RankOutOfRange { vertex: split.vertex.clone(), rank: r, max: dx });
    }
    let mut out = Vec::with_capacity(d.len() + 1);
    out.extend_from_slice(&d.0[..x]);
    out.push(dx - r);
    out.push(r);
    out.extend_from_slice(&d.0[x + 1..]);
    Ok(DimensionVector(out))
}

impl FullSplit {
    /// The split dimension vector `(d(x) - r(x), r(x))` per vertex.
    pub fn split_dims(&self, d: &DimensionVector, r: &DimensionVector) -> Result<DimensionVector> {
        if d.len() != self.splits.len() || r.len() != self.splits.len() {
            return Err(Error::DimensionMismatch("rank/dimension vector length".into()));
        }
        let mut out = Vec::with_capacity(2 * d.len());
        for (s, (&dx, &rx)) in self.splits.iter().zip(d.0.iter().zip(&r.0)) {
            if rx > dx {
                return Err(Error::RankOutOfRange { vertex: s.vertex.clone(), rank: rx, max: dx });
            }
            out.push(dx - rx);
            out.push(rx);
        }
        Ok(DimensionVector(out))
    }
}

impl SplitContext {
    pub fn new(split: NodeSplit, d: &DimensionVector, rank: usize) -> Result<Self> {
        let dim = d[split.original_index];
        if rank > dim {
            return Err(Error::RankOutOfRange { vertex: split.vertex.clone(), rank, max: dim });
        }
        Ok(SplitContext { split, dim, rank })
    }

    /// Block position of arrow `a` of the unsplit quiver.
    pub fn placement(&self, original: &Quiver, a: usize) -> BlockPlacement {
        let col_offset = if original.arrow(a).tail == self.split.original_index { self.rank } else { 0 };
        BlockPlacement { row_offset: 0, col_offset }
    }

    pub fn split_dims(&self, d: &DimensionVector) -> Result<DimensionVector> {
        split_dimvec(d, &self.split, self.rank)
    }
}

/// The embedding of split representations: arrows into `x` gain zero rows
/// below, arrows out of `x` gain zero columns on the left, loops become
/// `[[0, M], [0, 0]]`.
pub fn embed_representation<F: Field>(
    original: &Quiver,
    ctx: &SplitContext,
    m: &Representation<F>,
) -> Result<Representation<F>> {
    let x = ctx.split.original_index;
    let md = m.dims();
    if md.len() != original.vertex_count() + 1
        || md[ctx.split.tail_index] + md[ctx.split.head_index] != ctx.dim
        || md[ctx.split.head_index] != ctx.rank
    {
        return Err(Error::DimensionMismatch(format!(
            "split representation does not have dimension vector d^x_r with d(x)={}, r={}",
            ctx.dim, ctx.rank
        )));
    }
    let d = DimensionVector(
        (0..original.vertex_count())
            .map(|y| if y == x { ctx.dim } else { md[ctx.split.image(y)] })
            .collect(),
    );
    let f = m.field();
    let matrices = original
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut n = Matrix::zeros(f, d[a.head], d[a.tail]);
            let p = ctx.placement(original, i);
            n.paste(m.matrix(i), p.row_offset, p.col_offset);
            n
        })
        .collect();
    Representation::new(original, f, d, matrices)
}

/// The embedding for all vertices at once, from a representation of the
/// fully split quiver.
pub fn embed_split_all<F: Field>(
    original: &Quiver,
    full: &FullSplit,
    m: &Representation<F>,
) -> Result<Representation<F>> {
    let md = m.dims();
    if md.len() != 2 * original.vertex_count() {
        return Err(Error::DimensionMismatch("not a representation of the split quiver".into()));
    }
    let rank = |y: usize| md[full.splits[y].head_index];
    let d = DimensionVector(
        full.splits.iter().map(|s| md[s.tail_index] + md[s.head_index]).collect(),
    );
    let f = m.field();
    let matrices = original
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut n = Matrix::zeros(f, d[a.head], d[a.tail]);
            n.paste(m.matrix(i), 0, rank(a.tail));
            n
        })
        .collect();
    Representation::new(original, f, d, matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};
    use crate::quiver::x_rank;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_loop() -> AlgebraPresentation {
        AlgebraPresentation::parse(
            r#"{"vertices":["1"],"arrows":[{"id":"c","tail":"1","head":"1"}],"radical_square_zero":true}"#,
        )
        .unwrap()
    }

    #[test]
    fn split_one_loop() {
        let (ax, s) = one_loop().split_node(0).unwrap();
        let q = ax.quiver();
        assert_eq!(q.vertices(), ["1_t", "1_h"]);
        assert_eq!((q.arrow(0).tail, q.arrow(0).head), (0, 1));
        assert!(ax.relation_paths().is_empty());
        assert_eq!((s.tail_name.as_str(), s.head_name.as_str()), ("1_t", "1_h"));
    }

    #[test]
    fn split_sink_adds_isolated_source() {
        let q = Quiver::new(["1", "2"], [("a".into(), "1".into(), "2".into())]).unwrap();
        let (ax, s) = AlgebraPresentation::free(q).split_node(1).unwrap();
        assert_eq!(ax.quiver().vertices(), ["1", "2_t", "2_h"]);
        assert_eq!(ax.quiver().arrow(0).head, s.head_index);
        assert!(ax.quiver().out_arrows(s.tail_index).is_empty());
        assert!(ax.quiver().in_arrows(s.tail_index).is_empty());
    }

    #[test]
    fn split_rejects_non_node() {
        let q = Quiver::new(["1"], [("c".into(), "1".into(), "1".into())]).unwrap();
        assert_eq!(AlgebraPresentation::free(q).split_node(0), Err(Error::NotANode("1".into())));
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let q = Quiver::new(["x", "x_t"], Vec::new()).unwrap();
        let (ax, s) = AlgebraPresentation::free(q).split_node(0).unwrap();
        assert_eq!(s.tail_name, "x_t_1");
        assert_eq!(ax.quiver().vertices(), ["x_t_1", "x_h", "x_t"]);
    }

    #[test]
    fn rad_square_zero_arrow_splits_to_bipartite() {
        let q = Quiver::new(["1", "2"], [("a".into(), "1".into(), "2".into())]).unwrap();
        let a = AlgebraPresentation::radical_square_zero(q);
        let (a1, _) = a.split_node(0).unwrap();
        let x2 = a1.quiver().vertex_index("2").unwrap();
        let (a2, _) = a1.split_node(x2).unwrap();
        assert_eq!(a2.quiver().vertex_count(), 4);
        assert!(a2.relation_paths().is_empty());
        let full = a.split_all_nodes().unwrap();
        assert_eq!(full.algebra.quiver().vertices(), a2.quiver().vertices());
        assert_eq!(full.algebra.quiver(), a2.quiver());
    }

    #[test]
    fn split_dimension_vectors() {
        let (_, s) = one_loop().split_node(0).unwrap();
        let d = DimensionVector(vec![2]);
        assert_eq!(split_dimvec(&d, &s, 1).unwrap().0, vec![1, 1]);
        assert_eq!(split_dimvec(&d, &s, 0).unwrap().0, vec![2, 0]);
        assert_eq!(split_dimvec(&d, &s, 2).unwrap().0, vec![0, 2]);
        assert!(split_dimvec(&d, &s, 3).is_err());
    }

    #[test]
    fn embedding_of_one_loop() {
        let a = one_loop();
        let (ax, s) = a.split_node(0).unwrap();
        let f = Rationals;
        let ctx = SplitContext::new(s, &DimensionVector(vec![2]), 1).unwrap();
        let m = Representation::new(
            ax.quiver(),
            &f,
            DimensionVector(vec![1, 1]),
            vec![Matrix::from_i64_rows(&f, &[&[1]])],
        )
        .unwrap();
        let n = embed_representation(a.quiver(), &ctx, &m).unwrap();
        assert_eq!(n.matrix(0), &Matrix::from_i64_rows(&f, &[&[0, 1], &[0, 0]]));
        let zero = Representation::zero(ax.quiver(), &f, DimensionVector(vec![1, 1]));
        assert!(embed_representation(a.quiver(), &ctx, &zero).unwrap().matrix(0).is_zero());
    }

    #[test]
    fn embedding_pads_rows_for_arrows_into_x() {
        let q = Quiver::new(["y", "x"], [("a".into(), "y".into(), "x".into())]).unwrap();
        let a = AlgebraPresentation::radical_square_zero(q);
        let (ax, s) = a.split_node(1).unwrap();
        let f = Rationals;
        let ctx = SplitContext::new(s, &DimensionVector(vec![1, 3]), 2).unwrap();
        let m = Representation::new(
            ax.quiver(),
            &f,
            DimensionVector(vec![1, 1, 2]),
            vec![Matrix::from_i64_rows(&f, &[&[4], &[5]])],
        )
        .unwrap();
        let n = embed_representation(a.quiver(), &ctx, &m).unwrap();
        assert_eq!(n.matrix(0), &Matrix::from_i64_rows(&f, &[&[4], &[5], &[0]]));
    }

    #[test]
    fn split_all_embedding_matches_single_splits() {
        let a = AlgebraPresentation::parse(
            r#"{"vertices":["1","2"],"arrows":[{"id":"a","tail":"1","head":"2"},{"id":"b","tail":"2","head":"2"},{"id":"c","tail":"2","head":"1"}],"radical_square_zero":true}"#,
        )
        .unwrap();
        let q = a.quiver();
        let full = a.split_all_nodes().unwrap();
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = DimensionVector(vec![2, 3]);
        let r = DimensionVector(vec![1, 2]);
        let sd = full.split_dims(&d, &r).unwrap();
        let m = Representation::random(full.algebra.quiver(), &f, sd.clone(), &mut rng);
        let n = embed_split_all(q, &full, &m).unwrap();
        assert!(n.satisfies(&a));

        // Embed by splitting vertex 2 first, then vertex 1 inside A^2.
        let (a2, s2) = a.split_node(1).unwrap();
        let (a21, s1) = a2.split_node(0).unwrap();
        assert_eq!(a21.quiver().vertices(), full.algebra.quiver().vertices());
        let ctx1 = SplitContext::new(s1, &split_dimvec(&d, &s2, 2).unwrap(), 1).unwrap();
        let ctx2 = SplitContext::new(s2, &d, 2).unwrap();
        let mid = embed_representation(a2.quiver(), &ctx1, &m).unwrap();
        let seq = embed_representation(q, &ctx2, &mid).unwrap();
        assert_eq!(seq, n);
        assert_eq!(x_rank(q, &n, 1), x_rank(full.algebra.quiver(), &m, 3));
    }
}

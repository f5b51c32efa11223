//! Quivers with monomial relations.
//!
//! Paths are written left to right in traversal order: `[a, b]` means "first
//! `a`, then `b`" and needs `head(a) == tail(b)`. Evaluated on a
//! representation this is the matrix product `M_b * M_a`.

mod dimvec;
mod representation;
mod split;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dimvec::DimensionVector;
pub use representation::{h_matrix, t_matrix, x_rank, AnyRepresentation, Representation};
pub use split::{
    embed_representation, embed_split_all, split_dimvec, BlockPlacement, FullSplit, NodeSplit,
    SplitContext,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_lookup: HashMap<String, usize>,
    arrow_lookup: HashMap<String, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}
impl Eq for Quiver {}

impl Quiver {
    /// Arrows are `(id, tail, head)` triples naming declared vertices.
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_lookup = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::Malformed("vertex ids must be nonempty".into()));
            }
            if vertex_lookup.insert(v.clone(), i).is_some() {
                return Err(Error::Duplicate(v.clone()));
            }
        }
        let mut arrow_lookup = HashMap::new();
        let mut out = Vec::new();
        for (id, tail, head) in arrows {
            if id.is_empty() {
                return Err(Error::Malformed("arrow ids must be nonempty".into()));
            }
            let t = *vertex_lookup.get(&tail).ok_or_else(|| Error::UnknownVertex(tail.clone()))?;
            let h = *vertex_lookup.get(&head).ok_or_else(|| Error::UnknownVertex(head.clone()))?;
            if arrow_lookup.insert(id.clone(), out.len()).is_some() {
                return Err(Error::Duplicate(id));
            }
            out.push(Arrow { id, tail: t, head: h });
        }
        Ok(Quiver { vertices, arrows: out, vertex_lookup, arrow_lookup })
    }

    pub(crate) fn from_indexed(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let triples: Vec<_> = arrows
            .iter()
            .map(|a| (a.id.clone(), vertices[a.tail].clone(), vertices[a.head].clone()))
            .collect();
        Quiver::new(vertices, triples)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }
    pub fn vertex_name(&self, x: usize) -> &str {
        &self.vertices[x]
    }
    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertex_lookup.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize> {
        self.arrow_lookup.get(id).copied().ok_or_else(|| Error::UnknownArrow(id.into()))
    }

    /// Arrows with head `x`, in declaration order.
    pub fn in_arrows(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].head == x).collect()
    }

    /// Arrows with tail `x`, in declaration order.
    pub fn out_arrows(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].tail == x).collect()
    }

    pub fn loop_count(&self, x: usize) -> usize {
        self.arrows.iter().filter(|a| a.tail == x && a.head == x).count()
    }

    pub fn is_source(&self, x: usize) -> bool {
        self.arrows.iter().all(|a| a.head != x)
    }

    pub fn is_sink(&self, x: usize) -> bool {
        self.arrows.iter().all(|a| a.tail != x)
    }

    /// Ordered pairs `(a, b)` with `head(a) == tail(b)`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            for (j, b) in self.arrows.iter().enumerate() {
                if a.head == b.tail {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when some directed cycle (including a loop) exists.
    pub fn has_oriented_cycle(&self) -> bool {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in &self.arrows {
                if a.tail == v {
                    indeg[a.head] -= 1;
                    if indeg[a.head] == 0 {
                        stack.push(a.head);
                    }
                }
            }
        }
        seen < n
    }

    pub fn ambient_dimension(&self, d: &DimensionVector) -> usize {
        self.arrows.iter().map(|a| d[a.tail] * d[a.head]).sum()
    }
}

/// A bound quiver algebra `kQ/I` with `I` generated by paths of length at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    quiver: Quiver,
    relations: Vec<Vec<usize>>,
    rad_square_zero: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowSpec {
    id: String,
    tail: String,
    head: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<ArrowSpec>,
    #[serde(default)]
    relations: Vec<Vec<String>>,
    #[serde(default)]
    radical_square_zero: bool,
}

impl AlgebraPresentation {
    /// Relations are arrow-index paths; duplicates are collapsed.
    pub fn new(quiver: Quiver, relations: Vec<Vec<usize>>, rad_square_zero: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for path in relations {
            let names = || path.iter().map(|&a| quiver.arrows[a].id.clone()).collect::<Vec<_>>();
            if path.iter().any(|&a| a >= quiver.arrow_count()) {
                return Err(Error::Malformed("relation references a missing arrow".into()));
            }
            if path.len() < 2 {
                return Err(Error::RelationTooShort(names()));
            }
            if path.windows(2).any(|w| quiver.arrows[w[0]].head != quiver.arrows[w[1]].tail) {
                return Err(Error::NotComposable(names()));
            }
            if seen.insert(path.clone()) {
                kept.push(path);
            }
        }
        Ok(AlgebraPresentation { quiver, relations: kept, rad_square_zero })
    }

    /// The path algebra with no relations.
    pub fn free(quiver: Quiver) -> Self {
        AlgebraPresentation { quiver, relations: Vec::new(), rad_square_zero: false }
    }

    pub fn radical_square_zero(quiver: Quiver) -> Self {
        AlgebraPresentation { quiver, relations: Vec::new(), rad_square_zero: true }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: QuiverFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let quiver = Quiver::new(
            file.vertices,
            file.arrows.into_iter().map(|a| (a.id, a.tail, a.head)),
        )?;
        let relations = file
            .relations
            .iter()
            .map(|path| path.iter().map(|id| quiver.arrow_index(id)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        AlgebraPresentation::new(quiver, relations, file.radical_square_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let q = &self.quiver;
        let file = QuiverFile {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| ArrowSpec {
                    id: a.id.clone(),
                    tail: q.vertices[a.tail].clone(),
                    head: q.vertices[a.head].clone(),
                })
                .collect(),
            relations: self.relations.iter().map(|p| self.path_names(p)).collect(),
            radical_square_zero: self.rad_square_zero,
        };
        serde_json::to_value(file).expect("quiver file serializes")
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// The explicitly listed relation paths.
    pub fn explicit_relations(&self) -> &[Vec<usize>] {
        &self.relations
    }

    pub fn rad_square_zero_flag(&self) -> bool {
        self.rad_square_zero
    }

    pub fn path_names(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&a| self.quiver.arrows[a].id.clone()).collect()
    }

    /// All generating relation paths, with the flag expanded to every
    /// composable length-2 path.
    pub fn relation_paths(&self) -> Vec<Vec<usize>> {
        let mut out = self.relations.clone();
        if self.rad_square_zero {
            let mut seen: BTreeSet<Vec<usize>> = out.iter().cloned().collect();
            for (a, b) in self.quiver.composable_pairs() {
                if seen.insert(vec![a, b]) {
                    out.push(vec![a, b]);
                }
            }
        }
        out
    }

    /// Whether the length-2 path "a then b" is a generating relation.
    pub fn kills_pair(&self, a: usize, b: usize) -> bool {
        let (qa, qb) = (&self.quiver.arrows[a], &self.quiver.arrows[b]);
        if qa.head != qb.tail {
            return false;
        }
        self.rad_square_zero || self.relations.iter().any(|p| p.len() == 2 && p[0] == a && p[1] == b)
    }

    /// Every length-2 path through `x` is a relation. Sinks and sources qualify.
    pub fn is_node(&self, x: usize) -> bool {
        let ins = self.quiver.in_arrows(x);
        let outs = self.quiver.out_arrows(x);
        ins.iter().all(|&a| outs.iter().all(|&b| self.kills_pair(a, b)))
    }

    pub fn is_node_named(&self, x: &str) -> Result<bool> {
        Ok(self.is_node(self.quiver.vertex_index(x)?))
    }

    /// All vertices are nodes, i.e. the algebra is `kQ / rad^2`.
    pub fn is_rad_square_zero(&self) -> bool {
        (0..self.quiver.vertex_count()).all(|x| self.is_node(x))
    }

    pub fn node_statuses(&self) -> Vec<(String, bool)> {
        (0..self.quiver.vertex_count())
            .map(|x| (self.quiver.vertices[x].clone(), self.is_node(x)))
            .collect()
    }
}

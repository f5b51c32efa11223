//! Weights, the reduction of an algebra by the signs of a weight at its
//! nodes, and the shape of semistable representations around a node.
//!
//! At a node `x`, a `theta`-semistable representation has `h_x` surjective
//! and `t_x = 0` when `theta(x) < 0`, and `h_x = 0` with `t_x` injective when
//! `theta(x) > 0`. Deleting the arrows that must vanish therefore leaves the
//! semistable locus unchanged.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactla::{Field, PrimeField};
use crate::quiver::{h_matrix, t_matrix, Arrow, AlgebraPresentation, DimensionVector, Quiver, Representation};
use crate::verify::{
    describe, for_each_representation, representation_from_flat, small_instances, Layout, SemistabilityChecker,
    SmallField, ORACLE_AMBIENT_BOUND,
};

/// A weight `theta`, one integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    /// Parses `v1:w1,v2:w2,...`; every vertex exactly once.
    pub fn parse(quiver: &Quiver, text: &str) -> Result<Self> {
        let mut w: Vec<Option<i64>> = vec![None; quiver.vertex_count()];
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (v, n) = part
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected vertex:weight, got {part:?}")))?;
            let i = quiver.vertex_index(v.trim())?;
            let n: i64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad weight {n:?}")))?;
            if w[i].replace(n).is_some() {
                return Err(Error::Duplicate(v.trim().into()));
            }
        }
        w.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| Error::Malformed(format!("no weight for vertex {}", quiver.vertex_name(i)))))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    pub fn format(&self, quiver: &Quiver) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}:{w}", quiver.vertex_name(i)))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self, quiver: &Quiver) -> Value {
        let mut m = Map::new();
        for (i, w) in self.0.iter().enumerate() {
            m.insert(quiver.vertex_name(i).into(), json!(w));
        }
        Value::Object(m)
    }

    /// `theta . d`.
    pub fn pair(&self, d: &DimensionVector) -> i64 {
        self.0.iter().zip(d.entries()).map(|(w, &k)| w * k as i64).sum()
    }
}

/// `A'` together with where each vertex and arrow of `A` went.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub algebra: AlgebraPresentation,
    pub vertex_map: Vec<Option<usize>>,
    pub arrow_map: Vec<Option<usize>>,
}

impl Reduction {
    pub fn weight(&self, theta: &Weight) -> Weight {
        Weight(self.kept(&theta.0))
    }

    pub fn dims(&self, d: &DimensionVector) -> DimensionVector {
        DimensionVector(self.kept(d.entries()))
    }

    fn kept<T: Clone>(&self, values: &[T]) -> Vec<T> {
        values.iter().zip(&self.vertex_map).filter(|(_, m)| m.is_some()).map(|(v, _)| v.clone()).collect()
    }

    /// `M'`: the maps of deleted arrows and the spaces at deleted vertices
    /// are dropped.
    pub fn strip<F: Field>(&self, m: &Representation<F>) -> Result<Representation<F>> {
        let matrices = m
            .matrices()
            .iter()
            .zip(&self.arrow_map)
            .filter(|(_, a)| a.is_some())
            .map(|(x, _)| x.clone())
            .collect();
        Representation::new(self.algebra.quiver(), m.field(), self.dims(m.dims()), matrices)
    }
}

/// Applies the deletion rules at every vertex: `theta(x) > 0` deletes the
/// arrows with head `x`, `theta(x) < 0` those with tail `x`, and
/// `theta(x) = 0` deletes `x` with its arrows. Requires every vertex to be a
/// node.
pub fn reduce_by_weight(algebra: &AlgebraPresentation, theta: &Weight) -> Result<Reduction> {
    let all: Vec<usize> = (0..algebra.quiver().vertex_count()).collect();
    reduce_at_nodes(algebra, theta, &all)
}

/// The deletion rules at the listed vertices only, each of which must be a
/// node. A zero-weight vertex is deleted when the algebra is radical square
/// zero; otherwise only its incident arrows are.
pub fn reduce_at_nodes(algebra: &AlgebraPresentation, theta: &Weight, at: &[usize]) -> Result<Reduction> {
    let q = algebra.quiver();
    if theta.0.len() != q.vertex_count() {
        return Err(Error::DimensionMismatch("weight has the wrong number of entries".into()));
    }
    for &x in at {
        if !algebra.is_node(x) {
            return Err(Error::NotANode(q.vertex_name(x).into()));
        }
    }
    let rad2 = algebra.is_rad_square_zero();
    let at: BTreeSet<usize> = at.iter().copied().collect();
    let deleted_vertex = |v: usize| rad2 && at.contains(&v) && theta.0[v] == 0;
    let deletes = |a: &Arrow| {
        let rule = |v: usize, head: bool| {
            at.contains(&v)
                && match theta.0[v].signum() {
                    1 => head,
                    -1 => !head,
                    _ => true,
                }
        };
        rule(a.head, true) || rule(a.tail, false)
    };
    let mut vertex_map = Vec::new();
    let mut vertices = Vec::new();
    for (v, name) in q.vertices().iter().enumerate() {
        if deleted_vertex(v) {
            vertex_map.push(None);
        } else {
            vertex_map.push(Some(vertices.len()));
            vertices.push(name.clone());
        }
    }
    let mut arrow_map = Vec::new();
    let mut arrows = Vec::new();
    for a in q.arrows() {
        if deletes(a) {
            arrow_map.push(None);
        } else {
            arrow_map.push(Some(arrows.len()));
            arrows.push((a.id.clone(), q.vertex_name(a.tail).to_string(), q.vertex_name(a.head).to_string()));
        }
    }
    let quiver = Quiver::new(vertices, arrows)?;
    let relations = algebra
        .explicit_relations()
        .iter()
        .filter_map(|p| p.iter().map(|&a| arrow_map[a]).collect::<Option<Vec<_>>>())
        .collect();
    let reduced = AlgebraPresentation::new(quiver, relations, algebra.rad_square_zero_flag())?;
    Ok(Reduction { algebra: reduced, vertex_map, arrow_map })
}

/// Which case of the node shape law a representation falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeShape {
    /// `theta(x) < 0`, `h_x` surjective, `t_x = 0`.
    CaseA,
    /// `theta(x) > 0`, `h_x = 0`, `t_x` injective.
    CaseB,
    /// `theta(x) = 0`.
    CaseC,
    Violation,
}

impl NodeShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeShape::CaseA => "case_a",
            NodeShape::CaseB => "case_b",
            NodeShape::CaseC => "case_c",
            NodeShape::Violation => "violation",
        }
    }
}

pub fn node_shape_check<F: Field>(
    algebra: &AlgebraPresentation,
    m: &Representation<F>,
    theta: &Weight,
    x: usize,
) -> Result<NodeShape> {
    let q = algebra.quiver();
    if !algebra.is_node(x) {
        return Err(Error::NotANode(q.vertex_name(x).into()));
    }
    let dx = m.dims()[x];
    let h = h_matrix(q, m, x);
    let t = t_matrix(q, m, x);
    Ok(match theta.0[x].signum() {
        0 => NodeShape::CaseC,
        -1 if h.rank() == dx && t.is_zero() => NodeShape::CaseA,
        1 if h.is_zero() && t.rank() == dx => NodeShape::CaseB,
        _ => NodeShape::Violation,
    })
}

/// Bounds of the brute-force node suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteBounds {
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub max_total_dim: usize,
    pub max_weight: i64,
    pub q: u64,
    /// Instances with more ambient coordinates are skipped.
    pub max_ambient: usize,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds { max_vertices: 2, max_arrows: 3, max_total_dim: 4, max_weight: 2, q: 2, max_ambient: 16 }
    }
}

/// Totals of the node suite; a pass has no violations and no mismatches.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub instances: usize,
    pub skipped: Vec<String>,
    pub weights: usize,
    pub representations: usize,
    pub semistable: usize,
    pub violations: Vec<String>,
    pub mismatches: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instances": self.instances,
            "skipped": self.skipped,
            "weights": self.weights,
            "representations": self.representations,
            "semistable": self.semistable,
            "violations": self.violations,
            "mismatches": self.mismatches,
            "passed": self.passed(),
        })
    }
}

/// Weights with entries in `-bound..=bound` and `theta . d = 0`.
pub fn balanced_weights(n: usize, bound: i64, d: &DimensionVector) -> Vec<Weight> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<i64>| (-bound..=bound).map(move |k| [w.clone(), vec![k]].concat()))
            .collect();
    }
    out.into_iter().map(Weight).filter(|w| w.pair(d) == 0).collect()
}

/// For every small radical square zero instance, weight and representation
/// over `F_q`: semistable representations obey the node shape law at every
/// vertex, and semistability agrees with that of the reduced representation.
pub fn node_suite(bounds: &SuiteBounds) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    let instances = small_instances(bounds.max_vertices, bounds.max_arrows, bounds.max_total_dim)
        .into_iter()
        .filter(|i| i.dims.total() <= bounds.max_total_dim);
    for inst in instances {
        let d = &inst.dims;
        if inst.algebra.quiver().ambient_dimension(d) > bounds.max_ambient {
            report.skipped.push(format!("{} at {}", describe(&inst.algebra), d.format(inst.algebra.quiver())));
            continue;
        }
        let thetas = balanced_weights(inst.algebra.quiver().vertex_count(), bounds.max_weight, d);
        node_check_into(&inst.algebra, d, &thetas, bounds.q, &mut report)?;
    }
    Ok(report)
}

/// The node suite on one algebra and dimension vector, for the given
/// weights.
pub fn node_check(algebra: &AlgebraPresentation, d: &DimensionVector, thetas: &[Weight], q: u64) -> Result<SuiteReport> {
    if !algebra.is_rad_square_zero() {
        return Err(Error::NotRadicalSquareZero);
    }
    d.check_domain(algebra.quiver())?;
    let ambient = algebra.quiver().ambient_dimension(d);
    if ambient > ORACLE_AMBIENT_BOUND {
        return Err(Error::BoundExceeded(format!("ambient dimension {ambient} exceeds {ORACLE_AMBIENT_BOUND}")));
    }
    let mut report = SuiteReport::default();
    node_check_into(algebra, d, thetas, q, &mut report)?;
    Ok(report)
}

fn node_check_into(
    alg: &AlgebraPresentation,
    d: &DimensionVector,
    thetas: &[Weight],
    q_size: u64,
    report: &mut SuiteReport,
) -> Result<()> {
    let field = PrimeField::new(q_size)?;
    let small = SmallField::new(q_size, 3)?;
    let q = alg.quiver();
    let label = format!("{} at {}", describe(alg), d.format(q));
    let layout = Layout::new(alg, d);
    report.instances += 1;
    let mut reps = Vec::new();
    for_each_representation(alg, &layout, small, |x| reps.push(x.to_vec()));
    let checker = SemistabilityChecker::new(q_size, d)?;
    for theta in thetas {
        if theta.pair(d) != 0 {
            return Err(Error::WeightNotBalanced(theta.pair(d)));
        }
        report.weights += 1;
        let red = reduce_by_weight(alg, theta)?;
        let rq = red.algebra.quiver();
        let rtheta = red.weight(theta);
        let rchecker = SemistabilityChecker::new(q_size, &red.dims(d))?;
        for x in &reps {
            report.representations += 1;
            let ss = checker.check_flat(q, x, &theta.0, false)?;
            let m = representation_from_flat(q, &field, d, x);
            let stripped: Vec<u32> = red
                .strip(&m)?
                .matrices()
                .iter()
                .flat_map(|a| a.data().iter().map(|&v| v as u32))
                .collect();
            let rss = rchecker.check_flat(rq, &stripped, &rtheta.0, false)?;
            if ss != rss {
                report.mismatches.push(format!("{label}, theta {}: {ss} vs reduced {rss} at {x:?}", theta.format(q)));
            }
            if !ss {
                continue;
            }
            report.semistable += 1;
            for v in 0..q.vertex_count() {
                if node_shape_check(alg, &m, theta, v)? == NodeShape::Violation {
                    report.violations.push(format!(
                        "{label}, theta {}, vertex {}: {x:?}",
                        theta.format(q),
                        q.vertex_name(v)
                    ));
                }
            }
        }
    }
    Ok(())
}

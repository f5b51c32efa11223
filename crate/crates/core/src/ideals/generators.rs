use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Rationals};
use crate::ideals::poly::{ambient_variables, Monomial, Polynomial, Var};
use crate::ideals::symbolic::{build_h, build_t, SymbolicMatrix};
use crate::quiver::{AlgebraPresentation, DimensionVector, Quiver, SplitContext};

/// Which construction produced a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    MinorH,
    MinorT,
    ProductTH,
    TraceLoop,
    SaturatedP,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::MinorH => "minor_H",
            Provenance::MinorT => "minor_T",
            Provenance::ProductTH => "product_TH",
            Provenance::TraceLoop => "trace_loop",
            Provenance::SaturatedP => "saturated_P",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub poly: Polynomial,
    pub tag: Provenance,
    /// The vertex whose `H`/`T` matrices produced it.
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub dims: DimensionVector,
    pub ranks: DimensionVector,
    /// `None` when every vertex contributed.
    pub vertex: Option<usize>,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn polynomials(&self) -> impl Iterator<Item = &Polynomial> {
        self.generators.iter().map(|g| &g.poly)
    }

    pub fn with_tag(&self, tag: Provenance) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(move |g| g.tag == tag)
    }

    /// Wraps user-supplied polynomials (for negative controls and re-checks).
    pub fn from_polynomials(dims: DimensionVector, ranks: DimensionVector, polys: Vec<Polynomial>) -> Self {
        let generators = polys
            .into_iter()
            .map(|poly| Generator { poly, tag: Provenance::SaturatedP, vertex: 0 })
            .collect();
        GeneratorSet { dims, ranks, vertex: None, generators }
    }

    pub fn to_json(&self, quiver: &Quiver) -> Value {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| {
                json!({
                    "polynomial": g.poly.display(quiver),
                    "tag": g.tag.as_str(),
                    "vertex": quiver.vertex_name(g.vertex),
                    "degree": g.poly.degree(),
                })
            })
            .collect();
        json!({
            "dims": self.dims.to_json(quiver),
            "ranks": self.ranks.to_json(quiver),
            "vertex": self.vertex.map(|x| quiver.vertex_name(x).to_string()),
            "count": self.generators.len(),
            "generators": gens,
        })
    }
}

/// Families (1)-(4) at a single vertex, before deduplication.
fn vertex_families(quiver: &Quiver, d: &DimensionVector, x: usize, r: usize) -> Vec<Generator> {
    let h = build_h(quiver, d, x);
    let t = build_t(quiver, d, x);
    let mut out = Vec::new();
    let mut push = |poly: Polynomial, tag| out.push(Generator { poly, tag, vertex: x });
    for p in h.minors(r + 1) {
        push(p, Provenance::MinorH);
    }
    for p in t.minors(d[x] - r + 1) {
        push(p, Provenance::MinorT);
    }
    for p in t.mul(&h).entries() {
        push(p.clone(), Provenance::ProductTH);
    }
    for a in quiver.in_arrows(x) {
        if quiver.arrow(a).is_loop() {
            push(SymbolicMatrix::generic(quiver, d, a).trace(), Provenance::TraceLoop);
        }
    }
    out
}

/// Drops zeros and duplicates up to a scalar (keeping the first occurrence),
/// then sorts by degree and terms.
fn canonicalize(gens: Vec<Generator>) -> Vec<Generator> {
    let mut seen = HashSet::new();
    let mut out: Vec<Generator> = gens
        .into_iter()
        .filter(|g| !g.poly.is_zero() && seen.insert(g.poly.monic()))
        .collect();
    out.sort_by(|a, b| a.poly.degree().cmp(&b.poly.degree()).then_with(|| a.poly.cmp(&b.poly)));
    out
}

fn check_ranks(quiver: &Quiver, d: &DimensionVector, r: &DimensionVector) -> Result<()> {
    d.check_domain(quiver)?;
    r.check_domain(quiver)?;
    for x in 0..d.len() {
        if r[x] > d[x] {
            return Err(Error::RankOutOfRange { vertex: quiver.vertex_name(x).into(), rank: r[x], max: d[x] });
        }
    }
    Ok(())
}

/// Minors of `H_x` of size `r(x)+1`, minors of `T_x` of size `d(x)-r(x)+1`,
/// entries of `T_x H_x` and loop traces, over all vertices.
pub fn generators_for_component(quiver: &Quiver, d: &DimensionVector, r: &DimensionVector) -> Result<GeneratorSet> {
    check_ranks(quiver, d, r)?;
    let raw = (0..quiver.vertex_count()).flat_map(|x| vertex_families(quiver, d, x, r[x])).collect();
    Ok(GeneratorSet { dims: d.clone(), ranks: r.clone(), vertex: None, generators: canonicalize(raw) })
}

/// Families (1)-(4) at `x` plus a basis of the `GL(d(x))`-span of `p`.
/// `p` must already be written in the variables of the unsplit quiver.
pub fn generators_relative(
    algebra: &AlgebraPresentation,
    x: usize,
    d: &DimensionVector,
    r: usize,
    p: &[Polynomial],
) -> Result<GeneratorSet> {
    let quiver = algebra.quiver();
    d.check_domain(quiver)?;
    if !algebra.is_node(x) {
        return Err(Error::NotANode(quiver.vertex_name(x).into()));
    }
    if r > d[x] {
        return Err(Error::RankOutOfRange { vertex: quiver.vertex_name(x).into(), rank: r, max: d[x] });
    }
    let mut raw = vertex_families(quiver, d, x, r);
    for poly in saturate_span(quiver, d, x, p)? {
        raw.push(Generator { poly, tag: Provenance::SaturatedP, vertex: x });
    }
    let mut ranks = DimensionVector::zeros(d.len());
    ranks[x] = r;
    Ok(GeneratorSet { dims: d.clone(), ranks, vertex: Some(x), generators: canonicalize(raw) })
}

/// Rewrites a polynomial on the split side `(A^x, d^x_r)` in the variables
/// of `(A, d)`, shifting column indices of arrows leaving `x` by `r`.
pub fn lift_split_polynomial(original: &Quiver, ctx: &SplitContext, p: &Polynomial) -> Polynomial {
    p.rename(&|v: Var| {
        let place = ctx.placement(original, v.arrow);
        Var::new(v.arrow, v.row + place.row_offset, v.col + place.col_offset)
    })
}

/// Incremental row echelon form over coefficient vectors, keyed by leading monomial.
#[derive(Debug, Default, Clone)]
pub struct SpanBasis {
    rows: BTreeMap<Monomial, Polynomial>,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder after cancelling leading terms against stored rows.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut rem = p.clone();
        loop {
            let Some((lm, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) else {
                return rem;
            };
            match self.rows.get(&lm) {
                Some(row) => rem = rem.sub(&row.scale(&c)),
                None => return rem,
            }
        }
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p` if it is independent; returns whether the span grew.
    pub fn insert(&mut self, p: &Polynomial) -> bool {
        let rem = self.reduce(p);
        match rem.leading() {
            None => false,
            Some((lm, _)) => {
                let lm = lm.clone();
                self.rows.insert(lm, rem.monic());
                true
            }
        }
    }
}

/// `D_ij = sum_{head a = x} sum_c x_{a,i,c} d/dx_{a,j,c} - sum_{tail a = x} sum_r x_{a,r,j} d/dx_{a,r,i}`,
/// the action of the elementary matrix `E_ji` of `gl(d(x))`.
pub fn gl_derivation(quiver: &Quiver, x: usize, i: usize, j: usize, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        for (v, e) in m.powers() {
            let a = quiver.arrow(v.arrow);
            let coef = c * BigRational::from_integer(e.into());
            let rest: Vec<Var> = {
                let mut vars = m.vars().to_vec();
                let pos = vars.iter().position(|&w| w == v).expect("variable occurs");
                vars.remove(pos);
                vars
            };
            if a.head == x && v.row == j {
                let mut vars = rest.clone();
                vars.push(Var::new(v.arrow, i, v.col));
                out = out.add(&Polynomial::term(coef.clone(), Monomial::from_vars(vars)));
            }
            if a.tail == x && v.col == i {
                let mut vars = rest;
                vars.push(Var::new(v.arrow, v.row, j));
                out = out.sub(&Polynomial::term(coef, Monomial::from_vars(vars)));
            }
        }
    }
    out
}

/// A basis of the smallest `gl(d(x))`-stable subspace containing `p`.
/// In characteristic zero this is the span of the `GL(d(x))`-translates.
pub fn saturate_span(quiver: &Quiver, d: &DimensionVector, x: usize, p: &[Polynomial]) -> Result<Vec<Polynomial>> {
    d.check_domain(quiver)?;
    if p.iter().any(|q| !q.is_homogeneous()) {
        return Err(Error::Inhomogeneous);
    }
    let n = d[x];
    let mut by_degree: BTreeMap<usize, (SpanBasis, Vec<Polynomial>)> = BTreeMap::new();
    for q in p.iter().filter(|q| !q.is_zero()) {
        let entry = by_degree.entry(q.degree().unwrap_or(0)).or_default();
        if entry.0.insert(q) {
            entry.1.push(q.clone());
        }
    }
    let mut out = Vec::new();
    for (_, (mut basis, mut found)) in by_degree {
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for q in &frontier {
                for i in 0..n {
                    for j in 0..n {
                        let dq = gl_derivation(quiver, x, i, j, q);
                        if !dq.is_zero() && basis.insert(&dq) {
                            next.push(dq);
                        }
                    }
                }
            }
            found.extend(next.iter().cloned());
            frontier = next;
        }
        out.extend(found);
    }
    Ok(out)
}

/// `p` composed with the base change `g` at `x`: `X_a -> g X_a` for arrows
/// into `x` and `X_a -> X_a g^{-1}` for arrows out of `x`.
pub fn translate(quiver: &Quiver, d: &DimensionVector, x: usize, g: &Matrix<Rationals>, p: &Polynomial) -> Result<Polynomial> {
    let g_inv = g
        .inverse()?
        .ok_or_else(|| Error::DimensionMismatch("translation by a singular matrix".into()))?;
    let f = Rationals;
    let image = |v: Var| {
        let a = quiver.arrow(v.arrow);
        // Row side: sum_k g[i][k] X[k][j]; column side: sum_k X[i][k] ginv[k][j].
        let rows: Vec<(usize, BigRational)> = if a.head == x {
            (0..d[x]).map(|k| (k, g.get(v.row, k).clone())).collect()
        } else {
            vec![(v.row, f.one())]
        };
        let cols: Vec<(usize, BigRational)> = if a.tail == x {
            (0..d[x]).map(|k| (k, g_inv.get(k, v.col).clone())).collect()
        } else {
            vec![(v.col, f.one())]
        };
        let mut acc = Polynomial::zero();
        for (ri, rc) in &rows {
            for (ci, cc) in &cols {
                let c = rc * cc;
                if !c.is_zero() {
                    acc = acc.add(&Polynomial::term(c, Monomial::from_vars(vec![Var::new(v.arrow, *ri, *ci)])));
                }
            }
        }
        acc
    };
    Ok(p.substitute(&image))
}

pub fn span_of(polys: &[Polynomial]) -> SpanBasis {
    let mut b = SpanBasis::new();
    for p in polys {
        b.insert(p);
    }
    b
}

/// Script flavours for [`export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Plain,
    Macaulay2,
    Singular,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(ExportFormat::Plain),
            "macaulay2" | "m2" => Ok(ExportFormat::Macaulay2),
            "singular" => Ok(ExportFormat::Singular),
            _ => Err(Error::Parse(format!("unknown export format `{s}`"))),
        }
    }
}

/// Deterministic text for a generator set. The ring has one variable per
/// entry of every arrow matrix.
pub fn export(quiver: &Quiver, g: &GeneratorSet, format: ExportFormat) -> String {
    let polys: Vec<String> = g.polynomials().map(|p| p.display(quiver)).collect();
    let vars: Vec<String> = ambient_variables(quiver, &g.dims).iter().map(|v| v.name(quiver)).collect();
    match format {
        ExportFormat::Plain => {
            let mut out = format!("# {} generators\n", polys.len());
            for p in &polys {
                out.push_str(p);
                out.push('\n');
            }
            out
        }
        ExportFormat::Macaulay2 => {
            let body = if polys.is_empty() { "0_R".to_string() } else { format!("\n  {}\n", polys.join(",\n  ")) };
            format!("R = QQ[{}];\nI = ideal({body});\n", vars.join(", "))
        }
        ExportFormat::Singular => {
            let body = if polys.is_empty() { "0".to_string() } else { format!("\n  {}", polys.join(",\n  ")) };
            format!("ring R = 0, ({}), dp;\nideal I = {body};\n", vars.join(", "))
        }
    }
}

/// Reads polynomial files: either a JSON list of strings or
/// `{"polynomials": [...]}`.
pub fn parse_polynomial_file(quiver: &Quiver, text: &str) -> Result<Vec<Polynomial>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let list = match &value {
        Value::Array(items) => items,
        Value::Object(obj) => obj
            .get("polynomials")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("expected a `polynomials` list".into()))?,
        _ => return Err(Error::Malformed("expected a list of polynomials".into())),
    };
    list.iter()
        .map(|v| {
            let s = v.as_str().ok_or_else(|| Error::Malformed("polynomials must be strings".into()))?;
            Polynomial::parse(quiver, s)
        })
        .collect()
}

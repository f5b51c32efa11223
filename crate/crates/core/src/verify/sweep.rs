use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::components::{is_component, is_nonempty, rank_box, RankSequence};
use crate::error::Result;
use crate::exactla::PrimeField;
use crate::ideals::generators_for_component;
use crate::quiver::{AlgebraPresentation, DimensionVector, Quiver};
use crate::verify::compiled::{CompiledSet, VarIndex};
use crate::verify::sample::Sampler;
use crate::verify::SampleConfig;

/// A radical square zero algebra together with a dimension vector.
#[derive(Debug, Clone)]
pub struct Instance {
    pub algebra: AlgebraPresentation,
    pub dims: DimensionVector,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn relabel(arrows: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = arrows.iter().map(|&(t, h)| (perm[t], perm[h])).collect();
    out.sort();
    out
}

/// Multisets of `k` arrows on `n` vertices, as sorted `(tail, head)` lists.
fn arrow_multisets(n: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|t| (0..n).map(move |h| (t, h))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(pairs: &[(usize, usize)], start: usize, k: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            rec(pairs, i, k, cur, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, k, &mut cur, &mut out);
    out
}

/// Quivers with `1..=max_vertices` vertices and `0..=max_arrows` arrows (loops
/// and parallel arrows allowed) up to isomorphism, each with every dimension
/// vector with entries in `1..=max_dim` up to automorphism. Vertices are named
/// `1, 2, ...` and arrows `a1, a2, ...`.
pub fn small_instances(max_vertices: usize, max_arrows: usize, max_dim: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let perms = permutations(n);
        for k in 0..=max_arrows {
            let mut seen = BTreeSet::new();
            for arrows in arrow_multisets(n, k) {
                let canon = perms.iter().map(|p| relabel(&arrows, p)).min().expect("nonempty");
                if canon != arrows || !seen.insert(canon.clone()) {
                    continue;
                }
                let autos: Vec<&Vec<usize>> = perms.iter().filter(|p| relabel(&arrows, p) == arrows).collect();
                let quiver = Quiver::new(
                    (1..=n).map(|i| i.to_string()),
                    arrows.iter().enumerate().map(|(i, &(t, h))| (format!("a{}", i + 1), (t + 1).to_string(), (h + 1).to_string())),
                )
                .expect("valid quiver");
                let algebra = AlgebraPresentation::radical_square_zero(quiver);
                let mut dims_seen = BTreeSet::new();
                for d in dim_vectors(n, max_dim) {
                    // Vertex v of the permuted copy carries d[p^-1(v)].
                    let canon_d = autos
                        .iter()
                        .map(|p| {
                            let mut e = vec![0; n];
                            for (v, &pv) in p.iter().enumerate() {
                                e[pv] = d[v];
                            }
                            e
                        })
                        .min()
                        .expect("identity is an automorphism");
                    if dims_seen.insert(canon_d.clone()) {
                        out.push(Instance { algebra: algebra.clone(), dims: DimensionVector(canon_d) });
                    }
                }
            }
        }
    }
    out
}

fn dim_vectors(n: usize, max_dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| (1..=max_dim).map(move |k| [v.clone(), vec![k]].concat()))
            .collect();
    }
    out
}

/// Maximal nonempty strata under probabilistic containment, against the
/// combinatorial component criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    pub maximal: BTreeSet<Vec<usize>>,
    pub components: BTreeSet<Vec<usize>>,
    pub agreement: bool,
}

/// Samples `cfg.trials` points of every nonempty `C_r` and declares `C_r`
/// contained in `C_r2` when all generators of `C_r2` vanish on them.
pub fn maximality_check(algebra: &AlgebraPresentation, d: &DimensionVector, cfg: &SampleConfig) -> Result<MaximalityReport> {
    let q = algebra.quiver();
    let strata: Vec<RankSequence> = rank_box(d)
        .into_iter()
        .map(|r| RankSequence::new(q, d.clone(), r))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|rs| is_nonempty(q, rs))
        .collect();
    let index = VarIndex::new(q, d);
    let samples: Vec<Vec<Vec<u64>>> = strata
        .par_iter()
        .map(|rs| {
            let sampler = Sampler::new(algebra, rs.clone())?;
            (0..cfg.trials as u64).map(|t| Ok(index.flatten(&sampler.sample_trial(cfg, t)?))).collect()
        })
        .collect::<Result<_>>()?;
    let compiled: Vec<CompiledSet<PrimeField>> = strata
        .par_iter()
        .map(|rs| {
            let g = generators_for_component(q, d, rs.ranks())?;
            CompiledSet::new(&cfg.field, &index, g.polynomials())
        })
        .collect::<Result<_>>()?;
    let mut maximal = BTreeSet::new();
    let mut components = BTreeSet::new();
    for (i, rs) in strata.iter().enumerate() {
        let contained_elsewhere = (0..strata.len())
            .any(|j| j != i && samples[i].iter().all(|pt| compiled[j].first_nonzero(pt).is_none()));
        if !contained_elsewhere {
            maximal.insert(rs.ranks().0.clone());
        }
        if is_component(algebra, rs)? {
            components.insert(rs.ranks().0.clone());
        }
    }
    Ok(MaximalityReport { agreement: maximal == components, maximal, components })
}

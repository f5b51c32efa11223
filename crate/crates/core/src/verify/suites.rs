use rand::Rng;
use rayon::prelude::*;

use crate::components::{is_component, is_nonempty, rank_box, RankSequence};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, PrimeField};
use crate::ideals::{build_h, generators_for_component, Polynomial};
use crate::quiver::{
    embed_representation, x_rank, AlgebraPresentation, DimensionVector, Quiver, Representation, SplitContext,
};
use crate::verify::compiled::{CompiledSet, VarIndex};
use crate::verify::endo::endomorphism_dim;
use crate::verify::oracle::{achievable_rank_oracle, describe};
use crate::verify::sample::{codim_check, schwartz_zippel_bound, Sampler};
use crate::verify::sweep::{maximality_check, Instance};
use crate::verify::{SampleConfig, VerificationReport};

fn label(i: &Instance) -> String {
    format!("{} at {}", describe(&i.algebra), i.dims.format(i.algebra.quiver()))
}

fn components_of(i: &Instance) -> Result<Vec<RankSequence>> {
    let q = i.algebra.quiver();
    let mut out = Vec::new();
    for r in rank_box(&i.dims) {
        let rs = RankSequence::new(q, i.dims.clone(), r)?;
        if is_component(&i.algebra, &rs)? {
            out.push(rs);
        }
    }
    Ok(out)
}

fn report(test: &str, instance: String, cfg: &SampleConfig, error_bound: f64, counterexamples: Vec<String>) -> VerificationReport {
    VerificationReport {
        test: test.into(),
        instance,
        trials: cfg.trials,
        seed: cfg.seed,
        verdict: counterexamples.is_empty(),
        error_bound,
        counterexamples,
    }
}

/// Brute-force achievable ranks over `F_2` and `F_3`, and maximality under
/// sampled containment, on every instance.
pub fn oracle_sweep(instances: &[Instance], cfg: &SampleConfig) -> Result<VerificationReport> {
    let per: Vec<Vec<String>> = instances
        .par_iter()
        .map(|i| {
            let mut bad = Vec::new();
            for q in [2, 3] {
                let o = achievable_rank_oracle(&i.algebra, &i.dims, q)?;
                bad.extend(o.counterexamples.iter().map(|c| format!("{} over F_{q}: {c}", label(i))));
            }
            let m = maximality_check(&i.algebra, &i.dims, cfg)?;
            if !m.agreement {
                bad.push(format!("{}: maximal {:?} but components {:?}", label(i), m.maximal, m.components));
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    let bound = 4.0 / cfg.field.modulus() as f64;
    Ok(report("oracle", format!("{} instances", instances.len()), cfg, bound, per.concat()))
}

/// `ambient - rank(Jacobian)` against the dimension formula for every
/// component, at `cfg.trials` points for each seed.
pub fn codim_sweep(instances: &[Instance], cfg: &SampleConfig, seeds: &[u64]) -> Result<VerificationReport> {
    let per: Vec<Vec<String>> = instances
        .par_iter()
        .map(|i| {
            let mut bad = Vec::new();
            for rs in components_of(i)? {
                for &s in seeds {
                    let c = codim_check(&i.algebra, &rs, &cfg.with_seed(s))?;
                    if !c.agrees {
                        bad.push(format!(
                            "{} r={} seed {s}: ranks {:?}, ambient {}, dimension {}",
                            label(i),
                            rs.ranks().format(i.algebra.quiver()),
                            c.ranks,
                            c.ambient,
                            c.dimension
                        ));
                    }
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(report("codim", format!("{} instances, seeds {seeds:?}", instances.len()), cfg, 0.0, per.concat()))
}

/// A point whose `h_x` has rank exactly `k`: a sample of `C_{r+e_x}` when that
/// stratum is nonempty, else arrows into `x` carrying a random rank-`k`
/// matrix and every other arrow zero.
fn point_of_rank<R: Rng + ?Sized>(
    algebra: &AlgebraPresentation,
    rs: &RankSequence,
    x: usize,
    field: &PrimeField,
    rng: &mut R,
) -> Result<Option<Representation<PrimeField>>> {
    let q = algebra.quiver();
    let d = rs.dims();
    let k = rs.ranks()[x] + 1;
    let ins = q.in_arrows(x);
    let cols: usize = ins.iter().map(|&a| d[q.arrow(a).tail]).sum();
    if k > d[x] || k > cols {
        return Ok(None);
    }
    let up = rs.incremented(x).expect("k <= d(x)");
    for _ in 0..16 {
        let n = if is_nonempty(q, &up) {
            Sampler::new(algebra, up.clone())?.sample(field, rng)?
        } else {
            let a = Matrix::random(field, d[x], k, rng);
            let b = Matrix::random(field, k, cols, rng);
            let h = a.mul(&b)?;
            let mut mats: Vec<Matrix<PrimeField>> =
                q.arrows().iter().map(|ar| Matrix::zeros(field, d[ar.head], d[ar.tail])).collect();
            let mut off = 0;
            for &ai in &ins {
                let w = d[q.arrow(ai).tail];
                mats[ai] = h.submatrix(&(0..d[x]).collect::<Vec<_>>(), &(off..off + w).collect::<Vec<_>>());
                off += w;
            }
            Representation::new(q, field, d.clone(), mats)?
        };
        if x_rank(q, &n, x) == k {
            return Ok(Some(n));
        }
    }
    Err(Error::RetryBudget)
}

/// Every generator of every component vanishes at `cfg.trials` sampled
/// points, and at each vertex a point of x-rank `r(x)+1` makes some emitted
/// `(r(x)+1)`-minor of `H_x` nonzero.
pub fn vanishing_sweep(instances: &[Instance], cfg: &SampleConfig) -> Result<VerificationReport> {
    let per: Vec<(Vec<String>, f64)> = instances
        .par_iter()
        .map(|i| {
            let q = i.algebra.quiver();
            let mut bad = Vec::new();
            let mut bound: f64 = 0.0;
            let index = VarIndex::new(q, &i.dims);
            for rs in components_of(i)? {
                let g = generators_for_component(q, &i.dims, rs.ranks())?;
                bound = bound.max(schwartz_zippel_bound(&g, &cfg.field));
                let compiled = CompiledSet::new(&cfg.field, &index, g.polynomials())?;
                let sampler = Sampler::new(&i.algebra, rs.clone())?;
                let tag = format!("{} r={}", label(i), rs.ranks().format(q));
                for t in 0..cfg.trials as u64 {
                    let pt = index.flatten(&sampler.sample_trial(cfg, t)?);
                    if let Some(k) = compiled.first_nonzero(&pt) {
                        bad.push(format!("{tag}: generator {k} nonzero at trial {t}"));
                        break;
                    }
                }
                let emitted: Vec<Polynomial> = g.polynomials().map(Polynomial::monic).collect();
                for x in 0..q.vertex_count() {
                    let mut rng = cfg.rng(u64::MAX - x as u64);
                    let Some(n) = point_of_rank(&i.algebra, &rs, x, &cfg.field, &mut rng)? else { continue };
                    let minors: Vec<Polynomial> = build_h(q, &i.dims, x)
                        .minors(rs.ranks()[x] + 1)
                        .into_iter()
                        .filter(|p| !p.is_zero())
                        .map(|p| p.monic())
                        .filter(|p| emitted.contains(p))
                        .collect();
                    let mut separated = false;
                    for p in &minors {
                        if !cfg.field.is_zero(&p.evaluate(&n)?) {
                            separated = true;
                            break;
                        }
                    }
                    if !separated {
                        bad.push(format!("{tag}: no emitted minor of H_{} separates rank {}", q.vertex_name(x), rs.ranks()[x] + 1));
                    }
                }
            }
            Ok((bad, bound))
        })
        .collect::<Result<_>>()?;
    let bound = per.iter().map(|p| p.1).fold(0.0, f64::max);
    let bad = per.into_iter().flat_map(|p| p.0).collect();
    Ok(report("membership", format!("{} instances", instances.len()), cfg, bound, bad))
}

/// Draws representations of the split algebra `A^x` at `d^x_r` with full
/// `x_h`-rank and compares `dim End(i(M)) - dim End(M)` with `r (d(x) - r)`.
/// The split algebra must impose no relation a random representation could
/// violate.
pub fn endo_additivity(
    algebra: &AlgebraPresentation,
    x: usize,
    d: &DimensionVector,
    r: usize,
    cfg: &SampleConfig,
) -> Result<VerificationReport> {
    let q = algebra.quiver();
    let (ax, split) = algebra.split_node(x)?;
    let ctx = SplitContext::new(split.clone(), d, r)?;
    let sd = ctx.split_dims(d)?;
    let sq = ax.quiver();
    let expected = r * (d[x] - r);
    let per: Vec<Option<String>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = cfg.rng(t);
            let mut m = None;
            for _ in 0..16 {
                let cand = Representation::random(sq, &cfg.field, sd.clone(), &mut rng);
                if !cand.satisfies(&ax) {
                    return Err(Error::RelationViolated(vec![format!(
                        "random representations of the split algebra at {} violate its relations",
                        sd.format(sq)
                    )]));
                }
                if x_rank(sq, &cand, split.head_index) == r {
                    m = Some(cand);
                    break;
                }
            }
            let m = m.ok_or(Error::RetryBudget)?;
            let big = embed_representation(q, &ctx, &m)?;
            let diff = endomorphism_dim(q, &big) as i64 - endomorphism_dim(sq, &m) as i64;
            Ok((diff != expected as i64).then(|| format!("trial {t}: difference {diff}, expected {expected}")))
        })
        .collect::<Result<_>>()?;
    let instance = format!("{} at {}, vertex {}, r={r}", describe(algebra), d.format(q), q.vertex_name(x));
    Ok(report("endo", instance, cfg, 0.0, per.into_iter().flatten().collect()))
}

/// Small quivers for the endomorphism suite: a vertex `x` with `loops` loops,
/// `ins` sources mapping to it and `outs` sinks it maps to.
pub fn star_algebra(loops: usize, ins: usize, outs: usize) -> AlgebraPresentation {
    let mut vertices = vec!["x".to_string()];
    let mut arrows = Vec::new();
    for i in 0..loops {
        arrows.push((format!("l{}", i + 1), "x".into(), "x".into()));
    }
    for i in 0..ins {
        vertices.push(format!("s{}", i + 1));
        arrows.push((format!("a{}", i + 1), format!("s{}", i + 1), "x".into()));
    }
    for i in 0..outs {
        vertices.push(format!("t{}", i + 1));
        arrows.push((format!("b{}", i + 1), "x".into(), format!("t{}", i + 1)));
    }
    AlgebraPresentation::radical_square_zero(Quiver::new(vertices, arrows).expect("distinct names"))
}

use rand::Rng;
use rayon::prelude::*;

use crate::components::{component_dimension, is_nonempty, RankSequence};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, PrimeField};
use crate::ideals::{generators_for_component, GeneratorSet};
use crate::quiver::{embed_split_all, AlgebraPresentation, DimensionVector, FullSplit, Representation};
use crate::verify::compiled::{CompiledJacobian, CompiledSet, VarIndex};
use crate::verify::SampleConfig;

/// Attempts at drawing an invertible base change before giving up.
const INVERT_BUDGET: usize = 64;

/// Draws points of `C_r` as `g . i(M)` with `M` a uniform representation of
/// the fully split quiver at the split dimension vector.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    algebra: &'a AlgebraPresentation,
    full: FullSplit,
    rs: RankSequence,
    split_dims: DimensionVector,
}

impl<'a> Sampler<'a> {
    pub fn new(algebra: &'a AlgebraPresentation, rs: RankSequence) -> Result<Self> {
        if !algebra.is_rad_square_zero() {
            return Err(Error::NotRadicalSquareZero);
        }
        if !is_nonempty(algebra.quiver(), &rs) {
            return Err(Error::EmptyStratum);
        }
        let full = algebra.split_all_nodes()?;
        let split_dims = full.split_dims(rs.dims(), rs.ranks())?;
        Ok(Sampler { algebra, full, rs, split_dims })
    }

    pub fn ranks(&self) -> &RankSequence {
        &self.rs
    }

    pub fn sample<F: Field, R: Rng + ?Sized>(&self, field: &F, rng: &mut R) -> Result<Representation<F>> {
        let q = self.algebra.quiver();
        let m = Representation::random(self.full.algebra.quiver(), field, self.split_dims.clone(), rng);
        let n = embed_split_all(q, &self.full, &m)?;
        let g = self
            .rs
            .dims()
            .entries()
            .iter()
            .map(|&k| Matrix::random_invertible(field, k, rng, INVERT_BUDGET))
            .collect::<Result<Vec<_>>>()?;
        n.act(q, &g)
    }

    /// The sample for trial `t` of `cfg`.
    pub fn sample_trial(&self, cfg: &SampleConfig, t: u64) -> Result<Representation<PrimeField>> {
        self.sample(&cfg.field, &mut cfg.rng(t))
    }
}

pub fn sample_point(
    algebra: &AlgebraPresentation,
    rs: &RankSequence,
    cfg: &SampleConfig,
) -> Result<Representation<PrimeField>> {
    Sampler::new(algebra, rs.clone())?.sample_trial(cfg, 0)
}

/// True iff every generator vanishes at `n`.
pub fn membership_test<F: Field>(n: &Representation<F>, g: &GeneratorSet) -> Result<bool> {
    let f = n.field();
    for p in g.polynomials() {
        if !f.is_zero(&p.evaluate(n)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a probabilistic containment test. `holds == false` is certain;
/// `error_bound` bounds the chance that a single evaluation of a nonvanishing
/// generator returns zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub holds: bool,
    pub trials_run: usize,
    pub error_bound: f64,
    /// Trial index and generator index of the first nonvanishing evaluation.
    pub witness: Option<(usize, usize)>,
}

/// Max degree over a generator set divided by the field size.
pub fn schwartz_zippel_bound(g: &GeneratorSet, field: &PrimeField) -> f64 {
    let deg = g.polynomials().filter_map(|p| p.degree()).max().unwrap_or(0);
    deg as f64 / field.modulus() as f64
}

/// Tests `C_r` inside `C_r2` by evaluating the generators of `C_r2` at
/// `cfg.trials` sampled points of `C_r`. Stops at the first failure.
pub fn containment_test(
    algebra: &AlgebraPresentation,
    r: &RankSequence,
    r2: &RankSequence,
    cfg: &SampleConfig,
) -> Result<ContainmentReport> {
    let q = algebra.quiver();
    let sampler = Sampler::new(algebra, r.clone())?;
    if !is_nonempty(q, r2) {
        return Err(Error::EmptyStratum);
    }
    let g = generators_for_component(q, r2.dims(), r2.ranks())?;
    let index = VarIndex::new(q, r.dims());
    let compiled = CompiledSet::new(&cfg.field, &index, g.polynomials())?;
    let error_bound = schwartz_zippel_bound(&g, &cfg.field);
    for t in 0..cfg.trials {
        let point = index.flatten(&sampler.sample_trial(cfg, t as u64)?);
        if let Some(i) = compiled.first_nonzero(&point) {
            return Ok(ContainmentReport { holds: false, trials_run: t + 1, error_bound, witness: Some((t, i)) });
        }
    }
    Ok(ContainmentReport { holds: true, trials_run: cfg.trials, error_bound, witness: None })
}

/// Rank of the Jacobian of `g` at `n`.
pub fn jacobian_codim<F: Field>(
    algebra: &AlgebraPresentation,
    g: &GeneratorSet,
    n: &Representation<F>,
) -> Result<usize> {
    let index = VarIndex::new(algebra.quiver(), n.dims());
    let jac = CompiledJacobian::new(n.field(), &index, g.polynomials())?;
    Ok(jac.rank_at(&index.flatten(n)))
}

/// Jacobian ranks at sampled points of `C_r` against `ambient - dim C_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimReport {
    pub ambient: usize,
    pub dimension: usize,
    /// Rank recorded for each trial.
    pub ranks: Vec<usize>,
    /// Trials that needed more than one draw.
    pub resampled: usize,
    pub agrees: bool,
}

/// Draws per trial when the first draw lands on a point of lower rank.
const RESAMPLE_ATTEMPTS: u64 = 3;

/// Each trial takes the largest rank among up to three draws, stopping early
/// once it reaches the largest rank seen on first draws.
pub fn codim_check(algebra: &AlgebraPresentation, rs: &RankSequence, cfg: &SampleConfig) -> Result<CodimReport> {
    let q = algebra.quiver();
    let sampler = Sampler::new(algebra, rs.clone())?;
    let g = generators_for_component(q, rs.dims(), rs.ranks())?;
    let index = VarIndex::new(q, rs.dims());
    let jac = CompiledJacobian::new(&cfg.field, &index, g.polynomials())?;
    let draw = |t: usize, attempt: u64| -> Result<usize> {
        let n = sampler.sample_trial(cfg, t as u64 * RESAMPLE_ATTEMPTS + attempt)?;
        Ok(jac.rank_at(&index.flatten(&n)))
    };
    let first: Vec<usize> = (0..cfg.trials).into_par_iter().map(|t| draw(t, 0)).collect::<Result<_>>()?;
    let target = first.iter().copied().max().unwrap_or(0);
    let mut ranks = Vec::with_capacity(first.len());
    let mut resampled = 0;
    for (t, &r0) in first.iter().enumerate() {
        let mut best = r0;
        let mut attempt = 1;
        while best < target && attempt < RESAMPLE_ATTEMPTS {
            best = best.max(draw(t, attempt)?);
            attempt += 1;
        }
        if attempt > 1 {
            resampled += 1;
        }
        ranks.push(best);
    }
    let ambient = q.ambient_dimension(rs.dims());
    let dimension = component_dimension(q, rs)?;
    let agrees = ranks.iter().all(|&r| ambient - r == dimension);
    Ok(CodimReport { ambient, dimension, ranks, resampled, agrees })
}

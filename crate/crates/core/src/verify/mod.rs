//! Numerical checks: seeded sampling of points of `C_r`, probabilistic
//! membership and containment, Jacobian ranks, brute-force oracles over tiny
//! fields, endomorphism dimensions and semistability.
//!
//! Every random draw comes from a ChaCha8 stream selected by
//! `(seed, trial index)`, so results do not depend on the thread count.

mod compiled;
mod endo;
mod oracle;
mod sample;
mod semistable;
mod suites;
mod sweep;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeField, Rationals};
use crate::ideals::{translate, Polynomial, SpanBasis};
use crate::quiver::{DimensionVector, Quiver};

pub use compiled::{CompiledJacobian, CompiledSet, VarIndex};
pub use endo::{endomorphism_dim, is_schur};
pub(crate) use oracle::{for_each_representation, Layout, SmallField};
pub use oracle::{achievable_rank_oracle, describe, OracleReport, ORACLE_AMBIENT_BOUND};
pub use sample::{
    codim_check, containment_test, jacobian_codim, membership_test, sample_point, schwartz_zippel_bound,
    CodimReport, ContainmentReport, Sampler,
};
pub(crate) use semistable::representation_from_flat;
pub use semistable::{is_semistable_bruteforce, SemistabilityChecker, SEMISTABLE_DIM_BOUND};
pub use suites::{codim_sweep, endo_additivity, oracle_sweep, star_algebra, vanishing_sweep};
pub use sweep::{maximality_check, small_instances, Instance, MaximalityReport};

/// Field, master seed and trial count of a randomized check.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: usize,
}

impl SampleConfig {
    pub fn new(prime: u64, seed: u64, trials: usize) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Malformed("trials must be positive".into()));
        }
        Ok(SampleConfig { field: PrimeField::new(prime)?, seed, trials })
    }

    /// The random stream of trial `t`.
    pub fn rng(&self, t: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(t);
        rng
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SampleConfig { seed, ..self.clone() }
    }
}

/// Attempts at drawing an invertible rational matrix.
const RATIONAL_INVERT_BUDGET: usize = 64;

/// A basis of the span of `p o g` over `p` in `polys` and `trials` random
/// integer matrices `g` in `GL(d(x))`; each element is a translate.
pub fn random_translate_span(
    quiver: &Quiver,
    d: &DimensionVector,
    x: usize,
    polys: &[Polynomial],
    trials: usize,
    seed: u64,
) -> Result<Vec<Polynomial>> {
    let mut basis = SpanBasis::new();
    let mut out = Vec::new();
    let mut keep = |p: Polynomial, basis: &mut SpanBasis| {
        if basis.insert(&p) {
            out.push(p);
        }
    };
    // The identity counts as one of the translates.
    for p in polys {
        keep(p.clone(), &mut basis);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 1..trials.max(1) {
        let g = Matrix::random_invertible(&Rationals, d[x], &mut rng, RATIONAL_INVERT_BUDGET)?;
        for p in polys {
            keep(translate(quiver, d, x, &g, p)?, &mut basis);
        }
    }
    Ok(out)
}

/// Result record of a named check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub test: String,
    pub instance: String,
    pub trials: usize,
    pub seed: u64,
    pub verdict: bool,
    pub error_bound: f64,
    pub counterexamples: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "test": self.test,
            "instance": self.instance,
            "trials": self.trials,
            "seed": self.seed,
            "verdict": self.verdict,
            "error_bound": self.error_bound,
            "counterexamples": self.counterexamples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::RankSequence;
    use crate::ideals::generators_for_component;
    use crate::quiver::{AlgebraPresentation, Representation};

    fn one_loop() -> AlgebraPresentation {
        AlgebraPresentation::parse(
            r#"{"vertices":["1"],"arrows":[{"id":"c","tail":"1","head":"1"}],"radical_square_zero":true}"#,
        )
        .unwrap()
    }

    fn arrow() -> AlgebraPresentation {
        AlgebraPresentation::radical_square_zero(
            Quiver::new(["1", "2"], [("a".into(), "1".into(), "2".into())]).unwrap(),
        )
    }

    fn rs(a: &AlgebraPresentation, d: &[usize], r: &[usize]) -> RankSequence {
        RankSequence::new(a.quiver(), DimensionVector(d.to_vec()), DimensionVector(r.to_vec())).unwrap()
    }

    fn cfg(trials: usize) -> SampleConfig {
        SampleConfig::new(32003, 7, trials).unwrap()
    }

    #[test]
    fn config_rejects_bad_input() {
        assert!(SampleConfig::new(32003, 0, 0).is_err());
        assert!(SampleConfig::new(32004, 0, 1).is_err());
    }

    #[test]
    fn zero_rank_samples_zero() {
        let a = one_loop();
        let n = sample_point(&a, &rs(&a, &[2], &[0]), &cfg(1)).unwrap();
        assert!(n.matrix(0).is_zero());
    }

    #[test]
    fn one_loop_samples_are_nilpotent() {
        let a = one_loop();
        let q = a.quiver();
        let r = rs(&a, &[2], &[1]);
        let s = Sampler::new(&a, r).unwrap();
        let c = cfg(20);
        let tr = Polynomial::parse(q, "x_c_1_1 + x_c_2_2").unwrap();
        let det = Polynomial::parse(q, "x_c_1_1*x_c_2_2 - x_c_1_2*x_c_2_1").unwrap();
        for t in 0..20 {
            let n = s.sample_trial(&c, t).unwrap();
            assert_eq!(tr.evaluate(&n).unwrap(), 0);
            assert_eq!(det.evaluate(&n).unwrap(), 0);
            assert!(!n.matrix(0).is_zero());
        }
        assert!(Sampler::new(&a, rs(&a, &[2], &[2])).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = one_loop();
        let r = rs(&a, &[2], &[1]);
        assert_eq!(sample_point(&a, &r, &cfg(1)).unwrap(), sample_point(&a, &r, &cfg(1)).unwrap());
    }

    #[test]
    fn membership_examples() {
        let a = one_loop();
        let q = a.quiver();
        let f = PrimeField::new(32003).unwrap();
        let d = DimensionVector(vec![2]);
        let g = generators_for_component(q, &d, &DimensionVector(vec![1])).unwrap();
        assert!(membership_test(&Representation::zero(q, &f, d.clone()), &g).unwrap());
        let id = Representation::new(q, &f, d, vec![Matrix::identity(&f, 2)]).unwrap();
        assert!(!membership_test(&id, &g).unwrap());
    }

    #[test]
    fn containment_examples() {
        let a = one_loop();
        let r0 = rs(&a, &[2], &[0]);
        let r1 = rs(&a, &[2], &[1]);
        assert!(containment_test(&a, &r0, &r1, &cfg(10)).unwrap().holds);
        assert!(containment_test(&a, &r1, &r1, &cfg(10)).unwrap().holds);
        let no = containment_test(&a, &r1, &r0, &cfg(10)).unwrap();
        assert!(!no.holds);
        assert_eq!(no.trials_run, 1);
        assert!(no.error_bound > 0.0 && no.error_bound < 1e-3);
    }

    #[test]
    fn jacobian_of_nilpotent_block() {
        let a = one_loop();
        let q = a.quiver();
        let f = PrimeField::new(32003).unwrap();
        let d = DimensionVector(vec![2]);
        let g = generators_for_component(q, &d, &DimensionVector(vec![1])).unwrap();
        let n = Representation::new(q, &f, d.clone(), vec![Matrix::from_i64_rows(&f, &[&[0, 1], &[0, 0]])]).unwrap();
        assert_eq!(jacobian_codim(&a, &g, &n).unwrap(), 2);
        let empty = crate::ideals::GeneratorSet::from_polynomials(d, DimensionVector(vec![1]), Vec::new());
        assert_eq!(jacobian_codim(&a, &empty, &n).unwrap(), 0);
        let report = codim_check(&a, &rs(&a, &[2], &[1]), &cfg(5)).unwrap();
        assert!(report.agrees, "{report:?}");
    }

    #[test]
    fn oracle_examples() {
        let a = one_loop();
        let rep = achievable_rank_oracle(&a, &DimensionVector(vec![2]), 3).unwrap();
        assert!(rep.agreement);
        assert_eq!(rep.achievable.into_iter().collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        let b = arrow();
        let rep = achievable_rank_oracle(&b, &DimensionVector(vec![1, 1]), 2).unwrap();
        assert_eq!(rep.achievable.into_iter().collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1]]);
        let bare = AlgebraPresentation::radical_square_zero(Quiver::new(["1"], Vec::<(String, String, String)>::new()).unwrap());
        let rep = achievable_rank_oracle(&bare, &DimensionVector(vec![2]), 2).unwrap();
        assert_eq!(rep.achievable.into_iter().collect::<Vec<_>>(), vec![vec![0]]);
        assert!(achievable_rank_oracle(&a, &DimensionVector(vec![5]), 2).is_err());
        assert!(achievable_rank_oracle(&a, &DimensionVector(vec![2]), 5).is_err());
    }

    #[test]
    fn endomorphism_examples() {
        let a = arrow();
        let q = a.quiver();
        let f = PrimeField::new(5).unwrap();
        let zero = Representation::zero(q, &f, DimensionVector(vec![2, 1]));
        assert_eq!(endomorphism_dim(q, &zero), 5);
        let simple = Representation::zero(q, &f, DimensionVector(vec![1, 0]));
        assert!(is_schur(q, &simple));
        let double = Representation::zero(q, &f, DimensionVector(vec![2, 0]));
        assert_eq!(endomorphism_dim(q, &double), 4);
        let l = one_loop();
        let jordan = Representation::new(l.quiver(), &f, DimensionVector(vec![2]), vec![Matrix::from_i64_rows(&f, &[&[0, 1], &[0, 0]])]).unwrap();
        assert_eq!(endomorphism_dim(l.quiver(), &jordan), 2);
    }

    #[test]
    fn semistability_examples() {
        let a = arrow();
        let q = a.quiver();
        let f = PrimeField::new(2).unwrap();
        let sx = Representation::zero(q, &f, DimensionVector(vec![1, 0]));
        assert!(is_semistable_bruteforce(q, &sx, &[0, 0], false).unwrap());
        assert!(is_semistable_bruteforce(q, &sx, &[0, 5], false).unwrap());
        assert!(is_semistable_bruteforce(q, &sx, &[1, 0], false).is_err());
        // Arrow 1 -> 2 nonzero: the only proper subrepresentation is S_2.
        let m = Representation::new(q, &f, DimensionVector(vec![1, 1]), vec![Matrix::from_i64_rows(&f, &[&[1]])]).unwrap();
        assert!(is_semistable_bruteforce(q, &m, &[1, -1], true).unwrap());
        assert!(!is_semistable_bruteforce(q, &m, &[-1, 1], false).unwrap());
        let z = Representation::zero(q, &f, DimensionVector(vec![1, 1]));
        assert!(is_semistable_bruteforce(q, &z, &[1, -1], false).is_ok_and(|s| !s));
    }

    #[test]
    fn translate_span_of_trace_is_one_dimensional() {
        let a = one_loop();
        let q = a.quiver();
        let d = DimensionVector(vec![2]);
        let tr = Polynomial::parse(q, "x_c_1_1 + x_c_2_2").unwrap();
        assert_eq!(random_translate_span(q, &d, 0, std::slice::from_ref(&tr), 10, 1).unwrap(), vec![tr]);
        assert!(random_translate_span(q, &d, 0, &[], 10, 1).unwrap().is_empty());
    }

    #[test]
    fn sweep_counts_are_stable() {
        let one = small_instances(1, 1, 2);
        // No arrow or one loop, with d in {1, 2}.
        assert_eq!(one.len(), 4);
        let two = small_instances(2, 1, 1);
        // Two vertices: no arrow, a loop, an arrow between them.
        assert_eq!(two.iter().filter(|i| i.dims.len() == 2).count(), 3);
    }

    #[test]
    fn maximality_on_one_loop() {
        let a = one_loop();
        let rep = maximality_check(&a, &DimensionVector(vec![2]), &cfg(10)).unwrap();
        assert!(rep.agreement);
        assert_eq!(rep.maximal.into_iter().collect::<Vec<_>>(), vec![vec![1]]);
    }
}

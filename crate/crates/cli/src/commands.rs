use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use qrv_core::components::{classify_all, RankSequence};
use qrv_core::exactla::PrimeField;
use qrv_core::ideals::{
    export, generators_for_component, generators_relative, parse_polynomial_file, ExportFormat, GeneratorSet,
};
use qrv_core::moduli::{balanced_weights, node_check, node_suite, reduce_by_weight, SuiteBounds, Weight};
use qrv_core::quiver::{split_dimvec, AlgebraPresentation, DimensionVector};
use qrv_core::verify::{
    achievable_rank_oracle, codim_check, codim_sweep, containment_test, describe, endo_additivity,
    maximality_check, oracle_sweep, schwartz_zippel_bound, small_instances, vanishing_sweep, CompiledSet,
    SampleConfig, Sampler, VarIndex, VerificationReport,
};

use crate::{Command, Outcome, Suite, VerifyArgs};

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Nodes { file } => nodes(&load(file)?),
        Command::Split { file, vertex, dim, rank } => split(&load(file)?, vertex, dim.as_deref(), *rank),
        Command::Components { file, dim, all } => components(&load(file)?, dim, *all),
        Command::Ideal { file, dim, rank, format, extra, vertex, out } => {
            ideal(&load(file)?, dim, rank, format, extra.as_deref(), vertex.as_deref(), out.as_deref())
        }
        Command::Verify(args) => verify(args),
        Command::Reduce { file, theta } => reduce(&load(file)?, theta),
    }
}

fn load(path: &Path) -> Result<AlgebraPresentation> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    AlgebraPresentation::parse(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn nodes(a: &AlgebraPresentation) -> Result<Outcome> {
    let q = a.quiver();
    let list: Vec<Value> = a
        .node_statuses()
        .into_iter()
        .enumerate()
        .map(|(i, (v, node))| json!({"vertex": v, "node": node, "source": q.is_source(i), "sink": q.is_sink(i)}))
        .collect();
    Ok(Outcome::ok(json!({"vertices": list, "radical_square_zero": a.is_rad_square_zero()})))
}

fn split(a: &AlgebraPresentation, vertex: &str, dim: Option<&str>, rank: Option<usize>) -> Result<Outcome> {
    let q = a.quiver();
    let (ax, s) = a.split_node_named(vertex)?;
    let mut payload = json!({
        "algebra": ax.to_json(),
        "vertex": s.vertex,
        "tail": s.tail_name,
        "head": s.head_name,
    });
    match (dim, rank) {
        (Some(d), Some(r)) => {
            let d = DimensionVector::parse(q, d)?;
            payload["dims"] = split_dimvec(&d, &s, r)?.to_json(ax.quiver());
        }
        (None, None) => {}
        _ => bail!("--dim and --rank go together"),
    }
    Ok(Outcome::ok(payload))
}

fn components(a: &AlgebraPresentation, dim: &str, all: bool) -> Result<Outcome> {
    let q = a.quiver();
    let d = DimensionVector::parse(q, dim)?;
    let records = classify_all(a, &d)?;
    let comps: Vec<Value> = records.iter().filter(|r| r.is_component).map(|r| r.to_json(q)).collect();
    let mut payload = json!({"dims": d.to_json(q), "count": comps.len(), "components": comps});
    if all {
        payload["strata"] = records.iter().filter(|r| r.nonempty).map(|r| r.to_json(q)).collect();
    }
    Ok(Outcome::ok(payload))
}

#[allow(clippy::too_many_arguments)]
fn ideal(
    a: &AlgebraPresentation,
    dim: &str,
    rank: &str,
    format: &str,
    extra: Option<&Path>,
    vertex: Option<&str>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let q = a.quiver();
    let d = DimensionVector::parse(q, dim)?;
    let format: ExportFormat = format.parse()?;
    let g: GeneratorSet = match vertex {
        Some(v) => {
            let x = q.vertex_index(v)?;
            let r = single_rank(a, x, rank)?;
            let p = match extra {
                Some(path) => {
                    let (ax, _) = a.split_node(x)?;
                    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    parse_polynomial_file(ax.quiver(), &text)?
                }
                None => Vec::new(),
            };
            generators_relative(a, x, &d, r, &p)?
        }
        None => {
            let r = DimensionVector::parse(q, rank)?;
            RankSequence::new(q, d.clone(), r.clone())?;
            generators_for_component(q, &d, &r)?
        }
    };
    let text = export(q, &g, format);
    if let Some(path) = out {
        fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut payload = g.to_json(q);
    payload["format"] = json!(format!("{format:?}").to_lowercase());
    payload["export"] = json!(text);
    Ok(Outcome::ok(payload))
}

/// `--rank` at a single vertex: a bare integer or a full vector.
fn single_rank(a: &AlgebraPresentation, x: usize, rank: &str) -> Result<usize> {
    if let Ok(r) = rank.trim().parse() {
        return Ok(r);
    }
    Ok(DimensionVector::parse(a.quiver(), rank)?[x])
}

fn reduce(a: &AlgebraPresentation, theta: &str) -> Result<Outcome> {
    let q = a.quiver();
    let w = Weight::parse(q, theta)?;
    let red = reduce_by_weight(a, &w)?;
    let deleted_vertices: Vec<&str> =
        (0..q.vertex_count()).filter(|&v| red.vertex_map[v].is_none()).map(|v| q.vertex_name(v)).collect();
    let deleted_arrows: Vec<&str> = q
        .arrows()
        .iter()
        .zip(&red.arrow_map)
        .filter(|(_, m)| m.is_none())
        .map(|(ar, _)| ar.id.as_str())
        .collect();
    Ok(Outcome::ok(json!({
        "algebra": red.algebra.to_json(),
        "theta": red.weight(&w).to_json(red.algebra.quiver()),
        "deleted_vertices": deleted_vertices,
        "deleted_arrows": deleted_arrows,
    })))
}

fn verdict(report: VerificationReport) -> Outcome {
    let ok = report.verdict;
    let diagnostics = if ok {
        Vec::new()
    } else {
        let mut d = vec![format!("{} check failed with {} counterexample(s)", report.test, report.counterexamples.len())];
        d.extend(report.counterexamples.iter().take(10).cloned());
        d
    };
    Outcome { ok, payload: report.to_json(), diagnostics }
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().with_context(|| format!("{flag} is required for this suite"))
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let cfg = SampleConfig::new(args.prime, args.seed, args.trials)?;
    if args.sweep {
        return sweep(args, &cfg);
    }
    let file = args.file.as_deref().context("an algebra file is required unless --sweep is given")?;
    let a = load(file)?;
    let q = a.quiver();
    let d = DimensionVector::parse(q, need(&args.dim, "--dim")?)?;
    let instance = format!("{} at {}", describe(&a), d.format(q));
    let ranks = |flag: &Option<String>, name: &str| -> Result<RankSequence> {
        Ok(RankSequence::new(q, d.clone(), DimensionVector::parse(q, need(flag, name)?)?)?)
    };
    match args.suite {
        Suite::Membership => {
            let rs = ranks(&args.rank, "--rank")?;
            let g = match &args.generators {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    GeneratorSet::from_polynomials(d.clone(), rs.ranks().clone(), parse_polynomial_file(q, &text)?)
                }
                None => generators_for_component(q, &d, rs.ranks())?,
            };
            let index = VarIndex::new(q, &d);
            let compiled = CompiledSet::new(&cfg.field, &index, g.polynomials())?;
            let sampler = Sampler::new(&a, rs.clone())?;
            let mut bad = Vec::new();
            for t in 0..cfg.trials as u64 {
                let pt = index.flatten(&sampler.sample_trial(&cfg, t)?);
                if let Some(k) = compiled.first_nonzero(&pt) {
                    bad.push(format!("trial {t}: generator {k} does not vanish"));
                }
            }
            Ok(verdict(VerificationReport {
                test: "membership".into(),
                instance: format!("{instance}, r={}", rs.ranks().format(q)),
                trials: cfg.trials,
                seed: cfg.seed,
                verdict: bad.is_empty(),
                error_bound: schwartz_zippel_bound(&g, &cfg.field),
                counterexamples: bad,
            }))
        }
        Suite::Codim => {
            let rs = ranks(&args.rank, "--rank")?;
            let c = codim_check(&a, &rs, &cfg)?;
            let mut out = verdict(VerificationReport {
                test: "codim".into(),
                instance: format!("{instance}, r={}", rs.ranks().format(q)),
                trials: cfg.trials,
                seed: cfg.seed,
                verdict: c.agrees,
                error_bound: 0.0,
                counterexamples: c
                    .ranks
                    .iter()
                    .enumerate()
                    .filter(|(_, &r)| c.ambient - r != c.dimension)
                    .map(|(t, r)| format!("trial {t}: Jacobian rank {r}"))
                    .collect(),
            });
            out.payload["ambient"] = json!(c.ambient);
            out.payload["dimension"] = json!(c.dimension);
            out.payload["resampled"] = json!(c.resampled);
            Ok(out)
        }
        Suite::Containment => {
            let r1 = ranks(&args.rank, "--rank")?;
            let r2 = ranks(&args.rank2, "--rank2")?;
            let c = containment_test(&a, &r1, &r2, &cfg)?;
            let report = VerificationReport {
                test: "containment".into(),
                instance: format!("{instance}, C_{} in C_{}", r1.ranks().format(q), r2.ranks().format(q)),
                trials: cfg.trials,
                seed: cfg.seed,
                verdict: c.holds,
                error_bound: c.error_bound,
                counterexamples: c
                    .witness
                    .map(|(t, k)| format!("trial {t}: generator {k} does not vanish"))
                    .into_iter()
                    .collect(),
            };
            // A negative answer is a result, not a failure.
            let mut out = Outcome::ok(report.to_json());
            out.payload["trials_run"] = json!(c.trials_run);
            Ok(out)
        }
        Suite::Oracle => {
            let mut bad = Vec::new();
            let mut per_q = Vec::new();
            for qq in [2, 3] {
                let o = achievable_rank_oracle(&a, &d, qq)?;
                bad.extend(o.counterexamples.iter().map(|c| format!("F_{qq}: {c}")));
                per_q.push(o.to_json());
            }
            let m = maximality_check(&a, &d, &cfg)?;
            if !m.agreement {
                bad.push(format!("maximal {:?} but components {:?}", m.maximal, m.components));
            }
            let mut out = verdict(VerificationReport {
                test: "oracle".into(),
                instance,
                trials: cfg.trials,
                seed: cfg.seed,
                verdict: bad.is_empty(),
                error_bound: 4.0 / cfg.field.modulus() as f64,
                counterexamples: bad,
            });
            out.payload["oracles"] = json!(per_q);
            out.payload["maximal"] = json!(m.maximal);
            out.payload["components"] = json!(m.components);
            Ok(out)
        }
        Suite::Endo => {
            let v = need(&args.vertex, "--vertex")?;
            let x = q.vertex_index(v)?;
            let r = single_rank(&a, x, need(&args.rank, "--rank")?)?;
            Ok(verdict(endo_additivity(&a, x, &d, r, &cfg)?))
        }
        Suite::Semistable => {
            let thetas = match &args.theta {
                Some(t) => vec![Weight::parse(q, t)?],
                None => balanced_weights(q.vertex_count(), args.max_weight, &d),
            };
            PrimeField::new(args.q)?;
            let r = node_check(&a, &d, &thetas, args.q)?;
            let mut out = Outcome { ok: r.passed(), payload: r.to_json(), diagnostics: Vec::new() };
            if !r.passed() {
                out.diagnostics.push("node shape law or reduction check failed".into());
                out.diagnostics.extend(r.violations.iter().chain(&r.mismatches).take(10).cloned());
            }
            Ok(out)
        }
    }
}

fn sweep(args: &VerifyArgs, cfg: &SampleConfig) -> Result<Outcome> {
    if args.suite == Suite::Semistable {
        let defaults = SuiteBounds::default();
        let bounds = SuiteBounds {
            max_vertices: args.max_vertices.unwrap_or(defaults.max_vertices),
            max_arrows: args.max_arrows.unwrap_or(defaults.max_arrows),
            max_total_dim: args.max_dim.unwrap_or(defaults.max_total_dim),
            max_weight: args.max_weight,
            q: args.q,
            max_ambient: defaults.max_ambient,
        };
        let r = node_suite(&bounds)?;
        let mut out = Outcome { ok: r.passed(), payload: r.to_json(), diagnostics: Vec::new() };
        if !r.passed() {
            out.diagnostics.push("node shape law or reduction check failed".into());
            out.diagnostics.extend(r.violations.iter().chain(&r.mismatches).take(10).cloned());
        }
        return Ok(out);
    }
    let instances = small_instances(
        args.max_vertices.unwrap_or(3),
        args.max_arrows.unwrap_or(3),
        args.max_dim.unwrap_or(2),
    );
    let report = match args.suite {
        Suite::Oracle => oracle_sweep(&instances, cfg)?,
        Suite::Codim => codim_sweep(&instances, cfg, &[cfg.seed, cfg.seed + 1, cfg.seed + 2])?,
        Suite::Membership => vanishing_sweep(&instances, cfg)?,
        s => bail!("--sweep is not available for the {s:?} suite"),
    };
    Ok(verdict(report))
}

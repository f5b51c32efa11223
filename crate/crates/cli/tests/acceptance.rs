//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails. Runs without the libtest harness so the lines always show.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use qrv_core::components::enumerate_components;
use qrv_core::ideals::{
    build_h, build_t, generators_for_component, saturate_span, span_of, Polynomial, Provenance, SymbolicMatrix, Var,
};
use qrv_core::moduli::{node_suite, SuiteBounds};
use qrv_core::quiver::{AlgebraPresentation, DimensionVector};
use qrv_core::verify::{
    codim_sweep, endo_additivity, oracle_sweep, random_translate_span, small_instances, star_algebra,
    vanishing_sweep, SampleConfig, Sampler,
};
use qrv_core::Result;

const PRIME: u64 = 32003;

struct Outcome {
    pass: bool,
    detail: String,
}

fn algebra_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../algebras").join(name)
}

fn load(name: &str) -> AlgebraPresentation {
    let text = std::fs::read_to_string(algebra_path(name)).expect("fixture");
    AlgebraPresentation::parse(&text).expect("valid fixture")
}

fn poly(a: &AlgebraPresentation, s: &str) -> Polynomial {
    Polynomial::parse(a.quiver(), s).expect("valid polynomial")
}

fn monic_set<'a>(ps: impl IntoIterator<Item = &'a Polynomial>) -> BTreeSet<Polynomial> {
    ps.into_iter().filter(|p| !p.is_zero()).map(Polynomial::monic).collect()
}

fn one_loop_benchmark() -> Result<Outcome> {
    let a = load("one_loop.json");
    let q = a.quiver();
    let d = DimensionVector(vec![2]);
    let comps = enumerate_components(&a, &d)?;
    let shape_ok = comps.len() == 1 && comps[0].dimension == Some(2);
    let r = comps[0].ranks.ranks().clone();
    let g = generators_for_component(q, &d, &r)?;
    let tr = poly(&a, "x_c_1_1 + x_c_2_2");
    let det = poly(&a, "x_c_1_1*x_c_2_2 - x_c_1_2*x_c_2_1");

    // (i) the pair vanishes on sampled points of the component.
    let cfg = SampleConfig::new(PRIME, 0, 1000)?;
    let sampler = Sampler::new(&a, comps[0].ranks.clone())?;
    let mut nonvanishing = 0;
    for t in 0..cfg.trials as u64 {
        let m = sampler.sample_trial(&cfg, t)?;
        for p in [&tr, &det] {
            if p.evaluate(&m)? != 0 {
                nonvanishing += 1;
            }
        }
    }

    // (ii) each emitted generator is a multiple of tr or det, or an entry of
    // X^2 = tr X - det I.
    let mut certified = BTreeSet::new();
    certified.insert(tr.monic());
    certified.insert(det.monic());
    for i in 0..2 {
        for j in 0..2 {
            let lin = tr.mul(&Polynomial::var(Var::new(0, i, j)));
            let ch = if i == j { lin.sub(&det) } else { lin };
            let square = SymbolicMatrix::generic(q, &d, 0).mul(&SymbolicMatrix::generic(q, &d, 0));
            if square.get(i, j) != &ch {
                return Ok(Outcome { pass: false, detail: format!("Cayley-Hamilton identity fails at ({i},{j})") });
            }
            certified.insert(ch.monic());
        }
    }
    let emitted = monic_set(g.polynomials());
    let uncertified = emitted.iter().filter(|p| !certified.contains(p)).count();
    let contains_pair = emitted.contains(&tr.monic()) && emitted.contains(&det.monic());
    Ok(Outcome {
        pass: shape_ok && nonvanishing == 0 && uncertified == 0 && contains_pair,
        detail: format!(
            "{} component(s) of dim {:?}; {} generators, {uncertified} outside <tr,det>; pair nonzero at {nonvanishing}/{} points",
            comps.len(),
            comps.first().and_then(|c| c.dimension),
            g.len(),
            cfg.trials
        ),
    })
}

fn oracle_sweep_criterion() -> Result<Outcome> {
    let instances = small_instances(3, 3, 2);
    let r = oracle_sweep(&instances, &SampleConfig::new(PRIME, 0, 50)?)?;
    Ok(Outcome {
        pass: r.verdict,
        detail: format!("{} instances, q in {{2,3}}, {} disagreements", instances.len(), r.counterexamples.len()),
    })
}

fn codim_criterion() -> Result<Outcome> {
    let instances = small_instances(3, 3, 2);
    let r = codim_sweep(&instances, &SampleConfig::new(PRIME, 0, 20)?, &[0, 1, 2])?;
    Ok(Outcome {
        pass: r.verdict,
        detail: format!("{} instances x 3 seeds, 20 points, {} mismatches", instances.len(), r.counterexamples.len()),
    })
}

fn vanishing_criterion() -> Result<Outcome> {
    let instances = small_instances(3, 3, 2);
    let r = vanishing_sweep(&instances, &SampleConfig::new(PRIME, 0, 1000)?)?;
    Ok(Outcome {
        pass: r.verdict,
        detail: format!(
            "{} instances, 1000 points, {} failures, per-point bound {:.2e}",
            instances.len(),
            r.counterexamples.len(),
            r.error_bound
        ),
    })
}

fn saturation_criterion() -> Result<Outcome> {
    let lp = load("one_loop.json");
    let d1 = DimensionVector(vec![2]);
    let tr = poly(&lp, "x_c_1_1 + x_c_2_2");
    let trace_fixed = saturate_span(lp.quiver(), &d1, 0, std::slice::from_ref(&tr))? == vec![tr];

    let a = load("three_into_x.json");
    let q = a.quiver();
    let x = q.vertex_index("x")?;
    let d = DimensionVector::parse(q, "x:3,a:1,b:1,c:1")?;
    let minor = build_h(q, &d, x).minor(&[0, 1], &[0, 1]);
    let sat = saturate_span(q, &d, x, std::slice::from_ref(&minor))?;
    let rnd = random_translate_span(q, &d, x, &[minor], 50, 0)?;
    let (s, t) = (span_of(&sat), span_of(&rnd));
    let mutual = sat.iter().all(|p| t.contains(p)) && rnd.iter().all(|p| s.contains(p));
    Ok(Outcome {
        pass: trace_fixed && mutual && s.dim() == t.dim(),
        detail: format!("trace fixed: {trace_fixed}; minor span dim {} vs 50 translates {}; mutual containment {mutual}", s.dim(), t.dim()),
    })
}

fn endo_criterion() -> Result<Outcome> {
    // (loops, sources, sinks, d(x), source dim, sink dim, r), 25 draws each.
    let cases = [(0, 1, 1, 2, 1, 1, 1), (1, 1, 1, 2, 1, 1, 1), (1, 2, 1, 3, 1, 2, 2), (2, 1, 2, 3, 2, 1, 1)];
    let mut draws = 0;
    let mut failures = Vec::new();
    for (i, &(loops, ins, outs, dx, ds, dt, r)) in cases.iter().enumerate() {
        let a = star_algebra(loops, ins, outs);
        let mut dims = vec![dx];
        dims.extend(std::iter::repeat_n(ds, ins));
        dims.extend(std::iter::repeat_n(dt, outs));
        let cfg = SampleConfig::new(PRIME, i as u64, 25)?;
        let rep = endo_additivity(&a, 0, &DimensionVector(dims), r, &cfg)?;
        draws += rep.trials;
        failures.extend(rep.counterexamples);
    }
    Ok(Outcome { pass: draws == 100 && failures.is_empty(), detail: format!("{draws} draws, {} mismatches", failures.len()) })
}

fn moduli_criterion() -> Result<Outcome> {
    let r = node_suite(&SuiteBounds::default())?;
    Ok(Outcome {
        pass: r.passed(),
        detail: format!(
            "{} instances ({} skipped above ambient bound), {} semistable reps, {} violations, {} mismatches",
            r.instances,
            r.skipped.len(),
            r.semistable,
            r.violations.len(),
            r.mismatches.len()
        ),
    })
}

fn example_criterion() -> Result<Outcome> {
    let a = load("loop_chain.json");
    let q = a.quiver();
    let d = DimensionVector(vec![2, 2, 2, 2]);
    let gen = |id: &str| SymbolicMatrix::generic(q, &d, q.arrow_index(id).expect("arrow"));
    let (a1, b1, a2, b2, a3) = (gen("A1"), gen("B1"), gen("A2"), gen("B2"), gen("A3"));
    let blocks = build_h(q, &d, 1) == SymbolicMatrix::hcat(2, &[a1.clone(), b1.clone()])
        && build_h(q, &d, 2) == SymbolicMatrix::hcat(2, &[a2.clone(), b2.clone()])
        && build_t(q, &d, 1) == SymbolicMatrix::vcat(2, &[b1.clone(), a2.clone()])
        && build_t(q, &d, 2) == SymbolicMatrix::vcat(2, &[b2.clone(), a3.clone()]);

    let comp = enumerate_components(&a, &d)?.into_iter().next().expect("a component exists");
    let g = generators_for_component(q, &d, comp.ranks.ranks())?;
    let traces: BTreeSet<Polynomial> = g.with_tag(Provenance::TraceLoop).map(|x| x.poly.monic()).collect();
    let traces_ok = traces == monic_set([&b1.trace(), &b2.trace()]);

    let products: BTreeSet<Polynomial> = g.with_tag(Provenance::ProductTH).map(|x| x.poly.monic()).collect();
    let th = [build_t(q, &d, 1).mul(&build_h(q, &d, 1)), build_t(q, &d, 2).mul(&build_h(q, &d, 2))];
    let all_th = monic_set(th.iter().flat_map(|m| m.entries()));
    let named = monic_set(a2.mul(&a1).entries().iter().chain(a3.mul(&a2).entries()));
    let products_ok = products == all_th && named.is_subset(&products);
    let literal = products == named;
    Ok(Outcome {
        pass: blocks && traces_ok && products_ok,
        detail: format!(
            "blocks {blocks}; traces {traces_ok}; type (3) = entries of T_x H_x: {products_ok} ({} polys, A2A1 and A3A2 give {}; literal equality {literal})",
            products.len(),
            named.len()
        ),
    })
}

/// CLI invocations covering criteria 1-8.
fn cli_runs() -> Vec<Vec<String>> {
    let f = |n: &str| algebra_path(n).display().to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut runs = vec![
        vec!["components".into(), f("one_loop.json"), "--dim".into(), "1:2".into()],
        vec!["ideal".into(), f("one_loop.json"), "--dim".into(), "1:2".into(), "--rank".into(), "1:1".into()],
        vec!["verify".into(), f("one_loop.json"), "--dim".into(), "1:2".into(), "--rank".into(), "1:1".into(), "--trials".into(), "1000".into()],
        s(&["verify", "--suite", "oracle", "--sweep", "--trials", "50"]),
        s(&["verify", "--suite", "codim", "--sweep", "--trials", "20"]),
        s(&["verify", "--suite", "membership", "--sweep", "--trials", "1000"]),
        vec![
            "ideal".into(), f("three_into_x.json"), "--dim".into(), "x:3,a:1,b:1,c:1".into(), "--rank".into(), "1".into(),
            "--vertex".into(), "x".into(), "--extra".into(), f("three_into_x_minor.json"),
        ],
        vec![
            "verify".into(), f("star.json"), "--suite".into(), "endo".into(), "--vertex".into(), "x".into(),
            "--dim".into(), "x:3,s:1,t:2".into(), "--rank".into(), "1".into(), "--trials".into(), "100".into(),
        ],
        s(&["verify", "--suite", "semistable", "--sweep"]),
        vec!["ideal".into(), f("loop_chain.json"), "--dim".into(), "1:2,2:2,3:2,4:2".into(), "--rank".into(), "1:0,2:1,3:1,4:1".into()],
    ];
    for r in runs.iter_mut().filter(|r| r[0] == "verify") {
        r.extend(s(&["--seed", "7"]));
    }
    runs
}

fn determinism_criterion() -> Result<Outcome> {
    let bin = env!("CARGO_BIN_EXE_qrv");
    let runs = cli_runs();
    let mut differing = Vec::new();
    let mut failed = Vec::new();
    for args in &runs {
        let outs: Vec<_> = (0..2)
            .map(|_| Command::new(bin).args(args).env_remove("QRV_SEED").output().expect("spawn qrv"))
            .collect();
        if !outs[0].status.success() {
            failed.push(args.join(" "));
        }
        if outs[0].stdout != outs[1].stdout || outs[0].stdout.is_empty() {
            differing.push(args.join(" "));
        }
    }
    Ok(Outcome {
        pass: differing.is_empty() && failed.is_empty(),
        detail: format!(
            "{} commands run twice; {} differ; {} exited nonzero{}",
            runs.len(),
            differing.len(),
            failed.len(),
            failed.first().map(|c| format!(" (first: {c})")).unwrap_or_default()
        ),
    })
}

fn main() {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, Check, u64); 9] = [
        ("one-loop benchmark", one_loop_benchmark, 1),
        ("oracle sweep", oracle_sweep_criterion, 120),
        ("codimension", codim_criterion, 60),
        ("vanishing/separation", vanishing_criterion, 120),
        ("saturation closure", saturation_criterion, 10),
        ("endomorphism additivity", endo_criterion, 30),
        ("node shape and reduction", moduli_criterion, 120),
        ("block structure example", example_criterion, 5),
        ("determinism", determinism_criterion, 600),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = outcome.pass && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {}: {} {name}: {} [{:.2}s, budget {budget}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}

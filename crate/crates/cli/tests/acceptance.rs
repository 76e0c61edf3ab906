//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p gauge-ca-cli --test acceptance`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gauge_ca::qca::{
    check_observable_gauge_constraint, check_q_invariance, qca_run, random_phase_field, random_state,
    scattering_gate, scattering_matrix, truncated_basis, unitarity_deviation, BasisState, Component,
    LinkTriple, PhaseField, QuantumState, ScatteringParams, SparseOperator,
};
use gauge_ca::{
    apply_global, check_equivalence, check_global_invariance, check_local_invariance,
    check_proposition_statements, check_simulation, Automaton, Cell, EquivalenceVerdict, GaugeElement,
    GaugeGroup, GaugeTransformation, LinkRule, RingTransformations, RuleVariant, Topology, Verdict, Witness,
};
use gauge_ca_cli::{parse_scenario, render_scenario, render_trace, simulate, Format, Trace};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn read(rel: &str) -> Result<String, String> {
    std::fs::read_to_string(root().join(rel)).map_err(|e| format!("{rel}: {e}"))
}

fn classical_trace(name: &str) -> Result<Vec<gauge_ca::GaugedConfiguration>, String> {
    let scenario = parse_scenario(&read(&format!("scenarios/{name}.scn"))?).map_err(|e| e.to_string())?;
    match simulate(&scenario, scenario.run.steps).map_err(|e| e.to_string())? {
        Trace::Classical(t) => Ok(t),
        Trace::Quantum(_) => Err(format!("{name} is not classical")),
    }
}

fn local_exhaustive(group: &GaugeGroup, limit: Duration) -> Outcome {
    let n = group.degree();
    let start = Instant::now();
    let report = check_local_invariance(group, &LinkRule::gauged(n)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    // |Σ| · |Λ| · |Σ| · |G|², with Σ = pairs over n letters and Λ = G.
    let expected = (n * n * group.len() * n * n * group.len() * group.len()) as u64;
    ensure(report.verdict == Verdict::Invariant, || {
        format!("counterexample {:?}", report.witness)
    })?;
    ensure(report.cases_checked == expected, || {
        format!("cases {} != {expected}", report.cases_checked)
    })?;
    within(elapsed, limit)?;
    Ok(format!(
        "cases={} counterexamples=0 in {elapsed:.2?}",
        report.cases_checked
    ))
}

fn criterion_1() -> Outcome {
    // The product 4·2·4·2·2 over Σ×Λ×Σ×G² evaluates to 128; every element is enumerated.
    local_exhaustive(&GaugeGroup::abelian_swap(), Duration::from_secs(1))
}

fn criterion_2() -> Outcome {
    local_exhaustive(
        &GaugeGroup::symmetric(3).map_err(|e| e.to_string())?,
        Duration::from_secs(5),
    )
}

fn criterion_3() -> Outcome {
    let group = GaugeGroup::abelian_swap();
    let bare = LinkRule::bare(2);
    let local = check_local_invariance(&group, &bare).map_err(|e| e.to_string())?;
    let Some(Witness::Local(lw)) = &local.witness else {
        return Err("no local witness".into());
    };
    ensure(lw.replay(&bare), || "local witness does not replay".into())?;

    let global = check_global_invariance(&group, &bare, 3, 1, None).map_err(|e| e.to_string())?;
    let Some(Witness::Global(gw)) = &global.witness else {
        return Err("no global witness".into());
    };
    ensure(gw.replay(&bare).map_err(|e| e.to_string())?, || {
        "global witness does not replay".into()
    })?;

    // No transformation whatsoever applied after the step compensates the one applied before it.
    let lhs = bare.step(&apply_global(&gw.transform, &gw.config).map_err(|e| e.to_string())?);
    let plain = bare.step(&gw.config);
    let mut tried = 0;
    for post in RingTransformations::new(&group, 3).iter() {
        tried += 1;
        if apply_global(&post, &plain).map_err(|e| e.to_string())? == lhs {
            return Err(format!("transformation {post:?} compensates the witness"));
        }
    }
    Ok(format!(
        "local witness after {} cases, global witness t={} x={}; none of {tried} compensations match",
        local.cases_checked, gw.steps, gw.position
    ))
}

fn criterion_4() -> Outcome {
    let group = GaugeGroup::abelian_swap();
    let rule = LinkRule::gauged(2);
    let start = Instant::now();
    let mut lines = Vec::new();
    for size in [2usize, 3] {
        let report = check_global_invariance(&group, &rule, size, 3, None).map_err(|e| e.to_string())?;
        // (|Σ|·|Λ|)^n configurations × |G|^n transformations × 3 horizons.
        let expected = 8u64.pow(size as u32) * 2u64.pow(size as u32) * 3;
        ensure(report.is_invariant() && report.complete, || {
            format!("ring {size}: {:?}", report.witness)
        })?;
        ensure(report.cases_checked == expected, || {
            format!("ring {size}: cases {} != {expected}", report.cases_checked)
        })?;
        lines.push(format!("ring({size}) cases={}", report.cases_checked));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{} counterexamples=0 t=1..3 in {elapsed:.2?}",
        lines.join(" ")
    ))
}

fn criterion_5() -> Outcome {
    let group = GaugeGroup::abelian_swap();
    let ring = Topology::Ring(2);
    let t = RuleVariant::plain(LinkRule::gauged(2), ring);
    let t_swap = RuleVariant::new(
        LinkRule::gauged(2),
        GaugeTransformation::uniform(2, GaugeElement::swap()),
    )
    .map_err(|e| e.to_string())?;
    let report = check_proposition_statements(&t, &t_swap, &group, 2, None).map_err(|e| e.to_string())?;
    let s = report.statements.ok_or("statements missing")?;
    ensure(s.simulated && s.exists_pre && s.forall_post, || {
        format!("statements {s:?}")
    })?;
    ensure(report.hypotheses_hold == Some(true), || {
        "hypotheses should hold".into()
    })?;

    let bare = RuleVariant::plain(LinkRule::bare(2), ring);
    let flagged = check_proposition_statements(&t, &bare, &group, 2, None).map_err(|e| e.to_string())?;
    ensure(flagged.hypotheses_hold == Some(false), || {
        "bare variant not flagged".into()
    })?;
    Ok(format!(
        "(1)=(2)=(3)=true for swap∘T; bare T' flagged with statements {:?}",
        flagged
            .statements
            .map(|s| (s.simulated, s.exists_pre, s.forall_post))
    ))
}

fn criterion_6() -> Outcome {
    for name in ["fig6a", "fig6b", "fig6c"] {
        let golden = read(&format!("tests/golden/{name}.txt"))?;
        let text = render_trace(&Trace::Classical(classical_trace(name)?), Format::Text)
            .map_err(|e| e.to_string())?;
        ensure(text == golden, || format!("{name} differs from its golden file"))?;
    }
    let plain = classical_trace("fig6a")?;
    let prepared = classical_trace("fig6b")?;
    let gamma =
        GaugeTransformation::single(Topology::Ring(8), 4, GaugeElement::swap()).map_err(|e| e.to_string())?;
    let compensated = apply_global(&gamma.inverse(), prepared.last().unwrap()).map_err(|e| e.to_string())?;
    ensure(&compensated == plain.last().unwrap(), || {
        "compensated (b) differs from (a)".into()
    })?;
    let scenario_compensated = classical_trace("fig6b-compensated")?;
    ensure(scenario_compensated.last() == plain.last(), || {
        "apply = both differs from (a)".into()
    })?;
    Ok("goldens (a)(b)(c) match; (b) + final compensation == (a) at t=6".into())
}

fn criterion_7() -> Outcome {
    let group = GaugeGroup::abelian_swap();
    let ring = Topology::Ring(2);
    let t = RuleVariant::plain(LinkRule::gauged(2), ring);
    let t_swap = RuleVariant::new(
        LinkRule::gauged(2),
        GaugeTransformation::uniform(2, GaugeElement::swap()),
    )
    .map_err(|e| e.to_string())?;
    let forward = check_simulation(&t, &t_swap, &group, 2, None).map_err(|e| e.to_string())?;
    let backward = check_simulation(&t_swap, &t, &group, 2, None).map_err(|e| e.to_string())?;
    ensure(forward.verdict == EquivalenceVerdict::Simulates, || {
        "T not simulated by swap∘T".into()
    })?;
    ensure(backward.verdict == EquivalenceVerdict::Simulates, || {
        "swap∘T not simulated by T".into()
    })?;
    let both = check_equivalence(&t, &t_swap, &group, 2, None).map_err(|e| e.to_string())?;
    ensure(both.verdict == EquivalenceVerdict::Equivalent, || {
        "not equivalent".into()
    })?;
    Ok(format!(
        "Simulates both ways ({} + {} cases), Equivalent",
        forward.cases_checked, backward.cases_checked
    ))
}

fn criterion_8() -> Outcome {
    let eps = 0.1;
    let sets = [
        (0.5, eps, 1.0),
        (0.0, eps, 0.0),
        (std::f64::consts::PI / (2.0 * eps), eps, 1.0),
        (1.7, 0.5, 3.0),
        (3.0, 0.05, -2.0),
    ];
    let mut worst = 0.0f64;
    for (m, e, g) in sets {
        let p = ScatteringParams::new(m, e, g, 4).map_err(|e| e.to_string())?;
        let (_, matrix) = scattering_matrix(&p).map_err(|e| e.to_string())?;
        let dev = unitarity_deviation(&matrix);
        ensure(dev <= 1e-12, || {
            format!("(m={m}, ε={e}, g={g}) deviation {dev:e}")
        })?;
        worst = worst.max(dev);
    }
    Ok(format!("5 parameter sets, max deviation {worst:e}"))
}

fn criterion_9() -> Outcome {
    let l_max = 4i64;
    // One extra unit of truncation so that every input with |l| <= 4 has all its outputs.
    let p = ScatteringParams::new(0.9, 0.3, 1.4, l_max as u32 + 1).map_err(|e| e.to_string())?;
    let mut inputs = 0;
    for l in -l_max..=l_max {
        for m in 0..2u8 {
            for n in 0..2u8 {
                let t = LinkTriple::new(m, l, n);
                let out = scattering_gate(&p, &[(t, Complex64::new(1.0, 0.0))].into())
                    .map_err(|e| e.to_string())?;
                for o in out.keys() {
                    let before = (i64::from(m) - l, i64::from(n) + l);
                    let after = (i64::from(o.m) - o.l, i64::from(o.n) + o.l);
                    ensure(before == after, || format!("{t:?} -> {o:?}"))?;
                }
                inputs += 1;
            }
        }
    }
    Ok(format!("{inputs} basis inputs, (m-l, n+l) conserved exactly"))
}

fn criterion_10() -> Outcome {
    let p = ScatteringParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_610);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let psi = random_state(4, 3, 4, &mut rng).map_err(|e| e.to_string())?;
        let phi = random_phase_field(4, &mut rng);
        worst = worst.max(check_q_invariance(&p, &psi, &phi).map_err(|e| e.to_string())?);
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-10, || format!("max commutator norm {worst:e}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "100 trials, ring(4), L_max=4, max norm {worst:e} in {elapsed:.2?}"
    ))
}

fn criterion_11() -> Outcome {
    // 100 steps move a counter by at most 100, starting from 0.
    let p = ScatteringParams::new(0.5, 0.1, 1.0, 102).map_err(|e| e.to_string())?;
    let ring = Topology::Ring(8);
    let start =
        BasisState::new(ring, [(0, Cell::new(0, 1)), (4, Cell::new(1, 0))], []).map_err(|e| e.to_string())?;
    let trace = qca_run(&p, &QuantumState::basis(ring, start), 100).map_err(|e| e.to_string())?;
    let worst = trace
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    ensure(worst <= 1e-9, || format!("|norm - 1| reached {worst:e}"))?;
    Ok(format!(
        "100 steps, {} basis states at t=100, max |norm-1| {worst:e}",
        trace[100].len()
    ))
}

fn criterion_12() -> Outcome {
    let ring = Topology::Ring(2);
    let basis = truncated_basis(2, 1).map_err(|e| e.to_string())?;
    let id = SparseOperator::identity(ring, basis.clone()).map_err(|e| e.to_string())?;
    let number = SparseOperator::number(ring, basis.clone()).map_err(|e| e.to_string())?;
    let raising = SparseOperator::raising(ring, basis, 0, Component::Right).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_invariant, mut least_raising) = (0.0f64, f64::INFINITY);
    for _ in 0..10 {
        let phi = PhaseField::Ring(vec![rng.random_range(0.5..2.5), rng.random_range(-2.5..-0.5)]);
        for op in [&id, &number] {
            worst_invariant =
                worst_invariant.max(check_observable_gauge_constraint(op, &phi).map_err(|e| e.to_string())?);
        }
        least_raising =
            least_raising.min(check_observable_gauge_constraint(&raising, &phi).map_err(|e| e.to_string())?);
    }
    ensure(worst_invariant <= 1e-12, || {
        format!("identity/number commutator {worst_invariant:e}")
    })?;
    ensure(least_raising > 0.1, || {
        format!("raising commutator {least_raising}")
    })?;
    Ok(format!(
        "identity/number max {worst_invariant:e}, raising min {least_raising:.3}"
    ))
}

fn criterion_13() -> Outcome {
    let list = |dir: &str| -> Result<Vec<PathBuf>, String> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(root().join(dir))
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "scn"))
            .collect();
        v.sort();
        Ok(v)
    };
    let good = list("scenarios")?;
    ensure(good.len() >= 10, || format!("only {} corpus files", good.len()))?;
    for path in &good {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let parsed = parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let again = parse_scenario(&render_scenario(&parsed)).map_err(|e| e.to_string())?;
        ensure(again == parsed, || {
            format!("{} does not round-trip", path.display())
        })?;
    }
    let bad = list("scenarios/malformed")?;
    ensure(bad.len() == 5, || format!("{} malformed files", bad.len()))?;
    for path in &bad {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let expected: usize = text
            .lines()
            .find_map(|l| l.strip_prefix("# expect-line:"))
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| format!("{} lacks an expect-line header", path.display()))?;
        match parse_scenario(&text) {
            Ok(_) => return Err(format!("{} parsed", path.display())),
            Err(e) => ensure(e.line == expected, || {
                format!("{}: {e}, expected line {expected}", path.display())
            })?,
        }
    }
    Ok(format!(
        "{} files round-trip; {} malformed files fail at the expected line",
        good.len(),
        bad.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("local-invariance-abelian", criterion_1),
        ("local-invariance-nonabelian", criterion_2),
        ("bare-rule-witness", criterion_3),
        ("global-invariance-rings", criterion_4),
        ("characterisation-statements", criterion_5),
        ("fig6-diagrams", criterion_6),
        ("fig9-equivalence", criterion_7),
        ("qca-unitarity", criterion_8),
        ("qca-scattering-invariant", criterion_9),
        ("qca-gauge-invariance", criterion_10),
        ("qca-norm", criterion_11),
        ("observable-constraint", criterion_12),
        ("scenario-parser", criterion_13),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

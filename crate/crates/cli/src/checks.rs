//! Runs the checks a scenario requests and formats one report line per check:
//! `PASS|FAIL <check-name> cases=<n> [witness=...]`.

use std::fmt;

use gauge_ca::invariance::{GlobalWitness, LocalWitness};
use gauge_ca::qca::{
    check_q_invariance, qca_run, random_phase_field, random_state, scattering_matrix, unitarity_deviation,
};
use gauge_ca::{
    check_equivalence, check_global_invariance, check_line_invariance, check_local_invariance,
    check_proposition_statements, EquivalenceVerdict, GaugedConfiguration, LinkRule, Position, Result,
    Topology, Witness,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scenario::{Check, Model, Scenario};
use crate::simulate::{automaton, group_of, initial_state};

/// Tolerance on `‖step(γψ) − γ step(ψ)‖`.
pub const QUANTUM_INVARIANCE_TOL: f64 = 1e-10;
pub const UNITARITY_TOL: f64 = 1e-12;
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub cases: u64,
    pub witness: Option<String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} cases={}", self.check.name(), self.cases)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        Ok(())
    }
}

pub fn format_configuration(config: &GaugedConfiguration) -> String {
    let cells: Vec<String> = config
        .matter()
        .cells()
        .map(|(x, c)| format!("{x}:{},{}", c.left, c.right))
        .collect();
    let links: Vec<String> = config.links().map(|(x, g)| format!("{x}:{g}")).collect();
    format!("cells[{}],links[{}]", cells.join(";"), links.join(";"))
}

fn format_local(w: &LocalWitness) -> String {
    format!(
        "cell({},{}),link{},cell({},{}),g_left{},g_right{}",
        w.left.left, w.left.right, w.link, w.right.left, w.right.right, w.g_left, w.g_right
    )
}

fn format_global(w: &GlobalWitness) -> String {
    let sites: Vec<String> = w
        .transform
        .non_identity_sites()
        .iter()
        .map(|(x, g)| format!("{x}:{g}"))
        .collect();
    format!(
        "{},gamma[{}],t={},x={}",
        format_configuration(&w.config),
        sites.join(";"),
        w.steps,
        w.position
    )
}

fn format_witness(w: &Witness) -> String {
    match w {
        Witness::Local(l) => format_local(l),
        Witness::Global(g) => format_global(g),
    }
}

fn line_radius(scenario: &Scenario) -> Position {
    let extent = scenario
        .matter
        .keys()
        .chain(scenario.field.keys())
        .map(|x| x.abs())
        .max()
        .unwrap_or(0);
    extent.max(3)
}

fn run_one(scenario: &Scenario, check: Check, steps: usize) -> Result<CheckOutcome> {
    let run = &scenario.run;
    let outcome = |passed: bool, cases: u64, witness: Option<String>| CheckOutcome {
        check,
        passed,
        cases,
        witness,
    };
    match check {
        Check::LocalInvariance => {
            let group = group_of(&scenario.model)?;
            let report = check_local_invariance(&group, &LinkRule::new(group.degree(), scenario.rule))?;
            Ok(outcome(
                report.is_invariant(),
                report.cases_checked,
                report.witness.as_ref().map(format_witness),
            ))
        }
        Check::GlobalInvariance => {
            let group = group_of(&scenario.model)?;
            let rule = automaton(scenario, Topology::ring(run.check_ring)?)?;
            let report = check_global_invariance(&group, &rule, run.check_ring, run.check_steps, None)?;
            Ok(outcome(
                report.is_invariant(),
                report.cases_checked,
                report.witness.as_ref().map(format_witness),
            ))
        }
        Check::LineInvariance => {
            let group = group_of(&scenario.model)?;
            let rule = automaton(scenario, Topology::Line)?;
            let report = check_line_invariance(
                &group,
                &rule,
                run.seed,
                run.trials,
                run.check_steps,
                line_radius(scenario),
            )?;
            Ok(outcome(
                report.is_invariant(),
                report.cases_checked,
                report.witness.as_ref().map(format_witness),
            ))
        }
        Check::Equivalence | Check::Proposition => {
            let group = group_of(&scenario.model)?;
            let ring = Topology::ring(run.check_ring)?;
            let base = gauge_ca::RuleVariant::plain(LinkRule::new(group.degree(), scenario.rule), ring);
            let variant = automaton(scenario, ring)?;
            if check == Check::Equivalence {
                let report = check_equivalence(&base, &variant, &group, run.check_ring, None)?;
                let passed = report.verdict == EquivalenceVerdict::Equivalent;
                let witness = report
                    .failing
                    .as_ref()
                    .map(|c| format!("unmatched {}", format_configuration(c)));
                Ok(outcome(passed, report.cases_checked, witness))
            } else {
                let report = check_proposition_statements(&base, &variant, &group, run.check_ring, None)?;
                let s = report.statements.expect("statements are always evaluated");
                let hypotheses = report.hypotheses_hold == Some(true);
                let passed = hypotheses && s.agree();
                let witness = (!passed).then(|| {
                    format!(
                        "hypotheses={hypotheses},simulated={},exists_pre={},forall_post={}",
                        s.simulated, s.exists_pre, s.forall_post
                    )
                });
                Ok(outcome(passed, report.cases_checked, witness))
            }
        }
        Check::QuantumInvariance => {
            let Model::Quantum(params) = &scenario.model else {
                unreachable!("checked by the parser")
            };
            let size = scenario.topology.ring_size().unwrap_or(run.check_ring);
            let bound = i64::from(params.l_max.saturating_sub(1));
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            let mut worst: Option<(f64, usize)> = None;
            for trial in 0..run.trials {
                let psi = random_state(size, bound, 4, &mut rng)?;
                let phi = random_phase_field(size, &mut rng);
                let d = check_q_invariance(params, &psi, &phi)?;
                if worst.is_none_or(|(w, _)| d > w) {
                    worst = Some((d, trial));
                }
            }
            let passed = worst.is_none_or(|(d, _)| d <= QUANTUM_INVARIANCE_TOL);
            let witness = worst
                .filter(|_| !passed)
                .map(|(d, t)| format!("trial={t},distance={d:e}"));
            Ok(outcome(passed, run.trials as u64, witness))
        }
        Check::Unitarity => {
            let Model::Quantum(params) = &scenario.model else {
                unreachable!("checked by the parser")
            };
            let (basis, m) = scattering_matrix(params)?;
            let dev = unitarity_deviation(&m);
            let passed = dev <= UNITARITY_TOL;
            Ok(outcome(
                passed,
                (basis.len() * basis.len()) as u64,
                (!passed).then(|| format!("deviation={dev:e}")),
            ))
        }
        Check::Norm => {
            let Model::Quantum(params) = &scenario.model else {
                unreachable!("checked by the parser")
            };
            let trace = qca_run(params, &initial_state(scenario)?, steps)?;
            let worst = trace
                .iter()
                .enumerate()
                .map(|(t, psi)| (t, (psi.norm() - 1.0).abs()))
                .fold((0, 0.0f64), |a, b| if b.1 > a.1 { b } else { a });
            let passed = worst.1 <= NORM_TOL;
            Ok(outcome(
                passed,
                trace.len() as u64,
                (!passed).then(|| format!("t={},deviation={:e}", worst.0, worst.1)),
            ))
        }
    }
}

/// Runs every requested check in order. An `Err` is an infrastructure
/// failure, distinct from a check that ran and failed.
pub fn run_checks(scenario: &Scenario, steps: usize) -> Result<Vec<CheckOutcome>> {
    scenario
        .run
        .checks
        .iter()
        .map(|&c| run_one(scenario, c, steps))
        .collect()
}

pub fn report(outcomes: &[CheckOutcome]) -> String {
    outcomes.iter().map(|o| format!("{o}\n")).collect()
}

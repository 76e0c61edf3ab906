//! Builds the initial state of a scenario and evolves it.

use gauge_ca::qca::{gauge_transform_q, qca_run, BasisState, PhaseField, QuantumState};
use gauge_ca::{
    apply_global, make_configuration, Automaton, GaugeTransformation, GaugedConfiguration, LinkRule, Result,
    RuleVariant, Topology,
};

use crate::scenario::{Apply, Model, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub enum Trace {
    Classical(Vec<GaugedConfiguration>),
    Quantum(Vec<QuantumState>),
}

impl Trace {
    pub fn len(&self) -> usize {
        match self {
            Trace::Classical(t) => t.len(),
            Trace::Quantum(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The automaton a classical scenario runs: the base rule, followed by the
/// uniform post-transformation when one is given.
pub fn automaton(scenario: &Scenario, topology: Topology) -> Result<RuleVariant> {
    let n = scenario.model.alphabet();
    let base = LinkRule::new(n, scenario.rule);
    match (&scenario.post, topology) {
        (Some(g), Topology::Ring(size)) => {
            RuleVariant::new(base, GaugeTransformation::uniform(size, g.clone()))
        }
        _ => Ok(RuleVariant::plain(base, topology)),
    }
}

pub fn initial_configuration(scenario: &Scenario) -> Result<GaugedConfiguration> {
    let matter = make_configuration(
        scenario.topology,
        scenario.model.alphabet(),
        scenario.matter.clone(),
    )?;
    GaugedConfiguration::with_links(matter, scenario.field.clone())
}

pub fn initial_state(scenario: &Scenario) -> Result<QuantumState> {
    let basis = BasisState::new(
        scenario.topology,
        scenario.matter.iter().map(|(&x, &c)| (x, c)),
        scenario.counters.iter().map(|(&x, &l)| (x, l)),
    )?;
    Ok(QuantumState::basis(scenario.topology, basis))
}

fn classical_gamma(scenario: &Scenario) -> Result<Option<(Apply, GaugeTransformation)>> {
    let Some(gauge) = &scenario.gauge else {
        return Ok(None);
    };
    let n = scenario.model.alphabet();
    let mut gamma = GaugeTransformation::identity(scenario.topology, n);
    for (&x, g) in &gauge.sites {
        gamma.set(x, g.clone())?;
    }
    Ok(Some((gauge.apply, gamma)))
}

fn phase_field(scenario: &Scenario) -> Option<(Apply, PhaseField)> {
    let gauge = scenario.gauge.as_ref()?;
    let phi = match scenario.topology {
        Topology::Ring(n) => PhaseField::Ring(
            (0..n as i64)
                .map(|x| gauge.phases.get(&x).copied().unwrap_or(0.0))
                .collect(),
        ),
        Topology::Line => PhaseField::Line(gauge.phases.clone()),
    };
    Some((gauge.apply, phi))
}

/// Evolves the scenario for `steps` steps. A final gauge transformation
/// replaces the last frame rather than adding one.
pub fn simulate(scenario: &Scenario, steps: usize) -> Result<Trace> {
    match &scenario.model {
        Model::Quantum(params) => {
            let mut psi = initial_state(scenario)?;
            let schedule = phase_field(scenario);
            if let Some((Apply::Initial | Apply::Both, phi)) = &schedule {
                psi = gauge_transform_q(phi, &psi)?;
            }
            let mut trace = qca_run(params, &psi, steps)?;
            let last = trace.last_mut().expect("trace holds the initial state");
            match &schedule {
                Some((Apply::Final, phi)) => *last = gauge_transform_q(phi, last)?,
                Some((Apply::Both, phi)) => *last = gauge_transform_q(&phi.negated(), last)?,
                _ => {}
            }
            Ok(Trace::Quantum(trace))
        }
        _ => {
            let rule = automaton(scenario, scenario.topology)?;
            let mut config = initial_configuration(scenario)?;
            let schedule = classical_gamma(scenario)?;
            if let Some((Apply::Initial | Apply::Both, gamma)) = &schedule {
                config = apply_global(gamma, &config)?;
            }
            let mut trace = rule.run(&config, steps);
            let last = trace.last_mut().expect("trace holds the initial configuration");
            match &schedule {
                Some((Apply::Final, gamma)) => *last = apply_global(gamma, last)?,
                Some((Apply::Both, gamma)) => *last = apply_global(&gamma.inverse(), last)?,
                _ => {}
            }
            Ok(Trace::Classical(trace))
        }
    }
}

/// The group a classical model is gauged by.
pub fn group_of(model: &Model) -> Result<gauge_ca::GaugeGroup> {
    match model {
        Model::Abelian => Ok(gauge_ca::GaugeGroup::abelian_swap()),
        Model::NonAbelian { n } => gauge_ca::GaugeGroup::symmetric(*n),
        Model::Quantum(_) => Err(gauge_ca::Error::InvalidParameter(
            "the quantum model has no finite gauge group".into(),
        )),
    }
}

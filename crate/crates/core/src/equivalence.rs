//! Gauge-equivalence of automata, decided by brute force on small rings.
//!
//! `T` is simulated by `T'` when every configuration `c` admits a pair of
//! gauge transformations with `γ(T(c)) = T'(γ'(c))`. The witnesses may
//! depend on `c`. Two automata are equivalent when each simulates the
//! other.
//!
//! Classical gauge-constraining is not offered; only the quantum
//! observable test in [`crate::qca`] exists.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::classical::{Automaton, LinkRule};
use crate::error::{Error, Result};
use crate::gauge_group::{apply_global, GaugeGroup, GaugeTransformation, RingTransformations};
use crate::invariance::check_global_invariance;
use crate::lattice::{GaugedConfiguration, RingConfigurations, Topology};

/// A link rule followed, after every step, by a fixed gauge transformation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleVariant {
    base: LinkRule,
    post: GaugeTransformation,
}

impl RuleVariant {
    pub fn new(base: LinkRule, post: GaugeTransformation) -> Result<Self> {
        if post.degree() != base.alphabet() {
            return Err(Error::DegreeMismatch {
                left: post.degree(),
                right: base.alphabet(),
            });
        }
        Ok(RuleVariant { base, post })
    }

    /// The rule itself, with the identity as post-transformation.
    pub fn plain(base: LinkRule, topology: Topology) -> Self {
        RuleVariant {
            base,
            post: GaugeTransformation::identity(topology, base.alphabet()),
        }
    }

    pub fn base(&self) -> LinkRule {
        self.base
    }

    pub fn post(&self) -> &GaugeTransformation {
        &self.post
    }

    fn check_ring(&self, size: usize) -> Result<()> {
        match self.post.ring_size() {
            Some(n) if n == size => Ok(()),
            _ => Err(Error::TopologyMismatch(format!(
                "rule variant post-transformation does not live on a ring of {size}"
            ))),
        }
    }
}

impl Automaton for RuleVariant {
    fn step(&self, config: &GaugedConfiguration) -> GaugedConfiguration {
        let next = self.base.step(config);
        if self.post.is_identity() {
            return next;
        }
        apply_global(&self.post, &next).expect("post-transformation matches the lattice")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Simulates,
    Equivalent,
    NotSimulated,
}

/// `(γ ∘ T)(c) = (T' ∘ γ')(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationWitness {
    pub config: GaugedConfiguration,
    pub gamma: GaugeTransformation,
    pub gamma_prime: GaugeTransformation,
}

/// The three characterisations of "T is simulated by T'".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropositionStatements {
    /// (1) for all c there are γ, γ' with γ(T(c)) = T'(γ'(c)).
    pub simulated: bool,
    /// (2) for all c there is γ with T(c) = T'(γ(c)).
    pub exists_pre: bool,
    /// (3) for all c and all γ there is γ' with γ(T(c)) = T'(γ'(c)).
    pub forall_post: bool,
}

impl PropositionStatements {
    pub fn agree(&self) -> bool {
        self.simulated == self.exists_pre && self.exists_pre == self.forall_post
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub verdict: EquivalenceVerdict,
    /// One witness per configuration, in enumeration order (empty unless simulated).
    pub witnesses: Vec<SimulationWitness>,
    /// The first configuration with no witness pair.
    pub failing: Option<GaugedConfiguration>,
    pub statements: Option<PropositionStatements>,
    /// Whether both automata passed the one-step invariance check with `Z = Id`.
    pub hypotheses_hold: Option<bool>,
    pub cases_checked: u64,
    pub complete: bool,
}

struct Search<'a, A, B> {
    t: &'a A,
    t_prime: &'a B,
    configs: RingConfigurations,
    gammas: Vec<GaugeTransformation>,
    config_count: u64,
    complete: bool,
}

impl<'a, A: Automaton + Sync, B: Automaton + Sync> Search<'a, A, B> {
    fn new(
        t: &'a A,
        t_prime: &'a B,
        group: &GaugeGroup,
        ring_size: usize,
        budget: Option<u64>,
    ) -> Result<Self> {
        let configs = RingConfigurations::new(ring_size, group.degree(), group.elements().to_vec())?;
        let gammas: Vec<_> = RingTransformations::new(group, ring_size).iter().collect();
        let per_config = (gammas.len() * gammas.len()) as u64;
        let mut config_count = configs.len();
        let mut complete = true;
        if let Some(budget) = budget {
            let affordable = budget / per_config.max(1);
            if affordable < config_count {
                config_count = affordable;
                complete = false;
            }
        }
        Ok(Search {
            t,
            t_prime,
            configs,
            gammas,
            config_count,
            complete,
        })
    }

    fn cases(&self) -> u64 {
        self.config_count * (self.gammas.len() * self.gammas.len()) as u64
    }

    /// `T'(γ'(c))` for every γ', keyed by result (first γ' index wins).
    fn images(&self, c: &GaugedConfiguration) -> Result<HashMap<GaugedConfiguration, usize>> {
        let mut images = HashMap::new();
        for (j, g) in self.gammas.iter().enumerate() {
            images.entry(self.t_prime.step(&apply_global(g, c)?)).or_insert(j);
        }
        Ok(images)
    }

    fn post_images(&self, c: &GaugedConfiguration) -> Result<Vec<GaugedConfiguration>> {
        let tc = self.t.step(c);
        self.gammas.iter().map(|g| apply_global(g, &tc)).collect()
    }

    fn witness(&self, c: &GaugedConfiguration) -> Result<Option<SimulationWitness>> {
        let images = self.images(c)?;
        for (i, lhs) in self.post_images(c)?.into_iter().enumerate() {
            if let Some(&j) = images.get(&lhs) {
                return Ok(Some(SimulationWitness {
                    config: c.clone(),
                    gamma: self.gammas[i].clone(),
                    gamma_prime: self.gammas[j].clone(),
                }));
            }
        }
        Ok(None)
    }

    fn exists_pre(&self, c: &GaugedConfiguration) -> Result<bool> {
        let tc = self.t.step(c);
        for g in &self.gammas {
            if self.t_prime.step(&apply_global(g, c)?) == tc {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn forall_post(&self, c: &GaugedConfiguration) -> Result<bool> {
        let images = self.images(c)?;
        Ok(self.post_images(c)?.iter().all(|lhs| images.contains_key(lhs)))
    }

    /// Per-configuration witnesses in order, or the first failing configuration.
    fn simulate(&self) -> Result<std::result::Result<Vec<SimulationWitness>, GaugedConfiguration>> {
        let results: Vec<Result<Option<SimulationWitness>>> = (0..self.config_count)
            .into_par_iter()
            .map(|i| self.witness(&self.configs.get(i)))
            .collect();
        let mut witnesses = Vec::with_capacity(results.len());
        for (i, r) in results.into_iter().enumerate() {
            match r? {
                Some(w) => witnesses.push(w),
                None => return Ok(Err(self.configs.get(i as u64))),
            }
        }
        Ok(Ok(witnesses))
    }

    fn holds_everywhere(
        &self,
        statement: impl Fn(&Self, &GaugedConfiguration) -> Result<bool> + Sync,
    ) -> Result<bool>
    where
        Self: Sync,
    {
        let results: Vec<Result<bool>> = (0..self.config_count)
            .into_par_iter()
            .map(|i| statement(self, &self.configs.get(i)))
            .collect();
        results.into_iter().try_fold(true, |acc, r| Ok(acc && r?))
    }
}

fn check_variants(ring_size: usize, variants: &[&RuleVariant]) -> Result<()> {
    variants.iter().try_for_each(|v| v.check_ring(ring_size))
}

/// Brute-force decision of whether `t` is simulated by `t_prime` on a ring.
pub fn check_simulation(
    t: &RuleVariant,
    t_prime: &RuleVariant,
    group: &GaugeGroup,
    ring_size: usize,
    budget: Option<u64>,
) -> Result<EquivalenceReport> {
    check_variants(ring_size, &[t, t_prime])?;
    let search = Search::new(t, t_prime, group, ring_size, budget)?;
    let (verdict, witnesses, failing) = match search.simulate()? {
        Ok(w) => (EquivalenceVerdict::Simulates, w, None),
        Err(c) => (EquivalenceVerdict::NotSimulated, Vec::new(), Some(c)),
    };
    Ok(EquivalenceReport {
        verdict,
        witnesses,
        failing,
        statements: None,
        hypotheses_hold: None,
        cases_checked: search.cases(),
        complete: search.complete,
    })
}

/// Simulation in both directions. The witnesses reported are those of `t` by `t_prime`.
pub fn check_equivalence(
    t: &RuleVariant,
    t_prime: &RuleVariant,
    group: &GaugeGroup,
    ring_size: usize,
    budget: Option<u64>,
) -> Result<EquivalenceReport> {
    let forward = check_simulation(t, t_prime, group, ring_size, budget)?;
    if forward.verdict == EquivalenceVerdict::NotSimulated {
        return Ok(forward);
    }
    let backward = check_simulation(t_prime, t, group, ring_size, budget)?;
    let cases_checked = forward.cases_checked + backward.cases_checked;
    let complete = forward.complete && backward.complete;
    if backward.verdict == EquivalenceVerdict::NotSimulated {
        return Ok(EquivalenceReport {
            cases_checked,
            complete,
            ..backward
        });
    }
    Ok(EquivalenceReport {
        verdict: EquivalenceVerdict::Equivalent,
        cases_checked,
        complete,
        ..forward
    })
}

/// Evaluates the three characterisations independently and records whether the
/// hypotheses under which they must coincide (`T`, `T'` gauge-invariant with
/// `Z = Id`) hold on this ring.
pub fn check_proposition_statements(
    t: &RuleVariant,
    t_prime: &RuleVariant,
    group: &GaugeGroup,
    ring_size: usize,
    budget: Option<u64>,
) -> Result<EquivalenceReport> {
    check_variants(ring_size, &[t, t_prime])?;
    let search = Search::new(t, t_prime, group, ring_size, budget)?;
    let simulated = search.simulate()?;
    let statements = PropositionStatements {
        simulated: simulated.is_ok(),
        exists_pre: search.holds_everywhere(|s, c| s.exists_pre(c))?,
        forall_post: search.holds_everywhere(|s, c| s.forall_post(c))?,
    };
    let invariant = |v: &RuleVariant| -> Result<bool> {
        Ok(check_global_invariance(group, v, ring_size, 1, None)?.is_invariant())
    };
    let hypotheses_hold = invariant(t)? && invariant(t_prime)?;
    let (verdict, witnesses, failing) = match simulated {
        Ok(w) => (EquivalenceVerdict::Simulates, w, None),
        Err(c) => (EquivalenceVerdict::NotSimulated, Vec::new(), Some(c)),
    };
    Ok(EquivalenceReport {
        verdict,
        witnesses,
        failing,
        statements: Some(statements),
        hypotheses_hold: Some(hypotheses_hold),
        cases_checked: 3 * search.cases(),
        complete: search.complete,
    })
}

/// Picks one representative among pairwise gauge-equivalent variants: the one
/// whose post-transformation is the identity if present, otherwise the
/// lexicographically least post-assignment.
pub fn gauge_fix(variants: &[RuleVariant], group: &GaugeGroup, ring_size: usize) -> Result<RuleVariant> {
    if variants.is_empty() {
        return Err(Error::InvalidParameter("no rule variants to choose from".into()));
    }
    for i in 0..variants.len() {
        for j in i + 1..variants.len() {
            let report = check_equivalence(&variants[i], &variants[j], group, ring_size, None)?;
            if report.verdict != EquivalenceVerdict::Equivalent {
                return Err(Error::NotEquivalent { first: i, second: j });
            }
        }
    }
    let chosen = variants
        .iter()
        .find(|v| v.post.is_identity())
        .or_else(|| variants.iter().min_by(|a, b| a.post.cmp(&b.post)))
        .expect("non-empty");
    Ok(chosen.clone())
}

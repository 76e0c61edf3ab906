//! Machine checks of the gauge-invariance relation `Z(γ) ∘ F = F ∘ γ`.
//!
//! `Z` is the identity automaton throughout. The local check enumerates
//! every link input and every pair of local transformations; the global
//! check enumerates every configuration and every transformation of a
//! small ring; the line check samples finite-support inputs from a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classical::{Automaton, LinkOutput, LinkRule};
use crate::error::{Error, Result};
use crate::gauge_group::{apply_global, GaugeElement, GaugeGroup, GaugeTransformation, RingTransformations};
use crate::lattice::{
    Cell, GaugedConfiguration, MatterConfiguration, Position, RingConfigurations, Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Invariant,
    CounterexampleFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub cases_checked: u64,
    /// False when a case budget cut the enumeration short or inputs were sampled.
    pub complete: bool,
}

impl InvarianceReport {
    pub fn is_invariant(&self) -> bool {
        self.verdict == Verdict::Invariant
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Local(LocalWitness),
    Global(GlobalWitness),
}

/// A single link input `(c_x, A, c_{x+1})` with local transformations `(g_x, g_{x+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalWitness {
    pub left: Cell,
    pub link: GaugeElement,
    pub right: Cell,
    pub g_left: GaugeElement,
    pub g_right: GaugeElement,
}

impl LocalWitness {
    /// `(r_{g(A)} ∘ (g_x ⊗ g_{x+1}), (g_x ⊗ g_{x+1}) ∘ r_A)` evaluated on the input.
    pub fn sides(&self, rule: &LinkRule) -> (LinkOutput, LinkOutput) {
        let transformed_link = transform_link(&self.g_left, &self.link, &self.g_right);
        let before = rule.local(
            self.g_left.act(self.left),
            &transformed_link,
            self.g_right.act(self.right),
        );
        let out = rule.local(self.left, &self.link, self.right);
        // Z = identity: the same local elements act after the step.
        let after = LinkOutput {
            left: self.g_left.apply(out.left),
            link: transform_link(&self.g_left, &out.link, &self.g_right),
            right: self.g_right.apply(out.right),
        };
        (before, after)
    }

    /// True when the two sides differ under `rule`.
    pub fn replay(&self, rule: &LinkRule) -> bool {
        let (before, after) = self.sides(rule);
        before != after
    }
}

/// A ring or line configuration `c`, a transformation `γ` and a step count `t`
/// with `F^t(γ(c)) ≠ γ(F^t(c))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalWitness {
    pub config: GaugedConfiguration,
    pub transform: GaugeTransformation,
    pub steps: usize,
    /// First cell (or link, if all cells agree) where the two sides differ.
    pub position: Position,
}

impl GlobalWitness {
    pub fn sides(&self, rule: &impl Automaton) -> Result<(GaugedConfiguration, GaugedConfiguration)> {
        let before = rule.iterate(&apply_global(&self.transform, &self.config)?, self.steps);
        let z = (0..self.steps).fold(self.transform.clone(), |g, _| z_automaton(&g));
        let after = apply_global(&z, &rule.iterate(&self.config, self.steps))?;
        Ok((before, after))
    }

    pub fn replay(&self, rule: &impl Automaton) -> Result<bool> {
        let (before, after) = self.sides(rule)?;
        Ok(before != after)
    }
}

/// The evolution of gauge transformations; the identity automaton.
pub fn z_automaton(gamma: &GaugeTransformation) -> GaugeTransformation {
    gamma.clone()
}

/// `g_x ∘ A ∘ g_{x+1}⁻¹`.
pub fn transform_link(g_left: &GaugeElement, link: &GaugeElement, g_right: &GaugeElement) -> GaugeElement {
    g_left
        .compose(link)
        .and_then(|a| a.compose(&g_right.inverse()))
        .expect("elements of one group share a degree")
}

fn check_rule_matches(group: &GaugeGroup, alphabet: usize) -> Result<()> {
    if group.degree() != alphabet {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: alphabet,
        });
    }
    Ok(())
}

/// Exhaustive check over `Σ × Λ × Σ × G²` with `Λ = G`.
pub fn check_local_invariance(group: &GaugeGroup, rule: &LinkRule) -> Result<InvarianceReport> {
    check_rule_matches(group, rule.alphabet())?;
    let n = group.degree() as u8;
    let cells: Vec<Cell> = (0..n)
        .flat_map(|l| (0..n).map(move |r| Cell::new(l, r)))
        .collect();
    let mut cases = 0u64;
    for &left in &cells {
        for link in group.elements() {
            for &right in &cells {
                for g_left in group.elements() {
                    for g_right in group.elements() {
                        cases += 1;
                        let candidate = LocalWitness {
                            left,
                            link: link.clone(),
                            right,
                            g_left: g_left.clone(),
                            g_right: g_right.clone(),
                        };
                        if candidate.replay(rule) {
                            return Ok(InvarianceReport {
                                verdict: Verdict::CounterexampleFound,
                                witness: Some(Witness::Local(candidate)),
                                cases_checked: cases,
                                complete: true,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(InvarianceReport {
        verdict: Verdict::Invariant,
        witness: None,
        cases_checked: cases,
        complete: true,
    })
}

fn first_difference(a: &GaugedConfiguration, b: &GaugedConfiguration) -> Position {
    let mut positions: Vec<Position> = a.matter().positions();
    positions.extend(b.matter().positions());
    positions.extend(a.links().map(|(x, _)| x));
    positions.extend(b.links().map(|(x, _)| x));
    positions.sort_unstable();
    positions.dedup();
    positions
        .iter()
        .copied()
        .find(|&x| a.cell(x) != b.cell(x))
        .or_else(|| positions.iter().copied().find(|&x| a.link(x) != b.link(x)))
        .unwrap_or(0)
}

fn compare_traces(
    rule: &(impl Automaton + ?Sized),
    config: &GaugedConfiguration,
    gamma: &GaugeTransformation,
    steps: usize,
) -> Result<Option<GlobalWitness>> {
    let mut transformed = apply_global(gamma, config)?;
    let mut plain = config.clone();
    let mut z = gamma.clone();
    for t in 1..=steps {
        transformed = rule.step(&transformed);
        plain = rule.step(&plain);
        z = z_automaton(&z);
        let expected = apply_global(&z, &plain)?;
        if transformed != expected {
            return Ok(Some(GlobalWitness {
                config: config.clone(),
                transform: gamma.clone(),
                steps: t,
                position: first_difference(&transformed, &expected),
            }));
        }
    }
    Ok(None)
}

/// Exhaustive check of `F^t(γ(c)) = γ(F^t(c))` for `t = 1..=steps`, over all
/// configurations and transformations of a ring.
///
/// Each `(c, γ, t)` triple counts as one case. With a `budget`, only the first
/// configurations whose cases fit are checked and the report is marked
/// incomplete. Configurations are checked in parallel; the witness reported is
/// always the one with the lowest enumeration index.
pub fn check_global_invariance<R: Automaton + Sync>(
    group: &GaugeGroup,
    rule: &R,
    ring_size: usize,
    steps: usize,
    budget: Option<u64>,
) -> Result<InvarianceReport> {
    let configs = RingConfigurations::new(ring_size, group.degree(), group.elements().to_vec())?;
    let gammas = RingTransformations::new(group, ring_size);
    let per_config = gammas.len() * steps as u64;
    let mut config_count = configs.len();
    let mut complete = true;
    if let Some(budget) = budget {
        let affordable = budget.checked_div(per_config).unwrap_or(config_count);
        if affordable < config_count {
            config_count = affordable;
            complete = false;
        }
    }

    let found = (0..config_count)
        .into_par_iter()
        .map(|i| -> Result<Option<(u64, GlobalWitness)>> {
            let c = configs.get(i);
            for (j, gamma) in gammas.iter().enumerate() {
                if let Some(w) = compare_traces(rule, &c, &gamma, steps)? {
                    let cases = i * per_config + j as u64 * steps as u64 + w.steps as u64;
                    return Ok(Some((cases, w)));
                }
            }
            Ok(None)
        })
        .find_first(|r| !matches!(r, Ok(None)));

    match found {
        Some(Err(e)) => Err(e),
        Some(Ok(Some((cases, w)))) => Ok(InvarianceReport {
            verdict: Verdict::CounterexampleFound,
            witness: Some(Witness::Global(w)),
            cases_checked: cases,
            complete,
        }),
        _ => Ok(InvarianceReport {
            verdict: Verdict::Invariant,
            witness: None,
            cases_checked: config_count * per_config,
            complete,
        }),
    }
}

/// Randomised check on the infinite line. Configurations, fields and
/// transformations are drawn with support in `[-radius, radius]` from a
/// ChaCha8 stream seeded with `seed`.
pub fn check_line_invariance<R: Automaton>(
    group: &GaugeGroup,
    rule: &R,
    seed: u64,
    trials: usize,
    steps: usize,
    radius: Position,
) -> Result<InvarianceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = group.degree();
    let pick = |rng: &mut ChaCha8Rng| group.elements()[rng.random_range(0..group.len())].clone();
    let mut cases = 0u64;
    for _ in 0..trials {
        let mut matter = MatterConfiguration::quiescent(Topology::Line, n)?;
        let mut sites = Vec::new();
        let mut config_links = Vec::new();
        for x in -radius..=radius {
            if rng.random_bool(0.5) {
                let cell = Cell::new(rng.random_range(0..n as u8), rng.random_range(0..n as u8));
                matter.set(x, cell)?;
            }
            if rng.random_bool(0.3) {
                config_links.push((x, pick(&mut rng)));
            }
            if rng.random_bool(0.5) {
                sites.push((x, pick(&mut rng)));
            }
        }
        let config = GaugedConfiguration::with_links(matter, config_links)?;
        let gamma = GaugeTransformation::on_line(n, sites)?;
        cases += steps as u64;
        if let Some(w) = compare_traces(rule, &config, &gamma, steps)? {
            return Ok(InvarianceReport {
                verdict: Verdict::CounterexampleFound,
                witness: Some(Witness::Global(w)),
                cases_checked: cases,
                complete: false,
            });
        }
    }
    Ok(InvarianceReport {
        verdict: Verdict::Invariant,
        witness: None,
        cases_checked: cases,
        complete: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::RuleKind;
    use crate::gauge_group::enumerate_transformations;

    #[test]
    fn abelian_example_is_locally_invariant() {
        let report = check_local_invariance(&GaugeGroup::abelian_swap(), &LinkRule::gauged(2)).unwrap();
        assert_eq!(report.verdict, Verdict::Invariant);
        assert_eq!(report.cases_checked, 4 * 2 * 4 * 2 * 2);
        assert!(report.witness.is_none());
    }

    #[test]
    fn non_abelian_example_is_locally_invariant() {
        let group = GaugeGroup::symmetric(3).unwrap();
        let report = check_local_invariance(&group, &LinkRule::gauged(3)).unwrap();
        assert_eq!(report.verdict, Verdict::Invariant);
        assert_eq!(report.cases_checked, 9 * 6 * 9 * 6 * 6);
    }

    #[test]
    fn bare_rule_has_replayable_local_witness() {
        let rule = LinkRule::bare(2);
        let report = check_local_invariance(&GaugeGroup::abelian_swap(), &rule).unwrap();
        assert_eq!(report.verdict, Verdict::CounterexampleFound);
        let Some(Witness::Local(w)) = report.witness else {
            panic!("expected local witness")
        };
        assert!(w.replay(&rule));
        // The same input is harmless for the gauged rule.
        assert!(!w.replay(&LinkRule::gauged(2)));
    }

    /// The field law `g_x ∘ A ∘ g_{x+1}` with `A` applied to both movers, read
    /// literally, only works for involutive groups.
    fn literal_convention_holds(group: &GaugeGroup) -> bool {
        let n = group.degree() as u8;
        let cells: Vec<Cell> = (0..n)
            .flat_map(|l| (0..n).map(move |r| Cell::new(l, r)))
            .collect();
        let step = |l: Cell, a: &GaugeElement, r: Cell| (a.apply(r.left), a.apply(l.right));
        let law = |gl: &GaugeElement, a: &GaugeElement, gr: &GaugeElement| {
            gl.compose(a).unwrap().compose(gr).unwrap()
        };
        cells.iter().all(|&l| {
            group.elements().iter().all(|a| {
                cells.iter().all(|&r| {
                    group.elements().iter().all(|gl| {
                        group.elements().iter().all(|gr| {
                            let before = step(gl.act(l), &law(gl, a, gr), gr.act(r));
                            let (ol, or) = step(l, a, r);
                            before == (gl.apply(ol), gr.apply(or))
                        })
                    })
                })
            })
        })
    }

    #[test]
    fn literal_convention_fails_beyond_involutions() {
        assert!(literal_convention_holds(&GaugeGroup::abelian_swap()));
        assert!(!literal_convention_holds(&GaugeGroup::symmetric(3).unwrap()));
    }

    #[test]
    fn local_verdict_is_independent_of_enumeration_order() {
        let group = GaugeGroup::symmetric(3).unwrap();
        let mut reversed = group.elements().to_vec();
        reversed.reverse();
        let reordered = GaugeGroup::new(3, reversed).unwrap();
        for kind in [RuleKind::Bare, RuleKind::Gauged] {
            let rule = LinkRule::new(3, kind);
            let a = check_local_invariance(&group, &rule).unwrap();
            let b = check_local_invariance(&reordered, &rule).unwrap();
            assert_eq!(a.verdict, b.verdict);
            if a.is_invariant() {
                assert_eq!(a.cases_checked, b.cases_checked);
            }
        }
    }

    #[test]
    fn global_invariance_small_rings() {
        let group = GaugeGroup::abelian_swap();
        let rule = LinkRule::gauged(2);
        let report = check_global_invariance(&group, &rule, 2, 1, None).unwrap();
        assert_eq!(report.verdict, Verdict::Invariant);
        assert_eq!(report.cases_checked, 16 * 4 * 4);
        assert!(report.complete);
        let report = check_global_invariance(&group, &rule, 3, 3, None).unwrap();
        assert!(report.is_invariant());
        assert_eq!(report.cases_checked, 512 * 8 * 3);
    }

    #[test]
    fn local_invariance_implies_global() {
        let s3 = GaugeGroup::symmetric(3).unwrap();
        let rule = LinkRule::gauged(3);
        assert!(check_local_invariance(&s3, &rule).unwrap().is_invariant());
        let report = check_global_invariance(&s3, &rule, 2, 2, None).unwrap();
        assert!(report.is_invariant());
    }

    #[test]
    fn identity_transformation_is_always_consistent() {
        let group = GaugeGroup::abelian_swap();
        let configs = RingConfigurations::new(3, 2, group.elements().to_vec()).unwrap();
        let id = GaugeTransformation::identity(Topology::Ring(3), 2);
        for c in configs.iter() {
            assert!(compare_traces(&LinkRule::bare(2), &c, &id, 2).unwrap().is_none());
        }
    }

    #[test]
    fn bare_rule_global_witness_replays() {
        let group = GaugeGroup::abelian_swap();
        let rule = LinkRule::bare(2);
        let report = check_global_invariance(&group, &rule, 3, 1, None).unwrap();
        assert_eq!(report.verdict, Verdict::CounterexampleFound);
        let Some(Witness::Global(w)) = &report.witness else {
            panic!("expected global witness")
        };
        assert!(w.replay(&rule).unwrap());
        assert!(!w.replay(&LinkRule::gauged(2)).unwrap());
        // Lowest index: the all-quiescent configuration with γ flipping site 0.
        assert!(w.config.matter().support().is_empty());
        assert_eq!(w.transform.non_identity_sites(), vec![(0, GaugeElement::swap())]);
        assert_eq!(report.cases_checked, 2);
    }

    #[test]
    fn bare_rule_cannot_be_compensated() {
        // Flip one site before the step; no transformation after the step
        // reproduces the result.
        let group = GaugeGroup::abelian_swap();
        let rule = LinkRule::bare(2);
        let c = RingConfigurations::new(3, 2, group.elements().to_vec())
            .unwrap()
            .get(0);
        let gamma = GaugeTransformation::single(Topology::Ring(3), 1, GaugeElement::swap()).unwrap();
        let target = rule.step(&apply_global(&gamma, &c).unwrap());
        let plain = rule.step(&c);
        for after in enumerate_transformations(&group, 3) {
            assert_ne!(apply_global(&after, &plain).unwrap(), target);
        }
    }

    #[test]
    fn parallel_and_serial_witnesses_agree() {
        let group = GaugeGroup::abelian_swap();
        let rule = LinkRule::bare(2);
        let report = check_global_invariance(&group, &rule, 3, 2, None).unwrap();
        let configs = RingConfigurations::new(3, 2, group.elements().to_vec()).unwrap();
        let serial = configs
            .iter()
            .find_map(|c| {
                enumerate_transformations(&group, 3).find_map(|g| compare_traces(&rule, &c, &g, 2).unwrap())
            })
            .unwrap();
        assert_eq!(report.witness, Some(Witness::Global(serial)));
    }

    #[test]
    fn budget_marks_partial_coverage() {
        let group = GaugeGroup::abelian_swap();
        let rule = LinkRule::gauged(2);
        let report = check_global_invariance(&group, &rule, 3, 1, Some(100)).unwrap();
        assert!(!report.complete);
        assert!(report.cases_checked <= 100);
        assert!(report.is_invariant());
    }

    #[test]
    fn line_sampling() {
        let s3 = GaugeGroup::symmetric(3).unwrap();
        let report = check_line_invariance(&s3, &LinkRule::gauged(3), 7, 200, 3, 5).unwrap();
        assert!(report.is_invariant());
        assert_eq!(report.cases_checked, 600);
        assert!(!report.complete);
        let report = check_line_invariance(&s3, &LinkRule::bare(3), 7, 200, 3, 5).unwrap();
        assert_eq!(report.verdict, Verdict::CounterexampleFound);
        let Some(Witness::Global(w)) = &report.witness else {
            panic!()
        };
        assert!(w.replay(&LinkRule::bare(3)).unwrap());
    }

    #[test]
    fn z_is_identity_homomorphism() {
        let group = GaugeGroup::symmetric(3).unwrap();
        let all: Vec<_> = enumerate_transformations(&group, 2).collect();
        assert!(z_automaton(&GaugeTransformation::identity(Topology::Ring(2), 3)).is_identity());
        for a in all.iter().step_by(5) {
            assert_eq!(&z_automaton(a), a);
            for b in all.iter().step_by(7) {
                let ab = a.compose(b).unwrap();
                assert_eq!(z_automaton(&ab), z_automaton(a).compose(&z_automaton(b)).unwrap());
            }
        }
    }

    #[test]
    fn rejects_mismatched_rule() {
        let err = check_local_invariance(&GaugeGroup::abelian_swap(), &LinkRule::gauged(3)).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 2, right: 3 });
    }
}

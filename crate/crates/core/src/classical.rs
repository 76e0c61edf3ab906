//! The transport automaton and its gauged extension.
//!
//! Every link `(x, x+1)` reads the right-moving component of cell `x`,
//! the link value, and the left-moving component of cell `x+1`. It writes
//! the new left component of `x`, the new link value, and the new right
//! component of `x+1`. Each output component is written by exactly one
//! link, so all links fire simultaneously.
//!
//! The bare rule just swaps the two components across the link. The
//! gauged rule transports them through the link: a left-mover entering
//! `x` is mapped by `A`, and a right-mover entering `x+1` by `A⁻¹`.
//! The field itself does not evolve.

use crate::gauge_group::GaugeElement;
use crate::lattice::{Cell, GaugedConfiguration, MatterConfiguration, Position, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Pure transport; the gauge field is carried along but ignored.
    Bare,
    /// Transport through the link's gauge element.
    Gauged,
}

/// The three values written by one link update.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkOutput {
    /// New left-moving component of the left cell.
    pub left: u8,
    pub link: GaugeElement,
    /// New right-moving component of the right cell.
    pub right: u8,
}

/// Anything that maps gauged configurations to gauged configurations.
pub trait Automaton {
    fn step(&self, config: &GaugedConfiguration) -> GaugedConfiguration;

    fn run(&self, config: &GaugedConfiguration, steps: usize) -> Vec<GaugedConfiguration> {
        let mut trace = Vec::with_capacity(steps + 1);
        trace.push(config.clone());
        for t in 0..steps {
            let next = self.step(&trace[t]);
            trace.push(next);
        }
        trace
    }

    fn iterate(&self, config: &GaugedConfiguration, steps: usize) -> GaugedConfiguration {
        (0..steps).fold(config.clone(), |c, _| self.step(&c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinkRule {
    alphabet: usize,
    kind: RuleKind,
}

impl LinkRule {
    pub fn new(alphabet: usize, kind: RuleKind) -> Self {
        LinkRule { alphabet, kind }
    }

    pub fn bare(alphabet: usize) -> Self {
        Self::new(alphabet, RuleKind::Bare)
    }

    pub fn gauged(alphabet: usize) -> Self {
        Self::new(alphabet, RuleKind::Gauged)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Local update of link `(x, x+1)` from `(c_x, A, c_{x+1})`.
    pub fn local(&self, left: Cell, link: &GaugeElement, right: Cell) -> LinkOutput {
        match self.kind {
            RuleKind::Bare => LinkOutput {
                left: right.left,
                link: link.clone(),
                right: left.right,
            },
            RuleKind::Gauged => LinkOutput {
                left: link.apply(right.left),
                link: link.clone(),
                right: link.inverse().apply(left.right),
            },
        }
    }
}

impl Automaton for LinkRule {
    fn step(&self, config: &GaugedConfiguration) -> GaugedConfiguration {
        let topology = config.topology();
        let links = config.active_links();
        let mut next = match topology {
            Topology::Ring(_) => config.clone(),
            Topology::Line => {
                let matter = MatterConfiguration::quiescent(Topology::Line, config.alphabet())
                    .expect("line topology is always valid");
                let mut next = GaugedConfiguration::new(matter);
                for (x, g) in config.links() {
                    next.put_link(x, g.clone());
                }
                next
            }
        };
        // Left components are written at x, right components at x+1; start
        // from zero so that each is written exactly once.
        let mut cells: std::collections::BTreeMap<Position, Cell> = Default::default();
        for &x in &links {
            let out = self.local(config.cell(x), &config.link(x), config.cell(x + 1));
            cells.entry(topology.wrap(x)).or_default().left = out.left;
            cells.entry(topology.wrap(x + 1)).or_default().right = out.right;
            next.put_link(x, out.link);
        }
        if let Topology::Ring(size) = topology {
            for x in 0..size as Position {
                next.put_cell(x, cells.get(&x).copied().unwrap_or_default());
            }
        } else {
            for (x, cell) in cells {
                next.put_cell(x, cell);
            }
        }
        next
    }
}

/// One step of the bare transport rule on matter alone.
pub fn step_bare(config: &MatterConfiguration) -> MatterConfiguration {
    LinkRule::bare(config.alphabet())
        .step(&GaugedConfiguration::new(config.clone()))
        .into_matter()
}

/// One step of the gauged rule.
pub fn step_gauged(config: &GaugedConfiguration) -> GaugedConfiguration {
    LinkRule::gauged(config.alphabet()).step(config)
}

/// `steps + 1` configurations starting with `config`, evolved by the gauged rule.
pub fn run(config: &GaugedConfiguration, steps: usize) -> Vec<GaugedConfiguration> {
    LinkRule::gauged(config.alphabet()).run(config, steps)
}

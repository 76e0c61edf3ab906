//! One-dimensional lattice substrate.
//!
//! Cells carry two components (left-moving and right-moving), and a
//! gauge field lives on the links between neighbouring cells. Link
//! `(x, x+1)` is addressed by its left endpoint `x`.
//!
//! Two topologies are supported: a ring of `n` cells, used for
//! exhaustive enumeration, and the infinite line with finitely many
//! non-quiescent cells. Both store only the non-quiescent entries, so
//! structural equality is configuration equality.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gauge_group::GaugeElement;

pub type Position = i64;

/// A cell state `(c^l, c^r)`. The quiescent cell is `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cell {
    pub left: u8,
    pub right: u8,
}

impl Cell {
    pub const QUIESCENT: Cell = Cell { left: 0, right: 0 };

    pub const fn new(left: u8, right: u8) -> Self {
        Cell { left, right }
    }

    pub fn is_quiescent(self) -> bool {
        self == Cell::QUIESCENT
    }

    pub fn map(self, f: impl Fn(u8) -> u8) -> Cell {
        Cell::new(f(self.left), f(self.right))
    }

    fn check(self, position: Position, bound: usize) -> Result<()> {
        for value in [self.left, self.right] {
            if usize::from(value) >= bound {
                return Err(Error::ComponentOutOfRange {
                    position,
                    value,
                    bound,
                });
            }
        }
        Ok(())
    }
}

impl From<(u8, u8)> for Cell {
    fn from((left, right): (u8, u8)) -> Self {
        Cell::new(left, right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Ring(usize),
    Line,
}

impl Topology {
    pub fn ring(size: usize) -> Result<Self> {
        let topology = Topology::Ring(size);
        topology.validate()?;
        Ok(topology)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Topology::Ring(size) if size < 2 => Err(Error::RingTooSmall(size)),
            _ => Ok(()),
        }
    }

    pub fn ring_size(&self) -> Option<usize> {
        match *self {
            Topology::Ring(size) => Some(size),
            Topology::Line => None,
        }
    }

    /// Canonical representative of `x`: reduced modulo the ring size on a ring.
    pub fn wrap(&self, x: Position) -> Position {
        match *self {
            Topology::Ring(size) => x.rem_euclid(size as Position),
            Topology::Line => x,
        }
    }

    pub fn check_position(&self, x: Position) -> Result<()> {
        match *self {
            Topology::Ring(size) if x < 0 || x >= size as Position => {
                Err(Error::PositionOutOfRange { position: x, size })
            }
            _ => Ok(()),
        }
    }
}

/// Matter configuration over an alphabet `{0..N-1}^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatterConfiguration {
    topology: Topology,
    alphabet: usize,
    cells: BTreeMap<Position, Cell>,
}

impl MatterConfiguration {
    pub fn quiescent(topology: Topology, alphabet: usize) -> Result<Self> {
        topology.validate()?;
        if alphabet == 0 || alphabet > 255 {
            return Err(Error::InvalidAlphabet(alphabet));
        }
        Ok(MatterConfiguration {
            topology,
            alphabet,
            cells: BTreeMap::new(),
        })
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn get(&self, x: Position) -> Cell {
        let x = self.topology.wrap(x);
        self.cells.get(&x).copied().unwrap_or_default()
    }

    pub fn set(&mut self, x: Position, cell: Cell) -> Result<()> {
        self.topology.check_position(x)?;
        cell.check(x, self.alphabet)?;
        self.put(x, cell);
        Ok(())
    }

    /// Unchecked write; `x` is wrapped on a ring.
    pub(crate) fn put(&mut self, x: Position, cell: Cell) {
        let x = self.topology.wrap(x);
        if cell.is_quiescent() {
            self.cells.remove(&x);
        } else {
            self.cells.insert(x, cell);
        }
    }

    /// Positions whose cell differs from `(0, 0)`.
    pub fn support(&self) -> BTreeSet<Position> {
        self.cells.keys().copied().collect()
    }

    /// Non-quiescent cells in position order.
    pub fn cells(&self) -> impl Iterator<Item = (Position, Cell)> + '_ {
        self.cells.iter().map(|(&x, &c)| (x, c))
    }

    /// Every position of a ring, or the support on the line.
    pub fn positions(&self) -> Vec<Position> {
        match self.topology {
            Topology::Ring(size) => (0..size as Position).collect(),
            Topology::Line => self.cells.keys().copied().collect(),
        }
    }
}

/// Build a configuration from explicit assignments; everything else is quiescent.
pub fn make_configuration(
    topology: Topology,
    alphabet: usize,
    assignments: impl IntoIterator<Item = (Position, Cell)>,
) -> Result<MatterConfiguration> {
    let mut config = MatterConfiguration::quiescent(topology, alphabet)?;
    for (x, cell) in assignments {
        config.set(x, cell)?;
    }
    Ok(config)
}

pub fn support(config: &MatterConfiguration) -> BTreeSet<Position> {
    config.support()
}

/// Matter plus a gauge field with one group element per link.
///
/// The element stored on link `(x, x+1)` maps the gauge frame of cell
/// `x + 1` into the frame of cell `x`. Links absent from the map carry
/// the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaugedConfiguration {
    matter: MatterConfiguration,
    field: BTreeMap<Position, GaugeElement>,
}

impl GaugedConfiguration {
    pub fn new(matter: MatterConfiguration) -> Self {
        GaugedConfiguration {
            matter,
            field: BTreeMap::new(),
        }
    }

    pub fn with_links(
        matter: MatterConfiguration,
        links: impl IntoIterator<Item = (Position, GaugeElement)>,
    ) -> Result<Self> {
        let mut config = GaugedConfiguration::new(matter);
        for (x, g) in links {
            config.set_link(x, g)?;
        }
        Ok(config)
    }

    pub fn matter(&self) -> &MatterConfiguration {
        &self.matter
    }

    pub fn into_matter(self) -> MatterConfiguration {
        self.matter
    }

    pub fn topology(&self) -> Topology {
        self.matter.topology
    }

    pub fn alphabet(&self) -> usize {
        self.matter.alphabet
    }

    pub fn cell(&self, x: Position) -> Cell {
        self.matter.get(x)
    }

    pub fn set_cell(&mut self, x: Position, cell: Cell) -> Result<()> {
        self.matter.set(x, cell)
    }

    pub(crate) fn put_cell(&mut self, x: Position, cell: Cell) {
        self.matter.put(x, cell);
    }

    /// Field value on link `(x, x+1)`.
    pub fn link(&self, x: Position) -> GaugeElement {
        let x = self.topology().wrap(x);
        match self.field.get(&x) {
            Some(g) => g.clone(),
            None => GaugeElement::identity(self.alphabet()),
        }
    }

    pub fn set_link(&mut self, x: Position, g: GaugeElement) -> Result<()> {
        self.topology().check_position(x)?;
        if g.degree() != self.alphabet() {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: self.alphabet(),
            });
        }
        self.put_link(x, g);
        Ok(())
    }

    pub(crate) fn put_link(&mut self, x: Position, g: GaugeElement) {
        let x = self.topology().wrap(x);
        if g.is_identity() {
            self.field.remove(&x);
        } else {
            self.field.insert(x, g);
        }
    }

    /// Links carrying a non-identity element, in position order.
    pub fn links(&self) -> impl Iterator<Item = (Position, &GaugeElement)> + '_ {
        self.field.iter().map(|(&x, g)| (x, g))
    }

    /// Every link of a ring; on the line, the links that can be affected
    /// by one step (non-identity links and those adjacent to matter).
    pub(crate) fn active_links(&self) -> Vec<Position> {
        match self.topology() {
            Topology::Ring(size) => (0..size as Position).collect(),
            Topology::Line => {
                let mut links: BTreeSet<Position> = self.field.keys().copied().collect();
                for x in self.matter.cells.keys() {
                    links.insert(x - 1);
                    links.insert(*x);
                }
                links.into_iter().collect()
            }
        }
    }
}

/// Index-addressable enumeration of every gauged configuration of a ring.
///
/// Digit `i < size` of the mixed-radix index is cell `i` (base `N^2`),
/// digit `size + i` is link `i` (base `|link_values|`).
#[derive(Debug, Clone)]
pub struct RingConfigurations {
    size: usize,
    alphabet: usize,
    link_values: Vec<GaugeElement>,
}

impl RingConfigurations {
    pub fn new(size: usize, alphabet: usize, link_values: Vec<GaugeElement>) -> Result<Self> {
        Topology::ring(size)?;
        if alphabet == 0 || alphabet > 255 {
            return Err(Error::InvalidAlphabet(alphabet));
        }
        if link_values.is_empty() {
            return Err(Error::InvalidParameter("link value set is empty".into()));
        }
        for g in &link_values {
            if g.degree() != alphabet {
                return Err(Error::DegreeMismatch {
                    left: g.degree(),
                    right: alphabet,
                });
            }
        }
        Ok(RingConfigurations {
            size,
            alphabet,
            link_values,
        })
    }

    pub fn len(&self) -> u64 {
        let cells = (self.alphabet * self.alphabet) as u64;
        cells.pow(self.size as u32) * (self.link_values.len() as u64).pow(self.size as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, mut index: u64) -> GaugedConfiguration {
        let topology = Topology::Ring(self.size);
        let cell_base = (self.alphabet * self.alphabet) as u64;
        let mut matter =
            MatterConfiguration::quiescent(topology, self.alphabet).expect("validated in constructor");
        for x in 0..self.size {
            let digit = index % cell_base;
            index /= cell_base;
            let n = self.alphabet as u64;
            matter.put(x as Position, Cell::new((digit / n) as u8, (digit % n) as u8));
        }
        let mut config = GaugedConfiguration::new(matter);
        let link_base = self.link_values.len() as u64;
        for x in 0..self.size {
            let digit = (index % link_base) as usize;
            index /= link_base;
            config.put_link(x as Position, self.link_values[digit].clone());
        }
        config
    }

    pub fn iter(&self) -> impl Iterator<Item = GaugedConfiguration> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

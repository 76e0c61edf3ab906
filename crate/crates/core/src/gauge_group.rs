//! Local gauge groups, global gauge transformations, and their action on
//! gauged configurations.
//!
//! Every group here acts cellwise: an element is a permutation `σ` of the
//! component alphabet, acting on a cell as `σ ⊗ σ`. The same elements are
//! used as gauge-field values on the links.
//!
//! The element `g` at `x` acts on a gauged configuration by
//!
//! ```text
//! (A_{x-1,x}, c_x, A_{x,x+1})  ↦  (A_{x-1,x} ∘ g⁻¹, g(c_x), g ∘ A_{x,x+1})
//! ```
//!
//! so that a whole transformation sends each link to
//! `g_x ∘ A_{x,x+1} ∘ g_{x+1}⁻¹`. For involutive groups (the `{id, τ}`
//! case) the inverse is invisible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{Cell, GaugedConfiguration, Position, Topology};

/// A permutation of `{0, .., N-1}`, applied identically to both components of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaugeElement {
    perm: Vec<u8>,
}

impl GaugeElement {
    pub fn new(perm: Vec<u8>) -> Result<Self> {
        let n = perm.len();
        if n == 0 || n > 255 {
            return Err(Error::InvalidAlphabet(n));
        }
        let mut seen = vec![false; n];
        for &v in &perm {
            let v = usize::from(v);
            if v >= n || seen[v] {
                return Err(Error::NotAPermutation(perm, n));
            }
            seen[v] = true;
        }
        Ok(GaugeElement { perm })
    }

    pub fn identity(degree: usize) -> Self {
        assert!((1..=255).contains(&degree), "degree {degree} out of range");
        GaugeElement {
            perm: (0..degree as u8).collect(),
        }
    }

    /// `τ`: exchanges 0 and 1 on a binary alphabet.
    pub fn swap() -> Self {
        GaugeElement { perm: vec![1, 0] }
    }

    pub fn transposition(degree: usize, a: u8, b: u8) -> Result<Self> {
        Self::from_cycles(degree, &[vec![a, b]])
    }

    pub fn from_cycles(degree: usize, cycles: &[Vec<u8>]) -> Result<Self> {
        if degree == 0 || degree > 255 {
            return Err(Error::InvalidAlphabet(degree));
        }
        let mut perm: Vec<u8> = (0..degree as u8).collect();
        let mut used = BTreeSet::new();
        for cycle in cycles {
            for &v in cycle {
                if usize::from(v) >= degree || !used.insert(v) {
                    return Err(Error::NotAPermutation(cycle.clone(), degree));
                }
            }
            for (i, &v) in cycle.iter().enumerate() {
                perm[usize::from(v)] = cycle[(i + 1) % cycle.len()];
            }
        }
        GaugeElement::new(perm)
    }

    /// Parse cycle notation such as `()`, `id`, `(0 1)` or `(0 1 2)(3 4)`.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "id" {
            return Ok(GaugeElement::identity(degree));
        }
        let bad = || Error::InvalidParameter(format!("malformed cycle notation {text:?}"));
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = inner.find(')').ok_or_else(bad)?;
            let cycle = inner[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u8>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = inner[end + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| usize::from(v) == i)
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.perm[usize::from(v)]
    }

    /// Componentwise action `(a, b) ↦ (σ(a), σ(b))`.
    pub fn act(&self, cell: Cell) -> Cell {
        cell.map(|v| self.apply(v))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GaugeElement) -> Result<GaugeElement> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(GaugeElement {
            perm: other.perm.iter().map(|&v| self.apply(v)).collect(),
        })
    }

    pub fn inverse(&self) -> GaugeElement {
        let mut perm = vec![0; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            perm[usize::from(v)] = i as u8;
        }
        GaugeElement { perm }
    }

    /// Disjoint non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.perm.len()];
        let mut cycles = Vec::new();
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v as u8);
                v = usize::from(self.perm[v]);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }
}

impl fmt::Display for GaugeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let points: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", points.join(" "))?;
        }
        Ok(())
    }
}

pub fn compose(a: &GaugeElement, b: &GaugeElement) -> Result<GaugeElement> {
    a.compose(b)
}

/// A finite group of cellwise gauge transformations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeGroup {
    degree: usize,
    elements: Vec<GaugeElement>,
    identity: usize,
}

impl GaugeGroup {
    /// Builds a group from an explicit element list, verifying the group axioms.
    pub fn new(degree: usize, elements: Vec<GaugeElement>) -> Result<Self> {
        if let Some(g) = elements.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: degree,
            });
        }
        let identity = elements
            .iter()
            .position(GaugeElement::is_identity)
            .ok_or_else(|| Error::GroupAxiom("no identity element".into()))?;
        let group = GaugeGroup {
            degree,
            elements,
            identity,
        };
        group.verify_axioms()?;
        Ok(group)
    }

    /// `{I⊗I, τ⊗τ}` on the binary alphabet.
    pub fn abelian_swap() -> Self {
        GaugeGroup {
            degree: 2,
            elements: vec![GaugeElement::identity(2), GaugeElement::swap()],
            identity: 0,
        }
    }

    /// `{σ⊗σ | σ ∈ S(N)}`, elements in lexicographic order (identity first).
    pub fn symmetric(degree: usize) -> Result<Self> {
        if degree == 0 || degree > 8 {
            return Err(Error::InvalidParameter(format!(
                "symmetric group degree must be in 1..=8, got {degree}"
            )));
        }
        let mut perm: Vec<u8> = (0..degree as u8).collect();
        let mut elements = vec![GaugeElement { perm: perm.clone() }];
        while next_permutation(&mut perm) {
            elements.push(GaugeElement { perm: perm.clone() });
        }
        Ok(GaugeGroup {
            degree,
            elements,
            identity: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[GaugeElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> &GaugeElement {
        &self.elements[self.identity]
    }

    pub fn index_of(&self, g: &GaugeElement) -> Option<usize> {
        self.elements.iter().position(|h| h == g)
    }

    pub fn contains(&self, g: &GaugeElement) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| a.compose(b).ok() == b.compose(a).ok())
        })
    }

    /// Exhaustive check of closure, a unique identity, and inverses.
    pub fn verify_axioms(&self) -> Result<()> {
        let distinct: BTreeSet<_> = self.elements.iter().collect();
        if distinct.len() != self.elements.len() {
            return Err(Error::GroupAxiom("duplicate elements".into()));
        }
        let identities = self.elements.iter().filter(|g| g.is_identity()).count();
        if identities != 1 {
            return Err(Error::GroupAxiom(format!("{identities} identity elements")));
        }
        for a in &self.elements {
            if !self.contains(&a.inverse()) {
                return Err(Error::GroupAxiom(format!("inverse of {a} missing")));
            }
            for b in &self.elements {
                let ab = a.compose(b)?;
                if !self.contains(&ab) {
                    return Err(Error::GroupAxiom(format!("{a} ∘ {b} = {ab} not in group")));
                }
            }
        }
        Ok(())
    }
}

fn next_permutation(perm: &mut [u8]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm
        .iter()
        .rposition(|&v| v > perm[i])
        .expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Sites {
    Ring(Vec<GaugeElement>),
    Line(BTreeMap<Position, GaugeElement>),
}

/// A position-indexed family `(g_x)` of group elements: identity almost
/// everywhere on the line, total on a ring.
///
/// The derived ordering compares ring assignments lexicographically by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaugeTransformation {
    degree: usize,
    sites: Sites,
}

impl GaugeTransformation {
    pub fn identity(topology: Topology, degree: usize) -> Self {
        let sites = match topology {
            Topology::Ring(size) => Sites::Ring(vec![GaugeElement::identity(degree); size]),
            Topology::Line => Sites::Line(BTreeMap::new()),
        };
        GaugeTransformation { degree, sites }
    }

    pub fn from_ring(elements: Vec<GaugeElement>) -> Result<Self> {
        let degree = elements
            .first()
            .map(GaugeElement::degree)
            .ok_or_else(|| Error::InvalidParameter("empty ring assignment".into()))?;
        if let Some(g) = elements.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: degree,
            });
        }
        Ok(GaugeTransformation {
            degree,
            sites: Sites::Ring(elements),
        })
    }

    /// The same element at every site of a ring.
    pub fn uniform(size: usize, g: GaugeElement) -> Self {
        GaugeTransformation {
            degree: g.degree(),
            sites: Sites::Ring(vec![g; size]),
        }
    }

    pub fn on_line(degree: usize, sites: impl IntoIterator<Item = (Position, GaugeElement)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, g) in sites {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: g.degree(),
                    right: degree,
                });
            }
            if !g.is_identity() {
                map.insert(x, g);
            }
        }
        Ok(GaugeTransformation {
            degree,
            sites: Sites::Line(map),
        })
    }

    /// Identity everywhere except `g` at `x`.
    pub fn single(topology: Topology, x: Position, g: GaugeElement) -> Result<Self> {
        topology.check_position(x)?;
        let mut gamma = GaugeTransformation::identity(topology, g.degree());
        gamma.set(x, g)?;
        Ok(gamma)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring_size(&self) -> Option<usize> {
        match &self.sites {
            Sites::Ring(v) => Some(v.len()),
            Sites::Line(_) => None,
        }
    }

    pub fn get(&self, x: Position) -> GaugeElement {
        match &self.sites {
            Sites::Ring(v) => v[x.rem_euclid(v.len() as Position) as usize].clone(),
            Sites::Line(map) => map
                .get(&x)
                .cloned()
                .unwrap_or_else(|| GaugeElement::identity(self.degree)),
        }
    }

    pub fn set(&mut self, x: Position, g: GaugeElement) -> Result<()> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: self.degree,
            });
        }
        match &mut self.sites {
            Sites::Ring(v) => {
                if x < 0 || x as usize >= v.len() {
                    return Err(Error::PositionOutOfRange {
                        position: x,
                        size: v.len(),
                    });
                }
                v[x as usize] = g;
            }
            Sites::Line(map) => {
                if g.is_identity() {
                    map.remove(&x);
                } else {
                    map.insert(x, g);
                }
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        match &self.sites {
            Sites::Ring(v) => v.iter().all(GaugeElement::is_identity),
            Sites::Line(map) => map.is_empty(),
        }
    }

    /// Sites carrying a non-identity element.
    pub fn non_identity_sites(&self) -> Vec<(Position, GaugeElement)> {
        match &self.sites {
            Sites::Ring(v) => v
                .iter()
                .enumerate()
                .filter(|(_, g)| !g.is_identity())
                .map(|(x, g)| (x as Position, g.clone()))
                .collect(),
            Sites::Line(map) => map.iter().map(|(&x, g)| (x, g.clone())).collect(),
        }
    }

    /// Ring assignment in position order, if this is a ring transformation.
    pub fn ring_elements(&self) -> Option<&[GaugeElement]> {
        match &self.sites {
            Sites::Ring(v) => Some(v),
            Sites::Line(_) => None,
        }
    }

    /// Pointwise product `(self ∘ other)_x = self_x ∘ other_x`.
    pub fn compose(&self, other: &GaugeTransformation) -> Result<GaugeTransformation> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let sites = match (&self.sites, &other.sites) {
            (Sites::Ring(a), Sites::Ring(b)) if a.len() == b.len() => Sites::Ring(
                a.iter()
                    .zip(b)
                    .map(|(g, h)| g.compose(h))
                    .collect::<Result<_>>()?,
            ),
            (Sites::Line(a), Sites::Line(b)) => {
                let keys: BTreeSet<_> = a.keys().chain(b.keys()).copied().collect();
                let mut map = BTreeMap::new();
                for x in keys {
                    let g = self.get(x).compose(&other.get(x))?;
                    if !g.is_identity() {
                        map.insert(x, g);
                    }
                }
                Sites::Line(map)
            }
            _ => {
                return Err(Error::TopologyMismatch(
                    "gauge transformations live on different lattices".into(),
                ))
            }
        };
        Ok(GaugeTransformation {
            degree: self.degree,
            sites,
        })
    }

    pub fn inverse(&self) -> GaugeTransformation {
        let sites = match &self.sites {
            Sites::Ring(v) => Sites::Ring(v.iter().map(GaugeElement::inverse).collect()),
            Sites::Line(map) => Sites::Line(map.iter().map(|(&x, g)| (x, g.inverse())).collect()),
        };
        GaugeTransformation {
            degree: self.degree,
            sites,
        }
    }

    fn check_compatible(&self, config: &GaugedConfiguration) -> Result<()> {
        if self.degree != config.alphabet() {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: config.alphabet(),
            });
        }
        match (&self.sites, config.topology()) {
            (Sites::Ring(v), Topology::Ring(size)) if v.len() == size => Ok(()),
            (Sites::Line(_), Topology::Line) => Ok(()),
            (_, topology) => Err(Error::TopologyMismatch(format!(
                "transformation on {:?} applied to configuration on {topology:?}",
                self.ring_size()
                    .map_or("line".to_string(), |n| format!("ring of {n}"))
            ))),
        }
    }
}

/// Extended local transformation `ḡ` at `at`: the cell becomes `g(c)`, the left
/// link `A₀` becomes `A₀ ∘ g⁻¹` and the right link `A₁` becomes `g ∘ A₁`.
pub fn apply_local(
    g: &GaugeElement,
    at: Position,
    config: &GaugedConfiguration,
) -> Result<GaugedConfiguration> {
    config.topology().check_position(at)?;
    if g.degree() != config.alphabet() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: config.alphabet(),
        });
    }
    let mut out = config.clone();
    out.put_cell(at, g.act(config.cell(at)));
    let left = config.link(at - 1).compose(&g.inverse())?;
    out.put_link(at - 1, left);
    let right = g.compose(&config.link(at))?;
    out.put_link(at, right);
    Ok(out)
}

/// Applies `γ = ∏ₓ gₓ`: every cell becomes `gₓ(cₓ)` and every link becomes
/// `gₓ ∘ A_{x,x+1} ∘ g_{x+1}⁻¹`.
pub fn apply_global(
    gamma: &GaugeTransformation,
    config: &GaugedConfiguration,
) -> Result<GaugedConfiguration> {
    gamma.check_compatible(config)?;
    let topology = config.topology();
    let mut out = config.clone();
    let (cells, links): (Vec<Position>, Vec<Position>) = match topology {
        Topology::Ring(size) => ((0..size as Position).collect(), (0..size as Position).collect()),
        Topology::Line => {
            let sites: Vec<Position> = gamma.non_identity_sites().into_iter().map(|(x, _)| x).collect();
            let links: BTreeSet<Position> = sites.iter().flat_map(|&x| [x - 1, x]).collect();
            (sites, links.into_iter().collect())
        }
    };
    for x in cells {
        out.put_cell(x, gamma.get(x).act(config.cell(x)));
    }
    for x in links {
        let g_right = gamma.get(topology.wrap(x + 1));
        let value = gamma
            .get(x)
            .compose(&config.link(x))?
            .compose(&g_right.inverse())?;
        out.put_link(x, value);
    }
    Ok(out)
}

/// Index-addressable enumeration of all `|G|^n` transformations of a ring
/// (digit `i` of the index is the element at site `i`).
#[derive(Debug, Clone)]
pub struct RingTransformations {
    elements: Vec<GaugeElement>,
    size: usize,
}

impl RingTransformations {
    pub fn new(group: &GaugeGroup, size: usize) -> Self {
        RingTransformations {
            elements: group.elements().to_vec(),
            size,
        }
    }

    pub fn len(&self) -> u64 {
        (self.elements.len() as u64).pow(self.size as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, mut index: u64) -> GaugeTransformation {
        let base = self.elements.len() as u64;
        let sites = (0..self.size)
            .map(|_| {
                let digit = (index % base) as usize;
                index /= base;
                self.elements[digit].clone()
            })
            .collect();
        GaugeTransformation {
            degree: self.elements[0].degree(),
            sites: Sites::Ring(sites),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = GaugeTransformation> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// All `|G|^n` gauge transformations of a ring of `size` sites.
pub fn enumerate_transformations(
    group: &GaugeGroup,
    size: usize,
) -> impl Iterator<Item = GaugeTransformation> {
    let all = RingTransformations::new(group, size);
    (0..all.len()).map(move |i| all.get(i))
}

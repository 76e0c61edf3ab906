//! Sparse state-vector simulator for the gauge-invariant quantum automaton.
//!
//! Basis states are occupation numbers: each cell holds a left-moving and a
//! right-moving fermion bit, and each link `(x, x+1)` holds an integer
//! counter `l`. One step scatters every link triple
//! `(right-mover at x, l, left-mover at x+1)` with the unitary `r`, then
//! applies `S` to the pair of components that form each new cell.
//!
//! The counter is truncated to `|l| <= l_max`. A step that would leave the
//! truncation fails with [`Error::TruncationOverflow`] instead of clipping.

mod observable;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Cell, Position, Topology};

pub use observable::{
    check_observable_gauge_constraint, commutator_norm, truncated_basis, Component, SparseOperator,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringParams {
    pub mass: f64,
    /// Lattice spacing `ε`.
    pub spacing: f64,
    pub charge: f64,
    pub l_max: u32,
}

impl Default for ScatteringParams {
    fn default() -> Self {
        ScatteringParams {
            mass: 0.5,
            spacing: 0.1,
            charge: 1.0,
            l_max: 4,
        }
    }
}

impl ScatteringParams {
    pub fn new(mass: f64, spacing: f64, charge: f64, l_max: u32) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if !mass.is_finite() || !charge.is_finite() {
            return Err(Error::InvalidParameter("mass and charge must be finite".into()));
        }
        Ok(ScatteringParams {
            mass,
            spacing,
            charge,
            l_max,
        })
    }

    /// `sin(m ε)`
    pub fn s(&self) -> f64 {
        (self.mass * self.spacing).sin()
    }

    /// `cos(m ε)`
    pub fn c(&self) -> f64 {
        (self.mass * self.spacing).cos()
    }

    /// `exp(i ε² g² l² / 2)`
    pub fn interaction_phase(&self, l: i64) -> Complex64 {
        let eg = self.spacing * self.charge;
        Complex64::from_polar(1.0, 0.5 * eg * eg * (l * l) as f64)
    }
}

/// Input or output of one link gate: `|m, l, n⟩`.
///
/// On input `m` is the right-mover of the left cell and `n` the left-mover of
/// the right cell; on output `m` becomes the left-mover of the left cell and
/// `n` the right-mover of the right cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkTriple {
    pub m: u8,
    pub l: i64,
    pub n: u8,
}

impl LinkTriple {
    pub const fn new(m: u8, l: i64, n: u8) -> Self {
        LinkTriple { m, l, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PhaseOrder {
    /// Phase evaluated on the outgoing counter.
    AfterBlock,
    #[cfg_attr(not(test), allow(dead_code))]
    BeforeBlock,
}

fn scatter(
    params: &ScatteringParams,
    t: LinkTriple,
    link: Position,
    order: PhaseOrder,
    out: &mut Vec<(LinkTriple, Complex64)>,
) -> Result<()> {
    let l_max = i64::from(params.l_max);
    let check = |l: i64| {
        if l.abs() > l_max {
            Err(Error::TruncationOverflow {
                link,
                value: l,
                l_max: params.l_max,
            })
        } else {
            Ok(())
        }
    };
    check(t.l)?;
    if t.m > 1 || t.n > 1 {
        return Err(Error::InvalidParameter(format!(
            "occupation bits must be 0 or 1, got {t:?}"
        )));
    }
    let reflect = -I * params.s();
    let transmit = Complex64::new(params.c(), 0.0);
    let start = out.len();
    match (t.m, t.n) {
        (0, 0) => out.push((t, ONE)),
        (1, 1) => out.push((t, -ONE)),
        (1, 0) => {
            out.push((t, reflect));
            out.push((LinkTriple::new(0, t.l - 1, 1), transmit));
        }
        _ => {
            out.push((t, reflect));
            out.push((LinkTriple::new(1, t.l + 1, 0), transmit));
        }
    }
    for (triple, amp) in &mut out[start..] {
        check(triple.l)?;
        let l = match order {
            PhaseOrder::AfterBlock => triple.l,
            PhaseOrder::BeforeBlock => t.l,
        };
        *amp *= params.interaction_phase(l);
    }
    // Exact zeros only (m = 0 or c = 0 exactly); keeps the map sparse.
    let mut i = start;
    while i < out.len() {
        if out[i].1.norm_sqr() == 0.0 {
            out.swap_remove(i);
        } else {
            i += 1;
        }
    }
    Ok(())
}

fn gate_with_order(
    params: &ScatteringParams,
    input: &BTreeMap<LinkTriple, Complex64>,
    order: PhaseOrder,
) -> Result<BTreeMap<LinkTriple, Complex64>> {
    let mut result = BTreeMap::new();
    let mut terms = Vec::with_capacity(2);
    for (&t, &amp) in input {
        terms.clear();
        scatter(params, t, 0, order, &mut terms)?;
        for &(out, a) in &terms {
            *result.entry(out).or_insert(Complex64::new(0.0, 0.0)) += a * amp;
        }
    }
    Ok(result)
}

/// The link unitary `r` on a superposition of `|m, l, n⟩`.
pub fn scattering_gate(
    params: &ScatteringParams,
    input: &BTreeMap<LinkTriple, Complex64>,
) -> Result<BTreeMap<LinkTriple, Complex64>> {
    gate_with_order(params, input, PhaseOrder::AfterBlock)
}

/// The diagonal gate `S = diag(1, 1, 1, -1)` on `(left, right)` bit pairs.
pub fn s_gate(input: &BTreeMap<(u8, u8), Complex64>) -> BTreeMap<(u8, u8), Complex64> {
    input
        .iter()
        .map(|(&(a, b), &amp)| ((a, b), if a == 1 && b == 1 { -amp } else { amp }))
        .collect()
}

/// The matrix of `r` on the largest subspace of one link with `|l| <= l_max`
/// that it maps into itself, with the basis it is written in.
pub fn scattering_matrix(params: &ScatteringParams) -> Result<(Vec<LinkTriple>, Vec<Vec<Complex64>>)> {
    let l_max = i64::from(params.l_max);
    let mut basis = Vec::new();
    for l in -l_max..=l_max {
        basis.push(LinkTriple::new(0, l, 0));
        basis.push(LinkTriple::new(1, l, 1));
        if l > -l_max {
            basis.push(LinkTriple::new(1, l, 0));
        }
        if l < l_max {
            basis.push(LinkTriple::new(0, l, 1));
        }
    }
    basis.sort();
    let index: BTreeMap<LinkTriple, usize> = basis.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let dim = basis.len();
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for (col, &t) in basis.iter().enumerate() {
        let out = scattering_gate(params, &BTreeMap::from([(t, ONE)]))?;
        for (triple, amp) in out {
            let row = index[&triple];
            matrix[row][col] = amp;
        }
    }
    Ok((basis, matrix))
}

/// `max |(U†U - I)_{ij}|`.
pub fn unitarity_deviation(matrix: &[Vec<Complex64>]) -> f64 {
    let dim = matrix.len();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for row in matrix {
                sum += row[i].conj() * row[j];
            }
            if i == j {
                sum -= ONE;
            }
            worst = worst.max(sum.norm());
        }
    }
    worst
}

/// A basis configuration: fermion bits per cell and an integer per link,
/// storing only non-quiescent entries in position order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BasisState {
    cells: Vec<(Position, Cell)>,
    links: Vec<(Position, i64)>,
}

impl BasisState {
    pub fn vacuum() -> Self {
        BasisState::default()
    }

    pub fn new(
        topology: Topology,
        cells: impl IntoIterator<Item = (Position, Cell)>,
        links: impl IntoIterator<Item = (Position, i64)>,
    ) -> Result<Self> {
        topology.validate()?;
        let mut cell_map = BTreeMap::new();
        for (x, cell) in cells {
            topology.check_position(x)?;
            for value in [cell.left, cell.right] {
                if value > 1 {
                    return Err(Error::ComponentOutOfRange {
                        position: x,
                        value,
                        bound: 2,
                    });
                }
            }
            cell_map.insert(x, cell);
        }
        let mut link_map = BTreeMap::new();
        for (x, l) in links {
            topology.check_position(x)?;
            link_map.insert(x, l);
        }
        Ok(Self::from_maps(cell_map, link_map))
    }

    fn from_maps(cells: BTreeMap<Position, Cell>, links: BTreeMap<Position, i64>) -> Self {
        BasisState {
            cells: cells.into_iter().filter(|(_, c)| !c.is_quiescent()).collect(),
            links: links.into_iter().filter(|&(_, l)| l != 0).collect(),
        }
    }

    pub fn cell(&self, x: Position) -> Cell {
        match self.cells.binary_search_by_key(&x, |&(p, _)| p) {
            Ok(i) => self.cells[i].1,
            Err(_) => Cell::QUIESCENT,
        }
    }

    pub fn link(&self, x: Position) -> i64 {
        match self.links.binary_search_by_key(&x, |&(p, _)| p) {
            Ok(i) => self.links[i].1,
            Err(_) => 0,
        }
    }

    /// Occupied cells in position order.
    pub fn cells(&self) -> &[(Position, Cell)] {
        &self.cells
    }

    /// Links with a non-zero counter in position order.
    pub fn links(&self) -> &[(Position, i64)] {
        &self.links
    }

    pub fn particle_count(&self) -> usize {
        self.cells
            .iter()
            .map(|(_, c)| usize::from(c.left) + usize::from(c.right))
            .sum()
    }

    fn fits(&self, topology: Topology) -> bool {
        match topology {
            Topology::Ring(n) => {
                let ok = |x: Position| (0..n as Position).contains(&x);
                self.cells.iter().all(|&(x, _)| ok(x)) && self.links.iter().all(|&(x, _)| ok(x))
            }
            Topology::Line => true,
        }
    }
}

/// A finite superposition of basis states on a fixed topology.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    topology: Topology,
    amplitudes: BTreeMap<BasisState, Complex64>,
}

impl QuantumState {
    pub fn zero(topology: Topology) -> Self {
        QuantumState {
            topology,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn vacuum(topology: Topology) -> Self {
        Self::basis(topology, BasisState::vacuum())
    }

    pub fn basis(topology: Topology, state: BasisState) -> Self {
        QuantumState {
            topology,
            amplitudes: BTreeMap::from([(state, ONE)]),
        }
    }

    /// Sums the given terms; repeated basis states accumulate.
    pub fn from_amplitudes(
        topology: Topology,
        terms: impl IntoIterator<Item = (BasisState, Complex64)>,
    ) -> Result<Self> {
        topology.validate()?;
        let mut state = QuantumState::zero(topology);
        for (basis, amp) in terms {
            if !basis.fits(topology) {
                return Err(Error::TopologyMismatch(format!(
                    "{basis:?} does not fit {topology:?}"
                )));
            }
            state.add(basis, amp);
        }
        Ok(state)
    }

    fn add(&mut self, basis: BasisState, amp: Complex64) {
        *self.amplitudes.entry(basis).or_insert(Complex64::new(0.0, 0.0)) += amp;
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn amplitude(&self, basis: &BasisState) -> Complex64 {
        self.amplitudes.get(basis).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisState, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .values()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("cannot normalise a zero state".into()));
        }
        Ok(QuantumState {
            topology: self.topology,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(b, &a)| (b.clone(), a / norm))
                .collect(),
        })
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .filter_map(|(b, a)| other.amplitudes.get(b).map(|o| a.conj() * o))
            .sum()
    }

    /// `‖self - other‖`
    pub fn distance(&self, other: &QuantumState) -> f64 {
        let mut sum = 0.0;
        for (b, a) in &self.amplitudes {
            sum += (a - other.amplitude(b)).norm_sqr();
        }
        for (b, o) in &other.amplitudes {
            if !self.amplitudes.contains_key(b) {
                sum += o.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// Expected `(left, right)` occupation of every occupied position.
    pub fn occupation_profile(&self) -> BTreeMap<Position, (f64, f64)> {
        let mut profile: BTreeMap<Position, (f64, f64)> = BTreeMap::new();
        for (basis, amp) in &self.amplitudes {
            let p = amp.norm_sqr();
            for &(x, cell) in &basis.cells {
                let entry = profile.entry(x).or_default();
                entry.0 += p * f64::from(cell.left);
                entry.1 += p * f64::from(cell.right);
            }
        }
        profile
    }
}

/// The two alternating partitions of one step: link triples scattered by
/// `r`, then cells formed from the outgoing components and acted on by `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Links,
    Cells,
}

fn scatter_links(
    params: &ScatteringParams,
    topology: Topology,
    basis: &BasisState,
) -> Result<Vec<(BasisState, Complex64)>> {
    let links: Vec<Position> = match topology {
        Topology::Ring(n) => (0..n as Position).collect(),
        Topology::Line => {
            let mut links: Vec<Position> = basis.links.iter().map(|&(x, _)| x).collect();
            for &(x, cell) in &basis.cells {
                if cell.right == 1 {
                    links.push(x);
                }
                if cell.left == 1 {
                    links.push(x - 1);
                }
            }
            links.sort_unstable();
            links.dedup();
            links
        }
    };
    let mut outputs: Vec<Vec<(LinkTriple, Complex64)>> = Vec::with_capacity(links.len());
    for &x in &links {
        let triple = LinkTriple::new(
            basis.cell(x).right,
            basis.link(x),
            basis.cell(topology.wrap(x + 1)).left,
        );
        let mut terms = Vec::with_capacity(2);
        scatter(params, triple, x, PhaseOrder::AfterBlock, &mut terms)?;
        outputs.push(terms);
    }
    if outputs.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }

    let mut result = Vec::new();
    let mut choice = vec![0usize; links.len()];
    loop {
        let mut cells: BTreeMap<Position, Cell> = BTreeMap::new();
        let mut new_links = BTreeMap::new();
        let mut amp = ONE;
        for (k, &x) in links.iter().enumerate() {
            let (t, a) = outputs[k][choice[k]];
            amp *= a;
            cells.entry(x).or_default().left = t.m;
            cells.entry(topology.wrap(x + 1)).or_default().right = t.n;
            new_links.insert(x, t.l);
        }
        result.push((BasisState::from_maps(cells, new_links), amp));

        // Mixed-radix increment over the per-link branches.
        let mut k = 0;
        loop {
            if k == links.len() {
                return Ok(result);
            }
            choice[k] += 1;
            if choice[k] < outputs[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn s_sign(basis: &BasisState) -> f64 {
    let doubly = basis
        .cells
        .iter()
        .filter(|(_, c)| c.left == 1 && c.right == 1)
        .count();
    if doubly % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Applies one partition of the step to every basis state of `psi`.
pub fn apply_partition(
    params: &ScatteringParams,
    partition: Partition,
    psi: &QuantumState,
) -> Result<QuantumState> {
    let mut out = QuantumState::zero(psi.topology);
    for (basis, &amp) in &psi.amplitudes {
        match partition {
            Partition::Links => {
                for (next, a) in scatter_links(params, psi.topology, basis)? {
                    out.add(next, a * amp);
                }
            }
            Partition::Cells => out.add(basis.clone(), amp * s_sign(basis)),
        }
    }
    Ok(out)
}

/// One global step: scatter every link, then apply `S` to every new cell.
pub fn qca_step(params: &ScatteringParams, psi: &QuantumState) -> Result<QuantumState> {
    let scattered = apply_partition(params, Partition::Links, psi)?;
    apply_partition(params, Partition::Cells, &scattered)
}

pub fn qca_run(params: &ScatteringParams, psi: &QuantumState, steps: usize) -> Result<Vec<QuantumState>> {
    let mut trace = vec![psi.clone()];
    for t in 0..steps {
        let next = qca_step(params, &trace[t])?;
        trace.push(next);
    }
    Ok(trace)
}

/// Local `U(1)` phases `φ(x)`: total on a ring, finitely supported on the line.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseField {
    Ring(Vec<f64>),
    Line(BTreeMap<Position, f64>),
}

impl PhaseField {
    pub fn zero(topology: Topology) -> Self {
        match topology {
            Topology::Ring(n) => PhaseField::Ring(vec![0.0; n]),
            Topology::Line => PhaseField::Line(BTreeMap::new()),
        }
    }

    pub fn get(&self, x: Position) -> f64 {
        match self {
            PhaseField::Ring(v) => v[x.rem_euclid(v.len() as Position) as usize],
            PhaseField::Line(map) => map.get(&x).copied().unwrap_or(0.0),
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            PhaseField::Ring(v) => PhaseField::Ring(v.iter().map(|p| -p).collect()),
            PhaseField::Line(map) => PhaseField::Line(map.iter().map(|(&x, p)| (x, -p)).collect()),
        }
    }

    fn check(&self, topology: Topology) -> Result<()> {
        match (self, topology) {
            (PhaseField::Ring(v), Topology::Ring(n)) if v.len() == n => Ok(()),
            (PhaseField::Line(_), Topology::Line) => Ok(()),
            _ => Err(Error::TopologyMismatch(format!(
                "phase field does not live on {topology:?}"
            ))),
        }
    }
}

/// Total phase picked up by a basis state:
/// `Σₓ φ(x)·(occupied components at x) + Σ_links l·(φ(x+1) − φ(x))`.
pub fn gauge_phase(basis: &BasisState, phi: &PhaseField) -> f64 {
    let matter: f64 = basis
        .cells
        .iter()
        .map(|&(x, c)| phi.get(x) * f64::from(c.left + c.right))
        .sum();
    let field: f64 = basis
        .links
        .iter()
        .map(|&(x, l)| l as f64 * (phi.get(x + 1) - phi.get(x)))
        .sum();
    matter + field
}

/// Applies `∏ₓ T_φ(x) ⊗ (R_φ(x) ⊗ R_φ(x)) ⊗ T_{-φ(x)}`: a diagonal phase per basis state.
pub fn gauge_transform_q(phi: &PhaseField, psi: &QuantumState) -> Result<QuantumState> {
    phi.check(psi.topology)?;
    Ok(QuantumState {
        topology: psi.topology,
        amplitudes: psi
            .amplitudes
            .iter()
            .map(|(b, &a)| (b.clone(), a * Complex64::from_polar(1.0, gauge_phase(b, phi))))
            .collect(),
    })
}

/// `‖step(γ ψ) − γ step(ψ)‖`.
pub fn check_q_invariance(params: &ScatteringParams, psi: &QuantumState, phi: &PhaseField) -> Result<f64> {
    let before = qca_step(params, &gauge_transform_q(phi, psi)?)?;
    let after = gauge_transform_q(phi, &qca_step(params, psi)?)?;
    Ok(before.distance(&after))
}

/// A normalised superposition of `terms` random basis states on a ring, with
/// uniformly random bits and counters in `[-field_bound, field_bound]`.
pub fn random_state(
    ring_size: usize,
    field_bound: i64,
    terms: usize,
    rng: &mut impl Rng,
) -> Result<QuantumState> {
    let topology = Topology::ring(ring_size)?;
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let cells: Vec<(Position, Cell)> = (0..ring_size as Position)
            .map(|x| (x, Cell::new(rng.random_range(0..2), rng.random_range(0..2))))
            .collect();
        let links: Vec<(Position, i64)> = (0..ring_size as Position)
            .map(|x| (x, rng.random_range(-field_bound..=field_bound)))
            .collect();
        let amp = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        out.push((BasisState::new(topology, cells, links)?, amp));
    }
    QuantumState::from_amplitudes(topology, out)?.normalized()
}

/// Independent uniform phases in `[-π, π)` on every site of a ring.
pub fn random_phase_field(ring_size: usize, rng: &mut impl Rng) -> PhaseField {
    use std::f64::consts::PI;
    PhaseField::Ring((0..ring_size).map(|_| rng.random_range(-PI..PI)).collect())
}

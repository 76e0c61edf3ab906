//! Operators on a truncated ring basis and their commutator with a gauge
//! transformation. Gauge transformations are diagonal in the occupation
//! basis, so `[γ, O]_{ij} = (p_i − p_j) O_{ij}` with `p_i` the phase of
//! basis state `i`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::{gauge_phase, BasisState, PhaseField, QuantumState};
use crate::error::{Error, Result};
use crate::lattice::{Cell, Position, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Left,
    Right,
}

/// Every basis state of a ring with `|l| <= l_max` on each link, in
/// mixed-radix order.
pub fn truncated_basis(ring_size: usize, l_max: u32) -> Result<Vec<BasisState>> {
    let topology = Topology::ring(ring_size)?;
    let l_max = i64::from(l_max);
    let link_radix = (2 * l_max + 1) as u64;
    let total = 4u64
        .checked_pow(ring_size as u32)
        .and_then(|c| {
            link_radix
                .checked_pow(ring_size as u32)
                .and_then(|l| c.checked_mul(l))
        })
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "basis for ring {ring_size} with l_max {l_max} is too large"
            ))
        })?;
    let mut basis = Vec::with_capacity(total as usize);
    for mut index in 0..total {
        let mut cells = Vec::with_capacity(ring_size);
        for x in 0..ring_size as Position {
            let digit = (index % 4) as u8;
            index /= 4;
            cells.push((x, Cell::new(digit >> 1, digit & 1)));
        }
        let mut links = Vec::with_capacity(ring_size);
        for x in 0..ring_size as Position {
            links.push((x, (index % link_radix) as i64 - l_max));
            index /= link_radix;
        }
        basis.push(BasisState::new(topology, cells, links)?);
    }
    Ok(basis)
}

/// A sparse matrix in a fixed, finite basis of ring states.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    topology: Topology,
    basis: Vec<BasisState>,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SparseOperator {
    pub fn new(
        topology: Topology,
        basis: Vec<BasisState>,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        topology.validate()?;
        let dim = basis.len();
        let mut map = BTreeMap::new();
        for (i, j, v) in entries {
            if i >= dim || j >= dim {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside dimension {dim}"
                )));
            }
            *map.entry((i, j)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        Ok(SparseOperator {
            topology,
            basis,
            entries: map,
        })
    }

    pub fn identity(topology: Topology, basis: Vec<BasisState>) -> Result<Self> {
        let n = basis.len();
        Self::new(topology, basis, (0..n).map(|i| (i, i, Complex64::new(1.0, 0.0))))
    }

    /// Total particle number, diagonal.
    pub fn number(topology: Topology, basis: Vec<BasisState>) -> Result<Self> {
        let entries: Vec<_> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (i, i, Complex64::new(b.particle_count() as f64, 0.0)))
            .collect();
        Self::new(topology, basis, entries)
    }

    /// Creates a particle in one component of `site` and leaves the links
    /// alone. Transitions leading outside the basis are dropped.
    pub fn raising(
        topology: Topology,
        basis: Vec<BasisState>,
        site: Position,
        component: Component,
    ) -> Result<Self> {
        topology.check_position(site)?;
        let index: HashMap<&BasisState, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut entries = Vec::new();
        for (j, b) in basis.iter().enumerate() {
            let mut cell = b.cell(site);
            let bit = match component {
                Component::Left => &mut cell.left,
                Component::Right => &mut cell.right,
            };
            if *bit == 1 {
                continue;
            }
            *bit = 1;
            let mut cells: BTreeMap<Position, Cell> = b.cells().iter().copied().collect();
            cells.insert(site, cell);
            let raised = BasisState::from_maps(cells, b.links().iter().copied().collect());
            if let Some(&i) = index.get(&raised) {
                entries.push((i, j, Complex64::new(1.0, 0.0)));
            }
        }
        Self::new(topology, basis, entries)
    }

    /// The projector `|ψ⟩⟨ψ|`; every basis state of `ψ` must be in `basis`.
    pub fn projector(basis: Vec<BasisState>, psi: &QuantumState) -> Result<Self> {
        let index: HashMap<&BasisState, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut coords = Vec::with_capacity(psi.len());
        for (b, &a) in psi.iter() {
            let i = *index
                .get(b)
                .ok_or_else(|| Error::DimensionMismatch(format!("{b:?} is not in the basis")))?;
            coords.push((i, a));
        }
        let entries: Vec<_> = coords
            .iter()
            .flat_map(|&(i, a)| coords.iter().map(move |&(j, b)| (i, j, a * b.conj())))
            .collect();
        Self::new(psi.topology(), basis, entries)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisState] {
        &self.basis
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }
}

/// Frobenius norm of `[γ_φ, O]`.
pub fn commutator_norm(op: &SparseOperator, phi: &PhaseField) -> Result<f64> {
    phi.check(op.topology)?;
    let phases: Vec<Complex64> = op
        .basis
        .iter()
        .map(|b| Complex64::from_polar(1.0, gauge_phase(b, phi)))
        .collect();
    let sum: f64 = op
        .entries
        .iter()
        .map(|(&(i, j), v)| ((phases[i] - phases[j]) * v).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Same as [`commutator_norm`]; a gauge-invariant observable or state gives zero.
pub fn check_observable_gauge_constraint(op: &SparseOperator, phi: &PhaseField) -> Result<f64> {
    commutator_norm(op, phi)
}

//! Fixtures shared by the benchmarks.

use gauge_ca::qca::{BasisState, QuantumState, ScatteringParams};
use gauge_ca::{Cell, Topology};

/// Counter-propagating pair on a ring, evolved far enough to be spread out.
pub fn spread_pair(size: usize, steps: usize) -> (ScatteringParams, QuantumState) {
    let params = ScatteringParams::new(0.5, 0.1, 1.0, (steps + 4) as u32).expect("valid parameters");
    let ring = Topology::Ring(size);
    let start = BasisState::new(
        ring,
        [(0, Cell::new(0, 1)), (size as i64 / 2, Cell::new(1, 0))],
        [],
    )
    .expect("positions inside the ring");
    let mut psi = QuantumState::basis(ring, start);
    for _ in 0..steps {
        psi = gauge_ca::qca_step(&params, &psi).expect("counter stays inside the truncation");
    }
    (params, psi)
}

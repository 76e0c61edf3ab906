//! Gauge-invariant cellular automata.
//!
//! The crate provides the transport automaton on a one-dimensional
//! lattice, its extension by a link-valued gauge field, exhaustive and
//! randomised checkers for gauge-invariance, a brute-force oracle for
//! gauge-equivalence of automata, and a sparse state-vector simulator for
//! the gauge-invariant quantum automaton with a `U(1)` symmetry.

pub mod classical;
pub mod equivalence;
pub mod error;
pub mod gauge_group;
pub mod invariance;
pub mod lattice;
pub mod qca;

pub use classical::{run, step_bare, step_gauged, Automaton, LinkOutput, LinkRule, RuleKind};
pub use equivalence::{
    check_equivalence, check_proposition_statements, check_simulation, gauge_fix, EquivalenceReport,
    EquivalenceVerdict, PropositionStatements, RuleVariant, SimulationWitness,
};
pub use error::{Error, Result};
pub use gauge_group::{
    apply_global, apply_local, compose, enumerate_transformations, GaugeElement, GaugeGroup,
    GaugeTransformation, RingTransformations,
};
pub use invariance::{
    check_global_invariance, check_line_invariance, check_local_invariance, z_automaton, InvarianceReport,
    Verdict, Witness,
};
pub use lattice::{
    make_configuration, support, Cell, GaugedConfiguration, MatterConfiguration, Position,
    RingConfigurations, Topology,
};
pub use qca::{
    check_observable_gauge_constraint, check_q_invariance, gauge_transform_q, qca_run, qca_step,
    scattering_gate, BasisState, PhaseField, QuantumState, ScatteringParams, SparseOperator,
};

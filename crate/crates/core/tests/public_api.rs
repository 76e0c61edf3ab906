use gauge_ca::{
    check_global_invariance, check_local_invariance, check_q_invariance, qca_run, BasisState, Cell,
    GaugeGroup, LinkRule, PhaseField, QuantumState, ScatteringParams, Topology, Verdict, Witness,
};

#[test]
fn gauged_rule_passes_both_checkers() {
    let group = GaugeGroup::abelian_swap();
    let rule = LinkRule::gauged(2);
    let local = check_local_invariance(&group, &rule).unwrap();
    assert_eq!(local.verdict, Verdict::Invariant);
    assert_eq!(local.cases_checked, 4 * 2 * 4 * 2 * 2);
    let global = check_global_invariance(&group, &rule, 2, 2, None).unwrap();
    assert!(global.is_invariant() && global.complete);
}

#[test]
fn bare_rule_fails_globally() {
    let group = GaugeGroup::abelian_swap();
    let report = check_global_invariance(&group, &LinkRule::bare(2), 2, 1, None).unwrap();
    assert_eq!(report.verdict, Verdict::CounterexampleFound);
    let Some(Witness::Global(witness)) = report.witness else {
        panic!("expected a global witness");
    };
    assert!(witness.replay(&LinkRule::bare(2)).unwrap());
}

#[test]
fn quantum_particle_pair_keeps_norm_and_invariance() {
    let topology = Topology::ring(4).unwrap();
    let state = BasisState::new(topology, vec![(1, Cell::new(1, 1))], vec![(1, 1)]).unwrap();
    let psi = QuantumState::basis(topology, state);
    let params = ScatteringParams::default();
    let trace = qca_run(&params, &psi, 6).unwrap();
    for s in &trace {
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }
    let phi = PhaseField::Ring(vec![0.3, -1.2, 2.0, 0.7]);
    for s in &trace {
        assert!(check_q_invariance(&params, s, &phi).unwrap() < 1e-12);
    }
}

use std::path::PathBuf;

use gauge_ca::{GaugedConfiguration, Topology};
use gauge_ca_cli::{parse_scenario, render_trace, simulate, Format, Trace};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn trace(name: &str) -> Vec<GaugedConfiguration> {
    let text = std::fs::read_to_string(root().join("scenarios").join(format!("{name}.scn"))).unwrap();
    let scenario = parse_scenario(&text).unwrap();
    match simulate(&scenario, scenario.run.steps).unwrap() {
        Trace::Classical(t) => t,
        Trace::Quantum(_) => panic!("{name} is classical"),
    }
}

#[test]
fn text_diagrams_match_golden_files() {
    for name in ["fig6a", "fig6b", "fig6c", "fig7a", "fig7b", "fig9a", "fig9b"] {
        let expected =
            std::fs::read_to_string(root().join("tests/golden").join(format!("{name}.txt"))).unwrap();
        let got = render_trace(&Trace::Classical(trace(name)), Format::Text).unwrap();
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn single_mover_is_a_rightward_diagonal() {
    let t = trace("fig6a");
    for (step, config) in t.iter().enumerate() {
        let occupied: Vec<_> = config.matter().cells().collect();
        assert_eq!(occupied.len(), 1);
        let (x, cell) = occupied[0];
        assert_eq!(x, 1 + step as i64);
        assert_eq!((cell.left, cell.right), (0, 1));
    }
}

#[test]
fn compensated_preparation_returns_to_plain_run() {
    let plain = trace("fig6a");
    let compensated = trace("fig6b-compensated");
    assert_eq!(compensated.last(), plain.last());
    // Before compensation the two runs differ at the transformed site.
    let prepared = trace("fig6b");
    assert_ne!(prepared.last(), plain.last());
}

#[test]
fn flipped_link_diverges_from_identity_field() {
    let plain = trace("fig6a");
    let flipped = trace("fig6c");
    let first = plain
        .iter()
        .zip(&flipped)
        .position(|(a, b)| a.matter() != b.matter());
    assert_eq!(first, Some(1));
    let count = |c: &GaugedConfiguration| c.matter().cells().count();
    assert!(count(flipped.last().unwrap()) > count(plain.last().unwrap()));
}

#[test]
fn gauge_transformed_crossing_matches_up_to_the_transformation() {
    let a = trace("fig7a");
    let b = trace("fig7b");
    let swap = gauge_ca::GaugeElement::transposition(3, 0, 1).unwrap();
    let gamma = gauge_ca::GaugeTransformation::single(Topology::Ring(10), 5, swap).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(&gauge_ca::apply_global(&gamma, x).unwrap(), y);
    }
}

#[test]
fn post_swap_inverts_every_step() {
    let a = trace("fig9a");
    let b = trace("fig9b");
    let swap = gauge_ca::GaugeElement::swap();
    for (t, (x, y)) in a.iter().zip(&b).enumerate() {
        for pos in 0..8 {
            let expected = if t % 2 == 1 {
                swap.act(x.cell(pos))
            } else {
                x.cell(pos)
            };
            assert_eq!(y.cell(pos), expected, "t={t} x={pos}");
        }
    }
}

#[test]
fn svg_output_is_stable() {
    let t = Trace::Classical(trace("fig6c"));
    let a = render_trace(&t, Format::Svg).unwrap();
    assert_eq!(a, render_trace(&t, Format::Svg).unwrap());
    assert!(a.contains("<svg"));
}

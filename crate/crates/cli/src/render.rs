//! Space-time diagrams. Time flows upward: the last frame is printed first.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use gauge_ca::qca::QuantumState;
use gauge_ca::{GaugeElement, GaugedConfiguration, Position, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("cannot render an empty trace")]
    Empty,
    #[error("frame {frame} lives on {found:?}, expected {expected:?}")]
    MixedTopology {
        frame: usize,
        expected: Topology,
        found: Topology,
    },
    #[error("frame {frame} has alphabet {found}, expected {expected}")]
    MixedAlphabet {
        frame: usize,
        expected: usize,
        found: usize,
    },
}

const COMPONENT_GLYPHS: [char; 8] = ['.', '#', '+', '3', '4', '5', '6', '7'];

fn component_glyph(v: u8) -> char {
    COMPONENT_GLYPHS.get(usize::from(v)).copied().unwrap_or('?')
}

fn link_glyph(g: &GaugeElement) -> char {
    if g.is_identity() {
        ' '
    } else if g.cycles() == [vec![0, 1]] {
        '*'
    } else {
        '~'
    }
}

/// Columns shown: the whole ring, or the occupied part of the line with one
/// empty cell of margin on each side.
fn window(topology: Topology, occupied: impl Iterator<Item = Position>) -> Vec<Position> {
    match topology {
        Topology::Ring(n) => (0..n as Position).collect(),
        Topology::Line => {
            let set: BTreeSet<Position> = occupied.collect();
            match (set.first(), set.last()) {
                (Some(&lo), Some(&hi)) => (lo - 1..=hi + 1).collect(),
                _ => vec![-1, 0, 1],
            }
        }
    }
}

fn topology_line(topology: Topology, cols: &[Position]) -> String {
    match topology {
        Topology::Ring(n) => format!(
            "# topology: ring({n}); the last link glyph joins cell {} to cell 0",
            n - 1
        ),
        Topology::Line => format!("# topology: line; columns {}..={}", cols[0], cols[cols.len() - 1]),
    }
}

fn axis(cols: &[Position]) -> String {
    let mut out = String::from("     +");
    out.push_str(&"-".repeat(3 * cols.len()));
    out.push_str("\n   x  ");
    for &x in cols {
        let _ = write!(out, "{:<3}", x.rem_euclid(10));
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

fn check_frames<T>(
    trace: &[T],
    topology: impl Fn(&T) -> Topology,
    alphabet: impl Fn(&T) -> usize,
) -> Result<(), RenderError> {
    let first = trace.first().ok_or(RenderError::Empty)?;
    for (frame, item) in trace.iter().enumerate() {
        if topology(item) != topology(first) {
            return Err(RenderError::MixedTopology {
                frame,
                expected: topology(first),
                found: topology(item),
            });
        }
        if alphabet(item) != alphabet(first) {
            return Err(RenderError::MixedAlphabet {
                frame,
                expected: alphabet(first),
                found: alphabet(item),
            });
        }
    }
    Ok(())
}

fn classical_window(trace: &[GaugedConfiguration]) -> Vec<Position> {
    let topology = trace[0].topology();
    let occupied = trace.iter().flat_map(|c| {
        c.matter()
            .positions()
            .into_iter()
            .chain(c.links().flat_map(|(x, _)| [x, x + 1]))
    });
    window(topology, occupied)
}

/// Space-time diagram of a classical trace.
pub fn render_spacetime(trace: &[GaugedConfiguration], format: Format) -> Result<String, RenderError> {
    check_frames(trace, |c| c.topology(), |c| c.alphabet())?;
    let cols = classical_window(trace);
    match format {
        Format::Text => Ok(classical_text(trace, &cols)),
        Format::Svg => Ok(classical_svg(trace, &cols)),
    }
}

fn classical_text(trace: &[GaugedConfiguration], cols: &[Position]) -> String {
    let n = trace[0].alphabet();
    let glyphs: Vec<String> = (0..n as u8)
        .map(|v| format!("{v}='{}'", component_glyph(v)))
        .collect();
    let mut out = String::new();
    out.push_str("# space-time diagram; time flows upward, t=0 is the bottom row\n");
    out.push_str("# each cell is two glyphs: left-moving component, then right-moving component\n");
    let _ = writeln!(out, "# component glyphs: {}", glyphs.join(" "));
    out.push_str("# the glyph after a cell is its link to the right: ' '=identity '*'=(0 1) '~'=other\n");
    out.push_str("# an empty link glyph is the identity element of the gauge field\n");
    let _ = writeln!(out, "{}", topology_line(trace[0].topology(), cols));
    for (t, config) in trace.iter().enumerate().rev() {
        let mut row = format!("{t:>4} |");
        for &x in cols {
            let c = config.cell(x);
            row.push(component_glyph(c.left));
            row.push(component_glyph(c.right));
            row.push(link_glyph(&config.link(x)));
        }
        out.push_str(row.trim_end());
        out.push('\n');
    }
    out.push_str(&axis(cols));
    out
}

const CELL: usize = 12;
const LINK: usize = 6;
const ROW: usize = 16;
const MARGIN: usize = 30;

fn component_fill(v: u8) -> &'static str {
    match v {
        0 => "#ffffff",
        1 => "#000000",
        2 => "#888888",
        3 => "#d62728",
        4 => "#1f77b4",
        5 => "#ff7f0e",
        6 => "#9467bd",
        _ => "#8c564b",
    }
}

fn svg_open(out: &mut String, cols: usize, rows: usize, comment: &str) {
    let width = 2 * MARGIN + cols * (2 * CELL + LINK);
    let height = 2 * MARGIN + rows * ROW;
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<!-- {comment} -->");
    let _ = writeln!(
        out,
        "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>"
    );
}

fn svg_rect(out: &mut String, x: usize, y: usize, w: usize, fill: &str) {
    let _ = writeln!(
        out,
        "<rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#444444\" stroke-width=\"0.5\"/>"
    );
}

fn svg_time_label(out: &mut String, t: usize, y: usize) {
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"end\" font-family=\"monospace\">{t}</text>",
        MARGIN - 4,
        y + CELL - 2
    );
}

fn classical_svg(trace: &[GaugedConfiguration], cols: &[Position]) -> String {
    let mut out = String::new();
    svg_open(
        &mut out,
        cols.len(),
        trace.len(),
        "time flows upward; each cell is a left and a right square; white link = identity, green = (0 1), olive = other",
    );
    let last = trace.len() - 1;
    for (t, config) in trace.iter().enumerate() {
        let y = MARGIN + (last - t) * ROW;
        svg_time_label(&mut out, t, y);
        for (i, &x) in cols.iter().enumerate() {
            let left = MARGIN + i * (2 * CELL + LINK);
            let c = config.cell(x);
            svg_rect(&mut out, left, y, CELL, component_fill(c.left));
            svg_rect(&mut out, left + CELL, y, CELL, component_fill(c.right));
            let fill = match link_glyph(&config.link(x)) {
                ' ' => "#ffffff",
                '*' => "#2ca02c",
                _ => "#bcbd22",
            };
            svg_rect(&mut out, left + 2 * CELL, y, LINK, fill);
        }
    }
    out.push_str("</svg>\n");
    out
}

const DENSITY_GLYPHS: [char; 5] = ['.', ':', '+', '*', '#'];

fn density_glyph(p: f64) -> char {
    match p {
        p if p < 0.05 => DENSITY_GLYPHS[0],
        p if p < 0.25 => DENSITY_GLYPHS[1],
        p if p < 0.5 => DENSITY_GLYPHS[2],
        p if p < 0.75 => DENSITY_GLYPHS[3],
        _ => DENSITY_GLYPHS[4],
    }
}

/// Mean counter on each shown link.
fn mean_counters(psi: &QuantumState, cols: &[Position]) -> Vec<f64> {
    let mut means = vec![0.0; cols.len()];
    for (basis, amp) in psi.iter() {
        let p = amp.norm_sqr();
        for (i, &x) in cols.iter().enumerate() {
            means[i] += p * basis.link(x) as f64;
        }
    }
    means
}

fn counter_glyph(mean: f64) -> char {
    if mean <= -0.5 {
        '<'
    } else if mean >= 0.5 {
        '>'
    } else {
        ' '
    }
}

/// Occupation-probability diagram of a quantum trace.
pub fn render_quantum(trace: &[QuantumState], format: Format) -> Result<String, RenderError> {
    check_frames(trace, |s| s.topology(), |_| 2)?;
    let topology = trace[0].topology();
    let occupied = trace.iter().flat_map(|s| {
        s.iter()
            .flat_map(|(b, _)| {
                b.cells()
                    .iter()
                    .map(|&(x, _)| x)
                    .chain(b.links().iter().flat_map(|&(x, _)| [x, x + 1]))
            })
            .collect::<Vec<_>>()
    });
    let cols = window(topology, occupied);
    let mut out = String::new();
    match format {
        Format::Text => {
            out.push_str("# space-time diagram; time flows upward, t=0 is the bottom row\n");
            out.push_str(
                "# each cell is two glyphs: left-moving, then right-moving occupation probability\n",
            );
            out.push_str("# probability glyphs: '.' <0.05  ':' <0.25  '+' <0.5  '*' <0.75  '#' otherwise\n");
            out.push_str(
                "# the glyph after a cell is its link: '<' mean counter <= -1/2, '>' >= 1/2, ' ' otherwise\n",
            );
            let _ = writeln!(out, "{}", topology_line(topology, &cols));
            for (t, psi) in trace.iter().enumerate().rev() {
                let profile = psi.occupation_profile();
                let means = mean_counters(psi, &cols);
                let mut row = format!("{t:>4} |");
                for (i, x) in cols.iter().enumerate() {
                    let (l, r) = profile.get(x).copied().unwrap_or((0.0, 0.0));
                    row.push(density_glyph(l));
                    row.push(density_glyph(r));
                    row.push(counter_glyph(means[i]));
                }
                out.push_str(row.trim_end());
                out.push('\n');
            }
            out.push_str(&axis(&cols));
        }
        Format::Svg => {
            svg_open(
                &mut out,
                cols.len(),
                trace.len(),
                "time flows upward; grey level = occupation probability of each component",
            );
            let last = trace.len() - 1;
            for (t, psi) in trace.iter().enumerate() {
                let y = MARGIN + (last - t) * ROW;
                svg_time_label(&mut out, t, y);
                let profile = psi.occupation_profile();
                for (i, x) in cols.iter().enumerate() {
                    let left = MARGIN + i * (2 * CELL + LINK);
                    let (l, r) = profile.get(x).copied().unwrap_or((0.0, 0.0));
                    for (k, p) in [l, r].into_iter().enumerate() {
                        let level = (255.0 * (1.0 - p.clamp(0.0, 1.0))).round() as u8;
                        let fill = format!("#{level:02x}{level:02x}{level:02x}");
                        svg_rect(&mut out, left + k * CELL, y, CELL, &fill);
                    }
                }
            }
            out.push_str("</svg>\n");
        }
    }
    Ok(out)
}

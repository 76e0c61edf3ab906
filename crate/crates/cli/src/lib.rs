//! Scenario files, space-time diagrams and check reports for the `gauge-ca`
//! command-line tool.

pub mod checks;
pub mod render;
pub mod scenario;
pub mod simulate;

pub use checks::{report, run_checks, CheckOutcome};
pub use render::{render_quantum, render_spacetime, Format, RenderError};
pub use scenario::{parse_scenario, render_scenario, Apply, Check, ErrorKind, Model, ParseError, Scenario};
pub use simulate::{simulate, Trace};

/// Renders whichever kind of trace a scenario produced.
pub fn render_trace(trace: &Trace, format: Format) -> Result<String, RenderError> {
    match trace {
        Trace::Classical(t) => render_spacetime(t, format),
        Trace::Quantum(t) => render_quantum(t, format),
    }
}

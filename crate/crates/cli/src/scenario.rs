//! Plain-text scenario files.
//!
//! ```text
//! # comment
//! [model]
//! kind = abelian | nonabelian | quantum
//! n = 3                     # nonabelian only, 2..=8
//! rule = gauged | bare      # classical only
//! post = (0 1)              # classical, ring only: uniform post-transformation
//! mass = 0.5                # quantum only, together with spacing, charge, lmax
//!
//! [topology]
//! kind = ring | line
//! size = 8                  # ring only
//!
//! [matter]
//! <x> = <left>,<right>
//!
//! [field]
//! <x> = <cycles>            # classical link (x, x+1), e.g. (0 1) or ()
//! <x> = <integer>           # quantum link counter
//!
//! [gauge]
//! apply = initial | final | both
//! <x> = <cycles>            # classical
//! phi(<x>) = <real>         # quantum
//!
//! [run]
//! steps = 6
//! seed = 0
//! checks = local-invariance, global-invariance
//! check-ring = 3
//! check-steps = 3
//! trials = 100
//! ```
//!
//! Every key is optional except `[model] kind`, and `n` for `nonabelian`.
//! `apply = final` applies the listed transformation after the last step;
//! `apply = both` applies it before the first step and its inverse after the
//! last one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use gauge_ca::{Cell, GaugeElement, Position, RuleKind, ScatteringParams, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {} error: {message}", match .kind { ErrorKind::Syntax => "syntax", ErrorKind::Semantic => "semantic" })]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Two-letter alphabet with the swap group.
    Abelian,
    /// Alphabet `0..n` with the full symmetric group.
    NonAbelian {
        n: usize,
    },
    Quantum(ScatteringParams),
}

impl Model {
    pub fn alphabet(&self) -> usize {
        match self {
            Model::Abelian | Model::Quantum(_) => 2,
            Model::NonAbelian { n } => *n,
        }
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, Model::Quantum(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Apply {
    Initial,
    Final,
    Both,
}

impl Apply {
    fn name(self) -> &'static str {
        match self {
            Apply::Initial => "initial",
            Apply::Final => "final",
            Apply::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSchedule {
    pub apply: Apply,
    /// Classical local transformations.
    pub sites: BTreeMap<Position, GaugeElement>,
    /// Quantum phases `φ(x)`.
    pub phases: BTreeMap<Position, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    LocalInvariance,
    GlobalInvariance,
    LineInvariance,
    Equivalence,
    Proposition,
    QuantumInvariance,
    Unitarity,
    Norm,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::LocalInvariance,
        Check::GlobalInvariance,
        Check::LineInvariance,
        Check::Equivalence,
        Check::Proposition,
        Check::QuantumInvariance,
        Check::Unitarity,
        Check::Norm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::LocalInvariance => "local-invariance",
            Check::GlobalInvariance => "global-invariance",
            Check::LineInvariance => "line-invariance",
            Check::Equivalence => "equivalence",
            Check::Proposition => "proposition",
            Check::QuantumInvariance => "quantum-invariance",
            Check::Unitarity => "unitarity",
            Check::Norm => "norm",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, Check::QuantumInvariance | Check::Unitarity | Check::Norm)
    }

    fn from_name(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub steps: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Ring size for the exhaustive classical checks.
    pub check_ring: usize,
    /// Number of steps compared by the global checks.
    pub check_steps: usize,
    /// Number of samples for randomised checks.
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: Model,
    pub rule: RuleKind,
    pub post: Option<GaugeElement>,
    pub topology: Topology,
    pub matter: BTreeMap<Position, Cell>,
    /// Classical link elements; identity links are omitted.
    pub field: BTreeMap<Position, GaugeElement>,
    /// Quantum link counters; zero counters are omitted.
    pub counters: BTreeMap<Position, i64>,
    pub gauge: Option<GaugeSchedule>,
    pub run: RunSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Model,
    Topology,
    Matter,
    Field,
    Gauge,
    Run,
}

impl Section {
    fn from_name(name: &str) -> Option<Section> {
        Some(match name {
            "model" => Section::Model,
            "topology" => Section::Topology,
            "matter" => Section::Matter,
            "field" => Section::Field,
            "gauge" => Section::Gauge,
            "run" => Section::Run,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Section::Model => "model",
            Section::Topology => "topology",
            Section::Matter => "matter",
            Section::Field => "field",
            Section::Gauge => "gauge",
            Section::Run => "run",
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    key_col: usize,
    value_col: usize,
}

impl Entry {
    fn semantic(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.value_col,
            kind: ErrorKind::Semantic,
            message: message.into(),
        }
    }

    fn unknown(&self, section: Section) -> ParseError {
        ParseError {
            line: self.line,
            column: self.key_col,
            kind: ErrorKind::Semantic,
            message: format!("unknown key `{}` in [{}]", self.key, section.name()),
        }
    }

    fn parse<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.value.parse().map_err(|_| ParseError {
            line: self.line,
            column: self.value_col,
            kind: ErrorKind::Syntax,
            message: format!("expected {what}, found `{}`", self.value),
        })
    }

    fn position(&self) -> Result<Position, ParseError> {
        self.key.parse().map_err(|_| ParseError {
            line: self.line,
            column: self.key_col,
            kind: ErrorKind::Syntax,
            message: format!("expected an integer position, found `{}`", self.key),
        })
    }
}

#[derive(Default)]
struct Sections {
    entries: BTreeMap<Section, Vec<Entry>>,
    headers: BTreeMap<Section, usize>,
}

impl Sections {
    fn get(&self, section: Section) -> &[Entry] {
        self.entries.get(&section).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind: ErrorKind::Syntax,
        message: message.into(),
    }
}

fn split_sections(text: &str) -> Result<Sections, ParseError> {
    let mut sections = Sections::default();
    let mut current: Option<Section> = None;
    let mut seen_keys: BTreeSet<(Section, String)> = BTreeSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(syntax(
                    line,
                    indent + trimmed.len(),
                    "expected `]` to close the section header",
                ));
            };
            let section = Section::from_name(name.trim())
                .ok_or_else(|| syntax(line, indent + 1, format!("unknown section [{}]", name.trim())))?;
            if sections.headers.insert(section, line).is_some() {
                return Err(syntax(
                    line,
                    indent,
                    format!("section [{}] appears twice", section.name()),
                ));
            }
            current = Some(section);
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(syntax(
                line,
                indent,
                "expected `key = value` or a `[section]` header",
            ));
        };
        let Some(section) = current else {
            return Err(syntax(line, indent, "key appears before any section header"));
        };
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        if key.is_empty() {
            return Err(syntax(line, eq + 1, "missing key before `=`"));
        }
        let value_col = eq + 2 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
        if value.is_empty() {
            return Err(syntax(line, value_col, format!("missing value for `{key}`")));
        }
        if !seen_keys.insert((section, key.to_string())) {
            return Err(syntax(
                line,
                indent,
                format!("duplicate key `{key}` in [{}]", section.name()),
            ));
        }
        sections.entries.entry(section).or_default().push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
            key_col: indent,
            value_col,
        });
    }
    Ok(sections)
}

/// A post-transformation together with the line it was declared on.
type Post = Option<(GaugeElement, usize)>;

fn parse_model(sections: &Sections) -> Result<(Model, RuleKind, Post), ParseError> {
    let entries = sections.get(Section::Model);
    let header = sections.headers.get(&Section::Model).copied().unwrap_or(1);
    let kind = entries
        .iter()
        .find(|e| e.key == "kind")
        .ok_or_else(|| ParseError {
            line: header,
            column: 1,
            kind: ErrorKind::Semantic,
            message: "missing `kind` in [model]".into(),
        })?;
    let lookup = |key: &str| entries.iter().find(|e| e.key == key);
    let (allowed, model): (&[&str], Model) = match kind.value.as_str() {
        "abelian" => {
            if let Some(n) = lookup("n") {
                if n.parse::<usize>("an integer")? != 2 {
                    return Err(n.semantic("the abelian model has N=2"));
                }
            }
            (&["kind", "n", "rule", "post"], Model::Abelian)
        }
        "nonabelian" => {
            let n_entry = lookup("n").ok_or_else(|| ParseError {
                line: kind.line,
                column: kind.value_col,
                kind: ErrorKind::Semantic,
                message: "undefined alphabet size N: add `n = <2..8>` to [model]".into(),
            })?;
            let n: usize = n_entry.parse("an integer")?;
            if !(2..=8).contains(&n) {
                return Err(n_entry.semantic(format!("N={n} is outside the supported range 2..=8")));
            }
            (&["kind", "n", "rule", "post"], Model::NonAbelian { n })
        }
        "quantum" => {
            let d = ScatteringParams::default();
            let real = |key: &str, default: f64| -> Result<f64, ParseError> {
                lookup(key).map_or(Ok(default), |e| e.parse("a real number"))
            };
            let mass = real("mass", d.mass)?;
            let spacing = real("spacing", d.spacing)?;
            let charge = real("charge", d.charge)?;
            let l_max = lookup("lmax").map_or(Ok(d.l_max), |e| e.parse("a non-negative integer"))?;
            let params = ScatteringParams::new(mass, spacing, charge, l_max).map_err(|err| {
                let e = lookup("spacing").or(lookup("mass")).unwrap_or(kind);
                e.semantic(err.to_string())
            })?;
            (
                &["kind", "mass", "spacing", "charge", "lmax"],
                Model::Quantum(params),
            )
        }
        other => {
            return Err(kind.semantic(format!(
                "unknown model `{other}`, expected abelian, nonabelian or quantum"
            )))
        }
    };
    if let Some(e) = entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
        return Err(e.unknown(Section::Model));
    }
    let rule = match lookup("rule").map(|e| (e, e.value.as_str())) {
        None | Some((_, "gauged")) => RuleKind::Gauged,
        Some((_, "bare")) => RuleKind::Bare,
        Some((e, other)) => {
            return Err(e.semantic(format!("unknown rule `{other}`, expected gauged or bare")))
        }
    };
    let post = match lookup("post") {
        Some(e) => Some((element(e, model.alphabet())?, e.line)),
        None => None,
    };
    Ok((model, rule, post))
}

fn element(entry: &Entry, n: usize) -> Result<GaugeElement, ParseError> {
    GaugeElement::parse_cycles(n, &entry.value).map_err(|err| entry.semantic(format!("{err} (N={n})")))
}

fn parse_topology(sections: &Sections) -> Result<Topology, ParseError> {
    let entries = sections.get(Section::Topology);
    let mut kind = None;
    let mut size = None;
    for e in entries {
        match e.key.as_str() {
            "kind" => kind = Some(e),
            "size" => size = Some(e),
            _ => return Err(e.unknown(Section::Topology)),
        }
    }
    match kind.map(|e| e.value.as_str()) {
        None | Some("ring") => {
            let Some(size_entry) = size else {
                let line = kind
                    .map(|e| e.line)
                    .or(sections.headers.get(&Section::Topology).copied())
                    .unwrap_or(1);
                return Err(ParseError {
                    line,
                    column: 1,
                    kind: ErrorKind::Semantic,
                    message: "a ring needs `size`".into(),
                });
            };
            let n: usize = size_entry.parse("an integer")?;
            Topology::ring(n).map_err(|err| size_entry.semantic(err.to_string()))
        }
        Some("line") => match size {
            Some(e) => Err(e.semantic("the line has no size")),
            None => Ok(Topology::Line),
        },
        Some(other) => Err(kind
            .unwrap()
            .semantic(format!("unknown topology `{other}`, expected ring or line"))),
    }
}

fn check_position(entry: &Entry, topology: Topology) -> Result<Position, ParseError> {
    let x = entry.position()?;
    topology.check_position(x).map_err(|err| ParseError {
        line: entry.line,
        column: entry.key_col,
        kind: ErrorKind::Semantic,
        message: err.to_string(),
    })?;
    Ok(x)
}

fn parse_cell(entry: &Entry, n: usize, x: Position) -> Result<Cell, ParseError> {
    let bad = || {
        syntax(
            entry.line,
            entry.value_col,
            format!("expected a cell `left,right`, found `{}`", entry.value),
        )
    };
    let (l, r) = entry.value.split_once(',').ok_or_else(bad)?;
    let l: u8 = l.trim().parse().map_err(|_| bad())?;
    let r: u8 = r.trim().parse().map_err(|_| bad())?;
    for v in [l, r] {
        if usize::from(v) >= n {
            return Err(entry.semantic(format!(
                "component {v} at position {x} must be below the alphabet bound N={n}"
            )));
        }
    }
    Ok(Cell::new(l, r))
}

fn parse_run(sections: &Sections, model: &Model) -> Result<RunSettings, ParseError> {
    let mut run = RunSettings {
        steps: 8,
        seed: 0,
        checks: Vec::new(),
        check_ring: if matches!(model, Model::NonAbelian { .. }) {
            2
        } else {
            3
        },
        check_steps: 3,
        trials: 100,
    };
    for e in sections.get(Section::Run) {
        match e.key.as_str() {
            "steps" => run.steps = e.parse("a non-negative integer")?,
            "seed" => run.seed = e.parse("a non-negative integer")?,
            "check-ring" => {
                run.check_ring = e.parse("an integer")?;
                if run.check_ring < 2 {
                    return Err(e.semantic("check-ring must be at least 2"));
                }
            }
            "check-steps" => run.check_steps = e.parse("a non-negative integer")?,
            "trials" => run.trials = e.parse("a non-negative integer")?,
            "checks" => {
                for name in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let check = Check::from_name(name)
                        .ok_or_else(|| e.semantic(format!("unknown check `{name}`")))?;
                    if check.is_quantum() != model.is_quantum() {
                        let kind = if model.is_quantum() {
                            "quantum"
                        } else {
                            "classical"
                        };
                        return Err(e.semantic(format!("check `{name}` does not apply to a {kind} model")));
                    }
                    if !run.checks.contains(&check) {
                        run.checks.push(check);
                    }
                }
            }
            _ => return Err(e.unknown(Section::Run)),
        }
    }
    Ok(run)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let sections = split_sections(text)?;
    let (model, rule, post) = parse_model(&sections)?;
    let topology = parse_topology(&sections)?;
    let n = model.alphabet();
    if let (Some((_, line)), Topology::Line) = (&post, topology) {
        return Err(ParseError {
            line: *line,
            column: 1,
            kind: ErrorKind::Semantic,
            message: "a uniform post-transformation needs a ring".into(),
        });
    }

    let mut matter = BTreeMap::new();
    for e in sections.get(Section::Matter) {
        let x = check_position(e, topology)?;
        let cell = parse_cell(e, n, x)?;
        if !cell.is_quiescent() {
            matter.insert(x, cell);
        }
    }

    let mut field = BTreeMap::new();
    let mut counters = BTreeMap::new();
    for e in sections.get(Section::Field) {
        let x = check_position(e, topology)?;
        match &model {
            Model::Quantum(p) => {
                let l: i64 = e.parse("an integer link counter")?;
                if l.unsigned_abs() > u64::from(p.l_max) {
                    return Err(e.semantic(format!("counter {l} exceeds lmax={}", p.l_max)));
                }
                if l != 0 {
                    counters.insert(x, l);
                }
            }
            _ => {
                let g = element(e, n)?;
                if !g.is_identity() {
                    field.insert(x, g);
                }
            }
        }
    }

    let gauge = match sections.headers.get(&Section::Gauge) {
        None => None,
        Some(&header) => {
            let mut apply = None;
            let mut sites = BTreeMap::new();
            let mut phases = BTreeMap::new();
            for e in sections.get(Section::Gauge) {
                if e.key == "apply" {
                    apply = Some(match e.value.as_str() {
                        "initial" => Apply::Initial,
                        "final" => Apply::Final,
                        "both" => Apply::Both,
                        other => {
                            return Err(e.semantic(format!(
                                "unknown schedule `{other}`, expected initial, final or both"
                            )))
                        }
                    });
                } else if model.is_quantum() {
                    let inner = e
                        .key
                        .strip_prefix("phi(")
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| e.unknown(Section::Gauge))?;
                    let probe = Entry {
                        key: inner.trim().to_string(),
                        key_col: e.key_col + 4,
                        ..e.clone()
                    };
                    let x = check_position(&probe, topology)?;
                    let phi: f64 = e.parse("a real phase")?;
                    if !phi.is_finite() {
                        return Err(e.semantic("phase must be finite"));
                    }
                    phases.insert(x, phi);
                } else {
                    if e.key.starts_with("phi(") {
                        return Err(e.unknown(Section::Gauge));
                    }
                    let x = check_position(e, topology)?;
                    let g = element(e, n)?;
                    if !g.is_identity() {
                        sites.insert(x, g);
                    }
                }
            }
            let apply = apply.ok_or_else(|| ParseError {
                line: header,
                column: 1,
                kind: ErrorKind::Semantic,
                message: "[gauge] needs `apply = initial | final | both`".into(),
            })?;
            Some(GaugeSchedule { apply, sites, phases })
        }
    };

    let run = parse_run(&sections, &model)?;
    Ok(Scenario {
        post: post.map(|(g, _)| g),
        model,
        rule,
        topology,
        matter,
        field,
        counters,
        gauge,
        run,
    })
}

/// Canonical text form; parsing it yields an equal scenario.
pub fn render_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let w = &mut out;
    // Writing to a String cannot fail.
    let _ = writeln!(w, "[model]");
    match &s.model {
        Model::Abelian => {
            let _ = writeln!(w, "kind = abelian");
        }
        Model::NonAbelian { n } => {
            let _ = writeln!(w, "kind = nonabelian\nn = {n}");
        }
        Model::Quantum(p) => {
            let _ = writeln!(
                w,
                "kind = quantum\nmass = {}\nspacing = {}\ncharge = {}\nlmax = {}",
                p.mass, p.spacing, p.charge, p.l_max
            );
        }
    }
    if !s.model.is_quantum() {
        let rule = match s.rule {
            RuleKind::Gauged => "gauged",
            RuleKind::Bare => "bare",
        };
        let _ = writeln!(w, "rule = {rule}");
        if let Some(post) = &s.post {
            let _ = writeln!(w, "post = {post}");
        }
    }
    let _ = writeln!(w, "\n[topology]");
    match s.topology {
        Topology::Ring(n) => {
            let _ = writeln!(w, "kind = ring\nsize = {n}");
        }
        Topology::Line => {
            let _ = writeln!(w, "kind = line");
        }
    }
    let _ = writeln!(w, "\n[matter]");
    for (x, c) in &s.matter {
        let _ = writeln!(w, "{x} = {},{}", c.left, c.right);
    }
    let _ = writeln!(w, "\n[field]");
    for (x, g) in &s.field {
        let _ = writeln!(w, "{x} = {g}");
    }
    for (x, l) in &s.counters {
        let _ = writeln!(w, "{x} = {l}");
    }
    if let Some(gauge) = &s.gauge {
        let _ = writeln!(w, "\n[gauge]\napply = {}", gauge.apply.name());
        for (x, g) in &gauge.sites {
            let _ = writeln!(w, "{x} = {g}");
        }
        for (x, phi) in &gauge.phases {
            let _ = writeln!(w, "phi({x}) = {phi}");
        }
    }
    let r = &s.run;
    let _ = writeln!(
        w,
        "\n[run]\nsteps = {}\nseed = {}\ncheck-ring = {}\ncheck-steps = {}\ntrials = {}",
        r.steps, r.seed, r.check_ring, r.check_steps, r.trials
    );
    if !r.checks.is_empty() {
        let names: Vec<&str> = r.checks.iter().map(|c| c.name()).collect();
        let _ = writeln!(w, "checks = {}", names.join(", "));
    }
    out
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_scenario(self))
    }
}

//! Command-line front end: argument parsing, command dispatch and output
//! formatting. Everything returns an [`Output`] so the binary stays a thin
//! wrapper.

pub mod json;

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use inner_rates::contact::vertex_contact;
use inner_rates::document::{parse, serialize};
use inner_rates::graph::{edge_lengths, laplacian_with_lengths, validate, DualGraph, Metric};
use inner_rates::invariants::{
    check_theorem_main, l_divisor, le_greuel_check, p_divisor, solve_inner_rates, InvariantBundle,
    InvariantError,
};
use inner_rates::linalg::{int, Rational};
use inner_rates::modification::{blowup_edge, blowup_smooth, ModificationError};
use inner_rates::polar::{enumerate_admissible, EnumerationOptions, PolarError};
use inner_rates::{GraphDocument, ParseError};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "inner-rates",
    version,
    about = "Inner rates and Laplacians of dual resolution graphs"
)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Edge lengths used by `laplacian` and `export-dot`.
    #[arg(long, global = true, value_enum, default_value_t = MetricArg::Skeletal)]
    pub metric: MetricArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Skeletal,
    Lcm,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Skeletal => Metric::Skeletal,
            MetricArg::Lcm => Metric::Lcm,
        }
    }
}

impl MetricArg {
    fn name(self) -> &'static str {
        match self {
            Self::Skeletal => "skeletal",
            Self::Lcm => "lcm",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate connectivity, loops, definiteness and L-nodes.
    Check { file: PathBuf },
    /// Multiplicities of a generic linear form.
    Multiplicities { file: PathBuf },
    /// Inner rates and the vector `a = m q`.
    Rates { file: PathBuf },
    /// Laplacian of the rates function against `K + 2L - P`.
    Laplacian { file: PathBuf },
    /// Polar multiplicity against `m(X) - χ(F)`.
    LeGreuel { file: PathBuf },
    /// Blow up a double point or a smooth point and print the new graph.
    #[command(group(ArgGroup::new("target").required(true).args(["edge", "vertex"])))]
    Blowup {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        edge: Option<Vec<String>>,
        #[arg(long)]
        vertex: Option<String>,
        /// Hyperplane arrows moved onto the new vertex.
        #[arg(long, default_value_t = 0, requires = "vertex")]
        transfer_l: u32,
        /// Polar arrows moved onto the new vertex.
        #[arg(long, default_value_t = 0, requires = "vertex")]
        transfer_p: u32,
    },
    /// Inner contact exponent between two vertices.
    Contact { file: PathBuf, a: String, b: String },
    /// Every admissible polar configuration (P fields of the input are ignored).
    EnumeratePolar {
        file: PathBuf,
        /// Accept rate 1 away from L-nodes.
        #[arg(long)]
        allow_rate_one: bool,
    },
    /// Graphviz rendering with multiplicities, rates and edge lengths.
    ExportDot { file: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: json::JsonError,
    },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("no edge joins `{0}` and `{1}`")]
    NoEdge(String, String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Modification(#[from] ModificationError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Graph(#[from] inner_rates::graph::GraphError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Json { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: rendered,
                    code: 2,
                }
            } else {
                Output::ok(rendered)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    match execute(cli) {
        Ok(out) => out,
        Err(e) => Output {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

/// Reads a graph in the text format, or in the JSON document format when
/// the first non-blank character is `{`.
pub fn load(path: &Path) -> Result<GraphDocument, CliError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: display.clone(),
        source,
    })?;
    if text.trim_start().starts_with('{') {
        json::read_document(&text).map_err(|source| CliError::Json {
            path: display,
            source,
        })
    } else {
        parse(&text).map_err(|source| CliError::Parse {
            path: display,
            source,
        })
    }
}

fn load_valid(path: &Path) -> Result<GraphDocument, CliError> {
    let doc = load(path)?;
    let report = validate(&doc.graph);
    if !report.is_valid() {
        return Err(CliError::Invalid(report.failures().join("; ")));
    }
    Ok(doc)
}

fn vertex_index(g: &DualGraph, id: &str) -> Result<usize, CliError> {
    g.index_of(id)
        .ok_or_else(|| CliError::UnknownVertex(id.to_string()))
}

/// `v0 1  v1 4/3  ...` in declaration order.
fn vertex_line<T: Display>(g: &DualGraph, values: &[T]) -> String {
    values
        .iter()
        .enumerate()
        .map(|(v, x)| format!("{} {x}", g.id(v)))
        .collect::<Vec<_>>()
        .join("  ")
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Check { file } => check(cli, file),
        Command::Multiplicities { file } => multiplicities(cli, file),
        Command::Rates { file } => rates(cli, file),
        Command::Laplacian { file } => laplacian_cmd(cli, file),
        Command::LeGreuel { file } => le_greuel(cli, file),
        Command::Blowup {
            file,
            edge,
            vertex,
            transfer_l,
            transfer_p,
        } => blowup(
            cli,
            file,
            edge.as_deref(),
            vertex.as_deref(),
            *transfer_l,
            *transfer_p,
        ),
        Command::Contact { file, a, b } => contact(cli, file, a, b),
        Command::EnumeratePolar {
            file,
            allow_rate_one,
        } => enumerate_polar(cli, file, *allow_rate_one),
        Command::ExportDot { file } => export_dot(cli, file),
    }
}

fn check(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let doc = load(file)?;
    let report = validate(&doc.graph);
    let stdout = if cli.json {
        render_json(&json!({
            "graph": doc.name,
            "connected": report.connected,
            "loop_free": report.loop_free,
            "negative_definite": report.negative_definite,
            "has_l_node": report.has_l_node,
            "valid": report.is_valid(),
            "failures": report.failures(),
        }))
    } else {
        let mut s = format!("graph {}\n", doc.name);
        s += &format!("connected: {}\n", yes_no(report.connected));
        s += &format!("loop-free: {}\n", yes_no(report.loop_free));
        s += &format!("negative definite: {}\n", yes_no(report.negative_definite));
        s += &format!("L-nodes: {}\n", yes_no(report.has_l_node));
        s += if report.is_valid() {
            "valid\n"
        } else {
            "invalid\n"
        };
        s
    };
    Ok(Output {
        stdout,
        stderr: String::new(),
        code: if report.is_valid() { 0 } else { 1 },
    })
}

fn multiplicities(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let m = inner_rates::invariants::solve_multiplicities(g)?;
    Ok(Output::ok(if cli.json {
        render_json(&json!({ "graph": doc.name, "m": json::per_vertex(g, &m, |x| json!(x)) }))
    } else {
        format!("{}\n", vertex_line(g, &m))
    }))
}

fn warning_strings(bundle: &InvariantBundle) -> Vec<String> {
    bundle.warnings.iter().map(ToString::to_string).collect()
}

fn rates(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let bundle = solve_inner_rates(g)?;
    let warnings = warning_strings(&bundle);
    Ok(Output::ok(if cli.json {
        render_json(&json!({
            "graph": doc.name,
            "m": json::per_vertex(g, &bundle.m, |x| json!(x)),
            "q": json::per_vertex(g, &bundle.q, json::rational),
            "a": json::per_vertex(g, &bundle.a, json::rational),
            "warnings": warnings,
        }))
    } else {
        let mut s = format!("rates: {}\n", vertex_line(g, &bundle.q));
        s += &format!("a: {}\n", vertex_line(g, &bundle.a));
        if warnings.is_empty() {
            s += "warnings: none\n";
        } else {
            for w in &warnings {
                s += &format!("warning: {w}\n");
            }
        }
        s
    }))
}

fn laplacian_cmd(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let bundle = solve_inner_rates(g)?;
    let theorem = check_theorem_main(g, &bundle)?;
    let lap = match cli.metric {
        MetricArg::Skeletal => theorem.laplacian.clone(),
        MetricArg::Lcm => {
            let lengths = edge_lengths(g, &bundle.m, Metric::Lcm)?;
            laplacian_with_lengths(g, &lengths, &bundle.rates_function())
        }
    };
    let two_l = l_divisor(g, &bundle.m).scaled(&int(2));
    let p = p_divisor(g, &bundle.m);
    let stdout = if cli.json {
        render_json(&json!({
            "graph": doc.name,
            "metric": cli.metric.name(),
            "laplacian": json::divisor(g, &lap),
            "K": json::divisor(g, &bundle.k_div),
            "2L": json::divisor(g, &two_l),
            "P": json::divisor(g, &p),
            "K+2L-P": json::divisor(g, &theorem.rhs),
            "formula": json::divisor(g, &theorem.formula),
            "theorem_holds": theorem.holds,
            "discrepancies": theorem.discrepancies,
        }))
    } else {
        let mut s = format!("metric: {}\n", cli.metric.name());
        s += &format!("laplacian: {}\n", lap.display(g));
        s += &format!("K: {}\n", bundle.k_div.display(g));
        s += &format!("2L: {}\n", two_l.display(g));
        s += &format!("P: {}\n", p.display(g));
        s += &format!("K + 2L - P: {}\n", theorem.rhs.display(g));
        s += &format!("formula: {}\n", theorem.formula.display(g));
        s += &format!(
            "theorem: {}\n",
            if theorem.holds { "holds" } else { "fails" }
        );
        for d in &theorem.discrepancies {
            s += &format!("  {d}\n");
        }
        s
    };
    Ok(Output {
        stdout,
        stderr: String::new(),
        code: if theorem.holds { 0 } else { 1 },
    })
}

fn le_greuel(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let m = inner_rates::invariants::solve_multiplicities(g)?;
    let check = le_greuel_check(g, &m);
    let stdout = if cli.json {
        render_json(&json!({
            "graph": doc.name,
            "m_X": check.m_x,
            "m_polar": check.m_polar,
            "chi_F": check.chi_f,
            "holds": check.holds,
        }))
    } else {
        format!(
            "m(X): {}\nm(polar): {}\nchi(F): {}\nbalance: {}\n",
            check.m_x,
            check.m_polar,
            check.chi_f,
            if check.holds { "holds" } else { "fails" }
        )
    };
    Ok(Output {
        stdout,
        stderr: String::new(),
        code: if check.holds { 0 } else { 1 },
    })
}

/// Multiplicities and rates of a document: its annotations when present,
/// otherwise a fresh solution.
fn solved_data(doc: &GraphDocument) -> Result<(Vec<u64>, Vec<Rational>), CliError> {
    if let (Some(m), Some(q)) = (&doc.multiplicities, &doc.rates) {
        return Ok((m.clone(), q.clone()));
    }
    let bundle = solve_inner_rates(&doc.graph)?;
    Ok((bundle.m, bundle.q))
}

fn blowup(
    cli: &Cli,
    file: &Path,
    edge: Option<&[String]>,
    vertex: Option<&str>,
    transfer_l: u32,
    transfer_p: u32,
) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let (m, q) = solved_data(&doc)?;
    let result = match (edge, vertex) {
        (Some([a, b]), _) => {
            let (ia, ib) = (vertex_index(g, a)?, vertex_index(g, b)?);
            let e = g
                .find_edge(ia, ib)
                .ok_or_else(|| CliError::NoEdge(a.clone(), b.clone()))?;
            blowup_edge(g, &m, &q, e)?
        }
        (_, Some(v)) => blowup_smooth(g, &m, &q, vertex_index(g, v)?, transfer_l, transfer_p)?,
        _ => unreachable!("clap requires exactly one blowup target"),
    };
    let out =
        GraphDocument::new(doc.name.clone(), result.graph).with_annotations(result.m, result.q);
    Ok(Output::ok(if cli.json {
        render_json(&json::document(&out))
    } else {
        serialize(&out)
    }))
}

fn contact(cli: &Cli, file: &Path, a: &str, b: &str) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let (ia, ib) = (vertex_index(g, a)?, vertex_index(g, b)?);
    let (_, q) = solved_data(&doc)?;
    let result = vertex_contact(g, &q, ia, ib);
    let path: Vec<&str> = result.witness_path.iter().map(|&v| g.id(v)).collect();
    Ok(Output::ok(if cli.json {
        render_json(&json!({
            "graph": doc.name,
            "from": a,
            "to": b,
            "exponent": json::rational(&result.exponent),
            "witness_path": path,
            "paths": result.all_paths_count,
        }))
    } else {
        format!(
            "contact: {}\nwitness: {}\npaths: {}\n",
            result.exponent,
            path.join(" "),
            result.all_paths_count
        )
    }))
}

fn enumerate_polar(cli: &Cli, file: &Path, allow_rate_one: bool) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let options = EnumerationOptions {
        strict_rates: !allow_rate_one,
    };
    let e = enumerate_admissible(g, options)?;
    Ok(Output::ok(if cli.json {
        let configs: Vec<Value> = e
            .configs
            .iter()
            .map(|c| {
                json!({
                    "p": json::per_vertex(g, &c.p, |x| json!(x)),
                    "q": json::per_vertex(g, &c.q, json::rational),
                    "a": json::per_vertex(g, &c.a, |x| json!(x)),
                })
            })
            .collect();
        render_json(&json!({
            "graph": doc.name,
            "total_polar_weight": e.total_polar_weight,
            "candidates_checked": e.candidates_checked,
            "configs": configs,
            "diagnostic": e.diagnostic,
        }))
    } else {
        let mut s = format!("total polar weight: {}\n", e.total_polar_weight);
        s += &format!("candidates checked: {}\n", e.candidates_checked);
        if let Some(d) = &e.diagnostic {
            s += &format!("diagnostic: {d}\n");
        }
        s += &format!("admissible configurations: {}\n", e.configs.len());
        for (i, c) in e.configs.iter().enumerate() {
            s += &format!("[{}] p: {}\n", i + 1, vertex_line(g, &c.p));
            s += &format!("    q: {}\n", vertex_line(g, &c.q));
        }
        s
    }))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", dot_escape(s))
}

fn export_dot(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let doc = load_valid(file)?;
    let g = &doc.graph;
    let (m, q) = solved_data(&doc)?;
    let lengths = edge_lengths(g, &m, cli.metric.into())?;
    let mut dot = format!("graph {} {{\n", dot_quote(&doc.name));
    for v in 0..g.vertex_count() {
        let id = g.id(v);
        dot += &format!(
            "  {} [label=\"{}\\nm={},q={}\"];\n",
            dot_quote(id),
            dot_escape(id),
            m[v],
            q[v]
        );
    }
    for (e, len) in g.edges().iter().zip(&lengths) {
        dot += &format!(
            "  {} -- {} [label=\"len={len}\"];\n",
            dot_quote(g.id(e.a)),
            dot_quote(g.id(e.b))
        );
    }
    dot += "}\n";
    Ok(Output::ok(if cli.json {
        render_json(&json!({ "graph": doc.name, "metric": cli.metric.name(), "dot": dot }))
    } else {
        dot
    }))
}

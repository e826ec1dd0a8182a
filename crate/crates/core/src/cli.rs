//! Text formats, argument parsing and report output for the `afmlab` binary.
//!
//! Graph files hold `n <count>` followed by `e <u> <v>` lines; model files
//! hold `q <count>` followed by `q` rows of weights; activity files hold one
//! value per line. `#` starts a comment in all three.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::bounds::{clique_bound_log, clique_bound_z2_log};
use crate::error::{invalid, Error, Result};
use crate::graph::SimpleGraph;
use crate::partition::{self, z2, z_log, ActivityMatrix};
use crate::scalar::{parse_rational, Rational};
use crate::spectral::{is_antiferromagnetic, WalkKind, WeightedModel};
use crate::verify::{self, DualFamily, ExploreConfig, SweepSummary, VerificationReport};

/// Models are symmetrised when `|M - M^T|` stays within this.
pub const MODEL_SYMMETRY_TOL: f64 = 1e-12;

/// Smallest accepted `--tolerance`.
pub const MIN_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_SEED: u64 = 0xA1E7;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn at_line(line: usize, e: Error) -> Error {
    Error::AtLine { line, source: Box::new(e) }
}

fn parse_header(line: usize, body: &str, key: &str) -> Result<usize> {
    let mut parts = body.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => {
            v.parse().map_err(|_| parse_err(line, format!("bad count `{v}`")))
        }
        _ => Err(parse_err(line, format!("expected `{key} <count>`"))),
    }
}

pub fn parse_graph_str(text: &str) -> Result<SimpleGraph> {
    let mut lines = content_lines(text);
    let (line, body) = lines.next().ok_or_else(|| parse_err(1, "missing `n <count>` line"))?;
    let n = parse_header(line, body, "n")?;
    if n == 0 {
        return Err(at_line(line, invalid("a graph needs at least one vertex")));
    }
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, body) in lines {
        let parts: Vec<&str> = body.split_whitespace().collect();
        let (u, v) = match parts.as_slice() {
            ["e", u, v] => {
                let u: usize = u.parse().map_err(|_| parse_err(line, format!("bad vertex `{u}`")))?;
                let v: usize = v.parse().map_err(|_| parse_err(line, format!("bad vertex `{v}`")))?;
                (u, v)
            }
            _ => return Err(parse_err(line, format!("expected `e <u> <v>`, got `{body}`"))),
        };
        SimpleGraph::from_edge_list(n, &[(u, v)]).map_err(|e| at_line(line, e))?;
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(at_line(line, Error::DuplicateEdge(u.min(v), u.max(v))));
        }
        edges.push((u, v));
    }
    SimpleGraph::from_edge_list(n, &edges)
}

pub fn parse_graph_file(path: &Path) -> Result<SimpleGraph> {
    parse_graph_str(&read(path)?)
}

pub fn format_graph(g: &SimpleGraph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

pub fn parse_model_str(text: &str) -> Result<WeightedModel> {
    let mut lines = content_lines(text);
    let (line, body) = lines.next().ok_or_else(|| parse_err(1, "missing `q <count>` line"))?;
    let q = parse_header(line, body, "q")?;
    let mut weights = Vec::with_capacity(q * q);
    let mut last = line;
    for _ in 0..q {
        let (line, body) = lines.next().ok_or_else(|| parse_err(last + 1, format!("expected {q} weight rows")))?;
        last = line;
        let row: Vec<f64> = body
            .split_whitespace()
            .map(|x| x.parse::<f64>().map_err(|_| parse_err(line, format!("bad weight `{x}`"))))
            .collect::<Result<_>>()?;
        if row.len() != q {
            return Err(parse_err(line, format!("expected {q} weights, got {}", row.len())));
        }
        weights.extend(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after weight rows"));
    }
    WeightedModel::with_symmetry_tolerance(q, weights, MODEL_SYMMETRY_TOL)
}

pub fn parse_model_file(path: &Path) -> Result<WeightedModel> {
    parse_model_str(&read(path)?)
}

pub fn format_model(model: &WeightedModel) -> String {
    let mut out = format!("q {}\n", model.q());
    for row in model.rows() {
        let cells: Vec<String> = row.iter().map(|w| w.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_activities_str(text: &str) -> Result<Vec<f64>> {
    content_lines(text)
        .map(|(line, body)| body.parse::<f64>().map_err(|_| parse_err(line, format!("bad activity `{body}`"))))
        .collect()
}

pub fn parse_rational_activities_str(text: &str) -> Result<Vec<Rational>> {
    content_lines(text)
        .map(|(line, body)| parse_rational(body).map_err(|e| at_line(line, e)))
        .collect()
}

pub fn format_activities(acts: &[f64]) -> String {
    acts.iter().map(|a| format!("{a}\n")).collect()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    }
    .map_err(|e| format!("bad seed `{s}`: {e}"))
}

/// Parsed command line.
#[derive(Clone, Debug, Parser)]
#[command(name = "afmlab", version, about = "Partition functions, clique lower bounds and inequality checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Pass threshold: a record passes when slack >= -tolerance (at least 1e-12).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, default_value = "0xA1E7", value_parser = parse_seed)]
    pub seed: u64,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Partition function, clique bound and occupancy of one graph.
    Eval(EvalArgs),
    /// Eigenvalues of a weight matrix and the antiferromagnetic test.
    Spectra {
        #[arg(long)]
        model: PathBuf,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Random search for graphs and models below the clique bound.
    Explore(ExploreArgs),
}

#[derive(Clone, Debug, Args)]
pub struct Activities {
    /// Activity broadcast to every vertex.
    #[arg(long, conflicts_with = "lambda_file")]
    pub lambda: Option<f64>,
    /// One activity per line.
    #[arg(long)]
    pub lambda_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub acts: Activities,
    /// Second colour activity; switches to the two-colour partition function.
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WalkArg {
    Path,
    Cycle,
}

#[derive(Clone, Debug, Subcommand)]
pub enum CheckCommand {
    ThmMain {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        acts: Activities,
    },
    Thm2spin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        alpha: f64,
    },
    ThmSemiproper {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        acts: Activities,
        #[arg(long, conflicts_with = "mu_file")]
        mu: Option<f64>,
        #[arg(long)]
        mu_file: Option<PathBuf>,
    },
    Deg2 {
        #[arg(long, value_enum)]
        kind: WalkArg,
        /// Number of edges of the path, or length of the cycle.
        #[arg(long)]
        length: usize,
        #[arg(long)]
        model: PathBuf,
    },
    WeakQ {
        #[arg(long)]
        graph: PathBuf,
        /// Number of colours when `--lambda` is broadcast.
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, conflicts_with = "acts_file")]
        lambda: Option<f64>,
        /// One file per colour; repeat the flag.
        #[arg(long)]
        acts_file: Vec<PathBuf>,
    },
    Bijection {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Exact activity broadcast to every vertex and colour, e.g. `1/3`.
        #[arg(long, conflicts_with = "lambda_file")]
        lambda: Option<String>,
        /// Exact activities, one per line, shared by all colours.
        #[arg(long)]
        lambda_file: Option<PathBuf>,
    },
    DaviesKang {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum SweepCommand {
    LemmaKey {
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        #[arg(long, default_value_t = 6)]
        delta_max: u32,
    },
    Chain {
        #[arg(long, default_value_t = 5)]
        d_max: u32,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    DualSet {
        #[arg(long, value_enum, default_value = "separate-factor")]
        family: FamilyArg,
        #[arg(long, default_value_t = 100)]
        per_case: usize,
        #[arg(long, default_value_t = 5)]
        delta_max: u32,
        #[arg(long, default_value_t = 48)]
        grid: usize,
    },
    BasicIneq {
        #[arg(long, default_value_t = 6)]
        d_max: u32,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    NegFugacity {
        #[arg(long, default_value_t = 2)]
        delta: u32,
        /// Comma-separated neighbour degrees.
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 2])]
        ds: Vec<u32>,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Tangent,
    SeparateFactor,
    GeometricMean,
}

#[derive(Clone, Debug, Args)]
pub struct ExploreArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    #[arg(long, default_value_t = 3)]
    pub qmax: usize,
    /// Allow `--qmax` above 5.
    #[arg(long)]
    pub allow_large_q: bool,
    #[arg(long, default_value_t = 10)]
    pub keep: usize,
}

/// Writes one float with 17 significant digits; non-finite values become `null`.
fn write_float(out: &mut String, x: f64) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    } else {
        out.push_str("null");
    }
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => write_float(out, n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(out, item);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Compact JSON with fixed-precision floats.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::InternalInconsistency(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v);
    Ok(out)
}

fn record_json(r: &VerificationReport) -> Result<String> {
    #[derive(Serialize)]
    struct Record<'a> {
        check: &'a str,
        lhs_log: f64,
        rhs_log: f64,
        slack: f64,
        pass: bool,
        asserted: bool,
        sub_checks: &'a [verify::SubCheck],
        witness: &'a verify::Witness,
        flags: &'a [String],
    }
    to_json_line(&Record {
        check: &r.check,
        lhs_log: r.lhs_log,
        rhs_log: r.rhs_log,
        slack: r.slack,
        pass: r.pass,
        asserted: r.asserted,
        sub_checks: &r.sub_checks,
        witness: &r.witness,
        flags: &r.flags,
    })
}

const TSV_HEADER: &str = "check\tlhs_log\trhs_log\tslack\tpass\tasserted\tflags\twitness";

fn tsv_float(x: f64) -> String {
    let mut s = String::new();
    write_float(&mut s, x);
    s
}

fn record_tsv(r: &VerificationReport) -> Result<String> {
    Ok(format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.check,
        tsv_float(r.lhs_log),
        tsv_float(r.rhs_log),
        tsv_float(r.slack),
        r.pass,
        r.asserted,
        r.flags.join(","),
        to_json_line(&r.witness)?
    ))
}

/// Collects records and decides the exit code.
struct Output {
    format: Format,
    lines: Vec<String>,
    records: usize,
    asserted: usize,
    failed: usize,
    min_slack: f64,
}

impl Output {
    fn new(format: Format) -> Self {
        let mut lines = Vec::new();
        if format == Format::Tsv {
            lines.push(TSV_HEADER.to_string());
        }
        Output { format, lines, records: 0, asserted: 0, failed: 0, min_slack: f64::INFINITY }
    }

    fn report(&mut self, r: &VerificationReport) -> Result<()> {
        self.records += 1;
        if r.asserted {
            self.asserted += 1;
            if !r.holds() {
                self.failed += 1;
            }
        }
        if !r.slack.is_nan() {
            self.min_slack = self.min_slack.min(r.slack);
        }
        let line = match self.format {
            Format::Json => record_json(r)?,
            Format::Tsv => record_tsv(r)?,
        };
        self.lines.push(line);
        Ok(())
    }

    fn sweep(&mut self, s: &SweepSummary) -> Result<()> {
        self.report(&s.worst)?;
        self.records += s.points - 1;
        if s.worst.asserted {
            self.asserted += s.points - 1;
            // the worst record was already counted once
            self.failed += s.failures - usize::from(!s.worst.holds());
        }
        let info = SweepInfo { sweep: &s.name, points: s.points, failures: s.failures };
        self.object(&info)
    }

    /// A non-report record such as an evaluation or exploration summary.
    fn object<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let line = match self.format {
            Format::Json => to_json_line(value)?,
            Format::Tsv => format!("#\t{}", to_json_line(value)?),
        };
        self.lines.push(line);
        Ok(())
    }

    fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }

    fn finish(mut self) -> Result<(String, i32)> {
        let code = self.exit_code();
        let summary = Summary {
            summary: true,
            records: self.records,
            asserted: self.asserted,
            failed: self.failed,
            min_slack: self.min_slack,
            exit_code: code,
        };
        self.object(&summary)?;
        let mut text = self.lines.join("\n");
        text.push('\n');
        Ok((text, code))
    }
}

#[derive(Serialize)]
struct SweepInfo<'a> {
    sweep: &'a str,
    points: usize,
    failures: usize,
}

#[derive(Serialize)]
struct Summary {
    summary: bool,
    records: usize,
    asserted: usize,
    failed: usize,
    min_slack: f64,
    exit_code: i32,
}

#[derive(Serialize)]
struct EvalRecord {
    command: &'static str,
    n: usize,
    edges: usize,
    max_degree: usize,
    z_log: f64,
    z: f64,
    clique_bound_log: f64,
    occupancy_fraction: Option<f64>,
    marginals: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct SpectraRecord {
    command: &'static str,
    q: usize,
    eigenvalues: Vec<f64>,
    zero_tolerance: f64,
    afm: bool,
    near_zero: bool,
}

fn activities(acts: &Activities, n: usize) -> Result<Vec<f64>> {
    match (acts.lambda, &acts.lambda_file) {
        (Some(l), None) => Ok(vec![l; n]),
        (None, Some(path)) => parse_activities_str(&read(path)?),
        _ => Err(invalid("give exactly one of --lambda and --lambda-file")),
    }
}

fn scalar_or_file(value: Option<f64>, file: &Option<PathBuf>, n: usize, name: &str) -> Result<Vec<f64>> {
    match (value, file) {
        (Some(x), None) => Ok(vec![x; n]),
        (None, Some(path)) => parse_activities_str(&read(path)?),
        _ => Err(invalid(format!("give exactly one of --{name} and --{name}-file"))),
    }
}

fn family(f: FamilyArg) -> DualFamily {
    match f {
        FamilyArg::Tangent => DualFamily::Tangent,
        FamilyArg::SeparateFactor => DualFamily::SeparateFactor,
        FamilyArg::GeometricMean => DualFamily::GeometricMean,
    }
}

fn run_check(cmd: &CheckCommand) -> Result<VerificationReport> {
    match cmd {
        CheckCommand::ThmMain { graph, acts } => {
            let g = parse_graph_file(graph)?;
            verify::check_thm_main(&g, &activities(acts, g.vertex_count())?)
        }
        CheckCommand::Thm2spin { graph, lambda, alpha } => {
            verify::check_thm_2spin(&parse_graph_file(graph)?, *lambda, *alpha)
        }
        CheckCommand::ThmSemiproper { graph, acts, mu, mu_file } => {
            let g = parse_graph_file(graph)?;
            let n = g.vertex_count();
            verify::check_thm_semiproper(&g, &activities(acts, n)?, &scalar_or_file(*mu, mu_file, n, "mu")?)
        }
        CheckCommand::Deg2 { kind, length, model } => {
            let walk = match kind {
                WalkArg::Path => WalkKind::PathEdges,
                WalkArg::Cycle => WalkKind::Cycle,
            };
            verify::check_deg2_conjecture(walk, *length, &parse_model_file(model)?)
        }
        CheckCommand::WeakQ { graph, q, lambda, acts_file } => {
            let g = parse_graph_file(graph)?;
            let n = g.vertex_count();
            let rows = match (lambda, acts_file.is_empty()) {
                (Some(l), true) => vec![vec![*l; n]; *q],
                (None, false) => acts_file.iter().map(|p| parse_activities_str(&read(p)?)).collect::<Result<_>>()?,
                _ => return Err(invalid("give exactly one of --lambda and --acts-file")),
            };
            verify::check_weak_semiproper(&g, &ActivityMatrix::new(rows)?)
        }
        CheckCommand::Bijection { graph, q, lambda, lambda_file } => {
            let g = parse_graph_file(graph)?;
            let n = g.vertex_count();
            let row = match (lambda, lambda_file) {
                (Some(l), None) => vec![parse_rational(l)?; n],
                (None, Some(path)) => parse_rational_activities_str(&read(path)?)?,
                _ => return Err(invalid("give exactly one of --lambda and --lambda-file")),
            };
            if *q < 1 {
                return Err(invalid("q must be at least 1"));
            }
            verify::check_bijection(&g, &ActivityMatrix::new(vec![row; *q])?)
        }
        CheckCommand::DaviesKang { graph, lambda } => verify::check_davies_kang(&parse_graph_file(graph)?, *lambda),
    }
}

fn run_sweep(cmd: &SweepCommand, seed: u64, tol: f64) -> Result<SweepOrReport> {
    Ok(match cmd {
        SweepCommand::LemmaKey { points, delta_max } => {
            SweepOrReport::Sweep(verify::sweep_lemma_key(*points, *delta_max, seed, tol)?)
        }
        SweepCommand::Chain { d_max, steps } => SweepOrReport::Sweep(verify::sweep_chain(*d_max, *steps, tol)?),
        SweepCommand::DualSet { family: f, per_case, delta_max, grid } => {
            SweepOrReport::Sweep(verify::sweep_dual_set(family(*f), *per_case, *delta_max, *grid, seed, tol)?)
        }
        SweepCommand::BasicIneq { d_max, steps } => SweepOrReport::Sweep(verify::sweep_basic_ineq(*d_max, *steps, tol)?),
        SweepCommand::NegFugacity { delta, ds, step } => {
            SweepOrReport::Report(verify::check_neg_fugacity(*delta, ds, *step)?)
        }
    })
}

enum SweepOrReport {
    Sweep(SweepSummary),
    Report(VerificationReport),
}

fn eval(args: &EvalArgs) -> Result<EvalRecord> {
    let g = parse_graph_file(&args.graph)?;
    let n = g.vertex_count();
    let lam = activities(&args.acts, n)?;
    let (z_log_value, bound, occupancy) = match args.mu {
        Some(mu) => {
            let mu = vec![mu; n];
            (z2(&g, &lam, &mu)?.ln(), clique_bound_z2_log(&g, &lam, &mu)?, None)
        }
        None => {
            let profile = partition::vertex_marginals(&g, &lam)?;
            (z_log(&g, &lam)?, clique_bound_log(&g, &lam)?, Some(profile))
        }
    };
    Ok(EvalRecord {
        command: "eval",
        n,
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        z_log: z_log_value,
        z: z_log_value.exp(),
        clique_bound_log: bound,
        occupancy_fraction: occupancy.as_ref().map(|p| p.occupancy_fraction),
        marginals: occupancy.map(|p| p.marginals),
    })
}

/// Executes a parsed command and returns the report stream and exit code.
pub fn run(config: &RunConfig) -> Result<(String, i32)> {
    let tol = match config.tolerance {
        Some(t) if !t.is_finite() || t < MIN_TOLERANCE => {
            return Err(invalid(format!("--tolerance {t} must be finite and >= {MIN_TOLERANCE:e}")));
        }
        t => t,
    };
    let adjust = |r: VerificationReport| match tol {
        Some(t) => r.with_tolerance(t),
        None => r,
    };
    let mut out = Output::new(config.format);
    match &config.command {
        Command::Eval(args) => out.object(&eval(args)?)?,
        Command::Spectra { model } => {
            let model = parse_model_file(model)?;
            let afm = is_antiferromagnetic(&model)?;
            out.object(&SpectraRecord {
                command: "spectra",
                q: model.q(),
                eigenvalues: afm.spectrum.eigenvalues.clone(),
                zero_tolerance: afm.spectrum.zero_tolerance,
                afm: afm.antiferromagnetic,
                near_zero: afm.near_zero,
            })?;
        }
        Command::Check(cmd) => out.report(&adjust(run_check(cmd)?))?,
        Command::Sweep(cmd) => match run_sweep(cmd, config.seed, tol.unwrap_or(verify::PASS_TOL))? {
            SweepOrReport::Sweep(s) => out.sweep(&s)?,
            SweepOrReport::Report(r) => out.report(&adjust(r))?,
        },
        Command::Explore(args) => {
            let cfg = ExploreConfig {
                trials: args.trials,
                seed: config.seed,
                n_max: args.nmax,
                q_max: args.qmax,
                allow_large_q: args.allow_large_q,
                keep: args.keep,
            };
            let summary = verify::explore_conjecture(&cfg)?;
            for w in &summary.worst {
                out.object(w)?;
            }
            out.object(&summary_without_witnesses(&summary))?;
        }
    }
    out.finish()
}

#[derive(Serialize)]
struct ExploreRecord<'a> {
    command: &'static str,
    config: &'a ExploreConfig,
    trials: u64,
    min_slack: f64,
    near_tight: u64,
    degenerate: u64,
    rejections: u64,
    zero_row_exclusions: u64,
    rejection_trials: u64,
}

fn summary_without_witnesses(s: &verify::ExplorationSummary) -> ExploreRecord<'_> {
    ExploreRecord {
        command: "explore",
        config: &s.config,
        trials: s.trials,
        min_slack: s.min_slack,
        near_tight: s.near_tight,
        degenerate: s.degenerate,
        rejections: s.rejections,
        zero_row_exclusions: s.zero_row_exclusions,
        rejection_trials: s.rejection_trials,
    }
}

/// Parses arguments, runs, and writes the stream; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version exit cleanly
            if e.exit_code() == 0 {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let _ = write!(stderr, "{}", e.render());
            return 2;
        }
    };
    match run(&config) {
        Ok((text, code)) => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

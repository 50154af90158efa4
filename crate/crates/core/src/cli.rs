//! The `tempgibbs` command line.
//!
//! Every command prints one JSON envelope holding the status, the fully
//! resolved configuration, and the result. The configuration can be fed
//! back through `tempgibbs run --config FILE` (either the bare config
//! object or a whole envelope) to reproduce a run.
//!
//! Exit codes: 0 pass, 1 fail (the report carries witnesses), 2
//! inconclusive because a cap was hit, 64 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::caps::Caps;
use crate::disorder::{beta_star, mean_kappa, sample_disorder, DisorderSpec, NormDistribution, SignMode};
use crate::error::Error;
use crate::generators;
use crate::gibbs::{
    boundary_gap, dlr_consistency_check, verify_expansion_identity, verify_lemma27, verify_lemma27_all,
    BoundaryCondition, BoundaryStrategy, Instance, LemmaVerdict, SpinModel,
};
use crate::graph::Volume;
use crate::io::{graph_hash, read_graph, to_edge_list, to_json_graph, write_atomic, NamedGraph};
use crate::temperedness::{
    check_repulsive, check_tempered, DegreeMode, GrowthFunction, PhiFunction, RepulsivenessSpec, TemperednessVerdict,
};
use crate::uniqueness::{certificate, decay_experiment, Regime};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Names the default cap profile: `desk` (default), `quick` or `large`.
pub const CAPS_ENV: &str = "TEMPGIBBS_CAPS";

/// Tolerance for the DLR and properness defects.
pub const DLR_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "tempgibbs",
    version,
    about = "Finite-volume checks for quenched Gibbs uniqueness on tempered graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Maximal animal averages of g(degree) around a root.
    CheckTempered(CheckTemperedArgs),
    /// Pairwise distance condition on high-degree vertices.
    CheckRepulsive(CheckRepulsiveArgs),
    /// Expected edge weight E[exp(4β|W|)] − 1.
    Kappa(KappaArgs),
    /// Critical inverse temperature for a given γ.
    BetaStar(BetaStarArgs),
    /// Boundary sensitivity against the path sum, exhaustively.
    VerifyLemma27(LemmaArgs),
    /// Edge-subset expansion of the magnetization difference.
    VerifyExpansion(ExpansionArgs),
    /// Consistency and properness of nested local kernels.
    DlrCheck(DlrArgs),
    /// Uniqueness certificate and tail bounds.
    Certificate(CertificateArgs),
    /// Quenched decay of the boundary gap with the radius.
    Decay(DecayArgs),
    /// Run a command described by a JSON config file.
    #[serde(skip)]
    Run(RunArgs),
}

fn d_root() -> String {
    "0".into()
}
fn d_growth() -> String {
    "log".into()
}
fn d_phi() -> String {
    "linear".into()
}
fn d_mode() -> String {
    "min".into()
}
fn d_model() -> String {
    "ising".into()
}
fn d_sign() -> String {
    "all-positive".into()
}
fn d_strategy() -> String {
    "auto".into()
}
fn d_format() -> String {
    "text".into()
}
fn d_tol() -> f64 {
    1e-9
}
fn d_samples() -> usize {
    200
}
fn d_tail() -> Vec<usize> {
    (1..=10).collect()
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateArgs {
    /// chain:N, cycle:N, grid:AxB, star:K, growing-tree:D or
    /// repulsive-tree:SPINE:D1/D2/...:NSTAR:PHI
    pub kind: String,
    /// text or json
    #[arg(long, default_value = "text")]
    #[serde(default = "d_format")]
    pub format: String,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckTemperedArgs {
    /// Edge-list path, or gen:KIND for a generated graph.
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value = "0")]
    #[serde(default = "d_root")]
    pub root: String,
    /// log or t-log-t
    #[arg(long, default_value = "log")]
    #[serde(default = "d_growth")]
    pub growth: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<usize>,
    #[arg(long)]
    #[serde(default)]
    pub gamma_target: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub max_animals: Option<u64>,
    /// Seconds.
    #[arg(long)]
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRepulsiveArgs {
    #[arg(long)]
    pub graph: String,
    /// linear[:scale] or power:exponent[:scale]
    #[arg(long, default_value = "linear")]
    #[serde(default = "d_phi")]
    pub phi: String,
    #[arg(long)]
    pub n_star: usize,
    /// min or max of the two degrees
    #[arg(long, default_value = "min")]
    #[serde(default = "d_mode")]
    pub mode: String,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaArgs {
    /// exponential:RATE, uniform:UPPER, half-normal:SCALE or constant:VALUE
    #[arg(long)]
    pub distribution: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub beta: Vec<f64>,
    /// Also report κ(β)e^γ.
    #[arg(long)]
    #[serde(default)]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaStarArgs {
    #[arg(long)]
    pub distribution: String,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1e-9)]
    #[serde(default = "d_tol")]
    pub tol: f64,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaArgs {
    #[arg(long)]
    pub graph: String,
    /// ball:CENTER:RADIUS or a comma-separated vertex list.
    #[arg(long)]
    pub volume: String,
    /// Defaults to every interior vertex.
    #[arg(long)]
    #[serde(default)]
    pub z: Option<String>,
    /// ising, three-point, potts:Q or interval:N
    #[arg(long, default_value = "ising")]
    #[serde(default = "d_model")]
    pub model: String,
    #[arg(long)]
    pub distribution: String,
    /// all-positive or rademacher
    #[arg(long, default_value = "all-positive")]
    #[serde(default = "d_sign")]
    pub sign_mode: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub beta: f64,
    /// auto, exhaustive or random:RESTARTS:SEED
    #[arg(long, default_value = "auto")]
    #[serde(default = "d_strategy")]
    pub strategy: String,
    #[arg(long)]
    #[serde(default)]
    pub max_paths: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub max_configs: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub volume: String,
    /// Defaults to the first interior vertex.
    #[arg(long)]
    #[serde(default)]
    pub z: Option<String>,
    #[arg(long, default_value = "ising")]
    #[serde(default = "d_model")]
    pub model: String,
    #[arg(long)]
    pub distribution: String,
    #[arg(long, default_value = "all-positive")]
    #[serde(default = "d_sign")]
    pub sign_mode: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub beta: f64,
    /// Spin indices on the outer boundary in increasing vertex order.
    /// Without --xi and --eta the pair maximizing the gap is used.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub xi: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub eta: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(default)]
    pub max_configs: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DlrArgs {
    #[arg(long)]
    pub graph: String,
    /// The outer volume Δ.
    #[arg(long)]
    pub volume: String,
    /// The inner volume Λ ⊆ Δ, same syntax as --volume.
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value = "ising")]
    #[serde(default = "d_model")]
    pub model: String,
    #[arg(long)]
    pub distribution: String,
    #[arg(long, default_value = "all-positive")]
    #[serde(default = "d_sign")]
    pub sign_mode: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub beta: f64,
    /// Spins on ∂⁺Δ; all zero by default.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub xi: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(default)]
    pub max_configs: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateArgs {
    /// γ directly; otherwise it is taken from a log-temperedness check of
    /// --graph around --root over --radii.
    #[arg(long)]
    #[serde(default)]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub graph: Option<String>,
    #[arg(long, default_value = "0")]
    #[serde(default = "d_root")]
    pub root: String,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub radii: Vec<usize>,
    #[arg(long)]
    pub distribution: String,
    #[arg(long)]
    pub beta: f64,
    /// Radii for the tail bounds.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
    #[serde(default = "d_tail")]
    pub tail_radii: Vec<usize>,
    #[arg(long)]
    #[serde(default)]
    pub max_animals: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub z: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<usize>,
    #[arg(long, default_value = "ising")]
    #[serde(default = "d_model")]
    pub model: String,
    #[arg(long)]
    pub distribution: String,
    #[arg(long, default_value = "all-positive")]
    #[serde(default = "d_sign")]
    pub sign_mode: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 200)]
    #[serde(default = "d_samples")]
    pub samples: usize,
    #[arg(long, default_value = "auto")]
    #[serde(default = "d_strategy")]
    pub strategy: String,
    #[arg(long)]
    #[serde(default)]
    pub max_paths: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub max_configs: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub time_limit: Option<f64>,
    /// Also write the table as CSV.
    #[arg(long)]
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

/// Default item caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapProfile {
    pub max_paths: u64,
    pub max_configs: u64,
    pub max_animals: u64,
    pub time_limit: Option<f64>,
}

impl CapProfile {
    pub fn named(name: &str) -> Result<Self, CliError> {
        match name {
            "desk" => Ok(CapProfile {
                max_paths: 10_000_000,
                max_configs: 10_000_000,
                max_animals: 10_000_000,
                time_limit: None,
            }),
            "quick" => Ok(CapProfile {
                max_paths: 100_000,
                max_configs: 100_000,
                max_animals: 100_000,
                time_limit: Some(10.0),
            }),
            "large" => Ok(CapProfile {
                max_paths: 1_000_000_000,
                max_configs: 1_000_000_000,
                max_animals: 1_000_000_000,
                time_limit: None,
            }),
            other => Err(CliError::Usage(format!(
                "{CAPS_ENV}={other:?} is not a cap profile (desk, quick, large)"
            ))),
        }
    }

    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(CAPS_ENV) {
            Ok(name) => Self::named(name.trim()),
            Err(_) => Self::named("desk"),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed configuration or input data.
    Usage(String),
    /// A cap stopped an enumeration that cannot be reported partially.
    Capped(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => CliError::Capped(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

fn field<T>(name: &str, r: crate::error::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        Error::CapExceeded { .. } => CliError::Capped(e.to_string()),
        e => CliError::Usage(format!("{name}: {e}")),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }
}

/// A finished command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    /// The JSON envelope, or the generated graph for `generate`.
    pub text: String,
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            out.status.code()
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Capped(msg)) => {
            let env = json!({"status": Status::Inconclusive, "reason": msg});
            println!("{}", serde_json::to_string_pretty(&env).expect("json"));
            EXIT_INCONCLUSIVE
        }
    }
}

/// Reads a config file holding either a command object or a whole report
/// envelope with a `config` member.
pub fn load_config(path: &Path) -> Result<Command, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Command, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let value = match value {
        Value::Object(mut m) if !m.contains_key("command") && m.contains_key("config") => {
            m.remove("config").expect("checked")
        }
        v => v,
    };
    // Dispatch on the tag by hand: going through the tagged enum would
    // buffer the fields and lose their paths in error messages.
    let mut map = match value {
        Value::Object(m) => m,
        _ => return Err(CliError::Usage("config: expected a JSON object".into())),
    };
    let tag = match map.remove("command") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(CliError::Usage("config field `command`: expected a string".into())),
        None => return Err(CliError::Usage("config field `command`: missing".into())),
    };
    let body = Value::Object(map);
    match tag.as_str() {
        "generate" => args_of(body).map(Command::Generate),
        "check-tempered" => args_of(body).map(Command::CheckTempered),
        "check-repulsive" => args_of(body).map(Command::CheckRepulsive),
        "kappa" => args_of(body).map(Command::Kappa),
        "beta-star" => args_of(body).map(Command::BetaStar),
        "verify-lemma27" => args_of(body).map(Command::VerifyLemma27),
        "verify-expansion" => args_of(body).map(Command::VerifyExpansion),
        "dlr-check" => args_of(body).map(Command::DlrCheck),
        "certificate" => args_of(body).map(Command::Certificate),
        "decay" => args_of(body).map(Command::Decay),
        other => Err(CliError::Usage(format!(
            "config field `command`: unknown command {other:?}"
        ))),
    }
}

fn args_of<T: serde::de::DeserializeOwned>(body: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(body).map_err(|e| {
        let path = e.path().to_string();
        CliError::Usage(format!("config field `{path}`: {}", e.into_inner()))
    })
}

pub fn execute(command: Command) -> Result<Outcome, CliError> {
    let profile = CapProfile::from_env()?;
    match command {
        Command::Run(r) => match load_config(&r.config)? {
            Command::Run(_) => Err(CliError::Usage("config: nested run".into())),
            c => execute(c),
        },
        Command::Generate(a) => generate(a),
        Command::CheckTempered(a) => check_tempered_cmd(a, &profile),
        Command::CheckRepulsive(a) => check_repulsive_cmd(a),
        Command::Kappa(a) => kappa_cmd(a),
        Command::BetaStar(a) => beta_star_cmd(a),
        Command::VerifyLemma27(a) => lemma_cmd(a, &profile),
        Command::VerifyExpansion(a) => expansion_cmd(a, &profile),
        Command::DlrCheck(a) => dlr_cmd(a, &profile),
        Command::Certificate(a) => certificate_cmd(a, &profile),
        Command::Decay(a) => decay_cmd(a, &profile),
    }
}

/// `gen:KIND` or a file path.
pub fn load_graph(source: &str) -> Result<NamedGraph, CliError> {
    match source.strip_prefix("gen:") {
        Some(kind) => Ok(NamedGraph::numeric(field("graph", generators::generate(kind))?)),
        None => field("graph", read_graph(Path::new(source))),
    }
}

fn vertex_list(g: &NamedGraph, name: &str, s: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["all"] => Ok((0..g.graph.vertex_count()).collect()),
        ["ball", c, r] => {
            let center = field(name, g.id(c))?;
            let r: usize = r
                .parse()
                .map_err(|_| CliError::Usage(format!("{name}: bad radius {r:?}")))?;
            field(name, g.graph.ball_vertices(center, r))
        }
        _ => s.split(',').map(|v| field(name, g.id(v.trim()))).collect(),
    }
}

fn strategy(s: &str) -> Result<BoundaryStrategy, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "strategy: expected auto, exhaustive or random:RESTARTS:SEED, got {s:?}"
        ))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["auto"] => Ok(BoundaryStrategy::Auto),
        ["exhaustive"] => Ok(BoundaryStrategy::Exhaustive),
        ["random", r, seed] => Ok(BoundaryStrategy::RandomAscent {
            restarts: r.parse().map_err(|_| bad())?,
            seed: seed.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn caps(max_items: u64, time_limit: Option<f64>) -> Result<Caps, CliError> {
    let mut c = Caps::items(max_items);
    if let Some(t) = time_limit {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Usage(format!("time_limit: {t} is not a duration")));
        }
        c = c.with_time_limit(Duration::from_secs_f64(t));
    }
    Ok(c)
}

fn envelope(status: Status, config: &Command, graph: Option<&NamedGraph>, result: Value) -> Value {
    let mut env = json!({
        "status": status,
        "config": config,
        "result": result,
    });
    if let Some(g) = graph {
        env["graph_hash"] = json!(graph_hash(g));
        if !g.is_identity() {
            env["vertex_names"] = json!(g.names);
        }
    }
    env
}

fn finish(
    status: Status,
    config: Command,
    graph: Option<&NamedGraph>,
    result: Value,
    output: Option<&PathBuf>,
) -> Result<Outcome, CliError> {
    let env = envelope(status, &config, graph, result);
    let mut text = serde_json::to_string_pretty(&env).expect("json");
    text.push('\n');
    if let Some(p) = output {
        field("output", write_atomic(p, text.as_bytes()))?;
    }
    Ok(Outcome { status, text })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

struct Stochastic {
    model: SpinModel,
    spec: DisorderSpec,
}

fn stochastic(model: &str, distribution: &str, sign_mode: &str, seed: u64) -> Result<Stochastic, CliError> {
    Ok(Stochastic {
        model: field("model", SpinModel::parse(model))?,
        spec: DisorderSpec {
            distribution: field("distribution", NormDistribution::parse(distribution))?,
            sign_mode: field("sign_mode", SignMode::parse(sign_mode))?,
            seed,
        },
    })
}

fn generate(a: GenerateArgs) -> Result<Outcome, CliError> {
    let g = NamedGraph::numeric(field("kind", generators::generate(&a.kind))?);
    let text = match a.format.as_str() {
        "text" => to_edge_list(&g),
        "json" => to_json_graph(&g) + "\n",
        f => return Err(CliError::Usage(format!("format: expected text or json, got {f:?}"))),
    };
    match &a.output {
        Some(p) => {
            field("output", write_atomic(p, text.as_bytes()))?;
            Ok(Outcome {
                status: Status::Pass,
                text: String::new(),
            })
        }
        None => Ok(Outcome {
            status: Status::Pass,
            text,
        }),
    }
}

fn check_tempered_cmd(mut a: CheckTemperedArgs, p: &CapProfile) -> Result<Outcome, CliError> {
    a.max_animals.get_or_insert(p.max_animals);
    a.time_limit = a.time_limit.or(p.time_limit);
    let g = load_graph(&a.graph)?;
    let root = field("root", g.id(&a.root))?;
    let gf = field("growth", GrowthFunction::parse(&a.growth))?;
    let c = caps(a.max_animals.unwrap_or(p.max_animals), a.time_limit)?;
    let report = field(
        "radii",
        check_tempered(&g.graph, &gf, root, &a.radii, a.gamma_target, &c),
    )?;
    let status = match report.verdict {
        TemperednessVerdict::CertifiedOnWindow => Status::Pass,
        TemperednessVerdict::Failed => Status::Fail,
        TemperednessVerdict::Inconclusive => Status::Inconclusive,
    };
    let out = a.output.clone();
    finish(
        status,
        Command::CheckTempered(a),
        Some(&g),
        to_value(&report),
        out.as_ref(),
    )
}

fn check_repulsive_cmd(a: CheckRepulsiveArgs) -> Result<Outcome, CliError> {
    let g = load_graph(&a.graph)?;
    let phi = field("phi", PhiFunction::parse(&a.phi))?;
    let mode = match a.mode.as_str() {
        "min" => DegreeMode::Min,
        "max" => DegreeMode::Max,
        m => return Err(CliError::Usage(format!("mode: expected min or max, got {m:?}"))),
    };
    let spec = field("n_star", RepulsivenessSpec::new(phi, a.n_star, mode))?;
    let report = check_repulsive(&g.graph, &spec);
    let status = if report.holds { Status::Pass } else { Status::Fail };
    let out = a.output.clone();
    finish(
        status,
        Command::CheckRepulsive(a),
        Some(&g),
        to_value(&report),
        out.as_ref(),
    )
}

fn kappa_cmd(a: KappaArgs) -> Result<Outcome, CliError> {
    let d = field("distribution", NormDistribution::parse(&a.distribution))?;
    let rows = a
        .beta
        .iter()
        .map(|&b| {
            let k = field("beta", mean_kappa(&d, b))?;
            let mut row = json!({"beta": b, "kappa": k});
            if let Some(gamma) = a.gamma {
                row["product"] = json!(k * gamma.exp());
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let out = a.output.clone();
    let result = json!({"distribution": d, "rows": rows});
    finish(Status::Pass, Command::Kappa(a), None, result, out.as_ref())
}

fn beta_star_cmd(a: BetaStarArgs) -> Result<Outcome, CliError> {
    let d = field("distribution", NormDistribution::parse(&a.distribution))?;
    let b = field("gamma", beta_star(&d, a.gamma, a.tol))?;
    let out = a.output.clone();
    let result = json!({"distribution": d, "beta_star": b.beta, "detail": b});
    finish(Status::Pass, Command::BetaStar(a), None, result, out.as_ref())
}

fn lemma_cmd(mut a: LemmaArgs, p: &CapProfile) -> Result<Outcome, CliError> {
    a.max_paths.get_or_insert(p.max_paths);
    a.max_configs.get_or_insert(p.max_configs);
    a.time_limit = a.time_limit.or(p.time_limit);
    let g = load_graph(&a.graph)?;
    let vol: Volume = field("volume", g.graph.boundaries(&vertex_list(&g, "volume", &a.volume)?))?;
    let st = stochastic(&a.model, &a.distribution, &a.sign_mode, a.seed)?;
    let strat = strategy(&a.strategy)?;
    // One cap covers both the configuration sums and the path enumeration.
    let c = caps(a.max_paths.min(a.max_configs).unwrap_or(p.max_configs), a.time_limit)?;
    let w = sample_disorder(&g.graph, &st.spec);
    let inst = Instance {
        graph: &g.graph,
        volume: &vol,
        model: &st.model,
        disorder: &w,
        beta: a.beta,
    };
    let reports = match &a.z {
        Some(z) => vec![field(
            "z",
            verify_lemma27(&inst, g.id(z).map_err(CliError::from)?, strat, &c),
        )?],
        None => field("volume", verify_lemma27_all(&inst, strat, &c))?,
    };
    let status = if reports.iter().any(|r| r.verdict == LemmaVerdict::Violated) {
        Status::Fail
    } else if reports.iter().all(|r| r.holds()) {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    let out = a.output.clone();
    let result = json!({"seed": a.seed, "distribution": st.spec, "reports": reports});
    finish(status, Command::VerifyLemma27(a), Some(&g), result, out.as_ref())
}

fn expansion_cmd(mut a: ExpansionArgs, p: &CapProfile) -> Result<Outcome, CliError> {
    a.max_configs.get_or_insert(p.max_configs);
    a.time_limit = a.time_limit.or(p.time_limit);
    let g = load_graph(&a.graph)?;
    let vol: Volume = field("volume", g.graph.boundaries(&vertex_list(&g, "volume", &a.volume)?))?;
    let st = stochastic(&a.model, &a.distribution, &a.sign_mode, a.seed)?;
    let c = caps(a.max_configs.unwrap_or(p.max_configs), a.time_limit)?;
    let w = sample_disorder(&g.graph, &st.spec);
    let inst = Instance {
        graph: &g.graph,
        volume: &vol,
        model: &st.model,
        disorder: &w,
        beta: a.beta,
    };
    let z = match &a.z {
        Some(z) => field("z", g.id(z))?,
        None => *vol
            .interior
            .first()
            .ok_or(CliError::Usage("volume: empty interior".into()))?,
    };
    let (xi, eta) = match (&a.xi, &a.eta) {
        (Some(x), Some(e)) => (
            field("xi", BoundaryCondition::from_outer(&vol, x))?,
            field("eta", BoundaryCondition::from_outer(&vol, e))?,
        ),
        (None, None) => {
            let gap = field("volume", boundary_gap(&inst, z, BoundaryStrategy::Auto, &c))?;
            (gap.argmax, gap.argmin)
        }
        _ => return Err(CliError::Usage("xi, eta: give both or neither".into())),
    };
    let report = field("volume", verify_expansion_identity(&inst, z, &xi, &eta, &c))?;
    let status = if report.holds() { Status::Pass } else { Status::Fail };
    let out = a.output.clone();
    let result = json!({"seed": a.seed, "distribution": st.spec, "xi": xi, "eta": eta, "report": report});
    finish(status, Command::VerifyExpansion(a), Some(&g), result, out.as_ref())
}

fn dlr_cmd(mut a: DlrArgs, p: &CapProfile) -> Result<Outcome, CliError> {
    a.max_configs.get_or_insert(p.max_configs);
    a.time_limit = a.time_limit.or(p.time_limit);
    let g = load_graph(&a.graph)?;
    let vol: Volume = field("volume", g.graph.boundaries(&vertex_list(&g, "volume", &a.volume)?))?;
    let lambda = vertex_list(&g, "lambda", &a.lambda)?;
    let st = stochastic(&a.model, &a.distribution, &a.sign_mode, a.seed)?;
    let c = caps(a.max_configs.unwrap_or(p.max_configs), a.time_limit)?;
    let w = sample_disorder(&g.graph, &st.spec);
    let inst = Instance {
        graph: &g.graph,
        volume: &vol,
        model: &st.model,
        disorder: &w,
        beta: a.beta,
    };
    let xi = match &a.xi {
        Some(x) => field("xi", BoundaryCondition::from_outer(&vol, x))?,
        None => BoundaryCondition::uniform(&vol, 0),
    };
    let report = field("lambda", dlr_consistency_check(&inst, &lambda, &xi, &c))?;
    let status = if report.max_defect <= DLR_TOL && report.max_properness_defect <= DLR_TOL {
        Status::Pass
    } else {
        Status::Fail
    };
    let out = a.output.clone();
    let result = json!({"seed": a.seed, "distribution": st.spec, "tolerance": DLR_TOL, "report": report});
    finish(status, Command::DlrCheck(a), Some(&g), result, out.as_ref())
}

fn certificate_cmd(mut a: CertificateArgs, p: &CapProfile) -> Result<Outcome, CliError> {
    let d = field("distribution", NormDistribution::parse(&a.distribution))?;
    let mut graph = None;
    let (gamma, source, complete) = match (a.gamma, &a.graph) {
        (Some(gamma), _) => (gamma, json!("given"), true),
        (None, Some(src)) => {
            a.max_animals.get_or_insert(p.max_animals);
            a.time_limit = a.time_limit.or(p.time_limit);
            let g = load_graph(src)?;
            let root = field("root", g.id(&a.root))?;
            let c = caps(a.max_animals.unwrap_or(p.max_animals), a.time_limit)?;
            let t = field(
                "radii",
                check_tempered(&g.graph, &GrowthFunction::Log, root, &a.radii, None, &c),
            )?;
            let complete = t.verdict == TemperednessVerdict::CertifiedOnWindow;
            graph = Some(g);
            (t.gamma, to_value(&t), complete)
        }
        (None, None) => return Err(CliError::Usage("gamma: give --gamma or --graph with --radii".into())),
    };
    let cert = field("beta", certificate(gamma, &d, a.beta, &a.tail_radii))?;
    let status = match (cert.verdict, complete) {
        (Regime::OutsideRegime, _) => Status::Fail,
        (Regime::Certified, true) => Status::Pass,
        (Regime::Certified, false) => Status::Inconclusive,
    };
    let out = a.output.clone();
    let result = json!({"gamma_source": source, "certificate": cert});
    finish(status, Command::Certificate(a), graph.as_ref(), result, out.as_ref())
}

fn decay_cmd(mut a: DecayArgs, p: &CapProfile) -> Result<Outcome, CliError> {
    a.max_paths.get_or_insert(p.max_paths);
    a.max_configs.get_or_insert(p.max_configs);
    a.time_limit = a.time_limit.or(p.time_limit);
    let g = load_graph(&a.graph)?;
    let z = field("z", g.id(&a.z))?;
    let st = stochastic(&a.model, &a.distribution, &a.sign_mode, a.seed)?;
    let strat = strategy(&a.strategy)?;
    let c = caps(a.max_paths.min(a.max_configs).unwrap_or(p.max_configs), a.time_limit)?;
    let table = field(
        "radii",
        decay_experiment(
            &g.graph, z, &a.radii, &st.model, &st.spec, a.beta, a.gamma, a.samples, strat, &c,
        ),
    )?;
    if let Some(path) = &a.csv {
        field("csv", write_atomic(path, table.to_csv().as_bytes()))?;
    }
    let status = if table.rows.iter().any(|r| r.within_bound == Some(false)) {
        Status::Fail
    } else if table.consistent() && table.dropped.is_empty() {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    let out = a.output.clone();
    let result = json!({
        "seed": a.seed,
        "distribution": st.spec,
        "strictly_decreasing": table.strictly_decreasing(),
        "table": table,
    });
    finish(status, Command::Decay(a), Some(&g), result, out.as_ref())
}

// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Results go to stdout or `--out-dir`, diagnostics
//! and run manifests to stderr. Exit codes: 0 success, 2 input or validation
//! error, 3 numeric failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coverage::{self, StoppingConfig};
use crate::estimators::{self, CaptureSample};
use crate::graphsim::{self, ChurnConfig};
use crate::ranksim::{self, TruncatedRanking};
use crate::records::{self, ExportFormat};
use crate::suites::{self, Scenario};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "recapture", version, about = "Capture-recapture literature estimation and ranking similarity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a population size from capture counts.
    Estimate {
        #[command(subcommand)]
        method: EstimateCmd,
    },
    /// Coverage series, stopping points and keyword class for two exports.
    Coverage(CoverageArgs),
    /// Compare two rankings.
    Similarity(SimilarityArgs),
    /// Reverse / random-permutation / half-shared ranking scenarios.
    SpecialCases(SpecialCasesArgs),
    /// Churn a preferential-attachment network and compare centrality rankings.
    Simulate(SimulateArgs),
}

#[derive(Debug, Subcommand)]
pub enum EstimateCmd {
    Petersen {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    Schnabel {
        /// CSV with one capture per row, ids separated by commas.
        #[arg(long, conflicts_with = "counts", required_unless_present = "counts")]
        sets: Option<PathBuf>,
        /// CSV with header `caught,recaptured,marked_before`.
        #[arg(long)]
        counts: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// csv, ris or bibtex; inferred from the extension when omitted.
    #[arg(long)]
    pub first_format: Option<String>,
    #[arg(long)]
    pub second_format: Option<String>,
    #[arg(long, default_value_t = coverage::DEFAULT_MAX_N)]
    pub max_n: usize,
    #[arg(long, default_value_t = coverage::DEFAULT_WINDOW)]
    pub window: usize,
    /// Absolute prominence threshold; defaults to 5% of the range of C.
    #[arg(long)]
    pub prominence: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Ranking file with one id per line.
    #[arg(required_unless_present = "csv")]
    pub first: Option<PathBuf>,
    #[arg(required_unless_present = "csv")]
    pub second: Option<PathBuf>,
    /// CSV with a header and one ranking per column (first two columns used).
    #[arg(long, conflicts_with_all = ["first", "second"])]
    pub csv: Option<PathBuf>,
    /// Write the `j,R` overlap curve here.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpecialCasesArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run the reference setup: n = 1000, 1000 trials.
    #[arg(long)]
    pub paper_suite: bool,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub initial_n: Option<usize>,
    #[arg(long)]
    pub attach_m: Option<usize>,
    #[arg(long)]
    pub churn_mean: Option<f64>,
    #[arg(long)]
    pub churn_std: Option<f64>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Failure carrying an exit code and a machine-readable error code.
#[derive(Debug)]
pub struct CliError {
    pub exit: i32,
    pub code: String,
    pub message: String,
}

impl CliError {
    fn input(code: &str, message: impl Into<String>) -> Self {
        Self {
            exit: EXIT_INPUT,
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "code": self.code, "message": self.message },
        })
    }
}

macro_rules! input_error_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::input(e.code(), e.to_string())
            }
        }
    )*};
}

input_error_from!(
    estimators::EstimateError,
    records::RecordsError,
    coverage::CoverageError,
    ranksim::RankError
);

impl From<graphsim::GraphError> for CliError {
    fn from(e: graphsim::GraphError) -> Self {
        let exit = match e {
            graphsim::GraphError::NotConverged { .. } => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        CliError {
            exit,
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

/// Reproducibility record emitted with every run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub input_files: Vec<String>,
    pub seed: Option<u64>,
    pub timestamp: String,
}

impl RunManifest {
    fn new(subcommand: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            input_files: Vec::new(),
            seed: None,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    fn input(mut self, path: &Path) -> Self {
        self.input_files.push(path.display().to_string());
        self
    }

    /// Writes to `path` when given, otherwise one JSON line on stderr.
    fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        match path {
            Some(p) => write_file(p, &text),
            None => {
                eprintln!("{}", serde_json::to_string(self).expect("manifest serializes"));
                Ok(())
            }
        }
    }
}

/// Output of a successful run: the stdout payload.
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::input("Io", format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, content).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Parses arguments and runs the command, printing results and errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return exit;
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.exit
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Estimate { method } => cmd_estimate(method),
        Command::Coverage(args) => cmd_coverage(args),
        Command::Similarity(args) => cmd_similarity(args),
        Command::SpecialCases(args) => cmd_special_cases(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn ok(stdout: String) -> Result<Outcome, CliError> {
    Ok(Outcome {
        stdout,
        exit: EXIT_OK,
    })
}

fn estimate_json(est: &estimators::PopulationEstimate, inputs: Value) -> String {
    pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "method": est.method.to_string(),
        "point": est.point,
        "stddev": est.stddev,
        "inputs": inputs,
    }))
}

pub fn cmd_estimate(method: EstimateCmd) -> Result<Outcome, CliError> {
    match method {
        EstimateCmd::Petersen { n1, n2, r, manifest } => {
            let est = estimators::petersen_estimate(n1, n2, r)?;
            RunManifest::new("estimate petersen")
                .param("n1", n1)
                .param("n2", n2)
                .param("r", r)
                .emit(manifest.as_deref())?;
            ok(estimate_json(&est, json!({ "n1": n1, "n2": n2, "r": r })))
        }
        EstimateCmd::Schnabel {
            sets,
            counts,
            manifest,
        } => {
            let (samples, path) = match (sets, counts) {
                (Some(path), _) => {
                    let captures = read_capture_sets(&path)?;
                    (estimators::samples_from_capture_sets(&captures), path)
                }
                (None, Some(path)) => (read_capture_counts(&path)?, path),
                (None, None) => return Err(CliError::input("Usage", "either --sets or --counts is required")),
            };
            let est = estimators::schnabel_estimate(&samples)?;
            RunManifest::new("estimate schnabel").input(&path).emit(manifest.as_deref())?;
            let inputs: Vec<Value> = samples
                .iter()
                .map(|s| json!({ "caught": s.caught, "recaptured": s.recaptured, "marked_before": s.marked_before }))
                .collect();
            ok(estimate_json(&est, json!({ "samples": inputs })))
        }
    }
}

fn read_capture_sets(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::input("ParseError", format!("{}: not UTF-8", path.display())))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|line| {
            line.split(',')
                .map(str::trim)
                .filter(|id| !id.is_empty())
                .map(String::from)
                .collect()
        })
        .collect())
}

fn read_capture_counts(path: &Path) -> Result<Vec<CaptureSample>, CliError> {
    let bytes = read_file(path)?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| CliError::input("ParseError", format!("{}: {e}", path.display())))?;
        let field = |j: usize| -> Result<u64, CliError> {
            row.get(j).and_then(|v| v.trim().parse().ok()).ok_or_else(|| {
                CliError::input(
                    "ParseError",
                    format!("{}: record {}: expected caught,recaptured,marked_before", path.display(), i + 1),
                )
            })
        };
        out.push(CaptureSample::new(field(0)?, field(1)?, field(2)?));
    }
    Ok(out)
}

fn infer_format(path: &Path, explicit: Option<&str>) -> Result<ExportFormat, CliError> {
    let name = match explicit {
        Some(f) => f.to_string(),
        None => path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("")
            .to_string(),
    };
    name.parse::<ExportFormat>().map_err(|e| {
        CliError::input(e.code(), format!("{}: {e}", path.display()))
    })
}

fn load_export(path: &Path, format: Option<&str>) -> Result<records::RankedList, CliError> {
    let format = infer_format(path, format)?;
    let bytes = read_file(path)?;
    let label = path.display().to_string();
    records::parse_export(&bytes, format, &label)
        .map_err(|e| CliError::input(e.code(), format!("{label}: {e}")))
}

pub fn cmd_coverage(args: CoverageArgs) -> Result<Outcome, CliError> {
    let first = load_export(&args.first, args.first_format.as_deref())?;
    let second = load_export(&args.second, args.second_format.as_deref())?;
    let series = coverage::build_series(&first, &second, args.max_n)?;
    let config = StoppingConfig {
        window: args.window,
        min_prominence: args.prominence,
    };
    let class = coverage::classify_keyword_with(&series, &config);
    let stops = if args.window < series.max_n {
        coverage::stopping_points(&series, config.window, config.prominence_for(&series))?
    } else {
        Vec::new()
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "class": class.class.to_string(),
        "rationale": class.rationale,
        "t_growth_exponent": class.t_growth_exponent,
        "stopping_points": stops,
        "max_n": series.max_n,
        "window": config.window,
        "min_prominence": config.prominence_for(&series),
    });
    if let Some(dir) = &args.out_dir {
        write_file(&dir.join("series.csv"), &series.to_csv())?;
        let mut stops_csv = String::from("n,kind,c_value,prominence\n");
        for p in &stops {
            stops_csv.push_str(&format!("{},{:?},{},{}\n", p.n, p.kind, p.c_value, p.prominence));
        }
        write_file(&dir.join("stopping_points.csv"), &stops_csv)?;
        write_file(&dir.join("classification.json"), &pretty(&report))?;
        RunManifest::new("coverage")
            .input(&args.first)
            .input(&args.second)
            .param("max_n", args.max_n)
            .param("window", args.window)
            .param("prominence", config.prominence_for(&series))
            .emit(Some(&dir.join("manifest.json")))?;
    } else {
        RunManifest::new("coverage")
            .input(&args.first)
            .input(&args.second)
            .param("max_n", args.max_n)
            .emit(None)?;
    }
    ok(pretty(&report))
}

fn read_ranking_file(path: &Path) -> Result<TruncatedRanking<String>, CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::input("ParseError", format!("{}: not UTF-8", path.display())))?;
    let ids: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect();
    TruncatedRanking::new(ids).map_err(|e| CliError::input(e.code(), format!("{}: {e}", path.display())))
}

fn read_ranking_columns(path: &Path) -> Result<(TruncatedRanking<String>, TruncatedRanking<String>), CliError> {
    let bytes = read_file(path)?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(bytes.as_slice());
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for row in reader.records() {
        let row = row.map_err(|e| CliError::input("ParseError", format!("{}: {e}", path.display())))?;
        for (col, dest) in [(0, &mut a), (1, &mut b)] {
            if let Some(v) = row.get(col).map(str::trim).filter(|v| !v.is_empty()) {
                dest.push(v.to_string());
            }
        }
    }
    let wrap = |ids| {
        TruncatedRanking::new(ids).map_err(|e: ranksim::RankError| {
            CliError::input(e.code(), format!("{}: {e}", path.display()))
        })
    };
    Ok((wrap(a)?, wrap(b)?))
}

pub fn cmd_similarity(args: SimilarityArgs) -> Result<Outcome, CliError> {
    let mut manifest = RunManifest::new("similarity");
    let (q1, q2) = match (&args.csv, &args.first, &args.second) {
        (Some(csv), _, _) => {
            manifest = manifest.input(csv);
            read_ranking_columns(csv)?
        }
        (None, Some(a), Some(b)) => {
            manifest = manifest.input(a).input(b);
            (read_ranking_file(a)?, read_ranking_file(b)?)
        }
        _ => return Err(CliError::input("Usage", "two ranking files or --csv are required")),
    };
    let report = ranksim::compare(&q1, &q2)?;
    if let Some(path) = &args.curve {
        write_file(path, &ranksim::overlap_curve(&q1, &q2)?.to_csv())?;
    }
    manifest.emit(args.manifest.as_deref())?;
    ok(pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "s": report.s,
        "kendall": report.kendall,
        "kendall_undefined": report.kendall_undefined,
        "overlap": report.overlap,
        "n": report.n,
    })))
}

pub fn cmd_special_cases(args: SpecialCasesArgs) -> Result<Outcome, CliError> {
    let (n, trials) = if args.paper_suite { (1000, 1000) } else { (args.n, args.trials) };
    if n < 2 || n % 2 != 0 {
        return Err(CliError::input("InvalidArgument", format!("--n must be even and at least 2, got {n}")));
    }
    if trials < 2 {
        return Err(CliError::input("InvalidArgument", "--trials must be at least 2"));
    }
    let mut scenarios = serde_json::Map::new();
    for scenario in Scenario::ALL {
        let runs = if scenario == Scenario::Reverse { 1 } else { trials };
        let reports = suites::run_trials(scenario, n, runs, args.seed, args.threads);
        let value = if scenario == Scenario::Reverse {
            json!({ "s": reports[0].s, "kendall": reports[0].kendall, "overlap": reports[0].overlap })
        } else {
            serde_json::to_value(suites::summarize(scenario, &reports)).expect("summary serializes")
        };
        scenarios.insert(scenario.name().to_string(), value);
    }
    RunManifest {
        seed: Some(args.seed),
        ..RunManifest::new("special-cases")
    }
    .param("n", n)
    .param("trials", trials)
    .param("threads", args.threads)
    .emit(args.manifest.as_deref())?;
    ok(pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "trials": trials,
        "seed": args.seed,
        "scenarios": scenarios,
    })))
}

/// Parses flat `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        out.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(out)
}

fn apply_config(config: &mut ChurnConfig, entries: &BTreeMap<String, String>) -> Result<(), CliError> {
    fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
        v.parse()
            .map_err(|_| CliError::input("InvalidConfig", format!("{key}: cannot parse {v:?}")))
    }
    for (key, v) in entries {
        match key.as_str() {
            "seed" => config.seed = parse(key, v)?,
            "initial_n" => config.initial_n = parse(key, v)?,
            "attach_m" => config.attach_m = parse(key, v)?,
            "churn_mean" => config.churn_mean = parse(key, v)?,
            "churn_std" => config.churn_std = parse(key, v)?,
            "top_k" => config.top_k = parse(key, v)?,
            "iterations" => config.iterations = parse(key, v)?,
            "tol" => config.tol = parse(key, v)?,
            "max_iter" => config.max_iter = parse(key, v)?,
            other => return Err(CliError::input("InvalidConfig", format!("unknown key {other:?}"))),
        }
    }
    Ok(())
}

pub fn cmd_simulate(args: SimulateArgs) -> Result<Outcome, CliError> {
    let mut config = ChurnConfig::default();
    let mut manifest = RunManifest::new("simulate");
    let mut seed_given = args.seed.is_some();
    if let Some(path) = &args.config {
        let text = String::from_utf8(read_file(path)?)
            .map_err(|_| CliError::input("InvalidConfig", format!("{}: not UTF-8", path.display())))?;
        let entries = parse_config(&text).map_err(|m| CliError::input("InvalidConfig", format!("{}: {m}", path.display())))?;
        seed_given |= entries.contains_key("seed");
        apply_config(&mut config, &entries)?;
        manifest = manifest.input(path);
    }
    if !seed_given {
        return Err(CliError::input("MissingSeed", "--seed (or seed in --config) is required"));
    }
    macro_rules! override_field {
        ($($f:ident),*) => {$( if let Some(v) = args.$f { config.$f = v; } )*};
    }
    override_field!(seed, initial_n, attach_m, churn_mean, churn_std, top_k, iterations, tol, max_iter);
    config.validate()?;

    let output = graphsim::run_experiment(&config)?;
    let dir = &args.out_dir;
    write_file(&dir.join("records.csv"), &output.records_csv())?;
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "summary": output.summary,
    });
    write_file(&dir.join("summary.json"), &pretty(&summary))?;
    manifest.seed = Some(config.seed);
    manifest = manifest
        .param("initial_n", config.initial_n)
        .param("attach_m", config.attach_m)
        .param("churn_mean", config.churn_mean)
        .param("churn_std", config.churn_std)
        .param("top_k", config.top_k)
        .param("iterations", config.iterations)
        .param("tol", config.tol)
        .param("max_iter", config.max_iter);
    manifest.emit(Some(&dir.join("manifest.json")))?;

    let skipped = output.summary.skipped_not_converged;
    if skipped * 100 > config.iterations {
        return Err(CliError {
            exit: EXIT_NUMERIC,
            code: "NotConverged".into(),
            message: format!("centrality failed to converge on {skipped} of {} steps", config.iterations),
        });
    }
    ok(pretty(&summary))
}

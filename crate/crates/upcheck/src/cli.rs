//! Batch command-line surface: dataset generation, training, dual-domain
//! explanation, violation checking of native or ingested attribution pairs,
//! per-(group, method) summary tables, response probing, bin ablation, and
//! plot emission.
//!
//! File conventions: sample-granular files are JSON lines with a first-line
//! `{"config": …}` echo; tabular summaries and grids are CSV with a
//! `#`-prefixed config echo. Nothing embeds absolute paths or timestamps, so
//! reruns with the same seeds produce byte-identical files.
//!
//! Exit status: 0 success, 1 runtime failure (I/O, training divergence,
//! errored records), 2 usage or configuration error.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as FmtWrite;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::attrib::{explain_pair, AttribError, ExplainConfig, Method};
use crate::probe::{amp_freq_response, ProbeConfig, ProbeError, ResponseGrid};
use crate::spectral::{ablate_bins, SpectralError};
use crate::synthgen::{
    generate_dataset, read_dataset, write_dataset, LabeledSample, SampleGroup, SynthConfig,
    SynthDataset, SynthError,
};
use crate::tinymodel::{
    evaluate_group, forward, load_params, save_params, train, ModelError, ModelHandle, TrainConfig,
};
use crate::updetect::{
    batch_detect, detect_violation, AttributionPair, BatchSummary, DetectError, SampleOutcome,
    ScanMode, SpectrumLayout,
};

/// One line of a pair file: a sample's two attribution vectors plus free-form
/// tags (method, model, dataset). Externally produced attributions use the
/// same shape, possibly with a full-length frequency vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFileRecord {
    pub id: String,
    pub time: Vec<f64>,
    pub freq: Vec<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

/// Error-marker line interleaved with records in pair and report files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ErrorMarker {
    id: String,
    error: String,
}

/// One (group, method) cell of the batch summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub method: String,
    pub samples: usize,
    pub errors: usize,
    /// Percentage of successfully checked pairs that violate the bound.
    pub violation_pct: f64,
    pub mean_target_logit: f64,
    pub std_target_logit: f64,
}

/// Batch results, one row per (group, method).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    /// CSV rendering with a `#`-prefixed config echo comment.
    pub fn to_csv(&self, echo: &serde_json::Value) -> String {
        let mut out = String::new();
        writeln!(out, "# config: {echo}").expect("string write");
        out.push_str("group,method,samples,errors,violation_pct,mean_target_logit,std_target_logit\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{:.2},{:.4},{:.4}",
                r.group,
                r.method,
                r.samples,
                r.errors,
                r.violation_pct,
                r.mean_target_logit,
                r.std_target_logit
            )
            .expect("string write");
        }
        out
    }
}

/// CLI failure carrying its exit status class.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration: exit status 2.
    Usage(String),
    /// Runtime failure (I/O, training, degenerate data): exit status 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Config { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InvalidLayerSizes { .. }
            | ModelError::Config { .. }
            | ModelError::TaskMismatch(_)
            | ModelError::BadTarget { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<AttribError> for CliError {
    fn from(e: AttribError) -> Self {
        match e {
            AttribError::Config { .. } | AttribError::UnknownMethod { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<ProbeError> for CliError {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Config { .. } => CliError::Usage(e.to_string()),
            ProbeError::Model(m) => m.into(),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<DetectError> for CliError {
    fn from(e: DetectError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "upcheck",
    version,
    about = "Detect uncertainty-principle violations between time- and frequency-domain attributions",
    max_term_width = 100
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic shapelet/frequency dataset (JSON lines).
    Synth(SynthArgs),
    /// Train the fully-connected classifier and report per-group metrics.
    Train(TrainArgs),
    /// Produce attribution pairs (time + frequency) for dataset samples.
    Explain(ExplainArgs),
    /// Check a pair file for uncertainty-principle violations.
    Check(CheckArgs),
    /// Explain and check every (validation group, method) combination.
    Batch(BatchArgs),
    /// Map model response over an amplitude × frequency tone grid.
    Probe(ProbeArgs),
    /// Zero out frequency bins of a series and resynthesize it.
    Ablate(AblateArgs),
    /// Render a pair file or response grid as an SVG.
    Plot(PlotArgs),
}

fn parse_mode(s: &str) -> Result<ScanMode, String> {
    ScanMode::from_str(s)
}

fn parse_layout(s: &str) -> Result<SpectrumLayout, String> {
    SpectrumLayout::from_str(s)
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Dataset config JSON; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output dataset path (JSON lines).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Dataset file produced by `synth`.
    #[arg(long)]
    dataset: PathBuf,
    /// Training config JSON; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output model parameter file.
    #[arg(long = "model-out")]
    model_out: PathBuf,
    /// Also write the metrics JSON here (always printed to stdout).
    #[arg(long = "metrics-out")]
    metrics_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    /// Trained model parameter file.
    #[arg(long)]
    model: PathBuf,
    /// Dataset file the model was trained on.
    #[arg(long)]
    dataset: PathBuf,
    /// Comma-separated method names (e.g. saliency,lime-agg100).
    #[arg(long)]
    method: String,
    /// Attribution config JSON; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample subset: val | both | time-only | freq-only | train | all.
    #[arg(long, default_value = "val")]
    group: String,
    /// Explain at most this many samples per method.
    #[arg(long)]
    limit: Option<usize>,
    /// Output pair file (JSON lines).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Pair file to check (native or ingested).
    #[arg(long)]
    pairs: PathBuf,
    /// Witness scan mode.
    #[arg(long, default_value = "first-found", value_parser = parse_mode)]
    mode: ScanMode,
    /// Frequency vector interpretation.
    #[arg(long = "spectrum-layout", default_value = "half", value_parser = parse_layout)]
    spectrum_layout: SpectrumLayout,
    /// Report output path (JSON lines); console summary either way.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BatchArgs {
    /// Trained model parameter file.
    #[arg(long)]
    model: PathBuf,
    /// Dataset file with the three validation groups.
    #[arg(long)]
    dataset: PathBuf,
    /// Comma-separated method names.
    #[arg(
        long,
        default_value = "saliency,input-x-gradient,integrated-gradients,occlusion,lime,lime-agg"
    )]
    method: String,
    /// Attribution config JSON; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Witness scan mode.
    #[arg(long, default_value = "first-found", value_parser = parse_mode)]
    mode: ScanMode,
    /// Frequency vector interpretation.
    #[arg(long = "spectrum-layout", default_value = "half", value_parser = parse_layout)]
    spectrum_layout: SpectrumLayout,
    /// Directory for pair files, reports, and the summary table.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    /// Trained model parameter file.
    #[arg(long)]
    model: PathBuf,
    /// Probe config JSON; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; a .csv extension selects CSV, anything else JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AblateArgs {
    /// Optional model: print target logits before and after ablation.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Series JSON: either a bare array or {"values": […]}.
    #[arg(long)]
    series: PathBuf,
    /// Comma-separated bin indices to zero out.
    #[arg(long)]
    bins: String,
    /// Output series JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Pair file (JSON lines) or response grid (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

/// Entry point used by the binary: parse, dispatch, map errors to the exit
/// contract.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Train(args) => cmd_train(args),
        Command::Explain(args) => cmd_explain(args),
        Command::Check(args) => cmd_check(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Probe(args) => cmd_probe(args),
        Command::Ablate(args) => cmd_ablate(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Runtime(format!("reading {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Runtime(format!("creating {}: {e}", dir.display())))?;
        }
    }
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))
}

fn basename(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn parse_methods(spec: &str) -> Result<Vec<Method>, CliError> {
    let mut methods = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        methods.push(Method::from_str(name).map_err(CliError::from)?);
    }
    if methods.is_empty() {
        return Err(CliError::Usage("no attribution methods given".into()));
    }
    Ok(methods)
}

/// Resolves the method tag written into records and file names; aggregation
/// picks up the configured run count (e.g. "lime-agg100").
fn method_label(method: Method, cfg: &ExplainConfig) -> String {
    match method {
        Method::Saliency => "saliency".into(),
        Method::InputXGradient => "input-x-gradient".into(),
        Method::IntegratedGradients => "integrated-gradients".into(),
        Method::Occlusion => "occlusion".into(),
        Method::Lime => "lime".into(),
        Method::LimeAggregate(runs) => format!("lime-agg{}", runs.unwrap_or(cfg.lime.runs)),
    }
}

fn select_samples<'a>(
    ds: &'a SynthDataset,
    group: &str,
) -> Result<Vec<&'a LabeledSample>, CliError> {
    let picked: Vec<&LabeledSample> = match group {
        "both" => ds.val_both.iter().collect(),
        "time-only" => ds.val_time.iter().collect(),
        "freq-only" => ds.val_freq.iter().collect(),
        "train" => ds.train.iter().collect(),
        "val" => ds
            .val_both
            .iter()
            .chain(ds.val_time.iter())
            .chain(ds.val_freq.iter())
            .collect(),
        "all" => ds.all_samples().collect(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown group {other:?}; expected val, both, time-only, freq-only, train, or all"
            )))
        }
    };
    Ok(picked)
}

fn check_model_matches(handle: &ModelHandle, ds: &SynthDataset) -> Result<(), CliError> {
    let model_n = handle.params.input_len();
    if model_n != ds.config.length {
        return Err(CliError::Usage(format!(
            "model expects input length {model_n} but the dataset has length {}",
            ds.config.length
        )));
    }
    let classes = ds.config.classes();
    let outputs = handle.params.output_len();
    if outputs != classes {
        return Err(CliError::Usage(format!(
            "model has {outputs} outputs but the dataset has {classes} classes"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// synth / train

fn cmd_synth(args: SynthArgs) -> Result<u8, CliError> {
    let mut cfg: SynthConfig = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let ds = generate_dataset(&cfg)?;
    write_dataset(&ds, &args.out).map_err(CliError::from)?;
    println!(
        "wrote {}: train {} | val both {} | val time-only {} | val freq-only {}",
        basename(&args.out),
        ds.train.len(),
        ds.val_both.len(),
        ds.val_time.len(),
        ds.val_freq.len()
    );
    Ok(0)
}

fn cmd_train(args: TrainArgs) -> Result<u8, CliError> {
    let ds = read_dataset(&args.dataset).map_err(CliError::from)?;
    let mut cfg: TrainConfig = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let (params, metrics) = train(&ds, &cfg)?;
    save_params(&params, &args.model_out)?;
    let json = serde_json::to_string(&metrics)
        .map_err(|e| CliError::Runtime(format!("serializing metrics: {e}")))?;
    if let Some(path) = &args.metrics_out {
        write_text(path, &format!("{json}\n"))?;
    }
    println!("{json}");
    Ok(0)
}

// ---------------------------------------------------------------------------
// explain

/// Explains every sample with one method. Returns the emitted lines (records
/// and error markers in input order), the successfully produced pairs, and
/// the error count.
fn explain_group(
    handle: &ModelHandle,
    samples: &[&LabeledSample],
    method: Method,
    cfg: &ExplainConfig,
    lines: &mut Vec<String>,
    pairs: &mut Vec<AttributionPair>,
) -> Result<usize, CliError> {
    let label = method_label(method, cfg);
    let mut errors = 0;
    for sample in samples {
        match explain_pair(handle, &sample.values, &sample.id, sample.label, method, cfg) {
            Ok(pair) => {
                let mut meta = BTreeMap::new();
                meta.insert("method".to_string(), label.clone());
                meta.insert("group".to_string(), group_name(sample.group).to_string());
                meta.insert("target".to_string(), sample.label.to_string());
                let record = PairFileRecord {
                    id: sample.id.clone(),
                    time: pair.time_scores.clone(),
                    freq: pair.freq_scores.clone(),
                    meta,
                };
                lines.push(serde_json::to_string(&record).expect("record serializes"));
                pairs.push(pair);
            }
            Err(e @ AttribError::Degenerate { .. }) => {
                errors += 1;
                let marker = ErrorMarker {
                    id: sample.id.clone(),
                    error: e.to_string(),
                };
                lines.push(serde_json::to_string(&marker).expect("marker serializes"));
            }
            Err(other) => return Err(other.into()),
        }
    }
    Ok(errors)
}

fn group_name(group: SampleGroup) -> &'static str {
    match group {
        SampleGroup::Both => "both",
        SampleGroup::TimeOnly => "time-only",
        SampleGroup::FreqOnly => "freq-only",
    }
}

fn pair_file_echo(
    methods: &[String],
    group: &str,
    model: &Path,
    dataset: &Path,
    cfg: &ExplainConfig,
) -> serde_json::Value {
    serde_json::json!({
        "config": {
            "methods": methods,
            "group": group,
            "model": basename(model),
            "dataset": basename(dataset),
            "explain": cfg,
        }
    })
}

fn cmd_explain(args: ExplainArgs) -> Result<u8, CliError> {
    let params = load_params(&args.model)?;
    let handle = ModelHandle::time(params);
    let ds = read_dataset(&args.dataset).map_err(CliError::from)?;
    check_model_matches(&handle, &ds)?;
    let cfg: ExplainConfig = load_config(args.config.as_deref())?;
    let methods = parse_methods(&args.method)?;

    let mut samples = select_samples(&ds, &args.group)?;
    if let Some(limit) = args.limit {
        samples.truncate(limit);
    }
    if samples.is_empty() {
        return Err(CliError::Usage(format!(
            "group {:?} selected no samples",
            args.group
        )));
    }

    let labels: Vec<String> = methods.iter().map(|m| method_label(*m, &cfg)).collect();
    let mut lines = vec![
        pair_file_echo(&labels, &args.group, &args.model, &args.dataset, &cfg).to_string(),
    ];
    let mut pairs = Vec::new();
    let mut errors = 0;
    for &method in &methods {
        errors += explain_group(&handle, &samples, method, &cfg, &mut lines, &mut pairs)?;
    }
    write_text(&args.out, &(lines.join("\n") + "\n"))?;
    println!(
        "wrote {} records ({errors} errored) to {}",
        pairs.len(),
        basename(&args.out)
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// check

#[derive(Debug)]
struct CheckedFile {
    outcomes: Vec<SampleOutcome>,
    summary: BatchSummary,
}

fn check_pair_lines(
    content: &str,
    mode: ScanMode,
    layout: SpectrumLayout,
) -> Result<CheckedFile, CliError> {
    let mut outcomes = Vec::new();
    let mut summary = BatchSummary {
        total: 0,
        checked: 0,
        violated: 0,
        errored: 0,
    };
    for (lineno, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if outcomes.is_empty() && summary.total == 0 {
            if let Ok(value) = serde_json::from_str::<serde_json::Value>(line) {
                if let Some(obj) = value.as_object() {
                    if obj.len() == 1 && obj.contains_key("config") {
                        continue; // header echo
                    }
                }
            }
        }
        summary.total += 1;
        let outcome = match serde_json::from_str::<PairFileRecord>(line) {
            Ok(record) => {
                let pair = AttributionPair {
                    sample_id: record.id,
                    time_scores: record.time,
                    freq_scores: record.freq,
                };
                match detect_violation(&pair, mode, layout) {
                    Ok(report) => {
                        summary.checked += 1;
                        if report.violated {
                            summary.violated += 1;
                        }
                        SampleOutcome::Report(report)
                    }
                    Err(e) => {
                        summary.errored += 1;
                        SampleOutcome::Errored {
                            sample_id: pair.sample_id,
                            error: e.to_string(),
                        }
                    }
                }
            }
            Err(record_err) => {
                summary.errored += 1;
                match serde_json::from_str::<ErrorMarker>(line) {
                    Ok(marker) => SampleOutcome::Errored {
                        sample_id: marker.id,
                        error: marker.error,
                    },
                    Err(_) => SampleOutcome::Errored {
                        sample_id: format!("line-{}", lineno + 1),
                        error: format!("malformed record: {record_err}"),
                    },
                }
            }
        };
        outcomes.push(outcome);
    }
    if summary.total == 0 {
        return Err(CliError::Usage("pair file contains no records".into()));
    }
    Ok(CheckedFile { outcomes, summary })
}

fn render_report(
    checked: &CheckedFile,
    mode: ScanMode,
    layout: SpectrumLayout,
    source: &Path,
) -> String {
    let mut lines = vec![serde_json::json!({
        "config": {
            "mode": mode,
            "spectrum_layout": layout,
            "source": basename(source),
        }
    })
    .to_string()];
    for outcome in &checked.outcomes {
        lines.push(serde_json::to_string(outcome).expect("outcome serializes"));
    }
    lines.push(
        serde_json::json!({ "summary": checked.summary }).to_string(),
    );
    lines.join("\n") + "\n"
}

fn violation_pct(summary: &BatchSummary) -> f64 {
    summary.fraction().map_or(0.0, |f| 100.0 * f)
}

fn cmd_check(args: CheckArgs) -> Result<u8, CliError> {
    let content = fs::read_to_string(&args.pairs)
        .map_err(|e| CliError::Runtime(format!("reading {}: {e}", args.pairs.display())))?;
    let checked = check_pair_lines(&content, args.mode, args.spectrum_layout)?;
    if let Some(out) = &args.out {
        write_text(out, &render_report(&checked, args.mode, args.spectrum_layout, &args.pairs))?;
    }
    let s = checked.summary;
    println!(
        "violated {}/{} ({:.2}%)",
        s.violated,
        s.checked,
        violation_pct(&s)
    );
    if s.errored > 0 {
        println!("errored {} of {} records", s.errored, s.total);
        return Ok(1);
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// batch

fn cmd_batch(args: BatchArgs) -> Result<u8, CliError> {
    let params = load_params(&args.model)?;
    let handle = ModelHandle::time(params);
    let ds = read_dataset(&args.dataset).map_err(CliError::from)?;
    check_model_matches(&handle, &ds)?;
    let cfg: ExplainConfig = load_config(args.config.as_deref())?;
    let methods = parse_methods(&args.method)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", args.out_dir.display())))?;

    let groups: [(&str, &Vec<LabeledSample>); 3] = [
        ("both", &ds.val_both),
        ("time-only", &ds.val_time),
        ("freq-only", &ds.val_freq),
    ];
    let mut table = SummaryTable { rows: Vec::new() };
    for (gname, samples) in groups {
        let eval = evaluate_group(&handle.params, samples)?;
        let refs: Vec<&LabeledSample> = samples.iter().collect();
        for &method in &methods {
            let label = method_label(method, &cfg);
            let mut lines = vec![pair_file_echo(
                std::slice::from_ref(&label),
                gname,
                &args.model,
                &args.dataset,
                &cfg,
            )
            .to_string()];
            let mut pairs = Vec::new();
            let explain_errors =
                explain_group(&handle, &refs, method, &cfg, &mut lines, &mut pairs)?;
            let pairs_path = args.out_dir.join(format!("pairs-{gname}-{label}.jsonl"));
            write_text(&pairs_path, &(lines.join("\n") + "\n"))?;

            let (outcomes, summary) = if pairs.is_empty() {
                (
                    Vec::new(),
                    BatchSummary {
                        total: 0,
                        checked: 0,
                        violated: 0,
                        errored: 0,
                    },
                )
            } else {
                let report = batch_detect(&pairs, args.mode, args.spectrum_layout)?;
                (report.outcomes, report.summary)
            };
            let checked = CheckedFile { outcomes, summary };
            let report_path = args.out_dir.join(format!("report-{gname}-{label}.jsonl"));
            write_text(
                &report_path,
                &render_report(&checked, args.mode, args.spectrum_layout, &pairs_path),
            )?;

            table.rows.push(SummaryRow {
                group: gname.to_string(),
                method: label,
                samples: samples.len(),
                errors: explain_errors + checked.summary.errored,
                violation_pct: violation_pct(&checked.summary),
                mean_target_logit: eval.mean_target_logit,
                std_target_logit: eval.std_target_logit,
            });
        }
    }

    let labels: Vec<String> = methods.iter().map(|m| method_label(*m, &cfg)).collect();
    let echo = serde_json::json!({
        "methods": labels,
        "mode": args.mode,
        "spectrum_layout": args.spectrum_layout,
        "model": basename(&args.model),
        "dataset": basename(&args.dataset),
        "explain": cfg,
    });
    write_text(&args.out_dir.join("summary.csv"), &table.to_csv(&echo))?;
    let json = serde_json::json!({ "config": echo, "rows": table.rows });
    write_text(&args.out_dir.join("summary.json"), &(json.to_string() + "\n"))?;

    println!(
        "{:<10} {:<22} {:>8} {:>7} {:>14} {:>22}",
        "group", "method", "samples", "errors", "violation_pct", "mean_target_logit"
    );
    for r in &table.rows {
        println!(
            "{:<10} {:<22} {:>8} {:>7} {:>14.2} {:>15.4} ± {:.4}",
            r.group, r.method, r.samples, r.errors, r.violation_pct, r.mean_target_logit,
            r.std_target_logit
        );
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// probe

fn cmd_probe(args: ProbeArgs) -> Result<u8, CliError> {
    let params = load_params(&args.model)?;
    let handle = ModelHandle::time(params);
    let mut cfg: ProbeConfig = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let grid = amp_freq_response(&handle, &cfg)?;
    let is_csv = args
        .out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        write_text(&args.out, &grid.to_csv())?;
    } else {
        let json = serde_json::to_string(&grid)
            .map_err(|e| CliError::Runtime(format!("serializing grid: {e}")))?;
        write_text(&args.out, &(json + "\n"))?;
    }
    println!(
        "probed {} amplitudes × {} bins into {}",
        cfg.amplitudes.len(),
        cfg.freq_bins.len(),
        basename(&args.out)
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// ablate

fn read_series(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("series {}: {e}", path.display())))?;
    let array = match &value {
        serde_json::Value::Array(_) => &value,
        serde_json::Value::Object(obj) => obj.get("values").ok_or_else(|| {
            CliError::Usage(format!(
                "series {} has no \"values\" array",
                path.display()
            ))
        })?,
        _ => {
            return Err(CliError::Usage(format!(
                "series {} is neither an array nor an object",
                path.display()
            )))
        }
    };
    serde_json::from_value(array.clone())
        .map_err(|e| CliError::Usage(format!("series {}: {e}", path.display())))
}

fn parse_bins(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad bin index {s:?}")))
        })
        .collect()
}

fn cmd_ablate(args: AblateArgs) -> Result<u8, CliError> {
    let series = read_series(&args.series)?;
    let bins = parse_bins(&args.bins)?;
    let max = series.len() / 2;
    if let Some(bad) = bins.iter().find(|b| **b > max) {
        return Err(CliError::Usage(format!(
            "bin {bad} exceeds the top bin {max} for length {}",
            series.len()
        )));
    }
    let ablated = ablate_bins(&series, &bins)?;
    if let Some(model_path) = &args.model {
        let params = load_params(model_path)?;
        let handle = ModelHandle::time(params);
        let before = forward(&handle, &series)?.outputs;
        let after = forward(&handle, &ablated)?.outputs;
        println!("logits before: {before:?}");
        println!("logits after:  {after:?}");
    }
    let json = serde_json::json!({
        "config": { "bins": bins, "source": basename(&args.series) },
        "values": ablated,
    });
    write_text(&args.out, &(json.to_string() + "\n"))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// plot

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// XML comments must not contain "--"; JSON echoes occasionally would (e.g.
/// in string values), so break the pair.
fn comment_safe(s: &str) -> String {
    s.replace("--", "- -")
}

struct Panel {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

impl Panel {
    fn map_x(&self, i: usize, len: usize) -> f64 {
        if len <= 1 {
            self.x + self.w / 2.0
        } else {
            self.x + self.w * i as f64 / (len - 1) as f64
        }
    }

    fn map_y(&self, v: f64, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            self.y + self.h / 2.0
        } else {
            self.y + self.h * (hi - v) / (hi - lo)
        }
    }
}

fn score_range(scores: &[f64]) -> (f64, f64) {
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

fn panel_frame(svg: &mut String, p: &Panel, title: &str, x_label: &str, y_label: &str) {
    writeln!(
        svg,
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#888\"/>",
        p.x, p.y, p.w, p.h
    )
    .expect("string write");
    writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" font-family=\"sans-serif\">{}</text>",
        p.x,
        p.y - 8.0,
        escape_xml(title)
    )
    .expect("string write");
    writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>",
        p.x + p.w / 2.0,
        p.y + p.h + 28.0,
        escape_xml(x_label)
    )
    .expect("string write");
    writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>",
        p.x - 40.0,
        p.y + p.h / 2.0,
        p.x - 40.0,
        p.y + p.h / 2.0,
        escape_xml(y_label)
    )
    .expect("string write");
}

fn axis_extremes(svg: &mut String, p: &Panel, lo: f64, hi: f64) {
    for (v, y) in [(hi, p.y + 12.0), (lo, p.y + p.h - 2.0)] {
        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">{v:.3}</text>",
            p.x - 4.0,
            y
        )
        .expect("string write");
    }
}

fn pair_svg(record: &PairFileRecord, echo: Option<&str>) -> String {
    let width = 800.0;
    let height = 560.0;
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
    .expect("string write");
    if let Some(echo) = echo {
        writeln!(svg, "<!-- config: {} -->", comment_safe(echo)).expect("string write");
    }
    writeln!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>").expect("string write");
    let method = record
        .meta
        .get("method")
        .map(|m| format!(" ({m})"))
        .unwrap_or_default();
    writeln!(
        svg,
        "<text x=\"20\" y=\"26\" font-size=\"16\" font-family=\"sans-serif\">sample {}{}</text>",
        escape_xml(&record.id),
        escape_xml(&method)
    )
    .expect("string write");

    let top = Panel {
        x: 70.0,
        y: 60.0,
        w: 700.0,
        h: 180.0,
    };
    panel_frame(&mut svg, &top, "time-domain attribution", "time index", "score");
    let (lo, hi) = score_range(&record.time);
    axis_extremes(&mut svg, &top, lo, hi);
    let points: Vec<String> = record
        .time
        .iter()
        .enumerate()
        .map(|(i, v)| {
            format!(
                "{:.2},{:.2}",
                top.map_x(i, record.time.len()),
                top.map_y(*v, lo, hi)
            )
        })
        .collect();
    writeln!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"rgb(31,119,180)\" stroke-width=\"1.5\"/>",
        points.join(" ")
    )
    .expect("string write");

    let bottom = Panel {
        x: 70.0,
        y: 320.0,
        w: 700.0,
        h: 180.0,
    };
    panel_frame(
        &mut svg,
        &bottom,
        "frequency-domain attribution",
        "frequency bin",
        "score",
    );
    let (lo, hi) = score_range(&record.freq);
    axis_extremes(&mut svg, &bottom, lo, hi);
    let baseline = bottom.map_y(0.0_f64.clamp(lo, hi), lo, hi);
    for (i, v) in record.freq.iter().enumerate() {
        let x = bottom.map_x(i, record.freq.len());
        let y = bottom.map_y(*v, lo, hi);
        writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{baseline:.2}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"rgb(214,39,40)\" stroke-width=\"2\"/>"
        )
        .expect("string write");
    }
    svg.push_str("</svg>\n");
    svg
}

fn heat_color(t: f64) -> (u8, u8, u8) {
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round().clamp(0.0, 255.0) as u8;
    let t = t.clamp(0.0, 1.0);
    if t < 0.5 {
        let s = t * 2.0;
        (lerp(59.0, 255.0, s), lerp(76.0, 255.0, s), lerp(192.0, 255.0, s))
    } else {
        let s = t * 2.0 - 1.0;
        (lerp(255.0, 180.0, s), lerp(255.0, 4.0, s), lerp(255.0, 38.0, s))
    }
}

fn grid_svg(grid: &ResponseGrid) -> String {
    let bins = &grid.config.freq_bins;
    let amps = &grid.config.amplitudes;
    let cell_w = 64.0;
    let cell_h = 36.0;
    let x0 = 110.0;
    let y0 = 60.0;
    let width = x0 + cell_w * bins.len() as f64 + 30.0;
    let height = y0 + cell_h * amps.len() as f64 + 70.0;
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    )
    .expect("string write");
    let echo = serde_json::to_string(&grid.config).expect("config serializes");
    writeln!(svg, "<!-- config: {} -->", comment_safe(&echo)).expect("string write");
    writeln!(svg, "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>").expect("string write");
    writeln!(
        svg,
        "<text x=\"20\" y=\"28\" font-size=\"16\" font-family=\"sans-serif\">mean target logit over tone grid</text>"
    )
    .expect("string write");

    let flat: Vec<f64> = grid.mean.iter().flatten().copied().collect();
    let lo = flat.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = flat.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (ai, row) in grid.mean.iter().enumerate() {
        for (bi, v) in row.iter().enumerate() {
            let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
            let (r, g, b) = heat_color(t);
            let x = x0 + cell_w * bi as f64;
            let y = y0 + cell_h * ai as f64;
            writeln!(
                svg,
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell_w:.1}\" height=\"{cell_h:.1}\" fill=\"rgb({r},{g},{b})\" stroke=\"#ddd\"><title>bin {}, amplitude {}: {v:.4} ± {:.4}</title></rect>",
                bins[bi], amps[ai], grid.std[ai][bi]
            )
            .expect("string write");
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"middle\">{v:.2}</text>",
                x + cell_w / 2.0,
                y + cell_h / 2.0 + 3.0
            )
            .expect("string write");
        }
    }
    for (bi, bin) in bins.iter().enumerate() {
        writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">{bin}</text>",
            x0 + cell_w * (bi as f64 + 0.5),
            y0 + cell_h * amps.len() as f64 + 18.0
        )
        .expect("string write");
    }
    for (ai, amp) in amps.iter().enumerate() {
        writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">{amp}</text>",
            x0 - 8.0,
            y0 + cell_h * (ai as f64 + 0.5) + 4.0
        )
        .expect("string write");
    }
    writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">frequency bin</text>",
        x0 + cell_w * bins.len() as f64 / 2.0,
        y0 + cell_h * amps.len() as f64 + 44.0
    )
    .expect("string write");
    writeln!(
        svg,
        "<text x=\"24\" y=\"{:.1}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 24 {:.1})\">amplitude</text>",
        y0 + cell_h * amps.len() as f64 / 2.0,
        y0 + cell_h * amps.len() as f64 / 2.0
    )
    .expect("string write");
    svg.push_str("</svg>\n");
    svg
}

/// What a plot input turned out to be.
enum PlotKind {
    Grid(Box<ResponseGrid>),
    Pair {
        record: Box<PairFileRecord>,
        echo: Option<String>,
    },
}

fn classify_plot_input(content: &str) -> Result<PlotKind, CliError> {
    if content.trim().is_empty() {
        return Err(CliError::Usage("input file is empty".into()));
    }
    if let Ok(grid) = serde_json::from_str::<ResponseGrid>(content) {
        return Ok(PlotKind::Grid(Box::new(grid)));
    }
    let mut echo = None;
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if echo.is_none() {
            if let Ok(value) = serde_json::from_str::<serde_json::Value>(line) {
                if let Some(obj) = value.as_object() {
                    if obj.len() == 1 && obj.contains_key("config") {
                        echo = Some(obj["config"].to_string());
                        continue;
                    }
                }
            }
        }
        if let Ok(record) = serde_json::from_str::<PairFileRecord>(line) {
            return Ok(PlotKind::Pair {
                record: Box::new(record),
                echo,
            });
        }
    }
    Err(CliError::Usage(
        "unrecognized input: expected a response grid JSON or a pair file with at least one record"
            .into(),
    ))
}

fn cmd_plot(args: PlotArgs) -> Result<u8, CliError> {
    let content = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Runtime(format!("reading {}: {e}", args.input.display())))?;
    let svg = match classify_plot_input(&content)? {
        PlotKind::Grid(grid) => grid_svg(&grid),
        PlotKind::Pair { record, echo } => pair_svg(&record, echo.as_deref()),
    };
    write_text(&args.out, &svg)?;
    println!("wrote {}", basename(&args.out));
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_labels_resolve_aggregation_runs() {
        let cfg = ExplainConfig::default();
        assert_eq!(method_label(Method::Saliency, &cfg), "saliency");
        assert_eq!(
            method_label(Method::LimeAggregate(Some(7)), &cfg),
            "lime-agg7"
        );
        // The default run count comes from the config (100).
        assert_eq!(
            method_label(Method::LimeAggregate(None), &cfg),
            format!("lime-agg{}", cfg.lime.runs)
        );
    }

    #[test]
    fn method_lists_parse_and_unknown_names_point_at_ingestion() {
        let methods = parse_methods(" saliency, ixg ,lime-agg5").unwrap();
        assert_eq!(methods.len(), 3);
        assert_eq!(methods[2], Method::LimeAggregate(Some(5)));
        match parse_methods("deeplift") {
            Err(CliError::Usage(msg)) => {
                assert!(msg.contains("deeplift"));
                assert!(msg.contains("check"), "no ingestion hint in: {msg}");
            }
            other => panic!("unexpected: {other:?}"),
        }
        assert!(matches!(parse_methods(" ,, "), Err(CliError::Usage(_))));
    }

    #[test]
    fn check_processes_markers_and_malformed_lines_in_order() {
        let content = concat!(
            "{\"config\":{\"methods\":[\"saliency\"]}}\n",
            "{\"id\":\"a\",\"time\":[0,0,1,0],\"freq\":[0.5,0.5,0.5]}\n",
            "{\"id\":\"b\",\"error\":\"degenerate upstream\"}\n",
            "not json at all\n",
            "{\"id\":\"c\",\"time\":[0,0,1,0],\"freq\":[1,0,0]}\n",
        );
        let checked =
            check_pair_lines(content, ScanMode::FirstFound, SpectrumLayout::Half).unwrap();
        assert_eq!(checked.summary.total, 4);
        assert_eq!(checked.summary.checked, 2);
        assert_eq!(checked.summary.errored, 2);
        assert_eq!(checked.outcomes.len(), 4);
        assert_eq!(checked.outcomes[0].sample_id(), "a");
        assert_eq!(checked.outcomes[1].sample_id(), "b");
        assert_eq!(checked.outcomes[2].sample_id(), "line-4");
        assert_eq!(checked.outcomes[3].sample_id(), "c");
        // Delta/delta at N=4: sharply concentrated on both sides.
        match &checked.outcomes[3] {
            SampleOutcome::Report(r) => assert!(r.violated),
            other => panic!("unexpected outcome: {other:?}"),
        }
    }

    #[test]
    fn empty_pair_content_is_a_usage_error() {
        let err = check_pair_lines(
            "{\"config\":{}}\n\n",
            ScanMode::FirstFound,
            SpectrumLayout::Half,
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn summary_csv_echoes_config_and_rows() {
        let table = SummaryTable {
            rows: vec![SummaryRow {
                group: "freq-only".into(),
                method: "lime".into(),
                samples: 32,
                errors: 1,
                violation_pct: 78.125,
                mean_target_logit: 3.25,
                std_target_logit: 0.5,
            }],
        };
        let csv = table.to_csv(&serde_json::json!({"methods": ["lime"]}));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# config: {\"methods\":[\"lime\"]}");
        assert_eq!(
            lines[1],
            "group,method,samples,errors,violation_pct,mean_target_logit,std_target_logit"
        );
        assert_eq!(lines[2], "freq-only,lime,32,1,78.12,3.2500,0.5000");
    }

    #[test]
    fn plot_inputs_are_classified_by_shape() {
        let grid = serde_json::json!({
            "mean": [[0.0, 1.0]],
            "std": [[0.0, 0.0]],
            "config": {
                "freq_bins": [1, 2], "amplitudes": [0.5], "noise_sigma": 0.0,
                "repeats": 1, "seed": 0, "target": 0, "phase_averaging": false
            }
        })
        .to_string();
        assert!(matches!(
            classify_plot_input(&grid).unwrap(),
            PlotKind::Grid(_)
        ));

        let pairs = "{\"config\":{\"x\":1}}\n{\"id\":\"s\",\"time\":[1,2],\"freq\":[3,4]}\n";
        match classify_plot_input(pairs).unwrap() {
            PlotKind::Pair { record, echo } => {
                assert_eq!(record.id, "s");
                assert_eq!(echo.as_deref(), Some("{\"x\":1}"));
            }
            PlotKind::Grid(_) => panic!("misclassified as grid"),
        }

        assert!(matches!(
            classify_plot_input("   \n  "),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            classify_plot_input("{\"weird\": true}\n"),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn rendered_svgs_are_well_formed() {
        let record = PairFileRecord {
            id: "val-both-00001 <&>".into(),
            time: vec![0.0, 1.0, -1.0, 0.5],
            freq: vec![0.2, 0.8, 0.1],
            meta: BTreeMap::from([("method".to_string(), "saliency".to_string())]),
        };
        let svg = pair_svg(&record, Some("{\"a\":1}"));
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("&lt;&amp;&gt;"));

        let grid = ResponseGrid {
            mean: vec![vec![0.0, 2.0], vec![1.0, 3.0]],
            std: vec![vec![0.0; 2]; 2],
            config: ProbeConfig {
                freq_bins: vec![3, 9],
                amplitudes: vec![0.5, 1.0],
                noise_sigma: 0.0,
                repeats: 1,
                seed: 0,
                target: 0,
                phase_averaging: false,
            },
        };
        let svg = grid_svg(&grid);
        assert!(svg.contains("frequency bin"));
        assert!(svg.contains(">9<"), "bin label missing");
        assert_eq!(svg.matches("<rect").count(), 1 + 4);
    }

    #[test]
    fn series_inputs_accept_bare_arrays_and_objects() {
        let dir = tempfile::tempdir().unwrap();
        let bare = dir.path().join("bare.json");
        fs::write(&bare, "[1.0, 2.0, 3.0]").unwrap();
        assert_eq!(read_series(&bare).unwrap(), vec![1.0, 2.0, 3.0]);

        let wrapped = dir.path().join("wrapped.json");
        fs::write(&wrapped, "{\"config\":{},\"values\":[4.0,5.0]}").unwrap();
        assert_eq!(read_series(&wrapped).unwrap(), vec![4.0, 5.0]);

        let junk = dir.path().join("junk.json");
        fs::write(&junk, "\"nope\"").unwrap();
        assert!(matches!(read_series(&junk), Err(CliError::Usage(_))));

        assert_eq!(parse_bins("3, 5,8").unwrap(), vec![3, 5, 8]);
        assert!(matches!(parse_bins("3,x"), Err(CliError::Usage(_))));
    }
}

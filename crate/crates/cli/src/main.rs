//! `logoform` — one binary exposing the dataset pipeline as subcommands with
//! frozen-seed defaults, so every data artifact regenerates with one command.
//!
//! Exit codes: 0 success, 1 usage or operational error, 2 per-record failures
//! (a report is still written).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use logoform_core::dataset::{
    self, corpus_stats, load_folio, split, transpile_corpus, FieldMap, LoadOutcome, SplitSpec,
    StoryRecord,
};
use logoform_core::formula::Label;
use logoform_core::grammar::all_grammars;
use logoform_core::lang::{DataLanguage, TargetLanguage};
use logoform_core::metrics::{compute_metrics_with, sef_breakdown, Averaging};
use logoform_core::prompt::{
    build_few_shot, parse_model_output, FewShotOptions, Prediction, PromptKind,
};
use logoform_core::sef::{classify_record, SyllogismClass};
use logoform_core::transform::grammar_diagnostics;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_RECORD_FAILURES: i32 = 2;

fn long_version() -> String {
    let mut out = format!("{}\ngrammar checksums:", env!("CARGO_PKG_VERSION"));
    for spec in all_grammars() {
        let digest = Sha256::digest(spec.source_text.as_bytes());
        let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
        out.push_str(&format!("\n  {:<8} {hex}", spec.name.to_string()));
    }
    out
}

#[derive(Parser)]
#[command(
    name = "logoform",
    about = "Transpile, classify, prompt, and score logical reasoning datasets",
    version = env!("CARGO_PKG_VERSION"),
    long_version = long_version()
)]
struct Cli {
    /// JSON config file; flag values override config values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a dataset into frozen train/test portions.
    Split(SplitArgs),
    /// Fill target-language renditions for every record.
    Transpile(TranspileArgs),
    /// Classify records into syllogistic categories.
    Classify(ClassifyArgs),
    /// Corpus statistics for one language rendering.
    Stats(StatsArgs),
    /// Render zero- or few-shot prompts.
    Prompt(PromptArgs),
    /// Score a prediction file against gold labels.
    Evaluate(EvaluateArgs),
    /// Print embedded BNF grammar text.
    Grammars(GrammarsArgs),
}

#[derive(Args)]
struct SplitArgs {
    /// Input JSONL dataset.
    #[arg(long = "in")]
    input: PathBuf,
    /// Train fraction (default 0.8).
    #[arg(long)]
    ratio: Option<f64>,
    /// Shuffle seed (default 42).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_train: PathBuf,
    #[arg(long)]
    out_test: PathBuf,
    /// JSON file mapping canonical field names to the file's keys.
    #[arg(long)]
    field_map: Option<PathBuf>,
}

#[derive(Args)]
struct TranspileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated targets (default: all five).
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<TargetLanguage>>,
    #[arg(long)]
    out: PathBuf,
    /// Where to write the failure report (default: alongside --out).
    #[arg(long)]
    errors: Option<PathBuf>,
    #[arg(long)]
    field_map: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the JSON counts here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional per-record CSV (id, class).
    #[arg(long)]
    per_record: Option<PathBuf>,
    #[arg(long)]
    field_map: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Language to measure: nl, fol, or a target language.
    #[arg(long)]
    target: DataLanguage,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    field_map: Option<PathBuf>,
}

#[derive(Args)]
struct PromptArgs {
    /// Query records.
    #[arg(long = "in")]
    input: PathBuf,
    /// Language of the premises/conclusion texts.
    #[arg(long)]
    language: DataLanguage,
    /// Template kind: basic or grammar.
    #[arg(long, default_value = "basic")]
    kind: String,
    /// Number of exemplars (default 8; 0 for zero-shot).
    #[arg(long)]
    shots: Option<usize>,
    /// Exemplar pool (required when shots > 0).
    #[arg(long)]
    pool: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Balance exemplars across gold labels.
    #[arg(long)]
    balanced: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    field_map: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Gold records (JSONL with labels and FOL annotations).
    #[arg(long)]
    gold: PathBuf,
    /// Predictions: JSONL lines of {id, output_text} or {id, label}.
    #[arg(long)]
    pred: PathBuf,
    /// Include the per-syllogism-class hit/miss breakdown.
    #[arg(long)]
    sef: bool,
    /// Micro-averaged precision/recall/F1 instead of macro.
    #[arg(long)]
    micro: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    field_map: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct GrammarsArgs {
    /// Print one grammar (fol, minifol, clif, cgif, tfl, tflplus); omit to
    /// print all.
    #[arg(long)]
    language: Option<DataLanguage>,
}

/// Optional config file; every field is overridden by the matching flag.
#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    seed: Option<u64>,
    ratio: Option<f64>,
    shots: Option<usize>,
    targets: Option<Vec<String>>,
    field_map: Option<PathBuf>,
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match run(cli) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                EXIT_OK
            } else {
                eprint!("{e}");
                EXIT_USAGE
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str::<FileConfig>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Split(args) => cmd_split(args, &config),
        Command::Transpile(args) => cmd_transpile(args, &config),
        Command::Classify(args) => cmd_classify(args, &config),
        Command::Stats(args) => cmd_stats(args, &config),
        Command::Prompt(args) => cmd_prompt(args, &config),
        Command::Evaluate(args) => cmd_evaluate(args, &config),
        Command::Grammars(args) => cmd_grammars(args),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

fn load_field_map(flag: &Option<PathBuf>, config: &FileConfig) -> Result<FieldMap> {
    let path = flag.as_ref().or(config.field_map.as_ref());
    match path {
        None => Ok(FieldMap::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading field map {}", p.display()))?;
            let overrides: BTreeMap<String, String> = serde_json::from_str(&text)
                .with_context(|| format!("parsing field map {}", p.display()))?;
            Ok(FieldMap::from_overrides(&overrides))
        }
    }
}

fn load_records(path: &Path, field_map: &FieldMap) -> Result<LoadOutcome> {
    let outcome = load_folio(path, field_map)
        .with_context(|| format!("loading {}", path.display()))?;
    for failure in &outcome.failures {
        eprintln!("{}:{}: {}", path.display(), failure.line, failure.message);
    }
    Ok(outcome)
}

/// Writes atomically: temp file in the destination directory, then rename.
fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| anyhow!("persisting {}: {}", path.display(), e.error))?;
    Ok(())
}

fn seed_header(seed: u64) -> String {
    format!("# seed={seed}\n")
}

fn write_jsonl(path: &Path, records: &[StoryRecord], seed: u64) -> Result<()> {
    let body = dataset::to_jsonl(records);
    atomic_write(path, &format!("{}{}", seed_header(seed), body))
}

fn effective_seed(flag: Option<u64>, config: &FileConfig) -> u64 {
    flag.or(config.seed).unwrap_or(42)
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_split(args: SplitArgs, config: &FileConfig) -> Result<i32> {
    let field_map = load_field_map(&args.field_map, config)?;
    let outcome = load_records(&args.input, &field_map)?;
    let spec = SplitSpec {
        ratio: args.ratio.or(config.ratio).unwrap_or(0.8),
        seed: effective_seed(args.seed, config),
    };
    let (train, test) = split(outcome.records, &spec)?;
    write_jsonl(&args.out_train, &train, spec.seed)?;
    write_jsonl(&args.out_test, &test, spec.seed)?;
    eprintln!(
        "split {} records into {} train / {} test (ratio {}, seed {})",
        train.len() + test.len(),
        train.len(),
        test.len(),
        spec.ratio,
        spec.seed
    );
    Ok(if outcome.failures.is_empty() { EXIT_OK } else { EXIT_RECORD_FAILURES })
}

fn cmd_transpile(args: TranspileArgs, config: &FileConfig) -> Result<i32> {
    let field_map = load_field_map(&args.field_map, config)?;
    let outcome = load_records(&args.input, &field_map)?;
    let targets: Vec<TargetLanguage> = match (&args.targets, &config.targets) {
        (Some(flags), _) => flags.clone(),
        (None, Some(names)) => names
            .iter()
            .map(|n| n.parse().map_err(|e: String| anyhow!(e)))
            .collect::<Result<Vec<_>>>()?,
        (None, None) => TargetLanguage::ALL.to_vec(),
    };
    let seed = effective_seed(args.seed, config);

    let mut records = outcome.records;
    let report = transpile_corpus(&mut records, &targets);
    write_jsonl(&args.out, &records, seed)?;

    let failure_count = report.failures.len() + outcome.failures.len();
    if failure_count > 0 || args.errors.is_some() {
        let errors_path = args
            .errors
            .clone()
            .unwrap_or_else(|| args.out.with_extension("errors.txt"));
        let mut text = seed_header(seed);
        for f in &outcome.failures {
            text.push_str(&format!("input line {}: {}\n", f.line, f.message));
        }
        for f in &report.failures {
            text.push_str(&format!(
                "record {} statement {} [{}]: {}\n",
                f.record_id,
                f.statement,
                f.result.target,
                f.result.diagnostics.join("; ")
            ));
        }
        text.push('\n');
        text.push_str(&grammar_diagnostics(&report.failed_results()));
        atomic_write(&errors_path, &text)?;
        if failure_count > 0 {
            eprintln!("{failure_count} failure(s); report at {}", errors_path.display());
        }
    }
    eprintln!(
        "transpiled {} records into {} target(s)",
        records.len(),
        targets.len()
    );
    Ok(if failure_count > 0 { EXIT_RECORD_FAILURES } else { EXIT_OK })
}

fn cmd_classify(args: ClassifyArgs, config: &FileConfig) -> Result<i32> {
    let field_map = load_field_map(&args.field_map, config)?;
    let outcome = load_records(&args.input, &field_map)?;
    let counts = logoform_core::sef::classify_corpus(&outcome.records);

    let mut obj = serde_json::Map::new();
    for class in SyllogismClass::ALL {
        obj.insert(class.to_string(), counts[&class].into());
    }
    obj.insert("Unclassified".into(), outcome.failures.len().into());
    let json_text = serde_json::to_string_pretty(&Value::Object(obj))?;
    match &args.out {
        Some(path) => atomic_write(path, &format!("{json_text}\n"))?,
        None => println!("{json_text}"),
    }

    if let Some(csv_path) = &args.per_record {
        let seed = effective_seed(args.seed, config);
        let mut csv = seed_header(seed);
        csv.push_str("id,class\n");
        for record in &outcome.records {
            csv.push_str(&format!("{},{}\n", record.id, classify_record(record)));
        }
        atomic_write(csv_path, &csv)?;
    }
    Ok(if outcome.failures.is_empty() { EXIT_OK } else { EXIT_RECORD_FAILURES })
}

fn cmd_stats(args: StatsArgs, config: &FileConfig) -> Result<i32> {
    let field_map = load_field_map(&args.field_map, config)?;
    let outcome = load_records(&args.input, &field_map)?;
    let stats = corpus_stats(&outcome.records, args.target)?;
    let json_text = serde_json::to_string_pretty(&stats)?;
    match &args.out {
        Some(path) => atomic_write(path, &format!("{json_text}\n"))?,
        None => println!("{json_text}"),
    }
    Ok(if outcome.failures.is_empty() { EXIT_OK } else { EXIT_RECORD_FAILURES })
}

fn cmd_prompt(args: PromptArgs, config: &FileConfig) -> Result<i32> {
    let field_map = load_field_map(&args.field_map, config)?;
    let outcome = load_records(&args.input, &field_map)?;
    let kind = match args.kind.as_str() {
        "basic" => PromptKind::Basic,
        "grammar" => PromptKind::GrammarAugmented,
        other => bail!("unknown prompt kind `{other}` (expected basic or grammar)"),
    };
    let options = FewShotOptions {
        shots: args.shots.or(config.shots).unwrap_or(8),
        seed: effective_seed(args.seed, config),
        balanced: args.balanced,
    };
    let pool = match (&args.pool, options.shots) {
        (_, 0) => Vec::new(),
        (Some(path), _) => load_records(path, &field_map)?.records,
        (None, _) => bail!("--pool is required when --shots > 0"),
    };

    let mut lines = seed_header(options.seed);
    let mut failures = 0usize;
    for record in &outcome.records {
        match build_few_shot(&pool, record, args.language, kind, &options) {
            Ok(prompt) => {
                let line = json!({
                    "id": record.id,
                    "prompt": prompt.full(),
                    "gold": record.label.as_str(),
                });
                lines.push_str(&line.to_string());
                lines.push('\n');
            }
            Err(e) => {
                eprintln!("record {}: {e}", record.id);
                failures += 1;
            }
        }
    }
    atomic_write(&args.out, &lines)?;
    eprintln!(
        "wrote {} prompt(s) ({}-shot, {} template, {} language)",
        outcome.records.len() - failures,
        options.shots,
        args.kind,
        args.language
    );
    let any_failures = failures > 0 || !outcome.failures.is_empty();
    Ok(if any_failures { EXIT_RECORD_FAILURES } else { EXIT_OK })
}

#[derive(Debug, Deserialize)]
struct PredictionLine {
    id: u64,
    #[serde(default)]
    output_text: Option<String>,
    #[serde(default)]
    label: Option<String>,
}

fn cmd_evaluate(args: EvaluateArgs, config: &FileConfig) -> Result<i32> {
    let field_map = load_field_map(&args.field_map, config)?;
    let outcome = load_records(&args.gold, &field_map)?;
    if outcome.records.is_empty() {
        bail!("gold file has no usable records");
    }

    let pred_text = fs::read_to_string(&args.pred)
        .with_context(|| format!("reading {}", args.pred.display()))?;
    let mut predictions: BTreeMap<u64, Prediction> = BTreeMap::new();
    for (idx, line) in pred_text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: PredictionLine = serde_json::from_str(line)
            .with_context(|| format!("{}:{}", args.pred.display(), idx + 1))?;
        let prediction = match (&parsed.label, &parsed.output_text) {
            (Some(l), _) => match Label::parse(l) {
                Some(label) => Prediction::Label(label),
                None => Prediction::Invalid,
            },
            (None, Some(text)) => parse_model_output(text),
            (None, None) => {
                bail!("{}:{}: need `label` or `output_text`", args.pred.display(), idx + 1)
            }
        };
        predictions.insert(parsed.id, prediction);
    }

    let mut gold = Vec::new();
    let mut pred = Vec::new();
    let mut classes = Vec::new();
    let mut missing = 0usize;
    for record in &outcome.records {
        gold.push(record.label);
        classes.push(classify_record(record));
        match predictions.remove(&record.id) {
            Some(p) => pred.push(p),
            None => {
                eprintln!("record {}: no prediction, scored Invalid", record.id);
                pred.push(Prediction::Invalid);
                missing += 1;
            }
        }
    }
    for leftover in predictions.keys() {
        eprintln!("prediction {leftover}: no matching gold record, ignored");
    }

    let averaging = if args.micro { Averaging::Micro } else { Averaging::Macro };
    let report = compute_metrics_with(&gold, &pred, averaging)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    let mut doc = serde_json::to_value(&report)?;
    let obj = doc.as_object_mut().unwrap();
    obj.insert("seed".into(), effective_seed(args.seed, config).into());
    obj.insert("records".into(), gold.len().into());
    obj.insert(
        "averaging".into(),
        if args.micro { "micro" } else { "macro" }.into(),
    );
    if args.sef {
        let breakdown = sef_breakdown(&gold, &pred, &classes)?;
        obj.insert("sef_breakdown".into(), serde_json::to_value(&breakdown)?);
    }
    let json_text = serde_json::to_string_pretty(&doc)?;
    match &args.out {
        Some(path) => atomic_write(path, &format!("{json_text}\n"))?,
        None => println!("{json_text}"),
    }

    let any_failures = missing > 0 || !outcome.failures.is_empty();
    Ok(if any_failures { EXIT_RECORD_FAILURES } else { EXIT_OK })
}

fn cmd_grammars(args: GrammarsArgs) -> Result<i32> {
    match args.language {
        Some(lang) => {
            let spec = logoform_core::grammar::grammar_for(lang)
                .ok_or_else(|| anyhow!("no grammar for {lang}"))?;
            print!("{}", spec.source_text);
        }
        None => {
            for spec in all_grammars() {
                println!("# {}", spec.name);
                print!("{}", spec.source_text);
                println!();
            }
        }
    }
    Ok(EXIT_OK)
}

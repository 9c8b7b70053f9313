//! Command-line front end: `train`, `eval`, `expand` and `check-grad`.
//!
//! Settings resolve as task defaults, then `--config` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::data::{hyper_star_expand, parse_tuple_file, ClassificationDataset, LinkDataset};
use crate::decoders::DecoderKind;
use crate::encoder::TaskMode;
use crate::error::{Error, Result};
use crate::metrics::EvalReport;
use crate::rng::seeded;
use crate::train::{
    build_classify_model, build_link_model, check_pipeline_gradients, evaluate_classification,
    evaluate_link, read_checkpoint, train_classification, train_link_prediction, write_checkpoint,
    write_metric_log, Accuracies, GradGateConfig, TrainConfig, GRAD_TOLERANCE,
};

#[derive(Debug, Parser)]
#[command(
    name = "h2gnn",
    version,
    about = "Hyperbolic hyper-star GNN for knowledge hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model and write its checkpoint and metric log.
    Train(TrainArgs),
    /// Re-evaluate a checkpoint on the test split of its dataset.
    Eval(EvalArgs),
    /// Print the hyper-star expansion of a tuple file.
    Expand(ExpandArgs),
    /// Finite-difference check of the full pipeline on a toy graph.
    CheckGrad(CheckGradArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    /// node classification
    Nc,
    /// link prediction
    Lp,
}

impl From<Task> for TaskMode {
    fn from(t: Task) -> Self {
        match t {
            Task::Nc => TaskMode::Classification,
            Task::Lp => TaskMode::LinkPrediction,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Dataset directory (or a single tuple file for link prediction).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub task: Task,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Directory for checkpoint.h2gn and metrics.jsonl.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Checkpoint path [default: <out>/checkpoint.h2gn]
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

/// Hyperparameters. Unset values come from the config file, then the task defaults.
#[derive(Debug, Default, Args)]
pub struct HyperArgs {
    /// m-distmult, m-transh, hsimple or softmax [default: softmax (nc), m-distmult (lp)]
    #[arg(long)]
    pub decoder: Option<DecoderKind>,
    /// [default: 2 (nc), 1 (lp)]
    #[arg(long)]
    pub layers: Option<usize>,
    /// Embedding width [default: 8 (nc), 200 (lp)]
    #[arg(long)]
    pub dim: Option<usize>,
    /// [default: 0.5 (nc), 0.2 (lp)]
    #[arg(long)]
    pub dropout: Option<f64>,
    /// Learning rate [default: 0.01 (nc), 0.05 (lp)]
    #[arg(long)]
    pub lr: Option<f64>,
    /// [default: 5e-5 (nc), 0 (lp)]
    #[arg(long)]
    pub weight_decay: Option<f64>,
    /// Full-graph epochs [default: 200 (nc)]
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Mini-batch iterations [default: 2000 (lp)]
    #[arg(long)]
    pub iterations: Option<usize>,
    /// [default: 128 (lp)]
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Negatives per entity position [default: 10 (lp)]
    #[arg(long)]
    pub neg_ratio: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Train/valid/test fractions for derived splits, e.g. 0.8,0.1,0.1
    /// [default: 0.2,0.4,0.4 (nc), 0.8,0.1,0.1 (lp), 0.2,0,0.4 (inductive)]
    #[arg(long)]
    pub ratios: Option<String>,
    /// Inductive node classification: withhold unseen nodes while training.
    #[arg(long)]
    pub inductive: bool,
    /// Fraction of unseen nodes with --inductive [default: 0.4]
    #[arg(long)]
    pub unseen_fraction: Option<f64>,
    /// File of `key = value` lines using the flag names above (without dashes).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// The dataset the checkpoint was trained on.
    #[arg(long)]
    pub data: PathBuf,
    /// Also report raw (unfiltered) ranking metrics.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Tuple file, one `relation entity…` fact per line.
    #[arg(long)]
    pub data: PathBuf,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckGradArgs {
    /// Check one decoder instead of all three.
    #[arg(long)]
    pub decoder: Option<DecoderKind>,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// Arity of the largest toy tuple (2 to 4).
    #[arg(long, default_value_t = 4)]
    pub max_arity: usize,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    /// Central-difference step, within [1e-7, 1e-3].
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Usage and configuration problems exit with 2, everything else with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Argument(_)
        | Error::Config(_)
        | Error::Parse { .. }
        | Error::Io { .. }
        | Error::Checkpoint(_)
        | Error::CheckpointVersion { .. } => 2,
        _ => 1,
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => cmd_train(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Expand(a) => cmd_expand(&a),
        Command::CheckGrad(a) => cmd_checkgrad(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((k.trim().replace('-', "_"), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_ratios(key: &str, value: &str) -> Result<[f64; 3]> {
    let parts = value
        .split(',')
        .map(|s| parse_value::<f64>(key, s.trim()))
        .collect::<Result<Vec<_>>>()?;
    parts
        .try_into()
        .map_err(|_| Error::Config(format!("`{key}` needs three comma-separated fractions")))
}

fn apply_setting(cfg: &mut TrainConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "decoder" => cfg.decoder = parse_value(key, value)?,
        "layers" => cfg.layers = parse_value(key, value)?,
        "dim" => cfg.dim = parse_value(key, value)?,
        "dropout" => cfg.dropout = parse_value(key, value)?,
        "lr" => cfg.learning_rate = parse_value(key, value)?,
        "weight_decay" => cfg.weight_decay = parse_value(key, value)?,
        "epochs" => cfg.epochs = parse_value(key, value)?,
        "iterations" => cfg.iterations = parse_value(key, value)?,
        "batch_size" => cfg.batch_size = parse_value(key, value)?,
        "neg_ratio" => cfg.neg_ratio = parse_value(key, value)?,
        "seed" => cfg.seed = parse_value(key, value)?,
        "ratios" => cfg.split_ratios = parse_ratios(key, value)?,
        "unseen_fraction" => cfg.unseen_fraction = Some(parse_value(key, value)?),
        "eval_every" => cfg.eval_every = parse_value(key, value)?,
        "sum_reduction" => cfg.sum_reduction = parse_value(key, value)?,
        "share_relations" => cfg.share_relations = parse_value(key, value)?,
        "curvature" => cfg.curvature = parse_value(key, value)?,
        _ => return Err(Error::Config(format!("unknown setting `{key}`"))),
    }
    Ok(())
}

/// Task defaults, then the config file, then flags.
pub fn resolve_config(task: Task, hyper: &HyperArgs) -> Result<TrainConfig> {
    let mut cfg = match task {
        Task::Nc if hyper.inductive => TrainConfig::inductive(),
        Task::Nc => TrainConfig::classification(),
        Task::Lp if hyper.inductive => {
            return Err(Error::Config(
                "--inductive applies to node classification only".into(),
            ))
        }
        Task::Lp => TrainConfig::link_prediction(),
    };
    if let Some(path) = &hyper.config {
        for (k, v) in parse_config_file(path)? {
            apply_setting(&mut cfg, &k, &v)?;
        }
    }
    let h = hyper;
    macro_rules! flag {
        ($field:ident => $target:ident) => {
            if let Some(v) = h.$field.clone() {
                cfg.$target = v;
            }
        };
    }
    flag!(decoder => decoder);
    flag!(layers => layers);
    flag!(dim => dim);
    flag!(dropout => dropout);
    flag!(lr => learning_rate);
    flag!(weight_decay => weight_decay);
    flag!(epochs => epochs);
    flag!(iterations => iterations);
    flag!(batch_size => batch_size);
    flag!(neg_ratio => neg_ratio);
    flag!(seed => seed);
    if let Some(r) = &h.ratios {
        cfg.split_ratios = parse_ratios("ratios", r)?;
    }
    if let Some(f) = h.unseen_fraction {
        if !h.inductive {
            return Err(Error::Config("--unseen-fraction needs --inductive".into()));
        }
        cfg.unseen_fraction = Some(f);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("reports serialize"));
}

fn accuracy_json(dataset: &str, a: &Accuracies) -> serde_json::Value {
    json!({
        "dataset": dataset,
        "valid_accuracy": a.valid,
        "test_accuracy": a.test,
        "unseen_accuracy": a.unseen,
    })
}

fn cmd_train(a: &TrainArgs) -> Result<ExitCode> {
    let cfg = resolve_config(a.task, &a.hyper)?;
    if !a.data.exists() {
        return Err(Error::io(
            &a.data,
            std::io::Error::new(std::io::ErrorKind::NotFound, "dataset not found"),
        ));
    }
    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let ckpt_path = a
        .checkpoint
        .clone()
        .unwrap_or_else(|| a.out.join("checkpoint.h2gn"));
    let log_path = a.out.join("metrics.jsonl");
    let name = dataset_name(&a.data);

    match a.task {
        Task::Lp => {
            let ds = LinkDataset::load(&a.data, cfg.split_ratios, cfg.seed)?;
            eprintln!(
                "{}: {} entities, {} relations, {} train / {} valid / {} test tuples",
                name,
                ds.graph.entity_count(),
                ds.graph.relation_count(),
                ds.split.train.len(),
                ds.split.valid.len(),
                ds.split.test.len()
            );
            let out = train_link_prediction(&ds, &cfg)?;
            write_checkpoint(&ckpt_path, &out.checkpoint(&name))?;
            write_metric_log(&log_path, &out.log)?;
            eprintln!(
                "selected iteration {} (validation MRR {}), checkpoint {}",
                out.best_iteration,
                out.best_valid_mrr
                    .map_or("n/a".into(), |m| format!("{m:.4}")),
                ckpt_path.display()
            );
            match &out.test {
                Some(ev) => print_json(&EvalReport::new(
                    &name,
                    cfg.decoder.name(),
                    &ev.filtered,
                    true,
                )),
                None => eprintln!("no test split, nothing to report"),
            }
        }
        Task::Nc => {
            let ds = ClassificationDataset::load(
                &a.data,
                cfg.split_ratios,
                cfg.seed,
                cfg.unseen_fraction,
            )?;
            let out = train_classification(&ds, &cfg)?;
            write_checkpoint(&ckpt_path, &out.checkpoint(&name))?;
            write_metric_log(&log_path, &out.log)?;
            eprintln!(
                "selected epoch {}, checkpoint {}",
                out.best_epoch,
                ckpt_path.display()
            );
            print_json(&accuracy_json(&name, &out.accuracies));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct SideBySide {
    filtered: EvalReport,
    raw: EvalReport,
}

fn cmd_eval(a: &EvalArgs) -> Result<ExitCode> {
    let ckpt = read_checkpoint(&a.checkpoint)?;
    let cfg = ckpt.config.clone();
    cfg.validate()?;
    let name = dataset_name(&a.data);
    match cfg.task {
        TaskMode::LinkPrediction => {
            let ds = LinkDataset::load(&a.data, cfg.split_ratios, cfg.seed)?;
            let mut model = build_link_model(&ds, &cfg, &mut seeded(cfg.seed))?;
            ckpt.load_into(&mut model.store)?;
            let test = ds.tuples_of(&ds.split.test);
            if test.is_empty() {
                return Err(Error::Argument(format!("{name} has no test tuples")));
            }
            let ev = evaluate_link(&model, &ds.train_graph(), &test, &ds.known_positives())?;
            let filtered = EvalReport::new(&name, cfg.decoder.name(), &ev.filtered, true);
            if a.raw {
                let raw = EvalReport::new(&name, cfg.decoder.name(), &ev.raw, false);
                print_json(&SideBySide { filtered, raw });
            } else {
                print_json(&filtered);
            }
        }
        TaskMode::Classification => {
            let ds = ClassificationDataset::load(
                &a.data,
                cfg.split_ratios,
                cfg.seed,
                cfg.unseen_fraction,
            )?;
            let mut model = build_classify_model(&ds, &cfg, &mut seeded(cfg.seed))?;
            ckpt.load_into(&mut model.store)?;
            print_json(&accuracy_json(
                &name,
                &evaluate_classification(&model, &ds)?,
            ));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_expand(a: &ExpandArgs) -> Result<ExitCode> {
    let mut text = String::new();
    let (graph, vocab) = match parse_tuple_file(&a.data) {
        Ok(parsed) => parsed,
        // nothing to expand
        Err(Error::EmptyGraph(_)) => return write_expansion(a, &text),
        Err(e) => return Err(e),
    };
    let star = hyper_star_expand(&graph);
    for e in &star.edges {
        let (r, pos) = star.decode(e.positional_relation);
        text.push_str(&format!(
            "{} {} {}-{}\n",
            vocab.entities.name(e.entity),
            e.tuple,
            vocab.relations.name(r),
            pos
        ));
    }
    write_expansion(a, &text)
}

fn write_expansion(a: &ExpandArgs, text: &str) -> Result<ExitCode> {
    match &a.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_checkgrad(a: &CheckGradArgs) -> Result<ExitCode> {
    let cfg = GradGateConfig {
        dim: a.dim,
        max_arity: a.max_arity,
        layers: a.layers,
        eps: a.eps,
        seed: a.seed,
        ..GradGateConfig::default()
    };
    let kinds: Vec<DecoderKind> = match a.decoder {
        Some(k) => vec![k],
        None => vec![
            DecoderKind::MDistMult,
            DecoderKind::MTransH,
            DecoderKind::HSimplE,
        ],
    };
    let mut all_ok = true;
    for kind in kinds {
        let r = check_pipeline_gradients(kind, &cfg)?;
        let ok = r.max_rel_error < GRAD_TOLERANCE;
        all_ok &= ok;
        let worst = r
            .worst
            .as_ref()
            .map(|(n, i)| format!(" worst={n}[{i}]"))
            .unwrap_or_default();
        println!(
            "{kind}: eps={:e} max_rel_error={:.3e} checked={} kinks_excluded={}{worst} {}",
            r.eps,
            r.max_rel_error,
            r.checked,
            r.kinks_excluded,
            if ok { "ok" } else { "FAILED" }
        );
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

//! Command-line front end: fit, tune, eval, graph export and synthetic
//! data generation, with a reproducibility manifest next to every output.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use cluspath::baselines::{preset_params, PRESETS};
use cluspath::data::{load_long_csv, ClusPathModel, Dataset, HyperParams};
use cluspath::graph::{binarize, export_dot, extract_transitions, population_csv};
use cluspath::measures::{evaluate, MeasureVector};
use cluspath::solver::{fit, SolverConfig};
use cluspath::synth::{generate, SynthConfig};
use cluspath::tuner::{front_csv, tune, SearchBox, TunerConfig};

#[derive(Parser)]
#[command(name = "cluspath", version, about = "Temporal-driven clustering of entity observation series with a phase-transition graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the clustering on a long-format CSV and write all artifacts
    Fit(FitArgs),
    /// Search hyperparameters with the evolutionary multi-objective tuner
    Tune(TuneArgs),
    /// Score a fitted model, optionally over many fresh initializations
    Eval(EvalArgs),
    /// Export the binarized transition graph of a fitted model
    Graph(GraphArgs),
    /// Generate a synthetic planted-path dataset with ground truth
    Synth(SynthArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Long-format CSV: one row per observation
    #[arg(long)]
    input: PathBuf,
    /// Column holding the entity identifier
    #[arg(long, default_value = "entity")]
    entity_col: String,
    /// Column holding the timestamp
    #[arg(long, default_value = "time")]
    time_col: String,
    /// Skip z-score normalization of the features
    #[arg(long)]
    no_normalize: bool,
    /// Skip removal of each entity's feature means
    #[arg(long)]
    keep_entity_mean: bool,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    k: usize,
    /// Descriptive/temporal balance in [-1, 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// Constraint penalty weight
    #[arg(long)]
    beta: Option<f64>,
    /// Constraint time-decay width
    #[arg(long)]
    delta: Option<f64>,
    /// Objective term weights as `a,b,c`
    #[arg(long, value_delimiter = ',', num_args = 1)]
    lambda: Option<Vec<f64>>,
    /// Start from a named baseline configuration (kmeans, tdkm, ckm, tdck)
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_iterations: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    pop: usize,
    #[arg(long, default_value_t = 100)]
    gens: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Fitted model JSON (written by `fit` or `tune`)
    #[arg(long)]
    model: PathBuf,
    /// Refit over this many fresh seeded initializations and report
    /// mean and standard deviation per measure
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 12)]
    entities: usize,
    #[arg(long, default_value_t = 5)]
    phases: usize,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 2)]
    obs_per_phase: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Distinguishes flag-level mistakes (exit 2) from data and runtime
/// failures (exit 1).
enum CmdError {
    Usage(String),
    Run(String),
}

impl From<cluspath::Error> for CmdError {
    fn from(e: cluspath::Error) -> Self {
        CmdError::Run(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Run(e.to_string())
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(e: serde_json::Error) -> Self {
        CmdError::Run(e.to_string())
    }
}

type CmdResult = Result<(), CmdError>;

#[derive(Serialize)]
struct RunManifest {
    command: Vec<String>,
    input: Option<String>,
    params: serde_json::Value,
    seed: u64,
    outputs: Vec<String>,
    tool_version: String,
    dataset_sha256: Option<String>,
}

fn main() {
    env_logger::init();
    if let Ok(v) = std::env::var("CLUSPATH_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: CLUSPATH_THREADS must be a positive integer, got '{v}'");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse(); // clap exits with 2 on usage errors
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Tune(a) => cmd_tune(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => {}
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CmdError::Run(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn fingerprint(path: &Path) -> Result<String, CmdError> {
    let bytes = fs::read(path)?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

fn load_data(args: &DataArgs) -> Result<(Dataset, String), CmdError> {
    let fp = fingerprint(&args.input)?;
    let raw = load_long_csv(&args.input, &args.entity_col, &args.time_col)?;
    let ds = raw.preprocess(!args.keep_entity_mean, !args.no_normalize)?;
    Ok((ds, fp))
}

fn resolve_params(p: &ParamArgs) -> Result<HyperParams, CmdError> {
    if p.k < 2 {
        return Err(CmdError::Usage(format!("--k must be at least 2, got {}", p.k)));
    }
    let base = match &p.preset {
        Some(name) => preset_params(name, p.k).map_err(|_| {
            CmdError::Usage(format!("unknown preset '{name}'; expected one of {PRESETS:?}"))
        })?,
        None => HyperParams::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, p.k)
            .expect("default parameters are valid"),
    };
    let lambda = match &p.lambda {
        Some(l) => {
            if l.len() != 3 {
                return Err(CmdError::Usage(format!(
                    "--lambda expects three comma-separated values, got {}",
                    l.len()
                )));
            }
            (l[0], l[1], l[2])
        }
        None => (base.lambda1, base.lambda2, base.lambda3),
    };
    HyperParams::new(
        p.alpha.unwrap_or(base.alpha),
        p.beta.unwrap_or(base.beta),
        p.delta.unwrap_or(base.delta),
        lambda.0,
        lambda.1,
        lambda.2,
        p.k,
    )
    .map_err(|e| CmdError::Usage(e.to_string()))
}

fn write_artifact(dir: &Path, name: &str, content: &str, outputs: &mut Vec<String>) -> CmdResult {
    let path = dir.join(name);
    fs::write(&path, content)?;
    outputs.push(path.display().to_string());
    Ok(())
}

fn write_manifest(
    dir: &Path,
    input: Option<&Path>,
    params: serde_json::Value,
    seed: u64,
    fp: Option<String>,
    mut outputs: Vec<String>,
) -> CmdResult {
    outputs.push(dir.join("manifest.json").display().to_string());
    let manifest = RunManifest {
        command: std::env::args().collect(),
        input: input.map(|p| p.display().to_string()),
        params,
        seed,
        outputs,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        dataset_sha256: fp,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

/// Model, graph, measures and population artifacts shared by fit and tune.
fn write_model_artifacts(
    dir: &Path,
    ds: &Dataset,
    model: &ClusPathModel,
    outputs: &mut Vec<String>,
) -> CmdResult {
    write_artifact(dir, "model.json", &model.to_json()?, outputs)?;
    let transitions = extract_transitions(ds, &model.assignment);
    write_artifact(dir, "transitions.json", &serde_json::to_string_pretty(&transitions)?, outputs)?;
    let graph = binarize(&model.adjacency, &model.prototypes);
    write_artifact(dir, "graph.dot", &export_dot(&graph, &model.prototypes, &transitions), outputs)?;
    let measures = evaluate(model, ds)?;
    write_artifact(dir, "measures.json", &serde_json::to_string_pretty(&measures)?, outputs)?;
    write_artifact(dir, "population.csv", &population_csv(ds, &model.assignment, model.params.k), outputs)?;
    Ok(())
}

fn print_measures(m: &MeasureVector) {
    println!("mdvar {:.16e}", m.mdvar);
    println!("tvar  {:.16e}", m.tvar);
    println!("shap  {:.16e}", m.shap);
    println!("spass {:.16e}", m.spass);
}

fn cmd_fit(args: FitArgs) -> CmdResult {
    let params = resolve_params(&args.params)?;
    let (ds, fp) = load_data(&args.data)?;
    let cfg = SolverConfig {
        max_iterations: args.max_iterations,
        ..SolverConfig::with_seed(args.seed)
    };
    let model = fit(&ds, &params, &cfg, None)?;
    fs::create_dir_all(&args.out)?;
    let mut outputs = Vec::new();
    write_model_artifacts(&args.out, &ds, &model, &mut outputs)?;
    write_manifest(
        &args.out,
        Some(&args.data.input),
        serde_json::to_value(params).map_err(CmdError::from)?,
        args.seed,
        Some(fp),
        outputs,
    )?;
    let measures = evaluate(&model, &ds)?;
    print_measures(&measures);
    Ok(())
}

fn cmd_tune(args: TuneArgs) -> CmdResult {
    if args.pop == 0 {
        return Err(CmdError::Usage("--pop must be positive".into()));
    }
    if args.gens == 0 {
        return Err(CmdError::Usage("--gens must be positive".into()));
    }
    if args.k < 2 {
        return Err(CmdError::Usage(format!("--k must be at least 2, got {}", args.k)));
    }
    let (ds, fp) = load_data(&args.data)?;
    let tuner_cfg = TunerConfig {
        population_size: args.pop,
        max_generations: args.gens,
        search_box: SearchBox::default(),
        seed: args.seed,
        k: args.k,
        ..TunerConfig::default()
    };
    let solver_cfg = SolverConfig::with_seed(args.seed);
    let outcome = tune(&ds, &tuner_cfg, &solver_cfg)?;
    let best = outcome.best_params(args.k)?;
    fs::create_dir_all(&args.out)?;
    let mut outputs = Vec::new();
    write_artifact(&args.out, "best_params.json", &serde_json::to_string_pretty(&best)?, &mut outputs)?;
    write_artifact(&args.out, "front.csv", &front_csv(&outcome.front), &mut outputs)?;
    write_artifact(&args.out, "history.json", &serde_json::to_string_pretty(&outcome.history)?, &mut outputs)?;
    let model = fit(&ds, &best, &solver_cfg, None)?;
    write_model_artifacts(&args.out, &ds, &model, &mut outputs)?;
    write_manifest(
        &args.out,
        Some(&args.data.input),
        serde_json::to_value(tuner_cfg).map_err(CmdError::from)?,
        args.seed,
        Some(fp),
        outputs,
    )?;
    println!(
        "best genome after {} generations, {} evaluations:",
        outcome.generations, outcome.evaluations
    );
    println!("{}", serde_json::to_string_pretty(&best)?);
    Ok(())
}

/// When a manifest sits next to the model file, require the dataset
/// fingerprint to match the one recorded at fit time.
fn check_fingerprint(model_path: &Path, fp: &str) -> CmdResult {
    let manifest_path = match model_path.parent() {
        Some(dir) => dir.join("manifest.json"),
        None => return Ok(()),
    };
    let Ok(text) = fs::read_to_string(&manifest_path) else {
        return Ok(());
    };
    let Ok(v) = serde_json::from_str::<serde_json::Value>(&text) else {
        return Ok(());
    };
    if let Some(recorded) = v.get("dataset_sha256").and_then(|s| s.as_str()) {
        if recorded != fp {
            return Err(CmdError::Run(format!(
                "dataset fingerprint {fp} does not match the model's recorded {recorded}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SeedProtocolReport {
    seeds: usize,
    mean: MeasureVector,
    std: MeasureVector,
    per_seed: Vec<MeasureVector>,
}

fn cmd_eval(args: EvalArgs) -> CmdResult {
    let (ds, fp) = load_data(&args.data)?;
    let model = ClusPathModel::from_json(&fs::read_to_string(&args.model)?)?;
    check_fingerprint(&args.model, &fp)?;

    let report_json = match args.seeds {
        None => {
            let m = evaluate(&model, &ds)?;
            print_measures(&m);
            serde_json::to_string_pretty(&m)?
        }
        Some(0) => return Err(CmdError::Usage("--seeds must be positive".into())),
        Some(n) => {
            let params = model.params;
            let results: Result<Vec<MeasureVector>, cluspath::Error> = (0..n as u64)
                .into_par_iter()
                .map(|seed| {
                    let m = fit(&ds, &params, &SolverConfig::with_seed(seed), None)?;
                    evaluate(&m, &ds)
                })
                .collect();
            let results = results?;
            let mean_of = |f: fn(&MeasureVector) -> f64| -> (f64, f64) {
                let mean = results.iter().map(f).sum::<f64>() / n as f64;
                let var = results.iter().map(|m| (f(m) - mean).powi(2)).sum::<f64>() / n as f64;
                (mean, var.sqrt())
            };
            let (md, md_s) = mean_of(|m| m.mdvar);
            let (tv, tv_s) = mean_of(|m| m.tvar);
            let (sh, sh_s) = mean_of(|m| m.shap);
            let (sp, sp_s) = mean_of(|m| m.spass);
            let report = SeedProtocolReport {
                seeds: n,
                mean: MeasureVector { mdvar: md, tvar: tv, shap: sh, spass: sp },
                std: MeasureVector { mdvar: md_s, tvar: tv_s, shap: sh_s, spass: sp_s },
                per_seed: results,
            };
            println!("mean over {n} seeds:");
            print_measures(&report.mean);
            println!("std over {n} seeds:");
            print_measures(&report.std);
            serde_json::to_string_pretty(&report)?
        }
    };
    if let Some(out) = &args.out {
        fs::create_dir_all(out)?;
        let mut outputs = Vec::new();
        write_artifact(out, "eval.json", &report_json, &mut outputs)?;
        write_manifest(
            out,
            Some(&args.data.input),
            serde_json::to_value(model.params).map_err(CmdError::from)?,
            model.seed,
            Some(fp),
            outputs,
        )?;
    }
    Ok(())
}

fn cmd_graph(args: GraphArgs) -> CmdResult {
    let (ds, fp) = load_data(&args.data)?;
    let model = ClusPathModel::from_json(&fs::read_to_string(&args.model)?)?;
    check_fingerprint(&args.model, &fp)?;
    let transitions = extract_transitions(&ds, &model.assignment);
    let graph = binarize(&model.adjacency, &model.prototypes);
    let dot = export_dot(&graph, &model.prototypes, &transitions);
    fs::create_dir_all(&args.out)?;
    let mut outputs = Vec::new();
    write_artifact(&args.out, "graph.dot", &dot, &mut outputs)?;
    write_artifact(&args.out, "transitions.json", &serde_json::to_string_pretty(&transitions)?, &mut outputs)?;
    write_manifest(
        &args.out,
        Some(&args.data.input),
        serde_json::to_value(model.params).map_err(CmdError::from)?,
        model.seed,
        Some(fp),
        outputs,
    )?;
    print!("{dot}");
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> CmdResult {
    let cfg = SynthConfig {
        entities: args.entities,
        phases: args.phases,
        noise: args.noise,
        obs_per_phase: args.obs_per_phase,
        dim: args.dim,
        seed: args.seed,
    };
    let (ds, truth) = generate(&cfg).map_err(|e| CmdError::Usage(e.to_string()))?;
    fs::create_dir_all(&args.out)?;
    let mut csv = String::from("entity,time");
    for f in 0..args.dim {
        csv.push_str(&format!(",f{f}"));
    }
    csv.push('\n');
    for o in ds.observations() {
        csv.push_str(&format!("{},{}", o.entity_id, o.timestamp));
        for v in &o.descriptor {
            csv.push_str(&format!(",{v}"));
        }
        csv.push('\n');
    }
    let mut outputs = Vec::new();
    write_artifact(&args.out, "data.csv", &csv, &mut outputs)?;
    write_artifact(&args.out, "truth.json", &serde_json::to_string_pretty(&truth)?, &mut outputs)?;
    write_manifest(
        &args.out,
        None,
        serde_json::to_value(cfg).map_err(CmdError::from)?,
        args.seed,
        None,
        outputs,
    )?;
    println!(
        "wrote {} observations for {} entities to {}",
        ds.n(),
        args.entities,
        args.out.join("data.csv").display()
    );
    Ok(())
}

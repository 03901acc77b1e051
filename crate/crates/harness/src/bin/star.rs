//! `star`: train, route, simulate, sweep, eval and inspect.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use star_agents::{AgentEnv, Extractor, Geocoder, ReplayExtractor, ScriptedExtractor};
use star_core::routing::{load_matrix, save_matrix, Ablation, NominalRouteTable, RoutingKernel, TrainingConfig};
use star_core::{read_traces_jsonl, write_traces_jsonl, AgentId, ExecStatus, Kernel, TaskType, Taxonomy};
use star_executor::{run_inference, AgentRuntime, InferenceConfig, StarAgents};
use star_harness::sweep::default_grid;
use star_harness::{
    alpha_sweep, evaluate_em, load_dataset, run_training_pipeline, simulate_recovery, wilson_ci, AnswerMode,
    CandidateRule, HarnessError, Oracle, PipelineConfig, ScriptedBehavior, ScriptedRuntime, DEFAULT_NUMERIC_TOL,
};

#[derive(Parser)]
#[command(name = "star", version, about = "Status-aware routing over a shared blackboard")]
struct Cli {
    /// Master seed for every derived per-query seed.
    #[arg(long, env = "STAR_SEED", default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Collect traces on a dataset and write a trained matrix.
    Train(TrainArgs),
    /// Answer queries with a trained matrix.
    Route(RouteArgs),
    /// Recovery breakdown under scripted failures.
    Simulate(SimulateArgs),
    /// Precision and coverage across alpha values.
    Sweep(SweepArgs),
    /// Exact match with Wilson intervals for a prediction file.
    Eval(EvalArgs),
    /// Print matrix rows.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtractorKind {
    Scripted,
    Replay,
    #[cfg(feature = "remote")]
    Remote,
}

#[derive(Args)]
struct AgentArgs {
    #[arg(long, value_enum, default_value = "scripted")]
    extractor: ExtractorKind,
    /// Recorded replies for `--extractor replay`.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Reverse-geocoder fixture (lat, lon, name per line).
    #[arg(long)]
    geocoder: Option<PathBuf>,
}

#[derive(Args)]
struct InferArgs {
    #[arg(long, default_value_t = star_executor::DEFAULT_TAU)]
    tau: f64,
    #[arg(long = "max-steps", default_value_t = star_executor::DEFAULT_MAX_STEPS)]
    max_steps: usize,
    #[arg(long, default_value = "FULL")]
    ablation: String,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "traces-out")]
    traces_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long = "no-augmentation")]
    no_augmentation: bool,
    /// Scripted behavior set; replaces the real agents.
    #[arg(long)]
    behaviors: Option<PathBuf>,
    /// Matrix used while collecting traces (default: nominal routes only).
    #[arg(long)]
    bootstrap: Option<PathBuf>,
    #[command(flatten)]
    agents: AgentArgs,
    #[command(flatten)]
    infer: InferArgs,
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Query file (JSON records with `query`, or one query per line); `-` reads stdin.
    #[arg(long)]
    query: String,
    #[arg(long = "trace-out")]
    trace_out: Option<PathBuf>,
    #[command(flatten)]
    agents: AgentArgs,
    #[command(flatten)]
    infer: InferArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    behaviors: PathBuf,
    /// Trained matrix; without it one is trained on `--train` fresh queries.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 2000)]
    train: usize,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[command(flatten)]
    infer: InferArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    traces: PathBuf,
    /// Comma-separated alphas (default 0, 0.1, ..., 1).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    /// Oracle successors as JSON `{"best": [[from, status, type, to], ...]}`.
    #[arg(long)]
    oracle: Option<PathBuf>,
    #[arg(long = "no-augmentation")]
    no_augmentation: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// JSON lines with `id` and `answer`.
    #[arg(long)]
    predictions: PathBuf,
    #[arg(long, default_value_t = 1.96)]
    z: f64,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    agent: Option<AgentId>,
    #[arg(long)]
    status: Option<ExecStatus>,
    #[arg(long = "task-type")]
    task_type: Option<String>,
}

/// Exit status 2 marks invalid input, 1 anything else.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure { code: if e.is_validation() { 2 } else { 1 }, err: e.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }
}

fn invalid(msg: impl std::fmt::Display) -> Failure {
    Failure { code: 2, err: anyhow::anyhow!("{msg}") }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Train(a) => train(a, cli.seed),
        Cmd::Route(a) => route(a, cli.seed),
        Cmd::Simulate(a) => simulate(a, cli.seed),
        Cmd::Sweep(a) => sweep(a),
        Cmd::Eval(a) => eval(a),
        Cmd::Inspect(a) => inspect(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).with_context(|| format!("cannot read {}", path.display())).map_err(Failure::from)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::from)
}

fn inference_config(a: &InferArgs, seed: u64) -> Result<InferenceConfig, Failure> {
    let ablation: Ablation = a.ablation.parse().map_err(invalid)?;
    Ok(InferenceConfig::new(a.tau, a.max_steps).map_err(invalid)?.with_ablation(ablation).with_seed(seed))
}

fn load_kernel(path: &Path) -> Result<Kernel, Failure> {
    load_matrix(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_behavior(path: &Path) -> Result<ScriptedBehavior, Failure> {
    let b: ScriptedBehavior =
        serde_json::from_slice(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    b.validate()?;
    Ok(b)
}

fn star_agents(a: &AgentArgs, taxonomy: Arc<Taxonomy>) -> Result<StarAgents, Failure> {
    let extractor: Arc<dyn Extractor> = match a.extractor {
        ExtractorKind::Scripted => Arc::new(ScriptedExtractor),
        ExtractorKind::Replay => {
            let path = a.replay.as_ref().ok_or_else(|| invalid("--extractor replay needs --replay FILE"))?;
            let f = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
            Arc::new(ReplayExtractor::from_jsonl(BufReader::new(f)).map_err(invalid)?)
        }
        #[cfg(feature = "remote")]
        ExtractorKind::Remote => Arc::new(star_agents::extractor::remote::RemoteExtractor::from_env(&taxonomy).map_err(invalid)?),
    };
    let mut env = AgentEnv::new(extractor);
    if let Some(path) = &a.geocoder {
        let text = String::from_utf8(read(path)?).map_err(invalid)?;
        env = env.with_geocoder(Geocoder::parse(&text).map_err(invalid)?);
    }
    Ok(StarAgents::new(env, taxonomy))
}

fn taxonomy_for(types: impl IntoIterator<Item = TaskType>) -> Result<Arc<Taxonomy>, Failure> {
    let names: BTreeSet<String> = types.into_iter().filter(|t| !t.is_open()).map(|t| t.as_str().to_string()).collect();
    Ok(Arc::new(Taxonomy::new(names).map_err(invalid)?))
}

fn train(a: TrainArgs, seed: u64) -> CliResult {
    let data = load_dataset(&a.dataset)?;
    for d in &data.diagnostics {
        eprintln!("{}:{}: skipped: {}", a.dataset.display(), d.line, d.message);
    }
    let training = TrainingConfig::new(a.alpha).map_err(invalid)?.with_augmentation(!a.no_augmentation);
    let inference = inference_config(&a.infer, seed)?;
    let training = training.with_ablation(inference.ablation);
    let cfg = PipelineConfig { training, inference, candidates: CandidateRule::AllOthers, master_seed: seed };

    let (runtime, bootstrap): (Box<dyn AgentRuntime>, Kernel) = match &a.behaviors {
        Some(path) => {
            let b = load_behavior(path)?;
            let tax = taxonomy_for(b.task_types.iter().cloned().chain(data.records.iter().map(|r| r.task_type.clone())))?;
            let kernel = match &a.bootstrap {
                Some(p) => load_kernel(p)?,
                None => RoutingKernel::nominal_only(b.nominal_table()?, tax),
            };
            (Box::new(ScriptedRuntime::new(b, &data.records)), kernel)
        }
        None => {
            let kernel = match &a.bootstrap {
                Some(p) => load_kernel(p)?,
                None => RoutingKernel::nominal_only(
                    NominalRouteTable::benchmark_default(),
                    Arc::new(Taxonomy::benchmark_default()),
                ),
            };
            (Box::new(star_agents(&a.agents, Arc::clone(kernel.taxonomy()))?), kernel)
        }
    };
    let out = run_training_pipeline(&data.records, runtime.as_ref(), &bootstrap, &cfg)?;
    let mut w = create(&a.out)?;
    w.write_all(&save_matrix(&out.kernel)).context("writing matrix")?;
    w.flush().context("writing matrix")?;
    if let Some(path) = &a.traces_out {
        let mut w = create(path)?;
        write_traces_jsonl(&mut w, &out.traces).map_err(HarnessError::from)?;
        w.flush().context("writing traces")?;
    }
    let correct = out.traces.iter().filter(|t| t.correct).count();
    println!("{}", json!({"queries": out.traces.len(), "correct": correct, "skipped": data.diagnostics.len()}));
    Ok(())
}

#[derive(Deserialize)]
struct QueryLine {
    #[serde(default)]
    id: Option<String>,
    query: String,
}

fn read_queries(src: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut text = String::new();
    if src == "-" {
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = String::from_utf8(read(Path::new(src))?).map_err(invalid)?;
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (id, query) = match serde_json::from_str::<QueryLine>(line) {
            Ok(q) => (q.id.unwrap_or_else(|| format!("q{}", i + 1)), q.query),
            Err(_) if !line.trim_start().starts_with('{') => (format!("q{}", i + 1), line.to_string()),
            Err(e) => return Err(invalid(format!("line {}: {e}", i + 1))),
        };
        out.push((id, query));
    }
    Ok(out)
}

fn route(a: RouteArgs, seed: u64) -> CliResult {
    let kernel = load_kernel(&a.matrix)?;
    let cfg = inference_config(&a.infer, seed)?;
    let runtime = star_agents(&a.agents, Arc::clone(kernel.taxonomy()))?;
    let queries = read_queries(&a.query)?;
    let mut traces = Vec::with_capacity(queries.len());
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (id, q) in queries {
        let icfg = cfg.clone().with_seed(star_harness::derive_seed(seed, &id));
        let mut run = run_inference(&q, &kernel, &runtime, &icfg);
        run.trace.query_id = id.clone();
        let steps: Vec<String> = run.trace.steps.iter().map(|(a, s)| format!("{a}:{s}")).collect();
        writeln!(out, "{}", json!({"id": id, "answer": run.answer, "route": steps, "termination": run.termination}))
            .context("writing output")?;
        traces.push(run.trace);
    }
    if let Some(path) = &a.trace_out {
        let mut w = create(path)?;
        write_traces_jsonl(&mut w, &traces).map_err(HarnessError::from)?;
        w.flush().context("writing traces")?;
    }
    Ok(())
}

fn simulate(a: SimulateArgs, seed: u64) -> CliResult {
    let b = load_behavior(&a.behaviors)?;
    let cfg = inference_config(&a.infer, seed)?;
    let kernel = match &a.matrix {
        Some(p) => load_kernel(p)?,
        None => {
            let bootstrap = b.bootstrap_kernel()?;
            let train_set = star_harness::simulate::synthetic_queries(&b, a.train, seed.wrapping_add(1));
            let runtime = ScriptedRuntime::new(b.clone(), &train_set);
            let pcfg = PipelineConfig {
                training: TrainingConfig::new(a.alpha).map_err(invalid)?,
                inference: cfg.clone(),
                candidates: CandidateRule::AllOthers,
                master_seed: seed,
            };
            run_training_pipeline(&train_set, &runtime, &bootstrap, &pcfg)?.kernel
        }
    };
    let breakdown = simulate_recovery(&b, &kernel, a.n, seed, &cfg);
    for r in &breakdown.rows {
        let label = r.first_error.map_or("NONE", ExecStatus::name);
        println!("{}", json!({"first_error": label, "n": r.n, "correct": r.correct, "em": r.em()}));
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> CliResult {
    let f = File::open(&a.traces).with_context(|| format!("cannot read {}", a.traces.display()))?;
    let traces = read_traces_jsonl(BufReader::new(f)).map_err(invalid)?;
    let grid = a.grid.unwrap_or_else(default_grid);
    if let Some(bad) = grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(invalid(format!("alpha {bad} is outside [0, 1]")));
    }
    let oracle: Oracle = match &a.oracle {
        Some(p) => serde_json::from_slice(&read(p)?).map_err(|e| invalid(format!("{}: {e}", p.display())))?,
        None => Oracle::default(),
    };
    let tax = taxonomy_for(traces.iter().map(|t| t.task_type.clone()))?;
    let res = alpha_sweep(&traces, &grid, &oracle, &tax, !a.no_augmentation)?;
    for p in &res.points {
        println!("{}", serde_json::to_string(p).context("serializing")?);
    }
    Ok(())
}

#[derive(Deserialize)]
struct Prediction {
    id: String,
    answer: String,
}

fn eval(a: EvalArgs) -> CliResult {
    let data = load_dataset(&a.dataset)?;
    let f = File::open(&a.predictions).with_context(|| format!("cannot read {}", a.predictions.display()))?;
    let mut preds = BTreeMap::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.context("reading predictions")?;
        if line.trim().is_empty() {
            continue;
        }
        let p: Prediction = serde_json::from_str(&line).map_err(|e| invalid(format!("line {}: {e}", i + 1)))?;
        preds.insert(p.id, p.answer);
    }
    let (mut k, mut n, mut missing) = (0u64, 0u64, 0usize);
    let (mut reg_p, mut reg_g) = (Vec::new(), Vec::new());
    for r in &data.records {
        let Some(answer) = preds.get(&r.id) else {
            missing += 1;
            continue;
        };
        if r.mode == AnswerMode::Regression {
            if let (Ok(p), Ok(g)) = (answer.trim().parse::<f64>(), r.gold.trim().parse::<f64>()) {
                reg_p.push(p);
                reg_g.push(g);
            }
            continue;
        }
        n += 1;
        k += u64::from(evaluate_em(answer, &r.gold, r.mode, DEFAULT_NUMERIC_TOL));
    }
    let mut summary = json!({"n": n, "correct": k, "missing_predictions": missing});
    if n > 0 {
        let (center, half) = wilson_ci(k, n, a.z)?;
        summary["em"] = json!(k as f64 / n as f64);
        summary["wilson_center"] = json!(center);
        summary["wilson_half_width"] = json!(half);
    }
    if !reg_p.is_empty() {
        use star_harness::{evaluate_regression, Metric};
        summary["rmse"] = json!(evaluate_regression(&reg_p, &reg_g, Metric::Rmse)?);
        summary["mae"] = json!(evaluate_regression(&reg_p, &reg_g, Metric::Mae)?);
    }
    println!("{summary}");
    Ok(())
}

fn inspect(a: InspectArgs) -> CliResult {
    let kernel = load_kernel(&a.matrix)?;
    let meta = kernel.meta();
    println!("{}", json!({"alpha": meta.alpha, "augmentation": meta.augmentation, "ablation": meta.ablation, "task_types": kernel.taxonomy().len()}));
    for (from, status, slot, row) in kernel.recovery().filled_rows() {
        let t = kernel.taxonomy().names().get(slot.0).cloned().unwrap_or_else(|| TaskType::OPEN_NAME.into());
        if a.agent.is_some_and(|x| x != from)
            || a.status.is_some_and(|x| x != status)
            || a.task_type.as_ref().is_some_and(|x| *x != t)
        {
            continue;
        }
        let to: BTreeMap<String, f64> = row
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, p)| (AgentId::from_index(i).expect("pool index").to_string(), *p))
            .collect();
        let v: Value = json!({"from": from, "status": status, "type": t, "to": to});
        println!("{v}");
    }
    Ok(())
}

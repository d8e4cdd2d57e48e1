use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wclique::clock::ClockKind;
use wclique::config::{preset, Configuration, ParameterSpace, SpaceFormat};
use wclique::exact_oracle;
use wclique::harness::{
    load_graph, random_search_configure, read_instance_list, run_batch, BatchOptions, LoadedInstance, RunResult,
    WeightMode,
};
use wclique::search::{solve, Cutoff, SolveOptions};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "wclique", version, about = "Maximum vertex weight clique local search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance
    Solve(SolveArgs),
    /// Seeded batch runs over an instance list
    Bench(BenchArgs),
    /// Export the parameter space or tune by random search
    Configure(ConfigureArgs),
    /// Exact optimum of a small instance
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ConfigSource {
    /// JSON configuration file
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// default, bhoslib, dimacs_mann, dimacs_other, kes or ref
    #[arg(long)]
    preset: Option<String>,
    /// Parameter overrides, e.g. --set tabu_tenure=9 (repeatable)
    #[arg(long = "set", value_name = "NAME=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct Limits {
    /// Time cutoff per run in seconds (in moves with --clock steps)
    #[arg(long, default_value_t = 10.0)]
    cutoff: f64,
    /// Step cutoff per run; replaces the time cutoff (reproducible runs)
    #[arg(long)]
    steps: Option<u64>,
    /// cpu (thread CPU seconds), wall, or steps (times counted in moves;
    /// the default with --steps)
    #[arg(long, value_enum)]
    clock: Option<ClockArg>,
    /// default: (i mod 200)+1 everywhere; explicit: honor `v` lines
    #[arg(long, value_enum, default_value = "default")]
    weights: WeightArg,
}

impl Limits {
    fn cutoff(&self) -> Cutoff {
        match self.steps {
            Some(s) => Cutoff::Steps(s),
            None => Cutoff::Seconds(self.cutoff),
        }
    }

    fn clock(&self) -> ClockKind {
        match (self.clock, self.steps) {
            (Some(ClockArg::Cpu), _) => ClockKind::ThreadCpu,
            (Some(ClockArg::Wall), _) => ClockKind::Wall,
            (Some(ClockArg::Steps), _) | (None, Some(_)) => ClockKind::Steps,
            (None, None) => ClockKind::ThreadCpu,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ClockArg {
    Cpu,
    Wall,
    Steps,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum WeightArg {
    Default,
    Explicit,
}

impl From<WeightArg> for WeightMode {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Default => WeightMode::Default,
            WeightArg::Explicit => WeightMode::Explicit,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    source: ConfigSource,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Stop once this weight is reached and report success
    #[arg(long)]
    target: Option<i64>,
    #[command(flatten)]
    limits: Limits,
    /// Print the result as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// File with one `<instance> [target]` per line
    instance_list: PathBuf,
    #[command(flatten)]
    source: ConfigSource,
    /// Inclusive seed range A..B
    #[arg(long, default_value = "1..10")]
    seeds: String,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output path; both <stem>.csv and <stem>.json are written
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep running after the target is reached
    #[arg(long)]
    no_early_exit: bool,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct ConfigureArgs {
    /// Write the parameter space to FILE
    #[arg(long, conflicts_with_all = ["train"])]
    space_out: Option<PathBuf>,
    /// pcs or json (for --space-out)
    #[arg(long, default_value = "pcs")]
    format: String,
    /// Training instance list
    #[arg(long, requires = "budget")]
    train: Option<PathBuf>,
    /// Number of sampled configurations
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the chosen configuration as JSON
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "default")]
    weights: WeightArg,
}

struct Failure(u8, String);

fn input_err(msg: impl ToString) -> Failure {
    Failure(EXIT_INPUT, msg.to_string())
}

fn usage_err(msg: impl ToString) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn load_config(source: &ConfigSource) -> Result<Configuration, Failure> {
    let mut config = match (&source.config, &source.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            Configuration::from_json(&text).map_err(input_err)?
        }
        (None, Some(name)) => preset(name).map_err(usage_err)?,
        (None, None) => Configuration::default(),
    };
    for o in &source.overrides {
        let (name, value) = o.split_once('=').ok_or_else(|| usage_err(format!("expected NAME=VALUE, got '{o}'")))?;
        config.set(name, value).map_err(usage_err)?;
    }
    config.validate().map_err(|e| input_err(format!("invalid configuration: {e}")))?;
    Ok(config)
}

fn parse_seeds(text: &str) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    let bad = || usage_err(format!("bad seed range '{text}', expected A..B"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let config = load_config(&args.source)?;
    let graph = load_graph(&args.instance, args.limits.weights.into()).map_err(input_err)?;
    let options = SolveOptions {
        cutoff: args.limits.cutoff(),
        target: args.target,
        clock: args.limits.clock(),
        record_trace: false,
    };
    let out = solve(&graph, &config, args.seed, &options).map_err(input_err)?;
    let id = args.instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let record = RunResult::from_outcome(&id, args.seed, args.target, &out);
    let clique: Vec<u32> = out.best_clique.iter().map(|v| v + 1).collect();
    if args.json {
        let value = serde_json::json!({ "result": record, "clique": clique });
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        println!("instance      {}", record.instance);
        println!("best_weight   {}", record.best_weight);
        println!("clique_size   {}", clique.len());
        println!("time_to_best  {:.6}", record.time_to_best);
        println!("elapsed       {:.6}", record.elapsed);
        println!("steps         {}", record.steps);
        println!("restarts      {}", record.restarts);
        if let Some(s) = record.success {
            println!("success       {s}");
        }
        let list: Vec<String> = clique.iter().map(ToString::to_string).collect();
        println!("clique        {}", list.join(" "));
    }
    Ok(())
}

fn output_paths(out: &Path) -> (PathBuf, PathBuf) {
    (out.with_extension("csv"), out.with_extension("json"))
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let config = load_config(&args.source)?;
    let specs = read_instance_list(&args.instance_list).map_err(input_err)?;
    let options = BatchOptions {
        seeds: parse_seeds(&args.seeds)?,
        cutoff: args.limits.cutoff(),
        jobs: args.jobs,
        clock: args.limits.clock(),
        weights: args.limits.weights.into(),
        stop_at_target: !args.no_early_exit,
    };
    let report = run_batch(&specs, &config, &options).map_err(input_err)?;
    if let Some(out) = &args.out {
        let (csv_path, json_path) = output_paths(out);
        fs::write(&csv_path, report.to_csv()).map_err(|e| input_err(format!("{}: {e}", csv_path.display())))?;
        fs::write(&json_path, report.to_json()).map_err(|e| input_err(format!("{}: {e}", json_path.display())))?;
    } else {
        print!("{}", report.to_csv());
    }
    eprintln!("{:<24} {:>5} {:>6} {:>12} {:>14} {:>10}", "instance", "runs", "#Suc", "w_max", "w_avg", "t_avg");
    for s in &report.stats.instances {
        eprintln!(
            "{:<24} {:>5} {:>6} {:>12} {:>14.2} {:>10.3}",
            s.instance, s.runs, s.successes, s.best_weight_max, s.best_weight_avg, s.t_avg
        );
    }
    if let Some(p) = report.stats.avg_par10_run {
        eprintln!("avgPAR10_run {p:.3}");
    }
    if let Some(p) = report.stats.avg_par10_instance {
        eprintln!("avgPAR10_instance {p:.3}");
    }
    for f in &report.failures {
        eprintln!("failed: {}: {}", f.instance, f.message);
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure(EXIT_PARTIAL, format!("{} instance(s) failed", report.failures.len())))
    }
}

fn cmd_configure(args: ConfigureArgs) -> Result<(), Failure> {
    let space = ParameterSpace::full();
    if let Some(path) = &args.space_out {
        let format = match args.format.as_str() {
            "pcs" => SpaceFormat::Pcs,
            "json" => SpaceFormat::Json,
            other => return Err(usage_err(format!("unknown format '{other}'"))),
        };
        return fs::write(path, space.export(format)).map_err(|e| input_err(format!("{}: {e}", path.display())));
    }
    let (Some(list), Some(budget)) = (&args.train, args.budget) else {
        return Err(usage_err("configure needs --space-out FILE or --train LIST --budget N"));
    };
    let weights: WeightMode = args.limits.weights.into();
    let mut training = Vec::new();
    for spec in read_instance_list(list).map_err(input_err)? {
        let graph = load_graph(&spec.path, weights).map_err(input_err)?;
        training.push(LoadedInstance { id: spec.id(), graph: graph.into(), target: spec.target });
    }
    let result =
        random_search_configure(&space, &training, budget, args.limits.cutoff(), args.seed).map_err(input_err)?;
    eprintln!("best mean NewSQ {:.6} over {} samples", result.best_score, result.evaluations.len());
    let json = result.best.to_json();
    match &args.out {
        Some(path) => fs::write(path, json).map_err(|e| input_err(format!("{}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Failure> {
    let graph = load_graph(&args.instance, args.weights.into()).map_err(input_err)?;
    let (weight, clique) = exact_oracle(&graph).map_err(input_err)?;
    let list: Vec<String> = clique.iter().map(|v| (v + 1).to_string()).collect();
    println!("optimum {weight}");
    println!("clique  {}", list.join(" "));
    Ok(())
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`wclique ... | head`) instead of panicking.
    #[cfg(unix)]
    // SAFETY: restoring the default disposition of SIGPIPE before any I/O.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Configure(a) => cmd_configure(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

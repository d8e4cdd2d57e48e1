//! Batch experiments: repeated seeded runs, success statistics, PAR10 and
//! NewSQ aggregation, and a random-search configurator.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::ClockKind;
use crate::config::{ConfigErrors, Configuration, ParameterSpace};
use crate::graph::{parse_dimacs, ParseError, VertexWeightedGraph, Weight};
use crate::search::{Cutoff, SearchContext, SearchParams, SolveOptions, SolveOutcome};

/// Penalty factor applied to the cutoff for unsuccessful runs.
pub const PAR_PENALTY: f64 = 10.0;

/// Configurator objective: negated weight plus time in thousands of seconds.
pub fn new_sq(best_weight: Weight, time_to_best: f64) -> f64 {
    -(best_weight as f64) + time_to_best / 1000.0
}

/// Penalized runtime of one run: time-to-target when successful, ten times
/// the cutoff otherwise.
pub fn par10(success: bool, time_to_best: f64, cutoff_seconds: f64) -> f64 {
    if success {
        time_to_best
    } else {
        PAR_PENALTY * cutoff_seconds
    }
}

/// One `(instance, seed)` run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub instance: String,
    pub seed: u64,
    pub best_weight: Weight,
    pub time_to_best: f64,
    pub elapsed: f64,
    pub steps: u64,
    pub restarts: u64,
    /// `None` when no target weight was given.
    pub success: Option<bool>,
}

impl RunResult {
    pub fn from_outcome(instance: &str, seed: u64, target: Option<Weight>, out: &SolveOutcome) -> Self {
        RunResult {
            instance: instance.to_string(),
            seed,
            best_weight: out.best_weight,
            time_to_best: out.time_to_best,
            elapsed: out.elapsed,
            steps: out.steps,
            restarts: out.restarts,
            success: target.map(|t| out.best_weight >= t),
        }
    }

    pub fn new_sq(&self) -> f64 {
        new_sq(self.best_weight, self.time_to_best)
    }

    pub fn par10(&self, cutoff_seconds: f64) -> Option<f64> {
        self.success.map(|s| par10(s, self.time_to_best, cutoff_seconds))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub instance: String,
    pub runs: usize,
    /// Number of successful runs (`#Suc`).
    pub successes: usize,
    pub success_rate: Option<f64>,
    /// Mean time-to-best over all runs.
    pub t_avg: f64,
    pub best_weight_max: Weight,
    pub best_weight_avg: f64,
    pub mean_new_sq: f64,
    pub mean_par10: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub instances: Vec<InstanceStats>,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: Option<f64>,
    pub t_avg: f64,
    /// Per-run NewSQ values in record order.
    pub new_sq: Vec<f64>,
    /// Per-run PAR10 values in record order (when targets and a time
    /// cutoff are known).
    pub par10: Vec<f64>,
    /// Mean PAR10 over all runs of all instances.
    #[serde(rename = "avgPAR10_run")]
    pub avg_par10_run: Option<f64>,
    /// Mean over instances of each instance's mean PAR10.
    #[serde(rename = "avgPAR10_instance")]
    pub avg_par10_instance: Option<f64>,
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, count) = xs.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Aggregates run records. Records are sorted by `(instance, seed)` first so
/// the result does not depend on completion order. PAR10 needs targets on
/// every run and a time cutoff.
pub fn compute_stats(runs: &[RunResult], cutoff_seconds: Option<f64>) -> BatchStats {
    let mut sorted: Vec<&RunResult> = runs.iter().collect();
    sorted.sort_by(|a, b| a.instance.cmp(&b.instance).then(a.seed.cmp(&b.seed)));

    let mut groups: BTreeMap<&str, Vec<&RunResult>> = BTreeMap::new();
    for r in &sorted {
        groups.entry(r.instance.as_str()).or_default().push(r);
    }

    let par10_of = |r: &RunResult| cutoff_seconds.and_then(|c| r.par10(c));
    let all_targeted = !sorted.is_empty() && sorted.iter().all(|r| r.success.is_some());

    let instances: Vec<InstanceStats> = groups
        .iter()
        .map(|(name, rs)| {
            let targeted = rs.iter().all(|r| r.success.is_some());
            let successes = rs.iter().filter(|r| r.success == Some(true)).count();
            let par: Vec<f64> = rs.iter().filter_map(|r| par10_of(r)).collect();
            InstanceStats {
                instance: name.to_string(),
                runs: rs.len(),
                successes,
                success_rate: targeted.then(|| successes as f64 / rs.len() as f64),
                t_avg: mean(rs.iter().map(|r| r.time_to_best)),
                best_weight_max: rs.iter().map(|r| r.best_weight).max().unwrap_or(0),
                best_weight_avg: mean(rs.iter().map(|r| r.best_weight as f64)),
                mean_new_sq: mean(rs.iter().map(|r| r.new_sq())),
                mean_par10: (par.len() == rs.len() && !par.is_empty()).then(|| mean(par.iter().copied())),
            }
        })
        .collect();

    let successes = sorted.iter().filter(|r| r.success == Some(true)).count();
    let par10: Vec<f64> = sorted.iter().filter_map(|r| par10_of(r)).collect();
    let have_par = all_targeted && cutoff_seconds.is_some();
    BatchStats {
        runs: sorted.len(),
        successes,
        success_rate: all_targeted.then(|| successes as f64 / sorted.len() as f64),
        t_avg: mean(sorted.iter().map(|r| r.time_to_best)),
        new_sq: sorted.iter().map(|r| r.new_sq()).collect(),
        avg_par10_run: have_par.then(|| mean(par10.iter().copied())),
        avg_par10_instance: have_par.then(|| mean(instances.iter().filter_map(|s| s.mean_par10))),
        par10,
        instances,
    }
}

/// How vertex weights are taken from instance files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `(i mod 200) + 1` for every vertex; `v` lines are ignored.
    #[default]
    Default,
    /// `v` lines where present, the modular rule elsewhere.
    Explicit,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
}

pub fn load_graph(path: &Path, weights: WeightMode) -> Result<VertexWeightedGraph, LoadError> {
    let file = fs::File::open(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    let graph = parse_dimacs(file).map_err(|source| LoadError::Parse { path: path.to_path_buf(), source })?;
    Ok(match weights {
        WeightMode::Default => graph.with_modular_weights(),
        WeightMode::Explicit => graph,
    })
}

/// An instance file with an optional target weight.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub path: PathBuf,
    pub target: Option<Weight>,
}

impl InstanceSpec {
    /// File stem used as the instance id in records.
    pub fn id(&self) -> String {
        self.path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.path.display().to_string())
    }
}

/// Reads an instance list: one `<path> [target]` per line; blank lines and
/// lines starting with `#` are skipped; relative paths resolve against the
/// list's directory.
pub fn read_instance_list(list: &Path) -> Result<Vec<InstanceSpec>, String> {
    let text = fs::read_to_string(list).map_err(|e| format!("cannot read {}: {e}", list.display()))?;
    let base = list.parent().unwrap_or(Path::new("."));
    let mut specs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let path = PathBuf::from(parts.next().expect("non-empty line"));
        let path = if path.is_relative() { base.join(path) } else { path };
        let target = match parts.next() {
            Some(t) => {
                Some(t.parse::<Weight>().map_err(|_| format!("{}:{}: bad target '{t}'", list.display(), i + 1))?)
            }
            None => None,
        };
        specs.push(InstanceSpec { path, target });
    }
    Ok(specs)
}

/// Settings shared by every run of a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchOptions {
    pub seeds: RangeInclusive<u64>,
    pub cutoff: Cutoff,
    pub jobs: usize,
    pub clock: ClockKind,
    pub weights: WeightMode,
    /// Stop each run once its instance target is reached.
    pub stop_at_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchFailure {
    pub instance: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub runs: Vec<RunResult>,
    pub stats: BatchStats,
    pub failures: Vec<BatchFailure>,
}

impl BatchReport {
    pub fn to_csv(&self) -> String {
        runs_to_csv(&self.runs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn runs_to_csv(runs: &[RunResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in runs {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

pub fn runs_from_csv(text: &str) -> Result<Vec<RunResult>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

/// A loaded instance ready to run.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub id: String,
    pub graph: Arc<VertexWeightedGraph>,
    pub target: Option<Weight>,
}

/// Loads every instance file, then runs one search per `(instance, seed)`.
/// Unreadable instances are skipped and reported in `failures`.
pub fn run_batch(
    instances: &[InstanceSpec],
    config: &Configuration,
    options: &BatchOptions,
) -> Result<BatchReport, ConfigErrors> {
    let params = SearchParams::try_from(config)?;
    let mut failures = Vec::new();
    let mut loaded = Vec::new();
    for spec in instances {
        match load_graph(&spec.path, options.weights) {
            Ok(g) => loaded.push(LoadedInstance { id: spec.id(), graph: Arc::new(g), target: spec.target }),
            Err(e) => {
                warn!("skipping instance: {e}");
                failures.push(BatchFailure { instance: spec.id(), message: e.to_string() });
            }
        }
    }
    let mut report = run_loaded(&loaded, &params, options);
    report.failures = failures;
    Ok(report)
}

/// Runs a batch over in-memory instances.
pub fn run_loaded(instances: &[LoadedInstance], params: &SearchParams, options: &BatchOptions) -> BatchReport {
    let units: Vec<(usize, u64)> =
        (0..instances.len()).flat_map(|i| options.seeds.clone().map(move |s| (i, s))).collect();
    let run_unit = |&(i, seed): &(usize, u64)| {
        let inst = &instances[i];
        let solve_options = SolveOptions {
            cutoff: options.cutoff,
            target: if options.stop_at_target { inst.target } else { None },
            clock: options.clock,
            record_trace: false,
        };
        let out = SearchContext::new(&inst.graph, params.clone(), seed).run(&solve_options);
        RunResult::from_outcome(&inst.id, seed, inst.target, &out)
    };
    let mut runs: Vec<RunResult> = match rayon::ThreadPoolBuilder::new().num_threads(options.jobs.max(1)).build() {
        Ok(pool) => pool.install(|| units.par_iter().map(run_unit).collect()),
        Err(e) => {
            warn!("thread pool unavailable ({e}); running sequentially");
            units.iter().map(run_unit).collect()
        }
    };
    runs.sort_by(|a, b| a.instance.cmp(&b.instance).then(a.seed.cmp(&b.seed)));
    let cutoff_seconds = match options.cutoff {
        Cutoff::Seconds(s) => Some(s),
        Cutoff::Steps(_) => None,
    };
    let stats = compute_stats(&runs, cutoff_seconds);
    BatchReport { runs, stats, failures: Vec::new() }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TuneError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("budget must be at least 1")]
    ZeroBudget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub best: Configuration,
    pub best_score: f64,
    /// Every sampled configuration with its mean NewSQ, in sampling order.
    pub evaluations: Vec<(Configuration, f64)>,
}

/// Mean NewSQ of `config` over the training set, one run per instance with
/// seed `run_seed`. Under a step budget times are counted in moves, which
/// makes the score deterministic.
pub fn evaluate_config(
    config: &Configuration,
    training: &[LoadedInstance],
    cutoff: Cutoff,
    run_seed: u64,
) -> Result<f64, ConfigErrors> {
    let params = SearchParams::try_from(config)?;
    let clock = match cutoff {
        Cutoff::Steps(_) => ClockKind::Steps,
        Cutoff::Seconds(_) => ClockKind::ThreadCpu,
    };
    let options = SolveOptions { cutoff, target: None, clock, record_trace: false };
    Ok(mean(training.iter().map(|inst| {
        let out = SearchContext::new(&inst.graph, params.clone(), run_seed).run(&options);
        new_sq(out.best_weight, out.time_to_best)
    })))
}

/// Samples `budget` configurations from `space` and returns the one with
/// the lowest mean NewSQ over `training`; ties go to the earlier sample.
pub fn random_search_configure(
    space: &ParameterSpace,
    training: &[LoadedInstance],
    budget: usize,
    cutoff: Cutoff,
    seed: u64,
) -> Result<TuneResult, TuneError> {
    if training.is_empty() {
        return Err(TuneError::EmptyTrainingSet);
    }
    if budget == 0 {
        return Err(TuneError::ZeroBudget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = Vec::with_capacity(budget);
    for _ in 0..budget {
        let config = space.sample(&mut rng);
        let score = match evaluate_config(&config, training, cutoff, seed) {
            Ok(s) => s,
            Err(e) => {
                warn!("sampled configuration rejected: {e}");
                continue;
            }
        };
        evaluations.push((config, score));
    }
    let i = lowest_score(&evaluations).expect("sampled configurations validate");
    let (best, best_score) = evaluations[i].clone();
    Ok(TuneResult { best, best_score, evaluations })
}

/// Index of the lowest score; the earliest wins ties.
fn lowest_score(evaluations: &[(Configuration, f64)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, (_, score)) in evaluations.iter().enumerate() {
        if best.is_none_or(|b| *score < evaluations[b].1) {
            best = Some(i);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    fn run(instance: &str, seed: u64, time: f64, success: Option<bool>) -> RunResult {
        RunResult {
            instance: instance.into(),
            seed,
            best_weight: 10,
            time_to_best: time,
            elapsed: time + 1.0,
            steps: 5,
            restarts: 0,
            success,
        }
    }

    #[test]
    fn new_sq_values() {
        assert!((new_sq(2995, 0.202) - -2994.999798).abs() < 1e-9);
        assert_eq!(new_sq(0, 0.0), 0.0);
        assert_eq!(new_sq(9, 1000.0), -8.0);
    }

    #[test]
    fn par10_failed_run() {
        assert_eq!(par10(false, 12.0, 3600.0), 36000.0);
        assert_eq!(par10(true, 12.0, 3600.0), 12.0);
    }

    #[test]
    fn stats_two_ways_of_averaging() {
        let runs = vec![
            run("a", 1, 1.0, Some(true)),
            run("a", 2, 3.0, Some(true)),
            run("a", 3, 5.0, Some(false)),
            run("b", 1, 2.0, Some(true)),
        ];
        let s = compute_stats(&runs, Some(10.0));
        assert_eq!(s.successes, 3);
        assert_eq!(s.success_rate, Some(0.75));
        // per-run: (1 + 3 + 100 + 2) / 4
        assert_eq!(s.avg_par10_run, Some(26.5));
        // per-instance: ((1 + 3 + 100) / 3 + 2) / 2
        let a = (1.0 + 3.0 + 100.0) / 3.0;
        assert_eq!(s.avg_par10_instance, Some((a + 2.0) / 2.0));
        assert_eq!(s.instances[0].successes, 2);
    }

    #[test]
    fn stats_order_independent() {
        let mut runs = vec![run("b", 2, 1.0, Some(true)), run("a", 1, 2.0, Some(false)), run("a", 2, 3.0, Some(true))];
        let s1 = compute_stats(&runs, Some(5.0));
        runs.reverse();
        assert_eq!(compute_stats(&runs, Some(5.0)), s1);
    }

    #[test]
    fn no_targets_no_par10() {
        let s = compute_stats(&[run("a", 1, 1.0, None)], Some(5.0));
        assert_eq!(s.success_rate, None);
        assert_eq!(s.avg_par10_run, None);
        assert!(s.par10.is_empty());
    }

    #[test]
    fn csv_header() {
        let csv = runs_to_csv(&[run("x", 1, 0.5, Some(true))]);
        assert!(csv.starts_with("instance,seed,best_weight,time_to_best,elapsed,steps,restarts,success\n"));
        assert_eq!(runs_from_csv(&csv).unwrap(), vec![run("x", 1, 0.5, Some(true))]);
    }

    #[test]
    fn ties_go_to_the_first_sample() {
        let a = Configuration::default();
        let b = preset("kes").unwrap();
        let evals = vec![(a.clone(), -9.0), (b.clone(), -9.0), (a.clone(), -8.0)];
        assert_eq!(lowest_score(&evals), Some(0));
        let evals = vec![(a.clone(), -8.0), (b, -9.0), (a, -9.0)];
        assert_eq!(lowest_score(&evals), Some(1));
        assert_eq!(lowest_score(&[]), None);
    }

    #[test]
    fn tune_rejects_empty_training() {
        let err = random_search_configure(&ParameterSpace::full(), &[], 3, Cutoff::Steps(10), 1).unwrap_err();
        assert_eq!(err, TuneError::EmptyTrainingSet);
    }
}

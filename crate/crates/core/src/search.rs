//! The solve loop: construction, random walk, and prohibition-aware
//! intensification over the add/swap/drop neighborhoods.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clique_state::CliqueState;
use crate::clock::{ClockKind, Stopwatch};
use crate::config::{ConfigErrors, Configuration};
use crate::graph::{Vertex, VertexWeightedGraph, Weight};
use crate::prohibition::{ProhibitionKind, ProhibitionState};

/// How ties between equally scored candidates are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    Random,
    /// Largest age wins; equal ages fall back to uniform random.
    Oldest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Random,
    WeightGreedy,
    DegreeGreedy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DropRule {
    Random,
    /// Random with the given probability, weight-based otherwise.
    Mixed(f64),
    /// Minimum-weight member (largest drop score).
    WeightBased,
}

/// Typed view of a [`Configuration`] used by the search. Fields are public
/// so tests and embedders can express settings outside the tuned domains
/// (for example a zero random-walk probability).
#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// Sample size for best-from-multiple selection over the swap set;
    /// `None` scans the whole set.
    pub bms_samples: Option<usize>,
    pub ties: TieRule,
    pub construction: Construction,
    pub drop_rule: DropRule,
    /// Restart probability after a non-improving intensification step.
    pub restart_prob: Option<f64>,
    /// Probability of a random-walk step in place of intensification.
    pub randomwalk_prob: Option<f64>,
    pub prohibition: ProhibitionKind,
    pub tabu_tenure: u64,
}

impl TryFrom<&Configuration> for SearchParams {
    type Error = ConfigErrors;

    fn try_from(c: &Configuration) -> Result<Self, Self::Error> {
        c.validate()?;
        Ok(SearchParams {
            bms_samples: if c.perform_bms { c.bms_num.map(|k| k as usize) } else { None },
            ties: if c.breaking_ties == 1 { TieRule::Oldest } else { TieRule::Random },
            construction: match c.init_construction {
                0 => Construction::Random,
                1 => Construction::WeightGreedy,
                _ => Construction::DegreeGreedy,
            },
            drop_rule: match c.drop_vertex {
                0 => DropRule::Random,
                1 => DropRule::Mixed(c.randomdrop_prob.expect("validated")),
                _ => DropRule::WeightBased,
            },
            restart_prob: if c.perform_restart { c.restart_prob } else { None },
            randomwalk_prob: if c.perform_randomwalk { c.randomwalk_prob } else { None },
            prohibition: ProhibitionKind::from_code(c.tabu_type).expect("validated"),
            tabu_tenure: c.tabu_tenure.map(u64::from).unwrap_or(0),
        })
    }
}

/// One move of the search, in 0-based vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Add(Vertex),
    Drop(Vertex),
    Swap { added: Vertex, removed: Vertex },
}

/// When a run stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    Seconds(f64),
    /// Total moves, for reproducible runs independent of machine speed.
    Steps(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub cutoff: Cutoff,
    /// Stop as soon as the best weight reaches this value.
    pub target: Option<Weight>,
    /// With [`ClockKind::Steps`] every reported time, and a `Seconds`
    /// cutoff, counts moves instead of seconds.
    pub clock: ClockKind,
    pub record_trace: bool,
}

impl SolveOptions {
    pub fn seconds(cutoff: f64) -> Self {
        SolveOptions { cutoff: Cutoff::Seconds(cutoff), target: None, clock: ClockKind::ThreadCpu, record_trace: false }
    }

    /// Step cutoff with the step clock, so the whole outcome is a function
    /// of (graph, parameters, seed).
    pub fn steps(steps: u64) -> Self {
        SolveOptions { cutoff: Cutoff::Steps(steps), target: None, clock: ClockKind::Steps, record_trace: false }
    }

    pub fn with_target(mut self, target: Option<Weight>) -> Self {
        self.target = target;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub best_weight: Weight,
    /// Best clique, 0-based, sorted.
    pub best_clique: Vec<Vertex>,
    /// Seconds until the best clique was first found.
    pub time_to_best: f64,
    pub elapsed: f64,
    pub steps: u64,
    pub restarts: u64,
    pub trace: Option<Vec<Move>>,
}

/// Keeps the best-scoring candidate under a tie rule. Ties are resolved by
/// reservoir sampling so that each tied candidate is equally likely.
struct Pick {
    best: Option<(Weight, u64, Vertex)>,
    ties: u32,
}

impl Pick {
    fn new() -> Self {
        Pick { best: None, ties: 0 }
    }

    #[inline]
    fn offer<R: Rng>(&mut self, score: Weight, age: u64, v: Vertex, rule: TieRule, rng: &mut R) {
        let age = if rule == TieRule::Oldest { age } else { 0 };
        match self.best {
            None => {
                self.best = Some((score, age, v));
                self.ties = 1;
            }
            Some((s, a, _)) => {
                if (score, age) > (s, a) {
                    self.best = Some((score, age, v));
                    self.ties = 1;
                } else if (score, age) == (s, a) {
                    self.ties += 1;
                    if rng.gen_range(0..self.ties) == 0 {
                        self.best = Some((score, age, v));
                    }
                }
            }
        }
    }

    fn get(&self) -> Option<(Weight, Vertex)> {
        self.best.map(|(s, _, v)| (s, v))
    }
}

/// State of one run over a shared graph.
pub struct SearchContext<'g> {
    graph: &'g VertexWeightedGraph,
    state: CliqueState<'g>,
    prohibition: ProhibitionState,
    params: SearchParams,
    rng: ChaCha8Rng,
    best_clique: Vec<Vertex>,
    best_weight: Weight,
    best_time: f64,
    clock: Stopwatch,
    steps_before_restart: u64,
    restarts: u64,
    trace: Option<Vec<Move>>,
}

impl<'g> SearchContext<'g> {
    pub fn new(graph: &'g VertexWeightedGraph, params: SearchParams, seed: u64) -> Self {
        let prohibition = ProhibitionState::new(params.prohibition, params.tabu_tenure, graph.num_vertices());
        SearchContext {
            graph,
            state: CliqueState::new(graph),
            prohibition,
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
            best_clique: Vec::new(),
            best_weight: 0,
            best_time: 0.0,
            clock: Stopwatch::start(ClockKind::ThreadCpu),
            steps_before_restart: 0,
            restarts: 0,
            trace: None,
        }
    }

    pub fn with_clock(mut self, kind: ClockKind) -> Self {
        self.clock = Stopwatch::start(kind);
        self
    }

    pub fn record_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn state(&self) -> &CliqueState<'g> {
        &self.state
    }

    pub fn prohibition(&self) -> &ProhibitionState {
        &self.prohibition
    }

    pub fn prohibition_mut(&mut self) -> &mut ProhibitionState {
        &mut self.prohibition
    }

    pub fn best_weight(&self) -> Weight {
        self.best_weight
    }

    pub fn best_clique(&self) -> &[Vertex] {
        &self.best_clique
    }

    pub fn trace(&self) -> Option<&[Move]> {
        self.trace.as_deref()
    }

    /// Moves over the whole run, across restarts.
    pub fn total_steps(&self) -> u64 {
        self.steps_before_restart + self.state.step()
    }

    /// Puts the current clique to `vertices` (must be a clique) by adds.
    /// Used by tests to start from a given state.
    pub fn set_clique(&mut self, vertices: &[Vertex]) {
        self.reset_run_state();
        for &v in vertices {
            self.state.add_vertex(v);
        }
        self.update_best();
    }

    fn now(&self) -> f64 {
        match self.clock.kind() {
            ClockKind::Steps => self.total_steps() as f64,
            _ => self.clock.elapsed(),
        }
    }

    fn reset_run_state(&mut self) {
        self.steps_before_restart += self.state.step();
        self.state.reset();
        self.prohibition.reset();
    }

    fn update_best(&mut self) {
        if self.state.weight() > self.best_weight {
            self.best_weight = self.state.weight();
            self.best_clique.clear();
            self.best_clique.extend_from_slice(self.state.members());
            self.best_time = self.now();
        }
    }

    fn do_add(&mut self, v: Vertex) {
        self.state.add_vertex(v);
        self.prohibition.on_add(self.graph.neighbors(v), self.state.step());
        if let Some(t) = &mut self.trace {
            t.push(Move::Add(v));
        }
        self.update_best();
    }

    fn do_drop(&mut self, v: Vertex) {
        self.state.drop_vertex(v);
        self.prohibition.on_drop(v, self.state.step());
        if let Some(t) = &mut self.trace {
            t.push(Move::Drop(v));
        }
    }

    fn do_swap(&mut self, added: Vertex, removed: Vertex) {
        let swap_set_size = self.state.swap_candidates().len();
        self.state.swap_pair(added, removed);
        self.prohibition.on_swap(removed, swap_set_size, self.state.step(), &mut self.rng);
        if let Some(t) = &mut self.trace {
            t.push(Move::Swap { added, removed });
        }
        self.update_best();
    }

    /// Resets the clique and builds a maximal clique by the configured rule.
    pub fn construct_initial(&mut self) {
        self.reset_run_state();
        let n = self.graph.num_vertices();
        if n == 0 {
            return;
        }
        match self.params.construction {
            Construction::Random => {
                while let Some(v) = self.state.add_candidates().choose(&mut self.rng) {
                    self.state.add_vertex(v);
                }
            }
            Construction::WeightGreedy | Construction::DegreeGreedy => {
                let seed = self.rng.gen_range(0..n) as Vertex;
                self.state.add_vertex(seed);
                loop {
                    let mut pick = Pick::new();
                    for &v in self.state.add_candidates().as_slice() {
                        let key = match self.params.construction {
                            Construction::WeightGreedy => self.graph.weight(v),
                            _ => self.graph.degree(v) as Weight,
                        };
                        pick.offer(key, 0, v, TieRule::Random, &mut self.rng);
                    }
                    match pick.get() {
                        Some((_, v)) => self.state.add_vertex(v),
                        None => break,
                    }
                }
            }
        }
        if let Some(t) = &mut self.trace {
            t.extend(self.state.members().iter().map(|&v| Move::Add(v)));
        }
        self.update_best();
    }

    /// One unconstrained random move: add, swap or drop with roughly equal
    /// odds, falling through when a set is empty.
    pub fn random_walk_step(&mut self) {
        let prob: u32 = self.rng.gen_range(0..100);
        if prob < 33 && !self.state.add_candidates().is_empty() {
            let v = self.state.add_candidates().choose(&mut self.rng).expect("non-empty");
            self.do_add(v);
        } else if prob < 67 && !self.state.swap_candidates().is_empty() {
            let u = self.state.swap_candidates().choose(&mut self.rng).expect("non-empty");
            let v = self.state.swap_partner(u);
            self.do_swap(u, v);
        } else if self.state.size() > 0 {
            let members = self.state.members();
            let v = members[self.rng.gen_range(0..members.len())];
            self.do_drop(v);
        }
    }

    fn best_add(&mut self) -> Option<(Weight, Vertex)> {
        let step = self.state.step();
        let mut pick = Pick::new();
        for &v in self.state.add_candidates().as_slice() {
            if !self.prohibition.is_forbidden(v, step) {
                pick.offer(self.state.add_score(v), self.state.age(v), v, self.params.ties, &mut self.rng);
            }
        }
        pick.get()
    }

    fn best_swap(&mut self) -> Option<(Weight, Vertex)> {
        let step = self.state.step();
        let mut pick = Pick::new();
        let candidates = self.state.swap_candidates();
        match self.params.bms_samples {
            Some(k) => {
                if candidates.is_empty() {
                    return None;
                }
                for _ in 0..k {
                    let u = candidates.choose(&mut self.rng).expect("non-empty");
                    if !self.prohibition.is_forbidden(u, step) {
                        let score = self.state.swap_score(u, self.state.swap_partner(u));
                        pick.offer(score, self.state.age(u), u, self.params.ties, &mut self.rng);
                    }
                }
            }
            None => {
                for &u in candidates.as_slice() {
                    if !self.prohibition.is_forbidden(u, step) {
                        let score = self.state.swap_score(u, self.state.swap_partner(u));
                        pick.offer(score, self.state.age(u), u, self.params.ties, &mut self.rng);
                    }
                }
            }
        }
        pick.get()
    }

    fn weight_based_drop(&mut self) -> Vertex {
        let mut pick = Pick::new();
        for &v in self.state.members() {
            pick.offer(self.state.drop_score(v), self.state.age(v), v, self.params.ties, &mut self.rng);
        }
        pick.get().expect("non-empty clique").1
    }

    fn random_drop(&mut self) -> Vertex {
        let members = self.state.members();
        members[self.rng.gen_range(0..members.len())]
    }

    fn select_drop(&mut self) -> Vertex {
        match self.params.drop_rule {
            DropRule::Random => self.random_drop(),
            DropRule::WeightBased => self.weight_based_drop(),
            DropRule::Mixed(p) => {
                if self.rng.gen::<f64>() < p {
                    self.random_drop()
                } else {
                    self.weight_based_drop()
                }
            }
        }
    }

    /// One greedy move among the non-forbidden add/swap candidates and the
    /// drop candidates.
    pub fn intensification_step(&mut self) {
        let add = self.best_add();
        let swap = self.best_swap();
        match add {
            Some((ascore, v)) => match swap {
                Some((sscore, u)) if ascore <= sscore => {
                    let out = self.state.swap_partner(u);
                    self.do_swap(u, out);
                }
                _ => self.do_add(v),
            },
            None if self.state.size() == 0 => {
                // Every vertex is forbidden on an empty clique.
                if let Some(v) = self.state.add_candidates().choose(&mut self.rng) {
                    self.do_add(v);
                }
            }
            None => {
                let dscore =
                    self.state.members().iter().map(|&v| self.state.drop_score(v)).max().expect("non-empty clique");
                match swap {
                    Some((sscore, u)) if dscore <= sscore => {
                        let out = self.state.swap_partner(u);
                        self.do_swap(u, out);
                    }
                    _ => {
                        let v = self.select_drop();
                        self.do_drop(v);
                    }
                }
            }
        }
        debug_assert!(self.state.weight() <= self.best_weight);
    }

    fn draw(&mut self, prob: Option<f64>) -> bool {
        match prob {
            Some(p) if p > 0.0 => self.rng.gen::<f64>() < p,
            _ => false,
        }
    }

    /// Runs the outer restart loop until the cutoff or target is reached.
    pub fn run(&mut self, options: &SolveOptions) -> SolveOutcome {
        if options.record_trace {
            self.record_trace();
        }
        self.clock = Stopwatch::start(options.clock);
        let stop = |ctx: &SearchContext| -> bool {
            if options.target.is_some_and(|t| ctx.best_weight >= t) {
                return true;
            }
            match options.cutoff {
                Cutoff::Steps(limit) => ctx.total_steps() >= limit,
                Cutoff::Seconds(limit) => ctx.now() >= limit,
            }
        };
        // Clock reads are batched; step cutoffs are checked every iteration.
        let check_every: u32 = if matches!(options.cutoff, Cutoff::Seconds(_)) { 32 } else { 1 };

        if self.graph.num_vertices() > 0 {
            'outer: while !stop(self) {
                self.construct_initial();
                let mut since_check = 0;
                loop {
                    since_check += 1;
                    if since_check >= check_every {
                        since_check = 0;
                        if stop(self) {
                            break 'outer;
                        }
                    }
                    if self.draw(self.params.randomwalk_prob) {
                        self.random_walk_step();
                        continue;
                    }
                    let before = self.state.weight();
                    self.intensification_step();
                    if self.state.weight() <= before && self.draw(self.params.restart_prob) {
                        self.restarts += 1;
                        continue 'outer;
                    }
                }
            }
        }

        let mut best_clique = self.best_clique.clone();
        best_clique.sort_unstable();
        SolveOutcome {
            best_weight: self.best_weight,
            best_clique,
            time_to_best: self.best_time,
            elapsed: self.now(),
            steps: self.total_steps(),
            restarts: self.restarts,
            trace: self.trace.clone(),
        }
    }
}

/// Validates `config` and runs one seeded search.
pub fn solve(
    graph: &VertexWeightedGraph,
    config: &Configuration,
    seed: u64,
    options: &SolveOptions,
) -> Result<SolveOutcome, ConfigErrors> {
    let params = SearchParams::try_from(config)?;
    Ok(SearchContext::new(graph, params, seed).run(options))
}

mod common;

use common::{is_clique, random_graph, random_weighted_graph, recompute};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wclique::search::{Move, SearchContext, SearchParams};
use wclique::{exact_oracle, preset, solve, Configuration, ProhibitionKind, SolveOptions, Vertex};

fn default_params() -> SearchParams {
    SearchParams::try_from(&Configuration::default()).unwrap()
}

#[test]
fn golden_trace() {
    use Move::*;
    let g = random_graph(20, 0.5, 7);
    let out = solve(&g, &Configuration::default(), 42, &SolveOptions::steps(40).with_trace()).unwrap();
    let s = |added, removed| Swap { added, removed };
    let expected = vec![
        Add(19),
        Add(3),
        Add(1),
        Add(14),
        Add(8),
        Drop(1),
        s(18, 3),
        s(16, 14),
        Add(15),
        Drop(8),
        s(0, 16),
        Drop(18),
        Add(6),
        Drop(6),
        Drop(19),
        Add(9),
        s(4, 0),
        s(11, 15),
        Add(7),
        s(16, 9),
        s(8, 4),
        s(18, 7),
        s(19, 11),
        s(14, 16),
        s(13, 14),
        Drop(18),
        Add(3),
        s(17, 19),
        s(10, 8),
        Add(2),
        Drop(13),
        Add(1),
        Drop(17),
        Drop(10),
        s(14, 2),
        s(9, 1),
        s(18, 3),
        Add(0),
        s(15, 14),
        s(19, 9),
    ];
    assert_eq!(out.trace.unwrap(), expected);
    assert_eq!(out.best_weight, 86);
    assert_eq!(out.best_clique, vec![8, 15, 16, 18, 19]);
}

#[test]
fn same_seed_same_run() {
    let g = random_weighted_graph(60, 0.6, 500, 5);
    for name in ["default", "bhoslib", "dimacs_mann", "dimacs_other", "kes", "ref"] {
        let c = preset(name).unwrap();
        let opts = SolveOptions::steps(5000).with_trace();
        let a = solve(&g, &c, 9, &opts).unwrap();
        let b = solve(&g, &c, 9, &opts).unwrap();
        assert_eq!(a.trace, b.trace, "{name}");
        assert_eq!(
            (a.best_weight, a.steps, a.restarts, &a.best_clique),
            (b.best_weight, b.steps, b.restarts, &b.best_clique)
        );
        assert_eq!(a.steps, 5000);
    }
}

#[test]
fn best_is_monotone_and_valid() {
    let g = random_weighted_graph(40, 0.5, 100, 2);
    for name in ["default", "bhoslib", "dimacs_mann", "ref"] {
        let params = SearchParams::try_from(&preset(name).unwrap()).unwrap();
        let mut ctx = SearchContext::new(&g, params, 3);
        ctx.construct_initial();
        let mut best = ctx.best_weight();
        for i in 0..3000 {
            if i % 7 == 0 {
                ctx.random_walk_step();
            } else {
                ctx.intensification_step();
            }
            assert!(ctx.best_weight() >= best);
            assert!(ctx.state().weight() <= ctx.best_weight());
            best = ctx.best_weight();
            assert!(is_clique(&g, ctx.best_clique()));
            let w: i64 = ctx.best_clique().iter().map(|&v| g.weight(v)).sum();
            assert_eq!(w, ctx.best_weight());
        }
    }
}

#[test]
fn intensification_improves_when_it_can() {
    // No walk, no restart, nothing ever forbidden, full swap scan.
    let params = SearchParams {
        bms_samples: None,
        restart_prob: None,
        randomwalk_prob: None,
        prohibition: ProhibitionKind::Tabu,
        tabu_tenure: 0,
        ..default_params()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..40u64 {
        let n = rng.gen_range(4..=12);
        let g = random_weighted_graph(n, rng.gen_range(0.2..0.9), 30, seed);
        for _ in 0..20 {
            // a random clique as the starting state
            let mut clique: Vec<Vertex> = Vec::new();
            for v in 0..n as Vertex {
                if rng.gen_bool(0.4) && clique.iter().all(|&u| g.is_edge(u, v)) {
                    clique.push(v);
                }
            }
            let mut ctx = SearchContext::new(&g, params.clone(), seed);
            ctx.set_clique(&clique);
            let before = ctx.state().weight();
            let r = recompute(&g, &clique);
            let improving = !r.add.is_empty() || r.swap.iter().any(|&(u, v)| g.weight(u) > g.weight(v));
            ctx.intensification_step();
            if improving {
                assert!(ctx.state().weight() > before, "n={n} clique={clique:?}");
            }
        }
    }
}

#[test]
fn zero_walk_probability_matches_disabled_walk() {
    let g = random_weighted_graph(50, 0.5, 200, 8);
    for base in ["default", "bhoslib", "ref"] {
        let p = SearchParams::try_from(&preset(base).unwrap()).unwrap();
        let off = SearchParams { randomwalk_prob: None, ..p.clone() };
        let zero = SearchParams { randomwalk_prob: Some(0.0), ..p.clone() };
        let opts = SolveOptions::steps(3000).with_trace();
        let a = SearchContext::new(&g, off, 5).run(&opts);
        let b = SearchContext::new(&g, zero, 5).run(&opts);
        assert_eq!(a.trace, b.trace, "{base}");
        assert_eq!(a.best_weight, b.best_weight);
    }
}

#[test]
fn never_beats_the_oracle() {
    for seed in 0..12u64 {
        let g = random_weighted_graph(24, 0.5, 200, 100 + seed);
        let (opt, _) = exact_oracle(&g).unwrap();
        for name in ["default", "dimacs_other", "kes"] {
            let out = solve(&g, &preset(name).unwrap(), seed, &SolveOptions::steps(2000)).unwrap();
            assert!(out.best_weight <= opt);
            assert!(is_clique(&g, &out.best_clique));
        }
    }
}

#[test]
fn target_stops_early() {
    let g = random_graph(16, 0.5, 3);
    let (opt, _) = exact_oracle(&g).unwrap();
    let out = solve(&g, &Configuration::default(), 1, &SolveOptions::seconds(5.0).with_target(Some(opt))).unwrap();
    assert_eq!(out.best_weight, opt);
    assert!(out.elapsed < 5.0);
}

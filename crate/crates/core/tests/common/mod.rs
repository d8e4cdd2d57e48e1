#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wclique::clique_state::CliqueState;
use wclique::{ProhibitionKind, ProhibitionState, Vertex, VertexWeightedGraph, Weight};

/// G(n, p) with the modular default weights.
pub fn random_graph(n: usize, p: f64, seed: u64) -> VertexWeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    VertexWeightedGraph::from_edges(n, &edges, None).unwrap()
}

/// G(n, p) with weights drawn uniformly from 1..=max_w.
pub fn random_weighted_graph(n: usize, p: f64, max_w: Weight, seed: u64) -> VertexWeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let weights = (0..n).map(|_| rng.gen_range(1..=max_w)).collect();
    VertexWeightedGraph::from_edges(n, &edges, Some(weights)).unwrap()
}

/// Candidate sets recomputed from scratch.
#[derive(Debug, PartialEq, Eq)]
pub struct Recomputed {
    pub add: Vec<Vertex>,
    /// (entering, leaving) pairs.
    pub swap: Vec<(Vertex, Vertex)>,
    pub drop: Vec<Vertex>,
    pub weight: Weight,
}

pub fn recompute(g: &VertexWeightedGraph, members: &[Vertex]) -> Recomputed {
    let n = g.num_vertices() as Vertex;
    let mut drop = members.to_vec();
    drop.sort_unstable();
    let mut add = Vec::new();
    let mut swap = Vec::new();
    for u in 0..n {
        if drop.binary_search(&u).is_ok() {
            continue;
        }
        let missing: Vec<Vertex> = drop.iter().copied().filter(|&v| !g.is_edge(u, v)).collect();
        match missing.len() {
            0 => add.push(u),
            1 => swap.push((u, missing[0])),
            _ => {}
        }
    }
    let weight = drop.iter().map(|&v| g.weight(v)).sum();
    Recomputed { add, swap, drop, weight }
}

/// The incremental view of the same sets, sorted.
pub fn observed(s: &CliqueState) -> Recomputed {
    let mut add = s.add_candidates().as_slice().to_vec();
    add.sort_unstable();
    let mut swap: Vec<(Vertex, Vertex)> =
        s.swap_candidates().as_slice().iter().map(|&u| (u, s.swap_partner(u))).collect();
    swap.sort_unstable();
    let mut drop = s.members().to_vec();
    drop.sort_unstable();
    Recomputed { add, swap, drop, weight: s.weight() }
}

pub fn is_clique(g: &VertexWeightedGraph, vs: &[Vertex]) -> bool {
    vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.is_edge(a, b)))
}

/// A random legal move on `s`: add, swap or drop, each when available.
pub enum RandomMove {
    Add(Vertex),
    Swap(Vertex, Vertex),
    Drop(Vertex),
}

pub fn random_move<R: Rng>(s: &CliqueState, rng: &mut R) -> RandomMove {
    loop {
        match rng.gen_range(0..3) {
            0 if !s.add_candidates().is_empty() => return RandomMove::Add(s.add_candidates().choose(rng).unwrap()),
            1 if !s.swap_candidates().is_empty() => {
                let u = s.swap_candidates().choose(rng).unwrap();
                return RandomMove::Swap(u, s.swap_partner(u));
            }
            2 if s.size() > 0 => {
                let m = s.members();
                return RandomMove::Drop(m[rng.gen_range(0..m.len())]);
            }
            _ => {}
        }
    }
}

/// c-fat500-10 rebuilt from the c-fat generator rule: vertex i (1-based)
/// lies in part (i-1) mod 8 and two vertices are adjacent iff their parts
/// are equal or neighbors on the 8-cycle.
pub fn c_fat500_10() -> VertexWeightedGraph {
    let n = 500usize;
    let k = 8usize;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let d = (u % k + k - v % k) % k;
            if d == 0 || d == 1 || d == k - 1 {
                edges.push((u, v));
            }
        }
    }
    VertexWeightedGraph::from_edges(n, &edges, None).unwrap()
}

/// MANN_a27 rebuilt as the complement of the clique formulation of the
/// Steiner triple covering problem over STS(27). The triple system comes
/// from two tripling steps applied to {1,2,3}: element (j, k) of copy k is
/// 3(j-1)+k+1, each old triple (a,b,c) yields (a,x),(b,y),(c,z) with
/// x+y+z = 0 mod 3, and the new triples are followed by the identity
/// triples {(j,0),(j,1),(j,2)}. Vertex ids put the 27 columns first, then
/// one vertex per (row, element) with rows in sorted order. Non-edges join
/// the three vertices of a row and each row vertex to its column.
pub fn mann_a27() -> VertexWeightedGraph {
    let id = |j: usize, k: usize| (j - 1) * 3 + k + 1;
    let mut rows: Vec<[usize; 3]> = vec![[1, 2, 3]];
    let mut n = 3;
    for _ in 0..2 {
        let mut next = Vec::new();
        for &[a, b, c] in &rows {
            for x in 0..3 {
                for y in 0..3 {
                    let z = (6 - x - y) % 3;
                    next.push([id(a, x), id(b, y), id(c, z)]);
                }
            }
        }
        next.extend((1..=n).map(|j| [id(j, 0), id(j, 1), id(j, 2)]));
        rows = next;
        n *= 3;
    }
    rows.sort_unstable();
    let total = n + 3 * rows.len();
    let mut apart = vec![false; total * total];
    let mut cut = |a: usize, b: usize| {
        apart[a * total + b] = true;
        apart[b * total + a] = true;
    };
    for (r, row) in rows.iter().enumerate() {
        let base = n + 3 * r;
        for (i, &element) in row.iter().enumerate() {
            cut(base + i, element - 1);
            for k in i + 1..3 {
                cut(base + i, base + k);
            }
        }
    }
    let mut edges = Vec::new();
    for u in 0..total {
        for v in u + 1..total {
            if !apart[u * total + v] {
                edges.push((u, v));
            }
        }
    }
    VertexWeightedGraph::from_edges(total, &edges, None).unwrap()
}

/// Doubles printed the way the published parameter tables print them
/// (`1.0E-4`, `0.0021339029487367554`, `5.016696977394702E-5`).
pub fn table_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-3..1e7).contains(&a) {
        let s = format!("{x}");
        if s.contains('.') {
            s
        } else {
            format!("{s}.0")
        }
    } else {
        let s = format!("{x:e}");
        let (m, e) = s.split_once('e').unwrap();
        let m = if m.contains('.') { m.to_string() } else { format!("{m}.0") };
        format!("{m}E{e}")
    }
}

/// Active parameters of `c` as `name=value` strings in table notation.
pub fn table_entries(c: &wclique::Configuration) -> std::collections::BTreeSet<String> {
    let b = |x: bool| if x { "True" } else { "False" }.to_string();
    let mut out = std::collections::BTreeSet::new();
    let n = c.normalized();
    out.insert(format!("perform_BMS={}", b(n.perform_bms)));
    if let Some(k) = n.bms_num {
        out.insert(format!("bms_num={k}"));
    }
    out.insert(format!("breaking_ties={}", n.breaking_ties));
    out.insert(format!("init_construction={}", n.init_construction));
    out.insert(format!("drop_vertex={}", n.drop_vertex));
    if let Some(p) = n.randomdrop_prob {
        out.insert(format!("randomdrop_prob={p}"));
    }
    out.insert(format!("perform_restart={}", b(n.perform_restart)));
    if let Some(p) = n.restart_prob {
        out.insert(format!("restart_prob={}", table_number(p)));
    }
    out.insert(format!("perform_randomwalk={}", b(n.perform_randomwalk)));
    if let Some(p) = n.randomwalk_prob {
        out.insert(format!("randomwalk_prob={}", table_number(p)));
    }
    out.insert(format!("tabu_type={}", n.tabu_type));
    if let Some(t) = n.tabu_tenure {
        out.insert(format!("tabu_tenure={t}"));
    }
    out
}

/// Parameter rows as printed in the published tables, keyed by preset name.
pub const PUBLISHED_PRESETS: [(&str, &str); 6] = [
    ("default", "perform_BMS=True, bms_num=50, breaking_ties=0, init_construction=0, drop_vertex=0, perform_restart=False, perform_randomwalk=True, randomwalk_prob=1.0E-4, tabu_type=1, tabu_tenure=7"),
    ("bhoslib", "perform_BMS=False, breaking_ties=1, init_construction=1, drop_vertex=0, perform_restart=True, perform_randomwalk=True, restart_prob=5.016696977394702E-5, randomwalk_prob=0.09733547356349166, tabu_type=1, tabu_tenure=5"),
    ("dimacs_mann", "perform_BMS=False, breaking_ties=1, init_construction=1, drop_vertex=1, perform_restart=False, perform_randomwalk=True, randomdrop_prob=0.1, randomwalk_prob=0.0021339029487367554, tabu_type=0"),
    ("dimacs_other", "perform_BMS=False, breaking_ties=1, init_construction=0, drop_vertex=0, perform_restart=True, perform_randomwalk=True, restart_prob=3.459685410644107E-5, randomwalk_prob=0.00994485968433248, tabu_type=1, tabu_tenure=8"),
    ("kes", "perform_BMS=True, bms_num=6, breaking_ties=1, init_construction=0, drop_vertex=2, perform_restart=True, perform_randomwalk=False, restart_prob=2.7775287025690946E-5, tabu_type=1, tabu_tenure=30"),
    ("ref", "perform_BMS=True, bms_num=16, breaking_ties=1, init_construction=0, drop_vertex=1, perform_restart=True, perform_randomwalk=False, randomdrop_prob=0.4, restart_prob=9.44211698679448E-6, tabu_type=2, tabu_tenure=8"),
];

pub fn published_entries(row: &str) -> std::collections::BTreeSet<String> {
    row.split(", ").map(str::to_string).collect()
}

#[derive(Debug, Clone, Copy)]
pub enum Event {
    Added(Vertex),
    SwappedIn(Vertex),
    Removed { v: Vertex, until: u64 },
}

/// Forbidden status derived from the event log alone.
pub fn forbidden_by_log(
    kind: ProhibitionKind,
    g: &VertexWeightedGraph,
    log: &[(u64, Event)],
    x: Vertex,
    s: u64,
) -> bool {
    let Some(pos) = log.iter().rposition(|(_, e)| matches!(e, Event::Removed { v, .. } if *v == x)) else {
        return false;
    };
    let (r, until) = match log[pos] {
        (r, Event::Removed { until, .. }) => (r, until),
        _ => unreachable!(),
    };
    let later = log[pos + 1..].iter().filter(|(t, _)| *t > r && *t <= s);
    match kind {
        ProhibitionKind::Scc => !later.clone().any(|(_, e)| matches!(e, Event::Added(y) if g.is_edge(*y, x))),
        ProhibitionKind::Tabu => s < until,
        ProhibitionKind::TabuCc => {
            s < until && !later.clone().any(|(_, e)| matches!(e, Event::Added(y) if g.is_edge(*y, x)))
        }
    }
}

/// Drives random legal moves and compares every forbidden flag with the
/// event-log derivation.
pub fn check_prohibition_trace(kind: ProhibitionKind, tenure: u64, seed: u64, moves: usize) -> Result<(), String> {
    let g = random_weighted_graph(40, 0.5, 100, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = CliqueState::new(&g);
    let mut p = ProhibitionState::new(kind, tenure, 40);
    let mut log: Vec<(u64, Event)> = Vec::new();
    for _ in 0..moves {
        match random_move(&s, &mut rng) {
            RandomMove::Add(v) => {
                s.add_vertex(v);
                p.on_add(g.neighbors(v), s.step());
                log.push((s.step(), Event::Added(v)));
            }
            RandomMove::Drop(v) => {
                s.drop_vertex(v);
                p.on_drop(v, s.step());
                let until = p.tabu_until().get(v as usize).copied().unwrap_or(0);
                if kind != ProhibitionKind::Scc && until != s.step() + tenure {
                    return Err(format!("drop tenure {} at step {}", until, s.step()));
                }
                log.push((s.step(), Event::Removed { v, until }));
            }
            RandomMove::Swap(u, v) => {
                let k = s.swap_candidates().len() as u64;
                s.swap_pair(u, v);
                p.on_swap(v, k as usize, s.step(), &mut rng);
                let until = p.tabu_until().get(v as usize).copied().unwrap_or(0);
                if kind != ProhibitionKind::Scc {
                    let tt = until - s.step();
                    if !(tenure..=tenure + k - 1).contains(&tt) {
                        return Err(format!("swap tenure {tt} outside [{tenure}, {}]", tenure + k - 1));
                    }
                }
                log.push((s.step(), Event::SwappedIn(u)));
                log.push((s.step(), Event::Removed { v, until }));
            }
        }
        // Mode isolation: the other mechanism's state is never touched.
        let isolated = match kind {
            ProhibitionKind::Scc => p.tabu_until().is_empty(),
            _ => p.conf_change().is_empty(),
        };
        if !isolated || (p.kind(), p.tenure()) != (kind, tenure) {
            return Err("mode isolation violated".into());
        }
        let step = s.step();
        for x in 0..40 {
            if !s.contains(x) && p.is_forbidden(x, step) != forbidden_by_log(kind, &g, &log, x, step) {
                return Err(format!("{kind:?}: vertex {x} at step {step}"));
            }
        }
    }
    Ok(())
}

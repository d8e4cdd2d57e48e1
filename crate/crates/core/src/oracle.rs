//! Exact maximum weight clique for small graphs, used to check the local
//! search. Branch and bound over 64-bit vertex masks, pruned by the total
//! weight of the remaining candidates.

use thiserror::Error;

use crate::graph::{Vertex, VertexWeightedGraph, Weight};

/// Largest graph the exact search accepts.
pub const ORACLE_MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph has {0} vertices; the exact oracle handles at most {ORACLE_MAX_VERTICES}")]
pub struct OracleTooLarge(pub usize);

struct Search<'a> {
    adj: Vec<u64>,
    weights: &'a [Weight],
    best_weight: Weight,
    best_set: u64,
}

impl Search<'_> {
    fn mask_weight(&self, mut mask: u64) -> Weight {
        let mut total = 0;
        while mask != 0 {
            total += self.weights[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        total
    }

    fn expand(&mut self, candidates: u64, current: u64, weight: Weight) {
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best_set = current;
        }
        if candidates == 0 || weight + self.mask_weight(candidates) <= self.best_weight {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u64 << v;
        self.expand(candidates & self.adj[v], current | bit, weight + self.weights[v]);
        self.expand(candidates & !bit, current, weight);
    }
}

/// Optimal weight and one optimal clique (0-based, sorted).
pub fn exact_oracle(graph: &VertexWeightedGraph) -> Result<(Weight, Vec<Vertex>), OracleTooLarge> {
    let n = graph.num_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleTooLarge(n));
    }
    let adj: Vec<u64> = (0..n as Vertex).map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | 1u64 << u)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search { adj, weights: graph.weights(), best_weight: 0, best_set: 0 };
    search.expand(all, 0, 0);
    let clique = (0..n as Vertex).filter(|&v| search.best_set >> v & 1 == 1).collect();
    Ok((search.best_weight, clique))
}

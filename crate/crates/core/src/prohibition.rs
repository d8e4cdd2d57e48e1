//! Mechanisms that forbid recently removed vertices from re-entering the
//! clique: strong configuration checking, tabu tenure, and tabu tenure with
//! neighbor lifting.
//!
//! Steps are counted as in [`CliqueState::step`](crate::clique_state::CliqueState::step):
//! the number of moves completed so far. A notification made right after the
//! move numbered `s` passes `step = s`; a query made while choosing the next
//! move passes the current count.

use rand::Rng;

use crate::graph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProhibitionKind {
    /// Strong configuration checking: a removed vertex stays forbidden until
    /// one of its neighbors enters the clique.
    Scc,
    /// Removed vertices are forbidden for a tenure.
    Tabu,
    /// Tenure as in `Tabu`, lifted for every neighbor of an added vertex.
    TabuCc,
}

impl ProhibitionKind {
    /// Maps the `tabu_type` configuration code.
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(ProhibitionKind::Scc),
            1 => Some(ProhibitionKind::Tabu),
            2 => Some(ProhibitionKind::TabuCc),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            ProhibitionKind::Scc => 0,
            ProhibitionKind::Tabu => 1,
            ProhibitionKind::TabuCc => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProhibitionState {
    kind: ProhibitionKind,
    tenure: u64,
    tabu_until: Vec<u64>,
    conf_change: Vec<bool>,
}

impl ProhibitionState {
    /// Fresh state: nothing is forbidden. `tenure` is ignored in SCC mode.
    pub fn new(kind: ProhibitionKind, tenure: u64, n: usize) -> Self {
        let (tabu_until, conf_change) = match kind {
            ProhibitionKind::Scc => (Vec::new(), vec![true; n]),
            ProhibitionKind::Tabu | ProhibitionKind::TabuCc => (vec![0; n], Vec::new()),
        };
        ProhibitionState { kind, tenure, tabu_until, conf_change }
    }

    pub fn reset(&mut self) {
        self.tabu_until.iter_mut().for_each(|t| *t = 0);
        self.conf_change.iter_mut().for_each(|c| *c = true);
    }

    pub fn kind(&self) -> ProhibitionKind {
        self.kind
    }

    pub fn tenure(&self) -> u64 {
        self.tenure
    }

    /// Per-vertex "allowed" flags (SCC mode only; empty otherwise).
    pub fn conf_change(&self) -> &[bool] {
        &self.conf_change
    }

    /// Per-vertex first step at which re-entry is allowed (tenure modes only;
    /// empty otherwise).
    pub fn tabu_until(&self) -> &[u64] {
        &self.tabu_until
    }

    /// Whether `v` (not in the clique) may not enter it at `step`.
    #[inline]
    pub fn is_forbidden(&self, v: Vertex, step: u64) -> bool {
        match self.kind {
            ProhibitionKind::Scc => !self.conf_change[v as usize],
            ProhibitionKind::Tabu | ProhibitionKind::TabuCc => step < self.tabu_until[v as usize],
        }
    }

    /// `v` was added by an add move at `step`.
    pub fn on_add(&mut self, neighbors: &[Vertex], step: u64) {
        match self.kind {
            ProhibitionKind::Scc => self.lift_scc(neighbors),
            ProhibitionKind::Tabu => {}
            ProhibitionKind::TabuCc => {
                for &u in neighbors {
                    let t = &mut self.tabu_until[u as usize];
                    *t = (*t).min(step);
                }
            }
        }
    }

    /// `v` was removed by a drop move at `step`.
    pub fn on_drop(&mut self, v: Vertex, step: u64) {
        match self.kind {
            ProhibitionKind::Scc => self.conf_change[v as usize] = false,
            ProhibitionKind::Tabu | ProhibitionKind::TabuCc => {
                self.tabu_until[v as usize] = step + self.tenure;
            }
        }
    }

    /// `v_out` left by a swap at `step`; `swap_set_size` is `|V_swap(C)|`
    /// measured before the move. Neither SCC nor TabuCC lifts anything on a
    /// swap: only add moves release neighbors.
    pub fn on_swap<R: Rng + ?Sized>(&mut self, v_out: Vertex, swap_set_size: usize, step: u64, rng: &mut R) {
        match self.kind {
            ProhibitionKind::Scc => self.conf_change[v_out as usize] = false,
            ProhibitionKind::Tabu | ProhibitionKind::TabuCc => {
                let extra = if swap_set_size > 0 { rng.gen_range(0..swap_set_size) as u64 } else { 0 };
                self.tabu_until[v_out as usize] = step + extra + self.tenure;
            }
        }
    }

    fn lift_scc(&mut self, neighbors: &[Vertex]) {
        for &u in neighbors {
            self.conf_change[u as usize] = true;
        }
    }
}

//! The current clique together with its add/swap/drop neighborhoods.
//!
//! Per vertex we keep `connect[u] = |N(u) ∩ C|` and the XOR of the ids of
//! the clique members adjacent to `u`. For `u ∉ C` with exactly one
//! non-adjacent member, that member is `xor(C) ^ xor_adj[u]`, so swap
//! partners never need to be searched for. The add and swap sets are kept as
//! indexed sets so that membership, iteration and uniform sampling are O(1)
//! per element.

use rand::Rng;

use crate::graph::{Vertex, VertexWeightedGraph, Weight};

const ABSENT: u32 = u32::MAX;

/// Unordered set over `0..n` with O(1) insert, remove, membership and
/// uniform sampling.
#[derive(Debug, Clone)]
pub struct IndexedSet {
    items: Vec<Vertex>,
    pos: Vec<u32>,
}

impl IndexedSet {
    pub fn new(n: usize) -> Self {
        IndexedSet { items: Vec::with_capacity(n), pos: vec![ABSENT; n] }
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.pos[v as usize] != ABSENT
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) {
        if !self.contains(v) {
            self.pos[v as usize] = self.items.len() as u32;
            self.items.push(v);
        }
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) {
        let p = self.pos[v as usize];
        if p == ABSENT {
            return;
        }
        let last = self.items.pop().expect("non-empty");
        if last != v {
            self.items[p as usize] = last;
            self.pos[last as usize] = p;
        }
        self.pos[v as usize] = ABSENT;
    }

    pub fn clear(&mut self) {
        for &v in &self.items {
            self.pos[v as usize] = ABSENT;
        }
        self.items.clear();
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[Vertex] {
        &self.items
    }

    pub fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vertex> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.gen_range(0..self.items.len())])
        }
    }
}

/// Current clique `C`, its candidate sets, and vertex ages.
#[derive(Debug, Clone)]
pub struct CliqueState<'g> {
    graph: &'g VertexWeightedGraph,
    clique: IndexedSet,
    weight: Weight,
    connect: Vec<u32>,
    xor_adj: Vec<Vertex>,
    xor_all: Vertex,
    add_set: IndexedSet,
    swap_set: IndexedSet,
    last_change: Vec<u64>,
    step: u64,
}

impl<'g> CliqueState<'g> {
    /// Empty clique; every vertex is treated as having changed at step 0.
    pub fn new(graph: &'g VertexWeightedGraph) -> Self {
        let n = graph.num_vertices();
        let mut add_set = IndexedSet::new(n);
        for v in 0..n as Vertex {
            add_set.insert(v);
        }
        CliqueState {
            graph,
            clique: IndexedSet::new(n),
            weight: 0,
            connect: vec![0; n],
            xor_adj: vec![0; n],
            xor_all: 0,
            add_set,
            swap_set: IndexedSet::new(n),
            last_change: vec![0; n],
            step: 0,
        }
    }

    /// Back to the empty clique with step 0 and all ages 0.
    pub fn reset(&mut self) {
        let members: Vec<Vertex> = self.clique.as_slice().to_vec();
        for v in members {
            for &u in self.graph.neighbors(v) {
                self.connect[u as usize] = 0;
                self.xor_adj[u as usize] = 0;
            }
        }
        self.clique.clear();
        self.weight = 0;
        self.xor_all = 0;
        self.swap_set.clear();
        for v in 0..self.graph.num_vertices() as Vertex {
            self.add_set.insert(v);
        }
        self.last_change.iter_mut().for_each(|s| *s = 0);
        self.step = 0;
    }

    pub fn graph(&self) -> &'g VertexWeightedGraph {
        self.graph
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.clique.contains(v)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.clique.len()
    }

    /// Members of `C` in unspecified order (this is also `V_drop`).
    #[inline]
    pub fn members(&self) -> &[Vertex] {
        self.clique.as_slice()
    }

    #[inline]
    pub fn weight(&self) -> Weight {
        self.weight
    }

    /// `V_add(C)`.
    #[inline]
    pub fn add_candidates(&self) -> &IndexedSet {
        &self.add_set
    }

    /// Entering vertices of `V_swap(C)`; pair each with [`Self::swap_partner`].
    #[inline]
    pub fn swap_candidates(&self) -> &IndexedSet {
        &self.swap_set
    }

    /// The unique member of `C` not adjacent to `u`, for `u` in the swap set.
    #[inline]
    pub fn swap_partner(&self, u: Vertex) -> Vertex {
        debug_assert!(self.swap_set.contains(u));
        self.xor_all ^ self.xor_adj[u as usize]
    }

    /// `|N(u) ∩ C|`.
    #[inline]
    pub fn connect_count(&self, u: Vertex) -> usize {
        self.connect[u as usize] as usize
    }

    /// Moves performed since construction or the last reset.
    #[inline]
    pub fn step(&self) -> u64 {
        self.step
    }

    /// Steps since `v` last entered or left `C`.
    #[inline]
    pub fn age(&self, v: Vertex) -> u64 {
        self.step - self.last_change[v as usize]
    }

    #[inline]
    pub fn add_score(&self, v: Vertex) -> Weight {
        self.graph.weight(v)
    }

    #[inline]
    pub fn swap_score(&self, u: Vertex, v: Vertex) -> Weight {
        self.graph.weight(u) - self.graph.weight(v)
    }

    #[inline]
    pub fn drop_score(&self, v: Vertex) -> Weight {
        -self.graph.weight(v)
    }

    /// `C := C ∪ {v}` for `v ∈ V_add(C)`.
    pub fn add_vertex(&mut self, v: Vertex) {
        debug_assert!(self.add_set.contains(v), "add of {v} outside V_add");
        self.insert_member(v);
        self.step += 1;
        self.last_change[v as usize] = self.step;
    }

    /// `C := C \ {v}` for `v ∈ C`.
    pub fn drop_vertex(&mut self, v: Vertex) {
        debug_assert!(self.clique.contains(v), "drop of non-member {v}");
        self.remove_member(v);
        self.step += 1;
        self.last_change[v as usize] = self.step;
    }

    /// `C := C \ {v} ∪ {u}` for the swap pair `⟨u, v⟩`; counts as one step.
    pub fn swap_pair(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(self.swap_set.contains(u) && self.swap_partner(u) == v, "swap ⟨{u},{v}⟩ outside V_swap");
        self.remove_member(v);
        self.insert_member(u);
        self.step += 1;
        self.last_change[u as usize] = self.step;
        self.last_change[v as usize] = self.step;
    }

    fn insert_member(&mut self, v: Vertex) {
        let g = self.graph;
        let size_before = self.clique.len() as u32;
        for &u in g.neighbors(v) {
            self.connect[u as usize] += 1;
            self.xor_adj[u as usize] ^= v;
        }
        self.clique.insert(v);
        self.weight += g.weight(v);
        self.xor_all ^= v;
        self.add_set.remove(v);

        // Swap candidates whose partner stays (adjacent to v) remain; the
        // others now miss two members.
        let mut i = 0;
        while i < self.swap_set.len() {
            let u = self.swap_set.as_slice()[i];
            if g.is_edge(u, v) {
                i += 1;
            } else {
                self.swap_set.remove(u);
            }
        }
        // Add candidates not adjacent to v now miss exactly v.
        let mut i = 0;
        while i < self.add_set.len() {
            let u = self.add_set.as_slice()[i];
            if g.is_edge(u, v) {
                i += 1;
            } else {
                self.add_set.remove(u);
                self.swap_set.insert(u);
            }
        }
        debug_assert_eq!(self.clique.len() as u32, size_before + 1);
    }

    fn remove_member(&mut self, v: Vertex) {
        let g = self.graph;
        for &u in g.neighbors(v) {
            self.connect[u as usize] -= 1;
            self.xor_adj[u as usize] ^= v;
        }
        self.clique.remove(v);
        self.weight -= g.weight(v);
        self.xor_all ^= v;
        let size = self.clique.len() as u32;

        // v itself is adjacent to every remaining member.
        self.add_set.insert(v);
        // Former swap candidates partnered with v become add candidates.
        let mut i = 0;
        while i < self.swap_set.len() {
            let u = self.swap_set.as_slice()[i];
            if self.connect[u as usize] == size {
                self.swap_set.remove(u);
                self.add_set.insert(u);
            } else {
                i += 1;
            }
        }
        // Non-neighbors of v that missed exactly v and one other member.
        if size > 0 {
            let (clique, connect, swap_set) = (&self.clique, &self.connect, &mut self.swap_set);
            g.for_each_non_neighbor(v, |u| {
                if connect[u as usize] == size - 1 && !clique.contains(u) {
                    swap_set.insert(u);
                }
            });
        }
    }
}

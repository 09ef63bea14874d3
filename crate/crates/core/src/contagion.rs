//! Synchronous K-complex contagion, its one-round and full influence, and
//! marginal-contribution queries against a maintained state.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

/// Activation threshold: an inactive node joins once it has at least `k`
/// active neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContagionParams {
    k: usize,
}

impl ContagionParams {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("threshold K must be >= 1".into()));
        }
        Ok(ContagionParams { k })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }
}

/// Active set plus, for every node, the number of active neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContagionState {
    active: NodeSet,
    active_neighbors: Vec<u32>,
    round: usize,
}

impl ContagionState {
    pub fn empty(graph: &Graph) -> Self {
        ContagionState {
            active: NodeSet::new(graph.node_count()),
            active_neighbors: vec![0; graph.node_count()],
            round: 0,
        }
    }

    pub fn new(graph: &Graph, active: &NodeSet) -> Self {
        let mut state = ContagionState::empty(graph);
        for u in active.iter() {
            state.activate(graph, u);
        }
        state
    }

    #[inline]
    pub fn active(&self) -> &NodeSet {
        &self.active
    }

    #[inline]
    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    #[inline]
    pub fn is_active(&self, u: NodeId) -> bool {
        self.active.contains(u)
    }

    /// `|N(u) ∩ active|`.
    #[inline]
    pub fn active_neighbors(&self, u: NodeId) -> usize {
        self.active_neighbors[u] as usize
    }

    #[inline]
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn is_saturated(&self) -> bool {
        self.active.len() == self.active.universe()
    }

    /// Marks `u` active and updates neighbor counters. Returns `false` if `u`
    /// was already active. Does not advance the round.
    pub fn activate(&mut self, graph: &Graph, u: NodeId) -> bool {
        if !self.active.insert(u) {
            return false;
        }
        for &v in graph.neighbors(u) {
            self.active_neighbors[v] += 1;
        }
        true
    }

    /// Nodes that the next synchronous round would activate.
    pub fn eligible(&self, params: ContagionParams) -> Vec<NodeId> {
        let k = params.k() as u32;
        self.active
            .complement_iter()
            .filter(|&v| self.active_neighbors[v] >= k)
            .collect()
    }

    /// One synchronous round, returned as a new state.
    pub fn step(&self, graph: &Graph, params: ContagionParams) -> ContagionState {
        let mut next = self.clone();
        next.advance(graph, params);
        next
    }

    /// In-place synchronous round; returns the number of newly active nodes.
    pub fn advance(&mut self, graph: &Graph, params: ContagionParams) -> usize {
        let newly = self.eligible(params);
        for &v in &newly {
            self.activate(graph, v);
        }
        self.round += 1;
        newly.len()
    }

    /// Runs rounds until nothing changes.
    ///
    /// Only neighbors of nodes activated in the previous round can become
    /// eligible, so each round scans the last frontier's neighborhoods and
    /// the whole cascade touches every edge O(1) times.
    pub fn settle(&mut self, graph: &Graph, params: ContagionParams) {
        let frontier = self.eligible(params);
        self.propagate(graph, params, frontier);
    }

    /// Activates `u` in a state that was already at a fixed point and runs
    /// the cascade it triggers; only `u`'s neighborhood seeds the frontier.
    pub fn inject(&mut self, graph: &Graph, u: NodeId, params: ContagionParams) {
        if !self.activate(graph, u) {
            return;
        }
        let k = params.k() as u32;
        let frontier: Vec<NodeId> = graph
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&v| !self.active.contains(v) && self.active_neighbors[v] >= k)
            .collect();
        self.propagate(graph, params, frontier);
    }

    fn propagate(&mut self, graph: &Graph, params: ContagionParams, mut frontier: Vec<NodeId>) {
        let k = params.k() as u32;
        let mut next = Vec::new();
        while !frontier.is_empty() {
            for &v in &frontier {
                self.activate(graph, v);
            }
            self.round += 1;
            next.clear();
            for &v in &frontier {
                for &w in graph.neighbors(v) {
                    if !self.active.contains(w) && self.active_neighbors[w] >= k {
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            std::mem::swap(&mut frontier, &mut next);
        }
    }

    /// Recounts active neighbors from scratch and compares with the
    /// maintained counters.
    pub fn counters_consistent(&self, graph: &Graph) -> bool {
        graph
            .nodes()
            .all(|v| self.active.count_neighbors_in(graph, v) == self.active_neighbors[v] as usize)
    }

    /// `ν_K(u | active)` in O(deg(u)) using the maintained counters.
    pub fn marginal_one_round(
        &self,
        graph: &Graph,
        u: NodeId,
        params: ContagionParams,
    ) -> Result<usize> {
        check_node(graph, u)?;
        if self.active.contains(u) {
            return Err(Error::NodeInSeeds(u));
        }
        let k = params.k() as u32;
        let mut gain = 1;
        if self.active_neighbors[u] >= k {
            gain -= 1;
        }
        for &v in graph.neighbors(u) {
            if !self.active.contains(v) && self.active_neighbors[v] + 1 == k {
                gain += 1;
            }
        }
        Ok(gain)
    }
}

fn check_node(graph: &Graph, u: NodeId) -> Result<()> {
    if u >= graph.node_count() {
        return Err(Error::NodeOutOfRange {
            node: u,
            n: graph.node_count(),
        });
    }
    Ok(())
}

/// `ν_K(S)`: seeds plus the nodes with at least `K` neighbors among them.
pub fn one_round_influence(graph: &Graph, seeds: &NodeSet, params: ContagionParams) -> usize {
    let state = ContagionState::new(graph, seeds);
    seeds.len() + state.eligible(params).len()
}

/// `ν_K*(S)`: size of the cascade's fixed point.
pub fn full_influence(graph: &Graph, seeds: &NodeSet, params: ContagionParams) -> usize {
    let mut state = ContagionState::new(graph, seeds);
    state.settle(graph, params);
    state.active_count()
}

/// `ν_K(u | S)`, building the counters for `S`.
pub fn marginal_one_round(
    graph: &Graph,
    u: NodeId,
    seeds: &NodeSet,
    params: ContagionParams,
) -> Result<usize> {
    ContagionState::new(graph, seeds).marginal_one_round(graph, u, params)
}

/// `ν_K*(u | S)`, building the cascade for `S`.
pub fn marginal_full(
    graph: &Graph,
    u: NodeId,
    seeds: &NodeSet,
    params: ContagionParams,
) -> Result<usize> {
    Cascade::new(graph, seeds.clone(), params).marginal(graph, u)
}

/// A seed set together with the fixed point of its cascade.
///
/// Because the dynamics are monotone and the fixed point is a closure,
/// `T∞(S ∪ {u})` equals the fixed point reached from `T∞(S) ∪ {u}`, so
/// marginal queries resume from the stored state instead of restarting.
#[derive(Debug, Clone)]
pub struct Cascade {
    seeds: NodeSet,
    state: ContagionState,
    params: ContagionParams,
}

impl Cascade {
    pub fn new(graph: &Graph, seeds: NodeSet, params: ContagionParams) -> Self {
        let mut state = ContagionState::new(graph, &seeds);
        state.settle(graph, params);
        Cascade {
            seeds,
            state,
            params,
        }
    }

    pub fn seeds(&self) -> &NodeSet {
        &self.seeds
    }

    pub fn state(&self) -> &ContagionState {
        &self.state
    }

    pub fn influence(&self) -> usize {
        self.state.active_count()
    }

    /// `ν_K*(u | seeds)`. The stored state is left untouched; the counter
    /// array is copied only when `u` is not already reached.
    pub fn marginal(&self, graph: &Graph, u: NodeId) -> Result<usize> {
        check_node(graph, u)?;
        if self.seeds.contains(u) {
            return Err(Error::NodeInSeeds(u));
        }
        if self.state.is_active(u) {
            return Ok(0);
        }
        let mut resumed = self.state.clone();
        resumed.inject(graph, u, self.params);
        Ok(resumed.active_count() - self.state.active_count())
    }

    /// Adds `u` to the seeds and advances the stored fixed point.
    pub fn add_seed(&mut self, graph: &Graph, u: NodeId) -> Result<()> {
        check_node(graph, u)?;
        if !self.seeds.insert(u) {
            return Err(Error::NodeInSeeds(u));
        }
        self.state.inject(graph, u, self.params);
        Ok(())
    }
}

//! Seed-set selection for one-round and full influence maximization.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::binom::LogBackend;
use crate::contagion::{
    full_influence, one_round_influence, Cascade, ContagionParams, ContagionState,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::pagtc::closed_form::dirac_scores;
use crate::pagtc::NodeLocalStats;

/// Default cap on the number of subsets [`optimal_bruteforce`] may visit.
pub const DEFAULT_SUBSET_GUARD: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// `ν_K`: seeds plus nodes tipped in the next round.
    OneRound,
    /// `ν_K*`: size of the cascade's fixed point.
    Full,
}

impl Objective {
    pub fn evaluate(self, graph: &Graph, seeds: &NodeSet, params: ContagionParams) -> usize {
        match self {
            Objective::OneRound => one_round_influence(graph, seeds, params),
            Objective::Full => full_influence(graph, seeds, params),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::OneRound => "one-round",
            Objective::Full => "full",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-round" | "one_round" => Ok(Objective::OneRound),
            "full" => Ok(Objective::Full),
            other => Err(Error::InvalidParameter(format!(
                "unknown objective '{other}' (expected one-round or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Greedy,
    PagtcDelta,
    Degree,
    Optimal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Greedy,
        Algorithm::PagtcDelta,
        Algorithm::Degree,
        Algorithm::Optimal,
    ];

    /// Table-style label; greedy on the full objective is `greedy*`.
    pub fn label(self, objective: Objective) -> &'static str {
        match (self, objective) {
            (Algorithm::Greedy, Objective::OneRound) => "greedy",
            (Algorithm::Greedy, Objective::Full) => "greedy*",
            (Algorithm::PagtcDelta, _) => "pagtc-delta",
            (Algorithm::Degree, _) => "degree",
            (Algorithm::Optimal, _) => "optimal",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" | "greedy*" => Ok(Algorithm::Greedy),
            "pagtc-delta" | "pagtc_delta" | "pagtc" => Ok(Algorithm::PagtcDelta),
            "degree" => Ok(Algorithm::Degree),
            "optimal" | "opt" => Ok(Algorithm::Optimal),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm '{other}' (expected greedy, pagtc-delta, degree, optimal)"
            ))),
        }
    }
}

/// Choose `budget` seeds maximizing `objective`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedProblem {
    objective: Objective,
    budget: usize,
    params: ContagionParams,
}

impl SeedProblem {
    pub fn new(
        graph: &Graph,
        objective: Objective,
        budget: usize,
        params: ContagionParams,
    ) -> Result<Self> {
        if budget == 0 || budget >= graph.node_count() {
            return Err(Error::InvalidParameter(format!(
                "budget r must satisfy 0 < r < n = {}, got {budget}",
                graph.node_count()
            )));
        }
        Ok(SeedProblem {
            objective,
            budget,
            params,
        })
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn params(&self) -> ContagionParams {
        self.params
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSolution {
    /// Seeds in the order they were selected.
    pub seeds: Vec<NodeId>,
    pub one_round_value: usize,
    pub full_value: usize,
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub runtime: Duration,
}

impl SeedSolution {
    fn finish(
        graph: &Graph,
        problem: &SeedProblem,
        seeds: Vec<NodeId>,
        algorithm: Algorithm,
        started: Instant,
    ) -> Self {
        let runtime = started.elapsed();
        let set = NodeSet::from_nodes(graph.node_count(), seeds.iter().copied())
            .expect("selected seeds are graph nodes");
        SeedSolution {
            one_round_value: one_round_influence(graph, &set, problem.params),
            full_value: full_influence(graph, &set, problem.params),
            seeds,
            algorithm,
            objective: problem.objective,
            runtime,
        }
    }

    /// The value of the objective the solution was computed for.
    pub fn value(&self) -> usize {
        match self.objective {
            Objective::OneRound => self.one_round_value,
            Objective::Full => self.full_value,
        }
    }

    pub fn label(&self) -> &'static str {
        self.algorithm.label(self.objective)
    }

    pub fn seed_set(&self, n: usize) -> NodeSet {
        NodeSet::from_nodes(n, self.seeds.iter().copied()).expect("seeds are graph nodes")
    }
}

/// Index of the maximum, ties to the earliest (smallest id) entry.
fn first_max(values: impl IntoIterator<Item = (NodeId, usize)>) -> Option<NodeId> {
    let mut best: Option<(NodeId, usize)> = None;
    for (u, value) in values {
        if best.is_none_or(|(_, b)| value > b) {
            best = Some((u, value));
        }
    }
    best.map(|(u, _)| u)
}

/// Repeatedly adds the node with the largest marginal gain of the objective.
///
/// For the one-round objective, gains come from maintained neighbor
/// counters in O(deg u) each. For the full objective (greedy*), every
/// candidate resumes the cascade from the current fixed point; candidates
/// are evaluated in parallel against that frozen state.
pub fn greedy_select(graph: &Graph, problem: &SeedProblem) -> Result<SeedSolution> {
    let started = Instant::now();
    let params = problem.params;
    let mut seeds = Vec::with_capacity(problem.budget);
    match problem.objective {
        Objective::OneRound => {
            let mut state = ContagionState::empty(graph);
            for _ in 0..problem.budget {
                let gains = graph
                    .nodes()
                    .filter(|&u| !state.is_active(u))
                    .map(|u| state.marginal_one_round(graph, u, params).map(|g| (u, g)))
                    .collect::<Result<Vec<_>>>()?;
                let u = first_max(gains).ok_or(Error::AllActive)?;
                state.activate(graph, u);
                seeds.push(u);
            }
        }
        Objective::Full => {
            let mut cascade = Cascade::new(graph, NodeSet::new(graph.node_count()), params);
            for _ in 0..problem.budget {
                let gains = graph
                    .nodes()
                    .into_par_iter()
                    .filter(|&u| !cascade.seeds().contains(u))
                    .map(|u| cascade.marginal(graph, u).map(|g| (u, g)))
                    .collect::<Result<Vec<_>>>()?;
                let u = first_max(gains).ok_or(Error::AllActive)?;
                cascade.add_seed(graph, u)?;
                seeds.push(u);
            }
        }
    }
    Ok(SeedSolution::finish(
        graph,
        problem,
        seeds,
        Algorithm::Greedy,
        started,
    ))
}

/// Builds the seed set one node at a time, each time taking the node with
/// the largest expected one-round marginal gain over uniform coalitions of
/// the final size `r - 1` that contain the seeds chosen so far.
///
/// The last step coincides with a greedy step. The same seeds are reported
/// for the full objective as well.
pub fn pagtc_delta_select(graph: &Graph, problem: &SeedProblem) -> Result<SeedSolution> {
    let started = Instant::now();
    let params = problem.params;
    let backend = LogBackend::new(graph.node_count() + 1);
    let mut chosen = NodeSet::new(graph.node_count());
    let mut stats = NodeLocalStats::new(graph, &chosen, params);
    let mut seeds = Vec::with_capacity(problem.budget);
    for _ in 0..problem.budget {
        let scores = dirac_scores(&backend, graph, &chosen, params, &stats, problem.budget - 1);
        let u = scores.argmax().ok_or(Error::AllActive)?;
        chosen.insert(u);
        stats.add_to_s0(graph, u);
        seeds.push(u);
    }
    Ok(SeedSolution::finish(
        graph,
        problem,
        seeds,
        Algorithm::PagtcDelta,
        started,
    ))
}

/// The `r` highest-degree nodes, ties by smallest id.
pub fn degree_select(graph: &Graph, problem: &SeedProblem) -> Result<SeedSolution> {
    let started = Instant::now();
    let mut order: Vec<NodeId> = graph.nodes().collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(graph.degree(u)), u));
    order.truncate(problem.budget);
    Ok(SeedSolution::finish(
        graph,
        problem,
        order,
        Algorithm::Degree,
        started,
    ))
}

/// `C(n, r)` saturating at `u128::MAX`.
pub fn subset_count(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        acc = match acc.checked_mul(n as u128 - r as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// Exhaustive search over all `r`-subsets; returns the lexicographically
/// smallest maximizer. Refuses when `C(n, r)` exceeds `guard`.
pub fn optimal_bruteforce(
    graph: &Graph,
    problem: &SeedProblem,
    guard: u128,
) -> Result<SeedSolution> {
    let started = Instant::now();
    let n = graph.node_count();
    let r = problem.budget;
    let count = subset_count(n, r);
    if count > guard {
        return Err(Error::GuardExceeded { count, guard });
    }
    let params = problem.params;
    let objective = problem.objective;

    // Split on the first element; each branch walks its combinations in
    // lexicographic order, and branches are reduced in order of that element.
    let best = (0..=n - r)
        .into_par_iter()
        .map(|first| {
            let mut combo: Vec<NodeId> = (first..first + r).collect();
            let mut set = NodeSet::new(n);
            let mut best: Option<(usize, Vec<NodeId>)> = None;
            loop {
                set.clear();
                combo.iter().for_each(|&u| {
                    set.insert(u);
                });
                let value = objective.evaluate(graph, &set, params);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, combo.clone()));
                }
                if !next_combination_tail(&mut combo, n) {
                    break;
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<(usize, Vec<NodeId>)>, |acc, cand| match acc {
            Some(a) if a.0 >= cand.0 => Some(a),
            _ => Some(cand),
        })
        .ok_or(Error::AllActive)?;

    Ok(SeedSolution::finish(
        graph,
        problem,
        best.1,
        Algorithm::Optimal,
        started,
    ))
}

/// Advances `combo[1..]` to the next combination in lexicographic order
/// while keeping `combo[0]` fixed. Returns `false` when exhausted.
fn next_combination_tail(combo: &mut [NodeId], n: usize) -> bool {
    let r = combo.len();
    let mut i = r;
    while i > 1 {
        i -= 1;
        if combo[i] < n - r + i {
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Dispatches to the named algorithm.
pub fn solve(
    graph: &Graph,
    problem: &SeedProblem,
    algorithm: Algorithm,
    guard: u128,
) -> Result<SeedSolution> {
    match algorithm {
        Algorithm::Greedy => greedy_select(graph, problem),
        Algorithm::PagtcDelta => pagtc_delta_select(graph, problem),
        Algorithm::Degree => degree_select(graph, problem),
        Algorithm::Optimal => optimal_bruteforce(graph, problem, guard),
    }
}

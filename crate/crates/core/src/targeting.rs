//! Dynamically targeted contagion: after each synchronous round one extra
//! node is activated from outside, chosen by a strategy.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::contagion::{Cascade, ContagionParams, ContagionState};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::pagtc::{semivalue_general_pagtc, shapley_pagtc, BetaSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetingStrategy {
    Degree,
    GreedyOneRound,
    GreedyFull,
    PagtcShapley,
    /// Semivalue with β uniform on `|T| ..= |T| + round(c (n - 1 - |T|))`.
    PagtcTruncated(f64),
}

impl TargetingStrategy {
    pub fn validate(&self) -> Result<()> {
        match self {
            TargetingStrategy::PagtcTruncated(c) if !(*c > 0.0 && *c <= 1.0) => Err(
                Error::InvalidParameter(format!("truncation c must lie in (0, 1], got {c}")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TargetingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetingStrategy::Degree => f.write_str("degree"),
            TargetingStrategy::GreedyOneRound => f.write_str("greedy-one-round"),
            TargetingStrategy::GreedyFull => f.write_str("greedy-full"),
            TargetingStrategy::PagtcShapley => f.write_str("pagtc-shapley"),
            TargetingStrategy::PagtcTruncated(c) => write!(f, "pagtc-trunc:{c}"),
        }
    }
}

impl FromStr for TargetingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let strategy = match s {
            "degree" => TargetingStrategy::Degree,
            "greedy" | "greedy-one-round" => TargetingStrategy::GreedyOneRound,
            "greedy*" | "greedy-full" => TargetingStrategy::GreedyFull,
            "pagtc" | "pagtc-shapley" => TargetingStrategy::PagtcShapley,
            other => {
                let c = other
                    .strip_prefix("pagtc-trunc:")
                    .or_else(|| other.strip_prefix("trunc:"))
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown strategy '{other}' (expected degree, greedy-one-round, \
                             greedy-full, pagtc-shapley, pagtc-trunc:C)"
                        ))
                    })?;
                TargetingStrategy::PagtcTruncated(c)
            }
        };
        strategy.validate()?;
        Ok(strategy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetingTrace {
    /// Completed rounds until every node was active.
    pub rounds: usize,
    /// Externally activated nodes in order.
    pub chosen: Vec<NodeId>,
    /// `|T|` at the end of each round.
    pub active_history: Vec<usize>,
}

impl TargetingTrace {
    /// `rounds / n` as a percentage.
    pub fn normalized_rounds(&self, n: usize) -> f64 {
        100.0 * self.rounds as f64 / n as f64
    }
}

fn first_max_by_key<K: PartialOrd + Copy>(
    items: impl Iterator<Item = (NodeId, K)>,
) -> Option<NodeId> {
    let mut best: Option<(NodeId, K)> = None;
    for (u, key) in items {
        if best.is_none_or(|(_, b)| key > b) {
            best = Some((u, key));
        }
    }
    best.map(|(u, _)| u)
}

/// The node a strategy activates next given the current active set.
pub fn choose_next(
    graph: &Graph,
    active: &NodeSet,
    params: ContagionParams,
    strategy: TargetingStrategy,
) -> Result<NodeId> {
    let n = graph.node_count();
    if active.len() >= n {
        return Err(Error::AllActive);
    }
    let chosen = match strategy {
        TargetingStrategy::Degree => {
            first_max_by_key(active.complement_iter().map(|u| (u, graph.degree(u))))
        }
        TargetingStrategy::GreedyOneRound => {
            let state = ContagionState::new(graph, active);
            let gains = active
                .complement_iter()
                .map(|u| state.marginal_one_round(graph, u, params).map(|g| (u, g)))
                .collect::<Result<Vec<_>>>()?;
            first_max_by_key(gains.into_iter())
        }
        TargetingStrategy::GreedyFull => {
            let cascade = Cascade::new(graph, active.clone(), params);
            let gains = active
                .complement_iter()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|u| cascade.marginal(graph, u).map(|g| (u, g)))
                .collect::<Result<Vec<_>>>()?;
            first_max_by_key(gains.into_iter())
        }
        TargetingStrategy::PagtcShapley => shapley_pagtc(graph, active, params)?.argmax(),
        TargetingStrategy::PagtcTruncated(c) => {
            let beta = BetaSpec::truncated_from(n, active.len(), c)?;
            semivalue_general_pagtc(graph, active, params, &beta)?.argmax()
        }
    };
    chosen.ok_or(Error::AllActive)
}

/// Runs rounds of (contagion step, then one external activation) from an
/// empty active set until every node is active.
pub fn run_targeted(
    graph: &Graph,
    params: ContagionParams,
    strategy: TargetingStrategy,
) -> Result<TargetingTrace> {
    strategy.validate()?;
    let n = graph.node_count();
    let mut state = ContagionState::empty(graph);
    let mut chosen = Vec::new();
    let mut history = Vec::new();
    while state.active_count() < n {
        state.advance(graph, params);
        if state.active_count() < n {
            let u = choose_next(graph, state.active(), params, strategy)?;
            state.activate(graph, u);
            chosen.push(u);
        }
        history.push(state.active_count());
        log::debug!(
            "round {}: {} active ({strategy})",
            history.len(),
            state.active_count()
        );
    }
    Ok(TargetingTrace {
        rounds: history.len(),
        chosen,
        active_history: history,
    })
}

/// Growth curve as `round active_count` lines (rounds from 1).
pub fn growth_curve(trace: &TargetingTrace) -> String {
    trace
        .active_history
        .iter()
        .enumerate()
        .map(|(i, count)| format!("{} {count}\n", i + 1))
        .collect()
}

/// Growth curve plus a chosen-node log, each line `# chosen ROUND NODE`.
pub fn trace_export(trace: &TargetingTrace, graph: &Graph) -> String {
    let mut out = growth_curve(trace);
    for (i, &u) in trace.chosen.iter().enumerate() {
        out.push_str(&format!("# chosen {} {}\n", i + 1, graph.label(u)));
    }
    out
}

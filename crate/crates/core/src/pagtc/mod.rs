//! Past-aware game-theoretic centrality for the one-round influence `ν_K`.
//!
//! The score of a node `u ∉ S0` is its expected marginal contribution
//! `E[ν_K(u | S) | S ⊇ S0]`, where `S ⊆ V \ {u}` is drawn by first picking a
//! coalition size `s ~ β` and then a uniform `s`-subset. The closed forms in
//! [`closed_form`] evaluate it in linear time; [`oracle`] holds the
//! enumeration and sampling estimators used to check them.

mod beta;
pub mod closed_form;
pub mod oracle;

pub use beta::BetaSpec;
pub use closed_form::{
    gtc_closed_form, semivalue_dirac_pagtc, semivalue_general_pagtc, shapley_pagtc,
};
pub use oracle::{brute_force_pagtc, monte_carlo_pagtc, BRUTE_FORCE_MAX_NODES};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::binom::{Backend, ExactBackend, LogBackend};
use crate::contagion::ContagionParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

/// Per-node counts relative to `S0`: `s_v = |N(v) \ S0|` and
/// `r_v = K - 1 - |N(v) ∩ S0|`, the number of additional active neighbors
/// `v` still needs before one more would push it over the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLocalStats {
    outside: Vec<usize>,
    missing: Vec<i64>,
    k: usize,
}

impl NodeLocalStats {
    pub fn new(graph: &Graph, s0: &NodeSet, params: ContagionParams) -> Self {
        let k = params.k();
        let mut outside = Vec::with_capacity(graph.node_count());
        let mut missing = Vec::with_capacity(graph.node_count());
        for v in graph.nodes() {
            let inside = s0.count_neighbors_in(graph, v);
            outside.push(graph.degree(v) - inside);
            missing.push(k as i64 - 1 - inside as i64);
        }
        NodeLocalStats {
            outside,
            missing,
            k,
        }
    }

    /// Updates the counts after `u` joins `S0`; only `u`'s neighbors change.
    pub fn add_to_s0(&mut self, graph: &Graph, u: NodeId) {
        for &v in graph.neighbors(u) {
            self.outside[v] -= 1;
            self.missing[v] -= 1;
        }
    }

    /// `s_v`.
    #[inline]
    pub fn outside(&self, v: NodeId) -> usize {
        self.outside[v]
    }

    /// `r_v`, negative once `v` already has `K` or more neighbors in `S0`.
    #[inline]
    pub fn missing(&self, v: NodeId) -> i64 {
        self.missing[v]
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Identifies what a [`ScoreVector`] was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreContext {
    pub k: usize,
    pub s0: Vec<NodeId>,
    pub beta: BetaSpec,
}

/// Scores for every node outside `S0`; nodes in `S0` have no score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector<V = f64> {
    scores: Vec<Option<V>>,
    context: ScoreContext,
}

impl<V> ScoreVector<V> {
    pub(crate) fn new(scores: Vec<Option<V>>, context: ScoreContext) -> Self {
        ScoreVector { scores, context }
    }

    pub fn get(&self, u: NodeId) -> Option<&V> {
        self.scores.get(u).and_then(Option::as_ref)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn context(&self) -> &ScoreContext {
        &self.context
    }

    /// `(node, score)` for every scored node, by ascending id.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &V)> + '_ {
        self.scores
            .iter()
            .enumerate()
            .filter_map(|(u, s)| s.as_ref().map(|s| (u, s)))
    }

    pub fn scored_count(&self) -> usize {
        self.scores.iter().filter(|s| s.is_some()).count()
    }
}

/// Relative tolerance under which two floating scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

impl ScoreVector<f64> {
    /// Highest-scoring node; near-ties (within [`TIE_TOLERANCE`] relative)
    /// go to the smallest id so that mathematically equal scores do not
    /// depend on rounding.
    pub fn argmax(&self) -> Option<NodeId> {
        let best = self
            .iter()
            .map(|(_, &s)| s)
            .fold(f64::NEG_INFINITY, f64::max);
        if !best.is_finite() {
            return None;
        }
        let slack = TIE_TOLERANCE * best.abs().max(1.0);
        self.iter()
            .find(|(_, &s)| s >= best - slack)
            .map(|(u, _)| u)
    }

    /// Scored nodes by descending score, ties by ascending id.
    pub fn ranking(&self) -> Vec<(NodeId, f64)> {
        let mut rows: Vec<(NodeId, f64)> = self.iter().map(|(u, &s)| (u, s)).collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        rows
    }

    pub fn sum(&self) -> f64 {
        self.iter().map(|(_, s)| s).sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for s in self.scores.iter_mut().flatten() {
            *s *= factor;
        }
    }
}

impl ScoreVector<BigRational> {
    pub fn to_f64(&self) -> ScoreVector<f64> {
        let backend = LogBackend::new(0);
        ScoreVector {
            scores: self
                .scores
                .iter()
                .map(|s| s.as_ref().map(|q| backend.lift_exact(q)))
                .collect(),
            context: self.context.clone(),
        }
    }
}

pub(crate) fn check_s0(graph: &Graph, s0: &NodeSet) -> Result<()> {
    if s0.universe() != graph.node_count() {
        return Err(Error::InvalidParameter(format!(
            "S0 is over {} nodes but the graph has {}",
            s0.universe(),
            graph.node_count()
        )));
    }
    if s0.len() >= graph.node_count() {
        return Err(Error::SeedsCoverGraph);
    }
    Ok(())
}

/// `C_β = 1 / P[S ⊇ S0]` for any backend.
pub fn c_beta_with<B: Backend>(
    backend: &B,
    n: usize,
    s0_size: usize,
    beta: &BetaSpec,
) -> Result<B::Value> {
    if n == 0 || s0_size >= n {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= |S0| <= n - 1, got |S0| = {s0_size}, n = {n}"
        )));
    }
    beta.validate(n)?;
    let (n_i, k_i) = (n as i64, s0_size as i64);
    if let Some((lo, hi)) = beta.uniform_interval(n) {
        if lo <= s0_size && s0_size <= hi {
            // Σ_{s=k}^{hi} C(s, k) = C(hi + 1, k + 1)
            let width = (hi - lo + 1) as i64;
            let mass = backend.ratio(&[(hi as i64 + 1, k_i + 1)], &[(n_i - 1, k_i)])
                * backend.frac(1, width);
            return Ok(B::Value::one() / mass);
        }
    }
    let mut mass = B::Value::zero();
    for s in beta.support(n).filter(|&s| s >= s0_size) {
        let weight = beta.weight_in(backend, n, s);
        if weight.is_zero() {
            continue;
        }
        // C(n-1-k, s-k) / C(n-1, s) == C(s, k) / C(n-1, k)
        mass = mass + weight * backend.ratio(&[(s as i64, k_i)], &[(n_i - 1, k_i)]);
    }
    if mass.is_zero() {
        return Err(Error::ZeroConditionalMass(s0_size));
    }
    Ok(B::Value::one() / mass)
}

/// `C_β` in double precision.
pub fn c_beta(n: usize, s0_size: usize, beta: &BetaSpec) -> Result<f64> {
    c_beta_with(&LogBackend::new(n), n, s0_size, beta)
}

/// `C_β` as an exact rational.
pub fn c_beta_exact(n: usize, s0_size: usize, beta: &BetaSpec) -> Result<BigRational> {
    c_beta_with(&ExactBackend, n, s0_size, beta)
}

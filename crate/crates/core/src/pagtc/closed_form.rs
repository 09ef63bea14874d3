//! Linear-time closed forms for PAGTC of `ν_K`.
//!
//! For `u ∉ S0`, `ν_K(u | S)` counts `u` itself when `u` has fewer than `K`
//! neighbors in `S`, plus every neighbor `v ∉ S` that has exactly `K - 1`
//! neighbors in `S`. Counting, for each size `s`, the coalitions `S ⊇ S0`
//! that produce each of these events gives the per-node terms below; they
//! depend only on `s_v`, `r_v`, `|S0|` and `n`.
//!
//! Every scorer is generic over [`Backend`], so the same code yields exact
//! rationals for verification and log-space doubles for production use.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::binom::{Backend, LogBackend};
use crate::contagion::ContagionParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

use super::{c_beta_with, check_s0, BetaSpec, NodeLocalStats, ScoreContext, ScoreVector};

fn context(s0: &NodeSet, params: ContagionParams, beta: BetaSpec) -> ScoreContext {
    ScoreContext {
        k: params.k(),
        s0: s0.to_vec(),
        beta,
    }
}

/// Sums `per_neighbor[v]` over the neighbors of `u`; entries for nodes
/// that cannot be tipped are zero.
fn neighbor_sum<V: Zero + Clone>(graph: &Graph, u: NodeId, per_neighbor: &[V]) -> V {
    graph
        .neighbors(u)
        .iter()
        .fold(V::zero(), |acc, &v| acc + per_neighbor[v].clone())
}

/// Below this many nodes the scorers stay on the calling thread; handing
/// linear work to the pool costs more than it saves.
const PARALLEL_MIN_NODES: usize = 1 << 13;

fn map_nodes<T, F>(graph: &Graph, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(NodeId) -> T + Sync + Send,
{
    if graph.node_count() < PARALLEL_MIN_NODES {
        graph.nodes().map(f).collect()
    } else {
        graph.nodes().into_par_iter().map(f).collect()
    }
}

/// Per-node values of a term that depends on the node only through a key
/// `(a, b)` with `a, b >= 0`; each distinct key is evaluated once. Nodes
/// without a key get zero. Keys are looked up in a dense table when their
/// range is small compared to `n`, and by binary search otherwise.
fn tabulate<V, F, E>(graph: &Graph, key: F, eval: E) -> Vec<V>
where
    V: Zero + Clone,
    F: Fn(NodeId) -> Option<(i64, i64)>,
    E: Fn((i64, i64)) -> V,
{
    let keys: Vec<Option<(i64, i64)>> = graph.nodes().map(key).collect();
    let (a_max, b_max) = keys
        .iter()
        .flatten()
        .fold((0, 0), |(a, b), &(x, y)| (a.max(x), b.max(y)));
    let width = (b_max + 1) as usize;
    let cells = (a_max as usize + 1).saturating_mul(width);

    if cells <= 4 * graph.node_count() + 64 {
        let mut table: Vec<Option<V>> = vec![None; cells];
        return keys
            .iter()
            .map(|k| match *k {
                Some((a, b)) => table[a as usize * width + b as usize]
                    .get_or_insert_with(|| eval((a, b)))
                    .clone(),
                None => V::zero(),
            })
            .collect();
    }

    let mut distinct: Vec<(i64, i64)> = keys.iter().flatten().copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let values: Vec<V> = distinct.iter().map(|&k| eval(k)).collect();
    keys.iter()
        .map(|k| match k {
            Some(k) => values[distinct.binary_search(k).unwrap()].clone(),
            None => V::zero(),
        })
        .collect()
}

fn log_backend(graph: &Graph) -> LogBackend {
    LogBackend::new(graph.node_count() + 1)
}

/// Shapley PAGTC of every node outside `S0`.
///
/// With `k = |S0|`, `m = min(s_u, r_u)`:
///
/// ```text
/// φ(u | S0) = (k + 1) [ C1(u) + Σ_{v ∈ N(u), v ∉ S0, deg v ≥ K} C2(v) ]
/// C1(u) = C(k + 1 + m, k + 1) / C(k + s_u, k) / (k + s_u + 1)
/// C2(v) = C(s_v - 1, r_v) / C(k + s_v, k + r_v) / (k + s_v + 1)
/// ```
pub fn shapley_pagtc_with<B: Backend>(
    backend: &B,
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
) -> Result<ScoreVector<B::Value>> {
    check_s0(graph, s0)?;
    let stats = NodeLocalStats::new(graph, s0, params);
    let k0 = s0.len() as i64;

    let own = tabulate(
        graph,
        |u| {
            let s = stats.outside(u) as i64;
            (!s0.contains(u))
                .then(|| (s, s.min(stats.missing(u))))
                .filter(|&(_, m)| m >= 0)
        },
        |(s, m): (i64, i64)| {
            backend.ratio(&[(k0 + 1 + m, k0 + 1)], &[(k0 + s, k0)]) * backend.frac(1, k0 + s + 1)
        },
    );
    let tips = tabulate(
        graph,
        |v| {
            (!s0.contains(v) && graph.degree(v) >= params.k())
                .then(|| (stats.outside(v) as i64, stats.missing(v)))
                .filter(|&(_, r)| r >= 0)
        },
        |(s, r): (i64, i64)| {
            backend.ratio(&[(s - 1, r)], &[(k0 + s, k0 + r)]) * backend.frac(1, k0 + s + 1)
        },
    );
    let scale = backend.frac(k0 + 1, 1);
    let scores: Vec<_> = map_nodes(graph, |u| {
        if s0.contains(u) {
            return None;
        }
        let inner = own[u].clone() + neighbor_sum(graph, u, &tips);
        Some(scale.clone() * inner)
    });
    Ok(ScoreVector::new(
        scores,
        context(s0, params, BetaSpec::Shapley),
    ))
}

pub fn shapley_pagtc(graph: &Graph, s0: &NodeSet, params: ContagionParams) -> Result<ScoreVector> {
    shapley_pagtc_with(&log_backend(graph), graph, s0, params)
}

/// Semivalue PAGTC for `β = δ_s`: the expected marginal contribution over
/// uniform coalitions of size exactly `s` that contain `S0`.
///
/// With `k = |S0|`:
///
/// ```text
/// φ(u | S0) = Σ_{j=0}^{min(s_u, r_u)} C(n-1-s, s_u-j) C(s-k, j) / C(n-1-k, s_u)
///           + Σ_{v ∈ N(u), v ∉ S0, deg v ≥ K}
///                 C(n-1-s, s_v-r_v) C(s-k, r_v) (1 - r_v/s_v) / C(n-1-k, s_v)
/// ```
pub fn semivalue_dirac_pagtc_with<B: Backend>(
    backend: &B,
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    size: usize,
) -> Result<ScoreVector<B::Value>> {
    check_s0(graph, s0)?;
    let n = graph.node_count();
    if size < s0.len() || size >= n {
        return Err(Error::InvalidParameter(format!(
            "coalition size {size} outside {}..={}",
            s0.len(),
            n - 1
        )));
    }
    let stats = NodeLocalStats::new(graph, s0, params);
    Ok(dirac_scores(backend, graph, s0, params, &stats, size))
}

/// Dirac scores from precomputed local statistics; the caller guarantees
/// `|S0| <= size <= n - 1` and that `stats` matches `s0`.
pub(crate) fn dirac_scores<B: Backend>(
    backend: &B,
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    stats: &NodeLocalStats,
    size: usize,
) -> ScoreVector<B::Value> {
    let n = graph.node_count() as i64;
    let k0 = s0.len() as i64;
    let s = size as i64;
    let free = n - 1 - k0;

    let own = tabulate(
        graph,
        |u| {
            let su = stats.outside(u) as i64;
            (!s0.contains(u))
                .then(|| (su, su.min(stats.missing(u))))
                .filter(|&(_, m)| m >= 0)
        },
        |(su, m): (i64, i64)| {
            (0..=m).fold(B::Value::zero(), |acc, j| {
                acc + backend.ratio(&[(n - 1 - s, su - j), (s - k0, j)], &[(free, su)])
            })
        },
    );
    let tips = tabulate(
        graph,
        |v| {
            let sv = stats.outside(v) as i64;
            (!s0.contains(v) && graph.degree(v) >= params.k() && sv > 0)
                .then(|| (sv, stats.missing(v)))
                .filter(|&(_, r)| r >= 0)
        },
        |(sv, rv): (i64, i64)| {
            let hits = backend.ratio(&[(n - 1 - s, sv - rv), (s - k0, rv)], &[(free, sv)]);
            if hits.is_zero() {
                return hits;
            }
            hits * backend.frac(sv - rv, sv)
        },
    );
    let scores: Vec<_> = map_nodes(graph, |u| {
        (!s0.contains(u)).then(|| own[u].clone() + neighbor_sum(graph, u, &tips))
    });
    ScoreVector::new(scores, context(s0, params, BetaSpec::Dirac(size)))
}

pub fn semivalue_dirac_pagtc(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    size: usize,
) -> Result<ScoreVector> {
    semivalue_dirac_pagtc_with(&log_backend(graph), graph, s0, params, size)
}

/// Semivalue PAGTC for an arbitrary `β`, by summing the positive-contribution
/// counts over every admissible coalition size:
///
/// ```text
/// φ(u | S0) = C_β Σ_s β(s) / C(n-1, s) [ |PC_s(u)| + Σ_v |PC_s(v)| ]
/// |PC_s(v)| = C(s_v - 1, r_v) C(n-1-k-s_v, s-k-r_v)
/// |PC_s(u)| = Σ_{j=0}^{min(s_u, r_u)} C(s_u, j) C(n-1-k-s_u, s-k-j)
/// ```
///
/// Costs O(n) per node on top of the neighbor sums. When `normalize` is
/// false the constant factor `C_β` is left out, which preserves the ranking.
pub fn semivalue_general_pagtc_with<B: Backend>(
    backend: &B,
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
    normalize: bool,
) -> Result<ScoreVector<B::Value>> {
    check_s0(graph, s0)?;
    let n = graph.node_count();
    let c_beta = c_beta_with(backend, n, s0.len(), beta)?;
    let stats = NodeLocalStats::new(graph, s0, params);

    let n_i = n as i64;
    let k0 = s0.len() as i64;
    let free = n_i - 1 - k0;
    let sizes: Vec<(i64, B::Value)> = beta
        .support(n)
        .filter(|&s| s >= s0.len())
        .map(|s| (s as i64, beta.weight_in(backend, n, s)))
        .filter(|(_, w)| !w.is_zero())
        .collect();

    let own = tabulate(
        graph,
        |u| {
            let su = stats.outside(u) as i64;
            (!s0.contains(u))
                .then(|| (su, su.min(stats.missing(u))))
                .filter(|&(_, m)| m >= 0)
        },
        |(su, m): (i64, i64)| {
            let mut acc = B::Value::zero();
            for (s, w) in &sizes {
                let mut count = B::Value::zero();
                for j in 0..=m {
                    count = count
                        + backend.ratio(&[(su, j), (free - su, s - k0 - j)], &[(n_i - 1, *s)]);
                }
                acc = acc + w.clone() * count;
            }
            acc
        },
    );
    let tips = tabulate(
        graph,
        |v| {
            (!s0.contains(v) && graph.degree(v) >= params.k())
                .then(|| (stats.outside(v) as i64, stats.missing(v)))
                .filter(|&(_, r)| r >= 0)
        },
        |(sv, rv): (i64, i64)| {
            sizes.iter().fold(B::Value::zero(), |acc, (s, w)| {
                acc + w.clone()
                    * backend.ratio(&[(sv - 1, rv), (free - sv, s - k0 - rv)], &[(n_i - 1, *s)])
            })
        },
    );
    let scale = if normalize { c_beta } else { B::Value::one() };
    let scores: Vec<_> = map_nodes(graph, |u| {
        (!s0.contains(u)).then(|| scale.clone() * (own[u].clone() + neighbor_sum(graph, u, &tips)))
    });
    Ok(ScoreVector::new(scores, context(s0, params, beta.clone())))
}

pub fn semivalue_general_pagtc(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
) -> Result<ScoreVector> {
    semivalue_general_pagtc_with(&log_backend(graph), graph, s0, params, beta, true)
}

/// Shapley GTC of `ν_K` with no past (`S0 = ∅`):
///
/// ```text
/// φ(u) = min{1, K / (deg u + 1)} + Σ_{v ∈ N(u)} max{deg v + 1 - K, 0} / (deg v (deg v + 1))
/// ```
pub fn gtc_closed_form_with<B: Backend>(
    backend: &B,
    graph: &Graph,
    params: ContagionParams,
) -> ScoreVector<B::Value> {
    let k = params.k() as i64;
    let scores: Vec<_> = map_nodes(graph, |u| {
        let du = graph.degree(u) as i64;
        let own = if k > du {
            B::Value::one()
        } else {
            backend.frac(k, du + 1)
        };
        let spill = graph.neighbors(u).iter().fold(B::Value::zero(), |acc, &v| {
            let dv = graph.degree(v) as i64;
            acc + backend.frac((dv + 1 - k).max(0), dv * (dv + 1))
        });
        Some(own + spill)
    });
    ScoreVector::new(
        scores,
        ScoreContext {
            k: params.k(),
            s0: Vec::new(),
            beta: BetaSpec::Shapley,
        },
    )
}

pub fn gtc_closed_form(graph: &Graph, params: ContagionParams) -> ScoreVector {
    gtc_closed_form_with(&log_backend(graph), graph, params)
}

//! Reference estimators that evaluate the defining expectation directly.
//!
//! [`brute_force_pagtc`] enumerates every coalition `S0 ⊆ S ⊆ V \ {u}` and
//! applies the coalition law term by term in exact arithmetic; it never uses
//! the per-node counting identities of the closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::binom::{binom_exact, Backend, LogBackend};
use crate::contagion::ContagionParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

use super::{check_s0, BetaSpec, ScoreContext, ScoreVector};

/// Default enumeration guard on the node count.
pub const BRUTE_FORCE_MAX_NODES: usize = 22;

/// For one node `u`, the number of admissible coalitions of each size and
/// the sum of `ν_K(u | S)` over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalProfile {
    pub coalitions: Vec<u64>,
    pub marginal_sum: Vec<u64>,
}

impl MarginalProfile {
    /// Enumerates every `S` with `S0 ⊆ S ⊆ V \ {u}`.
    pub fn enumerate(
        graph: &Graph,
        s0: &NodeSet,
        params: ContagionParams,
        u: NodeId,
        max_nodes: usize,
    ) -> Result<Self> {
        let n = graph.node_count();
        if n > max_nodes {
            return Err(Error::GuardExceeded {
                count: n as u128,
                guard: max_nodes as u128,
            });
        }
        check_s0(graph, s0)?;
        if u >= n {
            return Err(Error::NodeOutOfRange { node: u, n });
        }
        if s0.contains(u) {
            return Err(Error::NodeInSeeds(u));
        }

        let free: Vec<NodeId> = graph
            .nodes()
            .filter(|&v| v != u && !s0.contains(v))
            .collect();
        let mut coalitions = vec![0u64; n];
        let mut marginal_sum = vec![0u64; n];
        let mut member = vec![false; n];
        for mask in 0u64..(1u64 << free.len()) {
            member.iter_mut().for_each(|m| *m = false);
            for v in s0.iter() {
                member[v] = true;
            }
            for (bit, &v) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    member[v] = true;
                }
            }
            let size = s0.len() + mask.count_ones() as usize;
            let without = one_round(graph, &member, params.k());
            member[u] = true;
            let with = one_round(graph, &member, params.k());
            coalitions[size] += 1;
            marginal_sum[size] += (with - without) as u64;
        }
        Ok(MarginalProfile {
            coalitions,
            marginal_sum,
        })
    }

    /// `E[ν_K(u|S) | S ⊇ S0]` under `β`, with `P(S) = β(|S|) / C(n-1, |S|)`.
    pub fn expectation(&self, beta: &BetaSpec) -> Result<BigRational> {
        let n = self.coalitions.len();
        beta.validate(n)?;
        let mut mass = BigRational::zero();
        let mut total = BigRational::zero();
        for s in 0..n {
            if self.coalitions[s] == 0 {
                continue;
            }
            let law = beta.weight_exact(n, s)
                / BigRational::from_integer(BigInt::from(binom_exact(n as i64 - 1, s as i64)));
            mass += law.clone() * BigRational::from_integer(self.coalitions[s].into());
            total += law * BigRational::from_integer(self.marginal_sum[s].into());
        }
        if mass.is_zero() {
            let s0_size = self.coalitions.iter().position(|&c| c > 0).unwrap_or(0);
            return Err(Error::ZeroConditionalMass(s0_size));
        }
        Ok(total / mass)
    }
}

/// `ν_K` straight from its definition over a membership mask.
fn one_round(graph: &Graph, member: &[bool], k: usize) -> usize {
    graph
        .nodes()
        .filter(|&w| member[w] || graph.neighbors(w).iter().filter(|&&x| member[x]).count() >= k)
        .count()
}

/// Exact PAGTC of `u` by full enumeration, guarded at
/// [`BRUTE_FORCE_MAX_NODES`] nodes.
pub fn brute_force_pagtc(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
    u: NodeId,
) -> Result<BigRational> {
    brute_force_pagtc_guarded(graph, s0, params, beta, u, BRUTE_FORCE_MAX_NODES)
}

pub fn brute_force_pagtc_guarded(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
    u: NodeId,
    max_nodes: usize,
) -> Result<BigRational> {
    beta.validate(graph.node_count())?;
    MarginalProfile::enumerate(graph, s0, params, u, max_nodes)?.expectation(beta)
}

/// Monte Carlo estimate with per-node standard errors.
#[derive(Debug, Clone)]
pub struct MonteCarloEstimate {
    pub scores: ScoreVector,
    pub std_errors: Vec<Option<f64>>,
}

/// Averages `ν_K(u | S)` over `samples` independent draws from the
/// conditional coalition law, separately for each `u ∉ S0`.
///
/// The size is drawn with probability proportional to
/// `β(s) C(n-1-|S0|, s-|S0|) / C(n-1, s)`, then `S \ S0` is a uniform subset
/// of `V \ (S0 ∪ {u})` of the remaining size. Each node uses its own
/// ChaCha stream, so results do not depend on the thread count.
pub fn monte_carlo_pagtc_detailed(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
    samples: usize,
    rng_seed: u64,
) -> Result<MonteCarloEstimate> {
    check_s0(graph, s0)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let n = graph.node_count();
    beta.validate(n)?;
    let k0 = s0.len();
    let backend = LogBackend::new(n + 1);
    let size_weights: Vec<f64> = (0..n)
        .map(|s| {
            if s < k0 {
                return 0.0;
            }
            beta.weight(n, s)
                * backend.ratio(
                    &[((n - 1 - k0) as i64, (s - k0) as i64)],
                    &[((n - 1) as i64, s as i64)],
                )
        })
        .collect();
    let size_law = WeightedIndex::new(&size_weights).map_err(|_| Error::ZeroConditionalMass(k0))?;
    let k = params.k();

    let per_node: Vec<Option<(f64, f64)>> = graph
        .nodes()
        .into_par_iter()
        .map(|u| {
            if s0.contains(u) {
                return None;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(u as u64);
            let mut pool: Vec<NodeId> = graph
                .nodes()
                .filter(|&v| v != u && !s0.contains(v))
                .collect();
            let mut member = vec![false; n];
            for v in s0.iter() {
                member[v] = true;
            }
            let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
            for _ in 0..samples {
                let extra = size_law.sample(&mut rng) - k0;
                for i in 0..extra {
                    let j = rng.gen_range(i..pool.len());
                    pool.swap(i, j);
                    member[pool[i]] = true;
                }
                let gain = local_marginal(graph, &member, u, k) as f64;
                sum += gain;
                sum_sq += gain * gain;
                for &v in &pool[..extra] {
                    member[v] = false;
                }
            }
            let mean = sum / samples as f64;
            let var = if samples > 1 {
                ((sum_sq - samples as f64 * mean * mean) / (samples - 1) as f64).max(0.0)
            } else {
                0.0
            };
            Some((mean, (var / samples as f64).sqrt()))
        })
        .collect();

    let scores = per_node.iter().map(|e| e.map(|(m, _)| m)).collect();
    let std_errors = per_node.iter().map(|e| e.map(|(_, se)| se)).collect();
    Ok(MonteCarloEstimate {
        scores: ScoreVector::new(
            scores,
            ScoreContext {
                k,
                s0: s0.to_vec(),
                beta: beta.clone(),
            },
        ),
        std_errors,
    })
}

pub fn monte_carlo_pagtc(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
    samples: usize,
    rng_seed: u64,
) -> Result<ScoreVector> {
    monte_carlo_pagtc_detailed(graph, s0, params, beta, samples, rng_seed).map(|e| e.scores)
}

/// `ν_K(u | S)` touching only `u`'s two-hop neighborhood.
fn local_marginal(graph: &Graph, member: &[bool], u: NodeId, k: usize) -> usize {
    let inside = |v: NodeId| graph.neighbors(v).iter().filter(|&&x| member[x]).count();
    let mut gain = usize::from(inside(u) < k);
    for &v in graph.neighbors(u) {
        if !member[v] && inside(v) + 1 == k {
            gain += 1;
        }
    }
    gain
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contagion::{one_round_influence, tests::fig1_star};

    fn set(n: usize, nodes: &[usize]) -> NodeSet {
        NodeSet::from_nodes(n, nodes.iter().copied()).unwrap()
    }

    fn k(k: usize) -> ContagionParams {
        ContagionParams::new(k).unwrap()
    }

    #[test]
    fn star_conditional_expectation() {
        let g = fig1_star();
        let phi = brute_force_pagtc(&g, &set(4, &[0, 1]), k(3), &BetaSpec::Shapley, 2).unwrap();
        assert_eq!(phi, BigRational::new(5.into(), 4.into()));
        let dirac = brute_force_pagtc(&g, &set(4, &[1]), k(3), &BetaSpec::Dirac(2), 2).unwrap();
        assert_eq!(dirac, BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn dirac_zero_on_empty_past_is_singleton_influence() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
        for kk in 1..=3 {
            for u in g.nodes() {
                let phi =
                    brute_force_pagtc(&g, &NodeSet::new(5), k(kk), &BetaSpec::Dirac(0), u).unwrap();
                let direct = one_round_influence(&g, &set(5, &[u]), k(kk));
                assert_eq!(phi, BigRational::from_integer(direct.into()));
            }
        }
    }

    #[test]
    fn guard_and_contract_errors() {
        let g = fig1_star();
        assert!(matches!(
            brute_force_pagtc_guarded(&g, &NodeSet::new(4), k(1), &BetaSpec::Shapley, 0, 3),
            Err(Error::GuardExceeded { .. })
        ));
        assert_eq!(
            brute_force_pagtc(&g, &set(4, &[0]), k(1), &BetaSpec::Shapley, 0).unwrap_err(),
            Error::NodeInSeeds(0)
        );
    }

    #[test]
    fn monte_carlo_star() {
        let g = fig1_star();
        let est =
            monte_carlo_pagtc_detailed(&g, &set(4, &[0, 1]), k(3), &BetaSpec::Shapley, 20_000, 7)
                .unwrap();
        assert!((est.scores.get(2).unwrap() - 1.25).abs() < 0.03);
        assert!(est.std_errors[2].unwrap() > 0.0);
        assert_eq!(est.scores.get(0), None);
    }

    #[test]
    fn monte_carlo_dirac_at_past_is_deterministic() {
        let g = fig1_star();
        let s0 = set(4, &[0, 1]);
        let est = monte_carlo_pagtc_detailed(&g, &s0, k(3), &BetaSpec::Dirac(2), 50, 3).unwrap();
        assert_eq!(est.scores.get(2), Some(&2.0));
        assert_eq!(est.std_errors[2], Some(0.0));
        assert_eq!(est.scores.get(3), Some(&1.0));
    }

    #[test]
    fn monte_carlo_errors() {
        let g = fig1_star();
        assert!(monte_carlo_pagtc(&g, &NodeSet::new(4), k(1), &BetaSpec::Shapley, 0, 0).is_err());
        assert_eq!(
            monte_carlo_pagtc(&g, &set(4, &[0, 1]), k(1), &BetaSpec::Dirac(1), 5, 0).unwrap_err(),
            Error::ZeroConditionalMass(2)
        );
    }
}

//! Random graph generators.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Kleinberg navigable small-world graph on a `side × side` lattice.
///
/// Every node is joined to its 4 lattice neighbors. It then draws
/// `long_range_per_node` endpoints (with replacement) among all other nodes,
/// picking `v` with probability proportional to `d(u, v)^(-exponent)` where
/// `d` is the Manhattan distance. The resulting arcs are symmetrized and
/// deduplicated. Node `row * side + col` sits at `(row, col)`.
pub fn navigable_small_world(
    side: usize,
    long_range_per_node: usize,
    exponent: f64,
    rng_seed: u64,
) -> Result<Graph> {
    if side < 2 {
        return Err(Error::InvalidParameter(format!(
            "side must be >= 2, got {side}"
        )));
    }
    if !exponent.is_finite() || exponent < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent must be finite and >= 0, got {exponent}"
        )));
    }

    let n = side * side;
    let coords = |u: usize| ((u / side) as i64, (u % side) as i64);
    let mut edges = Vec::with_capacity(2 * n + n * long_range_per_node);
    for u in 0..n {
        let (row, col) = coords(u);
        if col + 1 < side as i64 {
            edges.push((u, u + 1));
        }
        if row + 1 < side as i64 {
            edges.push((u, u + side));
        }
    }

    if long_range_per_node > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut weights = vec![0.0f64; n];
        for u in 0..n {
            let (ru, cu) = coords(u);
            for (v, w) in weights.iter_mut().enumerate() {
                let (rv, cv) = coords(v);
                let d = (ru - rv).abs() + (cu - cv).abs();
                *w = if d == 0 {
                    0.0
                } else {
                    (d as f64).powf(-exponent)
                };
            }
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| Error::InvalidParameter(format!("long-range weights: {e}")))?;
            for _ in 0..long_range_per_node {
                edges.push((u, dist.sample(&mut rng)));
            }
        }
    }

    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_lattice() {
        let g = navigable_small_world(2, 0, 2.0, 0).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!(g.nodes().all(|u| g.degree(u) == 2));
        let g = navigable_small_world(5, 0, 2.0, 0).unwrap();
        assert_eq!(g.edge_count(), 40);
    }

    #[test]
    fn long_range_edge_budget() {
        for seed in 0..20 {
            let g = navigable_small_world(5, 1, 2.0, seed).unwrap();
            assert_eq!(g.node_count(), 25);
            assert!((40..=65).contains(&g.edge_count()), "{}", g.edge_count());
            assert!(g.is_connected());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = navigable_small_world(6, 2, 2.0, 11).unwrap();
        let b = navigable_small_world(6, 2, 2.0, 11).unwrap();
        assert_eq!(a, b);
        let c = navigable_small_world(6, 2, 2.0, 12).unwrap();
        assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
    }

    #[test]
    fn long_range_draws_add_bounded_degree() {
        for side in [5, 10, 20] {
            let lattice = navigable_small_world(side, 0, 2.0, 0).unwrap();
            let g = navigable_small_world(side, 3, 2.0, 0).unwrap();
            assert!(g.mean_degree() > lattice.mean_degree() + 1.0, "side {side}");
            assert!(
                g.mean_degree() <= lattice.mean_degree() + 6.0,
                "side {side}"
            );
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(navigable_small_world(1, 1, 2.0, 0).is_err());
        assert!(navigable_small_world(3, 1, -1.0, 0).is_err());
        assert!(navigable_small_world(3, 1, f64::NAN, 0).is_err());
    }
}

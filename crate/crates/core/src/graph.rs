//! Immutable undirected simple graphs in compressed adjacency form, and
//! bit-indexed node sets over them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

/// An undirected simple graph with sorted adjacency lists stored back to back.
///
/// Neighbors of `u` live in `targets[offsets[u]..offsets[u + 1]]`, sorted
/// ascending. Self-loops and parallel edges are removed at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    edge_count: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph on `n` nodes from an arbitrary edge collection.
    ///
    /// Edges are treated as undirected; duplicates and self-loops are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one node".into(),
            ));
        }
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let edge_count = targets.len() / 2;
        Ok(Graph {
            offsets,
            targets,
            edge_count,
            labels: None,
        })
    }

    /// Attaches external names, one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} labels, got {}",
                self.node_count(),
                labels.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count as f64 / self.node_count() as f64
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of `u`, falling back to the numeric id.
    pub fn label(&self, u: NodeId) -> String {
        match &self.labels {
            Some(labels) => labels[u].clone(),
            None => u.to_string(),
        }
    }

    /// Resolves a node by external label first, then by numeric id.
    pub fn resolve(&self, token: &str) -> Result<NodeId> {
        if let Some(labels) = &self.labels {
            if let Some(pos) = labels.iter().position(|l| l == token) {
                return Ok(pos);
            }
        }
        match token.parse::<usize>() {
            Ok(id) if id < self.node_count() => Ok(id),
            Ok(id) => Err(Error::NodeOutOfRange {
                node: id,
                n: self.node_count(),
            }),
            Err(_) => Err(Error::InvalidParameter(format!("unknown node '{token}'"))),
        }
    }

    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.labels
            .iter()
            .flat_map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        components
    }

    /// BFS eccentricity of every node; `None` when the graph is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let n = self.node_count();
        let mut best = 0;
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for source in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[source] = 0;
            queue.push_back(source);
            let mut reached = 1;
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        best = best.max(dist[v]);
                        reached += 1;
                        queue.push_back(v);
                    }
                }
            }
            if reached != n {
                return None;
            }
        }
        Some(best)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.node_count())
            .field("edges", &self.edge_count)
            .finish()
    }
}

/// A subset of `0..n` backed by a bit vector, with cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl NodeSet {
    pub fn new(universe: usize) -> Self {
        NodeSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = NodeSet::new(universe);
        for u in 0..universe {
            set.insert(u);
        }
        set
    }

    /// Builds a set from node ids; out-of-range ids are an error.
    pub fn from_nodes<I>(universe: usize, nodes: I) -> Result<Self>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let mut set = NodeSet::new(universe);
        for u in nodes {
            if u >= universe {
                return Err(Error::NodeOutOfRange {
                    node: u,
                    n: universe,
                });
            }
            set.insert(u);
        }
        Ok(set)
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, u: NodeId) -> bool {
        u < self.universe && self.words[u / 64] >> (u % 64) & 1 == 1
    }

    /// Returns `true` if `u` was not already present.
    #[inline]
    pub fn insert(&mut self, u: NodeId) -> bool {
        assert!(
            u < self.universe,
            "node {u} outside universe {}",
            self.universe
        );
        let word = &mut self.words[u / 64];
        let bit = 1u64 << (u % 64);
        let fresh = *word & bit == 0;
        *word |= bit;
        self.len += fresh as usize;
        fresh
    }

    /// Returns `true` if `u` was present.
    #[inline]
    pub fn remove(&mut self, u: NodeId) -> bool {
        if u >= self.universe {
            return false;
        }
        let word = &mut self.words[u / 64];
        let bit = 1u64 << (u % 64);
        let present = *word & bit != 0;
        *word &= !bit;
        self.len -= present as usize;
        present
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.len = 0;
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// Nodes of the universe not in the set, ascending.
    pub fn complement_iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.universe).filter(move |&u| !self.contains(u))
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }

    /// `|N(u) ∩ self|` by a scan of the adjacency list.
    pub fn count_neighbors_in(&self, graph: &Graph, u: NodeId) -> usize {
        graph
            .neighbors(u)
            .iter()
            .filter(|&&v| self.contains(v))
            .count()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

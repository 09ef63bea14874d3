//! Parsing of graph sources, node lists and coalition-size distributions.

use std::fs::File;
use std::io::BufReader;
use std::str::FromStr;

use pagtc_core::generators::navigable_small_world;
use pagtc_core::io::{bundled_names, load_bundled, load_edge_list};
use pagtc_core::{BetaSpec, Error, Graph, NodeId, NodeSet, Result};

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Bundled(String),
    File(String),
    SmallWorld {
        side: usize,
        q: usize,
        exponent: f64,
        seed: u64,
    },
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(name) = s.strip_prefix("bundled:") {
            return Ok(GraphSource::Bundled(name.to_string()));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GraphSource::File(path.to_string()));
        }
        if let Some(spec) = s.strip_prefix("gen:small-world:") {
            let parts: Vec<&str> = spec.split(',').collect();
            let bad = || format!("expected gen:small-world:SIDE,Q,EXP,SEED, got '{s}'");
            if parts.len() != 4 {
                return Err(bad());
            }
            return Ok(GraphSource::SmallWorld {
                side: parts[0].trim().parse().map_err(|_| bad())?,
                q: parts[1].trim().parse().map_err(|_| bad())?,
                exponent: parts[2].trim().parse().map_err(|_| bad())?,
                seed: parts[3].trim().parse().map_err(|_| bad())?,
            });
        }
        Err(format!(
            "graph source must be bundled:NAME, file:PATH or gen:small-world:SIDE,Q,EXP,SEED \
             (bundled: {})",
            bundled_names().join(", ")
        ))
    }
}

impl std::fmt::Display for GraphSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphSource::Bundled(name) => write!(f, "bundled:{name}"),
            GraphSource::File(path) => write!(f, "file:{path}"),
            GraphSource::SmallWorld {
                side,
                q,
                exponent,
                seed,
            } => write!(f, "gen:small-world:{side},{q},{exponent},{seed}"),
        }
    }
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::Bundled(name) => load_bundled(name),
            GraphSource::File(path) => {
                let file = File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                load_edge_list(BufReader::new(file), false)
            }
            GraphSource::SmallWorld {
                side,
                q,
                exponent,
                seed,
            } => navigable_small_world(*side, *q, *exponent, *seed),
        }
    }
}

/// Comma-separated node ids or labels.
pub fn parse_nodes(graph: &Graph, list: Option<&str>) -> Result<NodeSet> {
    let mut set = NodeSet::new(graph.node_count());
    let Some(list) = list else {
        return Ok(set);
    };
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let u: NodeId = graph.resolve(token)?;
        set.insert(u);
    }
    Ok(set)
}

/// A β flag value; `trunc:C` only becomes concrete once `n` and `|S0|` are known.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaArg {
    Fixed(BetaSpec),
    Truncated(f64),
}

impl FromStr for BetaArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("beta must be shapley, dirac:S, uniform:LO,HI or trunc:C, got '{s}'");
        if s == "shapley" {
            return Ok(BetaArg::Fixed(BetaSpec::Shapley));
        }
        if let Some(size) = s.strip_prefix("dirac:") {
            return Ok(BetaArg::Fixed(BetaSpec::Dirac(
                size.parse().map_err(|_| bad())?,
            )));
        }
        if let Some(range) = s.strip_prefix("uniform:") {
            let (lo, hi) = range.split_once(',').ok_or_else(bad)?;
            return Ok(BetaArg::Fixed(BetaSpec::TruncatedUniform {
                lo: lo.trim().parse().map_err(|_| bad())?,
                hi: hi.trim().parse().map_err(|_| bad())?,
            }));
        }
        if let Some(c) = s.strip_prefix("trunc:") {
            return Ok(BetaArg::Truncated(c.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

impl BetaArg {
    pub fn resolve(&self, n: usize, s0_size: usize) -> Result<BetaSpec> {
        let beta = match self {
            BetaArg::Fixed(beta) => beta.clone(),
            BetaArg::Truncated(c) => BetaSpec::truncated_from(n, s0_size, *c)?,
        };
        beta.validate(n)?;
        Ok(beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_sources() {
        assert_eq!(
            "bundled:flor-families".parse::<GraphSource>().unwrap(),
            GraphSource::Bundled("flor-families".into())
        );
        assert_eq!(
            "gen:small-world:5,1,2,7".parse::<GraphSource>().unwrap(),
            GraphSource::SmallWorld {
                side: 5,
                q: 1,
                exponent: 2.0,
                seed: 7
            }
        );
        assert!("gen:small-world:5,1".parse::<GraphSource>().is_err());
        assert!("flor-families".parse::<GraphSource>().is_err());
    }

    #[test]
    fn beta_args() {
        assert_eq!(
            "dirac:6".parse::<BetaArg>().unwrap(),
            BetaArg::Fixed(BetaSpec::Dirac(6))
        );
        assert_eq!(
            "uniform:2,5".parse::<BetaArg>().unwrap(),
            BetaArg::Fixed(BetaSpec::TruncatedUniform { lo: 2, hi: 5 })
        );
        assert_eq!(
            "trunc:0.25"
                .parse::<BetaArg>()
                .unwrap()
                .resolve(77, 10)
                .unwrap(),
            BetaSpec::TruncatedUniform { lo: 10, hi: 27 }
        );
        assert!("dirac:x".parse::<BetaArg>().is_err());
        assert!("banzhaf".parse::<BetaArg>().is_err());
    }

    #[test]
    fn node_lists_accept_labels_and_ids() {
        let g = load_bundled("flor-families").unwrap();
        let medici = g.resolve("Medici").unwrap();
        let set = parse_nodes(&g, Some("Medici, 0")).unwrap();
        assert!(set.contains(medici) && set.contains(0));
        assert!(parse_nodes(&g, Some("Nobody")).is_err());
        assert!(parse_nodes(&g, None).unwrap().is_empty());
    }
}

//! Past-aware game-theoretic centrality for K-complex contagion.
//!
//! A node becomes active once at least `K` of its neighbors are active.
//! The crate scores nodes by their expected marginal contribution to the
//! one-round influence `ν_K`, conditioned on an already active set `S0`,
//! using closed forms that run in linear time, and checks those forms
//! against exhaustive and sampling oracles. On top of the scores it builds
//! seed-set selection and round-by-round targeting.

pub mod binom;
pub mod contagion;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod pagtc;
pub mod seedopt;
pub mod targeting;

pub use contagion::{
    full_influence, marginal_full, marginal_one_round, one_round_influence, Cascade,
    ContagionParams, ContagionState,
};
pub use error::{Error, Result};
pub use graph::{Graph, NodeId, NodeSet};
pub use pagtc::{
    brute_force_pagtc, c_beta, gtc_closed_form, monte_carlo_pagtc, semivalue_dirac_pagtc,
    semivalue_general_pagtc, shapley_pagtc, BetaSpec, ScoreVector,
};
pub use seedopt::{Algorithm, Objective, SeedProblem, SeedSolution};
pub use targeting::{run_targeted, TargetingStrategy, TargetingTrace};

//! Decide, from observational data alone and allowing latent confounders,
//! whether a treatment X causally affects an outcome Y — and if it does,
//! locally find a valid covariate adjustment set inside the Markov blankets
//! of X and Y and estimate the effect.
//!
//! The crate is organized around a handful of pieces:
//!
//! - [`graph`]: immutable mixed graphs (DAGs and MAGs) with the graphical
//!   machinery — m-separation, latent projection, Markov blankets, edge
//!   visibility, amenability, forbidden sets and the generalized adjustment
//!   criterion used as a ground-truth oracle.
//! - [`scm`] / [`data`]: linear-Gaussian structural causal models, sampling,
//!   and ground-truth total effects.
//! - [`ci`]: the conditional-independence query contract with a monotone
//!   query counter, implemented by a Fisher-z test on data and by exact
//!   m-separation on a graph.
//! - [`mb`]: Markov-blanket discovery by total conditioning.
//! - [`engine`]: the rules R1/R2, the local search (LSAS), the exhaustive
//!   global search (EHS) used as a completeness baseline, and effect
//!   estimation by adjusted regression.
//! - [`fixtures`]: small built-in graphs used by the CLI and the test
//!   suites.
//!
//! Graphs, SCMs and datasets are immutable once built; every operation here
//! is pure, so values can be shared freely across threads. The only mutable
//! state in the crate is the atomic query counter inside a CI tester.

pub mod ci;
pub mod data;
pub mod engine;
pub mod fixtures;
pub mod graph;
pub mod mb;
pub mod scm;
pub mod subsets;

pub use ci::{
    max_cond_cap, partial_correlation, CiError, CiQuery, CiResult, CiTester, FisherZTester,
    MaxCondCap, OracleTester,
};
pub use data::{DataError, Dataset};
pub use engine::{
    estimate_effect, run_ehs, run_lsas, Decision, DecisionKind, EngineError, Firing, RuleCheck,
    RuleEvaluator, RuleFired, SearchOptions, SearchTrace,
};
pub use graph::{GraphBuilder, GraphError, GraphKind, Mark, MixedGraph, NodePair};
pub use mb::{discover_pair_mbs, total_conditioning_mb, MbResult};
pub use scm::{
    last_two_in_causal_order, pick_latents, random_dag, LatentSpec, LinearScm, ScmError,
};

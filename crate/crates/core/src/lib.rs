//! Number conservation in non-uniform elementary cellular automata.
//!
//! A non-uniform CA assigns each cell of a periodic n-cell lattice its
//! own Wolfram rule. This crate answers three questions about such a CA:
//!
//! - does it conserve the number of 1s in every configuration?
//!   [`decide::decide_ncca`] settles that in O(n), and
//!   [`oracle::brute_force_is_ncca`] settles it by enumerating all 2^n
//!   states for small n, so each can check the other.
//! - what does its reachability structure look like?
//!   [`rtree::build_tree`] constructs the weighted reachability tree and
//!   [`oracle::build_stg`] the full state-transition graph.
//! - how do you build a conserving CA of a given size?
//!   [`synth::synthesize`] assembles one cell by cell from a seed.
//!
//! ```
//! use ncca_core::{decide_ncca, synthesize, RuleVector, Verdict};
//!
//! let rv: RuleVector = "192,136,184,252,204,238".parse().unwrap();
//! assert_eq!(decide_ncca(&rv).unwrap(), Verdict::Accepted);
//!
//! let (made, _trace) = synthesize(40, 7).unwrap();
//! assert!(decide_ncca(&made).unwrap().is_accepted());
//! ```

pub mod config;
pub mod decide;
pub mod oracle;
pub mod rtree;
pub mod rule;
pub mod synth;
pub mod weight;

pub use config::{next_config, Configuration, EvolveError};
pub use decide::{decide_ncca, decide_ncca_traced, DecideError, SuperNode, Verdict};
pub use oracle::{brute_force_is_ncca, build_stg, count_ncca_vectors, Census, OracleError, StateTransitionGraph};
pub use rtree::{build_tree, tree_decide_ncca, ReachabilityTree, TreeError, TreeVerdict};
pub use rule::{Rmt, RmtSet, Rule, RuleVector, N4_ONLY_NC_RULES, NC_RULES};
pub use synth::{synthesize, synthesize_with_choices, SynthError, SynthesisTrace};
pub use weight::{allowed_weights, Weight, WeightedRmtSet};

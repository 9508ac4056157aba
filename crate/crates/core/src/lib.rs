//! Frog models and dominating branching Markov chains on Galton-Watson
//! trees.
//!
//! * [`gw`]: offspring laws, lazily grown trees, stretch and bush structure.
//! * [`analytics`]: spectral radii and ruin-chain generating functions.
//! * [`sim`]: frog model, branching Markov chains and their coupling.
//! * [`search`]: certification of transience and the sweep over `p1`.
//! * [`cli`]: configuration and the commands behind the `frogmodel` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytics;
pub mod cli;
pub mod error;
pub mod gw;
pub mod law;
pub mod rng;
pub mod search;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};

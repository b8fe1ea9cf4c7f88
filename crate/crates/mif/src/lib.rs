//! Missing-item finding (MIF) over data streams.
//!
//! After each of `ell` stream items from the universe `[n]`, a MIF algorithm
//! must report some item that has not appeared so far, or `Fail`. This crate
//! implements the main algorithm families for the problem together with the
//! machinery needed to measure them:
//!
//! - [`stream`]: the turnstile stream model, dense frequency vectors, and the
//!   brute-force missing-item oracle every test is checked against.
//! - [`sampler`]: perfect L1/Lp samplers — an exact oracle sampler and a
//!   sublinear-space sketch sampler built on precision sampling.
//! - [`algorithms`]: the MIF algorithms themselves (sampler-based static and
//!   long-regime, deterministic bitmap, randomness-on-the-fly, and
//!   random-start interval tracking), all behind one streaming interface,
//!   with bit-exact space accounting.
//! - [`harness`]: the adaptive-adversary game loop, adversary strategies,
//!   Monte-Carlo trial aggregation, and the card-guessing game.
//! - [`experiment`]: experiment configuration, execution, and CSV/JSON
//!   reports for the `mif` command-line runner.

pub mod algorithms;
mod error;
pub mod experiment;
pub mod harness;
pub mod rng;
pub mod sampler;
pub mod stream;

pub use error::{Error, Result};
pub use stream::{FrequencyVector, ItemId, QueryResult, Update};

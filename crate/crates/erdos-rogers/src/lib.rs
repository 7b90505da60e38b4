//! Exact arithmetic and randomised experiments for a Ramsey-type graph
//! construction.
//!
//! The library has three layers:
//!
//! * **Exponents** ([`exponents`]): for a parameter pair `(s, t)` it computes
//!   the rational exponents `alpha`, `delta`, `eta` that drive everything
//!   else, using arbitrary-precision rationals so there is no rounding
//!   anywhere in the arithmetic.
//! * **Colour schemes** ([`schemes`], [`verify`]): finite combinatorial
//!   objects (blocks of colour classes covering every pair of `t` nodes
//!   exactly once) with a rational value function. The [`verify`] module
//!   proves inequalities about these values by exhaustive enumeration.
//! * **Construction** ([`graph`], [`clique`], [`construct`], [`analyze`]):
//!   a seeded Monte Carlo pipeline that samples a random union of complete
//!   multipartite graphs, applies two deterministic deletion passes, and
//!   checks the result for forbidden cliques and for dense small subsets.
//!
//! The whole pipeline is deterministic given its seeds: every random choice
//! flows from a caller-supplied master seed through a splittable stream
//! derivation, so independent runs (and runs split across threads) reproduce
//! bit-for-bit.
//!
//! A thin command-line binary exposes the same operations; see [`cli`].
//! Runnable walkthroughs of each layer live in the crate's `examples/`
//! directory.

pub mod analyze;
pub mod cli;
pub mod clique;
pub mod construct;
pub mod error;
pub mod exponents;
pub mod graph;
pub mod ratio;
pub mod rng;
pub mod schemes;
pub mod verify;

pub use error::Error;
pub use exponents::{classify_pair, exponents, ExponentSet, PairClass};
pub use schemes::{Configuration, Scheme};

//! Uniform random samples over minibatch streams.
//!
//! A stream arrives as a sequence of minibatches. This crate maintains, with
//! deterministic fork-join parallelism:
//!
//! * a **sliding-window** sample structure answering `sample(q, w)` with a
//!   uniform q-permutation of the last `w` elements, for any `w` up to a
//!   configured maximum ([`sliwin::BinnedStore`]);
//! * an **infinite-window** sample of `min(s, N)` elements chosen uniformly
//!   without replacement from everything seen ([`infwin::InfiniteWindowSampler`]);
//! * a **fixed-window** without-replacement sample for a window size known in
//!   advance ([`fixedwin::FixedWindowSampler`]);
//! * an infinite-window sample **with replacement**
//!   ([`swr::ReplacementSampler`]).
//!
//! All randomness flows through [`rng::RandomEngine`], a splittable
//! counter-based generator, so results are bit-identical for a fixed master
//! seed regardless of the worker count. The [`harness`] module provides the
//! stream file format, the run loop behind the CLI, statistical verification
//! suites that test the samplers against brute-force oracles, and counter
//! based benchmark reporting.

pub mod harness;
pub mod par;
pub mod rng;
pub mod rr;
pub mod sliwin;
pub mod stats;

pub mod fixedwin;
pub mod infwin;
pub mod swr;

pub use par::TaskCounters;
pub use rng::{RandomEngine, RngError, SkipOffset};
pub use rr::{ReservedEntry, ReservedSet};

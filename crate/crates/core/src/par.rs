//! Fork-join execution substrate shared by the samplers.
//!
//! `parallel_for` runs independent tasks and returns their results in index
//! order, so output never depends on the worker count; randomness discipline
//! (one derived substream per task) is the caller's responsibility. Each
//! parallel region also feeds two global counters: `work` accumulates the sum
//! of per-task operation counts and `span_proxy` accumulates the maximum
//! per-task count per region, a structural stand-in for critical-path length.

use rayon::prelude::*;

#[cfg(feature = "counters")]
use std::sync::atomic::{AtomicU64, Ordering};

#[cfg(feature = "counters")]
static WORK: AtomicU64 = AtomicU64::new(0);
#[cfg(feature = "counters")]
static SPAN: AtomicU64 = AtomicU64::new(0);

/// Snapshot of the global instrumentation counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TaskCounters {
    /// Total operations across all tasks of all regions.
    pub work: u64,
    /// Sum over regions of the maximum per-task operation count.
    pub span_proxy: u64,
}

/// Reads the counters. Always `(0, 0)` when the `counters` feature is off.
pub fn counters_snapshot() -> TaskCounters {
    #[cfg(feature = "counters")]
    {
        TaskCounters { work: WORK.load(Ordering::Relaxed), span_proxy: SPAN.load(Ordering::Relaxed) }
    }
    #[cfg(not(feature = "counters"))]
    {
        TaskCounters::default()
    }
}

/// Resets both counters to zero.
pub fn counters_reset() {
    #[cfg(feature = "counters")]
    {
        WORK.store(0, Ordering::Relaxed);
        SPAN.store(0, Ordering::Relaxed);
    }
}

#[cfg(feature = "counters")]
fn record_region(task_costs: impl Iterator<Item = u64>) {
    let mut sum = 0u64;
    let mut max = 0u64;
    for c in task_costs {
        sum += c;
        max = max.max(c);
    }
    WORK.fetch_add(sum, Ordering::Relaxed);
    SPAN.fetch_add(max, Ordering::Relaxed);
}

/// Runs `task` for every index in `0..len` as one fork-join region and
/// collects the results in index order. `task` returns `(result, cost)`
/// where `cost` is its operation count for the instrumentation counters.
///
/// A task panic propagates after the join.
pub fn parallel_for<R, F>(len: usize, task: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> (R, u64) + Sync + Send,
{
    let pairs: Vec<(R, u64)> = (0..len).into_par_iter().map(task).collect();
    #[cfg(feature = "counters")]
    record_region(pairs.iter().map(|(_, c)| *c));
    pairs.into_iter().map(|(r, _)| r).collect()
}

/// Runs `f` inside a dedicated thread pool of `workers` threads. With
/// `None`, runs in the ambient pool. Used by the harness `--workers` flag
/// and by the determinism checks that compare worker counts.
pub fn run_with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool construction")
            .install(f),
    }
}

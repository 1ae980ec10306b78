//! Reversed reservoir sampling over a stream segment.
//!
//! Ages index a segment from its newest end: age 1 is the most recent
//! element, age `i` is `x[len - i]`. A sampler run produces a set of
//! `(age, slot, payload)` entries such that age `i` is included with
//! probability `min(1, s/i)`, ages `1..=s` occupy pairwise-distinct slots
//! according to a uniform permutation, and every other included age carries
//! an independent uniform slot. Taking, for any suffix window `w`, the oldest
//! included age per slot yields a uniform s-permutation of the last `w`
//! elements; that is what makes the set usable as a sliding-window sample.
//!
//! Three samplers are provided: [`simple_rr`] walks every age (the reference
//! implementation, kept as the distribution oracle for tests),
//! [`fast_single_rr`] handles `s = 1` with skip offsets so only selected ages
//! are touched, and [`fast_rr`] runs one single-element sampler per "track"
//! (the age subsequence `i*s + track`) in parallel, oversampling slightly and
//! correcting by rejection.

use std::fmt;

use crate::par;
use crate::rng::RandomEngine;

/// Error cases for segment samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrError {
    /// Sample size must be at least 1.
    ZeroSampleSize,
    /// Sample size may not exceed the segment length.
    SampleExceedsSegment { s: usize, len: usize },
    /// Track identifiers live in `1..=s`.
    TrackOutOfRange { track: u64, s: usize },
    /// The permutation readout found no entry for a slot.
    MissingSlot { slot: usize },
    /// The permutation readout needs a window of at least `s` ages.
    WindowTooSmall { window: u64, s: usize },
    /// An entry's slot is outside `0..s`.
    SlotOutOfRange { slot: usize, s: usize },
    /// An entry's age is outside `1..=n`.
    AgeOutOfRange { age: u64, n: u64 },
    /// Two entries share the same `(age, slot)` pair.
    DuplicatePair { age: u64, slot: usize },
    /// One of the ages `1..=s` is absent.
    MissingYoungAge { age: u64 },
    /// Two of the ages `1..=s` share a slot.
    YoungSlotCollision { slot: usize },
}

impl fmt::Display for RrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RrError::ZeroSampleSize => write!(f, "sample size must be at least 1"),
            RrError::SampleExceedsSegment { s, len } => {
                write!(f, "sample size {s} exceeds segment length {len}")
            }
            RrError::TrackOutOfRange { track, s } => {
                write!(f, "track {track} outside 1..={s}")
            }
            RrError::MissingSlot { slot } => write!(f, "no entry assigned to slot {slot}"),
            RrError::WindowTooSmall { window, s } => {
                write!(f, "window {window} smaller than sample size {s}")
            }
            RrError::SlotOutOfRange { slot, s } => write!(f, "slot {slot} outside 0..{s}"),
            RrError::AgeOutOfRange { age, n } => write!(f, "age {age} outside 1..={n}"),
            RrError::DuplicatePair { age, slot } => {
                write!(f, "duplicate entry (age {age}, slot {slot})")
            }
            RrError::MissingYoungAge { age } => write!(f, "age {age} missing from entries"),
            RrError::YoungSlotCollision { slot } => {
                write!(f, "ages 1..=s collide on slot {slot}")
            }
        }
    }
}

impl std::error::Error for RrError {}

/// One sampled element: its age within the segment, the slot it was assigned
/// to, and the element value itself. Payloads are copied at selection time so
/// the segment can be released afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReservedEntry<T> {
    pub age: u64,
    pub slot: usize,
    pub payload: T,
}

/// Output of a reversed-reservoir run over a segment of length `n` with
/// target sample size `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReservedSet<T> {
    pub entries: Vec<ReservedEntry<T>>,
    pub s: usize,
    pub n: u64,
}

impl<T> ReservedSet<T> {
    /// Checks the structural invariants: slots in range, ages in range, no
    /// duplicate `(age, slot)` pair, and (when `n >= s`) ages `1..=s` present
    /// exactly once on pairwise-distinct slots.
    pub fn validate(&self) -> Result<(), RrError> {
        let s = self.s;
        let mut seen_pairs = std::collections::HashSet::new();
        let mut young_slots = vec![false; s];
        let mut young_ages = vec![0u32; s.min(self.n as usize)];
        for e in &self.entries {
            if e.slot >= s {
                return Err(RrError::SlotOutOfRange { slot: e.slot, s });
            }
            if e.age == 0 || e.age > self.n {
                return Err(RrError::AgeOutOfRange { age: e.age, n: self.n });
            }
            if !seen_pairs.insert((e.age, e.slot)) {
                return Err(RrError::DuplicatePair { age: e.age, slot: e.slot });
            }
            if e.age as usize <= young_ages.len() {
                young_ages[e.age as usize - 1] += 1;
                if young_slots[e.slot] {
                    return Err(RrError::YoungSlotCollision { slot: e.slot });
                }
                young_slots[e.slot] = true;
            }
        }
        for (idx, &count) in young_ages.iter().enumerate() {
            if count != 1 {
                return Err(RrError::MissingYoungAge { age: idx as u64 + 1 });
            }
        }
        Ok(())
    }
}

/// Probability that the element at age `i` is included in a sample of target
/// size `s`: `min(1, s/i)`.
pub fn inclusion_prob(s: usize, i: u64) -> f64 {
    debug_assert!(s >= 1 && i >= 1);
    (s as f64 / i as f64).min(1.0)
}

/// Non-materialized view of one track of a segment: view age `i` maps to
/// base age `i*s + track` for `i >= 1`, so the first view age across tracks
/// covers base ages `s+1..=2s` and ages `1..=s` stay with the permutation.
#[derive(Debug, Clone, Copy)]
pub struct TrackView<'a, T> {
    base: &'a [T],
    stride: usize,
    track: u64,
    len: u64,
}

impl<'a, T> TrackView<'a, T> {
    pub fn new(base: &'a [T], s: usize, track: u64) -> Result<Self, RrError> {
        if track == 0 || track > s as u64 {
            return Err(RrError::TrackOutOfRange { track, s });
        }
        let n = base.len() as u64;
        let len = if track > n { 0 } else { (n - track) / s as u64 };
        Ok(TrackView { base, stride: s, track, len })
    }

    /// Number of view ages, i.e. of `i >= 1` with `i*s + track <= |base|`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Base age of view age `i`.
    pub fn base_age(&self, view_age: u64) -> u64 {
        view_age * self.stride as u64 + self.track
    }

    /// Element at view age `i` (1-based, `i <= len`).
    pub fn get(&self, view_age: u64) -> &T {
        debug_assert!(view_age >= 1 && view_age <= self.len);
        &self.base[self.base.len() - self.base_age(view_age) as usize]
    }
}

/// Returns the view for `track` on `x` with stride `s`.
pub fn create_view<T>(x: &[T], s: usize, track: u64) -> Result<TrackView<'_, T>, RrError> {
    TrackView::new(x, s, track)
}

/// Reference reversed-reservoir sampler: examines every age. Quadratic in
/// nothing but linear in `|x|`, and kept as the trusted distribution oracle
/// that the fast samplers are tested against.
pub fn simple_rr<T: Clone>(
    engine: &mut RandomEngine,
    x: &[T],
    s: usize,
) -> Result<ReservedSet<T>, RrError> {
    if s == 0 {
        return Err(RrError::ZeroSampleSize);
    }
    let n = x.len() as u64;
    if s as u64 > n {
        return Err(RrError::SampleExceedsSegment { s, len: x.len() });
    }
    let mut call = engine.fork();
    let perm = call.random_permutation(s).expect("s >= 1");
    let mut entries: Vec<ReservedEntry<T>> = (0..s)
        .map(|idx| ReservedEntry {
            age: idx as u64 + 1,
            slot: perm[idx],
            payload: x[x.len() - idx - 1].clone(),
        })
        .collect();
    for i in (s as u64 + 1)..=n {
        if call.coin_flip(inclusion_prob(s, i)).expect("valid probability") {
            let slot = call.uniform_int(0, s as u64 - 1).expect("s >= 1") as usize;
            entries.push(ReservedEntry { age: i, slot, payload: x[x.len() - i as usize].clone() });
        }
    }
    Ok(ReservedSet { entries, s, n })
}

/// Ages selected by the single-element skip walk over a (virtual) segment of
/// length `len`. Age 1 is always selected; from a selected age `i` the walk
/// jumps ahead by `Skip(i)`, so only selected ages cost an iteration.
pub fn skip_chain(engine: &mut RandomEngine, len: u64) -> Vec<u64> {
    let mut ages = Vec::new();
    let mut i = 1u64;
    while i <= len {
        ages.push(i);
        i += engine.skip_offset(i).expect("i >= 1").get();
    }
    ages
}

/// Fast single-element sampler (`s = 1`); same output distribution as
/// `simple_rr` with `s = 1` but touches only the selected ages.
pub fn fast_single_rr<T: Clone>(engine: &mut RandomEngine, x: &[T]) -> ReservedSet<T> {
    let mut call = engine.fork();
    let entries = skip_chain(&mut call, x.len() as u64)
        .into_iter()
        .map(|age| ReservedEntry { age, slot: 0, payload: x[x.len() - age as usize].clone() })
        .collect();
    ReservedSet { entries, s: 1, n: x.len() as u64 }
}

/// Parallel reversed-reservoir sampler. Ages `1..=s` are slotted by a
/// uniform permutation; each track runs the skip walk on its view, keeps a
/// picked view age `i` with probability `i*s / (i*s + track)` to correct the
/// oversampling, and assigns kept ages a fresh uniform slot. Tracks execute
/// as independent parallel tasks on derived substreams, so the result is
/// identical for any worker count.
pub fn fast_rr<T: Clone + Send + Sync>(
    engine: &mut RandomEngine,
    x: &[T],
    s: usize,
) -> Result<ReservedSet<T>, RrError> {
    if s == 0 {
        return Err(RrError::ZeroSampleSize);
    }
    let n = x.len() as u64;
    if s as u64 > n {
        return Err(RrError::SampleExceedsSegment { s, len: x.len() });
    }
    let mut call = engine.fork();
    let perm = call.random_permutation(s).expect("s >= 1");
    let mut entries: Vec<ReservedEntry<T>> = (0..s)
        .map(|idx| ReservedEntry {
            age: idx as u64 + 1,
            slot: perm[idx],
            payload: x[x.len() - idx - 1].clone(),
        })
        .collect();

    let track_results = par::parallel_for(s, |t| {
        let track = t as u64 + 1;
        let mut track_engine = call.substream(track);
        let view = TrackView::new(x, s, track).expect("track in range");
        let mut picked = Vec::new();
        let mut iterations = 0u64;
        let mut i = 1u64;
        while i <= view.len() {
            iterations += 1;
            let base_age = view.base_age(i);
            // Oversampling correction: the walk picked view age i with
            // probability 1/i; keeping with i*s/base_age lands on s/base_age.
            let keep = (i * s as u64) as f64 / base_age as f64;
            if track_engine.coin_flip(keep).expect("probability in (0,1]") {
                let slot = track_engine.uniform_int(0, s as u64 - 1).expect("s >= 1") as usize;
                picked.push(ReservedEntry { age: base_age, slot, payload: view.get(i).clone() });
            }
            i += track_engine.skip_offset(i).expect("i >= 1").get();
        }
        (picked, iterations)
    });
    for mut chunk in track_results {
        entries.append(&mut chunk);
    }
    Ok(ReservedSet { entries, s, n })
}

/// Permutation readout: coordinate `slot` is the oldest age assigned to that
/// slot among entries with `age <= window`. Defined for `window >= s`; with
/// fewer ages than slots some coordinate would be empty.
pub fn chi_permutation<T>(set: &ReservedSet<T>, window: u64) -> Result<Vec<u64>, RrError> {
    if window < set.s as u64 {
        return Err(RrError::WindowTooSmall { window, s: set.s });
    }
    let mut oldest: Vec<Option<u64>> = vec![None; set.s];
    for e in &set.entries {
        if e.age <= window {
            let m = &mut oldest[e.slot];
            *m = Some(m.map_or(e.age, |v| v.max(e.age)));
        }
    }
    oldest
        .iter()
        .enumerate()
        .map(|(slot, m)| m.ok_or(RrError::MissingSlot { slot }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{goodness_of_fit, harmonic, three_sigma_count, two_sample_chi_square};

    fn engine(seed: u64) -> RandomEngine {
        RandomEngine::new(seed)
    }

    /// Segment whose element at age i is the value i (payload equals age).
    fn aged_segment(n: usize) -> Vec<u64> {
        (0..n).map(|idx| (n - idx) as u64).collect()
    }

    #[test]
    fn inclusion_prob_values() {
        assert_eq!(inclusion_prob(3, 2), 1.0);
        assert_eq!(inclusion_prob(3, 6), 0.5);
        assert_eq!(inclusion_prob(1, 1), 1.0);
    }

    #[test]
    fn simple_rr_minimal_segment_is_permutation() {
        let x = aged_segment(2);
        let set = simple_rr(&mut engine(1), &x, 2).unwrap();
        assert_eq!(set.entries.len(), 2);
        set.validate().unwrap();
        let ages: Vec<u64> = set.entries.iter().map(|e| e.age).collect();
        assert_eq!(ages, vec![1, 2]);
        for e in &set.entries {
            assert_eq!(e.payload, e.age, "payload must be the element at that age");
        }
    }

    #[test]
    fn simple_rr_rejects_oversized_sample() {
        let x = aged_segment(2);
        assert!(matches!(
            simple_rr(&mut engine(1), &x, 3),
            Err(RrError::SampleExceedsSegment { .. })
        ));
    }

    #[test]
    fn simple_rr_tail_inclusion_rate() {
        // P(age 3 included) = 1/3 for s = 1.
        let x = aged_segment(3);
        let mut e = engine(77);
        let trials = 100_000u64;
        let hits = (0..trials)
            .filter(|_| {
                simple_rr(&mut e, &x, 1).unwrap().entries.iter().any(|en| en.age == 3)
            })
            .count() as f64;
        let p = 1.0 / 3.0;
        let band = three_sigma_count(trials, p);
        assert!((hits - trials as f64 * p).abs() <= band, "hits {hits}");
    }

    #[test]
    fn chi_permutation_trivial_cases() {
        // Entries use 0-based slots here; the readout is by slot order.
        let set = ReservedSet {
            entries: vec![
                ReservedEntry { age: 1, slot: 1, payload: () },
                ReservedEntry { age: 2, slot: 0, payload: () },
            ],
            s: 2,
            n: 2,
        };
        assert_eq!(chi_permutation(&set, 2).unwrap(), vec![2, 1]);

        let set = ReservedSet {
            entries: vec![
                ReservedEntry { age: 1, slot: 0, payload: () },
                ReservedEntry { age: 5, slot: 0, payload: () },
                ReservedEntry { age: 2, slot: 1, payload: () },
            ],
            s: 2,
            n: 5,
        };
        assert_eq!(chi_permutation(&set, 5).unwrap(), vec![5, 2]);
    }

    /// The worked example set used across the store tests, with slots
    /// re-based to 0.
    pub(crate) fn example_set() -> ReservedSet<u64> {
        let pairs: [(u64, usize); 7] =
            [(1, 1), (2, 2), (3, 0), (7, 0), (10, 2), (11, 2), (14, 1)];
        ReservedSet {
            entries: pairs
                .iter()
                .map(|&(age, slot)| ReservedEntry { age, slot, payload: age })
                .collect(),
            s: 3,
            n: 16,
        }
    }

    #[test]
    fn chi_permutation_worked_example() {
        assert_eq!(chi_permutation(&example_set(), 16).unwrap(), vec![7, 14, 11]);
    }

    #[test]
    fn chi_permutation_rejects_small_window() {
        assert!(matches!(
            chi_permutation(&example_set(), 2),
            Err(RrError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn fast_single_rr_singleton() {
        let x = aged_segment(1);
        let set = fast_single_rr(&mut engine(4), &x);
        assert_eq!(set.entries.len(), 1);
        assert_eq!(set.entries[0].age, 1);
        assert_eq!(set.entries[0].slot, 0);
    }

    #[test]
    fn fast_single_rr_marginals() {
        let x = aged_segment(6);
        let mut e = engine(21);
        let trials = 200_000u64;
        let mut counts = [0u64; 6];
        for _ in 0..trials {
            for en in fast_single_rr(&mut e, &x).entries {
                counts[en.age as usize - 1] += 1;
            }
        }
        for (idx, &c) in counts.iter().enumerate() {
            let p = 1.0 / (idx as f64 + 1.0);
            let band = three_sigma_count(trials, p);
            assert!(
                (c as f64 - trials as f64 * p).abs() <= band,
                "age {}: count {c}",
                idx + 1
            );
        }
    }

    #[test]
    fn skip_chain_iteration_count() {
        // E[iterations] is the harmonic number H_n; the coarser
        // 1 + ln(n) approximation must hold within 10%.
        let mut e = engine(30);
        let runs = 2_000u64;
        let total: u64 = (0..runs).map(|_| skip_chain(&mut e, 1024).len() as u64).sum();
        let mean = total as f64 / runs as f64;
        let exact = harmonic(1024);
        assert!((mean - exact).abs() < 0.25, "mean {mean} vs harmonic {exact}");
        let approx = 1.0 + (1024f64).ln();
        assert!((mean - approx).abs() <= 0.1 * approx, "mean {mean} vs {approx}");
    }

    #[test]
    fn view_indexing() {
        let x = aged_segment(16);
        let v = create_view(&x, 3, 2).unwrap();
        assert_eq!(v.base_age(1), 5);
        assert_eq!(*v.get(1), 5);

        // i >= 1 in base_age = i*s + track: track 3 of 16 has ages 6, 9, 12, 15.
        let v = create_view(&x, 3, 3).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!((1..=v.len()).map(|i| v.base_age(i)).collect::<Vec<_>>(), vec![6, 9, 12, 15]);

        let v = create_view(&x, 1, 1).unwrap();
        assert_eq!(v.base_age(1), 2);
        assert_eq!(v.base_age(2), 3);

        assert!(create_view(&x, 3, 0).is_err());
        assert!(create_view(&x, 3, 4).is_err());
    }

    #[test]
    fn views_cover_old_ages_exactly_once() {
        for (n, s) in [(16usize, 3usize), (7, 2), (12, 4), (5, 5), (9, 1)] {
            let x = aged_segment(n);
            let mut covered = Vec::new();
            for track in 1..=s as u64 {
                let v = create_view(&x, s, track).unwrap();
                for i in 1..=v.len() {
                    covered.push(v.base_age(i));
                }
            }
            covered.sort_unstable();
            let expected: Vec<u64> = ((s as u64 + 1)..=(n as u64)).collect();
            assert_eq!(covered, expected, "n={n} s={s}");
        }
    }

    #[test]
    fn fast_rr_full_segment_has_no_track_entries() {
        let x = aged_segment(3);
        let set = fast_rr(&mut engine(9), &x, 3).unwrap();
        assert_eq!(set.entries.len(), 3);
        set.validate().unwrap();
    }

    #[test]
    fn fast_rr_marginal_at_age_nine() {
        // P((9, slot 0)) = (1/3) * (3/9) = 1/9 for |x| = 12, s = 3.
        let x = aged_segment(12);
        let mut e = engine(55);
        let trials = 300_000u64;
        let hits = (0..trials)
            .filter(|_| {
                fast_rr(&mut e, &x, 3)
                    .unwrap()
                    .entries
                    .iter()
                    .any(|en| en.age == 9 && en.slot == 0)
            })
            .count() as f64;
        let p = 1.0 / 9.0;
        let band = three_sigma_count(trials, p);
        assert!((hits - trials as f64 * p).abs() <= band, "hits {hits}");
    }

    #[test]
    fn fast_rr_expected_size() {
        let x = aged_segment(64);
        let mut e = engine(60);
        let runs = 20_000u64;
        let total: u64 =
            (0..runs).map(|_| fast_rr(&mut e, &x, 4).unwrap().entries.len() as u64).sum();
        let mean = total as f64 / runs as f64;
        let exact = 4.0 + 4.0 * (harmonic(64) - harmonic(4));
        assert!((mean - exact).abs() < 0.15, "mean {mean} vs exact {exact}");
        let approx = 4.0 + 4.0 * (16f64).ln();
        assert!((mean - approx).abs() <= 0.1 * approx, "mean {mean} vs {approx}");
    }

    #[test]
    fn fast_rr_work_proxy_bound() {
        // Entry count stays under 3 * (s + s ln(n/s)) in at least 99% of runs.
        let x = aged_segment(1024);
        for s in [1usize, 4, 16] {
            let mut e = engine(100 + s as u64);
            let runs = 1_000u64;
            let bound = 3.0 * (s as f64 + s as f64 * (1024.0 / s as f64).ln());
            let ok = (0..runs)
                .filter(|_| (fast_rr(&mut e, &x, s).unwrap().entries.len() as f64) <= bound)
                .count();
            assert!(ok as f64 >= 0.99 * runs as f64, "s={s}: only {ok}/{runs} under bound");
        }
    }

    /// Index of an s-permutation of ages 1..=n in the lexicographic list of
    /// all ordered arrangements, used as a chi-square cell id.
    fn perm_cell(perm: &[u64], n: u64) -> usize {
        let mut idx = 0usize;
        for &a in perm {
            idx = idx * n as usize + (a as usize - 1);
        }
        idx
    }

    fn all_perm_cells(n: u64, s: usize) -> Vec<usize> {
        fn rec(n: u64, left: usize, chosen: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if left == 0 {
                out.push(chosen.clone());
                return;
            }
            for a in 1..=n {
                if !chosen.contains(&a) {
                    chosen.push(a);
                    rec(n, left - 1, chosen, out);
                    chosen.pop();
                }
            }
        }
        let mut perms = Vec::new();
        rec(n, s, &mut Vec::new(), &mut perms);
        perms.iter().map(|p| perm_cell(p, n)).collect()
    }

    fn chi_counts<F>(n: u64, s: usize, trials: u64, mut run: F) -> Vec<u64>
    where
        F: FnMut() -> Vec<u64>,
    {
        let cells = all_perm_cells(n, s);
        let mut index_of = std::collections::HashMap::new();
        for (i, &c) in cells.iter().enumerate() {
            index_of.insert(c, i);
        }
        let mut counts = vec![0u64; cells.len()];
        for _ in 0..trials {
            let perm = run();
            let cell = perm_cell(&perm, n);
            let slot = index_of.get(&cell).expect("output must be a valid s-permutation");
            counts[*slot] += 1;
        }
        counts
    }

    #[test]
    fn oracle_equivalence_with_simple_rr() {
        // Both samplers must produce the uniform permutation law and agree
        // with each other, for several (n, s) pairs.
        for (n, s) in [(4u64, 2usize), (5, 2), (6, 3)] {
            let x = aged_segment(n as usize);
            let trials = 200_000u64;
            let mut e1 = engine(7_000 + n);
            let mut e2 = engine(8_000 + n);
            let fast = chi_counts(n, s, trials, || {
                chi_permutation(&fast_rr(&mut e1, &x, s).unwrap(), n).unwrap()
            });
            let simple = chi_counts(n, s, trials, || {
                chi_permutation(&simple_rr(&mut e2, &x, s).unwrap(), n).unwrap()
            });
            let uniform = vec![1.0 / fast.len() as f64; fast.len()];
            let (_, _, p_fast) = goodness_of_fit(&fast, &uniform, 5.0);
            let (_, _, p_simple) = goodness_of_fit(&simple, &uniform, 5.0);
            assert!(p_fast >= 0.001, "fast_rr non-uniform at ({n},{s}): p {p_fast}");
            assert!(p_simple >= 0.001, "simple_rr non-uniform at ({n},{s}): p {p_simple}");
            let (_, _, p_two) = two_sample_chi_square(&fast, &simple);
            assert!(p_two >= 0.001, "samplers disagree at ({n},{s}): p {p_two}");
        }
    }

    #[test]
    fn prefix_suffix_correctness() {
        // Restricting to ages <= i yields a uniform s-permutation of the
        // last i elements, for every i in s..=n.
        let n = 5u64;
        let s = 2usize;
        let x = aged_segment(n as usize);
        let trials = 200_000u64;
        let mut e = engine(91);
        let mut sets = Vec::with_capacity(trials as usize);
        for _ in 0..trials {
            sets.push(fast_rr(&mut e, &x, s).unwrap());
        }
        for i in s as u64..=n {
            let mut counter = 0usize;
            let counts = chi_counts(i, s, trials, || {
                let perm = chi_permutation(&sets[counter], i).unwrap();
                counter += 1;
                perm
            });
            let uniform = vec![1.0 / counts.len() as f64; counts.len()];
            let (_, _, p) = goodness_of_fit(&counts, &uniform, 5.0);
            assert!(p >= 0.001, "window {i}: p {p}");
        }
    }

    #[test]
    fn fast_rr_deterministic_across_workers() {
        let x = aged_segment(256);
        let run = |workers| {
            par::run_with_workers(Some(workers), || {
                fast_rr(&mut engine(123), &x, 8).unwrap()
            })
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn fast_rr_structurally_valid(seed: u64, s in 1usize..12, extra in 0usize..120) {
                let n = s + extra;
                let x = aged_segment(n);
                let set = fast_rr(&mut RandomEngine::new(seed), &x, s).unwrap();
                prop_assert!(set.validate().is_ok());
                for e in &set.entries {
                    prop_assert_eq!(e.payload, e.age);
                }
            }

            #[test]
            fn simple_rr_structurally_valid(seed: u64, s in 1usize..8, extra in 0usize..40) {
                let n = s + extra;
                let x = aged_segment(n);
                let set = simple_rr(&mut RandomEngine::new(seed), &x, s).unwrap();
                prop_assert!(set.validate().is_ok());
            }
        }
    }
}

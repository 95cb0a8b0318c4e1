//! Working-set curves, interreference distances and the average working-set.
//!
//! Definitions follow the classic working-set model: the working set
//! `W(t,T)` is the set of distinct units referenced in the window of the `T`
//! most recent references ending at time `t` (time measured in references),
//! `w(t,T)` its size. The average working-set size `s(T)` is the average of
//! `w(t,T)` over the trace, here computed with windows clipped at the stream
//! start, i.e. the finite-trace average `(1/k) * sum_t w(t, min(T, t))`.
//!
//! Two independent estimators of `s(T)` are provided:
//!
//! * [`avg_ws_from_histogram`]: exact, via interreference distances. The
//!   miss rate `m(T)` (the discrete derivative of `s`) is computed from the
//!   distance histogram and `s` is accumulated by the recursion
//!   `s(T+1) = s(T) + m(T)`, so the derivative identity holds by
//!   construction.
//! * [`avg_ws_from_curves`]: empirical, by averaging a family of working-set
//!   curves. Matches the histogram route on stationary streams and feeds the
//!   clustering-based stationarity test.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid;
use crate::par;
use crate::trace::ReferenceStream;

/// One working-set curve: `w(t,T)` as a function of `T` with the window's
/// past edge held fixed at `start_index`.
#[derive(Debug, Clone, Serialize)]
pub struct WorkingSetCurve {
    /// Reference index (0-based) where the window starts.
    pub start_index: u64,
    /// `(T, w)` samples, strictly increasing in `T`.
    samples: Vec<(u64, u64)>,
}

impl WorkingSetCurve {
    pub fn samples(&self) -> &[(u64, u64)] {
        &self.samples
    }

    /// Largest sampled window size.
    pub fn max_window(&self) -> u64 {
        self.samples.last().map(|&(t, _)| t).unwrap_or(0)
    }

    /// `w` at exactly window size `T`, if sampled.
    pub fn at(&self, window: u64) -> Option<u64> {
        self.samples
            .binary_search_by_key(&window, |&(t, _)| t)
            .ok()
            .map(|i| self.samples[i].1)
    }
}

/// Distinct-unit counts of `stream[start_index..start_index+T]` for each
/// grid `T`. Grid points beyond `max_len` are an error.
pub fn ws_curve(
    stream: &ReferenceStream,
    start_index: usize,
    max_len: usize,
    grid: &[u64],
) -> Result<WorkingSetCurve> {
    if start_index + max_len > stream.len() {
        return Err(Error::InvalidInput(format!(
            "window [{start_index}, {start_index}+{max_len}) exceeds stream length {}",
            stream.len()
        )));
    }
    if let Some(&bad) = grid.iter().find(|&&t| t > max_len as u64) {
        return Err(Error::InvalidInput(format!(
            "grid point {bad} beyond curve length {max_len}"
        )));
    }
    let words = stream.alphabet_size().div_ceil(64).max(1);
    let mut seen = vec![0u64; words];
    let mut distinct = 0u64;
    let mut samples = Vec::with_capacity(grid.len());
    let mut gi = 0;
    let ids = &stream.ids()[start_index..start_index + max_len];
    for (offset, &id) in ids.iter().enumerate() {
        let word = &mut seen[id as usize / 64];
        let bit = 1u64 << (id % 64);
        if *word & bit == 0 {
            *word |= bit;
            distinct += 1;
        }
        let t = offset as u64 + 1;
        while gi < grid.len() && grid[gi] == t {
            samples.push((t, distinct));
            gi += 1;
        }
    }
    Ok(WorkingSetCurve {
        start_index: start_index as u64,
        samples,
    })
}

/// A family of working-set curves with start indices `0, spacing, ...`,
/// each extending to the end of the stream (so later curves are shorter by
/// exactly `spacing`). Grid points beyond a curve's reach are dropped from
/// that curve.
pub fn ws_curve_family(
    stream: &ReferenceStream,
    spacing: usize,
    count: usize,
    grid: &[u64],
) -> Result<Vec<WorkingSetCurve>> {
    if spacing == 0 {
        return Err(Error::InvalidInput("curve spacing must be positive".into()));
    }
    if count < 2 || spacing * (count - 1) >= stream.len() {
        return Err(Error::InvalidInput(format!(
            "fewer than 2 curves fit: length {}, spacing {spacing}, count {count}",
            stream.len()
        )));
    }
    let results = par::map_range(count, |i| {
        let start = i * spacing;
        let max_len = stream.len() - start;
        let local: Vec<u64> = grid
            .iter()
            .copied()
            .take_while(|&t| t <= max_len as u64)
            .collect();
        ws_curve(stream, start, max_len, &local)
    });
    results.into_iter().collect()
}

/// Interreference-distance histogram of a stream.
///
/// The distance of a reference is the number of references since the
/// previous occurrence of the same unit (1 for an immediate repeat); first
/// occurrences have infinite distance and are counted separately.
#[derive(Debug, Clone)]
pub struct ReuseHistogram {
    /// `(distance, count)`, sorted by distance.
    counts: Vec<(u64, u64)>,
    /// 1-based stream positions of each unit's final occurrence, ascending.
    /// These carry the end-of-trace correction for the windowed average.
    last_positions: Vec<u64>,
    total: u64,
}

/// Scan a stream into its interreference-distance histogram.
pub fn reuse_histogram(stream: &ReferenceStream) -> ReuseHistogram {
    let alphabet = stream.alphabet_size();
    let mut last_seen = vec![0u64; alphabet]; // 0 = never, else 1-based position
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for (idx, &id) in stream.ids().iter().enumerate() {
        let pos = idx as u64 + 1;
        let slot = &mut last_seen[id as usize];
        if *slot != 0 {
            *counts.entry(pos - *slot).or_insert(0) += 1;
        }
        *slot = pos;
    }
    let mut counts: Vec<(u64, u64)> = counts.into_iter().collect();
    counts.sort_unstable();
    let mut last_positions: Vec<u64> = last_seen.into_iter().filter(|&p| p != 0).collect();
    last_positions.sort_unstable();
    ReuseHistogram {
        counts,
        last_positions,
        total: stream.len() as u64,
    }
}

impl ReuseHistogram {
    /// `(distance, count)` pairs, ascending by distance.
    pub fn counts(&self) -> &[(u64, u64)] {
        &self.counts
    }

    /// Number of references at exactly `distance`.
    pub fn count(&self, distance: u64) -> u64 {
        self.counts
            .binary_search_by_key(&distance, |&(d, _)| d)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    /// Number of first-time references (equivalently, distinct units).
    pub fn first_refs(&self) -> u64 {
        self.last_positions.len() as u64
    }

    /// Total references scanned.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Fraction of references whose interreference distance exceeds `T`,
    /// first references counting as infinite. This is the raw survival
    /// function of the distance distribution, with no end-of-trace
    /// correction; see [`avg_ws_from_histogram`] for the windowed miss rate.
    pub fn tail_fraction(&self, window: u64) -> f64 {
        let finite_gt: u64 = self
            .counts
            .iter()
            .filter(|&&(d, _)| d > window)
            .map(|&(_, c)| c)
            .sum();
        (finite_gt + self.first_refs()) as f64 / self.total as f64
    }
}

/// The average working-set size and miss rate sampled on a window grid.
#[derive(Debug, Clone, Serialize)]
pub struct AvgWorkingSet {
    /// Window sizes, strictly increasing.
    pub grid: Vec<u64>,
    /// Average working-set size per grid point.
    pub s: Vec<f64>,
    /// Per-point sample standard deviation across curves; present only for
    /// the curve-based estimator.
    pub std: Option<Vec<f64>>,
    /// Miss rate per grid point.
    pub m: Vec<f64>,
}

impl AvgWorkingSet {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Average working-set size and miss rate from the distance histogram.
///
/// For each window `T` the miss rate is the fraction of window positions
/// whose next reference to the same unit lies more than `T` ahead:
///
/// ```text
/// m(T) = ( #{finite distances > T} + #{final occurrences at position <= k-T} ) / k
/// ```
///
/// and `s` follows from `s(1) = 1`, `s(T+1) = s(T) + m(T)`, accumulated
/// over every integer `T`. This reproduces the clipped-window average
/// exactly (see the oracle tests) and keeps the derivative identity
/// `s(T+1) - s(T) = m(T)` an identity of the data structure rather than an
/// approximation.
///
/// `grid` must be strictly increasing and start at 1 or above; it may
/// extend past the stream length, where `m` is 0 and `s` saturates.
pub fn avg_ws_from_histogram(hist: &ReuseHistogram, grid: &[u64]) -> Result<AvgWorkingSet> {
    if hist.total == 0 {
        return Err(Error::InsufficientData(
            "cannot average working sets of an empty stream".into(),
        ));
    }
    if grid.is_empty() || grid[0] < 1 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "grid must be strictly increasing window sizes >= 1".into(),
        ));
    }

    let k = hist.total;
    let k_f = k as f64;
    let n_finite: u64 = hist.counts.iter().map(|&(_, c)| c).sum();
    let psi = hist.first_refs();

    let mut s_out = Vec::with_capacity(grid.len());
    let mut m_out = Vec::with_capacity(grid.len());

    let mut s = 1.0f64;
    let mut finite_le = 0u64; // finite distances <= t
    let mut ci = 0usize;
    let mut last_le = psi; // final occurrences at position <= k - t
    let mut li = hist.last_positions.len();
    let mut gi = 0usize;

    let max_t = *grid.last().unwrap();
    for t in 1..=max_t {
        while ci < hist.counts.len() && hist.counts[ci].0 <= t {
            finite_le += hist.counts[ci].1;
            ci += 1;
        }
        let bound = k.saturating_sub(t);
        while li > 0 && hist.last_positions[li - 1] > bound {
            li -= 1;
            last_le -= 1;
        }
        let survivors = (n_finite - finite_le) + last_le;
        let m = survivors as f64 / k_f;
        if grid[gi] == t {
            s_out.push(s);
            m_out.push(m);
            gi += 1;
        }
        s += m;
    }
    debug_assert_eq!(gi, grid.len());

    Ok(AvgWorkingSet {
        grid: grid.to_vec(),
        s: s_out,
        std: None,
        m: m_out,
    })
}

/// Controls for the curve-averaging estimator.
#[derive(Debug, Clone, Copy)]
pub struct CurveAvgConfig {
    /// Minimum number of curves that must cover a grid point for it to be
    /// averaged at all.
    pub quorum: usize,
    /// Fraction of the largest window sizes to drop after the quorum cut;
    /// the sparse tail is estimated from few points and drags precision.
    pub trim_fraction: f64,
}

impl Default for CurveAvgConfig {
    fn default() -> Self {
        CurveAvgConfig {
            quorum: 8,
            trim_fraction: 0.05,
        }
    }
}

/// Average working-set size from a family of curves: per grid point, mean
/// and sample standard deviation of `w` across the curves covering it. The
/// miss rate is a forward difference of the mean.
pub fn avg_ws_from_curves(
    curves: &[WorkingSetCurve],
    config: &CurveAvgConfig,
) -> Result<AvgWorkingSet> {
    if curves.len() < 2 {
        return Err(Error::InsufficientData(
            "curve averaging needs at least 2 curves".into(),
        ));
    }
    let quorum = config.quorum.max(2);

    // Curves are built from one master grid, so the longest curve's grid
    // covers every sampled window size.
    let master = curves
        .iter()
        .max_by_key(|c| c.max_window())
        .expect("nonempty");

    let mut grid = Vec::new();
    let mut s = Vec::new();
    let mut std = Vec::new();
    let mut values = Vec::with_capacity(curves.len());
    for &(t, _) in master.samples() {
        values.clear();
        values.extend(curves.iter().filter_map(|c| c.at(t).map(|w| w as f64)));
        if values.len() < quorum {
            continue;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        grid.push(t);
        s.push(mean);
        std.push(var.sqrt());
    }
    if grid.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no grid point is covered by {quorum} curves"
        )));
    }

    let drop = (grid.len() as f64 * config.trim_fraction).ceil() as usize;
    let keep = (grid.len() - drop).max(1);
    grid.truncate(keep);
    s.truncate(keep);
    std.truncate(keep);

    let mut m = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        if i + 1 < grid.len() {
            m.push((s[i + 1] - s[i]) / (grid[i + 1] - grid[i]) as f64);
        } else if i > 0 {
            m.push(m[i - 1]);
        } else {
            m.push(0.0);
        }
    }

    Ok(AvgWorkingSet {
        grid,
        s,
        std: Some(std),
        m,
    })
}

/// Default window grid for a stream of `len` references.
pub fn default_grid(len: usize) -> Vec<u64> {
    grid::log_grid(1, len.max(1) as u64, grid::DEFAULT_POINTS_PER_DECADE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{gen_irm, IrmSpec};
    use std::collections::HashSet;

    fn stream(ids: &[u32]) -> ReferenceStream {
        ReferenceStream::from_ids(ids.to_vec())
    }

    #[test]
    fn curve_counts_distinct_units() {
        let s = stream(&[0, 1, 0, 2, 1]);
        let c = ws_curve(&s, 0, 5, &[1, 2, 3, 4, 5]).unwrap();
        let ws: Vec<u64> = c.samples().iter().map(|&(_, w)| w).collect();
        assert_eq!(ws, vec![1, 2, 2, 3, 3]);
    }

    #[test]
    fn constant_stream_curve_is_flat() {
        let s = stream(&[7, 7, 7]);
        let c = ws_curve(&s, 0, 3, &[1, 2, 3]).unwrap();
        assert!(c.samples().iter().all(|&(_, w)| w == 1));
    }

    #[test]
    fn curve_matches_fresh_recount() {
        let spec = IrmSpec {
            n_units: 1000,
            zipf_exponent: 1.0,
            length: 10_000,
            seed: 21,
        };
        let s = gen_irm(&spec).unwrap();
        let grid = default_grid(s.len());
        let c = ws_curve(&s, 0, s.len(), &grid).unwrap();
        for &(t, w) in c.samples() {
            let fresh: HashSet<u32> = s.ids()[..t as usize].iter().copied().collect();
            assert_eq!(w, fresh.len() as u64, "window {t}");
        }
    }

    #[test]
    fn curve_rejects_grid_beyond_length() {
        let s = stream(&[0, 1, 2]);
        assert!(ws_curve(&s, 0, 3, &[1, 4]).is_err());
        assert!(ws_curve(&s, 2, 2, &[1]).is_err());
    }

    #[test]
    fn family_spaces_start_indices() {
        let s = stream(&(0..100u32).collect::<Vec<_>>());
        let fam = ws_curve_family(&s, 50, 2, &[1, 2, 25, 50]).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam[0].start_index, 0);
        assert_eq!(fam[1].start_index, 50);
        assert_eq!(fam[0].max_window(), 50);
        assert_eq!(fam[1].max_window(), 50);
    }

    #[test]
    fn family_rejects_zero_spacing_and_overrun() {
        let s = stream(&[0, 1, 2, 3]);
        assert!(ws_curve_family(&s, 0, 2, &[1]).is_err());
        assert!(ws_curve_family(&s, 4, 2, &[1]).is_err());
        assert!(ws_curve_family(&s, 1, 1, &[1]).is_err());
    }

    #[test]
    fn family_lengths_differ_by_spacing() {
        let spec = IrmSpec {
            n_units: 64,
            zipf_exponent: 0.8,
            length: 4800,
            seed: 5,
        };
        let s = gen_irm(&spec).unwrap();
        let grid = default_grid(s.len());
        let fam = ws_curve_family(&s, 100, 48, &grid).unwrap();
        assert_eq!(fam.len(), 48);
        for pair in fam.windows(2) {
            let len0 = s.len() as u64 - pair[0].start_index;
            let len1 = s.len() as u64 - pair[1].start_index;
            assert_eq!(len0 - len1, 100);
        }
    }

    #[test]
    fn histogram_basic_counts() {
        let h = reuse_histogram(&stream(&[0, 1, 0, 1, 0]));
        assert_eq!(h.count(2), 3);
        assert_eq!(h.first_refs(), 2);
        assert_eq!(h.total(), 5);
        // survival of the raw distance distribution
        assert_eq!(h.tail_fraction(1), 1.0);
        assert_eq!(h.tail_fraction(2), 0.4);
    }

    #[test]
    fn all_distinct_stream_is_all_first_refs() {
        let h = reuse_histogram(&stream(&[0, 1, 2, 3, 4]));
        assert_eq!(h.first_refs(), 5);
        assert!(h.counts().is_empty());
    }

    #[test]
    fn constant_stream_misses_nothing_after_warmup() {
        let h = reuse_histogram(&stream(&[3; 10]));
        assert_eq!(h.count(1), 9);
        assert_eq!(h.first_refs(), 1);
        assert_eq!(h.tail_fraction(1), 0.1);
        let avg = avg_ws_from_histogram(&h, &[1, 2, 5, 9]).unwrap();
        assert!(avg.s.iter().all(|&v| v == 1.0));
        assert!(avg.m.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn histogram_matches_independent_rescan() {
        let spec = IrmSpec {
            n_units: 100,
            zipf_exponent: 1.0,
            length: 100_000,
            seed: 33,
        };
        let s = gen_irm(&spec).unwrap();
        let h = reuse_histogram(&s);

        let mut last: HashMap<u32, usize> = HashMap::new();
        let mut expect: HashMap<u64, u64> = HashMap::new();
        let mut firsts = 0u64;
        for (i, &id) in s.ids().iter().enumerate() {
            match last.insert(id, i) {
                Some(prev) => *expect.entry((i - prev) as u64).or_insert(0) += 1,
                None => firsts += 1,
            }
        }
        assert_eq!(h.first_refs(), firsts);
        for &(d, c) in h.counts() {
            assert_eq!(expect.get(&d), Some(&c), "distance {d}");
        }
        assert_eq!(h.counts().len(), expect.len());
        let sum: u64 = h.counts().iter().map(|&(_, c)| c).sum();
        assert_eq!(sum + h.first_refs(), h.total());
    }

    /// Direct clipped-window average of `w(t, T)`: the definition, computed
    /// the slow way with a fresh set per window.
    fn windowed_avg(ids: &[u32], window: u64) -> f64 {
        let k = ids.len();
        let mut sum = 0usize;
        for t in 1..=k {
            let lo = t.saturating_sub(window as usize);
            let distinct: HashSet<u32> = ids[lo..t].iter().copied().collect();
            sum += distinct.len();
        }
        sum as f64 / k as f64
    }

    #[test]
    fn histogram_average_matches_windowed_definition() {
        // [a,b,a,c,b]: mean w over clipped windows of size 2 is 9/5.
        let ids = [0u32, 1, 0, 2, 1];
        let s = stream(&ids);
        let h = reuse_histogram(&s);
        let grid: Vec<u64> = (1..=5).collect();
        let avg = avg_ws_from_histogram(&h, &grid).unwrap();
        assert!((avg.s[1] - 1.8).abs() < 1e-12);
        for (i, &t) in grid.iter().enumerate() {
            assert!(
                (avg.s[i] - windowed_avg(&ids, t)).abs() < 1e-12,
                "window {t}: {} vs {}",
                avg.s[i],
                windowed_avg(&ids, t)
            );
        }
    }

    #[test]
    fn histogram_average_matches_windowed_definition_on_random_stream() {
        let spec = IrmSpec {
            n_units: 12,
            zipf_exponent: 0.7,
            length: 400,
            seed: 9,
        };
        let s = gen_irm(&spec).unwrap();
        let grid: Vec<u64> = (1..=400).collect();
        let avg = avg_ws_from_histogram(&reuse_histogram(&s), &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            assert!(
                (avg.s[i] - windowed_avg(s.ids(), t)).abs() < 1e-9,
                "window {t}"
            );
        }
    }

    #[test]
    fn denning_recursion_is_exact_on_grid() {
        let spec = IrmSpec {
            n_units: 300,
            zipf_exponent: 0.9,
            length: 50_000,
            seed: 17,
        };
        let s = gen_irm(&spec).unwrap();
        let base = default_grid(s.len());
        let grid = crate::grid::with_successors(&base);
        let avg = avg_ws_from_histogram(&reuse_histogram(&s), &grid).unwrap();
        let mut checked = 0;
        for i in 0..grid.len() - 1 {
            if grid[i + 1] == grid[i] + 1 {
                let delta = avg.s[i + 1] - (avg.s[i] + avg.m[i]);
                assert!(delta.abs() <= 1e-12, "at T={}, delta {delta}", grid[i]);
                checked += 1;
            }
        }
        assert!(checked >= base.len());
    }

    #[test]
    fn average_is_monotone_and_bounded() {
        let spec = IrmSpec {
            n_units: 40,
            zipf_exponent: 1.2,
            length: 20_000,
            seed: 2,
        };
        let s = gen_irm(&spec).unwrap();
        let grid = default_grid(s.len());
        let avg = avg_ws_from_histogram(&reuse_histogram(&s), &grid).unwrap();
        assert_eq!(avg.s[0], 1.0); // s(1)
        for i in 0..avg.len() {
            assert!(avg.m[i] >= 0.0 && avg.m[i] <= 1.0);
            assert!(avg.s[i] <= (avg.grid[i] as f64).min(40.0) + 1e-12);
            if i > 0 {
                assert!(avg.s[i] >= avg.s[i - 1]);
                assert!(avg.m[i] <= avg.m[i - 1] + 1e-15);
            }
        }
    }

    #[test]
    fn curve_average_arithmetic() {
        let curves = vec![
            WorkingSetCurve {
                start_index: 0,
                samples: vec![(1, 1), (2, 2)],
            },
            WorkingSetCurve {
                start_index: 5,
                samples: vec![(1, 1), (2, 4)],
            },
        ];
        let cfg = CurveAvgConfig {
            quorum: 2,
            trim_fraction: 0.0,
        };
        let avg = avg_ws_from_curves(&curves, &cfg).unwrap();
        assert_eq!(avg.grid, vec![1, 2]);
        assert_eq!(avg.s, vec![1.0, 3.0]);
        let std = avg.std.unwrap();
        assert_eq!(std[0], 0.0);
        assert!((std[1] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identical_curves_have_zero_std() {
        let spec = IrmSpec {
            n_units: 30,
            zipf_exponent: 1.0,
            length: 500,
            seed: 4,
        };
        let s = gen_irm(&spec).unwrap();
        let grid = default_grid(s.len());
        let c = ws_curve(&s, 0, s.len(), &grid).unwrap();
        let curves: Vec<_> = (0..8).map(|_| c.clone()).collect();
        let avg = avg_ws_from_curves(&curves, &CurveAvgConfig::default()).unwrap();
        assert!(avg.std.unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn curve_average_requires_quorum() {
        let curves = vec![
            WorkingSetCurve {
                start_index: 0,
                samples: vec![(1, 1)],
            },
            WorkingSetCurve {
                start_index: 1,
                samples: vec![(1, 1)],
            },
        ];
        let cfg = CurveAvgConfig {
            quorum: 8,
            trim_fraction: 0.0,
        };
        assert!(avg_ws_from_curves(&curves, &cfg).is_err());
    }

    #[test]
    fn trim_drops_the_sparse_tail() {
        let spec = IrmSpec {
            n_units: 64,
            zipf_exponent: 0.8,
            length: 10_000,
            seed: 6,
        };
        let s = gen_irm(&spec).unwrap();
        let grid = default_grid(s.len());
        let fam = ws_curve_family(&s, 200, 48, &grid).unwrap();
        let trimmed = avg_ws_from_curves(
            &fam,
            &CurveAvgConfig {
                quorum: 8,
                trim_fraction: 0.05,
            },
        )
        .unwrap();
        let full = avg_ws_from_curves(
            &fam,
            &CurveAvgConfig {
                quorum: 8,
                trim_fraction: 0.0,
            },
        )
        .unwrap();
        assert!(trimmed.len() < full.len());
        assert!(trimmed.grid.last().unwrap() < full.grid.last().unwrap());
    }

    #[test]
    fn estimators_agree_on_stationary_stream() {
        let spec = IrmSpec {
            n_units: 500,
            zipf_exponent: 1.0,
            length: 200_000,
            seed: 12,
        };
        let s = gen_irm(&spec).unwrap();
        let grid = default_grid(s.len());
        // 192 curves keep the across-curve noise at the smallest windows
        // well inside the tolerance.
        let fam = ws_curve_family(&s, s.len() / 192, 192, &grid).unwrap();
        let by_curves = avg_ws_from_curves(&fam, &CurveAvgConfig::default()).unwrap();
        let by_hist = avg_ws_from_histogram(&reuse_histogram(&s), &by_curves.grid).unwrap();
        for i in 0..by_curves.len() {
            let rel = (by_curves.s[i] - by_hist.s[i]).abs() / by_hist.s[i];
            assert!(
                rel < 0.02,
                "T={}: curves {} hist {} rel {rel}",
                by_curves.grid[i],
                by_curves.s[i],
                by_hist.s[i]
            );
        }
    }
}

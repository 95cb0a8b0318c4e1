//! Piecewise power-law locality model.
//!
//! The average working-set size of a trace with temporal locality is close
//! to piecewise linear in log-log scale, so it is compressed into segments
//! of the form `s(u) = e^beta * u^alpha` with `0 < alpha <= 1`. From the
//! fitted segments follow the miss rate per reference,
//! `m(u) = e^beta * alpha * u^(alpha-1)`, and -- by inverting `s` inside a
//! segment -- the miss rate as a function of cache size,
//! `m(s) = e^(beta/alpha) * alpha * s^(1 - 1/alpha)`.
//!
//! Breakpoints are chosen by dynamic programming over the sample grid,
//! minimizing the total squared error of the log-log fit; this makes the
//! segmentation exact and reproducible for a given grid. `s` is kept
//! continuous across knees by anchoring each segment's intercept to the
//! previous segment's endpoint; the miss rate still jumps at knees because
//! the slope changes, which is inherent to a piecewise fit.
//!
//! Evaluation outside the fitted window range is refused: the growth of
//! `s(u)` beyond the observed trace cannot be extrapolated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::workingset::AvgWorkingSet;

const ALPHA_MIN: f64 = 1e-6;

/// One fitted segment of the locality law, valid on `[u_lo, u_hi]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Segment {
    pub u_lo: f64,
    pub u_hi: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Segment {
    fn s_at(&self, u: f64) -> f64 {
        (self.beta + self.alpha * u.ln()).exp()
    }

    fn m_at(&self, u: f64) -> f64 {
        self.alpha * (self.beta + (self.alpha - 1.0) * u.ln()).exp()
    }

    /// Miss rate at working-set size `s`, evaluated in log space so that
    /// near-flat segments (tiny alpha) stay finite.
    fn m_at_size(&self, s: f64) -> f64 {
        self.alpha * ((self.beta - s.ln()) / self.alpha + s.ln()).exp()
    }

    fn u_at_size(&self, s: f64) -> f64 {
        ((s.ln() - self.beta) / self.alpha).exp()
    }
}

/// A fitted piecewise power law for `s(u)` over `[u_min, u_max]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseLocality {
    segments: Vec<Segment>,
    /// Sum of squared log-log residuals of the unconstrained per-segment
    /// fits (the dynamic-programming objective).
    pub log_sse: f64,
    /// Non-fatal fit diagnostics: clamped exponents, ordering violations.
    pub warnings: Vec<String>,
}

impl PiecewiseLocality {
    /// Assemble a model from explicit segments, validating the invariants:
    /// gapless tiling, `alpha` in `(0, 1]`, continuity of `s` at knees.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("no segments".into()));
        }
        for seg in &segments {
            if !(seg.u_lo > 0.0 && seg.u_hi > seg.u_lo) {
                return Err(Error::InvalidInput(format!(
                    "bad segment range [{}, {}]",
                    seg.u_lo, seg.u_hi
                )));
            }
            if !(seg.alpha > 0.0 && seg.alpha <= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "alpha {} outside (0, 1]",
                    seg.alpha
                )));
            }
        }
        for pair in segments.windows(2) {
            if (pair[0].u_hi - pair[1].u_lo).abs() > 1e-9 * pair[0].u_hi {
                return Err(Error::InvalidInput(
                    "segments do not tile the domain".into(),
                ));
            }
            let left = pair[0].s_at(pair[0].u_hi);
            let right = pair[1].s_at(pair[1].u_lo);
            if (left - right).abs() > 1e-6 * left.max(right) {
                return Err(Error::InvalidInput(format!(
                    "s is discontinuous at knee u={}: {left} vs {right}",
                    pair[0].u_hi
                )));
            }
        }
        Ok(PiecewiseLocality {
            segments,
            log_sse: 0.0,
            warnings: Vec::new(),
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn u_min(&self) -> f64 {
        self.segments.first().unwrap().u_lo
    }

    pub fn u_max(&self) -> f64 {
        self.segments.last().unwrap().u_hi
    }

    /// Smallest representable working-set size, `s(u_min)`.
    pub fn s_min(&self) -> f64 {
        let s = self.segments.first().unwrap();
        s.s_at(s.u_lo)
    }

    /// Largest representable working-set size, `s(u_max)`.
    pub fn s_max(&self) -> f64 {
        let s = self.segments.last().unwrap();
        s.s_at(s.u_hi)
    }

    /// Working-set sizes at segment knees (including both domain ends).
    pub fn s_knees(&self) -> Vec<f64> {
        let mut knees = vec![self.s_min()];
        knees.extend(self.segments.iter().map(|seg| seg.s_at(seg.u_hi)));
        knees
    }

    fn segment_for_u(&self, u: f64) -> Result<&Segment> {
        let lo = self.u_min();
        let hi = self.u_max();
        if !(u >= lo * (1.0 - 1e-12) && u <= hi * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "u = {u} outside fitted window range [{lo}, {hi}]"
            )));
        }
        let idx = self
            .segments
            .partition_point(|seg| seg.u_hi < u)
            .min(self.segments.len() - 1);
        Ok(&self.segments[idx])
    }

    fn segment_for_s(&self, s: f64) -> Result<&Segment> {
        let lo = self.s_min();
        let hi = self.s_max();
        if !(s >= lo * (1.0 - 1e-12) && s <= hi * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "cache size {s} outside modeled range [{lo}, {hi}]"
            )));
        }
        let idx = self
            .segments
            .partition_point(|seg| seg.s_at(seg.u_hi) < s)
            .min(self.segments.len() - 1);
        Ok(&self.segments[idx])
    }

    /// Average working-set size after `u` references.
    pub fn eval_s(&self, u: f64) -> Result<f64> {
        Ok(self.segment_for_u(u)?.s_at(u))
    }

    /// Miss rate per reference after `u` references (the derivative of
    /// [`eval_s`](Self::eval_s)).
    pub fn eval_m_u(&self, u: f64) -> Result<f64> {
        Ok(self.segment_for_u(u)?.m_at(u))
    }

    /// Miss rate of a cache holding `s` entries.
    pub fn eval_m_s(&self, s: f64) -> Result<f64> {
        Ok(self.segment_for_s(s)?.m_at_size(s))
    }

    /// Number of references at which the working set reaches size `s`.
    pub fn invert_s(&self, s: f64) -> Result<f64> {
        Ok(self.segment_for_s(s)?.u_at_size(s))
    }
}

/// Fit a `k_segments`-piece power law to sampled `s(u)` values.
///
/// Needs at least `2 * k_segments` grid points. Exponents that land outside
/// `(0, 1]` are clamped and reported in `warnings`, as are violations of
/// the expected slope ordering (alpha nonincreasing, beta nondecreasing).
pub fn fit_piecewise(samples: &AvgWorkingSet, k_segments: usize) -> Result<PiecewiseLocality> {
    if k_segments < 1 {
        return Err(Error::InvalidInput("k_segments must be >= 1".into()));
    }
    let mut xs = Vec::with_capacity(samples.grid.len());
    let mut ys = Vec::with_capacity(samples.grid.len());
    for (&u, &s) in samples.grid.iter().zip(&samples.s) {
        if u > 0 && s > 0.0 {
            xs.push((u as f64).ln());
            ys.push(s.ln());
        }
    }
    let p = xs.len();
    if p < 2 * k_segments {
        return Err(Error::InsufficientData(format!(
            "{p} usable points cannot support {k_segments} segments"
        )));
    }

    let runs = segment_runs(&xs, &ys, k_segments);
    let log_sse: f64 = runs
        .iter()
        .map(|&(lo, hi)| run_cost(&prefix_sums(&xs, &ys), lo, hi))
        .sum();

    let mut warnings = Vec::new();
    let mut segments: Vec<Segment> = Vec::with_capacity(k_segments);
    for (r, &(lo, hi)) in runs.iter().enumerate() {
        let (mut alpha, free_beta) = regress(&xs[lo..=hi], &ys[lo..=hi]);
        if alpha > 1.0 {
            warnings.push(format!(
                "segment {r}: alpha {alpha:.6} clamped to 1 (faster-than-linear growth)"
            ));
            alpha = 1.0;
        } else if alpha < ALPHA_MIN {
            warnings.push(format!(
                "segment {r}: alpha {alpha:.6} clamped to {ALPHA_MIN} (non-growing fit)"
            ));
            alpha = ALPHA_MIN;
        }
        // Anchor the intercept so s stays continuous: the first segment to
        // its own fit at the domain start, later ones to the previous
        // segment's value at the shared knee.
        let (anchor_x, anchor_y) = match segments.last() {
            None => (xs[lo], free_beta + alpha * xs[lo]),
            Some(prev) => (xs[lo], prev.s_at(xs[lo].exp()).ln()),
        };
        let beta = anchor_y - alpha * anchor_x;
        let u_lo = xs[lo].exp();
        let u_hi = if r + 1 < runs.len() {
            xs[runs[r + 1].0].exp()
        } else {
            xs[p - 1].exp()
        };
        segments.push(Segment {
            u_lo,
            u_hi,
            alpha,
            beta,
        });
    }

    for (i, pair) in segments.windows(2).enumerate() {
        if pair[1].alpha > pair[0].alpha + 1e-12 {
            warnings.push(format!(
                "alpha increases across knee {i} ({:.6} -> {:.6})",
                pair[0].alpha, pair[1].alpha
            ));
        }
        if pair[1].beta < pair[0].beta - 1e-12 {
            warnings.push(format!(
                "beta decreases across knee {i} ({:.6} -> {:.6})",
                pair[0].beta, pair[1].beta
            ));
        }
    }

    Ok(PiecewiseLocality {
        segments,
        log_sse,
        warnings,
    })
}

/// Least-squares slope and intercept on already-logged points.
fn regress(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

struct Sums {
    x: Vec<f64>,
    y: Vec<f64>,
    xx: Vec<f64>,
    xy: Vec<f64>,
    yy: Vec<f64>,
}

fn prefix_sums(xs: &[f64], ys: &[f64]) -> Sums {
    let n = xs.len();
    let mut s = Sums {
        x: vec![0.0; n + 1],
        y: vec![0.0; n + 1],
        xx: vec![0.0; n + 1],
        xy: vec![0.0; n + 1],
        yy: vec![0.0; n + 1],
    };
    for i in 0..n {
        s.x[i + 1] = s.x[i] + xs[i];
        s.y[i + 1] = s.y[i] + ys[i];
        s.xx[i + 1] = s.xx[i] + xs[i] * xs[i];
        s.xy[i + 1] = s.xy[i] + xs[i] * ys[i];
        s.yy[i + 1] = s.yy[i] + ys[i] * ys[i];
    }
    s
}

/// SSE of the least-squares line over points `lo..=hi`.
fn run_cost(sums: &Sums, lo: usize, hi: usize) -> f64 {
    let n = (hi - lo + 1) as f64;
    let sx = sums.x[hi + 1] - sums.x[lo];
    let sy = sums.y[hi + 1] - sums.y[lo];
    let sxx = sums.xx[hi + 1] - sums.xx[lo];
    let sxy = sums.xy[hi + 1] - sums.xy[lo];
    let syy = sums.yy[hi + 1] - sums.yy[lo];
    let det = n * sxx - sx * sx;
    if det <= 0.0 {
        return 0.0;
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    (syy - intercept * sy - slope * sxy).max(0.0)
}

/// Optimal partition of the points into `k` contiguous runs of >= 2 points,
/// minimizing total per-run least-squares error. Returns `(lo, hi)` pairs.
fn segment_runs(xs: &[f64], ys: &[f64], k: usize) -> Vec<(usize, usize)> {
    let p = xs.len();
    let sums = prefix_sums(xs, ys);
    const INF: f64 = f64::INFINITY;

    // dp[seg][j]: best cost covering points 0..=j with seg+1 runs.
    let mut dp = vec![vec![INF; p]; k];
    let mut cut = vec![vec![0usize; p]; k];
    for j in 1..p {
        dp[0][j] = run_cost(&sums, 0, j);
    }
    for seg in 1..k {
        for j in (2 * (seg + 1) - 1)..p {
            let mut best = INF;
            let mut best_i = 0;
            // run (i..=j) needs >= 2 points; prefix 0..=i-1 needs >= 2*seg.
            for i in (2 * seg)..=(j - 1) {
                let c = dp[seg - 1][i - 1] + run_cost(&sums, i, j);
                if c < best {
                    best = c;
                    best_i = i;
                }
            }
            dp[seg][j] = best;
            cut[seg][j] = best_i;
        }
    }

    let mut runs = Vec::with_capacity(k);
    let mut hi = p - 1;
    for seg in (0..k).rev() {
        let lo = if seg == 0 { 0 } else { cut[seg][hi] };
        runs.push((lo, hi));
        if seg > 0 {
            hi = lo - 1;
        }
    }
    runs.reverse();
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples_from(f: impl Fn(f64) -> f64, grid: &[u64]) -> AvgWorkingSet {
        let s: Vec<f64> = grid.iter().map(|&u| f(u as f64)).collect();
        AvgWorkingSet {
            grid: grid.to_vec(),
            s,
            std: None,
            m: vec![0.0; grid.len()],
        }
    }

    fn single(alpha: f64, beta: f64, u_hi: f64) -> PiecewiseLocality {
        PiecewiseLocality::from_segments(vec![Segment {
            u_lo: 1.0,
            u_hi,
            alpha,
            beta,
        }])
        .unwrap()
    }

    #[test]
    fn identity_locality_recovered() {
        let grid = crate::grid::log_grid(1, 100_000, 16);
        let fit = fit_piecewise(&samples_from(|u| u, &grid), 1).unwrap();
        let seg = fit.segments()[0];
        assert!((seg.alpha - 1.0).abs() < 1e-9);
        assert!(seg.beta.abs() < 1e-9);
        assert!(fit.warnings.is_empty());
    }

    #[test]
    fn power_law_recovered_exactly() {
        let grid = crate::grid::log_grid(1, 1_000_000, 16);
        let fit = fit_piecewise(&samples_from(|u| (0.2 + 0.6 * u.ln()).exp(), &grid), 1).unwrap();
        let seg = fit.segments()[0];
        assert!((seg.alpha - 0.6).abs() < 1e-6, "alpha {}", seg.alpha);
        assert!((seg.beta - 0.2).abs() < 1e-6, "beta {}", seg.beta);
    }

    #[test]
    fn two_segment_knee_recovered() {
        let knee = 1000.0f64;
        let a1 = 0.9;
        let a2 = 0.5;
        let b2 = (a1 - a2) * knee.ln();
        let truth = move |u: f64| {
            if u <= knee {
                (a1 * u.ln()).exp()
            } else {
                (b2 + a2 * u.ln()).exp()
            }
        };
        let grid = crate::grid::log_grid(1, 1_000_000, 16);
        let fit = fit_piecewise(&samples_from(truth, &grid), 2).unwrap();
        let segs = fit.segments();
        assert_eq!(segs.len(), 2);
        assert!(
            (segs[0].alpha - a1).abs() < 0.01,
            "alpha1 {}",
            segs[0].alpha
        );
        assert!(
            (segs[1].alpha - a2).abs() < 0.01,
            "alpha2 {}",
            segs[1].alpha
        );
        // knee within one grid step of the true knee
        let knee_hat = segs[0].u_hi;
        let gi = grid.partition_point(|&t| (t as f64) < knee_hat);
        let lo = grid[gi.saturating_sub(2)] as f64;
        let hi = grid[(gi + 1).min(grid.len() - 1)] as f64;
        assert!(
            lo <= knee && knee <= hi,
            "knee {knee_hat} not within one step of {knee}"
        );
    }

    #[test]
    fn sse_never_increases_with_more_segments() {
        // A gently curving profile no single power law fits exactly.
        let grid = crate::grid::log_grid(1, 100_000, 12);
        let samples = samples_from(|u| (0.9 * u.ln() - 0.03 * u.ln() * u.ln()).exp(), &grid);
        let mut prev = f64::INFINITY;
        for k in 1..=4 {
            let fit = fit_piecewise(&samples, k).unwrap();
            assert!(
                fit.log_sse <= prev + 1e-12,
                "k={k}: {} > {}",
                fit.log_sse,
                prev
            );
            prev = fit.log_sse;
        }
    }

    #[test]
    fn fit_rejects_undersized_input() {
        let grid = [1u64, 2, 3];
        let samples = samples_from(|u| u, &grid);
        assert!(fit_piecewise(&samples, 2).is_err());
        assert!(fit_piecewise(&samples, 0).is_err());
    }

    #[test]
    fn eval_s_basics() {
        let fit = single(1.0, 0.0, 1e6);
        assert!((fit.eval_s(7.0).unwrap() - 7.0).abs() < 1e-12);
        let root = single(0.5, 0.0, 1e6);
        assert!((root.eval_s(16.0).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(root.eval_s(2e6), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_m_u_basics() {
        let fit = single(1.0, 0.0, 1e6);
        assert!((fit.eval_m_u(123.0).unwrap() - 1.0).abs() < 1e-12);
        let root = single(0.5, 0.0, 1e6);
        assert!((root.eval_m_u(16.0).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn eval_m_s_consistent_with_m_u() {
        let root = single(0.5, 0.0, 1e6);
        assert!((root.eval_m_s(4.0).unwrap() - 0.125).abs() < 1e-12);
        let flat = single(1.0, 0.0, 1e6);
        for s in [1.0, 10.0, 99999.0] {
            assert!((flat.eval_m_s(s).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn miss_rate_jumps_to_faster_branch_at_knees() {
        // s stays continuous across a knee but the slope drops, so m(s)
        // jumps down by exactly the exponent ratio.
        let (a1, a2) = (0.9f64, 0.4f64);
        let knee_u = 1000.0f64;
        let fit = PiecewiseLocality::from_segments(vec![
            Segment {
                u_lo: 1.0,
                u_hi: knee_u,
                alpha: a1,
                beta: 0.0,
            },
            Segment {
                u_lo: knee_u,
                u_hi: 1e7,
                alpha: a2,
                beta: (a1 - a2) * knee_u.ln(),
            },
        ])
        .unwrap();
        let knee_s = fit.eval_s(knee_u).unwrap();
        let below = fit.eval_m_s(knee_s * (1.0 - 1e-9)).unwrap();
        let above = fit.eval_m_s(knee_s * (1.0 + 1e-9)).unwrap();
        assert!(above < below);
        assert!(
            (above / below - a2 / a1).abs() < 1e-6,
            "jump ratio {} vs {}",
            above / below,
            a2 / a1
        );
    }

    #[test]
    fn superlinear_growth_is_clamped_with_warning() {
        let grid = crate::grid::log_grid(1, 100_000, 16);
        let fit = fit_piecewise(&samples_from(|u| (1.2 * u.ln()).exp(), &grid), 1).unwrap();
        assert_eq!(fit.segments()[0].alpha, 1.0);
        assert!(
            fit.warnings.iter().any(|w| w.contains("clamped")),
            "{:?}",
            fit.warnings
        );
    }

    #[test]
    fn m_s_of_s_u_equals_m_u() {
        let fit = PiecewiseLocality::from_segments(vec![
            Segment {
                u_lo: 1.0,
                u_hi: 1000.0,
                alpha: 0.9,
                beta: 0.0,
            },
            Segment {
                u_lo: 1000.0,
                u_hi: 1e7,
                alpha: 0.4,
                beta: 0.5 * 1000.0f64.ln(),
            },
        ])
        .unwrap();
        for &u in &[1.5, 10.0, 500.0, 999.0, 2000.0, 1e6, 9e6] {
            let via_u = fit.eval_m_u(u).unwrap();
            let via_s = fit.eval_m_s(fit.eval_s(u).unwrap()).unwrap();
            assert!(
                (via_u - via_s).abs() <= 1e-9 * via_u.abs(),
                "u={u}: {via_u} vs {via_s}"
            );
        }
    }

    #[test]
    fn invert_s_round_trips() {
        let fit = single(0.5, 0.0, 1e6);
        assert!((fit.invert_s(4.0).unwrap() - 16.0).abs() < 1e-9);
        let ident = single(1.0, 0.0, 1e6);
        assert!((ident.invert_s(9.0).unwrap() - 9.0).abs() < 1e-12);

        let mut state = 0x9E37u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let frac = (state >> 11) as f64 / (1u64 << 53) as f64;
            let s = fit.s_min() + frac * (fit.s_max() - fit.s_min());
            let round = fit.eval_s(fit.invert_s(s).unwrap()).unwrap();
            assert!((round - s).abs() <= 1e-9 * s, "s={s} round={round}");
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let fit = PiecewiseLocality::from_segments(vec![Segment {
            u_lo: 1.0,
            u_hi: 1e8,
            alpha: 0.7,
            beta: 0.3,
        }])
        .unwrap();
        for &u in &[10.0, 1e3, 1e5, 1e7] {
            let h = u * 1e-8;
            let fd = (fit.eval_s(u + h).unwrap() - fit.eval_s(u).unwrap()) / h;
            let m = fit.eval_m_u(u).unwrap();
            assert!((fd - m).abs() <= 1e-6 * m, "u={u}: fd {fd} vs m {m}");
        }
    }

    #[test]
    fn eval_is_continuous_and_monotone_across_knees() {
        let grid = crate::grid::log_grid(1, 1_000_000, 24);
        let samples = samples_from(|u| (0.95 * u.ln() - 0.04 * u.ln() * u.ln()).exp(), &grid);
        let fit = fit_piecewise(&samples, 4).unwrap();
        let mut prev = 0.0;
        for i in 0..2000 {
            let u = fit.u_min() * (fit.u_max() / fit.u_min()).powf(i as f64 / 1999.0);
            let s = fit.eval_s(u).unwrap();
            assert!(s >= prev - 1e-9 * s, "s not monotone at u={u}");
            prev = s;
        }
        for pair in fit.segments().windows(2) {
            let left = pair[0].s_at(pair[0].u_hi);
            let right = pair[1].s_at(pair[1].u_lo);
            assert!((left - right).abs() <= 1e-9 * left);
        }
    }

    #[test]
    fn tiny_alpha_stays_finite() {
        // Near-saturated segment: s pinned around 1e4 over a wide u range.
        let fit = PiecewiseLocality::from_segments(vec![Segment {
            u_lo: 1e5,
            u_hi: 1e7,
            alpha: 0.003,
            beta: 9.2,
        }])
        .unwrap();
        let m = fit.eval_m_s(fit.s_max() * 0.9999).unwrap();
        assert!(m.is_finite() && m > 0.0 && m < 1.0, "m = {m}");
    }

    #[test]
    fn from_segments_validates() {
        assert!(PiecewiseLocality::from_segments(vec![]).is_err());
        assert!(PiecewiseLocality::from_segments(vec![Segment {
            u_lo: 1.0,
            u_hi: 10.0,
            alpha: 1.5,
            beta: 0.0
        }])
        .is_err());
        // gap between segments
        assert!(PiecewiseLocality::from_segments(vec![
            Segment {
                u_lo: 1.0,
                u_hi: 10.0,
                alpha: 1.0,
                beta: 0.0
            },
            Segment {
                u_lo: 20.0,
                u_hi: 30.0,
                alpha: 0.5,
                beta: 0.0
            }
        ])
        .is_err());
    }
}

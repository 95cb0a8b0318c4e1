//! Stationarity tests for reference streams.
//!
//! Two independent checks decide whether a stream can be treated as the
//! output of a single stationary process:
//!
//! * Curve clustering: if for every window size the working-set sizes
//!   `w(t,T)` observed across equally spaced start times cluster around a
//!   common value and look normally distributed, the generating process is
//!   time-translation invariant. Normality is assessed per window with a
//!   skewness/kurtosis omnibus statistic whose small-sample null is
//!   calibrated by seeded Monte Carlo.
//! * Augmented Dickey-Fuller: the interreference-distance series,
//!   aggregated into fixed-size window means, must reject the unit-root
//!   null at the 1% level. Critical values are likewise obtained by seeded
//!   Monte Carlo simulation of the unit-root null instead of transcribed
//!   tables, so the whole test is self-contained and reproducible.
//!
//! A stream is reported `Stationary` only when both checks agree.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid;
use crate::par;
use crate::stats;
use crate::trace::ReferenceStream;
use crate::workingset::{ws_curve_family, WorkingSetCurve};

/// Controls for the clustering/normality test.
#[derive(Debug, Clone, Copy)]
pub struct ClusterConfig {
    /// Minimum curves that must cover every tested window.
    pub min_curves: usize,
    /// Fraction of windows that must pass the normality check.
    pub pass_quota: f64,
    /// Upper bound on std/mean at every tested window.
    pub dispersion_bound: f64,
    /// Significance level of the per-window normality check. The default
    /// matches the unit-root test's 1% level; working-set sizes are
    /// integers, so an aggressive level would flag harmless discreteness.
    pub alpha: f64,
    /// Monte Carlo replicates for the small-sample null calibration.
    pub mc_replicates: u32,
    pub seed: u64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            min_curves: 8,
            pass_quota: 0.8,
            dispersion_bound: 0.2,
            alpha: 0.01,
            mc_replicates: 2000,
            seed: 0x57A7,
        }
    }
}

/// Per-window statistics of `w(t,T)` across curves.
#[derive(Debug, Clone, Serialize)]
pub struct WindowNormality {
    pub window: u64,
    pub curves: usize,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Omnibus normality statistic; 0 for degenerate (std = 0) windows.
    pub stat: f64,
    /// Monte-Carlo critical value at the configured level.
    pub critical: f64,
    /// std / mean.
    pub dispersion: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterVerdict {
    Clustered,
    NotClustered,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterReport {
    pub per_window: Vec<WindowNormality>,
    pub pass_fraction: f64,
    pub dispersion_ok: bool,
    pub verdict: ClusterVerdict,
}

/// Test whether working-set curves cluster: at every tested window the
/// across-curve values must stay tight (dispersion bound) and a quota of
/// windows must be compatible with normality. A window where every curve
/// agrees exactly (std = 0) is perfect clustering and passes outright.
pub fn clustering_test(
    curves: &[WorkingSetCurve],
    windows: &[u64],
    config: &ClusterConfig,
) -> Result<ClusterReport> {
    if windows.is_empty() {
        return Err(Error::InvalidInput("no windows to test".into()));
    }
    let mut per_window = Vec::with_capacity(windows.len());
    let mut passes = 0usize;
    let mut dispersion_ok = true;

    for &t in windows {
        let values: Vec<f64> = curves
            .iter()
            .filter_map(|c| c.at(t).map(|w| w as f64))
            .collect();
        if values.len() < config.min_curves {
            return Err(Error::InsufficientData(format!(
                "window {t} covered by {} curves, need {}",
                values.len(),
                config.min_curves
            )));
        }
        let m = stats::moments(&values);
        let dispersion = m.std / m.mean;
        let (stat, critical, pass) = if m.std == 0.0 {
            (0.0, f64::INFINITY, true)
        } else {
            let stat = stats::omnibus_stat(values.len(), m.skewness, m.excess_kurtosis);
            let critical = omnibus_critical(values.len(), config);
            (stat, critical, stat <= critical)
        };
        if pass {
            passes += 1;
        }
        if dispersion > config.dispersion_bound {
            dispersion_ok = false;
        }
        per_window.push(WindowNormality {
            window: t,
            curves: values.len(),
            mean: m.mean,
            std: m.std,
            skewness: m.skewness,
            excess_kurtosis: m.excess_kurtosis,
            stat,
            critical,
            dispersion,
            pass,
        });
    }

    let pass_fraction = passes as f64 / per_window.len() as f64;
    let verdict = if pass_fraction >= config.pass_quota && dispersion_ok {
        ClusterVerdict::Clustered
    } else {
        ClusterVerdict::NotClustered
    };
    Ok(ClusterReport {
        per_window,
        pass_fraction,
        dispersion_ok,
        verdict,
    })
}

/// Monte-Carlo critical value of the omnibus statistic under the normal
/// null at sample size `n`. Cached per (n, level, replicates, seed).
fn omnibus_critical(n: usize, config: &ClusterConfig) -> f64 {
    static CACHE: Mutex<Option<HashMap<(usize, u64, u32, u64), f64>>> = Mutex::new(None);
    let key = (n, config.alpha.to_bits(), config.mc_replicates, config.seed);
    if let Some(v) = CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .get(&key)
    {
        return *v;
    }
    let reps = config.mc_replicates as usize;
    let mut stats_mc = par::map_range(reps, |rep| {
        let mut rng = stats::rng_for(config.seed.wrapping_add(n as u64), rep as u64);
        let sample: Vec<f64> = (0..n).map(|_| stats::standard_normal(&mut rng)).collect();
        let m = stats::moments(&sample);
        stats::omnibus_stat(n, m.skewness, m.excess_kurtosis)
    });
    stats_mc.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = (((1.0 - config.alpha) * reps as f64).floor() as usize).min(reps - 1);
    let crit = stats_mc[idx];
    CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(key, crit);
    crit
}

/// Means of consecutive windows of `window` finite interreference distances
/// (first references are excluded). The final partial window is dropped.
pub fn interreference_mean_series(stream: &ReferenceStream, window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::InvalidInput("window must be positive".into()));
    }
    let alphabet = stream.alphabet_size();
    let mut last_seen = vec![0u64; alphabet];
    let mut means = Vec::new();
    let mut acc = 0.0f64;
    let mut in_window = 0usize;
    for (idx, &id) in stream.ids().iter().enumerate() {
        let pos = idx as u64 + 1;
        let slot = &mut last_seen[id as usize];
        if *slot != 0 {
            acc += (pos - *slot) as f64;
            in_window += 1;
            if in_window == window {
                means.push(acc / window as f64);
                acc = 0.0;
                in_window = 0;
            }
        }
        *slot = pos;
    }
    if means.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {} full windows of {window} finite distances",
            means.len()
        )));
    }
    Ok(means)
}

/// Controls for the unit-root test's Monte Carlo calibration.
#[derive(Debug, Clone, Copy)]
pub struct AdfConfig {
    pub seed: u64,
    pub replicates: u32,
}

impl Default for AdfConfig {
    fn default() -> Self {
        AdfConfig {
            seed: 0xADF0,
            replicates: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdfReport {
    pub series_len: usize,
    pub lag_order: usize,
    pub t_stat: f64,
    pub critical_1pct: f64,
    pub reject_unit_root: bool,
}

/// Augmented Dickey-Fuller test with intercept, no trend, at the 1% level.
///
/// The regression is `dy_t = c + g*y_{t-1} + sum_i phi_i dy_{t-i} + e_t`
/// with the lag order fixed by the Schwert rule `floor(12 (n/100)^{1/4})`;
/// the t-statistic of `g` is compared against the simulated 1% critical
/// value. Rejection means the series looks stationary.
pub fn adf_test(series: &[f64]) -> Result<AdfReport> {
    adf_test_with(series, &AdfConfig::default())
}

pub fn adf_test_with(series: &[f64], config: &AdfConfig) -> Result<AdfReport> {
    let n = series.len();
    if n < 25 {
        return Err(Error::InsufficientData(format!(
            "ADF needs at least 25 observations, got {n}"
        )));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    if series
        .iter()
        .all(|&y| (y - mean).abs() < 1e-12 * mean.abs().max(1.0))
    {
        return Err(Error::DegenerateSeries(
            "constant series has no unit-root regression".into(),
        ));
    }

    let lag_order = schwert_lag(n);
    let t_stat = adf_t_stat(series, lag_order)?;
    let critical_1pct = df_critical_1pct(n, config);
    Ok(AdfReport {
        series_len: n,
        lag_order,
        t_stat,
        critical_1pct,
        reject_unit_root: t_stat < critical_1pct,
    })
}

fn schwert_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

fn adf_t_stat(y: &[f64], lags: usize) -> Result<f64> {
    let n = y.len();
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // Rows for t = lags+1 .. n-1 (0-based target dy[t-1] refers to y[t]-y[t-1]).
    let mut rows = Vec::with_capacity(n - 1 - lags);
    let mut target = Vec::with_capacity(n - 1 - lags);
    for t in (lags + 1)..n {
        let mut row = Vec::with_capacity(2 + lags);
        row.push(1.0);
        row.push(y[t - 1]);
        for i in 1..=lags {
            row.push(dy[t - 1 - i]);
        }
        rows.push(row);
        target.push(dy[t - 1]);
    }
    if rows.len() <= 2 + lags {
        return Err(Error::InsufficientData(format!(
            "{} observations cannot support {lags} lags",
            y.len()
        )));
    }
    let fit = stats::ols(&rows, &target)
        .ok_or_else(|| Error::DegenerateSeries("singular unit-root regression".into()))?;
    if fit.se[1] == 0.0 || !fit.se[1].is_finite() {
        return Err(Error::DegenerateSeries(
            "zero-variance regressor in unit-root regression".into(),
        ));
    }
    Ok(fit.coef[1] / fit.se[1])
}

/// Dickey-Fuller t-statistic of the no-lag regression `dy = c + g*y_{t-1}`,
/// computed with closed-form sums. Used to simulate the null distribution.
fn df_t_stat_simple(y: &[f64]) -> f64 {
    let m = y.len() - 1;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for t in 1..y.len() {
        sx += y[t - 1];
        sy += y[t] - y[t - 1];
    }
    let mx = sx / m as f64;
    let my = sy / m as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for t in 1..y.len() {
        let dx = y[t - 1] - mx;
        let dyc = (y[t] - y[t - 1]) - my;
        sxx += dx * dx;
        sxy += dx * dyc;
        syy += dyc * dyc;
    }
    let g = sxy / sxx;
    let rss = syy - g * sxy;
    let sigma2 = rss / (m - 2) as f64;
    g / (sigma2 / sxx).sqrt()
}

/// 1% critical value of the Dickey-Fuller t-distribution (intercept case)
/// at series length `n`, by seeded simulation of the random-walk null.
/// Cached per (n, seed, replicates).
fn df_critical_1pct(n: usize, config: &AdfConfig) -> f64 {
    static CACHE: Mutex<Option<HashMap<(usize, u64, u32), f64>>> = Mutex::new(None);
    let key = (n, config.seed, config.replicates);
    if let Some(v) = CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .get(&key)
    {
        return *v;
    }
    let reps = config.replicates as usize;
    let mut ts = par::map_range(reps, |rep| {
        let mut rng = stats::rng_for(config.seed.wrapping_add(n as u64), rep as u64);
        let mut y = Vec::with_capacity(n);
        let mut level = 0.0;
        for _ in 0..n {
            level += stats::standard_normal(&mut rng);
            y.push(level);
        }
        df_t_stat_simple(&y)
    });
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((0.01 * reps as f64).floor() as usize).min(reps - 1);
    let crit = ts[idx];
    CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(key, crit);
    crit
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stationarity {
    Stationary,
    Nonstationary,
    Inconclusive,
}

/// Controls for the combined report.
#[derive(Debug, Clone)]
pub struct StationarityConfig {
    /// Number of equally spaced working-set curves.
    pub curve_count: usize,
    pub points_per_decade: u32,
    /// Aggregation window for the interreference mean series.
    pub mean_window: usize,
    pub cluster: ClusterConfig,
    pub adf: AdfConfig,
}

impl Default for StationarityConfig {
    fn default() -> Self {
        StationarityConfig {
            curve_count: 48,
            points_per_decade: grid::DEFAULT_POINTS_PER_DECADE,
            mean_window: 10_000,
            cluster: ClusterConfig::default(),
            adf: AdfConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StationarityReport {
    pub verdict: Stationarity,
    pub clustering: ClusterReport,
    pub adf: AdfReport,
}

/// Run both stationarity checks on a stream.
///
/// `Stationary` requires the curves to cluster and the unit root to be
/// rejected; `Nonstationary` means both checks failed; anything else is
/// `Inconclusive`.
pub fn stationarity_report(
    stream: &ReferenceStream,
    config: &StationarityConfig,
) -> Result<StationarityReport> {
    if config.curve_count < 2 {
        return Err(Error::InvalidInput("need at least 2 curves".into()));
    }
    let spacing = stream.len() / config.curve_count;
    if spacing == 0 {
        return Err(Error::InsufficientData(format!(
            "stream of {} references cannot carry {} curves",
            stream.len(),
            config.curve_count
        )));
    }
    let master = grid::log_grid(1, stream.len() as u64, config.points_per_decade);
    let curves = ws_curve_family(stream, spacing, config.curve_count, &master)?;

    // Largest window still covered by a normality-worthy number of curves.
    let min_curves = config.cluster.min_curves.max(2);
    if curves.len() < min_curves {
        return Err(Error::InsufficientData(format!(
            "{} curves cannot support clustering statistics",
            curves.len()
        )));
    }
    let max_window = stream.len() as u64 - ((min_curves - 1) * spacing) as u64;
    let windows: Vec<u64> = master
        .iter()
        .copied()
        .take_while(|&t| t <= max_window)
        .collect();

    let clustering = clustering_test(&curves, &windows, &config.cluster)?;
    let means = interreference_mean_series(stream, config.mean_window)?;
    let adf = adf_test_with(&means, &config.adf)?;

    let verdict = match (clustering.verdict, adf.reject_unit_root) {
        (ClusterVerdict::Clustered, true) => Stationarity::Stationary,
        (ClusterVerdict::NotClustered, false) => Stationarity::Nonstationary,
        _ => Stationarity::Inconclusive,
    };
    Ok(StationarityReport {
        verdict,
        clustering,
        adf,
    })
}

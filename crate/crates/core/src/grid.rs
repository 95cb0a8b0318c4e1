//! Logarithmically spaced integer grids.
//!
//! All estimators in this crate sample window sizes on a log grid: the
//! locality fit operates in log-log space, so uniform coverage per decade is
//! what keeps the fit stable.

/// Default sample density for window-size grids.
pub const DEFAULT_POINTS_PER_DECADE: u32 = 32;

/// Log-spaced integer grid covering `[min, max]`, about `per_decade` points
/// per decade. Small values collapse onto consecutive integers after
/// rounding, so the head of the grid is exact: 1, 2, 3, ...
///
/// Both endpoints are always included. Panics if `min` is zero or
/// `min > max`.
pub fn log_grid(min: u64, max: u64, per_decade: u32) -> Vec<u64> {
    assert!(min >= 1, "grid must start at a positive window size");
    assert!(min <= max, "empty grid range");
    assert!(per_decade >= 1);

    let lo = (min as f64).log10();
    let hi = (max as f64).log10();
    let steps = ((hi - lo) * per_decade as f64).ceil() as u64;

    let mut grid = Vec::with_capacity(steps as usize + 2);
    grid.push(min);
    for k in 0..=steps {
        let t = 10f64.powf(lo + k as f64 / per_decade as f64).round() as u64;
        grid.push(t.clamp(min, max));
    }
    grid.push(max);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// The grid plus each point's successor, deduplicated. Sampling `s(T)` on
/// this grid yields the consecutive pairs needed to inspect the discrete
/// derivative `s(T+1) - s(T)` at every grid point.
pub fn with_successors(grid: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(grid.len() * 2);
    for &t in grid {
        out.push(t);
        out.push(t + 1);
    }
    out.sort_unstable();
    out.dedup();
    out
}

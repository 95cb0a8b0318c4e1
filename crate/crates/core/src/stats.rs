//! Small statistics toolbox: seeded RNG derivation, normal sampling, sample
//! moments and ordinary least squares via normal equations. Dimensions are
//! tiny throughout (tens of regressors at most), so Gaussian elimination is
//! entirely adequate.

use rand::Rng;
use rand_pcg::Pcg64Mcg;

/// SplitMix64 finalizer; used to derive independent sub-seeds from a user
/// seed without coupling nearby values.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic RNG for stream `stream_id` of a user-facing seed.
pub(crate) fn rng_for(seed: u64, stream_id: u64) -> Pcg64Mcg {
    Pcg64Mcg::new(splitmix64(seed ^ splitmix64(stream_id)) as u128 | 1)
}

/// One standard normal draw (Box-Muller, polar-free variant).
pub(crate) fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Guard the log against u == 0.
    let u: f64 = loop {
        let u = rng.gen::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Mean, sample standard deviation (n-1), skewness and excess kurtosis.
/// Skewness/kurtosis use population-style moment ratios; callers that need a
/// calibrated null distribution calibrate against these same definitions.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Moments {
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

pub(crate) fn moments(xs: &[f64]) -> Moments {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let std = if xs.len() > 1 {
        (m2 * n / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    if m2 <= 0.0 {
        return Moments {
            mean,
            std: 0.0,
            skewness: 0.0,
            excess_kurtosis: 0.0,
        };
    }
    Moments {
        mean,
        std,
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    }
}

/// Jarque-Bera style omnibus statistic from skewness and excess kurtosis.
pub(crate) fn omnibus_stat(n: usize, skewness: f64, excess_kurtosis: f64) -> f64 {
    let n = n as f64;
    n * (skewness * skewness / 6.0 + excess_kurtosis * excess_kurtosis / 24.0)
}

pub(crate) struct OlsFit {
    pub coef: Vec<f64>,
    pub se: Vec<f64>,
    #[allow(dead_code)]
    pub rss: f64,
}

/// OLS of `y` on design-matrix rows, with classical standard errors.
/// Returns `None` when the normal equations are singular.
pub(crate) fn ols(rows: &[Vec<f64>], y: &[f64]) -> Option<OlsFit> {
    let n = rows.len();
    if n == 0 {
        return None;
    }
    let k = rows[0].len();
    if n <= k {
        return None;
    }

    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..k {
            xty[i] += row[i] * yi;
            for j in i..k {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            xtx[i][j] = xtx[j][i];
        }
    }

    let inv = invert(&xtx)?;
    let mut coef = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            coef[i] += inv[i][j] * xty[j];
        }
    }

    let mut rss = 0.0;
    for (row, &yi) in rows.iter().zip(y) {
        let fitted: f64 = row.iter().zip(&coef).map(|(a, b)| a * b).sum();
        let e = yi - fitted;
        rss += e * e;
    }
    let sigma2 = rss / (n - k) as f64;
    let se = (0..k).map(|i| (sigma2 * inv[i][i]).abs().sqrt()).collect();

    Some(OlsFit { coef, se, rss })
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();

    for i in 0..n {
        let piv = (i..n).max_by(|&r, &s| {
            aug[r][i]
                .abs()
                .partial_cmp(&aug[s][i].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        aug.swap(i, piv);
        if aug[i][i].abs() < 1e-300 {
            return None;
        }
        let d = aug[i][i];
        for j in i..=n {
            aug[i][j] /= d;
        }
        for r in 0..n {
            if r == i {
                continue;
            }
            let f = aug[r][i];
            if f == 0.0 {
                continue;
            }
            for j in i..=n {
                aug[r][j] -= f * aug[i][j];
            }
        }
    }
    Some((0..n).map(|i| aug[i][n]).collect())
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut inv = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve(a, &e)?;
        for i in 0..n {
            inv[i][j] = col[i];
        }
    }
    Some(inv)
}

//! Locality model under prefix-scanning attacks.
//!
//! A scanning attack cycles through a fixed prefix set `omega` in random
//! order at `rho` attack packets per legitimate packet. With `tau =
//! 1/(1+rho)` the legitimate share and `u_k = |omega|/rho` the legitimate
//! packets per full scan cycle, the aggregate working set after `v = tau*u`
//! legitimate packets (u total packets) is
//!
//! ```text
//! v <  u_k:  s_a = s(v) + rho*v - (delta * s(u_k)/u_k) * v
//! v >= u_k:  s_a = (1-delta) * s(v) + |omega|
//! ```
//!
//! legitimate growth plus attack growth minus the expected overlap, with
//! repeats approximated as uniformly spread over the cycle. Both branches
//! agree at `v = u_k` because `rho * u_k = |omega|`, so `s_a` is continuous
//! there by construction. Its derivative with respect to total packets is
//! the aggregate miss rate
//!
//! ```text
//! u <  u_k/tau:  m_a = tau*m(tau u) + (1 - tau - tau*delta*s(u_k)/u_k)
//! u >= u_k/tau:  m_a = tau*(1-delta)*m(tau u)
//! ```
//!
//! `m_a(cache size)` has no closed form; it is obtained by numerically
//! inverting the nondecreasing `s_a`.
//!
//! The model predicts overall misses -- control-plane load -- not the data
//! plane experience of legitimate traffic alone; per-class attribution
//! comes from the emulator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locality::PiecewiseLocality;

/// Parameters of a scanning attack.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AttackSpec {
    /// Relative attack intensity: attack packet rate over legitimate rate.
    pub rho: f64,
    /// Overlap between the attack set and the visited set, `|omega ∩ psi| / |psi|`.
    pub delta: f64,
    /// Attack prefix set size `|omega|`.
    pub omega_size: u64,
}

impl AttackSpec {
    pub fn new(rho: f64, delta: f64, omega_size: u64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "attack intensity rho must be positive, got {rho}"
            )));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidInput(format!(
                "overlap delta must be in [0, 1], got {delta}"
            )));
        }
        if omega_size < 1 {
            return Err(Error::InvalidInput("attack set must be nonempty".into()));
        }
        Ok(AttackSpec {
            rho,
            delta,
            omega_size,
        })
    }

    /// Legitimate share of the merged packet stream, `1/(1+rho)`.
    pub fn tau(&self) -> f64 {
        1.0 / (1.0 + self.rho)
    }

    /// Legitimate packets per full scan cycle.
    pub fn u_k_legit(&self) -> f64 {
        self.omega_size as f64 / self.rho
    }

    /// Total packets per full scan cycle, `|omega| (1+rho)/rho`.
    pub fn u_k_total(&self) -> f64 {
        self.omega_size as f64 * (1.0 + self.rho) / self.rho
    }
}

/// Attack set size when the attacker maximizes coverage:
/// `|omega| = |bgp - psi| + round(delta * |psi|)`, i.e. everything outside
/// the visited set plus the requested overlap share of it.
pub fn build_attack_size(bgp_size: u64, psi_size: u64, delta: f64) -> Result<u64> {
    if psi_size > bgp_size {
        return Err(Error::InvalidInput(format!(
            "visited set ({psi_size}) larger than table ({bgp_size})"
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!(
            "overlap delta must be in [0, 1], got {delta}"
        )));
    }
    Ok((bgp_size - psi_size) + (delta * psi_size as f64).round() as u64)
}

/// Rate at which the attack re-touches already-cached visited prefixes,
/// per legitimate packet (the uniform-overlap approximation). Needs
/// `s(u_k)` and therefore fails when the scan cycle outlives the fitted
/// domain -- except at `delta = 0`, where the term vanishes.
fn overlap_rate(fit: &PiecewiseLocality, spec: &AttackSpec) -> Result<f64> {
    if spec.delta == 0.0 {
        return Ok(0.0);
    }
    let u_k = spec.u_k_legit();
    Ok(spec.delta * fit.eval_s(u_k)? / u_k)
}

/// Aggregate average working set after `u_total` processed packets.
pub fn attack_ws(fit: &PiecewiseLocality, spec: &AttackSpec, u_total: f64) -> Result<f64> {
    let v = spec.tau() * u_total;
    if v < spec.u_k_legit() {
        Ok(fit.eval_s(v)? + spec.rho * v - overlap_rate(fit, spec)? * v)
    } else {
        Ok((1.0 - spec.delta) * fit.eval_s(v)? + spec.omega_size as f64)
    }
}

/// Aggregate miss rate after `u_total` processed packets.
pub fn attack_miss(fit: &PiecewiseLocality, spec: &AttackSpec, u_total: f64) -> Result<f64> {
    let tau = spec.tau();
    let v = tau * u_total;
    if v < spec.u_k_legit() {
        Ok(tau * fit.eval_m_u(v)? + (1.0 - tau - tau * overlap_rate(fit, spec)?))
    } else {
        Ok(tau * (1.0 - spec.delta) * fit.eval_m_u(v)?)
    }
}

/// Total-packet domain over which the attack model is evaluable.
fn u_total_range(fit: &PiecewiseLocality, spec: &AttackSpec) -> (f64, f64) {
    (fit.u_min() / spec.tau(), fit.u_max() / spec.tau())
}

/// Miss rate of a cache of `cache_size` entries under attack, by bisecting
/// the nondecreasing `s_a(u) = cache_size`.
///
/// Bisection runs to floating-point convergence of the packet count. Half
/// a cache entry is the guaranteed worst-case tolerance on `s_a`
/// (cache sizes are integers); in practice the root is resolved far
/// tighter, which the parametric cross-check tests rely on.
pub fn attack_miss_vs_size(
    fit: &PiecewiseLocality,
    spec: &AttackSpec,
    cache_size: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = u_total_range(fit, spec);
    let s_lo = attack_ws(fit, spec, lo)?;
    let s_hi = attack_ws(fit, spec, hi)?;
    if cache_size < s_lo || cache_size > s_hi {
        return Err(Error::Domain(format!(
            "cache size {cache_size} outside reachable range [{s_lo}, {s_hi}]"
        )));
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if attack_ws(fit, spec, mid)? < cache_size {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 4.0 * f64::EPSILON * hi.abs() {
            break;
        }
    }
    // Evaluate at the upper bracket end: the smallest packet count whose
    // working set reaches the requested size. Where m_a jumps (scan-cycle
    // boundary, fit knees) this picks the large-cache side, so a cache
    // exactly at the saturation size |omega| reports the saturated miss
    // rate (0 at full overlap) rather than the pre-saturation one.
    debug_assert!((attack_ws(fit, spec, hi)? - cache_size).abs() <= 0.5);
    attack_miss(fit, spec, hi)
}

/// Sample the parametric curve `(s_a(u), m_a(u))` on `points` log-spaced
/// totals across the evaluable range. This is the plot-ready numeric form
/// of the miss-vs-size relation.
pub fn attack_curve(
    fit: &PiecewiseLocality,
    spec: &AttackSpec,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::InvalidInput("need at least 2 curve points".into()));
    }
    let (lo, hi) = u_total_range(fit, spec);
    let ratio = hi / lo;
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        let u = lo * ratio.powf(i as f64 / (points - 1) as f64);
        // Clamp the last point onto the domain edge against rounding.
        let u = u.min(hi);
        out.push((attack_ws(fit, spec, u)?, attack_miss(fit, spec, u)?));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anomaly {
    Normal,
    Anomalous,
}

/// Compare an observed miss rate against the model's prediction for the
/// cache size in use: anomalous when it exceeds the prediction by more
/// than `threshold_factor`.
pub fn detect_anomaly(
    fit: &PiecewiseLocality,
    cache_size: f64,
    observed_miss_rate: f64,
    threshold_factor: f64,
) -> Result<Anomaly> {
    let predicted = fit.eval_m_s(cache_size)?;
    if observed_miss_rate > threshold_factor * predicted {
        Ok(Anomaly::Anomalous)
    } else {
        Ok(Anomaly::Normal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locality::Segment;

    fn sqrt_fit(u_hi: f64) -> PiecewiseLocality {
        PiecewiseLocality::from_segments(vec![Segment {
            u_lo: 1.0,
            u_hi,
            alpha: 0.5,
            beta: 0.0,
        }])
        .unwrap()
    }

    #[test]
    fn spec_derivations() {
        let spec = AttackSpec::new(0.25, 0.5, 1000).unwrap();
        assert!((spec.tau() - 0.8).abs() < 1e-12);
        assert!((spec.u_k_legit() - 4000.0).abs() < 1e-9);
        assert!((spec.u_k_total() - 5000.0).abs() < 1e-9);
        // u_k_total == u_k_legit / tau
        assert!((spec.u_k_total() - spec.u_k_legit() / spec.tau()).abs() < 1e-9);
    }

    #[test]
    fn spec_validation() {
        assert!(AttackSpec::new(0.0, 0.5, 10).is_err());
        assert!(AttackSpec::new(0.1, 1.5, 10).is_err());
        assert!(AttackSpec::new(0.1, 0.5, 0).is_err());
    }

    #[test]
    fn attack_set_sizes() {
        assert_eq!(build_attack_size(213_070, 109_451, 1.0).unwrap(), 213_070);
        assert_eq!(build_attack_size(213_070, 109_451, 0.0).unwrap(), 103_619);
        assert_eq!(build_attack_size(10, 4, 0.5).unwrap(), 8);
        assert!(build_attack_size(5, 9, 0.5).is_err());
    }

    #[test]
    fn no_overlap_working_set_adds_scan_linearly() {
        // sqrt locality, rho=0.1, |omega|=1000: u_k_legit = 1e4. At v=100
        // legit packets (u_total = 100 * 1.1): s_a = sqrt(100) + 0.1*100 = 20.
        let fit = sqrt_fit(1e8);
        let spec = AttackSpec::new(0.1, 0.0, 1000).unwrap();
        let u_total = 100.0 * 1.1;
        let s_a = attack_ws(&fit, &spec, u_total).unwrap();
        assert!((s_a - 20.0).abs() < 1e-9, "s_a = {s_a}");
    }

    #[test]
    fn full_overlap_saturates_at_omega() {
        let fit = sqrt_fit(1e8);
        let spec = AttackSpec::new(0.5, 1.0, 500).unwrap();
        // Past the cycle boundary the attack set dominates: s_a = |omega|.
        let u_total = spec.u_k_total() * 4.0;
        let s_a = attack_ws(&fit, &spec, u_total).unwrap();
        assert!((s_a - 500.0).abs() < 1e-9);
        // and the aggregate miss rate drops to zero.
        let m_a = attack_miss(&fit, &spec, u_total).unwrap();
        assert_eq!(m_a, 0.0);
    }

    #[test]
    fn miss_rate_substitution_case() {
        // rho=1 (tau=0.5), delta=0, before the cycle boundary:
        // m_a = 0.5 m(0.5 u) + 0.5.
        let fit = sqrt_fit(1e8);
        let spec = AttackSpec::new(1.0, 0.0, 1_000_000).unwrap();
        let u_total = 800.0;
        let m_a = attack_miss(&fit, &spec, u_total).unwrap();
        let expected = 0.5 * fit.eval_m_u(400.0).unwrap() + 0.5;
        assert!((m_a - expected).abs() < 1e-12);
    }

    #[test]
    fn working_set_is_continuous_at_cycle_boundary() {
        let fit = sqrt_fit(1e9);
        for &(rho, delta) in &[(0.1, 0.7), (0.5, 1.0), (2.0, 0.3)] {
            let spec = AttackSpec::new(rho, delta, 10_000).unwrap();
            let v_k = spec.u_k_legit();
            // Evaluate both branch formulas exactly at the boundary.
            let below = fit.eval_s(v_k).unwrap() + rho * v_k
                - (delta * fit.eval_s(v_k).unwrap() / v_k) * v_k;
            let above = (1.0 - delta) * fit.eval_s(v_k).unwrap() + spec.omega_size as f64;
            assert!(
                (below - above).abs() <= 1e-9 * above.abs(),
                "rho={rho} delta={delta}: {below} vs {above}"
            );
            // And through the public interface around the boundary.
            let u_k_total = spec.u_k_total();
            let just_below = attack_ws(&fit, &spec, u_k_total * (1.0 - 1e-9)).unwrap();
            let at = attack_ws(&fit, &spec, u_k_total).unwrap();
            assert!((just_below - at).abs() <= 1e-6 * at);
        }
    }

    #[test]
    fn working_set_dominates_legit_share_and_grows() {
        // omega consistent with the fit's reachable working set:
        // |omega| >= delta * s_max, as any attack set built from the same
        // universe as the visited set satisfies.
        let fit = sqrt_fit(1e9);
        let spec = AttackSpec::new(0.3, 0.6, 30_000).unwrap();
        let (lo, hi) = u_total_range(&fit, &spec);
        let mut prev = 0.0;
        for i in 0..500 {
            let u = lo * (hi / lo).powf(i as f64 / 499.0);
            let s_a = attack_ws(&fit, &spec, u).unwrap();
            let s_legit = fit.eval_s(spec.tau() * u).unwrap();
            assert!(s_a >= s_legit - 1e-9, "u={u}");
            assert!(s_a >= prev - 1e-9 * s_a, "not monotone at u={u}");
            prev = s_a;
        }
    }

    #[test]
    fn miss_is_bounded_and_above_floor() {
        let fit = sqrt_fit(1e9);
        let spec = AttackSpec::new(0.5, 0.4, 20_000).unwrap();
        let (lo, hi) = u_total_range(&fit, &spec);
        for i in 0..200 {
            let u = lo * (hi / lo).powf(i as f64 / 199.0);
            let m_a = attack_miss(&fit, &spec, u).unwrap();
            let floor = spec.tau() * (1.0 - spec.delta) * fit.eval_m_u(spec.tau() * u).unwrap();
            assert!((0.0..=1.0).contains(&m_a), "m_a = {m_a} at u={u}");
            assert!(m_a >= floor - 1e-12);
        }
    }

    #[test]
    fn vanishing_attack_degenerates_to_plain_model() {
        let fit = sqrt_fit(1e8);
        let spec = AttackSpec::new(1e-9, 0.0, 100).unwrap();
        for &u in &[10.0, 1e3, 1e6] {
            let s_a = attack_ws(&fit, &spec, u).unwrap();
            let s = fit.eval_s(u * spec.tau()).unwrap();
            assert!((s_a - s).abs() <= 1e-6 * s + 1e-6);
            let m_a = attack_miss(&fit, &spec, u).unwrap();
            let m = fit.eval_m_u(u * spec.tau()).unwrap();
            assert!((m_a - m).abs() <= 1e-6);
        }
        // and the size inversion agrees with the plain miss-vs-size law
        for &size in &[5.0, 50.0, 5000.0] {
            let via_attack = attack_miss_vs_size(&fit, &spec, size).unwrap();
            let plain = fit.eval_m_s(size).unwrap();
            assert!((via_attack - plain).abs() <= 1e-6, "size {size}");
        }
    }

    #[test]
    fn bisection_matches_parametric_curve() {
        let fit = sqrt_fit(1e8);
        let spec = AttackSpec::new(0.2, 0.5, 2_000).unwrap();
        // 50 parametric points (s_a(u), m_a(u)); inverting s_a at each
        // sampled size must reproduce the sampled miss rate. Points near
        // the cycle boundary are skipped: m_a genuinely jumps there.
        let u_k = spec.u_k_total();
        let checked = attack_curve(&fit, &spec, 50)
            .unwrap()
            .into_iter()
            .zip(0..50)
            .filter(|&((_, _), i)| {
                let (lo, hi) = u_total_range(&fit, &spec);
                let u = lo * (hi / lo).powf(i as f64 / 49.0);
                (u / u_k - 1.0).abs() > 1e-3
            })
            .map(|((s_a, m_a), _)| {
                let m_inv = attack_miss_vs_size(&fit, &spec, s_a).unwrap();
                assert!(
                    (m_inv - m_a).abs() <= 1e-9 * m_a.abs().max(1.0),
                    "size {s_a}: {m_inv} vs {m_a}"
                );
            })
            .count();
        assert!(checked >= 45);
    }

    #[test]
    fn unreachable_sizes_are_domain_errors() {
        let fit = sqrt_fit(1e6);
        let spec = AttackSpec::new(1.0, 1.0, 50).unwrap();
        // delta=1 saturates at |omega| = 50; anything above is unreachable.
        assert!(matches!(
            attack_miss_vs_size(&fit, &spec, 51.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            attack_miss_vs_size(&fit, &spec, 0.5),
            Err(Error::Domain(_))
        ));
        // |omega| itself is reachable and miss-free.
        let m = attack_miss_vs_size(&fit, &spec, 50.0).unwrap();
        assert_eq!(m, 0.0);
    }

    #[test]
    fn anomaly_threshold() {
        let fit = sqrt_fit(1e6);
        let size = 10.0;
        let predicted = fit.eval_m_s(size).unwrap();
        assert_eq!(
            detect_anomaly(&fit, size, 5.0 * predicted, 2.0).unwrap(),
            Anomaly::Anomalous
        );
        assert_eq!(
            detect_anomaly(&fit, size, predicted, 2.0).unwrap(),
            Anomaly::Normal
        );
        assert!(detect_anomaly(&fit, 1e9, 0.5, 2.0).is_err());
    }
}

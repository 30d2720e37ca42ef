//! Spectrum-in-the-limit machinery: eigenvalue proximity search over growing
//! truncation caps, the spacing law, and the phase-circle analogue.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite;

/// A density query: how large a cap is needed before some eigenvalue of the
/// truncated operator lands within `epsilon` of `target`?
#[derive(Debug, Clone, Copy)]
pub struct LimitQuery {
    pub target: f64,
    pub epsilon: f64,
    pub n0: usize,
}

impl LimitQuery {
    pub fn new(target: f64, epsilon: f64, n0: usize) -> Result<LimitQuery> {
        if !target.is_finite() {
            return Err(Error::Domain("target must be finite".into()));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Domain("epsilon must be positive".into()));
        }
        Ok(LimitQuery { target, epsilon, n0 })
    }
}

/// Witness that an eigenvalue at cap `cap` lies within the requested distance
/// of the target.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProximityCertificate {
    pub target: f64,
    pub cap: usize,
    pub eigenvalue: f64,
    pub distance: f64,
}

impl ProximityCertificate {
    /// One JSON object per line, suitable for streaming reports.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "target": self.target,
            "cap": self.cap,
            "eigenvalue": self.eigenvalue,
            "distance": self.distance,
        })
        .to_string()
    }
}

/// Eigenvalue sets per cap, memoised so a sweep over many targets pays for
/// each cap once.
#[derive(Debug, Default)]
pub struct RootCache {
    map: HashMap<usize, Vec<f64>>,
}

impl RootCache {
    pub fn new() -> RootCache {
        RootCache::default()
    }

    pub fn roots(&mut self, cap: usize) -> Result<&[f64]> {
        if !self.map.contains_key(&cap) {
            let set = hermite::hermite_roots(cap + 1, false)?;
            self.map.insert(cap, set.roots);
        }
        Ok(&self.map[&cap])
    }
}

fn nearest(sorted: &[f64], x: f64) -> f64 {
    let idx = sorted.partition_point(|&r| r < x);
    let mut best = f64::INFINITY;
    let mut val = sorted[0];
    for j in idx.saturating_sub(1)..(idx + 1).min(sorted.len()) {
        let d = (sorted[j] - x).abs();
        if d < best {
            best = d;
            val = sorted[j];
        }
    }
    val
}

/// Smallest cap whose eigenvalue range `±√(2N+1)` can contain `target`.
fn range_bound(target: f64) -> usize {
    let n = (target * target - 1.0) / 2.0;
    if n <= 0.0 {
        0
    } else {
        n.ceil() as usize
    }
}

const SEARCH_LIMIT: usize = 1_000_000;

/// Grow the cap from `n0` until some eigenvalue lands within `epsilon` of the
/// target. Always terminates: the eigenvalue range widens like `√(2N+1)` and
/// the spacing shrinks like `π/√(2N+1)`.
pub fn find_near_eigenvalue(q: &LimitQuery) -> Result<ProximityCertificate> {
    find_near_eigenvalue_cached(q, &mut RootCache::new())
}

pub fn find_near_eigenvalue_cached(
    q: &LimitQuery,
    cache: &mut RootCache,
) -> Result<ProximityCertificate> {
    let start = q.n0.max(range_bound(q.target));
    for cap in start..=SEARCH_LIMIT {
        let candidate = nearest(cache.roots(cap)?, q.target);
        let distance = (candidate - q.target).abs();
        if distance < q.epsilon {
            verify_root(candidate, cap)?;
            return Ok(ProximityCertificate {
                target: q.target,
                cap,
                eigenvalue: candidate,
                distance,
            });
        }
    }
    Err(Error::Numeric(format!(
        "no eigenvalue within {} of {} up to cap {}",
        q.epsilon, q.target, SEARCH_LIMIT
    )))
}

/// Independent re-check that `x` is a root of the cap's characteristic
/// polynomial, via a Newton-step bound on the orthonormal recurrence.
fn verify_root(x: f64, cap: usize) -> Result<()> {
    let h = hermite::normalized_sequence_scaled(x, cap + 1);
    let value = h[cap + 1];
    let slope = h[cap].mul_f64((2.0 * (cap as f64 + 1.0)).sqrt());
    if slope.is_zero() {
        return Err(Error::Numeric(format!(
            "degenerate slope while certifying root {x} at cap {cap}"
        )));
    }
    let step = value.div(&slope).to_f64().abs();
    if step > 1e-10 * (1.0 + x.abs()) {
        return Err(Error::Numeric(format!(
            "root certificate failed at cap {cap}: Newton step {step:.3e} for {x}"
        )));
    }
    Ok(())
}

/// The asymptotic central gap `π/√(2N+1)` between adjacent eigenvalues.
pub fn spacing_estimate(cap: usize) -> Result<f64> {
    if cap < 1 {
        return Err(Error::Precondition("spacing_estimate requires cap >= 1".into()));
    }
    Ok(PI / ((2 * cap + 1) as f64).sqrt())
}

/// Estimate together with the measured central gap and their ratio.
pub fn spacing_check(cap: usize) -> Result<(f64, f64, f64)> {
    let estimate = spacing_estimate(cap)?;
    let roots = hermite::hermite_roots(cap + 1, false)?.roots;
    let mid = roots.len() / 2;
    let actual = roots[mid] - roots[mid - 1];
    Ok((estimate, actual, estimate / actual))
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub epsilon: f64,
    pub n0: usize,
    pub certificates: Vec<ProximityCertificate>,
    pub max_cap: usize,
}

impl DensityReport {
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.certificates {
            out.push_str(&c.to_json_line());
            out.push('\n');
        }
        out
    }
}

/// Certify every grid point. Finite evidence for density on the tested
/// window, not a proof of the closure statement.
pub fn spectrum_limit_density(grid: &[f64], epsilon: f64, n0: usize) -> Result<DensityReport> {
    let mut cache = RootCache::new();
    let mut certificates = Vec::with_capacity(grid.len());
    let mut max_cap = 0;
    for &target in grid {
        let q = LimitQuery::new(target, epsilon, n0)?;
        let cert = find_near_eigenvalue_cached(&q, &mut cache)?;
        max_cap = max_cap.max(cert.cap);
        certificates.push(cert);
    }
    Ok(DensityReport {
        epsilon,
        n0,
        certificates,
        max_cap,
    })
}

fn reduce_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t < 0.0 {
        t += two_pi;
    }
    if t >= two_pi {
        t = 0.0;
    }
    t
}

/// Distance between two angles along the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let d = (reduce_angle(a) - reduce_angle(b)).abs();
    d.min(two_pi - d)
}

/// `2πk/n` rounded to within one ulp: the product error is recovered with a
/// fused multiply-add and the division residual is corrected once, so the
/// naive double rounding (which costs up to two ulps) is avoided.
fn phase_fraction(k: usize, n: usize) -> f64 {
    let two_pi = 2.0 * PI;
    let (k, n) = (k as f64, n as f64);
    let hi = two_pi * k;
    let lo = two_pi.mul_add(k, -hi);
    let q = hi / n;
    let residual = q.mul_add(-n, hi) + lo;
    q + residual / n
}

/// The `N+1` equally spaced phase points `θ0 + 2πk/(N+1)`, reduced to
/// `[0, 2π)`.
pub fn phase_spectrum(cap: usize, theta0: f64) -> Result<Vec<f64>> {
    if !theta0.is_finite() {
        return Err(Error::Domain("theta0 must be finite".into()));
    }
    let count = cap + 1;
    Ok((0..count)
        .map(|k| reduce_angle(theta0 + phase_fraction(k, count)))
        .collect())
}

/// Grow the cap until a phase point lands within `epsilon` of the target
/// angle. Any cap `≥ ceil(π/ε) − 1` suffices, so the search is bounded.
pub fn phase_limit_density(
    target_theta: f64,
    epsilon: f64,
    theta0: f64,
    n0: usize,
) -> Result<ProximityCertificate> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let guarantee = ((PI / epsilon).ceil() as usize).saturating_sub(1);
    let target = reduce_angle(target_theta);
    for cap in n0..=n0.max(guarantee) {
        let count = (cap + 1) as f64;
        let gap = 2.0 * PI / count;
        let k = ((target - theta0) / gap).round();
        let k = k.rem_euclid(count);
        let point = reduce_angle(theta0 + phase_fraction(k as usize, cap + 1));
        let distance = circular_distance(point, target);
        if distance < epsilon {
            return Ok(ProximityCertificate {
                target,
                cap,
                eigenvalue: point,
                distance,
            });
        }
    }
    Err(Error::Numeric(format!(
        "no phase point within {epsilon} of {target_theta}; bound violated"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_hit_at_first_odd_degree() {
        let q = LimitQuery::new(0.0, 1e-12, 2).unwrap();
        let cert = find_near_eigenvalue(&q).unwrap();
        assert_eq!(cert.cap, 2);
        assert!(cert.eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn half_sqrt2_is_a_degree_two_root() {
        let q = LimitQuery::new(std::f64::consts::FRAC_1_SQRT_2, 1e-12, 0).unwrap();
        let cert = find_near_eigenvalue(&q).unwrap();
        assert_eq!(cert.cap, 1);
        assert!((cert.eigenvalue - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn far_target_respects_range_bound() {
        let q = LimitQuery::new(7.3, 1e-3, 50).unwrap();
        let cert = find_near_eigenvalue(&q).unwrap();
        assert!(cert.cap >= 50);
        assert!(cert.cap >= ((7.3f64 * 7.3 - 1.0) / 2.0).ceil() as usize);
        assert!(cert.distance < 1e-3);
    }

    #[test]
    fn refinement_follows_half_gap_guarantee() {
        // Once the root window contains lambda, the nearest root lies within
        // half the local gap, which shrinks like 1/sqrt(2N+1-lambda^2).
        let mut cache = RootCache::new();
        let lambda = 1.9;
        let mut prev_bound = f64::INFINITY;
        for n0 in [10usize, 40, 120, 360] {
            let local = (2.0 * n0 as f64 + 1.0 - lambda * lambda).sqrt();
            let bound = 1.5 * PI / (2.0 * local);
            let mut best = f64::INFINITY;
            for cap in n0..n0 + 6 {
                let d = (nearest(cache.roots(cap).unwrap(), lambda) - lambda).abs();
                best = best.min(d);
            }
            assert!(best <= bound, "n0={n0}: best {best} vs bound {bound}");
            assert!(bound < prev_bound);
            prev_bound = bound;
        }
    }

    #[test]
    fn spacing_estimate_matches_central_gap() {
        let (_, _, ratio) = spacing_check(100).unwrap();
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
        let (_, _, ratio) = spacing_check(500).unwrap();
        assert!((ratio - 1.0).abs() < 0.03, "ratio {ratio}");
    }

    #[test]
    fn spacing_law_over_central_gaps() {
        // The constant estimate only holds where the root density is flat:
        // the deviation at the edge of the central 50% of roots is already
        // ~9% from the semicircle density, so the 5% band is checked on the
        // central quarter.
        let cap = 200;
        let estimate = spacing_estimate(cap).unwrap();
        let roots = hermite::hermite_roots(cap + 1, false).unwrap().roots;
        let n = roots.len();
        let lo = 3 * n / 8;
        let hi = n - 3 * n / 8;
        let worst = roots[lo..hi]
            .windows(2)
            .map(|w| ((w[1] - w[0]) / estimate - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.05, "worst relative deviation {worst}");
    }

    #[test]
    fn density_report_covers_grid() {
        let grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.25).collect();
        let report = spectrum_limit_density(&grid, 1e-2, 10).unwrap();
        assert_eq!(report.certificates.len(), grid.len());
        assert!(report.certificates.iter().all(|c| c.distance < 1e-2));
        assert!(report.max_cap >= 10);
        let lines = report.to_json_lines();
        assert_eq!(lines.lines().count(), grid.len());
        assert!(lines.lines().next().unwrap().contains("\"cap\""));
    }

    #[test]
    fn empty_grid_gives_empty_report() {
        let report = spectrum_limit_density(&[], 0.5, 0).unwrap();
        assert!(report.certificates.is_empty());
    }

    #[test]
    fn phase_points_are_equally_spaced() {
        let pts = phase_spectrum(1, 0.0).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0] - 0.0).abs() < 1e-15);
        assert!((pts[1] - PI).abs() < 1e-15);

        let pts = phase_spectrum(3, PI / 4.0).unwrap();
        let expect = [PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0];
        for (p, e) in pts.iter().zip(expect) {
            assert!((p - e).abs() < 1e-14);
        }

        let pts = phase_spectrum(7, 0.0).unwrap();
        for w in pts.windows(2) {
            assert!((w[1] - w[0] - PI / 4.0).abs() <= f64::EPSILON * 8.0);
        }
    }

    #[test]
    fn phase_density_certificates() {
        let cert = phase_limit_density(PI, 1e-9, 0.0, 1).unwrap();
        assert_eq!(cert.cap, 1);
        assert!(cert.distance < 1e-12);

        let cert = phase_limit_density(1.0, 1e-4, 0.0, 0).unwrap();
        assert!(cert.cap <= 31416);
        assert!(cert.distance < 1e-4);

        let cert = phase_limit_density(0.0, 1e-6, 0.0, 5).unwrap();
        assert_eq!(cert.cap, 5);
        assert_eq!(cert.distance, 0.0);
    }

    #[test]
    fn certificates_serialize_to_single_line_json() {
        let cert = ProximityCertificate {
            target: 1.5,
            cap: 12,
            eigenvalue: 1.4999,
            distance: 1e-4,
        };
        let line = cert.to_json_line();
        assert!(!line.contains('\n'));
        let parsed: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(parsed["cap"], 12);
    }
}

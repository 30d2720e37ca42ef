//! Self-check suites: cross-module consistency checks runnable from the CLI,
//! in a fast desk-scale flavour and a fuller, slower one.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::{cd, hermite, limit, pseudo, quadrature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }
}

fn run_check<F>(checks: &mut Vec<CheckResult>, name: &str, body: F)
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    checks.push(CheckResult {
        name: name.to_string(),
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    });
}

/// Characteristic polynomial of a real symmetric tridiagonal matrix at
/// `lambda`, with its derivative, via the continuant recurrence. Used to
/// re-certify eigenvalues against the actual matrix entries.
fn continuant(diag: &[f64], offdiag: &[f64], lambda: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = diag[0] - lambda;
    let mut dp_prev = 0.0;
    let mut dp = -1.0;
    for k in 1..diag.len() {
        let b2 = offdiag[k - 1] * offdiag[k - 1];
        let next = (diag[k] - lambda) * p - b2 * p_prev;
        let dnext = -p + (diag[k] - lambda) * dp - b2 * dp_prev;
        p_prev = p;
        p = next;
        dp_prev = dp;
        dp = dnext;
    }
    (p, dp)
}

fn check_eigen_certificates(inject_failure: bool) -> Result<(bool, String)> {
    let cap = 16;
    let op = quadrature::TruncatedQuadrature::build(cap, 0.0);
    let decomp = op.diagonalize()?;
    let mut offdiag = op.offdiag.clone();
    if inject_failure {
        offdiag[0] *= 1.0 + 1e-3;
    }
    let mut worst = 0.0f64;
    for &ev in &decomp.eigenvalues {
        let (p, dp) = continuant(&op.diag, &offdiag, ev);
        let step = (p / dp).abs();
        worst = worst.max(step);
    }
    let symmetric = decomp
        .eigenvalues
        .iter()
        .zip(decomp.eigenvalues.iter().rev())
        .all(|(a, b)| (a + b).abs() < 1e-13);
    let ok = symmetric && worst < 1e-12;
    Ok((ok, format!("worst Newton step {worst:.3e}, symmetric: {symmetric}")))
}

fn check_eigenvector_gram() -> Result<(bool, String)> {
    let decomp = quadrature::TruncatedQuadrature::build(16, 0.0).diagonalize()?;
    let dim = decomp.cap + 1;
    let mut worst = 0.0f64;
    for a in 0..dim {
        for b in a..dim {
            let dot: f64 = (0..dim)
                .map(|k| decomp.eigenvectors[a][k] * decomp.eigenvectors[b][k])
                .sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    Ok((worst < 1e-12, format!("worst Gram deviation {worst:.3e}")))
}

fn check_d_forms() -> Result<(bool, String)> {
    let cap = 15;
    let mut worst = 0.0f64;
    for &lambda in &[0.3, 1.7, 3.9, 5.2] {
        let d = pseudo::d_measure(lambda, cap)?;
        let ratio = pseudo::d_measure_ratio_form(lambda, cap)?;
        let logform = pseudo::d_measure_logform(lambda, cap)?;
        worst = worst.max(((ratio - d) / d).abs());
        worst = worst.max(((logform - d) / d).abs());
    }
    Ok((worst < 1e-9, format!("worst relative spread {worst:.3e}")))
}

fn check_variance_decomposition() -> Result<(bool, String)> {
    let cap = 16;
    let mut ok = true;
    let mut detail = String::new();
    for &lambda in &[0.0, 1.1, 4.0] {
        let vt = pseudo::variance_truncated(lambda, cap)?;
        let vf = pseudo::variance_full(lambda, cap)?;
        if vf < vt - 1e-14 || vt < 0.0 {
            ok = false;
        }
        detail = format!("last: var_trunc {vt:.6e}, var_full {vf:.6e}");
    }
    let at_zero = pseudo::variance_full(0.0, cap)?;
    if (at_zero - 0.5).abs() > 1e-12 {
        ok = false;
        detail = format!("var_full(0) = {at_zero}, expected 1/2");
    }
    Ok((ok, detail))
}

fn check_quadrature_weights() -> Result<(bool, String)> {
    let rule = hermite::hermite_roots(64, true)?;
    let total: f64 = rule.weights.as_ref().unwrap().iter().sum();
    let dev = (total - std::f64::consts::PI.sqrt()).abs();
    Ok((dev < 1e-12, format!("weight sum deviation {dev:.3e}")))
}

fn check_projector_trace() -> Result<(bool, String)> {
    let cap = 16;
    let trace = quadrature::projector_trace_identity(cap, cap + 8)?;
    let dev = (trace - (cap + 1) as f64).abs();
    Ok((dev < 1e-9, format!("trace {trace:.12}, expected {}", cap + 1)))
}

fn check_zero_structure(cap: usize) -> Result<(bool, String)> {
    let set = cd::complex_zeros(cap)?;
    let report = cd::zero_structure_report(&set);
    let ok = set.roots.len() == 2 * cap
        && report.conjugate_residual < 1e-8
        && report.min_abs_im > 0.0
        && set.max_residual < 1e-9 * 10.0;
    Ok((
        ok,
        format!(
            "{} roots, conjugate residual {:.3e}, max residual {:.3e}",
            set.roots.len(),
            report.conjugate_residual,
            set.max_residual
        ),
    ))
}

fn check_zero_curve_flattening() -> Result<(bool, String)> {
    let small = cd::zero_structure_report(&cd::complex_zeros(10)?);
    let large = cd::zero_structure_report(&cd::complex_zeros(100)?);
    let ok = large.central_spacing_cv < small.central_spacing_cv;
    Ok((
        ok,
        format!(
            "central spacing CV: cap 10 -> {:.4}, cap 100 -> {:.4}",
            small.central_spacing_cv, large.central_spacing_cv
        ),
    ))
}

fn check_laurent_small_case() -> Result<(bool, String)> {
    let a0 = cd::laurent_coefficient(1, 0)?;
    let a1 = cd::laurent_coefficient(1, 1)?;
    let a2 = cd::laurent_coefficient(1, 2)?;
    let ok = (a0 - 1.0).abs() < 1e-12 && (a1 + 1.5).abs() < 1e-12 && (a2 - 1.0).abs() < 1e-9;
    Ok((ok, format!("alpha = [{a0:.12}, {a1:.12}, {a2:.12}]")))
}

fn check_limit_certificate() -> Result<(bool, String)> {
    let q = limit::LimitQuery::new(7.3, 1e-3, 50)?;
    let cert = limit::find_near_eigenvalue(&q)?;
    let ok = cert.distance < 1e-3 && cert.cap >= 50;
    Ok((
        ok,
        format!("cap {}, eigenvalue {:.9}, distance {:.3e}", cert.cap, cert.eigenvalue, cert.distance),
    ))
}

fn check_spacing_law(cap: usize, band: f64) -> Result<(bool, String)> {
    let (estimate, actual, ratio) = limit::spacing_check(cap)?;
    let ok = (ratio - 1.0).abs() < band;
    Ok((
        ok,
        format!("estimate {estimate:.6}, central gap {actual:.6}, ratio {ratio:.4}"),
    ))
}

fn check_phase_gaps() -> Result<(bool, String)> {
    let pts = limit::phase_spectrum(15, 0.3)?;
    let gap = 2.0 * std::f64::consts::PI / 16.0;
    let mut sorted = pts.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let worst = sorted
        .windows(2)
        .map(|w| (w[1] - w[0] - gap).abs())
        .fold(0.0, f64::max);
    Ok((worst < 1e-12, format!("worst gap deviation {worst:.3e}")))
}

fn check_density_grid() -> Result<(bool, String)> {
    let grid: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.25).collect();
    let report = limit::spectrum_limit_density(&grid, 1e-3, 100)?;
    let ok = report.certificates.iter().all(|c| c.distance < 1e-3);
    Ok((ok, format!("{} certificates, max cap {}", report.certificates.len(), report.max_cap)))
}

fn check_minimal_polynomial() -> Result<(bool, String)> {
    let report = quadrature::minimal_polynomial_check(40)?;
    Ok((
        report.is_minimal(),
        format!("terminal norm {:.3e}", report.norms.last().unwrap()),
    ))
}

/// Runs the named suite. `inject_failure` perturbs an off-diagonal matrix
/// element inside the eigenvalue re-certification check; it exists as a
/// negative control so a wired-through failure path can be demonstrated.
pub fn run_suite(suite: Suite, inject_failure: bool) -> ValidationReport {
    let mut checks = Vec::new();
    run_check(&mut checks, "eigen_certificates", || {
        check_eigen_certificates(inject_failure)
    });
    run_check(&mut checks, "eigenvector_gram", check_eigenvector_gram);
    run_check(&mut checks, "d_measure_forms", check_d_forms);
    run_check(&mut checks, "variance_decomposition", check_variance_decomposition);
    run_check(&mut checks, "gauss_hermite_weights", check_quadrature_weights);
    run_check(&mut checks, "projector_trace", check_projector_trace);
    run_check(&mut checks, "kernel_zero_structure", || check_zero_structure(10));
    run_check(&mut checks, "laurent_coefficients", check_laurent_small_case);
    run_check(&mut checks, "limit_certificate", check_limit_certificate);
    run_check(&mut checks, "spacing_law", || check_spacing_law(100, 0.1));
    run_check(&mut checks, "phase_gaps", check_phase_gaps);
    if suite == Suite::Full {
        run_check(&mut checks, "kernel_zeros_cap_100", || check_zero_structure(100));
        run_check(&mut checks, "zero_curve_flattening", check_zero_curve_flattening);
        run_check(&mut checks, "minimal_polynomial", check_minimal_polynomial);
        run_check(&mut checks, "density_grid", check_density_grid);
        run_check(&mut checks, "spacing_law_cap_500", || check_spacing_law(500, 0.03));
    }
    ValidationReport {
        suite: suite.name().to_string(),
        checks,
    }
}

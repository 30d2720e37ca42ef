//! Physicists' Hermite polynomials `H_n`, the orthonormalized family
//! `h_n(x) = H_n(x)/sqrt(2^n n!)`, Hermite functions, and the roots of `H_n`
//! through the Jacobi-matrix correspondence.
//!
//! The raw values `H_n` are carried as [`ScaledReal`]; everything physically
//! meaningful is a ratio of `h_n` values in which the `2^n n!` factors cancel.

use crate::error::{Error, Result};
use crate::scaled::ScaledReal;
use num_bigint::BigInt;

/// `H_0(x) … H_N(x)` together with the orthonormalized values `h_n(x)`.
#[derive(Debug, Clone)]
pub struct HermiteSequence {
    /// Evaluation point.
    pub x: f64,
    /// Highest order `N`.
    pub order: usize,
    /// `H_0(x) … H_N(x)` in overflow-safe form.
    pub values: Vec<ScaledReal>,
    /// `h_n(x) = H_n(x)/sqrt(2^n n!)`; plain `f64`, which is ample for the
    /// argument ranges used by the rest of the crate.
    pub normalized_values: Vec<f64>,
}

/// Roots of `H_degree`, sorted increasingly, with optional Gauss-Hermite
/// weights.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub degree: usize,
    pub roots: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

/// The tail of the orthonormalized sequence at a point, plus the diagonal
/// Christoffel-Darboux sum, all in scaled form so that arbitrarily large
/// arguments stay representable.
#[derive(Debug, Clone)]
pub struct KernelSummary {
    pub cap: usize,
    /// `h_{N-1}(x)` (zero for `cap = 0`).
    pub h_prev: ScaledReal,
    /// `h_N(x)`.
    pub h_last: ScaledReal,
    /// `h_{N+1}(x)`.
    pub h_next: ScaledReal,
    /// `Σ_{n=0}^{N} h_n(x)^2`, strictly positive for real `x`.
    pub kernel_diag: ScaledReal,
}

fn require_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {x}")))
    }
}

/// Evaluates `H_0 … H_order` via the three-term recurrence
/// `H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x)`, plus the orthonormalized
/// values from the rescaled recurrence
/// `h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}`.
pub fn eval_hermite_sequence(x: f64, order: usize) -> Result<HermiteSequence> {
    require_finite(x, "x")?;
    let mut values = Vec::with_capacity(order + 1);
    values.push(ScaledReal::ONE);
    if order >= 1 {
        values.push(ScaledReal::from_f64(2.0 * x));
    }
    for n in 1..order {
        let next = values[n]
            .mul_f64(2.0 * x)
            .sub(&values[n - 1].mul_f64(2.0 * n as f64));
        values.push(next);
    }
    let normalized_values = normalized_sequence(x, order);
    Ok(HermiteSequence {
        x,
        order,
        values,
        normalized_values,
    })
}

/// `h_0(x) … h_order(x)` in plain `f64`.
pub fn normalized_sequence(x: f64, order: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(order + 1);
    h.push(1.0);
    if order >= 1 {
        h.push(x * std::f64::consts::SQRT_2);
    }
    for n in 1..order {
        let np1 = (n + 1) as f64;
        let next = x * (2.0 / np1).sqrt() * h[n] - (n as f64 / np1).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// `h_0(x) … h_order(x)` in scaled form, safe for any finite argument.
pub fn normalized_sequence_scaled(x: f64, order: usize) -> Vec<ScaledReal> {
    let mut h = Vec::with_capacity(order + 1);
    h.push(ScaledReal::ONE);
    if order >= 1 {
        h.push(ScaledReal::from_f64(x * std::f64::consts::SQRT_2));
    }
    for n in 1..order {
        let np1 = (n + 1) as f64;
        let next = h[n]
            .mul_f64(x * (2.0 / np1).sqrt())
            .sub(&h[n - 1].mul_f64((n as f64 / np1).sqrt()));
        h.push(next);
    }
    h
}

/// Scaled tail values `h_{N-1}, h_N, h_{N+1}` and the diagonal CD sum
/// `Σ_{n≤N} h_n²` at `x`.
pub fn kernel_summary(x: f64, cap: usize) -> Result<KernelSummary> {
    require_finite(x, "x")?;
    let h = normalized_sequence_scaled(x, cap + 1);
    let mut kernel_diag = ScaledReal::ZERO;
    for hn in h.iter().take(cap + 1) {
        kernel_diag = kernel_diag.add(&hn.mul(hn));
    }
    Ok(KernelSummary {
        cap,
        h_prev: if cap >= 1 { h[cap - 1] } else { ScaledReal::ZERO },
        h_last: h[cap],
        h_next: h[cap + 1],
        kernel_diag,
    })
}

/// The Hermite function `⟨ξ|n⟩ = h_n(ξ) e^{-ξ²/2} / π^{1/4}`.
///
/// The Gaussian is folded in through the scaled representation, so the result
/// is finite for every finite `ξ` and every `n`.
pub fn eval_hermite_function(n: usize, xi: f64) -> Result<f64> {
    require_finite(xi, "xi")?;
    let h = normalized_sequence_scaled(xi, n);
    let gauss = ScaledReal::exp(-0.5 * xi * xi);
    Ok(h[n]
        .mul(&gauss)
        .mul_f64(std::f64::consts::PI.powf(-0.25))
        .to_f64())
}

/// Hermite functions `⟨ξ|0⟩ … ⟨ξ|order⟩` at one point.
pub fn hermite_function_sequence(xi: f64, order: usize) -> Result<Vec<f64>> {
    require_finite(xi, "xi")?;
    let h = normalized_sequence_scaled(xi, order);
    let gauss = ScaledReal::exp(-0.5 * xi * xi).mul_f64(std::f64::consts::PI.powf(-0.25));
    Ok(h.iter().map(|hn| hn.mul(&gauss).to_f64()).collect())
}

/// Implicit-shift QL iteration for the eigenvalues of a symmetric tridiagonal
/// matrix, working only on the diagonal `d` and off-diagonal `e` arrays.
///
/// `e[i]` couples rows `i` and `i+1`; `e[n-1]` is workspace.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numeric(format!(
                    "tridiagonal QL failed to converge at index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
    Ok(())
}

/// Safety margin below which two computed roots indicate a numerical failure
/// rather than genuine near-degeneracy (Hermite roots are simple).
fn min_gap_floor(degree: usize) -> f64 {
    0.5 * std::f64::consts::PI / (2.0 * ((2 * degree + 1) as f64).sqrt())
}

/// All roots of `H_degree`, as eigenvalues of the Jacobi matrix with
/// off-diagonal entries `sqrt(n/2)`, polished by Newton steps using
/// `h'_n = sqrt(2n) h_{n-1}`.
pub fn hermite_roots(degree: usize, want_weights: bool) -> Result<RootSet> {
    if degree < 1 {
        return Err(Error::Domain(format!("degree must be >= 1, got {degree}")));
    }
    let mut d = vec![0.0f64; degree];
    let mut e: Vec<f64> = (1..=degree).map(|n| (n as f64 / 2.0).sqrt()).collect();
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Newton polish decouples the final accuracy from the QL tolerance.
    let dn = degree as f64;
    for root in d.iter_mut() {
        for _ in 0..3 {
            let h = normalized_sequence_scaled(*root, degree);
            if h[degree].is_zero() {
                break;
            }
            let deriv = h[degree - 1].mul_f64((2.0 * dn).sqrt());
            let step = h[degree].div(&deriv).to_f64();
            if !step.is_finite() {
                break;
            }
            *root -= step;
        }
    }
    // Roots of H_n are symmetric about the origin.
    for i in 0..degree / 2 {
        let avg = 0.5 * (d[i] - d[degree - 1 - i]);
        d[i] = avg;
        d[degree - 1 - i] = -avg;
    }
    if degree % 2 == 1 {
        d[degree / 2] = 0.0;
    }

    let floor = min_gap_floor(degree);
    for w in d.windows(2) {
        if w[1] - w[0] <= floor {
            return Err(Error::Numeric(format!(
                "root gap {} below simple-root floor {} at degree {degree}",
                w[1] - w[0],
                floor
            )));
        }
    }

    let weights = if want_weights {
        let mut ws = Vec::with_capacity(degree);
        for &root in &d {
            let h = normalized_sequence_scaled(root, degree - 1);
            let mut kernel = ScaledReal::ZERO;
            for hn in &h {
                kernel = kernel.add(&hn.mul(hn));
            }
            ws.push(
                ScaledReal::from_f64(std::f64::consts::PI.sqrt())
                    .div(&kernel)
                    .to_f64(),
            );
        }
        Some(ws)
    } else {
        None
    };

    Ok(RootSet {
        degree,
        roots: d,
        weights,
    })
}

/// Discrete orthogonality over the roots of `H_{N+1}`:
/// `δ_{mn} = Σ_k h_m(λ_k) h_n(λ_k) / Σ_{j≤N} h_j(λ_k)²`.
pub fn discrete_orthogonality_check(m: usize, n: usize, cap: usize) -> Result<f64> {
    if m > cap || n > cap {
        return Err(Error::Domain(format!(
            "identity holds only within the truncated space: m={m}, n={n}, cap={cap}"
        )));
    }
    let roots = hermite_roots(cap + 1, false)?;
    let mut sum = 0.0;
    for &lambda in &roots.roots {
        let h = normalized_sequence_scaled(lambda, cap);
        let mut kernel = ScaledReal::ZERO;
        for hj in &h {
            kernel = kernel.add(&hj.mul(hj));
        }
        sum += h[m].mul(&h[n]).div(&kernel).to_f64();
    }
    Ok(sum)
}

/// Exact integer coefficients of `H_n` (constant term first), built from the
/// three-term recurrence in big-integer arithmetic.
pub fn hermite_coefficients(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::from(1)];
    if n == 0 {
        return prev;
    }
    let mut curr = vec![BigInt::from(0), BigInt::from(2)];
    for k in 1..n {
        let mut next = vec![BigInt::from(0); k + 2];
        for (i, c) in curr.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2 * k as i64 * c;
        }
        prev = curr;
        curr = next;
    }
    curr
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{Signed, ToPrimitive, Zero};

    /// Exact evaluation of `H_n` at a rational point; the independent oracle
    /// for the floating pipeline.
    fn eval_exact(n: usize, x: &BigRational) -> BigRational {
        let coeffs = hermite_coefficients(n);
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Converts an exact rational to (mantissa, base-2 exponent) for comparing
    /// against a ScaledReal.
    fn rational_log2(r: &BigRational) -> f64 {
        let num = r.numer().abs();
        let den = r.denom().abs();
        let nb = num.bits() as i64;
        let db = den.bits() as i64;
        let log2 = |v: &BigInt, bits: i64| -> f64 {
            let shift = (bits - 53).max(0);
            (v >> shift).to_f64().unwrap().log2() + shift as f64
        };
        // log2(num/den) with 53-bit heads.
        log2(&num, nb) - log2(&den, db)
    }

    #[test]
    fn low_order_values() {
        let s = eval_hermite_sequence(1.0, 2).unwrap();
        assert_eq!(s.values[0].to_f64(), 1.0);
        assert_eq!(s.values[1].to_f64(), 2.0);
        assert_eq!(s.values[2].to_f64(), 2.0); // 4x^2 - 2 at x=1
    }

    #[test]
    fn odd_orders_vanish_at_zero() {
        let s = eval_hermite_sequence(0.0, 3).unwrap();
        assert_eq!(s.values[1].to_f64(), 0.0);
        assert_eq!(s.values[3].to_f64(), 0.0);
        assert_eq!(s.normalized_values[1], 0.0);
        assert_eq!(s.normalized_values[3], 0.0);
    }

    #[test]
    fn nonfinite_input_rejected() {
        assert!(eval_hermite_sequence(f64::NAN, 3).is_err());
        assert!(eval_hermite_function(2, f64::INFINITY).is_err());
    }

    #[test]
    fn high_order_against_exact_oracle() {
        // H_200(3.7) via the exact big-integer oracle at x = 37/10.
        let x = BigRational::new(BigInt::from(37), BigInt::from(10));
        let exact = eval_exact(200, &x);
        let s = eval_hermite_sequence(3.7, 200).unwrap();
        let approx = &s.values[200];
        assert!(!approx.is_zero());
        let exact_log2 = rational_log2(&exact);
        assert!(
            (approx.log2_abs() - exact_log2).abs() < 1e-10 * exact_log2.abs(),
            "log2 mismatch: {} vs {}",
            approx.log2_abs(),
            exact_log2
        );
        assert_eq!(
            exact.numer().sign() == num_bigint::Sign::Minus,
            approx.mantissa() < 0.0
        );
    }

    #[test]
    fn mid_order_exact_value_comparison() {
        // At n = 40 the exact value still fits (as a scaled comparison) with
        // full relative accuracy, not just in the logarithm.
        let x = BigRational::new(BigInt::from(37), BigInt::from(10));
        for n in [10usize, 25, 40] {
            let exact = eval_exact(n, &x);
            let got = eval_hermite_sequence(3.7, n).unwrap().values[n].to_f64();
            let want = exact.to_f64().unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "n={n}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn hermite_function_base_cases() {
        let v = eval_hermite_function(0, 0.0).unwrap();
        assert!((v - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(eval_hermite_function(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hermite_function_extreme_arguments_finite() {
        for &(n, xi) in &[(50usize, 2.0e0), (500, 40.0), (1000, -200.0), (3, 1.0e3)] {
            let v = eval_hermite_function(n, xi).unwrap();
            assert!(v.is_finite(), "n={n}, xi={xi}");
        }
    }

    #[test]
    fn hermite_function_high_precision_point() {
        // <xi|50> at xi = 2, from the defining formula evaluated with the
        // exact coefficients and scaled arithmetic.
        let x = BigRational::from(BigInt::from(2));
        let exact_h = eval_exact(50, &x); // integer here
        // h_50(2) = H_50(2) / sqrt(2^50 50!)
        let mut norm = ScaledReal::ONE;
        for k in 1..=50u64 {
            norm = norm.mul_f64((2.0 * k as f64).sqrt());
        }
        let h50 = ScaledReal::from_f64(exact_h.to_f64().unwrap_or(f64::NAN))
            .div(&norm);
        // |H_50(2)| ≈ 1e38 so the f64 conversion above is exact enough; guard:
        assert!(exact_h.to_f64().unwrap().is_finite());
        let expected = h50
            .mul(&ScaledReal::exp(-2.0))
            .mul_f64(std::f64::consts::PI.powf(-0.25))
            .to_f64();
        let got = eval_hermite_function(50, 2.0).unwrap();
        assert!(
            ((got - expected) / expected).abs() < 1e-13,
            "{got} vs {expected}"
        );
    }

    #[test]
    fn roots_low_degree_exact() {
        let r2 = hermite_roots(2, false).unwrap();
        let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
        assert!((r2.roots[0] + inv_sqrt2).abs() < 1e-14);
        assert!((r2.roots[1] - inv_sqrt2).abs() < 1e-14);

        let r3 = hermite_roots(3, false).unwrap();
        let s = (1.5f64).sqrt();
        assert!((r3.roots[0] + s).abs() < 1e-14);
        assert!(r3.roots[1].abs() < 1e-14);
        assert!((r3.roots[2] - s).abs() < 1e-14);
    }

    #[test]
    fn roots_residuals_and_bounds() {
        for degree in [16usize, 33, 100, 317] {
            let rs = hermite_roots(degree, false).unwrap();
            assert_eq!(rs.roots.len(), degree);
            let bound = ((2 * degree + 1) as f64).sqrt();
            for &r in &rs.roots {
                assert!(r.abs() < bound, "degree {degree}: root {r} out of range");
                let h = normalized_sequence_scaled(r, degree);
                let deriv = h[degree - 1].mul_f64((2.0 * degree as f64).sqrt());
                let resid = h[degree].to_f64().abs();
                assert!(
                    resid < 1e-12 * deriv.to_f64().abs().max(1.0),
                    "degree {degree}: residual {resid}"
                );
            }
            // Symmetry about zero.
            for i in 0..degree {
                assert!(
                    (rs.roots[i] + rs.roots[degree - 1 - i]).abs() < 1e-13,
                    "degree {degree}: asymmetric pair"
                );
            }
        }
    }

    #[test]
    fn roots_interlace() {
        let mut prev = hermite_roots(1, false).unwrap().roots;
        for degree in 2..=200usize {
            let curr = hermite_roots(degree, false).unwrap().roots;
            for (i, &r) in prev.iter().enumerate() {
                assert!(
                    curr[i] < r && r < curr[i + 1],
                    "interlacing failed between degrees {} and {degree}",
                    degree - 1
                );
            }
            prev = curr;
        }
    }

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for degree in [2usize, 16, 60, 120] {
            let rs = hermite_roots(degree, true).unwrap();
            let ws = rs.weights.unwrap();
            assert!(ws.iter().all(|&w| w > 0.0));
            let total: f64 = ws.iter().sum();
            let target = std::f64::consts::PI.sqrt();
            assert!(
                ((total - target) / target).abs() < 1e-12,
                "degree {degree}: sum {total}"
            );
        }
    }

    #[test]
    fn large_degree_roots_do_not_fail() {
        let rs = hermite_roots(2000, false).unwrap();
        assert_eq!(rs.roots.len(), 2000);
    }

    #[test]
    fn discrete_orthogonality_cases() {
        assert!((discrete_orthogonality_check(0, 0, 5).unwrap() - 1.0).abs() < 1e-10);
        assert!(discrete_orthogonality_check(2, 3, 10).unwrap().abs() < 1e-10);
        assert!((discrete_orthogonality_check(7, 7, 7).unwrap() - 1.0).abs() < 1e-10);
        assert!(discrete_orthogonality_check(3, 2, 1).is_err());
    }

    #[test]
    fn derivative_identity_vs_finite_differences() {
        // H'_n = 2n H_{n-1}, checked against central differences.
        let step = 1e-6;
        for &(n, x) in &[(5usize, 0.73), (12, -1.9), (30, 2.5)] {
            let plus = eval_hermite_sequence(x + step, n).unwrap().values[n].to_f64();
            let minus = eval_hermite_sequence(x - step, n).unwrap().values[n].to_f64();
            let fd = (plus - minus) / (2.0 * step);
            let analytic =
                2.0 * n as f64 * eval_hermite_sequence(x, n - 1).unwrap().values[n - 1].to_f64();
            assert!(
                ((fd - analytic) / analytic).abs() < 1e-6,
                "n={n}, x={x}: {fd} vs {analytic}"
            );
        }
    }
}

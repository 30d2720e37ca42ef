//! Christoffel-Darboux kernel for the Hermite family: closed-form evaluation
//! (bivariate and both confluent forms), exact polynomial coefficients of the
//! diagonal kernel, its complex zeros, and the Laurent coefficients of the
//! exactness measure recovered by residue summation.

use crate::aberth::{aberth, choose_scale, derivative, eval_fixed};
use crate::error::{Error, Result};
use crate::hermite::{hermite_coefficients, normalized_sequence_scaled};
use crate::scaled::ScaledReal;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Which closed form produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    Bivariate,
    ConfluentDerivative,
    ConfluentAlgebraic,
}

/// A kernel value `K_N(λ, μ) = Σ_{n≤N} h_n(λ) h_n(μ)`, recording which
/// closed form produced it.
#[derive(Debug, Clone)]
pub struct KernelEvaluation {
    pub cap: usize,
    pub lambda: Complex64,
    pub mu: Complex64,
    pub value: Complex64,
    pub form_used: KernelForm,
}

/// All `2N` complex zeros of the diagonal kernel polynomial.
#[derive(Debug, Clone)]
pub struct ComplexRootSet {
    pub cap: usize,
    pub roots: Vec<Complex64>,
    pub max_residual: f64,
}

/// Relative switchover below which the bivariate quotient loses too many
/// digits and the confluent forms take over.
pub fn confluent_switchover(lambda: f64) -> f64 {
    1e-8 * (1.0 + lambda.abs())
}

/// Scaled-real kernel value for real arguments, safe for any magnitude.
pub fn kernel_real(lambda: f64, mu: f64, cap: usize) -> Result<ScaledReal> {
    if !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::Domain("kernel arguments must be finite".into()));
    }
    if (lambda - mu).abs() < confluent_switchover(lambda) {
        return kernel_confluent_algebraic(0.5 * (lambda + mu), cap);
    }
    let hl = normalized_sequence_scaled(lambda, cap + 1);
    let hm = normalized_sequence_scaled(mu, cap + 1);
    let np1 = (cap + 1) as f64;
    let cross = hl[cap + 1]
        .mul(&hm[cap])
        .sub(&hl[cap].mul(&hm[cap + 1]));
    Ok(cross
        .mul_f64((np1 / 2.0).sqrt())
        .mul_f64(1.0 / (lambda - mu)))
}

/// Confluent kernel via the algebraic form
/// `(N+1) h_N² - sqrt(N(N+1)) h_{N+1} h_{N-1}`.
pub fn kernel_confluent_algebraic(lambda: f64, cap: usize) -> Result<ScaledReal> {
    let h = normalized_sequence_scaled(lambda, cap + 1);
    let np1 = (cap + 1) as f64;
    let first = h[cap].mul(&h[cap]).mul_f64(np1);
    if cap == 0 {
        return Ok(first);
    }
    let second = h[cap + 1]
        .mul(&h[cap - 1])
        .mul_f64((cap as f64 * np1).sqrt());
    Ok(first.sub(&second))
}

/// Confluent kernel via the derivative form
/// `sqrt((N+1)/2) (h_N h'_{N+1} - h_{N+1} h'_N)`, using
/// `h'_n = sqrt(2n) h_{n-1}`.
pub fn kernel_confluent_derivative(lambda: f64, cap: usize) -> Result<ScaledReal> {
    let h = normalized_sequence_scaled(lambda, cap + 1);
    let np1 = (cap + 1) as f64;
    let dh_next = h[cap].mul_f64((2.0 * np1).sqrt());
    let dh_last = if cap >= 1 {
        h[cap - 1].mul_f64((2.0 * cap as f64).sqrt())
    } else {
        ScaledReal::ZERO
    };
    let wronskian = h[cap].mul(&dh_next).sub(&h[cap + 1].mul(&dh_last));
    Ok(wronskian.mul_f64((np1 / 2.0).sqrt()))
}

/// Orthonormalized Hermite values at a complex point.
fn normalized_sequence_complex(z: Complex64, order: usize) -> Vec<Complex64> {
    let mut h = Vec::with_capacity(order + 1);
    h.push(Complex64::new(1.0, 0.0));
    if order >= 1 {
        h.push(z * std::f64::consts::SQRT_2);
    }
    for n in 1..order {
        let np1 = (n + 1) as f64;
        let next = z * (2.0 / np1).sqrt() * h[n] - (n as f64 / np1).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// Kernel evaluation for (possibly complex) arguments, recording which closed
/// form was used.
pub fn kernel(lambda: Complex64, mu: Complex64, cap: usize) -> KernelEvaluation {
    if cap == 0 {
        return KernelEvaluation {
            cap,
            lambda,
            mu,
            value: Complex64::new(1.0, 0.0),
            form_used: KernelForm::ConfluentAlgebraic,
        };
    }
    let np1 = (cap + 1) as f64;
    if (lambda - mu).norm() < confluent_switchover(lambda.norm()) {
        let h = normalized_sequence_complex(lambda, cap + 1);
        let value =
            np1 * h[cap] * h[cap] - (cap as f64 * np1).sqrt() * h[cap + 1] * h[cap - 1];
        return KernelEvaluation {
            cap,
            lambda,
            mu,
            value,
            form_used: KernelForm::ConfluentAlgebraic,
        };
    }
    let hl = normalized_sequence_complex(lambda, cap + 1);
    let hm = normalized_sequence_complex(mu, cap + 1);
    let value =
        (np1 / 2.0).sqrt() * (hl[cap + 1] * hm[cap] - hl[cap] * hm[cap + 1]) / (lambda - mu);
    KernelEvaluation {
        cap,
        lambda,
        mu,
        value,
        form_used: KernelForm::Bivariate,
    }
}

/// Exact integer coefficients (constant term first) of
/// `P_N(λ) = 2^N N! Σ_{n≤N} H_n(λ)² / 2^n n!`, an even polynomial of degree
/// `2N`.
pub fn kernel_poly_coefficients(cap: usize) -> Result<Vec<BigInt>> {
    if cap > 200 {
        return Err(Error::Resource(format!(
            "kernel polynomial coefficients limited to cap <= 200, got {cap}"
        )));
    }
    let mut out = vec![BigInt::zero(); 2 * cap + 1];
    // factor(n) = 2^{N-n} N!/n!
    let mut factor = BigInt::from(1);
    for m in 1..=cap {
        factor *= 2 * m as i64; // builds 2^N N! for n = 0
    }
    for n in 0..=cap {
        let coeffs = hermite_coefficients(n);
        for (i, a) in coeffs.iter().enumerate() {
            for (j, b) in coeffs.iter().enumerate() {
                out[i + j] += &factor * a * b;
            }
        }
        if n < cap {
            factor /= 2 * (n + 1) as i64; // advance 2^{N-n} N!/n! to n+1
        }
    }
    Ok(out)
}

/// Evaluation precision for the zero computation; the `QSPEC_PRECISION`
/// environment variable overrides the automatic choice.
fn zero_scale(coeffs: &[BigInt], radius: f64) -> u32 {
    if let Ok(v) = std::env::var("QSPEC_PRECISION") {
        if let Ok(bits) = v.trim().parse::<u32>() {
            return bits;
        }
    }
    choose_scale(coeffs, radius)
}

/// Initial guesses on two arcs flanking the real oscillatory interval,
/// at heights `± c (2N+1)^{-1/6}`.
fn initial_guesses(cap: usize) -> Vec<Complex64> {
    let radius = ((2 * cap + 1) as f64).sqrt();
    let height = ((2 * cap + 1) as f64).powf(-1.0 / 6.0);
    let mut guesses = Vec::with_capacity(2 * cap);
    for j in 0..cap {
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / cap as f64;
        let re = radius * theta.cos();
        let im = height * (1.0 + 0.5 * theta.sin());
        guesses.push(Complex64::new(re, im));
        guesses.push(Complex64::new(re, -im));
    }
    guesses
}

/// Deterministic ordering: by real part, then imaginary part.
fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// All `2N` complex zeros of the diagonal kernel polynomial, with automatic
/// precision escalation. Returns the root set together with the indices that
/// failed the residual target, if any.
pub fn complex_zeros_relaxed(cap: usize) -> Result<(ComplexRootSet, Vec<usize>)> {
    if cap < 1 {
        return Err(Error::Domain("cap must be >= 1".into()));
    }
    let coeffs = kernel_poly_coefficients(cap)?;
    let radius = ((2 * cap + 1) as f64).sqrt() + 2.0;
    let mut scale = zero_scale(&coeffs, radius);
    let guesses = initial_guesses(cap);
    let mut best: Option<(ComplexRootSet, Vec<usize>)> = None;
    for _ in 0..3 {
        let outcome = aberth(&coeffs, &guesses, scale)?;
        let mut roots = outcome.roots;
        sort_roots(&mut roots);
        let max_residual = outcome.residuals.iter().fold(0.0f64, |m, &r| m.max(r));
        let set = ComplexRootSet {
            cap,
            roots,
            max_residual,
        };
        if outcome.unconverged.is_empty() {
            return Ok((set, Vec::new()));
        }
        if best
            .as_ref()
            .map(|(b, _)| max_residual < b.max_residual)
            .unwrap_or(true)
        {
            best = Some((set, outcome.unconverged));
        }
        scale *= 2;
    }
    Ok(best.unwrap())
}

/// Strict variant: errors if any root misses the residual target.
pub fn complex_zeros(cap: usize) -> Result<ComplexRootSet> {
    let (set, unconverged) = complex_zeros_relaxed(cap)?;
    if unconverged.is_empty() {
        Ok(set)
    } else {
        Err(Error::Numeric(format!(
            "kernel zeros for cap {cap}: unconverged root indices {unconverged:?}"
        )))
    }
}

impl ComplexRootSet {
    pub fn to_json(&self) -> String {
        let roots: Vec<[f64; 2]> = self.roots.iter().map(|z| [z.re, z.im]).collect();
        serde_json::json!({
            "cap": self.cap,
            "roots": roots,
            "max_residual": self.max_residual,
        })
        .to_string()
    }
}

/// Spacing and symmetry statistics of a zero set.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ZeroStructureReport {
    pub cap: usize,
    /// Upper-half-plane roots sorted by real part; samples of the zero curve.
    pub curve: Vec<(f64, f64)>,
    pub mean_spacing: f64,
    /// Coefficient of variation of all consecutive spacings.
    pub spacing_cv: f64,
    /// Coefficient of variation over the central 60% of spacings.
    pub central_spacing_cv: f64,
    pub min_abs_im: f64,
    pub max_abs_im: f64,
    /// Largest distance from any root to the conjugate of another root.
    pub conjugate_residual: f64,
}

fn coefficient_of_variation(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    var.sqrt() / mean
}

/// Sorts the upper-half-plane roots by real part and reports spacing
/// statistics and the conjugate-pairing residual.
pub fn zero_structure_report(set: &ComplexRootSet) -> ZeroStructureReport {
    let mut upper: Vec<Complex64> = set.roots.iter().copied().filter(|z| z.im > 0.0).collect();
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    let curve: Vec<(f64, f64)> = upper.iter().map(|z| (z.re, z.im)).collect();

    let spacings: Vec<f64> = upper.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let mean_spacing = if spacings.is_empty() {
        0.0
    } else {
        spacings.iter().sum::<f64>() / spacings.len() as f64
    };
    let drop = spacings.len() / 5;
    let central = if spacings.len() > 2 * drop {
        &spacings[drop..spacings.len() - drop]
    } else {
        &spacings[..]
    };

    let mut conjugate_residual = 0.0f64;
    for z in &set.roots {
        let best = set
            .roots
            .iter()
            .map(|w| (w.conj() - z).norm())
            .fold(f64::INFINITY, f64::min);
        conjugate_residual = conjugate_residual.max(best);
    }

    ZeroStructureReport {
        cap: set.cap,
        mean_spacing,
        spacing_cv: coefficient_of_variation(&spacings),
        central_spacing_cv: coefficient_of_variation(central),
        min_abs_im: set
            .roots
            .iter()
            .map(|z| z.im.abs())
            .fold(f64::INFINITY, f64::min),
        max_abs_im: set.roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        conjugate_residual,
        curve,
    }
}

/// Exact quotient and remainder of the Laurent decomposition
/// `d_N = s(λ) + r(λ)/P_N(λ)` with `s(λ) = α_0 λ² + α_1`.
struct LaurentDecomposition {
    alpha0: BigRational,
    alpha1: BigRational,
    /// Remainder coefficients, constant term first.
    remainder: Vec<BigRational>,
    poly: Vec<BigInt>,
}

fn laurent_decomposition(cap: usize) -> Result<LaurentDecomposition> {
    let poly = kernel_poly_coefficients(cap)?;
    // Numerator of d_N: H_{N+1}(λ)² / 4.
    let hc = hermite_coefficients(cap + 1);
    let mut num = vec![BigRational::zero(); 2 * cap + 3];
    for (i, a) in hc.iter().enumerate() {
        for (j, b) in hc.iter().enumerate() {
            num[i + j] += BigRational::new(a * b, BigInt::from(4));
        }
    }
    let p: Vec<BigRational> = poly
        .iter()
        .map(|c| BigRational::from(c.clone()))
        .collect();
    let lead = p.last().unwrap().clone();
    let dp = p.len() - 1; // 2N

    // Two division steps strip the degree-(2N+2) and degree-2N terms.
    let alpha0 = num[dp + 2].clone() / lead.clone();
    for (i, c) in p.iter().enumerate() {
        let sub = &alpha0 * c;
        num[i + 2] -= sub;
    }
    let alpha1 = num[dp].clone() / lead;
    for (i, c) in p.iter().enumerate() {
        let sub = &alpha1 * c;
        num[i] -= sub;
    }
    num.truncate(dp); // remainder has degree < 2N
    Ok(LaurentDecomposition {
        alpha0,
        alpha1,
        remainder: num,
        poly,
    })
}

/// Laurent coefficient `α_k` of `d_N(λ) = Σ_k α_k λ^{2-2k}` at infinity.
///
/// `α_0` and `α_1` come from exact polynomial division; higher coefficients
/// are residue sums over the complex kernel zeros.
pub fn laurent_coefficient(cap: usize, k: usize) -> Result<f64> {
    let dec = laurent_decomposition(cap)?;
    match k {
        0 => return Ok(dec.alpha0.to_f64().unwrap()),
        1 => return Ok(dec.alpha1.to_f64().unwrap()),
        _ => {}
    }
    let zeros = complex_zeros(cap)?;

    // Clear denominators of the remainder so the fixed-point evaluator sees
    // exact integers: r_int = r * L.
    let mut lcm = BigInt::from(1);
    for c in &dec.remainder {
        let den = c.denom();
        lcm = num_integer::lcm(lcm, den.clone());
    }
    let r_int: Vec<BigInt> = dec
        .remainder
        .iter()
        .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
        .collect();
    let dpoly = derivative(&dec.poly);
    let radius = ((2 * cap + 1) as f64).sqrt() + 2.0;
    let scale = choose_scale(&dec.poly, radius).max(choose_scale(&r_int, radius));
    let (lcm_m, lcm_e) = {
        let bits = lcm.bits() as i64;
        if bits <= 53 {
            (lcm.to_f64().unwrap(), 0i64)
        } else {
            let shift = bits - 53;
            (((&lcm) >> shift).to_f64().unwrap(), shift)
        }
    };

    let mut total = Complex64::new(0.0, 0.0);
    for z in &zeros.roots {
        let rv = eval_fixed(&r_int, *z, scale);
        let dv = eval_fixed(&dpoly, *z, scale);
        // ρ = r(z)/P'(z) = (r_int(z)/L) / P'(z)
        let ratio = rv.div_to_f64(&dv) / (lcm_m * 2f64.powi(lcm_e as i32));
        total += ratio * z.powi(2 * k as i32 - 3);
    }
    Ok(total.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::normalized_sequence;

    #[test]
    fn kernel_direct_sum_oracle() {
        let cap = 4;
        let (l, m) = (1.0, -1.0);
        let hl = normalized_sequence(l, cap);
        let hm = normalized_sequence(m, cap);
        let direct: f64 = hl.iter().zip(&hm).map(|(a, b)| a * b).sum();
        let closed = kernel_real(l, m, cap).unwrap().to_f64();
        assert!((closed - direct).abs() < 1e-12, "{closed} vs {direct}");
    }

    #[test]
    fn kernel_cap_zero_and_diagonal() {
        let e = kernel(Complex64::new(0.3, 0.0), Complex64::new(-7.0, 0.0), 0);
        assert_eq!(e.value, Complex64::new(1.0, 0.0));
        // K(0, 0) for cap 2: 1 + 0 + 1/2.
        let diag = kernel_real(0.0, 0.0, 2).unwrap().to_f64();
        assert!((diag - 1.5).abs() < 1e-15);
    }

    #[test]
    fn confluent_forms_agree() {
        for &(lambda, cap) in &[(0.37, 8usize), (-2.9, 25), (5.5, 60), (11.0, 40)] {
            let alg = kernel_confluent_algebraic(lambda, cap).unwrap();
            let der = kernel_confluent_derivative(lambda, cap).unwrap();
            assert!(
                alg.rel_diff(&der) < 1e-10,
                "lambda={lambda}, cap={cap}: {}",
                alg.rel_diff(&der)
            );
        }
    }

    #[test]
    fn bivariate_approaches_confluent() {
        let cap = 12;
        let lambda = 0.8;
        let diag = kernel_confluent_algebraic(lambda, cap).unwrap().to_f64();
        let near = kernel_real(lambda, lambda + 1e-7, cap).unwrap().to_f64();
        assert!(((near - diag) / diag).abs() < 1e-5);
    }

    #[test]
    fn kernel_poly_low_order() {
        // cap 1: 2 (H_0² + H_1²/2) = 2 + 4λ².
        let c = kernel_poly_coefficients(1).unwrap();
        assert_eq!(c, vec![BigInt::from(2), BigInt::from(0), BigInt::from(4)]);
        assert!(kernel_poly_coefficients(201).is_err());
    }

    #[test]
    fn kernel_poly_rational_point_check() {
        // P_2(1/3) should equal kernel(1/3, 1/3, 2) * 2^2 * 2!.
        let c = kernel_poly_coefficients(2).unwrap();
        let x = 1.0f64 / 3.0;
        let mut val = 0.0;
        for (i, a) in c.iter().enumerate() {
            val += a.to_f64().unwrap() * x.powi(i as i32);
        }
        let want = kernel_real(x, x, 2).unwrap().to_f64() * 8.0;
        assert!(((val - want) / want).abs() < 1e-14);
    }

    #[test]
    fn kernel_poly_even() {
        let c = kernel_poly_coefficients(7).unwrap();
        for (i, v) in c.iter().enumerate() {
            if i % 2 == 1 {
                assert!(v.is_zero(), "odd coefficient {i} nonzero");
            }
        }
    }

    #[test]
    fn zeros_cap_one_quadratic() {
        let set = complex_zeros(1).unwrap();
        assert_eq!(set.roots.len(), 2);
        let target = 1.0 / std::f64::consts::SQRT_2;
        for z in &set.roots {
            assert!(z.re.abs() < 1e-10);
            assert!((z.im.abs() - target).abs() < 1e-10);
        }
    }

    #[test]
    fn zeros_structure_cap_five() {
        let set = complex_zeros(5).unwrap();
        assert_eq!(set.roots.len(), 10);
        let bound = 11f64.sqrt();
        let upper = set.roots.iter().filter(|z| z.im > 0.0).count();
        assert_eq!(upper, 5);
        for z in &set.roots {
            assert!(z.im.abs() > 1e-6);
            assert!(z.re.abs() < bound);
        }
        let report = zero_structure_report(&set);
        assert!(report.conjugate_residual < 1e-9);
        assert_eq!(report.curve.len(), 5);
    }

    #[test]
    fn zeros_flatten_toward_real_axis() {
        let h5 = zero_structure_report(&complex_zeros(5).unwrap()).max_abs_im / 11f64.sqrt();
        let h25 = zero_structure_report(&complex_zeros(25).unwrap()).max_abs_im / 51f64.sqrt();
        assert!(h25 < h5, "normalized heights: {h25} vs {h5}");
    }

    #[test]
    fn zeros_at_kernel_diagonal_poles() {
        // The analytic continuation of the CD diagonal vanishes at each zero.
        let cap = 10;
        let set = complex_zeros(cap).unwrap();
        for z in &set.roots {
            let val = kernel(*z, *z, cap).value;
            // Normalize by the typical magnitude of the kernel at |Re z|.
            let typical = kernel(
                Complex64::new(z.re, 0.0),
                Complex64::new(z.re, 0.0),
                cap,
            )
            .value
            .norm();
            assert!(
                val.norm() / typical < 1e-8,
                "kernel at zero {z}: {}",
                val.norm() / typical
            );
        }
    }

    #[test]
    fn laurent_exact_small_case() {
        // cap 1: quotient is λ² - 3/2, residues give α_2 = 1.
        assert!((laurent_coefficient(1, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((laurent_coefficient(1, 1).unwrap() + 1.5).abs() < 1e-15);
        assert!((laurent_coefficient(1, 2).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn laurent_matches_closed_coefficients() {
        let cap = 15;
        let n = cap as f64;
        assert!((laurent_coefficient(cap, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!(
            (laurent_coefficient(cap, 1).unwrap() + 1.5 * n).abs() < 1e-9 * n,
            "alpha1"
        );
        let a2 = laurent_coefficient(cap, 2).unwrap();
        let want = n * (5.0 - n) / 4.0;
        assert!(((a2 - want) / want).abs() < 1e-6, "alpha2 {a2} vs {want}");
    }

    #[test]
    fn json_shape() {
        let set = complex_zeros(1).unwrap();
        let s = set.to_json();
        assert!(s.contains("\"cap\":1"));
        assert!(s.contains("max_residual"));
    }
}

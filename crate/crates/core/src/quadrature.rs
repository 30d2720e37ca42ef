//! The truncated quadrature operator: construction, exact diagonalization
//! through the Hermite-root correspondence, the projector kernel, and the
//! Cayley-Hamilton / minimal-polynomial checks.

use crate::cd;
use crate::error::{Error, Result};
use crate::hermite::{
    self, hermite_function_sequence, hermite_roots, kernel_summary, normalized_sequence,
};
use crate::scaled::ScaledReal;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The `(N+1) x (N+1)` truncated quadrature operator with angle `beta`.
///
/// The matrix data is stored in tridiagonal form; for `beta != 0` the matrix
/// element `(m, n)` carries the extra phase `e^{i beta (m - n)}`, which leaves
/// the spectrum unchanged.
#[derive(Debug, Clone)]
pub struct TruncatedQuadrature {
    pub cap: usize,
    pub beta: f64,
    pub diag: Vec<f64>,
    /// `offdiag[n-1] = sqrt(n/2)` for `n = 1..=cap`.
    pub offdiag: Vec<f64>,
    /// `e^{i beta n}` for `n = 0..=cap`.
    pub phase_factors: Vec<Complex64>,
}

/// Exact eigendecomposition; column `k` of `eigenvectors` is the eigenvector
/// for `eigenvalues[k]` in the number basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub cap: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

/// A wavefunction sampled on a strictly increasing grid.
#[derive(Debug, Clone)]
pub struct SampledWavefunction {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl TruncatedQuadrature {
    /// Builds the operator for `cap` photons and quadrature angle `beta`.
    pub fn build(cap: usize, beta: f64) -> TruncatedQuadrature {
        let offdiag = (1..=cap).map(|n| (n as f64 / 2.0).sqrt()).collect();
        let phase_factors = (0..=cap)
            .map(|n| Complex64::from_polar(1.0, beta * n as f64))
            .collect();
        TruncatedQuadrature {
            cap,
            beta,
            diag: vec![0.0; cap + 1],
            offdiag,
            phase_factors,
        }
    }

    /// Matrix element `(m, n)` including the `beta` phases.
    pub fn element(&self, m: usize, n: usize) -> Complex64 {
        let real = if m == n {
            self.diag[m]
        } else if m + 1 == n {
            self.offdiag[m]
        } else if n + 1 == m {
            self.offdiag[n]
        } else {
            0.0
        };
        self.phase_factors[m] * self.phase_factors[n].conj() * real
    }

    /// Dense complex matrix, row-major.
    pub fn dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.cap + 1;
        (0..n)
            .map(|i| (0..n).map(|j| self.element(i, j)).collect())
            .collect()
    }

    /// Characteristic-polynomial value `det(ξ_N + λ) = H_{N+1}(λ) / 2^{N+1}`.
    ///
    /// The value is `beta`-independent by unitary similarity and is computed
    /// on the `beta = 0` form.
    pub fn charpoly_value(&self, lambda: f64) -> Result<ScaledReal> {
        let seq = hermite::eval_hermite_sequence(lambda, self.cap + 1)?;
        Ok(seq.values[self.cap + 1].mul(&ScaledReal::from_parts(1.0, -(self.cap as i64) - 1)))
    }

    /// Exact diagonalization: eigenvalues are the roots of `H_{N+1}`, and
    /// each eigenvector is the unit-normalized vector of `h_n` values at the
    /// root. No generic eigensolver is involved.
    pub fn diagonalize(&self) -> Result<EigenDecomposition> {
        let roots = hermite_roots(self.cap + 1, false)?;
        let mut eigenvectors = vec![vec![0.0; roots.degree]; self.cap + 1];
        for (k, &lambda) in roots.roots.iter().enumerate() {
            let h = normalized_sequence(lambda, self.cap);
            let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
            for n in 0..=self.cap {
                eigenvectors[n][k] = h[n] / norm;
            }
        }
        Ok(EigenDecomposition {
            cap: self.cap,
            eigenvalues: roots.roots,
            eigenvectors,
        })
    }
}

impl EigenDecomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }
}

/// Position-representation projector kernel `⟨ξ|Π_N|ξ'⟩`, via the closed
/// Christoffel-Darboux form with the confluent fallback near the diagonal.
pub fn projector_kernel(cap: usize, xi: f64, xi_prime: f64) -> Result<f64> {
    let k = cd::kernel_real(xi, xi_prime, cap)?;
    let gauss = ScaledReal::exp(-0.5 * (xi * xi + xi_prime * xi_prime));
    Ok(k.mul(&gauss)
        .mul_f64(1.0 / std::f64::consts::PI.sqrt())
        .to_f64())
}

/// Largest admissible grid spacing for `apply_projector`: half the shortest
/// oscillation scale of `⟨ξ|cap⟩`.
pub fn required_grid_spacing(cap: usize) -> f64 {
    std::f64::consts::PI / (2.0 * ((2 * cap + 3) as f64).sqrt())
}

/// Local 4-point Lagrange interpolation on a strictly increasing grid.
/// Points outside the grid evaluate to zero.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x < xs[0] || x > xs[n - 1] {
        return 0.0;
    }
    let j = xs.partition_point(|&v| v <= x).min(n - 1);
    let lo = j.saturating_sub(2).min(n.saturating_sub(4));
    let mut acc = 0.0;
    for a in lo..lo + 4 {
        let mut basis = 1.0;
        for b in lo..lo + 4 {
            if a != b {
                basis *= (x - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += basis * ys[a];
    }
    acc
}

/// Projects a sampled wavefunction onto span{|0>, ..., |cap>}.
///
/// The number-basis overlaps are taken by Gauss-Hermite quadrature with
/// `cap + 40` nodes (the integrand is polynomial x Gaussian x psi), not by
/// naive grid integration of the singular-looking kernel quotient.
pub fn apply_projector(cap: usize, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    let n = psi.xs.len();
    if n < 4 {
        return Err(Error::Precondition("grid needs at least 4 points".into()));
    }
    let max_dx = psi
        .xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max);
    let limit = required_grid_spacing(cap);
    if max_dx >= limit {
        return Err(Error::Precondition(format!(
            "grid spacing {max_dx} does not resolve the order-{cap} oscillations (need < {limit})"
        )));
    }
    for &end in &[psi.values[0], psi.values[n - 1]] {
        if end.abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "grid does not cover the support: boundary amplitude {end}"
            )));
        }
    }

    let nodes = cap + 40;
    let rule = hermite_roots(nodes, true)?;
    let weights = rule.weights.as_ref().unwrap();
    let quarter_pi = std::f64::consts::PI.powf(-0.25);

    let mut overlaps = vec![0.0f64; cap + 1];
    for (k, &x) in rule.roots.iter().enumerate() {
        // w_k e^{x^2/2} stays bounded; assemble it in scaled form.
        let t = ScaledReal::from_f64(weights[k])
            .mul(&ScaledReal::exp(0.5 * x * x))
            .to_f64();
        let psi_x = interpolate(&psi.xs, &psi.values, x);
        if psi_x == 0.0 {
            continue;
        }
        let h = normalized_sequence(x, cap);
        for (m, &hm) in h.iter().enumerate() {
            overlaps[m] += t * hm * quarter_pi * psi_x;
        }
    }

    let mut values = vec![0.0f64; n];
    for (i, &x) in psi.xs.iter().enumerate() {
        let phi = hermite_function_sequence(x, cap)?;
        values[i] = overlaps.iter().zip(&phi).map(|(c, p)| c * p).sum();
    }
    Ok(SampledWavefunction {
        xs: psi.xs.clone(),
        values,
    })
}

/// Dense square matrix used by the polynomial-of-matrix recurrences.
#[derive(Clone)]
struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    fn identity(n: usize) -> Matrix {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix { n, data }
    }

    fn zero(n: usize) -> Matrix {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// `out = tridiag(off) * self`, where the tridiagonal factor has zero
    /// diagonal and `off[i]` coupling rows `i` and `i+1`.
    fn premul_tridiag(&self, off: &[f64]) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                if i >= 1 {
                    acc += off[i - 1] * self.data[(i - 1) * n + j];
                }
                if i + 1 < n {
                    acc += off[i] * self.data[(i + 1) * n + j];
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }

    fn axpy(&mut self, alpha: f64, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    fn scale(&mut self, alpha: f64) {
        for a in self.data.iter_mut() {
            *a *= alpha;
        }
    }

    fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// Max-norms of `h_k(ξ_N)` for `k = 0 ..= cap + 1`, built by the normalized
/// matrix recurrence.
fn matrix_recurrence_norms(cap: usize) -> Vec<f64> {
    let n = cap + 1;
    let q = TruncatedQuadrature::build(cap, 0.0);
    let off = &q.offdiag;
    let mut norms = Vec::with_capacity(cap + 2);
    let mut prev = Matrix::identity(n);
    norms.push(prev.max_norm());
    // h_1(X) = sqrt(2) X
    let mut curr = prev.premul_tridiag(off);
    curr.scale(std::f64::consts::SQRT_2);
    norms.push(curr.max_norm());
    for k in 1..=cap {
        let kp1 = (k + 1) as f64;
        let mut next = curr.premul_tridiag(off);
        next.scale((2.0 / kp1).sqrt());
        next.axpy(-((k as f64 / kp1).sqrt()), &prev);
        norms.push(next.max_norm());
        prev = curr;
        curr = next;
    }
    norms
}

/// `‖h_{N+1}(ξ_N)‖_max / max_k ‖h_k(ξ_N)‖_max`: the Cayley-Hamilton residual
/// of the normalized matrix recurrence, relative to the peak intermediate
/// norm (which grows like `e^N`, so an absolute residual is meaningless).
pub fn cayley_hamilton_residual(cap: usize) -> f64 {
    let norms = matrix_recurrence_norms(cap);
    let peak = norms.iter().fold(1.0f64, |m, &v| m.max(v));
    norms.last().unwrap() / peak
}

/// Per-degree norms of `h_k(ξ_N)` for the minimal-polynomial claim.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalPolynomialReport {
    pub cap: usize,
    /// `norms[k] = ‖h_k(ξ_N)‖_max` for `k = 0 ..= cap + 1`.
    pub norms: Vec<f64>,
}

impl MinimalPolynomialReport {
    /// True when all degrees up to `cap` are non-vanishing and only the
    /// characteristic degree annihilates the operator. The terminal norm is
    /// judged relative to the peak intermediate norm.
    pub fn is_minimal(&self) -> bool {
        let last = *self.norms.last().unwrap();
        let peak = self.norms.iter().fold(1.0f64, |m, &v| m.max(v));
        self.norms[..=self.cap].iter().all(|&v| v > 1e-6)
            && last / peak < 1e-12 * (self.cap + 1) as f64
    }
}

/// Verifies that `H_{N+1}` is the minimal polynomial of the truncated
/// operator: `h_k(ξ_N) != 0` for every `k <= N` while `h_{N+1}(ξ_N) ≈ 0`.
pub fn minimal_polynomial_check(cap: usize) -> Result<MinimalPolynomialReport> {
    if cap < 1 {
        return Err(Error::Domain("cap must be >= 1".into()));
    }
    Ok(MinimalPolynomialReport {
        cap,
        norms: matrix_recurrence_norms(cap),
    })
}

/// Exact Cayley-Hamilton verification. The diagonal similarity
/// `T = D ξ_N D⁻¹` with `d_{n+1} = d_n / sqrt((n+1)/2)` turns the operator
/// into a rational matrix (subdiagonal 1, superdiagonal `(n+1)/2`), and the
/// monic orthogonal recurrence `p_{k+1} = x p_k - (k/2) p_{k-1}` has rational
/// coefficients. Rescaling once more to `S = 2T` and `r_k = 2^k p_k(T)`
/// makes everything integer: `r_{k+1} = S r_k - 2k r_{k-1}`, so `p_{N+1}(T)`
/// vanishes iff `r_{N+1}` does, with no rounding anywhere. The recurrence is
/// run column by column (`O(N³)` big-integer operations instead of `O(N⁴)`).
/// Returns true when `r_{N+1} = 0` exactly while `r_k != 0` for all
/// `k <= N`; both statements are similarity-invariant, hence hold for `ξ_N`
/// itself.
pub fn exact_cayley_hamilton(cap: usize) -> bool {
    use num_bigint::BigInt;
    use num_traits::Zero;

    let n = cap + 1;
    // (S v)_i = 2 v_{i-1} + (i+1) v_{i+1}.
    let apply = |v: &[BigInt]| -> Vec<BigInt> {
        (0..n)
            .map(|i| {
                let mut acc = BigInt::zero();
                if i >= 1 {
                    acc += 2 * &v[i - 1];
                }
                if i + 1 < n {
                    acc += (i + 1) * &v[i + 1];
                }
                acc
            })
            .collect()
    };

    // nonzero[k] records whether r_k(S) has any nonzero entry in any column.
    let mut nonzero = vec![false; n + 1];
    for j in 0..n {
        let mut prev: Vec<BigInt> = (0..n)
            .map(|i| if i == j { BigInt::from(1) } else { BigInt::zero() })
            .collect();
        let mut curr = apply(&prev); // r_1 e_j = S e_j
        nonzero[0] = true;
        nonzero[1] |= curr.iter().any(|v| !v.is_zero());
        for k in 1..=cap {
            let mut next = apply(&curr);
            for (a, b) in next.iter_mut().zip(prev.iter()) {
                *a -= 2 * k * b;
            }
            prev = curr;
            curr = next; // r_{k+1} e_j
            nonzero[k + 1] |= curr.iter().any(|v| !v.is_zero());
        }
    }
    nonzero[..=cap].iter().all(|&b| b) && !nonzero[cap + 1]
}

/// Gauss-Hermite evaluation of `∫ e^{-λ²} |c_N(λ)|^{-2} dλ / sqrt(π)`,
/// which equals `Tr(Π_N) = N + 1`.
pub fn projector_trace_identity(cap: usize, nodes: usize) -> Result<f64> {
    if nodes < cap + 1 {
        return Err(Error::Precondition(format!(
            "need at least {} quadrature nodes for exactness, got {nodes}",
            cap + 1
        )));
    }
    let rule = hermite_roots(nodes, true)?;
    let weights = rule.weights.as_ref().unwrap();
    let mut total = 0.0;
    for (k, &x) in rule.roots.iter().enumerate() {
        let diag = kernel_summary(x, cap)?.kernel_diag.to_f64();
        total += weights[k] * diag;
    }
    Ok(total / std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::eval_hermite_function;

    /// Determinant of `ξ_N + λ` by the tridiagonal continuant recurrence in
    /// scaled arithmetic; the oracle for `charpoly_value`.
    fn det_oracle(cap: usize, lambda: f64) -> ScaledReal {
        let mut prev = ScaledReal::ONE; // empty determinant
        let mut curr = ScaledReal::from_f64(lambda);
        for k in 1..=cap {
            let next = curr
                .mul_f64(lambda)
                .sub(&prev.mul_f64(k as f64 / 2.0));
            prev = curr;
            curr = next;
        }
        curr
    }

    #[test]
    fn build_low_order_blocks() {
        let q = TruncatedQuadrature::build(1, 0.0);
        assert_eq!(q.offdiag.len(), 1);
        assert!((q.offdiag[0] - 1.0 / std::f64::consts::SQRT_2).abs() <= f64::EPSILON);

        let q0 = TruncatedQuadrature::build(0, 1.3);
        assert_eq!(q0.dense(), vec![vec![Complex64::new(0.0, 0.0)]]);
    }

    #[test]
    fn charpoly_low_orders() {
        let q0 = TruncatedQuadrature::build(0, 0.0);
        assert!((q0.charpoly_value(0.37).unwrap().to_f64() - 0.37).abs() < 1e-16);

        let q1 = TruncatedQuadrature::build(1, 0.0);
        // det(ξ_1 + λ) = (2λ² - 1)/2, so 1/2 at λ = 1.
        assert!((q1.charpoly_value(1.0).unwrap().to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn charpoly_matches_determinant_recurrence() {
        for &(cap, lambda) in &[(10usize, 0.931), (25, -2.4), (140, 3.1)] {
            let q = TruncatedQuadrature::build(cap, 0.0);
            let got = q.charpoly_value(lambda).unwrap();
            let want = det_oracle(cap, lambda);
            assert!(
                got.rel_diff(&want) < 1e-10,
                "cap={cap}, lambda={lambda}: rel diff {}",
                got.rel_diff(&want)
            );
        }
    }

    #[test]
    fn diagonalize_two_by_two() {
        let q = TruncatedQuadrature::build(1, 0.0);
        let eig = q.diagonalize().unwrap();
        let s = 1.0 / std::f64::consts::SQRT_2;
        assert!((eig.eigenvalues[0] + s).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - s).abs() < 1e-14);
        // Eigenvector for +1/sqrt(2) is (1, 1)/sqrt(2).
        assert!((eig.eigenvectors[0][1] - s).abs() < 1e-14);
        assert!((eig.eigenvectors[1][1] - s).abs() < 1e-14);
    }

    #[test]
    fn diagonalize_gram_identity() {
        for cap in [16usize, 100] {
            let eig = TruncatedQuadrature::build(cap, 0.0).diagonalize().unwrap();
            let n = cap + 1;
            let mut max_dev = 0.0f64;
            for a in 0..n {
                for b in a..n {
                    let dot: f64 = (0..n)
                        .map(|i| eig.eigenvectors[i][a] * eig.eigenvectors[i][b])
                        .sum();
                    let target = if a == b { 1.0 } else { 0.0 };
                    max_dev = max_dev.max((dot - target).abs());
                }
            }
            assert!(max_dev < 1e-12, "cap={cap}: Gram deviation {max_dev}");
        }
    }

    #[test]
    fn trace_invariants() {
        for cap in [4usize, 16, 100] {
            let q = TruncatedQuadrature::build(cap, 0.0);
            let tr: f64 = q.diag.iter().sum();
            assert_eq!(tr, 0.0);
            let tr_sq: f64 = 2.0 * q.offdiag.iter().map(|v| v * v).sum::<f64>();
            let expect = (cap * (cap + 1)) as f64 / 2.0;
            assert!(((tr_sq - expect) / expect).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_kernel_matches_direct_sum() {
        let cap = 5;
        let (xi, xi_p) = (1.0, -0.3);
        let got = projector_kernel(cap, xi, xi_p).unwrap();
        let a = hermite_function_sequence(xi, cap).unwrap();
        let b = hermite_function_sequence(xi_p, cap).unwrap();
        let want: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        // Symmetry and diagonal positivity.
        assert_eq!(got, projector_kernel(cap, xi_p, xi).unwrap());
        assert!(projector_kernel(cap, 0.7, 0.7).unwrap() > 0.0);
    }

    fn sampled_hermite_function(n: usize, half_width: f64, points: usize) -> SampledWavefunction {
        let xs: Vec<f64> = (0..points)
            .map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64)
            .collect();
        let values = xs
            .iter()
            .map(|&x| eval_hermite_function(n, x).unwrap())
            .collect();
        SampledWavefunction { xs, values }
    }

    #[test]
    fn projector_fixes_basis_states_in_range() {
        let psi = sampled_hermite_function(2, 12.0, 4001);
        let out = apply_projector(5, &psi).unwrap();
        let max_err = psi
            .values
            .iter()
            .zip(&out.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        // Accuracy is limited by the quartic resampling error on the grid.
        assert!(max_err < 1e-8, "max err {max_err}");
    }

    #[test]
    fn projector_annihilates_orthogonal_complement() {
        let psi = sampled_hermite_function(7, 12.0, 4001);
        let out = apply_projector(5, &psi).unwrap();
        let max_abs = out.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max_abs < 1e-8, "max abs {max_abs}");
    }

    #[test]
    fn projector_idempotent() {
        // A wavefunction with components on both sides of the cut.
        let xs: Vec<f64> = (0..3001).map(|i| -14.0 + 28.0 * i as f64 / 3000.0).collect();
        let values: Vec<f64> = xs
            .iter()
            .map(|&x| (-0.5 * (x - 2.0) * (x - 2.0)).exp() / std::f64::consts::PI.powf(0.25))
            .collect();
        let psi = SampledWavefunction { xs, values };
        let once = apply_projector(30, &psi).unwrap();
        let twice = apply_projector(30, &once).unwrap();
        let max_err = once
            .values
            .iter()
            .zip(&twice.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(max_err < 1e-9, "max err {max_err}");
    }

    #[test]
    fn projector_coherent_state_poisson_mass() {
        let xs: Vec<f64> = (0..3001).map(|i| -14.0 + 28.0 * i as f64 / 3000.0).collect();
        let values: Vec<f64> = xs
            .iter()
            .map(|&x| (-0.5 * (x - 2.0) * (x - 2.0)).exp() / std::f64::consts::PI.powf(0.25))
            .collect();
        let psi = SampledWavefunction { xs, values };
        let cap = 30;
        let out = apply_projector(cap, &psi).unwrap();
        // ||Π_N ψ||² by trapezoid on the fine grid.
        let mut norm_sq = 0.0;
        for w in out.xs.windows(2).zip(out.values.windows(2)) {
            let (xw, yw) = w;
            norm_sq += 0.5 * (xw[1] - xw[0]) * (yw[0] * yw[0] + yw[1] * yw[1]);
        }
        // Analytic overlaps: |<n|alpha>|² = e^{-|α|²} |α|^{2n} / n! with α = sqrt(2).
        let alpha_sq = 2.0f64;
        let mut term = (-alpha_sq).exp();
        let mut poisson = term;
        for n in 1..=cap {
            term *= alpha_sq / n as f64;
            poisson += term;
        }
        assert!(
            (norm_sq - poisson).abs() < 1e-8,
            "{norm_sq} vs {poisson}"
        );
    }

    #[test]
    fn projector_grid_preconditions() {
        let psi = sampled_hermite_function(2, 12.0, 41); // far too coarse for cap 30
        assert!(matches!(
            apply_projector(30, &psi),
            Err(Error::Precondition(_))
        ));
        // Support not covered.
        let xs: Vec<f64> = (0..101).map(|i| -1.0 + 2.0 * i as f64 / 100.0).collect();
        let values = vec![1.0; 101];
        assert!(matches!(
            apply_projector(3, &SampledWavefunction { xs, values }),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cayley_hamilton_small_cases() {
        assert!(cayley_hamilton_residual(1) < 1e-14);
        assert!(cayley_hamilton_residual(16) < 1e-14);
        assert!(cayley_hamilton_residual(40) < 1e-13);
        assert!(exact_cayley_hamilton(1));
        assert!(exact_cayley_hamilton(7));
    }

    #[test]
    fn minimal_polynomial_profile() {
        let report = minimal_polynomial_check(3).unwrap();
        assert!(report.norms[..=3].iter().all(|&v| v > 0.1));
        assert!(report.norms[4] < 1e-12);
        assert!(report.is_minimal());

        // h_1(ξ_1) = sqrt(2) ξ_1 has max entry 1.
        let r1 = minimal_polynomial_check(1).unwrap();
        assert!((r1.norms[1] - 1.0).abs() < 1e-15);

        assert!(minimal_polynomial_check(10).unwrap().is_minimal());
    }

    #[test]
    fn trace_identity_small() {
        let got = projector_trace_identity(3, 10).unwrap();
        assert!(((got - 4.0) / 4.0).abs() < 1e-12, "{got}");
    }
}

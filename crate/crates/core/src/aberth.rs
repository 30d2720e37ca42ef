//! Aberth-Ehrlich simultaneous root finding for polynomials with exact
//! big-integer coefficients.
//!
//! The root estimates live in `f64` complex arithmetic, but every polynomial
//! evaluation runs through fixed-point big-integer Horner at a precision
//! chosen from the coefficient sizes, so the monomial-basis conditioning of
//! high-degree polynomials never touches the correction step.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

/// Mantissa/exponent form of a big integer: `value ≈ mant * 2^exp`.
fn big_to_f64_exp(v: &BigInt) -> (f64, i64) {
    if v.is_zero() {
        return (0.0, 0);
    }
    let bits = v.bits() as i64;
    if bits <= 53 {
        return (v.to_f64().unwrap(), 0);
    }
    let shift = bits - 53;
    let head = (v >> shift).to_f64().unwrap();
    (head, shift)
}

/// Complex value as mantissa pair with a shared base-2 exponent.
#[derive(Debug, Clone, Copy)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub exponent: i64,
}

impl ScaledComplex {
    fn from_parts(re: (f64, i64), im: (f64, i64)) -> ScaledComplex {
        if re.0 == 0.0 && im.0 == 0.0 {
            return ScaledComplex {
                mantissa: Complex64::new(0.0, 0.0),
                exponent: 0,
            };
        }
        let e = if re.0 == 0.0 {
            im.1
        } else if im.0 == 0.0 {
            re.1
        } else {
            re.1.max(im.1)
        };
        let shift = |m: f64, d: i64| -> f64 {
            if m == 0.0 || d < -1060 {
                0.0
            } else {
                m * 2f64.powi(d as i32)
            }
        };
        ScaledComplex {
            mantissa: Complex64::new(shift(re.0, re.1 - e), shift(im.0, im.1 - e)),
            exponent: e,
        }
    }

    /// `self / other` collapsed to plain `f64`, saturating on exponent
    /// overflow/underflow.
    pub fn div_to_f64(&self, other: &ScaledComplex) -> Complex64 {
        let ratio = self.mantissa / other.mantissa;
        let d = self.exponent - other.exponent;
        if d > 1000 {
            return ratio * f64::INFINITY;
        }
        if d < -1060 {
            return Complex64::new(0.0, 0.0);
        }
        ratio * 2f64.powi(d as i32)
    }

    pub fn norm_log2(&self) -> f64 {
        self.mantissa.norm().log2() + self.exponent as f64
    }
}

/// `f64` to exact fixed-point integer at scale `2^scale` (f64 values are
/// dyadic, so this is exact).
fn f64_to_fixed(x: f64, scale: u32) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw_exp == 0 {
        (frac as i64, -1074i64)
    } else {
        ((frac | (1 << 52)) as i64, raw_exp - 1075)
    };
    let signed = if x < 0.0 { -mant } else { mant };
    let total = exp + scale as i64;
    if total >= 0 {
        BigInt::from(signed) << total
    } else {
        BigInt::from(signed) >> (-total)
    }
}

/// Evaluates `p(z)` by complex fixed-point Horner; the result is correct to
/// roughly `scale` bits below the largest intermediate magnitude.
///
/// `coeffs[k]` is the exact coefficient of `z^k`.
pub fn eval_fixed(coeffs: &[BigInt], z: Complex64, scale: u32) -> ScaledComplex {
    let zr = f64_to_fixed(z.re, scale);
    let zi = f64_to_fixed(z.im, scale);
    let mut acc_r = coeffs.last().unwrap().clone() << scale;
    let mut acc_i = BigInt::zero();
    for c in coeffs.iter().rev().skip(1) {
        let new_r = ((&acc_r * &zr) - (&acc_i * &zi)) >> scale;
        let new_i = ((&acc_r * &zi) + (&acc_i * &zr)) >> scale;
        acc_r = new_r + (c << scale);
        acc_i = new_i;
    }
    let sc = ScaledComplex::from_parts(big_to_f64_exp(&acc_r), big_to_f64_exp(&acc_i));
    ScaledComplex {
        mantissa: sc.mantissa,
        exponent: sc.exponent - scale as i64,
    }
}

/// Exact coefficients of the derivative polynomial.
pub fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// Picks an evaluation precision that dominates the worst-case Horner
/// magnitude for arguments with `|z| <= radius`.
pub fn choose_scale(coeffs: &[BigInt], radius: f64) -> u32 {
    let coeff_bits = coeffs.iter().map(|c| c.bits()).max().unwrap_or(1) as f64;
    let degree = (coeffs.len() - 1) as f64;
    let growth = degree * (radius.max(1.0) + 1.0).log2();
    (coeff_bits + growth) as u32 + 128
}

/// Result of a simultaneous root run.
pub struct AberthOutcome {
    pub roots: Vec<Complex64>,
    /// Newton residual `|p(z)/p'(z)|` per root.
    pub residuals: Vec<f64>,
    /// Indices that did not meet the convergence tolerance.
    pub unconverged: Vec<usize>,
}

/// Runs Aberth-Ehrlich iteration from the supplied initial guesses.
///
/// Updates are Jacobi-style: each sweep reads only the previous sweep's
/// estimates.
pub fn aberth(coeffs: &[BigInt], initial: &[Complex64], scale: u32) -> Result<AberthOutcome> {
    let degree = coeffs.len() - 1;
    if initial.len() != degree {
        return Err(Error::Precondition(format!(
            "need {degree} initial guesses, got {}",
            initial.len()
        )));
    }
    let deriv = derivative(coeffs);
    let mut z: Vec<Complex64> = initial.to_vec();
    let mut frozen = vec![false; degree];
    let max_sweeps = 400;

    for _ in 0..max_sweeps {
        let mut all_done = true;
        let mut next = z.clone();
        for k in 0..degree {
            if frozen[k] {
                continue;
            }
            let p = eval_fixed(coeffs, z[k], scale);
            let dp = eval_fixed(&deriv, z[k], scale);
            let newton = p.div_to_f64(&dp);
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    sum += 1.0 / (z[k] - zj);
                }
            }
            let denom = 1.0 - newton * sum;
            let mut w = if denom.norm() > 1e-30 {
                newton / denom
            } else {
                newton
            };
            let bound = 0.5 * (1.0 + z[k].norm());
            if !w.is_finite() || w.norm() > bound {
                w = if w.is_finite() {
                    w * (bound / w.norm())
                } else {
                    Complex64::new(bound * 0.1, bound * 0.1)
                };
            }
            next[k] = z[k] - w;
            if w.norm() < 1e-12 * (1.0 + z[k].norm()) {
                frozen[k] = true;
            } else {
                all_done = false;
            }
        }
        z = next;
        if all_done {
            break;
        }
    }

    let mut residuals = Vec::with_capacity(degree);
    let mut unconverged = Vec::new();
    for (k, zk) in z.iter().enumerate() {
        let p = eval_fixed(coeffs, *zk, scale);
        let dp = eval_fixed(&deriv, *zk, scale);
        let r = p.div_to_f64(&dp).norm();
        if !(r < 1e-9 * (1.0 + zk.norm())) {
            unconverged.push(k);
        }
        residuals.push(r);
    }
    Ok(AberthOutcome {
        roots: z,
        residuals,
        unconverged,
    })
}

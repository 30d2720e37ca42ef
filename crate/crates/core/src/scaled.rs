//! Overflow-safe real numbers stored as `mantissa * 2^exponent`.
//!
//! The raw Hermite values `H_n(x)` grow like `2^n n!` and leave the range of
//! `f64` near `n ≈ 160`. All such magnitudes are carried in this split
//! representation; the mantissa is kept in `[1, 2)` (by absolute value) after
//! every operation.

/// A real number in the form `mantissa * 2^exponent`.
///
/// Invariant: `|mantissa| ∈ [1, 2)` whenever the value is nonzero; the value
/// is zero iff `mantissa == 0.0` (with `exponent == 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    exponent: i64,
}

/// Splits a finite nonzero `f64` into `(m, e)` with `|m| ∈ [1, 2)` and
/// `x = m * 2^e`.
fn frexp1(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x != 0.0);
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // Subnormal: scale up first.
        let (m, e) = frexp1(x * 2f64.powi(120));
        return (m, e - 120);
    }
    let mantissa = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    (mantissa, raw_exp - 1023)
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        exponent: 0,
    };

    pub const ONE: ScaledReal = ScaledReal {
        mantissa: 1.0,
        exponent: 0,
    };

    /// Builds from a finite `f64`.
    pub fn from_f64(x: f64) -> ScaledReal {
        assert!(x.is_finite(), "ScaledReal::from_f64 requires a finite value");
        if x == 0.0 {
            return ScaledReal::ZERO;
        }
        let (mantissa, exponent) = frexp1(x);
        ScaledReal { mantissa, exponent }
    }

    /// Builds from an arbitrary mantissa/exponent pair, normalizing.
    pub fn from_parts(mantissa: f64, exponent: i64) -> ScaledReal {
        if mantissa == 0.0 {
            return ScaledReal::ZERO;
        }
        let (m, e) = frexp1(mantissa);
        ScaledReal {
            mantissa: m,
            exponent: e + exponent,
        }
    }

    /// `e^x` for finite `x`, without intermediate overflow.
    pub fn exp(x: f64) -> ScaledReal {
        let log2e = std::f64::consts::LOG2_E;
        let k = (x * log2e).floor();
        // x = k*ln2 + r with r in [0, ln2); e^x = e^r * 2^k.
        let r = x - k * std::f64::consts::LN_2;
        ScaledReal::from_parts(r.exp(), k as i64)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Converts to `f64`; saturates to `±inf` / `0.0` outside the range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exponent > 1023 {
            return f64::INFINITY.copysign(self.mantissa);
        }
        if self.exponent < -1073 {
            return 0.0f64.copysign(self.mantissa);
        }
        self.mantissa * 2f64.powi(self.exponent as i32)
    }

    /// Base-2 logarithm of the absolute value; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().log2() + self.exponent as f64
    }

    pub fn abs(&self) -> ScaledReal {
        ScaledReal {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn neg(&self) -> ScaledReal {
        ScaledReal {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn mul(&self, other: &ScaledReal) -> ScaledReal {
        if self.is_zero() || other.is_zero() {
            return ScaledReal::ZERO;
        }
        ScaledReal::from_parts(
            self.mantissa * other.mantissa,
            self.exponent + other.exponent,
        )
    }

    pub fn mul_f64(&self, factor: f64) -> ScaledReal {
        if self.is_zero() || factor == 0.0 {
            return ScaledReal::ZERO;
        }
        let (fm, fe) = frexp1(factor);
        ScaledReal::from_parts(self.mantissa * fm, self.exponent + fe)
    }

    pub fn div(&self, other: &ScaledReal) -> ScaledReal {
        assert!(!other.is_zero(), "ScaledReal division by zero");
        if self.is_zero() {
            return ScaledReal::ZERO;
        }
        ScaledReal::from_parts(
            self.mantissa / other.mantissa,
            self.exponent - other.exponent,
        )
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> ScaledReal {
        assert!(self.mantissa >= 0.0, "ScaledReal::sqrt of negative value");
        if self.is_zero() {
            return ScaledReal::ZERO;
        }
        if self.exponent % 2 == 0 {
            ScaledReal::from_parts(self.mantissa.sqrt(), self.exponent / 2)
        } else {
            ScaledReal::from_parts((2.0 * self.mantissa).sqrt(), (self.exponent - 1) / 2)
        }
    }

    pub fn add(&self, other: &ScaledReal) -> ScaledReal {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exponent >= other.exponent {
            (self, other)
        } else {
            (other, self)
        };
        let shift = hi.exponent - lo.exponent;
        if shift > 64 {
            return *hi;
        }
        let sum = hi.mantissa + lo.mantissa * 2f64.powi(-(shift as i32));
        ScaledReal::from_parts(sum, hi.exponent)
    }

    pub fn sub(&self, other: &ScaledReal) -> ScaledReal {
        self.add(&other.neg())
    }

    /// Relative difference `|a - b| / max(|a|, |b|)`; zero when both are zero.
    pub fn rel_diff(&self, other: &ScaledReal) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let diff = self.sub(other).abs();
        let scale = if self.abs().log2_abs() >= other.abs().log2_abs() {
            self.abs()
        } else {
            other.abs()
        };
        diff.div(&scale).to_f64()
    }
}

//! Arbitrary-precision substrate: real and complex scalars backed by MPFR,
//! the complex gamma function, quadrature rules, a cubic solver, an
//! unpivoted LDU factorization and small dense 3x3 matrices.

mod cubic;
mod gamma;
mod ldu;
mod mat3;
mod quad;

pub use cubic::solve_cubic;
pub use gamma::{gamma, gamma_real, rgamma_real};
pub use ldu::{ldu_decompose, Ldu, RealMatrix};
pub use mat3::Mat3;
pub use quad::{quad_gl, quad_ts, quad_ts_tol, GaussLegendre};

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::PowAssign;
use rug::{Assign, Complex, Float};

/// Arbitrary-precision real scalar.
pub type PReal = Float;
/// Arbitrary-precision complex scalar; both parts share one precision.
pub type PComplex = Complex;

/// Working precision measured in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_DIGITS: u32 = 50;
    const GUARD_BITS: u32 = 8;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Precision(digits));
        }
        Ok(Precision { digits })
    }

    /// Reads `MB_PRECISION` from the environment, falling back to 50 digits.
    pub fn from_env() -> Result<Self> {
        match std::env::var("MB_PRECISION") {
            Ok(s) => {
                let digits = s
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Domain(format!("MB_PRECISION={s} is not a digit count")))?;
                Self::new(digits)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn bits(self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + Self::GUARD_BITS
    }

    /// The same precision raised by `extra` digits.
    pub fn plus(self, extra: u32) -> Self {
        Precision {
            digits: self.digits + extra,
        }
    }

    pub fn real<T>(self, v: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn complex<T>(self, v: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.bits(), v)
    }

    /// Parses a decimal literal exactly to working precision.
    pub fn parse(self, s: &str) -> Result<Float> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| Error::Domain(format!("cannot parse {s:?} as a number: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// `10^(-k)` at working precision.
    pub fn ten_pow_neg(self, k: i32) -> Float {
        let mut t = Float::with_val(self.bits(), 10);
        t.pow_assign(-k);
        t
    }

    /// Unit of relative accuracy, `10^(-digits)`.
    pub fn eps(self) -> Float {
        self.ten_pow_neg(self.digits as i32)
    }

    /// Default quadrature tolerance `10^(-digits+10)`.
    pub fn quad_tol(self) -> Float {
        self.ten_pow_neg(self.digits as i32 - 10)
    }

    pub fn i(self) -> Complex {
        Complex::with_val(self.bits(), (0, 1))
    }

    /// `exp(i t)` for real `t`.
    pub fn cis(self, t: &Float) -> Complex {
        let (s, c) = Float::with_val(self.bits(), t).sin_cos(Float::new(self.bits()));
        Complex::with_val(self.bits(), (c, s))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

/// Modulus of a complex number as a real of the same precision.
pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Decimal order of magnitude of `|z|`, `-inf` for zero.
pub fn log10_abs(z: &Complex) -> f64 {
    let a = cabs(z);
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_float(&a)
}

/// `log10 |x|` computed without overflowing `f64`.
pub fn log10_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

/// Relative difference `|a - b| / max(|b|, tiny)` as `f64`.
pub fn rel_diff(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(a.prec().0.max(b.prec().0), a - b);
    let nb = cabs(b);
    if nb.is_zero() {
        return cabs(&d).to_f64();
    }
    (cabs(&d) / nb).to_f64()
}

/// Polynomial extrapolation to `t = 0` through the points `(t_i, v_i)` by
/// Neville's scheme.
pub fn neville_at_zero(ts: &[f64], vs: &[f64]) -> f64 {
    assert_eq!(ts.len(), vs.len());
    let mut p = vs.to_vec();
    let n = ts.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (ts[i + k] * p[i] - ts[i] * p[i + 1]) / (ts[i + k] - ts[i]);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_floor() {
        assert!(Precision::new(29).is_err());
        assert_eq!(Precision::new(40).unwrap().digits(), 40);
        assert!(Precision::default().bits() >= 166);
    }

    #[test]
    fn parse_is_exact_to_working_precision() {
        let p = Precision::new(60).unwrap();
        let x = p.parse("0.3").unwrap();
        let y = p.real(3) / p.real(10);
        assert_eq!(x, y);
    }

    #[test]
    fn neville_recovers_polynomial() {
        let ts = [0.1, 0.2, 0.3, 0.4];
        let vs: Vec<f64> = ts.iter().map(|t| 2.0 + 3.0 * t - t * t * t).collect();
        assert!((neville_at_zero(&ts, &vs) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn log10_of_huge_values() {
        let p = Precision::default();
        let mut x = p.real(10);
        x.pow_assign(500);
        assert!((log10_float(&x) - 500.0).abs() < 1e-9);
    }
}

//! The limiting hard-edge kernel `K^{(α,θ)}(x, y)`.
//!
//! Two independent routes are provided: a one-dimensional integral of
//! Wright's generalized Bessel functions valid for every `θ > 0`, and, for
//! `θ = 1/2`, a closed form through the model matrix `Φ_α` and its inverse.

use crate::error::{Error, Result};
use crate::meijer::SectorPoint;
use crate::mp::{quad_ts, Precision};
use crate::rhframe::{phi_inverse_at, phi_matrix_at, Side};
use crate::specfun::{WrightBessel, WrightParams};
use rug::{Complex, Float};

/// Arguments of one kernel evaluation.
#[derive(Clone, Debug)]
pub struct KernelQuery {
    pub alpha: Float,
    pub theta: Float,
    pub x: Float,
    pub y: Float,
}

impl KernelQuery {
    pub fn new(alpha: Float, theta: Float, x: Float, y: Float) -> Result<Self> {
        if !(alpha > -1) {
            return Err(Error::Domain(format!("α must exceed -1, got {alpha}")));
        }
        if !(theta > 0) {
            return Err(Error::Domain(format!("θ must be positive, got {theta}")));
        }
        if !(x > 0) || !(y > 0) {
            return Err(Error::Domain("kernel arguments must be positive".into()));
        }
        Ok(KernelQuery { alpha, theta, x, y })
    }
}

/// `θ y^α ∫₀¹ J_{(α+1)/θ, 1/θ}(ux) J_{α+1, θ}((uy)^θ) u^α du`.
///
/// Tanh-sinh quadrature absorbs the `u^α` endpoint behaviour, and the
/// integrand is regular on the diagonal `x = y`.
pub fn kernel_integral(q: &KernelQuery, prec: Precision) -> Result<Float> {
    let work = prec.plus(5);
    let bits = work.bits();
    let alpha = work.real(&q.alpha);
    let theta = work.real(&q.theta);
    let a1 = Float::with_val(bits, &alpha + 1u32);
    let left = WrightBessel::new(
        &WrightParams {
            a: Float::with_val(bits, &a1 / &theta),
            b: Float::with_val(bits, 1 / &theta),
        },
        q.x.to_f64(),
        work,
    )?;
    let y_theta = Float::with_val(bits, q.y.pow_ref_float(&theta));
    let right = WrightBessel::new(
        &WrightParams {
            a: a1,
            b: theta.clone(),
        },
        y_theta.to_f64(),
        work,
    )?;
    let x = work.real(&q.x);
    let y = work.real(&q.y);
    let f = |u: &Float| {
        let ux = Float::with_val(bits, u * &x);
        let uy = Float::with_val(bits, u * &y);
        let uyt = Float::with_val(bits, uy.pow_ref_float(&theta));
        let ua = Float::with_val(bits, u.pow_ref_float(&alpha));
        work.complex(left.eval_real(&ux) * right.eval_real(&uyt) * ua)
    };
    let integral = quad_ts(f, &work.real(0), &work.real(1), 12, work)?;
    let ya = Float::with_val(bits, y.pow_ref_float(&alpha));
    Ok(Float::with_val(prec.bits(), integral.real() * ya * theta))
}

trait PowFloat {
    fn pow_ref_float(&self, e: &Float) -> Float;
}

impl PowFloat for Float {
    fn pow_ref_float(&self, e: &Float) -> Float {
        let bits = self.prec().max(e.prec());
        if self.is_zero() {
            return Float::new(bits);
        }
        (Float::with_val(bits, self.ln_ref()) * e).exp()
    }
}

/// Kernel value through `Φ_α` at `θ = 1/2`, with its imaginary residue.
#[derive(Clone, Debug)]
pub struct MeijerKernelValue {
    pub value: Float,
    pub imaginary: Float,
}

/// `(1/(2πi(x-y))) (-1, 1, 0) Φ₊⁻¹(y) Φ₊(x) (1, 1, 0)ᵀ` with boundary
/// values from the upper half-plane.
pub fn kernel_meijer_full(
    alpha: &Float,
    x: &Float,
    y: &Float,
    prec: Precision,
) -> Result<MeijerKernelValue> {
    if !(*x > 0) || !(*y > 0) {
        return Err(Error::Domain("kernel arguments must be positive".into()));
    }
    let gap = Float::with_val(prec.bits(), x - y).abs();
    let scale = Float::with_val(prec.bits(), x.max_ref(y)) * 1e-6;
    if gap < scale {
        return Err(Error::DiagonalPoint);
    }
    let work = prec.plus(5);
    let bits = work.bits();
    let zx = SectorPoint::positive(&work.real(x))?;
    let zy = SectorPoint::positive(&work.real(y))?;
    let phi_x = phi_matrix_at(alpha, &zx, Some(Side::Plus), work)?.value;
    let inv_y = phi_inverse_at(alpha, &zy, Some(Side::Plus), work)?;
    let col = [
        Complex::with_val(bits, &phi_x[(0, 0)] + &phi_x[(0, 1)]),
        Complex::with_val(bits, &phi_x[(1, 0)] + &phi_x[(1, 1)]),
        Complex::with_val(bits, &phi_x[(2, 0)] + &phi_x[(2, 1)]),
    ];
    let mut acc = Complex::new(bits);
    for (k, ck) in col.iter().enumerate() {
        let row = Complex::with_val(bits, &inv_y[(1, k)] - &inv_y[(0, k)]);
        acc += row * ck;
    }
    let denom = Complex::with_val(bits, (0, 1)) * work.pi() * 2u32 * (work.real(x) - work.real(y));
    let v = acc / denom;
    Ok(MeijerKernelValue {
        value: Float::with_val(prec.bits(), v.real()),
        imaginary: Float::with_val(prec.bits(), v.imag()),
    })
}

/// Real part of [`kernel_meijer_full`].
pub fn kernel_meijer(alpha: &Float, x: &Float, y: &Float, prec: Precision) -> Result<Float> {
    Ok(kernel_meijer_full(alpha, x, y, prec)?.value)
}

/// Ratio between the two normalizations at `θ = 1/2`: the matrix route
/// equals `NORMALIZATION · K_W(NORMALIZATION · x, NORMALIZATION · y)`, where
/// `K_W` is [`kernel_integral`]. It is `c_V^{-3}` for `V(x) = x`.
pub const NORMALIZATION: u32 = 4;

/// The integral route at `θ = 1/2` in the normalization of
/// [`kernel_meijer`], that is `4 K_W(4x, 4y)`.
pub fn kernel_integral_matched(
    alpha: &Float,
    x: &Float,
    y: &Float,
    prec: Precision,
) -> Result<Float> {
    let q = KernelQuery::new(
        prec.real(alpha),
        prec.real(0.5),
        prec.real(x) * NORMALIZATION,
        prec.real(y) * NORMALIZATION,
    )?;
    Ok(kernel_integral(&q, prec)? * NORMALIZATION)
}

/// Diagonal value of [`kernel_meijer`], taken from the integral route
/// where the diagonal is regular.
pub fn kernel_diag_limit(alpha: &Float, x: &Float, prec: Precision) -> Result<Float> {
    kernel_integral_matched(alpha, x, x, prec)
}

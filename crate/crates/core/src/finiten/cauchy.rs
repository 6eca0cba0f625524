//! Rows of the 3x3 Riemann-Hilbert matrix `Y` of the multiple orthogonal
//! polynomial ensemble and the Christoffel-Darboux form of the kernel.
//!
//! Each row is `(P, C[P w], C[P x^{1/2} w])` with `C` the Cauchy transform
//! `(1/2πi) ∫_0^∞ f(t) / (t - z) dt`.

use super::{finite_kernel, horner, BiorthoSystem};
use crate::error::{Error, Result};
use crate::mp::{cabs, quad_ts_tol, Mat3, Precision};
use rug::{Complex, Float};

/// Polynomial parts of the three rows of `Y` for degree `n`, each scaled by
/// the matching entry of `scales`. A missing third row (only for `n = 1`)
/// is the constant row `(0, 0, 1)`.
#[derive(Clone, Debug)]
pub struct YRows {
    pub n: usize,
    pub polys: [Option<Vec<Float>>; 3],
    pub scales: [Complex; 3],
}

/// Builds the rows: the monic `p_n`, and two polynomials of degree below `n`
/// whose Cauchy transforms decay like `z^{-⌈n/2⌉}` and `z^{-⌊n/2⌋}` with unit
/// leading coefficient. Both are combinations of `p_{n-2}` and `p_{n-1}`.
pub fn y_row_polynomials(bs: &BiorthoSystem, n: usize) -> Result<YRows> {
    if n == 0 || n > bs.nmax {
        return Err(Error::Domain(format!(
            "rows of Y for degree {n} need 1 ≤ n ≤ nmax = {}",
            bs.nmax
        )));
    }
    let prec = bs.precision();
    let bits = prec.bits();
    let combo = |star: usize| -> Vec<Float> {
        let mut out = vec![Float::new(bits); n];
        for j in star..n {
            for (c, a) in bs.p[j].iter().enumerate() {
                out[c] += Float::with_val(bits, a * &bs.q[j][star]);
            }
        }
        out
    };
    let (n1, n2) = (n.div_ceil(2), n / 2);
    let row2 = Some(combo(2 * n1 - 2));
    let row3 = if n2 == 0 {
        None
    } else {
        Some(combo(2 * n2 - 1))
    };
    let minus_two_pi_i = Complex::with_val(bits, (0, -prec.pi() * 2u32));
    Ok(YRows {
        n,
        polys: [Some(bs.p[n].clone()), row2, row3],
        scales: [prec.complex(1), minus_two_pi_i.clone(), minus_two_pi_i],
    })
}

fn tolerance(prec: Precision) -> Float {
    prec.ten_pow_neg(prec.digits() as i32 / 2)
}

fn integrate(
    f: impl Fn(&Float) -> Complex + Copy,
    cuts: &[Float],
    prec: Precision,
) -> Result<Complex> {
    let tol = tolerance(prec);
    let mut acc = Complex::new(prec.bits());
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            acc += quad_ts_tol(f, &w[0], &w[1], 14, &tol, prec)?;
        }
    }
    Ok(acc)
}

/// `P(t) t^{c/2} w(t)`.
fn density(bs: &BiorthoSystem, poly: &[Float], c: u32, t: &Float) -> Float {
    let mut v = horner(poly, t) * bs.moments.weight(t);
    if c == 1 {
        v *= Float::with_val(t.prec(), t.sqrt_ref());
    }
    v
}

/// `P(z) z^{c/2} w(z)` continued off the axis.
fn density_c(bs: &BiorthoSystem, poly: &[Float], c: u32, z: &Complex) -> Complex {
    let bits = z.prec().0;
    let mut v = Complex::with_val(bits, &poly[poly.len() - 1]);
    for a in poly.iter().rev().skip(1) {
        v *= z;
        v += a;
    }
    v *= bs.moments.weight_c(z);
    if c == 1 {
        v *= Complex::with_val(bits, z.sqrt_ref());
    }
    v
}

fn domain_end(bs: &BiorthoSystem, prec: Precision) -> Result<Float> {
    let halves = 2 * bs.nmax + 1;
    bs.moments
        .domain_end(halves, tolerance(prec).to_f64() * 1e-3)
}

/// `(1/2πi) ∫_0^∞ P(t) t^{c/2} w(t) / (t - z) dt` for `z` off the positive axis.
fn cauchy_off_axis(bs: &BiorthoSystem, poly: &[Float], c: u32, z: &Complex) -> Result<Complex> {
    let prec = bs.precision();
    let bits = prec.bits();
    let end = domain_end(bs, prec)?;
    let mid = Float::with_val(bits, &end / 8u32);
    let f = |t: &Float| -> Complex {
        let num = density(bs, poly, c, t);
        Complex::with_val(bits, num) / Complex::with_val(bits, t - z)
    };
    let total = integrate(f, &[prec.real(0), mid, end], prec)?;
    Ok(total / Complex::with_val(bits, (0, prec.pi() * 2u32)))
}

/// `∫_0^∞ f(t) / (t - z) dt` at `z = x + iσ`, with the pole region handled
/// by subtracting `f(x)` on `[0, 2x]`.
fn subtracted_integral(
    bs: &BiorthoSystem,
    poly: &[Float],
    c: u32,
    x: &Float,
    sigma: &Float,
) -> Result<Complex> {
    let prec = bs.precision();
    let bits = prec.bits();
    let fx = density(bs, poly, c, x);
    let z = Complex::with_val(bits, (x, sigma));
    let two_x = Float::with_val(bits, x * 2u32);
    let near = |t: &Float| -> Complex {
        let num = density(bs, poly, c, t) - &fx;
        Complex::with_val(bits, num) / Complex::with_val(bits, t - &z)
    };
    let mut total = integrate(near, &[prec.real(0), x.clone(), two_x.clone()], prec)?;
    if !sigma.is_zero() {
        let upper = Complex::with_val(bits, &two_x - &z).ln();
        let lower = Complex::with_val(bits, -&z).ln();
        total += (upper - lower) * &fx;
    }
    let end = domain_end(bs, prec)?;
    if end > two_x {
        let far = |t: &Float| -> Complex {
            Complex::with_val(bits, density(bs, poly, c, t)) / Complex::with_val(bits, t - &z)
        };
        let mid = Float::with_val(bits, &end / 8u32).max(&two_x);
        total += integrate(far, &[two_x, mid, end], prec)?;
    }
    Ok(total)
}

/// Boundary value from the upper half-plane of the Cauchy transform at
/// `x > 0`.
///
/// With `delta = None` the principal value is computed on the axis and the
/// jump `f(x)/2` added. With `delta = Some(δ)` the upper boundary function is
/// averaged over `x ± iδ`: at `x + iδ` it is the transform itself, at
/// `x - iδ` the transform plus the continued density. The error is `O(δ²)`.
fn cauchy_plus(
    bs: &BiorthoSystem,
    poly: &[Float],
    c: u32,
    x: &Float,
    delta: Option<&Float>,
) -> Result<Complex> {
    let prec = bs.precision();
    let bits = prec.bits();
    let two_pi_i = Complex::with_val(bits, (0, prec.pi() * 2u32));
    match delta {
        None => {
            let fx = density(bs, poly, c, x);
            let principal = subtracted_integral(bs, poly, c, x, &prec.real(0))?;
            Ok(principal / two_pi_i + fx / 2u32)
        }
        Some(d) => {
            let below = Float::with_val(bits, -d);
            let up = subtracted_integral(bs, poly, c, x, d)? / &two_pi_i;
            let down = subtracted_integral(bs, poly, c, x, &below)? / &two_pi_i;
            let jump = density_c(bs, poly, c, &Complex::with_val(bits, (x, &below)));
            Ok((up + down + jump) / 2u32)
        }
    }
}

/// `Y₊(x)` for `x > 0` from the given rows.
pub fn y_boundary(
    bs: &BiorthoSystem,
    rows: &YRows,
    x: &Float,
    delta: Option<&Float>,
) -> Result<Mat3> {
    if !(*x > 0) {
        return Err(Error::Domain("boundary values of Y need x > 0".into()));
    }
    let prec = bs.precision();
    let bits = prec.bits();
    let x = Float::with_val(bits, x);
    let mut entries: [[Complex; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| prec.complex(0)));
    for (r, (poly, s)) in rows.polys.iter().zip(&rows.scales).enumerate() {
        entries[r] = match poly {
            Some(p) => [
                Complex::with_val(bits, horner(p, &x)) * s,
                cauchy_plus(bs, p, 0, &x, delta)? * s,
                cauchy_plus(bs, p, 1, &x, delta)? * s,
            ],
            None => [prec.complex(0), prec.complex(0), prec.complex(1)],
        };
    }
    Ok(Mat3::new(entries))
}

/// `Y(z)` for `z` off the positive real axis.
pub fn y_off_axis(bs: &BiorthoSystem, rows: &YRows, z: &Complex) -> Result<Mat3> {
    let prec = bs.precision();
    let bits = prec.bits();
    if z.imag().is_zero() && !z.real().is_sign_negative() {
        return Err(Error::Domain("Y is evaluated off [0, ∞)".into()));
    }
    let mut entries: [[Complex; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| prec.complex(0)));
    for (r, (poly, s)) in rows.polys.iter().zip(&rows.scales).enumerate() {
        entries[r] = match poly {
            Some(p) => {
                let mut val = Complex::with_val(bits, &p[p.len() - 1]);
                for a in p.iter().rev().skip(1) {
                    val *= z;
                    val += a;
                }
                [
                    val * s,
                    cauchy_off_axis(bs, p, 0, z)? * s,
                    cauchy_off_axis(bs, p, 1, z)? * s,
                ]
            }
            None => [prec.complex(0), prec.complex(0), prec.complex(1)],
        };
    }
    Ok(Mat3::new(entries))
}

/// Relative difference between [`finite_kernel`] and the kernel assembled
/// from `(0, w(y), y^{1/2} w(y)) Y₊⁻¹(y) Y₊(x) e₁ / (2πi(x - y))`.
///
/// `delta` selects the boundary-value evaluation as in the Cauchy
/// transforms above; `None` uses principal values on the axis.
pub fn cd_formula_check(
    bs: &BiorthoSystem,
    x: &Float,
    y: &Float,
    delta: Option<f64>,
) -> Result<Float> {
    let n = bs.n();
    if n > 8 {
        return Err(Error::Domain(
            "the Christoffel-Darboux check is limited to n ≤ 8".into(),
        ));
    }
    if x == y {
        return Err(Error::DiagonalPoint);
    }
    let prec = bs.precision();
    let bits = prec.bits();
    let rows = y_row_polynomials(bs, n)?;
    let delta = delta.map(|d| prec.real(d));
    let yx = y_boundary(bs, &rows, x, delta.as_ref())?;
    let yy = y_boundary(bs, &rows, y, delta.as_ref())?;
    let col = yx.column(0);
    let inv = yy.inverse();
    let yv = Float::with_val(bits, y);
    let wy = bs.moments.weight(&yv);
    let left = [
        prec.complex(0),
        Complex::with_val(bits, &wy),
        Complex::with_val(bits, &wy * Float::with_val(bits, yv.sqrt_ref())),
    ];
    let right = inv.mul_vec(&col);
    let mut acc = Complex::new(bits);
    for (l, r) in left.iter().zip(&right) {
        acc += Complex::with_val(bits, l * r);
    }
    let denom = Complex::with_val(bits, (0, prec.pi() * 2u32)) * Float::with_val(bits, x - y);
    let assembled = acc / denom;
    let direct = finite_kernel(bs, x, y)?;
    let diff = assembled - &direct;
    Ok(cabs(&diff) / direct.abs())
}

//! Closed-form averages of logarithmic kernels over one cell `[a, b]`.
//!
//! A piecewise-constant density therefore has exact potentials, so grid
//! errors come only from the piecewise-constant approximation itself.

use super::HalfPlane;
use rug::{Complex, Float};

fn g_antider(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.abs().ln() - u
    }
}

/// Mean of `ln|x - s|` over `s ∈ [a, b]`.
pub(crate) fn log_avg(x: f64, a: f64, b: f64) -> f64 {
    (g_antider(x - a) - g_antider(x - b)) / (b - a)
}

fn h_antider(u: f64, c: f64) -> f64 {
    let d = u - c;
    let lead = if d == 0.0 {
        0.0
    } else {
        (u * u - c * c) * d.abs().ln()
    };
    lead - u * u / 2.0 - c * u
}

/// Mean of `ln|√x - √s|` over `s ∈ [a, b]`.
pub(crate) fn sqrt_log_avg(x: f64, a: f64, b: f64) -> f64 {
    let c = x.sqrt();
    (h_antider(b.sqrt(), c) - h_antider(a.sqrt(), c)) / (b - a)
}

#[cfg(test)]
fn p_antider(u: f64, c: f64) -> f64 {
    let d = u + c;
    let lead = if d == 0.0 {
        0.0
    } else {
        (u * u - c * c) * d.ln()
    };
    lead - u * u / 2.0 + c * u
}

/// Mean of `ln(√x + √s)` over `s ∈ [a, b]`.
#[cfg(test)]
fn sum_log_avg(x: f64, a: f64, b: f64) -> f64 {
    let c = x.sqrt();
    (p_antider(b.sqrt(), c) - p_antider(a.sqrt(), c)) / (b - a)
}

/// Mean of `√s` over `[a, b]`.
pub(crate) fn sqrt_avg(a: &Float, b: &Float) -> Float {
    let bits = a.prec();
    let pa = Float::with_val(bits, a.sqrt_ref()) * a;
    let pb = Float::with_val(bits, b.sqrt_ref()) * b;
    (pb - pa) * 2u32 / 3u32 / Float::with_val(bits, b - a)
}

/// Principal logarithm, with the boundary value from `side` on the
/// negative real axis.
pub(crate) fn log_side(u: &Complex, side: HalfPlane) -> Complex {
    let bits = u.prec().0;
    if u.imag().is_zero() && u.real().is_sign_negative() && !u.real().is_zero() {
        let re = Float::with_val(bits, u.real().abs_ref()).ln();
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        let im = if side == HalfPlane::Upper { pi } else { -pi };
        return Complex::with_val(bits, (re, im));
    }
    Complex::with_val(bits, u.ln_ref())
}

fn g_antider_c(u: &Complex, side: HalfPlane) -> Complex {
    let bits = u.prec().0;
    if u.is_zero() {
        return Complex::new(bits);
    }
    Complex::with_val(bits, u * log_side(u, side)) - u
}

/// Mean of `log(z - s)` over `s ∈ [a, b]`, principal branch, boundary
/// values on the real axis taken from `side`.
pub(crate) fn log_avg_c(z: &Complex, a: &Float, b: &Float, side: HalfPlane) -> Complex {
    let bits = z.prec().0;
    let za = Complex::with_val(bits, z - a);
    let zb = Complex::with_val(bits, z - b);
    (g_antider_c(&za, side) - g_antider_c(&zb, side)) / Float::with_val(bits, b - a)
}

fn p_antider_c(u: &Float, c: &Complex) -> Complex {
    let bits = c.prec().0;
    let d = Complex::with_val(bits, c + u);
    let u2 = Float::with_val(bits, u.square_ref());
    let c2 = Complex::with_val(bits, c.square_ref());
    let lead = if d.is_zero() {
        Complex::new(bits)
    } else {
        Complex::with_val(bits, -c2 + &u2) * d.ln()
    };
    lead - u2 / 2u32 + Complex::with_val(bits, c * u)
}

/// Mean of `log(c + √t)` over `t ∈ [a, b]` for `Re c ≥ 0`.
pub(crate) fn sum_log_avg_c(c: &Complex, a: &Float, b: &Float) -> Complex {
    let bits = c.prec().0;
    let ua = Float::with_val(bits, a.sqrt_ref());
    let ub = Float::with_val(bits, b.sqrt_ref());
    (p_antider_c(&ub, c) - p_antider_c(&ua, c)) / Float::with_val(bits, b - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn midpoint_avg(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let n = 200_000;
        let h = (b - a) / n as f64;
        (0..n).map(|k| f(a + (k as f64 + 0.5) * h)).sum::<f64>() / n as f64
    }

    #[test]
    fn averages_match_brute_force() {
        let (a, b) = (0.7, 0.9);
        for x in [0.1, 0.8, 2.0] {
            let lg = midpoint_avg(|s| (x - s).abs().ln(), a, b);
            assert!((log_avg(x, a, b) - lg).abs() < 1e-4, "{x}");
            let sl = midpoint_avg(|s| (x.sqrt() - s.sqrt()).abs().ln(), a, b);
            assert!((sqrt_log_avg(x, a, b) - sl).abs() < 1e-4, "{x}");
            let pl = midpoint_avg(|s| (x.sqrt() + s.sqrt()).ln(), a, b);
            assert!((sum_log_avg(x, a, b) - pl).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn complex_forms_reduce_to_real_ones() {
        let bits = 128;
        let a = Float::with_val(bits, 0.7);
        let b = Float::with_val(bits, 0.9);
        let z = Complex::with_val(bits, (2.0, 0));
        let v = log_avg_c(&z, &a, &b, HalfPlane::Upper);
        assert!((v.real().to_f64() - log_avg(2.0, 0.7, 0.9)).abs() < 1e-14);
        assert!(v.imag().is_zero());
        // Below the cell the upper boundary value carries +iπ.
        let z = Complex::with_val(bits, (0.1, 0));
        let v = log_avg_c(&z, &a, &b, HalfPlane::Upper);
        assert!((v.imag().to_f64() - std::f64::consts::PI).abs() < 1e-14);
        let c = Complex::with_val(bits, (0.5, 0));
        let w = sum_log_avg_c(&c, &a, &b);
        assert!((w.real().to_f64() - sum_log_avg(0.25, 0.7, 0.9)).abs() < 1e-14);
    }
}

//! The equilibrium density for `V(x) = x`.
//!
//! Two independent evaluations: the closed form in terms of cube roots, and
//! the imaginary part of the root of the spectral curve
//! `s²ζ³ − s²ζ² + sζ − 1/4 = 0` that lies in the upper half plane.

use super::gfun::QuadMeasure;
use super::{hard_edge_scale, DensityFn, EquilibriumSolution, GridMeasure};
use crate::error::{Error, Result};
use crate::mp::{neville_at_zero, quad_ts, solve_cubic, Precision};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};
use std::sync::Arc;

/// Right endpoint of the support, `27/8`.
pub const VX_Q: f64 = 3.375;
/// `√3 / (2^{5/3} π)`, the coefficient of `s^{-2/3}` at the origin.
pub const VX_C0: f64 = 0.173_657_720_189_301_24;
/// `16√2 / (81π)`, the coefficient of `(q − s)^{1/2}` at the soft edge.
pub const VX_C1: f64 = 0.088_920_129_990_825_29;

fn support_end(bits: u32) -> Float {
    Float::with_val(bits, 27) / 8u32
}

/// The closed-form density at `0 < s < 27/8`.
///
/// Both bracket terms are real cube roots; near the soft edge the first
/// radicand is negative and its real cube root is used. The product of the
/// two radicands is `(64/729) s (3 − s)³`, which recovers whichever of them
/// suffers cancellation.
pub fn density_vx_explicit(s: &Float, prec: Precision) -> Result<Float> {
    let work = prec.plus(10);
    let bits = work.bits();
    let s = Float::with_val(bits, s);
    if !(s > 0) || !(s < support_end(bits)) {
        return Err(Error::Domain(format!(
            "density for V(x) = x needs 0 < s < 27/8, got {s}"
        )));
    }
    let s2 = Float::with_val(bits, s.square_ref());
    let a = Float::with_val(bits, 1) - Float::with_val(bits, &s * 4u32) / 3u32 + s2 * 8u32 / 27u32;
    let r = (Float::with_val(bits, 1) - Float::with_val(bits, &s * 8u32) / 27u32).sqrt();
    let three_minus = Float::with_val(bits, 3 - &s);
    let prod = Float::with_val(bits, three_minus.square_ref()) * &three_minus * &s * 64u32 / 729u32;
    let mut plus = Float::with_val(bits, &a + &r);
    let mut minus = Float::with_val(bits, &r - &a);
    if plus.clone().abs() >= minus.clone().abs() {
        minus = Float::with_val(bits, &prod / &plus);
    } else {
        plus = Float::with_val(bits, &prod / &minus);
    }
    let bracket = plus.cbrt() + minus.cbrt();
    let pi = work.pi();
    let s23 = s.pow(Float::with_val(bits, 2) / 3u32);
    let out = bracket * Float::with_val(bits, 3).sqrt() / (pi * 4u32 * s23);
    Ok(prec.real(&out))
}

/// Coefficients `(s², −s², s, −1/4)` of the spectral curve at `s`.
fn curve_coefficients(s: &Complex) -> [Complex; 4] {
    let bits = s.prec().0;
    let s2 = Complex::with_val(bits, s.square_ref());
    [
        s2.clone(),
        -s2,
        s.clone(),
        Complex::with_val(bits, (-0.25, 0)),
    ]
}

/// The three roots `ζ` of `s²ζ³ − s²ζ² + sζ − 1/4 = 0`.
pub fn spectral_curve_roots(s: &Complex, prec: Precision) -> Result<[Complex; 3]> {
    let [c3, c2, c1, c0] = curve_coefficients(&Complex::with_val(prec.plus(10).bits(), s));
    solve_cubic(&c3, &c2, &c1, &c0, prec)
}

/// Discriminant `18abcd − 4b³d + b²c² − 4ac³ − 27a²d²` of the spectral
/// curve as a cubic in `ζ`.
pub fn spectral_curve_discriminant(s: &Float) -> Float {
    let bits = s.prec() + 16;
    let [a, b, c, d] = curve_coefficients(&Complex::with_val(bits, s)).map(|v| v.real().clone());
    let t1 = Float::with_val(bits, &a * &b) * &c * &d * 18u32;
    let b2 = Float::with_val(bits, b.square_ref());
    let t2 = Float::with_val(bits, &b2 * &b) * &d * 4u32;
    let t3 = b2.clone() * Float::with_val(bits, c.square_ref());
    let t4 = Float::with_val(bits, c.square_ref()) * &c * &a * 4u32;
    let t5 = Float::with_val(bits, a.square_ref()) * Float::with_val(bits, d.square_ref()) * 27u32;
    t1 - t2 + t3 - t4 - t5
}

/// The density as `Im ζ₀(s) / π`, where `ζ₀` is the root in the upper half
/// plane. Outside the support all three roots are real and a
/// [`Error::BranchSelection`] is returned.
pub fn density_vx_cardano(s: &Float, prec: Precision) -> Result<Float> {
    let work = prec.plus(10);
    let roots = spectral_curve_roots(&work.complex(s), work)?;
    let tiny = work.ten_pow_neg(20);
    let best = roots
        .iter()
        .max_by(|a, b| a.imag().partial_cmp(b.imag()).unwrap())
        .expect("three roots");
    if !(*best.imag() > tiny) {
        return Err(Error::BranchSelection(s.to_string()));
    }
    Ok(prec.real(best.imag()) / prec.pi())
}

/// `lim_{s→0+} s^{2/3} ρ(s)` by polynomial extrapolation in `s^{1/3}`
/// from samples `s = s_max 8^{-k}`, `k = 0..8`.
pub fn fit_origin_constant(
    density: impl Fn(&Float, Precision) -> Result<Float>,
    s_max: f64,
    prec: Precision,
) -> Result<f64> {
    let bits = prec.bits();
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for k in 0..8 {
        let s = Float::with_val(bits, s_max) / Float::with_val(bits, 8u32).pow(k as u32);
        let rho = density(&s, prec)?;
        let t = Float::with_val(bits, s.cbrt_ref());
        let v = rho * Float::with_val(bits, t.square_ref());
        ts.push(t.to_f64());
        vs.push(v.to_f64());
    }
    Ok(neville_at_zero(&ts, &vs))
}

/// `lim_{s→q−} ρ(s) / (q − s)^{1/2}` by polynomial extrapolation in `q − s`
/// from samples `q − s = d_max 2^{-k}`, `k = 0..8`.
pub fn fit_edge_constant(
    density: impl Fn(&Float, Precision) -> Result<Float>,
    q: &Float,
    d_max: f64,
    prec: Precision,
) -> Result<f64> {
    let bits = prec.bits();
    let mut ds = Vec::new();
    let mut vs = Vec::new();
    for k in 0..8u32 {
        let d = Float::with_val(bits, d_max) / Float::with_val(bits, 2u32).pow(k);
        let s = Float::with_val(bits, q - &d);
        let rho = density(&s, prec)?;
        vs.push((rho / Float::with_val(bits, d.sqrt_ref())).to_f64());
        ds.push(d.to_f64());
    }
    Ok(neville_at_zero(&ds, &vs))
}

/// The exact solution for `V(x) = x`, discretized on `m` equal cells of
/// `[0, 27/8]` with exact cell masses.
pub fn solution_vx_explicit(m: usize, prec: Precision) -> Result<EquilibriumSolution> {
    if m < 4 {
        return Err(Error::Domain("at least four cells are required".into()));
    }
    let bits = prec.bits();
    let q = support_end(bits);
    let edges = GridMeasure::uniform_edges(VX_Q, m, prec);
    let weights = (0..m)
        .into_par_iter()
        .map(|i| {
            let v = quad_ts(
                |s: &Float| {
                    Complex::with_val(
                        bits,
                        density_vx_explicit(s, prec).unwrap_or_else(|_| Float::new(bits)),
                    )
                },
                &edges[i],
                &edges[i + 1],
                10,
                prec,
            )?;
            Ok(v.real().clone())
        })
        .collect::<Result<Vec<Float>>>()?;
    let mu = GridMeasure::new(edges, weights)?;

    let density = DensityFn(Arc::new(density_vx_explicit));
    let c0 = prec.real(fit_origin_constant(density_vx_explicit, 1e-3, prec)?);
    let c1 = prec.real(fit_edge_constant(density_vx_explicit, &q, 1e-3, prec)?);
    let c_v = hard_edge_scale(&c0);

    // ℓ as a trimmed mean of U(x) − x over interior nodes.
    let meas = QuadMeasure::new(density.clone(), q.clone(), prec);
    let mut defects = Vec::new();
    for k in 1..20u32 {
        let x = Float::with_val(bits, &q * k) / 20u32;
        let u = meas.log_potential(&x)?;
        defects.push(u - x);
    }
    let ell = trimmed_mean(defects, prec);

    Ok(EquilibriumSolution {
        mu,
        q,
        ell,
        c0,
        c1,
        c_v,
        density: Some(density),
        iterations: 0,
        objective_history: Vec::new(),
        warnings: Vec::new(),
    })
}

/// Mean after dropping the lowest and highest 10% of the values.
pub(crate) fn trimmed_mean(mut v: Vec<Float>, prec: Precision) -> Float {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cut = v.len() / 10;
    let kept = &v[cut..v.len() - cut];
    let sum = Float::with_val(prec.bits(), Float::sum(kept.iter()));
    sum / kept.len() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(30).unwrap()
    }

    #[test]
    fn constants_match_their_closed_forms() {
        let pr = p();
        let pi = pr.pi();
        let root3 = pr.real(3).sqrt();
        let two53 = pr.real(2).pow(pr.real(5) / 3u32);
        let c0 = Float::with_val(pr.bits(), &root3 / &two53) / &pi;
        assert!((c0.to_f64() - VX_C0).abs() < 1e-16);
        let c1 = pr.real(2).sqrt() * 16u32 / (pi * 81u32);
        assert!((c1.to_f64() - VX_C1).abs() < 1e-16);
    }

    #[test]
    fn cardano_matches_closed_form() {
        let pr = p();
        for s in [0.1, 1.0, 3.0, 1e-6, 3.37] {
            let s = pr.real(s);
            let a = density_vx_explicit(&s, pr).unwrap();
            let b = density_vx_cardano(&s, pr).unwrap();
            let rel = ((a.clone() - b) / a).abs().to_f64();
            assert!(rel < 1e-20, "s = {s}: {rel}");
        }
    }

    #[test]
    fn discriminant_changes_sign_at_the_soft_edge() {
        let pr = p();
        for s in [0.5, 2.0, 3.375, 4.0] {
            let s = pr.real(s);
            let d = spectral_curve_discriminant(&s);
            let s4 = Float::with_val(pr.bits(), s.square_ref()).square();
            let expect = s4 * (Float::with_val(pr.bits(), &s * 8u32) - 27u32) / 16u32;
            assert!((d - expect).abs().to_f64() < 1e-25);
        }
        assert!(spectral_curve_discriminant(&pr.real(3.3)) < 0);
        assert!(spectral_curve_discriminant(&pr.real(3.4)) > 0);
    }

    #[test]
    fn outside_the_support_all_roots_are_real() {
        let pr = p();
        let s = pr.real(4);
        for r in spectral_curve_roots(&pr.complex(&s), pr).unwrap() {
            assert!(r.imag().clone().abs().to_f64() < 1e-25);
        }
        assert!(matches!(
            density_vx_cardano(&s, pr),
            Err(Error::BranchSelection(_))
        ));
        let one = pr.real(1);
        let roots = spectral_curve_roots(&pr.complex(&one), pr).unwrap();
        let real = roots
            .iter()
            .filter(|r| r.imag().clone().abs().to_f64() < 1e-25)
            .count();
        assert_eq!(real, 1);
    }

    #[test]
    fn explicit_density_domain() {
        let pr = p();
        assert!(density_vx_explicit(&pr.real(0), pr).is_err());
        assert!(density_vx_explicit(&pr.real(3.375), pr).is_err());
    }

    #[test]
    fn density_is_a_probability_density() {
        let pr = p();
        let bits = pr.bits();
        let total = quad_ts(
            |s: &Float| Complex::with_val(bits, density_vx_explicit(s, pr).unwrap()),
            &pr.real(0),
            &support_end(bits),
            12,
            pr,
        )
        .unwrap();
        assert!((total.real().to_f64() - 1.0).abs() < 1e-18);
    }

    #[test]
    fn endpoint_constants_by_extrapolation() {
        let pr = p();
        let c0 = fit_origin_constant(density_vx_explicit, 1e-3, pr).unwrap();
        assert!((c0 - VX_C0).abs() < 1e-10, "{c0}");
        let c1 = fit_edge_constant(density_vx_explicit, &support_end(pr.bits()), 1e-3, pr).unwrap();
        assert!((c1 - VX_C1).abs() < 1e-10, "{c1}");
    }

    #[test]
    fn explicit_solution_is_consistent() {
        let pr = p();
        let sol = solution_vx_explicit(200, pr).unwrap();
        assert!((sol.mu.mass.to_f64() - 1.0).abs() < 1e-12);
        assert!((sol.c_v.to_f64() - 2f64.powf(-2.0 / 3.0)).abs() < 1e-10);
        assert!(sol.ell.to_f64().is_finite());
    }
}

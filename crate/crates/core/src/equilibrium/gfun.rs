//! g-functions, the phase functions built from them and the conformal map
//! at the hard edge.

use super::cells::{log_avg_c, log_side, sqrt_avg, sum_log_avg_c};
use super::{
    hard_edge_scale, DensityFn, EquilibriumSolution, ExternalField, GridMeasure, HalfPlane,
};
use crate::error::Result;
use crate::mp::{quad_ts, Precision};
use rug::{Complex, Float};
use std::sync::Arc;

const QUAD_LEVELS: usize = 12;

/// A measure on `[0, q]` given by an exact density, integrated by
/// tanh-sinh quadrature split at the singular points of the integrand.
#[derive(Clone, Debug)]
pub(crate) struct QuadMeasure {
    density: DensityFn,
    q: Float,
    prec: Precision,
}

impl QuadMeasure {
    pub(crate) fn new(density: DensityFn, q: Float, prec: Precision) -> Self {
        QuadMeasure { density, q, prec }
    }

    /// `∫₀^q f(s) ρ(s) ds`, split at every point of `splits` inside `(0, q)`.
    pub(crate) fn integrate<F>(&self, mut f: F, splits: &[Float]) -> Result<Complex>
    where
        F: FnMut(&Float) -> Complex,
    {
        let prec = self.prec;
        let bits = prec.bits();
        let mut pts = vec![prec.real(0)];
        let mut inner: Vec<Float> = splits
            .iter()
            .filter(|s| **s > 0 && **s < self.q)
            .cloned()
            .collect();
        inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.extend(inner);
        pts.push(self.q.clone());
        let mut total = Complex::new(bits);
        for w in pts.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let mut failed = None;
            let part = quad_ts(
                |s: &Float| match (self.density.0)(s, prec) {
                    Ok(rho) => f(s) * rho,
                    Err(e) => {
                        failed.get_or_insert(e);
                        Complex::new(bits)
                    }
                },
                &w[0],
                &w[1],
                QUAD_LEVELS,
                prec,
            )?;
            if let Some(e) = failed {
                return Err(e);
            }
            total += part;
        }
        Ok(total)
    }

    /// `∫ (ln|x − s| + ln|√x − √s|) ρ(s) ds` for real `x > 0`.
    pub(crate) fn log_potential(&self, x: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        let rx = Float::with_val(bits, x.sqrt_ref());
        let v = self.integrate(
            |s: &Float| {
                let d = Float::with_val(bits, x - s).abs().ln();
                let e = (Float::with_val(bits, s.sqrt_ref()) - &rx).abs().ln();
                Complex::with_val(bits, d + e)
            },
            std::slice::from_ref(x),
        )?;
        Ok(v.real().clone())
    }
}

#[derive(Clone, Debug)]
enum Source {
    Exact(QuadMeasure),
    Grid(GridMeasure),
}

/// Evaluators for `g₁`, `g₂` and the functions derived from them.
///
/// Points on the real axis take their boundary value from the given
/// [`HalfPlane`]; off the axis the half plane is that of the point.
#[derive(Clone)]
pub struct GFunctions {
    source: Source,
    field: Arc<dyn ExternalField>,
    pub q: Float,
    pub ell: Float,
    /// `∫ s dμ(s)`.
    pub m1: Float,
    /// `∫ √s dμ(s)`.
    pub m_half: Float,
    prec: Precision,
}

impl std::fmt::Debug for GFunctions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GFunctions")
            .field("field", &self.field.name())
            .field("q", &self.q)
            .field("ell", &self.ell)
            .field("m1", &self.m1)
            .field("m_half", &self.m_half)
            .finish()
    }
}

/// Builds the g-functions of a solution. With an exact density all
/// integrals are done by quadrature; otherwise the cell representation is
/// integrated in closed form.
pub fn g_functions(
    sol: &EquilibriumSolution,
    field: Arc<dyn ExternalField>,
    prec: Precision,
) -> Result<GFunctions> {
    let bits = prec.bits();
    let (source, m1, m_half) = match &sol.density {
        Some(d) => {
            let meas = QuadMeasure::new(d.clone(), prec.real(&sol.q), prec);
            let m1 = meas.integrate(|s| Complex::with_val(bits, s), &[])?;
            let mh = meas.integrate(|s| Complex::with_val(bits, s.sqrt_ref()), &[])?;
            (Source::Exact(meas), m1.real().clone(), mh.real().clone())
        }
        None => {
            let mu = &sol.mu;
            let mut m1 = prec.real(0);
            let mut mh = prec.real(0);
            for (i, w) in mu.weights.iter().enumerate() {
                m1 += Float::with_val(bits, w * &mu.nodes[i]);
                mh += sqrt_avg(&prec.real(&mu.edges[i]), &prec.real(&mu.edges[i + 1])) * w;
            }
            (Source::Grid(mu.clone()), m1, mh)
        }
    };
    Ok(GFunctions {
        source,
        field,
        q: prec.real(&sol.q),
        ell: prec.real(&sol.ell),
        m1,
        m_half,
        prec,
    })
}

impl GFunctions {
    pub fn precision(&self) -> Precision {
        self.prec
    }

    fn at(&self, z: &Complex) -> Complex {
        self.prec.complex(z)
    }

    /// `g₁(z) = ∫ log(z − s) dμ(s)`.
    pub fn g1(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let z = self.at(z);
        let side = HalfPlane::of(&z, side);
        let bits = self.prec.bits();
        match &self.source {
            Source::Exact(m) => m.integrate(
                |s| log_side(&Complex::with_val(bits, &z - s), side),
                &[z.real().clone()],
            ),
            Source::Grid(mu) => {
                let mut acc = Complex::new(bits);
                for (i, w) in mu.weights.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    acc += log_avg_c(&z, &mu.edges[i], &mu.edges[i + 1], side) * w;
                }
                Ok(acc)
            }
        }
    }

    /// `z^{1/2}` with the boundary value from `side` on the negative axis.
    fn sqrt_side(&self, z: &Complex, side: HalfPlane) -> Complex {
        let half = self.prec.real(0.5);
        self.power_side(z, &half, side)
    }

    /// `z^p` by the principal branch, boundary values on `(−∞, 0)` from `side`.
    fn power_side(&self, z: &Complex, p: &Float, side: HalfPlane) -> Complex {
        let bits = self.prec.bits();
        if z.is_zero() {
            return Complex::new(bits);
        }
        let l = log_side(z, side);
        Complex::with_val(bits, l * p).exp()
    }

    /// `g₂(z) = ∫ log(z^{1/2} + √t) dμ(t)`, the compact form of the
    /// logarithmic transform of the balayage measure on `(−∞, 0]`.
    pub fn g2(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let z = self.at(z);
        let side = HalfPlane::of(&z, side);
        let bits = self.prec.bits();
        let c = self.sqrt_side(&z, side);
        match &self.source {
            Source::Exact(m) => m.integrate(
                |t| Complex::with_val(bits, &c + Float::with_val(bits, t.sqrt_ref())).ln(),
                &[],
            ),
            Source::Grid(mu) => {
                let mut acc = Complex::new(bits);
                for (i, w) in mu.weights.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    acc += sum_log_avg_c(&c, &mu.edges[i], &mu.edges[i + 1]) * w;
                }
                Ok(acc)
            }
        }
    }

    /// `φ = −g₁ + g₂/2 + (V + ℓ)/2`.
    pub fn phi(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let z = self.at(z);
        let g1 = self.g1(&z, side)?;
        let g2 = self.g2(&z, side)?;
        let v = self.field.eval(&z);
        Ok(-g1 + g2 / 2u32 + (v + &self.ell) / 2u32)
    }

    fn pi_i(&self, scale: i32, side: HalfPlane) -> Complex {
        let pi = self.prec.pi() * scale * side.sign();
        Complex::with_val(self.prec.bits(), (0, pi))
    }

    /// `φ₁ = φ ± πi` in the upper and lower half planes.
    pub fn phi1(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let side = HalfPlane::of(z, side);
        Ok(self.phi(z, side)? + self.pi_i(1, side))
    }

    /// `φ₂ = −g₂ + g₁/2 ∓ πi/2` in the upper and lower half planes.
    pub fn phi2(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let side = HalfPlane::of(z, side);
        let g1 = self.g1(z, side)?;
        let g2 = self.g2(z, side)?;
        Ok(-g2 + g1 / 2u32 - self.pi_i(1, side) / 2u32)
    }

    fn omega(&self, k: u32) -> Complex {
        let t = self.prec.pi() * 2u32 * k / 3u32;
        self.prec.cis(&t)
    }

    /// `(ω^a φ₁, φ₂)` with `a = 2` above the axis and `a = 1` below, plus
    /// the same with the exponents swapped.
    fn rotated_phis(&self, z: &Complex, side: HalfPlane) -> Result<(Complex, Complex, Complex)> {
        let side = HalfPlane::of(z, side);
        let p1 = self.phi1(z, side)?;
        let p2 = self.phi2(z, side)?;
        let (first, second) = match side {
            HalfPlane::Upper => (self.omega(2), self.omega(1)),
            HalfPlane::Lower => (self.omega(1), self.omega(2)),
        };
        Ok((first * &p1, second * p1, p2))
    }

    /// `f₁ = −z^{-1/3}(−ω²φ₁ + φ₂)` above the axis, `ω² → ω` below.
    pub fn f1(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let z = self.at(z);
        let side = HalfPlane::of(&z, side);
        let (a, _, p2) = self.rotated_phis(&z, side)?;
        let zp = self.power_side(&z, &(self.prec.real(-1) / 3u32), side);
        Ok(-(zp * (p2 - a)))
    }

    /// `f₂ = −z^{-2/3}(−ωφ₁ + φ₂)` above the axis, `ω → ω²` below.
    pub fn f2(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let z = self.at(z);
        let side = HalfPlane::of(&z, side);
        let (_, b, p2) = self.rotated_phis(&z, side)?;
        let zp = self.power_side(&z, &(self.prec.real(-2) / 3u32), side);
        Ok(-(zp * (p2 - b)))
    }

    /// The conformal map `f = (8/729)(ω²φ₁ − φ₂)³` above the axis,
    /// `ω² → ω` below.
    pub fn f(&self, z: &Complex, side: HalfPlane) -> Result<Complex> {
        let z = self.at(z);
        let (a, _, p2) = self.rotated_phis(&z, side)?;
        let d = a - p2;
        let d3 = Complex::with_val(self.prec.bits(), d.square_ref()) * &d;
        Ok(d3 * 8u32 / 729u32)
    }

    /// `μ([0, x])`.
    pub fn cumulative(&self, x: &Float) -> Result<Float> {
        let bits = self.prec.bits();
        match &self.source {
            Source::Exact(m) => {
                let x = self.prec.real(x);
                let v = m.integrate(
                    |s| Complex::with_val(bits, if *s < x { 1 } else { 0 }),
                    std::slice::from_ref(&x),
                )?;
                Ok(v.real().clone())
            }
            Source::Grid(mu) => Ok(self.prec.real(mu.cumulative(x.to_f64()))),
        }
    }
}

/// The hard-edge scale and the conformal map's data at the origin.
#[derive(Clone, Debug)]
pub struct ScalingConstants {
    /// `c_V = (2π/√3) c0`.
    pub c_v: Float,
    /// `f₁(0)`, the mean of `f₁` over a small circle.
    pub f1_at_0: Float,
    /// `f′(0)` by a central difference at `±10⁻³`.
    pub fprime_at_0: Float,
}

/// Computes `c_V`, `f₁(0)` and `f′(0)`.
///
/// `f₁` extends analytically across the real axis near 0, so its value at
/// the origin is the mean over a circle, which the trapezoidal rule gets to
/// exponential accuracy.
pub fn scaling_constants(gf: &GFunctions, sol: &EquilibriumSolution) -> Result<ScalingConstants> {
    let prec = gf.prec;
    let bits = prec.bits();
    let c_v = hard_edge_scale(&prec.real(&sol.c0));

    let radius = prec.real(0.25) * Float::with_val(bits, gf.q.clone().min(&prec.real(1)));
    let n = 24u32;
    let mut acc = Complex::new(bits);
    for k in 0..n {
        let t = prec.pi() * (2 * k + 1) / n;
        let z = prec.cis(&t) * &radius;
        acc += gf.f1(&z, HalfPlane::Upper)?;
    }
    let f1_at_0 = Float::with_val(bits, acc.real() / n);

    let h = prec.real(1e-3);
    let zp = Complex::with_val(bits, (&h, 0));
    let zm = Complex::with_val(bits, (-h.clone(), 0));
    let fp = gf.f(&zp, HalfPlane::Upper)?;
    let fm = gf.f(&zm, HalfPlane::Upper)?;
    let fprime_at_0 = Float::with_val(bits, (fp - fm).real()) / (h * 2u32);

    Ok(ScalingConstants {
        c_v,
        f1_at_0,
        fprime_at_0,
    })
}

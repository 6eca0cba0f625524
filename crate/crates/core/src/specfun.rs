//! Power series for `0F2`, Wright's generalized Bessel function and the
//! Frobenius solution bases of the forward and adjoint third-order ODEs
//!
//! ```text
//! θ(θ + α)(θ + α + 1/2) φ + z φ = 0,     θ(θ - α)(θ - α - 1/2) ψ = z ψ,
//! ```
//!
//! with `θ = z d/dz`.

use crate::error::{Error, Result};
use crate::mp::{cabs, log10_abs, log10_float, rgamma_real, Precision};
use rug::{Complex, Float};

/// Lower parameters of `0F2(; b1, b2; z)`.
#[derive(Clone, Debug)]
pub struct Hyper0F2Params {
    pub b1: Float,
    pub b2: Float,
}

impl Hyper0F2Params {
    pub fn new(b1: Float, b2: Float) -> Result<Self> {
        for b in [&b1, &b2] {
            if *b <= 0 && b.is_integer() {
                return Err(Error::Domain(format!(
                    "0F2 lower parameter {b} is a nonpositive integer"
                )));
            }
        }
        Ok(Hyper0F2Params { b1, b2 })
    }
}

/// Parameters `(a, b)` of `J_{a,b}(x) = Σ (-x)^j / (j! Γ(a + b j))`.
#[derive(Clone, Debug)]
pub struct WrightParams {
    pub a: Float,
    pub b: Float,
}

const QUIET_TERMS: usize = 30;
const MAX_TERMS: usize = 200_000;

/// Sum of a `0F2` series together with its `θ`-weighted companions.
#[derive(Clone, Debug)]
pub(crate) struct SeriesJet {
    /// `Σ t_m (e + m)^j` for `j = 0, 1, 2`.
    pub sums: [Complex; 3],
    /// `log10` of the largest weighted term, for cancellation estimates.
    pub peak_log10: f64,
}

impl SeriesJet {
    /// Digits lost to cancellation in the weighted sum `j`.
    pub fn lost_digits(&self, j: usize) -> f64 {
        (self.peak_log10 - log10_abs(&self.sums[j])).max(0.0)
    }
}

/// Sums `Σ_m x^m / (m! (c1)_m (c2)_m)` and the same series with term `m`
/// weighted by `(e + m)` and `(e + m)^2`.
///
/// Summation stops once 30 consecutive weighted terms fall below
/// `10^(-digits-5)` relative to the running sums.
pub(crate) fn series_jet(
    c1: &Float,
    c2: &Float,
    e: &Float,
    x: &Complex,
    work: Precision,
) -> Result<SeriesJet> {
    let bits = work.bits();
    let tiny = work.ten_pow_neg(work.digits() as i32 + 5);
    let mut term = Complex::with_val(bits, 1);
    let mut sums = [Complex::new(bits), Complex::new(bits), Complex::new(bits)];
    let mut peak = f64::NEG_INFINITY;
    let mut quiet = 0;
    let x = Complex::with_val(bits, x);
    let mut q1 = Float::with_val(bits, c1);
    let mut q2 = Float::with_val(bits, c2);
    for m in 0..MAX_TERMS {
        if m > 0 {
            // t_m = t_{m-1} x / (m (c1 + m - 1) (c2 + m - 1))
            let denom = Float::with_val(bits, &q1 * &q2) * m as u32;
            term *= &x;
            term /= &denom;
            q1 += 1u32;
            q2 += 1u32;
        }
        let w = Float::with_val(bits, e + m as u32);
        let t1 = Complex::with_val(bits, &term * &w);
        let t2 = Complex::with_val(bits, &t1 * &w);
        let mag = cabs(&term)
            * Float::with_val(bits, w.abs_ref())
                .max(&Float::with_val(bits, 1))
                .square();
        let lm = log10_float(&mag);
        if lm > peak {
            peak = lm;
        }
        sums[0] += &term;
        sums[1] += t1;
        sums[2] += t2;

        let scale = sums
            .iter()
            .map(cabs)
            .fold(Float::new(bits), |a, b| a.max(&b));
        if mag <= Float::with_val(bits, &scale * &tiny) || term.is_zero() {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(SeriesJet {
                    sums,
                    peak_log10: peak,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::SeriesConvergence(MAX_TERMS))
}

/// Runs `eval` with 10 guard digits and, when the returned estimate of lost
/// digits eats into the guard, once more with the loss added.
pub(crate) fn with_cancellation_guard<T>(
    prec: Precision,
    mut eval: impl FnMut(Precision) -> Result<(T, f64)>,
) -> Result<T> {
    let guard = 10u32;
    let (value, lost) = eval(prec.plus(guard))?;
    if lost <= guard as f64 - 3.0 {
        return Ok(value);
    }
    let (value, _) = eval(prec.plus(guard + lost.ceil() as u32 + 5))?;
    Ok(value)
}

/// `0F2(; b1, b2; z)`, an entire function of `z`.
pub fn hyper0f2(p: &Hyper0F2Params, z: &Complex, prec: Precision) -> Result<Complex> {
    let v = with_cancellation_guard(prec, |work| {
        let e = work.real(0);
        let jet = series_jet(&p.b1, &p.b2, &e, z, work)?;
        let lost = jet.lost_digits(0);
        Ok((jet.sums[0].clone(), lost))
    })?;
    Ok(Complex::with_val(prec.bits(), v))
}

/// Wright's generalized Bessel function with coefficients cached for
/// repeated evaluation at fixed parameters.
#[derive(Clone, Debug)]
pub struct WrightBessel {
    coeffs: Vec<Float>,
    work: Precision,
    prec: Precision,
}

impl WrightBessel {
    /// Prepares evaluation on the disc `|x| <= radius`.
    pub fn new(p: &WrightParams, radius: f64, prec: Precision) -> Result<Self> {
        let b = p.b.to_f64();
        if b <= 0.0 {
            return Err(Error::Domain("Wright parameter b must be positive".into()));
        }
        // The peak of Σ |c_j| r^j bounds the digits lost to cancellation.
        let probe = Self::build(p, radius, prec.plus(10))?;
        let peak = probe.peak_log10(radius);
        if peak <= 7.0 {
            return Ok(probe.with_output(prec));
        }
        Ok(Self::build(p, radius, prec.plus(15 + peak.ceil() as u32))?.with_output(prec))
    }

    fn build(p: &WrightParams, radius: f64, work: Precision) -> Result<Self> {
        let bits = work.bits();
        let tiny = work.ten_pow_neg(work.digits() as i32 + 5);
        let r = Float::with_val(bits, radius.max(1.0));
        let mut coeffs = Vec::new();
        let mut fact = Float::with_val(bits, 1);
        let mut rpow = Float::with_val(bits, 1);
        let mut peak = Float::new(bits);
        let mut quiet = 0;
        for j in 0..MAX_TERMS {
            if j > 0 {
                fact *= j as u32;
                rpow *= &r;
            }
            let arg = Float::with_val(bits, &p.b * j as u32) + &p.a;
            let c = rgamma_real(&arg, work) / &fact;
            let mag = Float::with_val(bits, c.abs_ref()) * &rpow;
            if mag > peak {
                peak = mag.clone();
            }
            coeffs.push(c);
            if mag <= Float::with_val(bits, &peak * &tiny) {
                quiet += 1;
                if quiet >= QUIET_TERMS {
                    return Ok(WrightBessel {
                        coeffs,
                        work,
                        prec: work,
                    });
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::SeriesConvergence(MAX_TERMS))
    }

    fn peak_log10(&self, radius: f64) -> f64 {
        let r = radius.max(1.0).log10();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| log10_float(c) + j as f64 * r)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `J_{a,b}(x)`; `x` should lie in the disc given at construction.
    pub fn eval(&self, x: &Complex) -> Complex {
        let bits = self.work.bits();
        let mx = -Complex::with_val(bits, x);
        let mut acc = Complex::new(bits);
        for c in self.coeffs.iter().rev() {
            acc *= &mx;
            acc += c;
        }
        Complex::with_val(self.prec.bits(), acc)
    }

    /// Real-argument convenience wrapper.
    pub fn eval_real(&self, x: &Float) -> Float {
        let z = Complex::with_val(self.work.bits(), x);
        let v = self.eval(&z);
        Float::with_val(self.prec.bits(), v.real())
    }

    fn with_output(mut self, prec: Precision) -> Self {
        self.prec = prec;
        self
    }
}

/// `J_{a,b}(x) = Σ (-x)^j / (j! Γ(a + b j))`, with `1/Γ` taken as zero at
/// its poles.
pub fn wright_bessel(p: &WrightParams, x: &Complex, prec: Precision) -> Result<Complex> {
    let radius = cabs(x).to_f64();
    Ok(WrightBessel::new(p, radius, prec)?.eval(x))
}

pub(crate) fn check_non_resonant(alpha: &Float) -> Result<()> {
    let two_a = Float::with_val(alpha.prec(), alpha * 2u32);
    let dist = (two_a.clone() - two_a.round()).abs();
    if dist < 1e-6 {
        return Err(Error::Resonance(format!(
            "2α = {} is within 1e-6 of an integer",
            alpha.to_f64() * 2.0
        )));
    }
    Ok(())
}

/// Principal power `z^e`.
pub(crate) fn cpow(z: &Complex, e: &Float) -> Complex {
    let bits = z.prec().0;
    (Complex::with_val(bits, z.ln_ref()) * e).exp()
}

/// Frobenius basis at the origin of `θ(θ + α)(θ + α + 1/2) φ + z φ = 0`:
/// `0F2(1+α, 3/2+α; -z)`, `z^{-α} 0F2(1-α, 3/2; -z)` and
/// `z^{-α-1/2} 0F2(1/2-α, 1/2; -z)`, on principal branches.
pub fn frobenius_forward(alpha: &Float, z: &Complex, prec: Precision) -> Result<[Complex; 3]> {
    check_non_resonant(alpha)?;
    let work = prec.plus(5);
    let a = work.real(alpha);
    let half = work.real(0.5);
    let one = work.real(1);
    let mz = -Complex::with_val(work.bits(), z);
    let f = |b1: Float, b2: Float| hyper0f2(&Hyper0F2Params::new(b1, b2)?, &mz, work);
    let s0 = f(
        Float::with_val(work.bits(), &one + &a),
        Float::with_val(work.bits(), &a + 1.5),
    )?;
    let s1 = f(Float::with_val(work.bits(), &one - &a), work.real(1.5))?;
    let s2 = f(Float::with_val(work.bits(), &half - &a), half.clone())?;
    let p1 = cpow(
        &Complex::with_val(work.bits(), z),
        &Float::with_val(work.bits(), -&a),
    );
    let p2 = cpow(
        &Complex::with_val(work.bits(), z),
        &(-(Float::with_val(work.bits(), &a + &half))),
    );
    Ok([s0, s1 * p1, s2 * p2].map(|v| Complex::with_val(prec.bits(), v)))
}

/// Frobenius basis at the origin of the adjoint equation
/// `θ(θ - α)(θ - α - 1/2) ψ = z ψ`: `0F2(1-α, 1/2-α; z)`,
/// `z^α 0F2(1+α, 1/2; z)` and `z^{α+1/2} 0F2(3/2+α, 3/2; z)`.
pub fn frobenius_adjoint(alpha: &Float, z: &Complex, prec: Precision) -> Result<[Complex; 3]> {
    check_non_resonant(alpha)?;
    let work = prec.plus(5);
    let a = work.real(alpha);
    let half = work.real(0.5);
    let one = work.real(1);
    let zz = Complex::with_val(work.bits(), z);
    let f = |b1: Float, b2: Float| hyper0f2(&Hyper0F2Params::new(b1, b2)?, &zz, work);
    let s0 = f(
        Float::with_val(work.bits(), &one - &a),
        Float::with_val(work.bits(), &half - &a),
    )?;
    let s1 = f(Float::with_val(work.bits(), &one + &a), half.clone())?;
    let s2 = f(Float::with_val(work.bits(), &a + 1.5), work.real(1.5))?;
    if zz.is_zero() {
        let zero = || prec.complex(0);
        return Ok([Complex::with_val(prec.bits(), s0), zero(), zero()]);
    }
    let p1 = cpow(&zz, &a);
    let p2 = cpow(&zz, &Float::with_val(work.bits(), &a + &half));
    Ok([s0, s1 * p1, s2 * p2].map(|v| Complex::with_val(prec.bits(), v)))
}

/// `1 / (Γ(1+α) Γ(3/2+α))`, the normalization linking `φ4` and `0F2`.
#[cfg(test)]
pub(crate) fn phi0_normalization(alpha: &Float, prec: Precision) -> Result<Float> {
    use crate::mp::gamma_real;
    let g1 = gamma_real(&(prec.real(alpha) + 1u32), prec)?;
    let g2 = gamma_real(&(prec.real(alpha) + 1.5), prec)?;
    Ok(1 / (g1 * g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::rel_diff;
    use rug::ops::Pow;

    fn p40() -> Precision {
        Precision::new(40).unwrap()
    }

    /// θ^k f(z) by central differences in log z: θ = d/dt for z = e^t.
    fn theta_fd(f: &dyn Fn(&Complex) -> Complex, z: &Complex, k: usize, p: Precision) -> Complex {
        let h = p.parse("1e-6").unwrap();
        let lz = Complex::with_val(p.bits(), z.ln_ref());
        // Seven-point stencils: first, second and third derivatives.
        let at = |j: i32| {
            let t = Complex::with_val(p.bits(), &lz + Float::with_val(p.bits(), &h * j));
            f(&t.exp())
        };
        let v: Vec<Complex> = (-3..=3).map(at).collect();
        // Stencil weights must be exact: an f64 rounding of 1/60 would
        // swamp the differences.
        let c = |w: &[(i32, u32)]| {
            let mut acc = p.complex(0);
            for (vi, (num, den)) in v.iter().zip(w) {
                acc += Complex::with_val(p.bits(), vi * *num) / *den;
            }
            acc
        };
        let hk = Float::with_val(p.bits(), (&h).pow(k as u32));
        match k {
            1 => {
                c(&[
                    (-1, 60),
                    (3, 20),
                    (-3, 4),
                    (0, 1),
                    (3, 4),
                    (-3, 20),
                    (1, 60),
                ]) / hk
            }
            2 => {
                c(&[
                    (1, 90),
                    (-3, 20),
                    (3, 2),
                    (-49, 18),
                    (3, 2),
                    (-3, 20),
                    (1, 90),
                ]) / hk
            }
            3 => c(&[(1, 8), (-1, 1), (13, 8), (0, 1), (-13, 8), (1, 1), (-1, 8)]) / hk,
            _ => unreachable!(),
        }
    }

    #[test]
    fn hyper0f2_at_zero() {
        let p = p40();
        let params = Hyper0F2Params::new(p.real(1), p.real(1.5)).unwrap();
        let v = hyper0f2(&params, &p.complex(0), p).unwrap();
        assert_eq!(v, p.complex(1));
    }

    #[test]
    fn hyper0f2_rejects_poles() {
        let p = p40();
        assert!(Hyper0F2Params::new(p.real(-2), p.real(1)).is_err());
    }

    #[test]
    fn hyper0f2_entire_along_square() {
        let p = p40();
        let params = Hyper0F2Params::new(p.parse("1.3").unwrap(), p.parse("1.8").unwrap()).unwrap();
        let corners = [
            (2.0, -2.0),
            (2.0, 2.0),
            (-2.0, 2.0),
            (-2.0, -2.0),
            (2.0, -2.0),
        ];
        let start = hyper0f2(&params, &p.complex(corners[0]), p).unwrap();
        // Walk the boundary in small steps; an entire function has no
        // monodromy so the value at the end equals the start.
        let mut last = start.clone();
        for w in corners.windows(2) {
            for k in 1..=8 {
                let t = k as f64 / 8.0;
                let z = p.complex((
                    w[0].0 + t * (w[1].0 - w[0].0),
                    w[0].1 + t * (w[1].1 - w[0].1),
                ));
                last = hyper0f2(&params, &z, p).unwrap();
            }
        }
        assert!(rel_diff(&last, &start) < 1e-20);
    }

    #[test]
    fn hyper0f2_large_argument_cancellation() {
        // 0F2(;1,1;-x) at large x suffers heavy cancellation; compare with a
        // direct evaluation at far higher precision.
        let p = p40();
        let params = Hyper0F2Params::new(p.real(1), p.real(1)).unwrap();
        let z = p.complex(-20000);
        let v = hyper0f2(&params, &z, p).unwrap();
        let hp = Precision::new(200).unwrap();
        let params_hp = Hyper0F2Params::new(hp.real(1), hp.real(1)).unwrap();
        let reference = series_jet(
            &params_hp.b1,
            &params_hp.b2,
            &hp.real(0),
            &hp.complex(-20000),
            hp,
        )
        .unwrap();
        assert!(rel_diff(&v, &Complex::with_val(p.bits(), &reference.sums[0])) < 1e-35);
    }

    #[test]
    fn wright_reduces_to_bessel_j0() {
        let p = p40();
        let params = WrightParams {
            a: p.real(1),
            b: p.real(1),
        };
        let v = wright_bessel(&params, &p.complex(1), p).unwrap();
        let expected = p.parse("0.22389077914123566805182745464994862582").unwrap();
        assert!(rel_diff(&v, &p.complex(expected)) < 1e-36);
        // J0(2 sqrt x) from its own series.
        for x in ["0.1", "1", "5"] {
            let xv = p.parse(x).unwrap();
            let mut acc = p.real(0);
            let mut term = p.real(1);
            for k in 0..80u32 {
                if k > 0 {
                    term = -term * &xv / (k * k);
                }
                acc += &term;
            }
            let v = wright_bessel(&params, &p.complex(&xv), p).unwrap();
            assert!(rel_diff(&v, &p.complex(acc)) < 1e-35, "x = {x}");
        }
    }

    #[test]
    fn wright_at_zero_is_reciprocal_gamma() {
        let p = p40();
        let a = p.parse("2.6").unwrap();
        let params = WrightParams {
            a: a.clone(),
            b: p.real(2),
        };
        let v = wright_bessel(&params, &p.complex(0), p).unwrap();
        assert!(rel_diff(&v, &p.complex(rgamma_real(&a, p))) < 1e-38);
        // Pole of 1/Γ at a = 0 is skipped: J_{0,1}(x) = -x J_{1,1}... via the j = 0 term.
        let params = WrightParams {
            a: p.real(0),
            b: p.real(1),
        };
        assert!(wright_bessel(&params, &p.complex(0), p).unwrap().is_zero());
    }

    fn forward_residual(alpha: &str, z: (f64, f64), idx: usize) -> f64 {
        let p = Precision::new(60).unwrap();
        let a = p.parse(alpha).unwrap();
        let f = |z: &Complex| frobenius_forward(&a, z, p).unwrap()[idx].clone();
        let z = p.complex(z);
        let phi = f(&z);
        let t1 = theta_fd(&f, &z, 1, p);
        let t2 = theta_fd(&f, &z, 2, p);
        let t3 = theta_fd(&f, &z, 3, p);
        // θ(θ+α)(θ+α+1/2) = θ^3 + (2α+1/2) θ^2 + α(α+1/2) θ
        let c2 = Float::with_val(p.bits(), &a * 2u32) + 0.5;
        let c1 = Float::with_val(p.bits(), &a * (Float::with_val(p.bits(), &a + 0.5)));
        let lhs = t3 + t2 * c2 + t1 * c1 + Complex::with_val(p.bits(), &z * &phi);
        let scale = cabs(&phi)
            .to_f64()
            .max(cabs(&Complex::with_val(p.bits(), &z * &phi)).to_f64());
        cabs(&lhs).to_f64() / scale
    }

    #[test]
    fn forward_basis_solves_the_ode() {
        // Seven-point differences with h = 1e-6 leave ~1e-24 truncation and
        // ~1e-42 rounding at 60 digits.
        for idx in 0..3 {
            assert!(forward_residual("0.3", (1.3, 0.0), idx) < 1e-20);
            assert!(forward_residual("-0.4", (0.6, 0.9), idx) < 1e-20);
            assert!(forward_residual("1.2", (-1.1, 0.4), idx) < 1e-20);
        }
    }

    #[test]
    fn adjoint_basis_solves_the_ode() {
        let p = Precision::new(60).unwrap();
        for (alpha, z) in [
            ("0.3", (0.7, 0.0)),
            ("0.7", (-0.5, 1.2)),
            ("-0.4", (1.5, -0.3)),
        ] {
            let a = p.parse(alpha).unwrap();
            for idx in 0..3 {
                let f = |z: &Complex| frobenius_adjoint(&a, z, p).unwrap()[idx].clone();
                let z = p.complex(z);
                let psi = f(&z);
                let t1 = theta_fd(&f, &z, 1, p);
                let t2 = theta_fd(&f, &z, 2, p);
                let t3 = theta_fd(&f, &z, 3, p);
                // θ(θ-α)(θ-α-1/2) = θ^3 - (2α+1/2) θ^2 + α(α+1/2) θ
                let c2 = Float::with_val(p.bits(), &a * 2u32) + 0.5;
                let c1 = Float::with_val(p.bits(), &a * (Float::with_val(p.bits(), &a + 0.5)));
                let lhs = t3 - t2 * c2 + t1 * c1 - Complex::with_val(p.bits(), &z * &psi);
                let scale = cabs(&psi)
                    .to_f64()
                    .max(cabs(&z).to_f64() * cabs(&psi).to_f64());
                assert!(
                    cabs(&lhs).to_f64() / scale < 1e-20,
                    "alpha {alpha} idx {idx}"
                );
            }
        }
    }

    #[test]
    fn forward_first_solution_is_0f2() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let basis = frobenius_forward(&a, &p.complex(1), p).unwrap();
        let params = Hyper0F2Params::new(p.parse("1.3").unwrap(), p.parse("1.8").unwrap()).unwrap();
        let direct = hyper0f2(&params, &p.complex(-1), p).unwrap();
        assert!(rel_diff(&basis[0], &direct) < 1e-38);
    }

    #[test]
    fn forward_indicial_behaviour() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        for (idx, exponent) in [(0usize, 0.0f64), (1, -0.3), (2, -0.8)] {
            let r1 = frobenius_forward(&a, &p.complex(1e-4), p).unwrap()[idx].clone();
            let r2 = frobenius_forward(&a, &p.complex(1e-5), p).unwrap()[idx].clone();
            let slope =
                (cabs(&r2).to_f64().ln() - cabs(&r1).to_f64().ln()) / (1e-5f64.ln() - 1e-4f64.ln());
            assert!((slope - exponent).abs() < 1e-3, "idx {idx} slope {slope}");
        }
    }

    #[test]
    fn adjoint_second_solution_vanishes_at_zero() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let b = frobenius_adjoint(&a, &p.complex(0), p).unwrap();
        assert!(b[1].is_zero());
        assert_eq!(b[0], p.complex(1));
    }

    #[test]
    fn resonance_is_rejected() {
        let p = p40();
        assert!(matches!(
            frobenius_forward(&p.real(0.5), &p.complex(1), p),
            Err(Error::Resonance(_))
        ));
        assert!(matches!(
            frobenius_adjoint(&p.real(0), &p.complex(1), p),
            Err(Error::Resonance(_))
        ));
    }
}

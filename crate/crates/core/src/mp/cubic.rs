use super::{cabs, Precision};
use crate::error::{Error, Result};
use rug::Complex;

/// Roots of `c3 z^3 + c2 z^2 + c1 z + c0` by Cardano's formulas, each
/// polished with one Newton step. Repeated roots are returned with their
/// multiplicity.
pub fn solve_cubic(
    c3: &Complex,
    c2: &Complex,
    c1: &Complex,
    c0: &Complex,
    prec: Precision,
) -> Result<[Complex; 3]> {
    if c3.is_zero() {
        return Err(Error::Domain("leading cubic coefficient vanishes".into()));
    }
    let work = prec.plus(10);
    let bits = work.bits();
    let c = |v: &Complex| Complex::with_val(bits, v);
    let a = c(c2) / c(c3);
    let b = c(c1) / c(c3);
    let d = c(c0) / c(c3);

    // z = y - a/3 gives y^3 + p y + q = 0.
    let a2 = Complex::with_val(bits, a.square_ref());
    let p = Complex::with_val(bits, &b - Complex::with_val(bits, &a2 / 3u32));
    let q = Complex::with_val(bits, &a2 * &a) * 2u32 / 27u32
        - Complex::with_val(bits, &a * &b) / 3u32
        + &d;

    let half_q = Complex::with_val(bits, &q / 2u32);
    let disc = Complex::with_val(bits, half_q.square_ref())
        + Complex::with_val(bits, p.square_ref()) * &p / 27u32;
    let sq = disc.sqrt();
    let plus = Complex::with_val(bits, &sq - &half_q);
    let minus = -Complex::with_val(bits, &half_q + &sq);
    let base = if cabs(&plus) >= cabs(&minus) {
        plus
    } else {
        minus
    };

    let shift = Complex::with_val(bits, &a / 3u32);
    let mut roots: [Complex; 3] = if base.is_zero() {
        // p = q = 0: a triple root.
        [-shift.clone(), -shift.clone(), -shift]
    } else {
        let cube = cbrt(&base);
        let omega = work.cis(&(work.pi() * 2u32 / 3u32));
        let mut out: Vec<Complex> = Vec::with_capacity(3);
        let mut w = Complex::with_val(bits, 1);
        for _ in 0..3 {
            let ck = Complex::with_val(bits, &w * &cube);
            let y = Complex::with_val(
                bits,
                &ck - Complex::with_val(bits, &p / (ck.clone() * 3u32)),
            );
            out.push(y - &shift);
            w *= &omega;
        }
        [out[0].clone(), out[1].clone(), out[2].clone()]
    };

    let poly = [c(c3), c(c2), c(c1), c(c0)];
    for r in roots.iter_mut() {
        let (v, dv) = horner_with_derivative(&poly, r);
        if !dv.is_zero() {
            let step = v / dv;
            *r -= step;
        }
    }
    Ok(roots.map(|r| Complex::with_val(prec.bits(), r)))
}

fn cbrt(z: &Complex) -> Complex {
    (Complex::with_val(z.prec().0, z.ln_ref()) / 3u32).exp()
}

fn horner_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let bits = z.prec().0;
    let mut v = Complex::new(bits);
    let mut dv = Complex::new(bits);
    for c in coeffs {
        dv = dv * z + &v;
        v = v * z + c;
    }
    (v, dv)
}

use super::{cabs, Precision};
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Stirling coefficients `B_{2k} / (2k (2k-1))`, cached per bit precision.
fn stirling_coeffs(prec: Precision, count: usize) -> Arc<Vec<Float>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let bits = prec.bits();
    if let Some(c) = cache.lock().unwrap().get(&bits) {
        if c.len() >= count {
            return c.clone();
        }
    }
    let two_pi = prec.pi() * 2u32;
    let mut coeffs = Vec::with_capacity(count);
    for k in 1..=count as u32 {
        // B_{2k} = (-1)^(k+1) 2 (2k)! zeta(2k) / (2 pi)^(2k)
        let zeta = Float::with_val(bits, 2 * k).zeta();
        let fact = Float::with_val(bits, Float::factorial(2 * k));
        let mut b = zeta * fact * 2u32 / Float::with_val(bits, (&two_pi).pow(2 * k));
        if k % 2 == 0 {
            b = -b;
        }
        coeffs.push(b / ((2 * k) * (2 * k - 1)));
    }
    let coeffs = Arc::new(coeffs);
    cache.lock().unwrap().insert(bits, coeffs.clone());
    coeffs
}

/// Complex gamma function.
///
/// Uses reflection for `Re z < 1/2` and otherwise the Stirling series after
/// shifting the argument to `Re z >= R`, where `R` grows with the precision.
pub fn gamma(z: &Complex, prec: Precision) -> Result<Complex> {
    let work = prec.plus(10);
    let bits = work.bits();
    let z = Complex::with_val(bits, z);
    check_pole(&z, prec)?;
    let half = Float::with_val(bits, 0.5);
    let out = if *z.real() < half {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z)); reduce Re z by an even
        // integer first so that sin(pi z) stays accurate.
        let one_minus = Complex::with_val(bits, 1 - &z);
        let g = stirling(&one_minus, work);
        let shift = (Float::with_val(bits, z.real() / 2u32).round()) * 2u32;
        let reduced = Complex::with_val(bits, &z - &shift);
        let s = (reduced * work.pi()).sin();
        work.pi() / (s * g)
    } else {
        stirling(&z, work)
    };
    Ok(Complex::with_val(prec.bits(), out))
}

fn check_pole(z: &Complex, prec: Precision) -> Result<()> {
    let tol = prec.ten_pow_neg((prec.digits() / 2) as i32);
    let re = z.real();
    if *re > 0.5 {
        return Ok(());
    }
    let nearest = Float::with_val(re.prec(), re.round_ref());
    let dist = Complex::with_val(z.prec().0, z - &nearest);
    if cabs(&dist) < tol {
        return Err(Error::GammaPole(format!("{}", nearest.to_f64())));
    }
    Ok(())
}

fn stirling(z: &Complex, work: Precision) -> Complex {
    let bits = work.bits();
    let digits = work.digits() as f64;
    let threshold = (0.4 * digits + 5.0).max(20.0);
    let re = z.real().to_f64();
    let shift = if re < threshold {
        (threshold - re).ceil() as u32
    } else {
        0
    };
    let mut w = Complex::with_val(bits, z);
    let mut prod = Complex::with_val(bits, 1);
    for _ in 0..shift {
        prod *= &w;
        w += 1u32;
    }

    let ln_w = Complex::with_val(bits, w.ln_ref());
    let half_ln_2pi = (work.pi() * 2u32).ln() / 2u32;
    let mut lg = Complex::with_val(bits, &w - 0.5) * &ln_w - &w + half_ln_2pi;

    // Terms decrease while 2k < 2 pi |w|; the count needed at this
    // precision is far below that turning point.
    let max_terms = ((std::f64::consts::PI * threshold) as usize).max(20);
    let coeffs = stirling_coeffs(work, max_terms);
    let w2 = Complex::with_val(bits, w.square_ref());
    let mut wpow = Complex::with_val(bits, 1 / &w);
    let eps = work.eps() * cabs(&lg).max(&Float::with_val(bits, 1));
    for c in coeffs.iter() {
        let term = Complex::with_val(bits, &wpow * c);
        let small = cabs(&term) < eps;
        lg += term;
        if small {
            break;
        }
        wpow /= &w2;
    }
    lg.exp() / prod
}

/// Real gamma function; poles are reported as errors.
pub fn gamma_real(x: &Float, prec: Precision) -> Result<Float> {
    let z = prec.complex(x);
    check_pole(&z, prec)?;
    Ok(Float::with_val(prec.bits(), x.gamma_ref()))
}

/// `1 / Gamma(x)`, taken as zero at the nonpositive integers.
pub fn rgamma_real(x: &Float, prec: Precision) -> Float {
    if *x <= 0 && x.is_integer() {
        return prec.real(0);
    }
    1 / Float::with_val(prec.bits(), x.gamma_ref())
}

use crate::equilibrium::ExternalField;
use crate::error::{Error, Result};
use crate::mp::{gamma_real, quad_ts_tol, GaussLegendre, Precision};
use rug::{Complex, Float};
use std::fmt;
use std::sync::Arc;

/// The external field of the weight `x^α e^{-nV(x)}`.
#[derive(Clone)]
pub enum WeightField {
    /// `V(x) = x`, with moments in closed form.
    Laguerre,
    /// Any field; moments by quadrature.
    Custom(Arc<dyn ExternalField>),
}

impl fmt::Debug for WeightField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightField::Laguerre => f.write_str("Laguerre"),
            WeightField::Custom(v) => write!(f, "Custom({})", v.name()),
        }
    }
}

impl WeightField {
    fn eval(&self, x: &Float) -> Float {
        match self {
            WeightField::Laguerre => x.clone(),
            WeightField::Custom(v) => {
                let z = Complex::with_val(x.prec(), x);
                Float::with_val(x.prec(), v.eval(&z).real())
            }
        }
    }

    fn eval_c(&self, z: &Complex) -> Complex {
        match self {
            WeightField::Laguerre => z.clone(),
            WeightField::Custom(v) => v.eval(z),
        }
    }
}

/// Moments `∫_0^∞ x^{s+α} e^{-nV(x)} dx` for `s = k/2`, `k = 0..=max_halves`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub alpha: Float,
    pub n: usize,
    pub field: WeightField,
    values: Vec<Float>,
    prec: Precision,
}

impl MomentTable {
    /// The moment with exponent `s = halves / 2`.
    pub fn value(&self, halves: usize) -> &Float {
        &self.values[halves]
    }

    pub fn max_halves(&self) -> usize {
        self.values.len() - 1
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// `x^α e^{-nV(x)}`.
    pub fn weight(&self, x: &Float) -> Float {
        let bits = x.prec();
        if x.is_zero() {
            return Float::new(bits);
        }
        let log =
            Float::with_val(bits, x.ln_ref()) * &self.alpha - self.field.eval(x) * self.n as u32;
        log.exp()
    }

    /// `z^α e^{-nV(z)}` with the principal power, off the negative axis.
    pub fn weight_c(&self, z: &Complex) -> Complex {
        let bits = z.prec().0;
        let log = Complex::with_val(bits, z.ln_ref()) * &self.alpha
            - self.field.eval_c(z) * self.n as u32;
        log.exp()
    }

    /// A point beyond which `x · x^{s} w(x)`, `s = halves/2`, stays below
    /// `tol` times its maximum over the doubling scan from `1/n`.
    pub fn domain_end(&self, halves: usize, tol: f64) -> Result<Float> {
        domain_end(&self.alpha, self.n, &self.field, halves, tol, self.prec)
    }
}

fn log_integrand(alpha: &Float, n: usize, field: &WeightField, halves: usize, x: &Float) -> f64 {
    let bits = x.prec();
    let expo = Float::with_val(bits, alpha + halves as f64 / 2.0) + 1u32;
    let v = Float::with_val(bits, x.ln_ref()) * expo - field.eval(x) * n as u32;
    v.to_f64()
}

fn domain_end(
    alpha: &Float,
    n: usize,
    field: &WeightField,
    halves: usize,
    tol: f64,
    prec: Precision,
) -> Result<Float> {
    let target = tol.ln();
    let mut x = prec.real(1) / n as u32;
    let mut peak = f64::NEG_INFINITY;
    for _ in 0..80 {
        let l = log_integrand(alpha, n, field, halves, &x);
        peak = peak.max(l);
        if l < peak + target {
            return Ok(x);
        }
        x *= 2u32;
    }
    Err(Error::MomentTail(x.to_f64().to_string()))
}

/// Half-integer moments of `x^α e^{-nV(x)}` up to exponent `max_halves / 2`.
///
/// The Laguerre field uses `Γ(s+α+1) / n^{s+α+1}`. Other fields integrate
/// by tanh-sinh on `[0, 1/n]` and composite Gauss-Legendre up to a domain
/// end where the integrand has decayed below the working tolerance.
pub fn moments(
    alpha: &Float,
    n: usize,
    field: WeightField,
    max_halves: usize,
    prec: Precision,
) -> Result<MomentTable> {
    if !(*alpha > -1) {
        return Err(Error::Domain("the weight exponent α must exceed -1".into()));
    }
    if n == 0 {
        return Err(Error::Domain("the ensemble size n must be positive".into()));
    }
    let bits = prec.bits();
    let alpha = Float::with_val(bits, alpha);
    let mut values = Vec::with_capacity(max_halves + 1);
    match &field {
        WeightField::Laguerre => {
            let log_n = Float::with_val(bits, n).ln();
            for k in 0..=max_halves {
                let e = Float::with_val(bits, &alpha + k as f64 / 2.0) + 1u32;
                let g = gamma_real(&e, prec)?;
                values.push(g / (e * &log_n).exp());
            }
        }
        WeightField::Custom(_) => {
            let work = prec.plus(10);
            let tol = prec.eps().to_f64().max(f64::MIN_POSITIVE);
            let order = (prec.digits() as usize * 2) / 3 + 10;
            let rule = GaussLegendre::new(order, work)?;
            let wbits = work.bits();
            let eps = work.real(1) / n as u32;
            let ts_tol = prec.ten_pow_neg(prec.digits() as i32 + 2);
            for k in 0..=max_halves {
                let end = domain_end(&alpha, n, &field, k, tol * 1e-3, work)?;
                let expo = Float::with_val(wbits, &alpha + k as f64 / 2.0);
                let f = |x: &Float| -> Complex {
                    let log = Float::with_val(wbits, x.ln_ref()) * &expo - field.eval(x) * n as u32;
                    Complex::with_val(wbits, log.exp())
                };
                let mut acc = quad_ts_tol(f, &work.real(0), &eps, 14, &ts_tol, work)?;
                let span = Float::with_val(wbits, &end - &eps);
                let panels = ((span.to_f64() * n as f64).ceil() as usize).clamp(4, 4000);
                let width = span / panels as u32;
                for p in 0..panels {
                    let a = Float::with_val(wbits, &width * p as u32) + &eps;
                    let b = Float::with_val(wbits, &a + &width);
                    acc += rule.integrate(&a, &b, f);
                }
                let total = Float::with_val(bits, acc.real());
                let tail = f(&end).real().clone() * &end;
                if tail > Float::with_val(bits, &total * tol) {
                    return Err(Error::MomentTail(end.to_f64().to_string()));
                }
                values.push(total);
            }
        }
    }
    if values.iter().any(|v| !(*v > 0) || !v.is_finite()) {
        return Err(Error::Domain("a moment is not positive and finite".into()));
    }
    Ok(MomentTable {
        alpha,
        n,
        field,
        values,
        prec,
    })
}

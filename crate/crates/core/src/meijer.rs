//! Meijer G-functions `G^{m,0}_{0,3}(z | b1, b2, b3)` for `m = 1, 2, 3`,
//!
//! ```text
//! G(z) = 1/(2πi) ∮ Π_{j<=m} Γ(s + b_j) / Π_{j>m} Γ(1 - b_j - s) z^{-s} ds,
//! ```
//!
//! on arbitrary sheets of `z`. Two evaluators are provided: a residue series
//! over the poles of the `Γ(s + b_j)` factors, and a loop-contour quadrature
//! that works for every parameter set and serves as its oracle.

use crate::error::{Error, Result};
use crate::mp::{
    cabs, gamma, gamma_real, log10_abs, log10_float, rgamma_real, GaussLegendre, Precision,
};
use crate::specfun::series_jet;
use rug::{Complex, Float};

/// A point `r e^{iθ}` with unrestricted argument, so that `θ` and `θ + 2π`
/// name different sheets of a multivalued function.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorPoint {
    modulus: Float,
    argument: Float,
}

impl SectorPoint {
    pub fn new(modulus: Float, argument: Float) -> Result<Self> {
        if !(modulus > 0) || !modulus.is_finite() {
            return Err(Error::Domain("modulus must be positive and finite".into()));
        }
        if !argument.is_finite() {
            return Err(Error::Domain("argument must be finite".into()));
        }
        Ok(SectorPoint { modulus, argument })
    }

    pub fn from_f64(modulus: f64, argument: f64, prec: Precision) -> Result<Self> {
        Self::new(prec.real(modulus), prec.real(argument))
    }

    /// Principal-sheet representative of a nonzero complex number.
    pub fn from_complex(z: &Complex) -> Result<Self> {
        let bits = z.prec().0;
        Self::new(cabs(z), Float::with_val(bits, z.arg_ref()))
    }

    /// A positive real `x` at argument 0.
    pub fn positive(x: &Float) -> Result<Self> {
        Self::new(x.clone(), Float::new(x.prec()))
    }

    pub fn modulus(&self) -> &Float {
        &self.modulus
    }

    pub fn argument(&self) -> &Float {
        &self.argument
    }

    /// The same modulus with the argument moved by `k π`.
    pub fn rotated(&self, half_turns: i32, prec: Precision) -> SectorPoint {
        let arg = prec.real(&self.argument) + prec.pi() * half_turns;
        SectorPoint {
            modulus: prec.real(&self.modulus),
            argument: arg,
        }
    }

    pub fn with_argument(&self, argument: Float) -> SectorPoint {
        SectorPoint {
            modulus: self.modulus.clone(),
            argument,
        }
    }

    /// `ln r + iθ` on this sheet.
    pub fn log(&self, prec: Precision) -> Complex {
        let lr = prec.real(self.modulus.ln_ref());
        Complex::with_val(prec.bits(), (lr, prec.real(&self.argument)))
    }

    pub fn value(&self, prec: Precision) -> Complex {
        prec.cis(&self.argument) * prec.real(&self.modulus)
    }

    /// `z^e` on this sheet.
    pub fn pow(&self, e: &Complex, prec: Precision) -> Complex {
        (self.log(prec) * e).exp()
    }

    pub fn pow_real(&self, e: &Float, prec: Precision) -> Complex {
        (self.log(prec) * e).exp()
    }
}

/// Parameters of `G^{m,0}_{0,3}(z | b1, b2, b3)`; the first `m` entries
/// of `b` sit in numerator gamma factors.
#[derive(Clone, Debug)]
pub struct GParams303 {
    pub m: usize,
    pub b: [Float; 3],
}

impl GParams303 {
    pub fn new(m: usize, b: [Float; 3]) -> Result<Self> {
        if !(1..=3).contains(&m) {
            return Err(Error::Domain(format!(
                "G^{{m,0}}_{{0,3}} needs m in 1..=3, got {m}"
            )));
        }
        Ok(GParams303 { m, b })
    }

    /// `G^{3,0}_{0,3}(· | 0, -α, -α-1/2)`, the family behind the `φ_j`.
    pub fn phi_family(alpha: &Float, prec: Precision) -> Self {
        let a = prec.real(alpha);
        GParams303 {
            m: 3,
            b: [
                prec.real(0),
                -a.clone(),
                -(Float::with_val(a.prec(), &a + 0.5)),
            ],
        }
    }

    /// `G^{3,0}_{0,3}(· | 0, α, α+1/2)`, the family behind the `ψ_j`.
    pub fn psi_family(alpha: &Float, prec: Precision) -> Self {
        let a = prec.real(alpha);
        GParams303 {
            m: 3,
            b: [prec.real(0), a.clone(), Float::with_val(a.prec(), &a + 0.5)],
        }
    }

    /// True when two numerator parameters differ by an integer (to 1e-6),
    /// so that poles collide and the residue series does not apply.
    pub fn is_resonant(&self) -> bool {
        for j in 0..self.m {
            for k in j + 1..self.m {
                let d = Float::with_val(self.b[j].prec(), &self.b[j] - &self.b[k]);
                let frac = (d.clone() - d.round()).abs();
                if frac < 1e-6 {
                    return true;
                }
            }
        }
        false
    }
}

/// A value together with its first two `θ = z d/dz` derivatives.
pub type ThetaJet = [Complex; 3];

fn jet_scale(j: &ThetaJet, s: &Complex) -> ThetaJet {
    [
        Complex::with_val(s.prec().0, &j[0] * s),
        Complex::with_val(s.prec().0, &j[1] * s),
        Complex::with_val(s.prec().0, &j[2] * s),
    ]
}

fn jet_add(a: &ThetaJet, b: &ThetaJet) -> ThetaJet {
    let bits = a[0].prec().0;
    [
        Complex::with_val(bits, &a[0] + &b[0]),
        Complex::with_val(bits, &a[1] + &b[1]),
        Complex::with_val(bits, &a[2] + &b[2]),
    ]
}

fn jet_sub(a: &ThetaJet, b: &ThetaJet) -> ThetaJet {
    let bits = a[0].prec().0;
    [
        Complex::with_val(bits, &a[0] - &b[0]),
        Complex::with_val(bits, &a[1] - &b[1]),
        Complex::with_val(bits, &a[2] - &b[2]),
    ]
}

fn jet_round(j: ThetaJet, prec: Precision) -> ThetaJet {
    j.map(|v| Complex::with_val(prec.bits(), v))
}

/// Digits of headroom needed for the exponential cancellation between the
/// integrand or series terms and the result near the positive axis.
fn cancellation_estimate(z: &SectorPoint) -> u32 {
    let r = z.modulus.to_f64();
    let theta = z.argument.to_f64().abs();
    let grow = 6.0 * r.cbrt() + 2.0 * theta;
    (grow / std::f64::consts::LN_10).ceil() as u32
}

/// Runs a sheet evaluator with an initial guard, then once more if the
/// measured cancellation ate into it.
fn guarded<T>(
    prec: Precision,
    initial: u32,
    mut eval: impl FnMut(Precision) -> Result<(T, f64)>,
) -> Result<T> {
    let guard = 10 + initial;
    let (value, lost) = eval(prec.plus(guard))?;
    if lost <= guard as f64 - 5.0 {
        return Ok(value);
    }
    let (value, _) = eval(prec.plus(lost.ceil() as u32 + 15))?;
    Ok(value)
}

/// Residue-series evaluation of `G^{m,0}_{0,3}` and its `θ`-derivatives on
/// the sheets `base · e^{iπk}`, `k` in `half_turns`.
///
/// Each numerator factor `Γ(s + b_k)` contributes the family
///
/// ```text
/// z^{b_k} Π_{j<=m, j≠k} Γ(b_j - b_k) / Π_{j>m} Γ(1 - b_j + b_k)
///        · 0F2(; {1 + b_k - b_j}_{j≠k}; (-1)^m z).
/// ```
pub fn g_series_jets(
    p: &GParams303,
    base: &SectorPoint,
    half_turns: &[i32],
    prec: Precision,
) -> Result<Vec<ThetaJet>> {
    if p.is_resonant() {
        return Err(Error::Resonance(
            "numerator parameters differ by an integer; use the loop-contour evaluator".into(),
        ));
    }
    let farthest = half_turns
        .iter()
        .map(|k| k.unsigned_abs())
        .max()
        .unwrap_or(0);
    let probe = base.rotated(farthest as i32, prec);
    guarded(prec, cancellation_estimate(&probe), |work| {
        series_at(p, base, half_turns, work)
    })
    .map(|v| v.into_iter().map(|j| jet_round(j, prec)).collect())
}

fn series_at(
    p: &GParams303,
    base: &SectorPoint,
    half_turns: &[i32],
    work: Precision,
) -> Result<(Vec<ThetaJet>, f64)> {
    let bits = work.bits();
    let b: Vec<Float> = p.b.iter().map(|v| work.real(v)).collect();
    // (-1)^m z on each sheet depends on the parity of the half-turns.
    let mut x_even = base.value(work);
    if p.m % 2 == 1 {
        x_even = -x_even;
    }
    let x_odd = -x_even.clone();
    let zero = || [Complex::new(bits), Complex::new(bits), Complex::new(bits)];
    let mut out: Vec<ThetaJet> = half_turns.iter().map(|_| zero()).collect();
    let mut peak = vec![f64::NEG_INFINITY; half_turns.len()];
    for k in 0..p.m {
        let mut coeff = work.real(1);
        let mut lower = Vec::with_capacity(2);
        for j in 0..3 {
            if j == k {
                continue;
            }
            let diff = Float::with_val(bits, &b[j] - &b[k]);
            if j < p.m {
                coeff *= gamma_real(&diff, work)?;
            } else {
                coeff *= rgamma_real(&(work.real(1) - &diff), work);
            }
            lower.push(work.real(1) - diff);
        }
        if coeff.is_zero() {
            continue;
        }
        let mut jets = [None, None];
        for (idx, &turns) in half_turns.iter().enumerate() {
            let parity = turns.rem_euclid(2) as usize;
            if jets[parity].is_none() {
                let x = if parity == 0 { &x_even } else { &x_odd };
                jets[parity] = Some(series_jet(&lower[0], &lower[1], &b[k], x, work)?);
            }
            let jet = jets[parity].as_ref().unwrap();
            let sheet = base.rotated(turns, work);
            let pre = sheet.pow_real(&b[k], work) * &coeff;
            let fam = jet_scale(&jet.sums, &pre);
            peak[idx] = peak[idx].max(jet.peak_log10 + log10_abs(&pre));
            out[idx] = jet_add(&out[idx], &fam);
        }
    }
    let lost = lost_digits(&out, &peak);
    Ok((out, lost))
}

fn lost_digits(out: &[ThetaJet], peak: &[f64]) -> f64 {
    out.iter()
        .zip(peak)
        .map(|(jet, pk)| {
            let smallest = jet.iter().map(log10_abs).fold(f64::INFINITY, f64::min);
            if smallest.is_finite() {
                pk - smallest
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

/// Residue-series value of `G^{m,0}_{0,3}(z)`.
pub fn g303_series(p: &GParams303, z: &SectorPoint, prec: Precision) -> Result<Complex> {
    Ok(g_series_jets(p, z, &[0], prec)?.remove(0)[0].clone())
}

/// Loop-contour value of `G^{m,0}_{0,3}(z)`.
pub fn mb_loop(p: &GParams303, z: &SectorPoint, prec: Precision) -> Result<Complex> {
    Ok(mb_loop_jets(p, z, &[0], prec)?.remove(0)[0].clone())
}

/// Loop-contour quadrature of the Mellin-Barnes integral on several sheets.
///
/// The loop runs along `Im s = -1` from `-X` to `c`, up the segment
/// `Re s = c`, and back along `Im s = +1`, where `c` lies one unit to the
/// right of every numerator pole. Unit-width Gauss-Legendre panels share
/// their abscissae up to integer shifts, so the gamma factors on every
/// panel after the first follow from the recurrence `Γ(s) = Γ(s+1)/s`.
pub fn mb_loop_jets(
    p: &GParams303,
    base: &SectorPoint,
    half_turns: &[i32],
    prec: Precision,
) -> Result<Vec<ThetaJet>> {
    let farthest = half_turns
        .iter()
        .map(|k| k.unsigned_abs())
        .max()
        .unwrap_or(0);
    let probe = base.rotated(farthest as i32, prec);
    guarded(prec, cancellation_estimate(&probe), |work| {
        mb_loop_at(p, base, half_turns, work)
    })
    .map(|v| v.into_iter().map(|j| jet_round(j, prec)).collect())
}

/// `Π_{j<=m} Γ(s + b_j) / Π_{j>m} Γ(1 - b_j - s)`.
fn gamma_part(p: &GParams303, b: &[Float], s: &Complex, work: Precision) -> Result<Complex> {
    let bits = work.bits();
    let mut acc = Complex::with_val(bits, 1);
    for (j, bj) in b.iter().enumerate() {
        if j < p.m {
            acc *= gamma(&Complex::with_val(bits, s + bj), work)?;
        } else {
            let w = Complex::with_val(bits, 1 - Complex::with_val(bits, s + bj));
            acc *= rgamma(&w, work)?;
        }
    }
    Ok(acc)
}

fn rgamma(w: &Complex, work: Precision) -> Result<Complex> {
    match gamma(w, work) {
        Ok(g) => Ok(1 / g),
        Err(Error::GammaPole(_)) => Ok(work.complex(0)),
        Err(e) => Err(e),
    }
}

/// Factor relating the gamma part at `s - 1` to that at `s`:
/// `g(s-1) = g(s) / (Π_{j<=m} (s - 1 + b_j) Π_{j>m} (1 - b_j - s))`.
fn step_divisor(p: &GParams303, b: &[Float], s: &Complex) -> Complex {
    let bits = s.prec().0;
    let mut acc = Complex::with_val(bits, 1);
    for (j, bj) in b.iter().enumerate() {
        if j < p.m {
            acc *= Complex::with_val(bits, s + bj) - 1u32;
        } else {
            acc *= 1 - Complex::with_val(bits, s + bj);
        }
    }
    acc
}

fn mb_loop_at(
    p: &GParams303,
    base: &SectorPoint,
    half_turns: &[i32],
    work: Precision,
) -> Result<(Vec<ThetaJet>, f64)> {
    let bits = work.bits();
    let b: Vec<Float> = p.b.iter().map(|v| work.real(v)).collect();
    let c = b[..p.m]
        .iter()
        .map(|v| Float::with_val(bits, -v))
        .fold(Float::with_val(bits, f64::NEG_INFINITY), |a, v| a.max(&v))
        + 1u32;
    let eta = work.real(1);
    let order = (0.8 * work.digits() as f64 + 4.0).ceil() as usize;
    let rule = GaussLegendre::new(order, work)?;
    let r = base.modulus.to_f64();
    let t_min_stop = -(2.0 * r.cbrt() + 5.0);
    let t_limit = -(60.0 + 12.0 * r.cbrt() + work.digits() as f64);
    let tiny = work.ten_pow_neg(work.digits() as i32 + 5);

    let sheets: Vec<SectorPoint> = half_turns.iter().map(|&k| base.rotated(k, work)).collect();
    let logs: Vec<Complex> = sheets.iter().map(|s| s.log(work)).collect();
    // z on each sheet, used to step z^{-s} from one panel to the next.
    let zs: Vec<Complex> = logs
        .iter()
        .map(|l| Complex::with_val(bits, l.exp_ref()))
        .collect();

    let zero_jet = || [Complex::new(bits), Complex::new(bits), Complex::new(bits)];
    let mut acc: Vec<ThetaJet> = sheets.iter().map(|_| zero_jet()).collect();
    let mut peak = vec![f64::NEG_INFINITY; sheets.len()];

    let add_node = |acc: &mut Vec<ThetaJet>,
                    peak: &mut Vec<f64>,
                    s: &Complex,
                    g: &Complex,
                    zpow: &[Complex],
                    weight: &Complex| {
        let ms = -Complex::with_val(bits, s);
        for (idx, zp) in zpow.iter().enumerate() {
            let v = Complex::with_val(bits, g * zp) * weight;
            let v1 = Complex::with_val(bits, &v * &ms);
            let v2 = Complex::with_val(bits, &v1 * &ms);
            let mag = log10_abs(&v).max(log10_abs(&v2));
            if mag > peak[idx] {
                peak[idx] = mag;
            }
            acc[idx][0] += v;
            acc[idx][1] += v1;
            acc[idx][2] += v2;
        }
    };

    // Vertical segment s = c + iy, ds = i dy.
    let i = work.i();
    for (lo, hi) in [(-eta.clone(), work.real(0)), (work.real(0), eta.clone())] {
        for (y, w) in rule.mapped(&lo, &hi) {
            let s = Complex::with_val(bits, (&c, &y));
            let g = gamma_part(p, &b, &s, work)?;
            let zpow: Vec<Complex> = logs
                .iter()
                .map(|l| (-Complex::with_val(bits, &s * l)).exp())
                .collect();
            let weight = Complex::with_val(bits, &i * &w);
            add_node(&mut acc, &mut peak, &s, &g, &zpow, &weight);
        }
    }

    // Legs: the lower leg runs left to right, the upper right to left, so
    // the pair contributes ∫ (I(t - iη) - I(t + iη)) dt.
    let first = rule.mapped(&Float::with_val(bits, &c - 1u32), &c);
    struct LegNode {
        s: Complex,
        g: Complex,
        zpow: Vec<Complex>,
        weight: Complex,
    }
    let mut nodes: Vec<LegNode> = Vec::with_capacity(2 * first.len());
    for (t, w) in &first {
        for sign in [-1i32, 1] {
            let s = Complex::with_val(bits, (t, Float::with_val(bits, &eta * sign)));
            let g = gamma_part(p, &b, &s, work)?;
            let zpow = logs
                .iter()
                .map(|l| (-Complex::with_val(bits, &s * l)).exp())
                .collect();
            let weight = Complex::with_val(bits, (Float::with_val(bits, w * -sign), 0));
            nodes.push(LegNode { s, g, zpow, weight });
        }
    }

    let mut panel = 0usize;
    loop {
        let before: Vec<ThetaJet> = acc.clone();
        for node in &nodes {
            add_node(
                &mut acc,
                &mut peak,
                &node.s,
                &node.g,
                &node.zpow,
                &node.weight,
            );
        }
        let t_right = c.to_f64() - panel as f64;
        let settled = acc.iter().zip(&before).all(|(now, was)| {
            now.iter().zip(was.iter()).all(|(a, w)| {
                let diff = cabs(&Complex::with_val(bits, a - w));
                diff <= Float::with_val(bits, cabs(a) * &tiny)
            })
        });
        if settled && t_right - 1.0 < t_min_stop {
            break;
        }
        if t_right < t_limit {
            let tail = acc
                .iter()
                .zip(&before)
                .map(|(a, w)| cabs(&Complex::with_val(bits, &a[0] - &w[0])).to_f64())
                .fold(0.0, f64::max);
            return Err(Error::TailConvergence(format!("{tail:e}")));
        }
        // Shift every node one unit to the left.
        for node in nodes.iter_mut() {
            let div = step_divisor(p, &b, &node.s);
            node.g /= div;
            node.s -= 1u32;
            for (zp, z) in node.zpow.iter_mut().zip(&zs) {
                *zp *= z;
            }
        }
        panel += 1;
    }

    let factor = 1 / (work.pi() * 2u32 * Complex::with_val(bits, (0, 1)));
    let out: Vec<ThetaJet> = acc.iter().map(|j| jet_scale(j, &factor)).collect();
    let peak_scaled: Vec<f64> = peak
        .iter()
        .map(|p| p + log10_float(&cabs(&factor)))
        .collect();
    let lost = lost_digits(&out, &peak_scaled);
    Ok((out, lost))
}

/// Dispatches to the residue series, or to the loop contour when the
/// parameters are resonant.
pub fn meijer_jets(
    p: &GParams303,
    base: &SectorPoint,
    half_turns: &[i32],
    prec: Precision,
) -> Result<Vec<ThetaJet>> {
    if p.is_resonant() {
        mb_loop_jets(p, base, half_turns, prec)
    } else {
        g_series_jets(p, base, half_turns, prec)
    }
}

/// `φ_1 .. φ_4` with their `θ`-derivatives at one point.
#[derive(Clone, Debug)]
pub struct PhiScalars {
    pub jets: [ThetaJet; 4],
}

impl PhiScalars {
    /// `φ_k` for `k = 1..=4`.
    pub fn value(&self, k: usize) -> &Complex {
        &self.jets[k - 1][0]
    }

    pub fn jet(&self, k: usize) -> &ThetaJet {
        &self.jets[k - 1]
    }
}

/// `ψ_1 .. ψ_4` with their `θ`-derivatives at one point.
#[derive(Clone, Debug)]
pub struct PsiScalars {
    pub jets: [ThetaJet; 4],
}

impl PsiScalars {
    pub fn value(&self, k: usize) -> &Complex {
        &self.jets[k - 1][0]
    }

    pub fn jet(&self, k: usize) -> &ThetaJet {
        &self.jets[k - 1]
    }
}

fn check_alpha(alpha: &Float) -> Result<()> {
    if !(*alpha > -1) {
        return Err(Error::Domain(format!("α must exceed -1, got {alpha}")));
    }
    Ok(())
}

fn check_principal(z: &SectorPoint, prec: Precision) -> Result<()> {
    let pi = prec.pi();
    if z.argument > pi || z.argument < -pi {
        return Err(Error::Domain("argument must lie in [-π, π]".into()));
    }
    Ok(())
}

/// `φ_3(z) = G(z)`, `φ_1 = i e^{2πiα} G(z e^{2πi})`,
/// `φ_2 = -i e^{-2πiα} G(z e^{-2πi})` and `φ_4 = φ_1 + φ_2`, where `G` is
/// `G^{3,0}_{0,3}(· | 0, -α, -α-1/2)`.
pub fn phi_scalars(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<PhiScalars> {
    check_alpha(alpha)?;
    check_principal(z, prec)?;
    let work = prec.plus(5);
    let p = GParams303::phi_family(alpha, work);
    let g = meijer_jets(&p, z, &[0, 2, -2], work)?;
    let i = work.i();
    let two_pi_a = work.pi() * 2u32 * work.real(alpha);
    let e_plus = work.cis(&two_pi_a) * &i;
    let e_minus = -(work.cis(&-two_pi_a) * &i);
    let phi3 = g[0].clone();
    let phi1 = jet_scale(&g[1], &e_plus);
    let phi2 = jet_scale(&g[2], &e_minus);
    let phi4 = jet_add(&phi1, &phi2);
    Ok(PhiScalars {
        jets: [phi1, phi2, phi3, phi4].map(|j| jet_round(j, prec)),
    })
}

/// `ψ_1(z) = G(z e^{-πi})`, `ψ_2 = G(z e^{πi})`,
/// `ψ_3 = -i e^{2πiα} (G(z e^{-πi}) - G(z e^{-3πi}))` and
/// `ψ_4 = ψ_2 - ψ_1`, where `G` is `G^{3,0}_{0,3}(· | 0, α, α+1/2)`.
pub fn psi_scalars(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<PsiScalars> {
    check_alpha(alpha)?;
    check_principal(z, prec)?;
    let work = prec.plus(5);
    let p = GParams303::psi_family(alpha, work);
    let g = meijer_jets(&p, z, &[-1, 1, -3], work)?;
    let i = work.i();
    let two_pi_a = work.pi() * 2u32 * work.real(alpha);
    let c = work.cis(&two_pi_a) * &i;
    let psi1 = g[0].clone();
    let psi2 = g[1].clone();
    let psi3 = jet_scale(&jet_sub(&g[2], &g[0]), &c);
    let psi4 = jet_sub(&psi2, &psi1);
    Ok(PsiScalars {
        jets: [psi1, psi2, psi3, psi4].map(|j| jet_round(j, prec)),
    })
}

/// The second expression for `ψ_3`, `i e^{-2πiα} (G(z e^{πi}) - G(z e^{3πi}))`.
pub fn psi3_alternative(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<Complex> {
    check_alpha(alpha)?;
    let work = prec.plus(5);
    let p = GParams303::psi_family(alpha, work);
    let g = meijer_jets(&p, z, &[1, 3], work)?;
    let c = work.cis(&-(work.pi() * 2u32 * work.real(alpha))) * work.i();
    let v = Complex::with_val(work.bits(), &g[0][0] - &g[1][0]) * c;
    Ok(Complex::with_val(prec.bits(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::rel_diff;
    use crate::specfun::{hyper0f2, Hyper0F2Params};

    fn p40() -> Precision {
        Precision::new(40).unwrap()
    }

    #[test]
    fn series_matches_loop_on_shifted_sheets() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let params = GParams303::phi_family(&a, p);
        let base = SectorPoint::new(p.parse("1.5").unwrap(), p.parse("0.4").unwrap()).unwrap();
        let turns = [0, 2, -2];
        let s = g_series_jets(&params, &base, &turns, p).unwrap();
        let l = mb_loop_jets(&params, &base, &turns, p).unwrap();
        for (a, b) in s.iter().zip(&l) {
            for k in 0..3 {
                assert!(rel_diff(&a[k], &b[k]) < 1e-20, "{} vs {}", a[k], b[k]);
            }
        }
    }

    #[test]
    fn series_matches_loop_on_odd_sheets() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let params = GParams303::psi_family(&a, p);
        let base = SectorPoint::from_f64(2.2, -0.5, p).unwrap();
        let turns = [-1, 1, -3, 3];
        let s = g_series_jets(&params, &base, &turns, p).unwrap();
        let l = mb_loop_jets(&params, &base, &turns, p).unwrap();
        for (a, b) in s.iter().zip(&l) {
            for k in 0..3 {
                assert!(rel_diff(&a[k], &b[k]) < 1e-20, "{} vs {}", a[k], b[k]);
            }
        }
    }

    #[test]
    fn series_matches_loop_for_large_alpha() {
        let p = p40();
        let a = p.parse("1.2").unwrap();
        for params in [GParams303::phi_family(&a, p), GParams303::psi_family(&a, p)] {
            let z = SectorPoint::from_f64(0.9, -1.1, p).unwrap();
            let s = g303_series(&params, &z, p).unwrap();
            let l = mb_loop(&params, &z, p).unwrap();
            assert!(rel_diff(&s, &l) < 1e-20);
        }
    }

    #[test]
    fn g10_reduces_to_0f2() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let params = GParams303::new(
            1,
            [p.real(0), -a.clone(), -Float::with_val(p.bits(), &a + 0.5)],
        )
        .unwrap();
        let z = SectorPoint::from_f64(2.0, 0.0, p).unwrap();
        let g = mb_loop(&params, &z, p).unwrap();
        let scaled = g
            * gamma_real(&(a.clone() + 1u32), p).unwrap()
            * gamma_real(&(a.clone() + 1.5), p).unwrap();
        let h = hyper0f2(
            &Hyper0F2Params::new(a.clone() + 1u32, a.clone() + 1.5).unwrap(),
            &p.complex(-2),
            p,
        )
        .unwrap();
        assert!(rel_diff(&scaled, &h) < 1e-25);
    }

    #[test]
    fn g20_matches_difference_of_g30_sheets() {
        // 2πi G^{2,0}(y | α, α+1/2; 0) = G^{3,0}(y e^{-πi}) - G^{3,0}(y e^{πi})
        // with G^{3,0} = G(· | 0, α, α+1/2).
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let y = SectorPoint::from_f64(1.7, 0.0, p).unwrap();
        let g20 = GParams303::new(2, [a.clone(), a.clone() + 0.5, p.real(0)]).unwrap();
        let lhs = mb_loop(&g20, &y, p).unwrap() * p.pi() * 2u32 * p.i();
        let lhs_series = g303_series(&g20, &y, p).unwrap() * p.pi() * 2u32 * p.i();
        let g30 = GParams303::psi_family(&a, p);
        let jets = g_series_jets(&g30, &y, &[-1, 1], p).unwrap();
        let rhs = Complex::with_val(p.bits(), &jets[0][0] - &jets[1][0]);
        assert!(rel_diff(&lhs, &rhs) < 1e-25, "{lhs} {lhs_series} {rhs}");
        assert!(rel_diff(&lhs_series, &rhs) < 1e-25);
    }

    #[test]
    fn sheets_are_distinct() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let params = GParams303::phi_family(&a, p);
        let z = SectorPoint::from_f64(1.0, 0.0, p).unwrap();
        let v = g_series_jets(&params, &z, &[0, 2], p).unwrap();
        assert!(v[0][0].real().is_finite() && v[1][0].real().is_finite());
        assert!(rel_diff(&v[0][0], &v[1][0]) > 1e-3);
    }

    #[test]
    fn resonant_parameters_route_to_the_loop() {
        let p = p40();
        let params = GParams303::phi_family(&p.real(0), p);
        assert!(params.is_resonant());
        let z = SectorPoint::from_f64(1.0, 0.3, p).unwrap();
        assert!(matches!(
            g303_series(&params, &z, p),
            Err(Error::Resonance(_))
        ));
        let near = GParams303::phi_family(&p.parse("1e-3").unwrap(), p);
        let v0 = meijer_jets(&params, &z, &[0], p).unwrap();
        let v1 = meijer_jets(&near, &z, &[0], p).unwrap();
        // Continuity in α across the resonance.
        assert!(rel_diff(&v0[0][0], &v1[0][0]) < 1e-2);
    }

    #[test]
    fn large_argument_expansion_at_alpha_zero() {
        let p = Precision::new(30).unwrap();
        let params = GParams303::phi_family(&p.real(0), p);
        let x = 1.0e4f64;
        let z = SectorPoint::from_f64(x, 0.0, p).unwrap();
        let g = mb_loop(&params, &z, p).unwrap();
        let c = x.cbrt();
        let approx = 2.0 * std::f64::consts::PI / 3f64.sqrt()
            * x.powf(-0.5)
            * (1.0 - 1.0 / (36.0 * c) + 25.0 / (2592.0 * c * c));
        // Compare in log space; the exponential factor is e^{-3 x^{1/3}}.
        let lg = log10_abs(&g) * std::f64::consts::LN_10 + 3.0 * c;
        let rel = (lg - approx.ln()).abs();
        assert!(rel < 1e-3, "relative deviation {rel}");
    }

    #[test]
    fn phi4_is_a_multiple_of_phi0() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let z = SectorPoint::from_f64(1.0, 0.0, p).unwrap();
        let phis = phi_scalars(&a, &z, p).unwrap();
        let phi0 = hyper0f2(
            &Hyper0F2Params::new(a.clone() + 1u32, a.clone() + 1.5).unwrap(),
            &p.complex(-1),
            p,
        )
        .unwrap();
        let k = crate::specfun::phi0_normalization(&a, p).unwrap() * p.pi().square() * 4u32;
        let resid = Complex::with_val(p.bits(), phis.value(4) + phi0 * k);
        assert!(cabs(&resid) < 1e-20);
    }

    #[test]
    fn psi3_two_forms_agree() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let z = SectorPoint::from_f64(0.8, 0.0, p).unwrap();
        let psis = psi_scalars(&a, &z, p).unwrap();
        let alt = psi3_alternative(&a, &z, p).unwrap();
        assert!(cabs(&Complex::with_val(p.bits(), psis.value(3) - &alt)) < 1e-20);
        let d = Complex::with_val(p.bits(), psis.value(2) - psis.value(1));
        assert_eq!(&d, psis.value(4));
    }

    #[test]
    fn psi3_vanishes_like_z_alpha() {
        let p = p40();
        let a = p.parse("0.7").unwrap();
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&r| {
                let z = SectorPoint::from_f64(r, 2.5, p).unwrap();
                let v = psi_scalars(&a, &z, p).unwrap();
                cabs(v.value(3)).to_f64() / r.powf(0.7)
            })
            .collect();
        let (lo, hi) = ratios
            .iter()
            .fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(hi / lo < 2.0, "{ratios:?}");
    }

    #[test]
    fn phi3_positive_and_decaying_on_the_axis() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let x = 1000.0f64;
        let z = SectorPoint::from_f64(x, 0.0, p).unwrap();
        let v = phi_scalars(&a, &z, p).unwrap();
        let phi3 = v.value(3);
        assert!(*phi3.real() > 0);
        assert!(phi3.imag().to_f64().abs() < 1e-20 * phi3.real().to_f64().abs());
        // G ~ (2π/√3) x^{(Σb - 1)/3} e^{-3 x^{1/3}} with Σb = -1 - 2α.
        let log_g = log10_abs(phi3) * std::f64::consts::LN_10;
        let lead = -3.0 * x.cbrt() + (2.0 * std::f64::consts::PI / 3f64.sqrt()).ln() - 0.7 * x.ln();
        assert!((log_g - lead).abs() < 0.05, "{log_g} vs {lead}");
    }

    #[test]
    fn phi4_is_single_valued_around_the_origin() {
        let p = p40();
        let a = p.parse("0.3").unwrap();
        let z = p.complex((0.7, 0.2));
        let phis = phi_scalars(&a, &SectorPoint::from_complex(&z).unwrap(), p).unwrap();
        let zz = SectorPoint::from_complex(&z).unwrap();
        // Relabel the same point with argument shifted by 2π and evaluate G
        // directly: φ4 is entire so the combination must not change.
        let params = GParams303::phi_family(&a, p);
        let g = g_series_jets(&params, &zz, &[2, 4, 0], p).unwrap();
        let two_pi_a = p.pi() * 2u32 * &a;
        let phi1 = Complex::with_val(p.bits(), &g[1][0] * p.cis(&two_pi_a)) * p.i();
        let phi2 = -(Complex::with_val(p.bits(), &g[2][0] * p.cis(&-two_pi_a)) * p.i());
        let phi4_shifted = phi1 + phi2;
        assert!(rel_diff(&phi4_shifted, phis.value(4)) < 1e-25);
    }
}

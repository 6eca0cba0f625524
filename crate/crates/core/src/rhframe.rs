//! The model Riemann-Hilbert matrices `Φ_α` and `Ψ_α` built from the
//! `φ_j`, `ψ_j` scalars, their constant jumps on `ℝ ∪ iℝ`, and the frames
//! describing their behaviour at infinity.

use crate::error::{Error, Result};
use crate::meijer::{phi_scalars, psi_scalars, SectorPoint, ThetaJet};
use crate::mp::{Mat3, Precision};
use rug::{Complex, Float};

/// The four open quadrants of the plane, counted counterclockwise from
/// the positive real axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrant {
    First,
    Second,
    Third,
    Fourth,
}

/// The four rays of `ℝ ∪ iℝ`, each oriented away from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    PositiveReal,
    PositiveImaginary,
    NegativeReal,
    NegativeImaginary,
}

impl Ray {
    pub const ALL: [Ray; 4] = [
        Ray::PositiveReal,
        Ray::PositiveImaginary,
        Ray::NegativeReal,
        Ray::NegativeImaginary,
    ];

    fn name(self) -> &'static str {
        match self {
            Ray::PositiveReal => "R+",
            Ray::PositiveImaginary => "iR+",
            Ray::NegativeReal => "R-",
            Ray::NegativeImaginary => "iR-",
        }
    }

    /// Quadrant lying on the given side of the ray; `+` is on the left.
    pub fn quadrant(self, side: Side) -> Quadrant {
        use Quadrant::*;
        match (self, side) {
            (Ray::PositiveReal, Side::Plus) => First,
            (Ray::PositiveReal, Side::Minus) => Fourth,
            (Ray::PositiveImaginary, Side::Plus) => Second,
            (Ray::PositiveImaginary, Side::Minus) => First,
            (Ray::NegativeReal, Side::Plus) => Third,
            (Ray::NegativeReal, Side::Minus) => Second,
            (Ray::NegativeImaginary, Side::Plus) => Fourth,
            (Ray::NegativeImaginary, Side::Minus) => Third,
        }
    }

    /// Argument of the ray as seen from its `side`.
    fn argument(self, side: Side, prec: Precision) -> Float {
        let pi = prec.pi();
        match self {
            Ray::PositiveReal => prec.real(0),
            Ray::PositiveImaginary => pi / 2u32,
            Ray::NegativeReal => match side {
                Side::Plus => -pi,
                Side::Minus => pi,
            },
            Ray::NegativeImaginary => -pi / 2u32,
        }
    }
}

/// Side of an oriented ray from which a boundary value is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// A matrix value together with the quadrant whose formula produced it.
#[derive(Clone, Debug)]
pub struct QuadrantMatrix {
    pub quadrant: Quadrant,
    pub value: Mat3,
}

/// Resolves the quadrant of `z`. Points on a ray need `side`; the returned
/// point carries the argument of that side, so boundary values come from
/// continuing the scalars up to the ray rather than from an offset.
pub fn locate(
    z: &SectorPoint,
    side: Option<Side>,
    prec: Precision,
) -> Result<(Quadrant, SectorPoint)> {
    let pi = prec.pi();
    let half = Float::with_val(prec.bits(), &pi / 2u32);
    let t = z.argument();
    if *t > pi || *t < -pi.clone() {
        return Err(Error::Domain("argument must lie in [-π, π]".into()));
    }
    let ray = if t.is_zero() {
        Some(Ray::PositiveReal)
    } else if *t == half {
        Some(Ray::PositiveImaginary)
    } else if *t == -half.clone() {
        Some(Ray::NegativeImaginary)
    } else if *t == pi || *t == -pi.clone() {
        Some(Ray::NegativeReal)
    } else {
        None
    };
    match ray {
        Some(ray) => {
            let side = side.ok_or(Error::BoundarySideRequired(ray.name()))?;
            Ok((
                ray.quadrant(side),
                z.with_argument(ray.argument(side, prec)),
            ))
        }
        None => {
            let q = if *t > half {
                Quadrant::Second
            } else if *t > 0 {
                Quadrant::First
            } else if *t > -half {
                Quadrant::Fourth
            } else {
                Quadrant::Third
            };
            Ok((q, z.clone()))
        }
    }
}

/// A point on `ray` at distance `r` from the origin.
pub fn ray_point(ray: Ray, r: &Float, side: Side, prec: Precision) -> SectorPoint {
    SectorPoint::new(prec.real(r), ray.argument(side, prec)).expect("positive modulus")
}

fn neg_jet(j: &ThetaJet) -> ThetaJet {
    [-j[0].clone(), -j[1].clone(), -j[2].clone()]
}

/// `Φ_α(z)` with the quadrant that selected its columns.
pub fn phi_matrix_at(
    alpha: &Float,
    z: &SectorPoint,
    side: Option<Side>,
    prec: Precision,
) -> Result<QuadrantMatrix> {
    let (quadrant, point) = locate(z, side, prec)?;
    let s = phi_scalars(alpha, &point, prec)?;
    let cols = match quadrant {
        Quadrant::First => [s.jet(1).clone(), s.jet(2).clone(), s.jet(3).clone()],
        Quadrant::Second => [s.jet(4).clone(), s.jet(2).clone(), s.jet(3).clone()],
        Quadrant::Fourth => [s.jet(2).clone(), neg_jet(s.jet(1)), s.jet(3).clone()],
        Quadrant::Third => [s.jet(4).clone(), neg_jet(s.jet(1)), s.jet(3).clone()],
    };
    Ok(QuadrantMatrix {
        quadrant,
        value: Mat3::from_columns(cols),
    })
}

/// `Φ_α(z)`: columns are scalar solutions, rows are `f, ϑf, ϑ²f`.
pub fn phi_matrix(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<Mat3> {
    Ok(phi_matrix_at(alpha, z, None, prec)?.value)
}

/// `Ψ_α(z)` with the quadrant that selected its columns.
pub fn psi_matrix_at(
    alpha: &Float,
    z: &SectorPoint,
    side: Option<Side>,
    prec: Precision,
) -> Result<QuadrantMatrix> {
    let (quadrant, point) = locate(z, side, prec)?;
    let s = psi_scalars(alpha, &point, prec)?;
    let cols = match quadrant {
        Quadrant::First => [s.jet(1).clone(), s.jet(2).clone(), s.jet(3).clone()],
        Quadrant::Second => [s.jet(1).clone(), s.jet(4).clone(), s.jet(3).clone()],
        Quadrant::Fourth => [s.jet(2).clone(), neg_jet(s.jet(1)), s.jet(3).clone()],
        Quadrant::Third => [s.jet(2).clone(), s.jet(4).clone(), s.jet(3).clone()],
    };
    // Rows run from the second derivative down to the value.
    let cols = cols.map(|[f, d1, d2]| [d2, d1, f]);
    Ok(QuadrantMatrix {
        quadrant,
        value: Mat3::from_columns(cols),
    })
}

/// `Ψ_α(z)`: rows are `ϑ²ψ, ϑψ, ψ`.
pub fn psi_matrix(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<Mat3> {
    Ok(psi_matrix_at(alpha, z, None, prec)?.value)
}

/// The constant lower-triangular matrix `C` with `Φ Ψᵀ = -4π² C⁻¹`.
pub fn connection_matrix(alpha: &Float, prec: Precision) -> Mat3 {
    let a = prec.real(alpha);
    let two_a_half: Float = Float::with_val(prec.bits(), &a * 2u32) + 0.5;
    let corner = Float::with_val(prec.bits(), &a + 0.5) * &a;
    let c = |v: Float| prec.complex(v);
    Mat3::new([
        [prec.complex(1), prec.complex(0), prec.complex(0)],
        [c(-two_a_half.clone()), prec.complex(-1), prec.complex(0)],
        [c(corner), c(two_a_half), prec.complex(1)],
    ])
}

/// `Φ_α(z)⁻¹ = -(1/4π²) Ψ_α(z)ᵀ C`, without a numerical inversion.
pub fn phi_inverse_at(
    alpha: &Float,
    z: &SectorPoint,
    side: Option<Side>,
    prec: Precision,
) -> Result<Mat3> {
    let psi = psi_matrix_at(alpha, z, side, prec)?.value;
    let c = connection_matrix(alpha, prec);
    let scale = prec.complex(-1 / (prec.pi().square() * 4u32));
    Ok((&psi.transpose() * &c).scale(&scale))
}

pub fn phi_inverse(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<Mat3> {
    phi_inverse_at(alpha, z, None, prec)
}

/// Jump matrix `J` of `Φ_α` on `ray`: `Φ₊ = Φ₋ J`.
pub fn phi_jump(alpha: &Float, ray: Ray, prec: Precision) -> Mat3 {
    let o = || prec.complex(0);
    let l = || prec.complex(1);
    match ray {
        Ray::PositiveReal => Mat3::new([[o(), l(), o()], [-l(), o(), o()], [o(), o(), l()]]),
        Ray::PositiveImaginary | Ray::NegativeImaginary => {
            Mat3::new([[l(), o(), o()], [l(), l(), o()], [o(), o(), l()]])
        }
        Ray::NegativeReal => {
            let e = prec.cis(&(prec.pi() * 2u32 * alpha)) * prec.i();
            Mat3::new([[l(), o(), o()], [o(), o(), e.clone()], [o(), -e, o()]])
        }
    }
}

/// Jump matrix of `Ψ_α` on `ray`; the inverse transpose of [`phi_jump`].
pub fn psi_jump(alpha: &Float, ray: Ray, prec: Precision) -> Mat3 {
    let o = || prec.complex(0);
    let l = || prec.complex(1);
    match ray {
        Ray::PositiveReal => Mat3::new([[o(), l(), o()], [-l(), o(), o()], [o(), o(), l()]]),
        Ray::PositiveImaginary | Ray::NegativeImaginary => {
            Mat3::new([[l(), -l(), o()], [o(), l(), o()], [o(), o(), l()]])
        }
        Ray::NegativeReal => {
            let e = prec.cis(&-(prec.pi() * 2u32 * alpha)) * prec.i();
            Mat3::new([[l(), o(), o()], [o(), o(), -e.clone()], [o(), e, o()]])
        }
    }
}

/// Largest entry of `Φ₊ - Φ₋ J` on `ray` at distance `r`, relative to the
/// largest entry of `Φ₊`.
pub fn phi_jump_residual(alpha: &Float, ray: Ray, r: &Float, prec: Precision) -> Result<f64> {
    let plus = phi_matrix_at(
        alpha,
        &ray_point(ray, r, Side::Plus, prec),
        Some(Side::Plus),
        prec,
    )?
    .value;
    let minus = phi_matrix_at(
        alpha,
        &ray_point(ray, r, Side::Minus, prec),
        Some(Side::Minus),
        prec,
    )?
    .value;
    let resid = plus.sub(&(&minus * &phi_jump(alpha, ray, prec)));
    Ok((resid.max_abs() / plus.max_abs()).to_f64())
}

/// As [`phi_jump_residual`] for `Ψ_α`.
pub fn psi_jump_residual(alpha: &Float, ray: Ray, r: &Float, prec: Precision) -> Result<f64> {
    let plus = psi_matrix_at(
        alpha,
        &ray_point(ray, r, Side::Plus, prec),
        Some(Side::Plus),
        prec,
    )?
    .value;
    let minus = psi_matrix_at(
        alpha,
        &ray_point(ray, r, Side::Minus, prec),
        Some(Side::Minus),
        prec,
    )?
    .value;
    let resid = plus.sub(&(&minus * &psi_jump(alpha, ray, prec)));
    Ok((resid.max_abs() / plus.max_abs()).to_f64())
}

/// `det Φ_α(z) = 8π³ i z^{-2β}` with `β = α + 1/4`, on the sheet of `z`.
///
/// This is `-(2π/√3)³ det(L_α) z^{-2β}`, the value forced by the
/// large-`z` frame; `det L_α = -3√3 i` in both half-planes.
pub fn phi_determinant(alpha: &Float, z: &SectorPoint, prec: Precision) -> Complex {
    let beta = prec.real(alpha) + 0.25;
    let pi = prec.pi();
    let k = Float::with_val(prec.bits(), pi.square_ref()) * &pi * 8u32;
    z.pow_real(&(beta * -2i32), prec) * k * prec.i()
}

/// `-(2π/√3)³ z^{-2β}`, the same determinant without the factor `det L_α`.
pub fn phi_determinant_without_frame(alpha: &Float, z: &SectorPoint, prec: Precision) -> Complex {
    let beta = prec.real(alpha) + 0.25;
    let k = prec.pi() * 2u32 / prec.real(3).sqrt();
    let k3 = Float::with_val(prec.bits(), k.square_ref()) * &k;
    -(z.pow_real(&(beta * -2i32), prec) * k3)
}

/// Constants of the large-`z` behaviour of `Φ_α` and `Ψ_α`.
#[derive(Clone, Debug)]
pub struct AsymptoticFrame {
    pub alpha: Float,
    pub beta: Float,
    pub gamma: Float,
    pub omega: Complex,
    pub m1: Float,
    pub m2: Float,
    pub t1: Float,
    pub t2: Float,
    pub t3: Float,
    pub gamma_t: Float,
    pub m1_t: Float,
    pub m2_t: Float,
    pub t1_t: Float,
    pub t2_t: Float,
    pub t3_t: Float,
    pub t: Mat3,
    pub t_t: Mat3,
}

/// `γ`, `M₁`, `M₂` of the expansion
/// `G(z | 0, -a, -a-1/2) ~ (2π/√3) z^{-γ} e^{-3z^{1/3}} (1 + M₁ z^{-1/3} + M₂ z^{-2/3} + ...)`.
fn expansion_constants(a: &Float, prec: Precision) -> (Float, Float, Float) {
    let q = |n: i32, d: u32| prec.real(n) / d;
    let a2 = Float::with_val(prec.bits(), a.square_ref());
    let a3 = Float::with_val(prec.bits(), &a2 * a);
    let a4 = Float::with_val(prec.bits(), a2.square_ref());
    let gamma = Float::with_val(prec.bits(), a * 2u32) / 3u32 + 0.5;
    let m1 = Float::with_val(prec.bits(), &a2 / 3u32) + Float::with_val(prec.bits(), a / 6u32)
        - q(1, 36);
    let m2 = a4 / 18u32 + a3 / 54u32
        - Float::with_val(prec.bits(), &a2 * 17u32) / 216u32
        - Float::with_val(prec.bits(), a / 54u32)
        + q(25, 2592);
    (gamma, m1, m2)
}

/// The frame constants, with the tilde family obtained from the plain one
/// under `α ↦ -α - 1/2`.
pub fn asymptotic_frame(alpha: &Float, prec: Precision) -> Result<AsymptoticFrame> {
    if !(*alpha > -1) {
        return Err(Error::Domain(format!("α must exceed -1, got {alpha}")));
    }
    let bits = prec.bits();
    let a = prec.real(alpha);
    let third = prec.real(1) / 3u32;
    let two_thirds = prec.real(2) / 3u32;
    let (gamma, m1, m2) = expansion_constants(&a, prec);
    let t1 = -Float::with_val(bits, &gamma + &m1);
    let t2 = Float::with_val(bits, &gamma - &third) * &gamma
        + (Float::with_val(bits, &m1 + &gamma) - &two_thirds) * &m1
        - &m2;
    let t3 = Float::with_val(bits, &gamma * 2u32) - &third + &m1;

    let a_t = -Float::with_val(bits, &a + 0.5);
    let (gamma_t, m1_t, m2_t) = expansion_constants(&a_t, prec);
    let t1_t = Float::with_val(bits, &gamma_t + &m1_t);
    let t2_t = Float::with_val(bits, &gamma_t - &third) * &gamma_t
        + (Float::with_val(bits, &m1_t + &gamma_t) - &two_thirds) * &m1_t
        - &m2_t;
    let t3_t = Float::with_val(bits, &gamma_t * 2u32) - &third + &m1_t;

    let c = |v: &Float| prec.complex(v);
    let t = Mat3::new([
        [prec.complex(1), prec.complex(0), prec.complex(0)],
        [c(&t1), prec.complex(-1), prec.complex(0)],
        [c(&t2), c(&t3), prec.complex(1)],
    ]);
    let t_t = Mat3::new([
        [prec.complex(1), c(&t3_t), c(&t2_t)],
        [prec.complex(0), prec.complex(1), c(&t1_t)],
        [prec.complex(0), prec.complex(0), prec.complex(1)],
    ]);
    let omega = prec.cis(&(prec.pi() * 2u32 / 3u32));
    Ok(AsymptoticFrame {
        beta: a.clone() + 0.25,
        alpha: a,
        gamma,
        omega,
        m1,
        m2,
        t1,
        t2,
        t3,
        gamma_t,
        m1_t,
        m2_t,
        t1_t,
        t2_t,
        t3_t,
        t,
        t_t,
    })
}

fn upper_half(z: &SectorPoint, prec: Precision) -> Result<bool> {
    let t = z.argument();
    let pi = prec.pi();
    if t.is_zero() || *t == pi || *t == -pi.clone() {
        return Err(Error::Domain(
            "the frames L, L̃ are defined off the real axis".into(),
        ));
    }
    if *t > pi || *t < -pi {
        return Err(Error::Domain("argument must lie in (-π, π)".into()));
    }
    Ok(*t > 0)
}

/// `L_α(z)` and `L̃_α(z)` for `z` off the real axis.
pub fn l_frames(alpha: &Float, z: &SectorPoint, prec: Precision) -> Result<(Mat3, Mat3)> {
    l_frames_on(alpha, z, upper_half(z, prec)?, prec)
}

/// The frames with the half-plane chosen explicitly, so that boundary
/// values on the real axis are available.
pub fn l_frames_on(
    alpha: &Float,
    z: &SectorPoint,
    upper: bool,
    prec: Precision,
) -> Result<(Mat3, Mat3)> {
    let beta = prec.real(alpha) + 0.25;
    let omega = prec.cis(&(prec.pi() * 2u32 / 3u32));
    let omega2 = Complex::with_val(prec.bits(), omega.square_ref());
    let one = prec.complex(1);
    let third = prec.real(1) / 3u32;
    let cbrt = z.pow_real(&third, prec);
    let icbrt = Complex::with_val(prec.bits(), 1) / &cbrt;
    let angle: Float = prec.pi() * 2u32 * &beta / 3u32;
    let phase = prec.cis(&angle);
    let phase_inv = prec.cis(&-angle);
    let neg = |v: &Complex| -v.clone();

    let (v, d, vt, dt) = if upper {
        (
            [
                [omega2.clone(), omega.clone(), one.clone()],
                [one.clone(), one.clone(), one.clone()],
                [omega.clone(), omega2.clone(), one.clone()],
            ],
            [phase.clone(), phase_inv.clone()],
            [
                [omega.clone(), omega2.clone(), one.clone()],
                [one.clone(), one.clone(), one.clone()],
                [omega2.clone(), omega.clone(), one.clone()],
            ],
            [phase_inv.clone(), phase.clone()],
        )
    } else {
        (
            [
                [omega.clone(), neg(&omega2), one.clone()],
                [one.clone(), neg(&one), one.clone()],
                [omega2.clone(), neg(&omega), one.clone()],
            ],
            [phase_inv.clone(), phase.clone()],
            [
                [omega2.clone(), neg(&omega), one.clone()],
                [one.clone(), neg(&one), one.clone()],
                [omega.clone(), neg(&omega2), one.clone()],
            ],
            [phase.clone(), phase_inv.clone()],
        )
    };
    let build = |v: [[Complex; 3]; 3], d: [Complex; 2], rows: [Complex; 3]| {
        let dm = Mat3::diag([d[0].clone(), d[1].clone(), prec.complex(1)]);
        let scaled = Mat3::from_fn(prec, |i, j| {
            Complex::with_val(prec.bits(), &v[i][j] * &rows[i])
        });
        &scaled * &dm
    };
    let l = build(v, d, [icbrt.clone(), one.clone(), cbrt.clone()]);
    let lt = build(vt, dt, [cbrt, one, icbrt]);
    Ok((l, lt))
}

/// Exponential factors `e^{∓3ω z^{1/3}}, e^{∓3ω² z^{1/3}}, e^{∓3 z^{1/3}}`
/// in the half-plane order; `sign = -1` for `Φ` and `+1` for `Ψ`.
fn exponential_diagonal(z: &SectorPoint, upper: bool, sign: i32, prec: Precision) -> [Complex; 3] {
    let omega = prec.cis(&(prec.pi() * 2u32 / 3u32));
    let omega2 = Complex::with_val(prec.bits(), omega.square_ref());
    let cbrt = z.pow_real(&(prec.real(1) / 3u32), prec) * (3 * sign);
    let e = |w: &Complex| Complex::with_val(prec.bits(), &cbrt * w).exp();
    if upper {
        [e(&omega), e(&omega2), e(&prec.complex(1))]
    } else {
        [e(&omega2), e(&omega), e(&prec.complex(1))]
    }
}

/// `‖T_α Φ_α(x) D(x)⁻¹ L_α(x)⁻¹ (√3/2π) x^{2β/3} - I‖` at a positive real
/// `x`, using boundary values from the upper half-plane.
pub fn expansion_residual(alpha: &Float, x: &Float, prec: Precision) -> Result<Float> {
    if *x < 100 {
        return Err(Error::Domain("expansion residual needs x >= 100".into()));
    }
    let frame = asymptotic_frame(alpha, prec)?;
    let z = SectorPoint::positive(x)?;
    let phi = phi_matrix_at(alpha, &z, Some(Side::Plus), prec)?.value;
    let (l, _) = l_frames_on(alpha, &z, true, prec)?;
    let d = exponential_diagonal(&z, true, -1, prec);
    let dinv = Mat3::diag(d.map(|v| 1 / v));
    let k = prec.real(3).sqrt() / (prec.pi() * 2u32);
    let scale = z.pow_real(&(frame.beta.clone() * 2u32 / 3u32), prec) * k;
    let r = &(&(&frame.t * &phi) * &dinv) * &l.inverse();
    Ok(r.scale(&scale).sub(&Mat3::identity(prec)).max_abs())
}

/// The counterpart of [`expansion_residual`] for `Ψ_α` with `T̃_α`, `L̃_α`.
pub fn expansion_residual_psi(alpha: &Float, x: &Float, prec: Precision) -> Result<Float> {
    if *x < 100 {
        return Err(Error::Domain("expansion residual needs x >= 100".into()));
    }
    let frame = asymptotic_frame(alpha, prec)?;
    let z = SectorPoint::positive(x)?;
    let psi = psi_matrix_at(alpha, &z, Some(Side::Plus), prec)?.value;
    let (_, lt) = l_frames_on(alpha, &z, true, prec)?;
    let d = exponential_diagonal(&z, true, 1, prec);
    let dinv = Mat3::diag(d.map(|v| 1 / v));
    let k = -(prec.real(3).sqrt() / (prec.pi() * 2u32));
    let scale = z.pow_real(&(frame.beta.clone() * -2i32 / 3u32), prec) * k;
    let r = &(&(&frame.t_t * &psi) * &dinv) * &lt.inverse();
    Ok(r.scale(&scale).sub(&Mat3::identity(prec)).max_abs())
}

/// One named identity check with its residual and tolerance.
#[derive(Clone, Debug)]
pub struct InvariantCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl InvariantCheck {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Determinant in each quadrant, jumps of `Φ_α` and `Ψ_α` on every ray at
/// three radii, the inverse and constant-product identities, and the frame
/// identities.
pub fn invariant_suite(alpha: &Float, prec: Precision) -> Result<Vec<InvariantCheck>> {
    let mut out = Vec::new();
    let mut push = |name: String, residual: f64, tolerance: f64| {
        out.push(InvariantCheck {
            name,
            residual,
            tolerance,
        })
    };
    for t in [0.7, 2.2, -0.4, -2.9] {
        let z = SectorPoint::from_f64(0.9, t, prec)?;
        let d = phi_matrix(alpha, &z, prec)?.det();
        let r = crate::mp::rel_diff(&d, &phi_determinant(alpha, &z, prec));
        push(format!("det arg={t}"), r, 1e-18);
    }
    for r in [0.3, 1.0, 3.0] {
        let rr = prec.real(r);
        for ray in Ray::ALL {
            push(
                format!("phi jump {} r={r}", ray.name()),
                phi_jump_residual(alpha, ray, &rr, prec)?,
                1e-18,
            );
            push(
                format!("psi jump {} r={r}", ray.name()),
                psi_jump_residual(alpha, ray, &rr, prec)?,
                1e-18,
            );
        }
    }
    let frame = asymptotic_frame(alpha, prec)?;
    let target = Mat3::identity(prec).scale(&prec.complex(-(prec.pi().square() * 4u32)));
    for (r, t) in [(0.5, 0.5), (2.0, 0.5), (1.3, 2.4), (0.8, -1.0), (2.5, -2.7)] {
        let z = SectorPoint::from_f64(r, t, prec)?;
        let prod = &phi_matrix(alpha, &z, prec)? * &psi_matrix(alpha, &z, prec)?.transpose();
        let full = &(&frame.t * &prod) * &frame.t_t.transpose();
        let resid = full.sub(&target).max_abs().to_f64();
        push(format!("inverse r={r} arg={t}"), resid, 1e-16);
    }
    let c = connection_matrix(alpha, prec);
    let tt = &frame.t_t.transpose() * &frame.t;
    push(
        "frame T~^T T = C".into(),
        tt.sub(&c).max_abs().to_f64(),
        1e-25,
    );
    for t in [1.0, -2.0] {
        let z = SectorPoint::from_f64(2.0, t, prec)?;
        let (l, lt) = l_frames(alpha, &z, prec)?;
        let prod = &l * &lt.transpose();
        let resid = prod
            .sub(&Mat3::identity(prec).scale(&prec.complex(3)))
            .max_abs()
            .to_f64();
        push(format!("frame L L~^T = 3I arg={t}"), resid, 1e-25);
    }
    Ok(out)
}

//! Equilibrium measures for the energy `½I(μ) + ½I_{1/2}(μ) + ∫V dμ`.
//!
//! For `V(x) = x` the density is known in closed form and, independently,
//! as the imaginary part of a root of a cubic spectral curve. For general
//! fields a discretized minimizer over piecewise-constant densities is
//! provided. The g-functions and the conformal map at the hard edge are built
//! on top of either kind of solution.

mod cells;
mod explicit;
mod gfun;
mod minimize;

pub use explicit::{
    density_vx_cardano, density_vx_explicit, fit_edge_constant, fit_origin_constant,
    solution_vx_explicit, spectral_curve_discriminant, spectral_curve_roots, VX_C0, VX_C1, VX_Q,
};
pub use gfun::{g_functions, scaling_constants, GFunctions, ScalingConstants};
pub use minimize::{
    equilibrium_minimize, graded_edges, potential, project_simplex, variational_residual,
    MinimizeOptions, VariationalResidual,
};

use crate::error::{Error, Result};
use crate::mp::Precision;
use rug::{Complex, Float};
use std::fmt;
use std::sync::Arc;

/// A real-analytic external field, evaluated on the real axis and at
/// complex points near it.
pub trait ExternalField: Send + Sync {
    fn eval(&self, z: &Complex) -> Complex;

    fn eval_f64(&self, x: f64) -> f64 {
        self.eval(&Complex::with_val(64, (x, 0))).real().to_f64()
    }

    fn name(&self) -> String;
}

/// `V(x) = x`, the Laguerre case.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearField;

impl ExternalField for LinearField {
    fn eval(&self, z: &Complex) -> Complex {
        z.clone()
    }

    fn eval_f64(&self, x: f64) -> f64 {
        x
    }

    fn name(&self) -> String {
        "x".into()
    }
}

/// `V(x) = Σ c_k x^k`.
#[derive(Clone, Debug)]
pub struct PolynomialField {
    pub coeffs: Vec<f64>,
}

impl PolynomialField {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().skip(1).all(|c| *c == 0.0) {
            return Err(Error::Domain(
                "a polynomial field needs a nonconstant term".into(),
            ));
        }
        Ok(PolynomialField { coeffs })
    }
}

impl ExternalField for PolynomialField {
    fn eval(&self, z: &Complex) -> Complex {
        let bits = z.prec().0;
        let mut acc = Complex::new(bits);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += Float::with_val(bits, *c);
        }
        acc
    }

    fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn name(&self) -> String {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("poly({})", terms.join(","))
    }
}

/// A density evaluator taking the point and the working precision.
pub type DensityEval = dyn Fn(&Float, Precision) -> Result<Float> + Send + Sync;

/// A density on `[0, q]` that can be evaluated at any working precision.
#[derive(Clone)]
pub struct DensityFn(pub Arc<DensityEval>);

impl fmt::Debug for DensityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DensityFn")
    }
}

/// A measure with piecewise-constant density on consecutive cells.
///
/// `nodes` are the cell midpoints and `weights` the cell masses.
#[derive(Clone, Debug)]
pub struct GridMeasure {
    pub edges: Vec<Float>,
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
    pub mass: Float,
}

impl GridMeasure {
    /// Checks the invariants and records the total mass.
    pub fn new(edges: Vec<Float>, weights: Vec<Float>) -> Result<Self> {
        if edges.len() != weights.len() + 1 || weights.is_empty() {
            return Err(Error::Domain(
                "a grid measure needs one more edge than weights".into(),
            ));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(
                "cell edges must be strictly increasing".into(),
            ));
        }
        if edges[0] < 0 {
            return Err(Error::Domain("cells must lie in [0, ∞)".into()));
        }
        if weights.iter().any(|w| *w < 0) {
            return Err(Error::Domain("weights must be nonnegative".into()));
        }
        let bits = weights[0].prec();
        let nodes = edges
            .windows(2)
            .map(|w| Float::with_val(bits, &w[0] + &w[1]) / 2u32)
            .collect();
        let mass = Float::with_val(bits, Float::sum(weights.iter()));
        Ok(GridMeasure {
            edges,
            nodes,
            weights,
            mass,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Equal cells on `[0, upper]`.
    pub fn uniform_edges(upper: f64, m: usize, prec: Precision) -> Vec<Float> {
        let top = prec.real(upper);
        (0..=m)
            .map(|k| Float::with_val(prec.bits(), &top * k as u32) / m as u32)
            .collect()
    }

    /// Cell densities `w_i / (b_i - a_i)`.
    pub fn cell_densities(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(self.edges.windows(2))
            .map(|(w, e)| w.to_f64() / (e[1].to_f64() - e[0].to_f64()))
            .collect()
    }

    /// Mass of `[0, x]`, splitting a cell proportionally.
    pub fn cumulative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (w, e) in self.weights.iter().zip(self.edges.windows(2)) {
            let (a, b) = (e[0].to_f64(), e[1].to_f64());
            if x >= b {
                acc += w.to_f64();
            } else if x > a {
                acc += w.to_f64() * (x - a) / (b - a);
            }
        }
        acc
    }

    /// CSV with columns `node,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,weight\n");
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            out.push_str(&format!("{},{}\n", x.to_f64(), w.to_f64()));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<f64> = self.nodes.iter().map(|x| x.to_f64()).collect();
        let weights: Vec<f64> = self.weights.iter().map(|x| x.to_f64()).collect();
        serde_json::json!({ "nodes": nodes, "weights": weights, "mass": self.mass.to_f64() })
    }
}

/// An equilibrium measure together with its support endpoint, Lagrange
/// constant and endpoint constants.
///
/// `c0` and `c1` are the coefficients of `s^{-2/3}` at the hard edge and of
/// `(q - s)^{1/2}` at the soft edge; `c_v = (2π/√3) c0` sets the hard-edge
/// scale.
#[derive(Clone, Debug)]
pub struct EquilibriumSolution {
    pub mu: GridMeasure,
    pub q: Float,
    pub ell: Float,
    pub c0: Float,
    pub c1: Float,
    pub c_v: Float,
    /// The exact density, when known; g-functions then use quadrature
    /// instead of the cell representation.
    pub density: Option<DensityFn>,
    pub iterations: usize,
    pub objective_history: Vec<f64>,
    pub warnings: Vec<String>,
}

/// `c_V = (2π/√3) c0`.
pub fn hard_edge_scale(c0: &Float) -> Float {
    let bits = c0.prec();
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let root3 = Float::with_val(bits, 3).sqrt();
    pi * 2u32 / root3 * c0
}

/// Which side of the real axis a boundary value is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

impl HalfPlane {
    /// Side of a point, falling back to `hint` on the real axis.
    pub fn of(z: &Complex, hint: HalfPlane) -> HalfPlane {
        if z.imag().is_sign_positive() && !z.imag().is_zero() {
            HalfPlane::Upper
        } else if z.imag().is_sign_negative() && !z.imag().is_zero() {
            HalfPlane::Lower
        } else {
            hint
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            HalfPlane::Upper => 1,
            HalfPlane::Lower => -1,
        }
    }
}

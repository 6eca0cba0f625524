//! Finite-n Muttalib-Borodin ensembles with parameter 1/2 and weight
//! `x^α e^{-nV(x)}`.
//!
//! The biorthogonal polynomials are built from half-integer moments by an
//! LDU factorization of the Gram matrix `G_{jk} = ∫ x^{j + k/2} w(x) dx`, so
//! the construction itself needs no quadrature. On top of them sit the
//! finite-n correlation kernel, the multiple-orthogonality reformulation,
//! the Christoffel-Darboux formula through the 3x3 Riemann-Hilbert matrix,
//! and the hard-edge scaling experiment.

mod cauchy;
mod converge;
mod moments;

pub use cauchy::{cd_formula_check, y_boundary, y_off_axis, y_row_polynomials, YRows};
pub use converge::{convergence_csv, hard_edge_convergence, ConvergenceRow};
pub use moments::{moments, MomentTable, WeightField};

use crate::error::{Error, Result};
use crate::mp::{ldu_decompose, quad_ts_tol, Precision, RealMatrix};
use rug::{Complex, Float};

/// Working digits needed to build `nmax + 1` biorthogonal pairs reliably.
pub fn required_digits(nmax: usize) -> u32 {
    64.max(10 * nmax as u32)
}

/// Biorthogonal pairs `p_j`, `q_j` for `j = 0..=nmax`.
///
/// `p[j]` holds the ascending coefficients of the monic `p_j(x)`; `q[j]`
/// those of `q_j(y)` with `y = x^{1/2}`, so that
/// `∫ p_j(x) q_k(x^{1/2}) w(x) dx = δ_{jk}`.
#[derive(Clone, Debug)]
pub struct BiorthoSystem {
    pub nmax: usize,
    pub p: Vec<Vec<Float>>,
    pub q: Vec<Vec<Float>>,
    pub gram: RealMatrix,
    pub moments: MomentTable,
    prec: Precision,
}

impl BiorthoSystem {
    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn precision_digits(&self) -> u32 {
        self.prec.digits()
    }

    /// Ensemble size `n` of the underlying weight.
    pub fn n(&self) -> usize {
        self.moments.n
    }

    pub fn p_eval(&self, j: usize, x: &Float) -> Float {
        horner(&self.p[j], x)
    }

    pub fn q_eval(&self, j: usize, y: &Float) -> Float {
        horner(&self.q[j], y)
    }

    /// `∫ f(x) g(x^{1/2}) w(x) dx` for polynomials given by coefficients,
    /// recombined from the moment table.
    pub fn pair_integral(&self, f: &[Float], g: &[Float]) -> Float {
        let bits = self.prec.bits();
        let mut acc = Float::new(bits);
        for (i, a) in f.iter().enumerate() {
            for (l, b) in g.iter().enumerate() {
                acc += Float::with_val(bits, a * b) * self.moments.value(2 * i + l);
            }
        }
        acc
    }

    /// Largest `|∫ p_j q_k w - δ_{jk}|` over `j, k ≤ nmax`.
    pub fn biortho_residual(&self) -> Float {
        let bits = self.prec.bits();
        let mut worst = Float::new(bits);
        for j in 0..=self.nmax {
            for k in 0..=self.nmax {
                let mut v = self.pair_integral(&self.p[j], &self.q[k]);
                if j == k {
                    v -= 1u32;
                }
                worst = worst.max(&v.abs());
            }
        }
        worst
    }
}

pub(crate) fn horner(coeffs: &[Float], x: &Float) -> Float {
    let bits = coeffs[0].prec();
    let mut acc = Float::new(bits);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// Builds `p_j`, `q_j` for `j ≤ nmax` from the LDU factors of the Gram matrix.
///
/// With `G = L D U`, the rows of `L⁻¹` are the coefficients of the `p_j`
/// and the columns of `U⁻¹ D⁻¹` those of the `q_j`. A vanishing pivot is
/// reported as [`Error::SingularMinor`]; the failing degree is `minor - 1`.
pub fn biortho_build(mt: &MomentTable, nmax: usize) -> Result<BiorthoSystem> {
    let prec = mt.precision();
    if prec.digits() < required_digits(nmax) {
        return Err(Error::Domain(format!(
            "nmax = {nmax} needs at least {} digits, the moments carry {}",
            required_digits(nmax),
            prec.digits()
        )));
    }
    if mt.max_halves() < 3 * nmax {
        return Err(Error::Domain(format!(
            "nmax = {nmax} needs moments up to exponent {}",
            3 * nmax / 2
        )));
    }
    let size = nmax + 1;
    let gram = RealMatrix::from_fn(size, prec, |j, k| mt.value(2 * j + k).clone());
    let ldu = ldu_decompose(&gram, prec)?;
    let l_inv = ldu.l.inverse_unit_lower();
    let u_inv = ldu.u.transpose().inverse_unit_lower().transpose();
    let p = (0..size)
        .map(|j| (0..=j).map(|i| l_inv[(j, i)].clone()).collect())
        .collect();
    let q = (0..size)
        .map(|k| {
            (0..=k)
                .map(|l| Float::with_val(prec.bits(), &u_inv[(l, k)] / &ldu.d[k]))
                .collect()
        })
        .collect();
    Ok(BiorthoSystem {
        nmax,
        p,
        q,
        gram,
        moments: mt.clone(),
        prec,
    })
}

/// The two equivalent sets of conditions characterizing the monic `p_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conditions {
    /// `∫ p_n(x) x^{k/2} w(x) dx = 0` for `k < n`.
    HalfPowers,
    /// `∫ p_n(x) x^k w_i(x) dx = 0` with `w_i = x^{(i-1)/2} w`, `i ∈ {1, 2}`,
    /// `k ≤ ⌊(n-i)/2⌋`.
    MultipleWeights,
}

/// Exponents, in half units, of the moments tested by each condition.
fn condition_exponents(n: usize, set: Conditions) -> Vec<usize> {
    match set {
        Conditions::HalfPowers => (0..n).collect(),
        Conditions::MultipleWeights => {
            let mut out = Vec::with_capacity(n);
            for i in 1..=2usize {
                if n < i {
                    continue;
                }
                for k in 0..=(n - i) / 2 {
                    out.push(2 * k + (i - 1));
                }
            }
            out
        }
    }
}

/// Solves the condition set directly, by Gaussian elimination with partial
/// pivoting, for the coefficients of the monic `p_n`.
pub fn monic_from_conditions(mt: &MomentTable, n: usize, set: Conditions) -> Result<Vec<Float>> {
    let prec = mt.precision();
    let bits = prec.bits();
    let rows = condition_exponents(n, set);
    if rows.len() != n {
        return Err(Error::Domain(format!(
            "{} conditions for degree {n}",
            rows.len()
        )));
    }
    if mt.max_halves() < 2 * n + rows.iter().copied().max().unwrap_or(0) {
        return Err(Error::Domain(format!(
            "moment table too short for degree {n}"
        )));
    }
    let mut a: Vec<Vec<Float>> = rows
        .iter()
        .map(|&e| (0..n).map(|c| mt.value(2 * c + e).clone()).collect())
        .collect();
    let mut b: Vec<Float> = rows.iter().map(|&e| -mt.value(2 * n + e).clone()).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .clone()
                    .abs()
                    .partial_cmp(&a[j][col].clone().abs())
                    .unwrap()
            })
            .unwrap();
        if a[piv][col].is_zero() {
            return Err(Error::SingularMinor { minor: col + 1 });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = Float::with_val(bits, &a[r][col] / &a[col][col]);
            for c in col..n {
                let upd = Float::with_val(bits, &f * &a[col][c]);
                a[r][c] -= upd;
            }
            let upd = Float::with_val(bits, &f * &b[col]);
            b[r] -= upd;
        }
    }
    let mut x = vec![Float::new(bits); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= Float::with_val(bits, &a[r][c] * &x[c]);
        }
        x[r] = acc / &a[r][r];
    }
    x.push(prec.real(1));
    Ok(x)
}

/// Largest `|∫ p_n(x) x^k w_i(x) dx|` over `i ∈ {1, 2}`,
/// `k ≤ ⌊(n-i)/2⌋` and `1 ≤ n ≤ nmax`.
pub fn multiple_orthogonality_check(bs: &BiorthoSystem) -> Float {
    let bits = bs.prec.bits();
    let mut worst = Float::new(bits);
    for n in 1..=bs.nmax {
        for e in condition_exponents(n, Conditions::MultipleWeights) {
            let mut acc = Float::new(bits);
            for (c, a) in bs.p[n].iter().enumerate() {
                acc += Float::with_val(bits, a * bs.moments.value(2 * c + e));
            }
            worst = worst.max(&acc.abs());
        }
    }
    worst
}

/// Largest coefficient difference, relative to the coefficient size,
/// between the LDU `p_n` and the direct solutions of both condition sets.
pub fn condition_equivalence(bs: &BiorthoSystem) -> Result<Float> {
    let bits = bs.prec.bits();
    let mut worst = Float::new(bits);
    for n in 1..=bs.nmax {
        let scale = bs.p[n].iter().fold(Float::with_val(bits, 1), |m, c| {
            m.max(&Float::with_val(bits, c.abs_ref()))
        });
        for set in [Conditions::HalfPowers, Conditions::MultipleWeights] {
            let direct = monic_from_conditions(&bs.moments, n, set)?;
            for (a, b) in direct.iter().zip(&bs.p[n]) {
                let d = Float::with_val(bits, a - b).abs() / &scale;
                worst = worst.max(&d);
            }
        }
    }
    Ok(worst)
}

/// `w(y) Σ_{j<n} p_j(x) q_j(y^{1/2})`, the correlation kernel of the
/// n-point ensemble.
pub fn finite_kernel(bs: &BiorthoSystem, x: &Float, y: &Float) -> Result<Float> {
    let n = bs.n();
    if n == 0 || n > bs.nmax + 1 {
        return Err(Error::Domain(format!(
            "the kernel of size {n} needs polynomials up to degree {}",
            n.saturating_sub(1)
        )));
    }
    if !(*x > 0) || !(*y > 0) {
        return Err(Error::Domain("kernel arguments must be positive".into()));
    }
    let bits = bs.prec.bits();
    let x = Float::with_val(bits, x);
    let y = Float::with_val(bits, y);
    let root = Float::with_val(bits, y.sqrt_ref());
    let mut acc = Float::new(bits);
    for j in 0..n {
        acc += bs.p_eval(j, &x) * bs.q_eval(j, &root);
    }
    Ok(acc * bs.moments.weight(&y))
}

/// `∫_0^∞ K_n(x, x) dx` by tanh-sinh quadrature to relative tolerance `tol`.
pub fn kernel_trace(bs: &BiorthoSystem, tol: f64) -> Result<Float> {
    let n = bs.n();
    let prec = bs.prec;
    let degree = 3 * n.saturating_sub(1);
    let end = bs.moments.domain_end(degree, tol)?;
    let tol_f = prec.real(tol);
    let integrand = |x: &Float| -> Complex {
        let v = finite_kernel(bs, x, x).unwrap_or_else(|_| Float::new(prec.bits()));
        Complex::with_val(prec.bits(), v)
    };
    let split = Float::with_val(prec.bits(), &end / 8u32);
    let head = quad_ts_tol(integrand, &prec.real(0), &split, 12, &tol_f, prec)?;
    let tail = quad_ts_tol(integrand, &split, &end, 12, &tol_f, prec)?;
    Ok(Float::with_val(prec.bits(), (head + tail).real()))
}

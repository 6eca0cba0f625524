use super::Precision;
use crate::error::{Error, Result};
use rug::Float;
use std::ops::{Index, IndexMut};

/// Dense square matrix of arbitrary-precision reals, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<Float>,
}

impl RealMatrix {
    pub fn zeros(n: usize, prec: Precision) -> Self {
        RealMatrix {
            n,
            data: vec![prec.real(0); n * n],
        }
    }

    pub fn identity(n: usize, prec: Precision) -> Self {
        let mut m = Self::zeros(n, prec);
        for i in 0..n {
            m[(i, i)] = prec.real(1);
        }
        m
    }

    pub fn from_fn(n: usize, prec: Precision, mut f: impl FnMut(usize, usize) -> Float) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(Float::with_val(prec.bits(), f(i, j)));
            }
        }
        RealMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let bits = self.data[0].prec();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Float::new(bits);
                for k in 0..n {
                    acc += Float::with_val(bits, &self[(i, k)] * &other[(k, j)]);
                }
                out.push(acc);
            }
        }
        RealMatrix { n, data: out }
    }

    pub fn transpose(&self) -> RealMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self[(j, i)].clone());
            }
        }
        RealMatrix { n, data }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Float {
        let bits = self.data[0].prec();
        self.data.iter().fold(Float::new(bits), |m, v| {
            m.max(&Float::with_val(bits, v.abs_ref()))
        })
    }

    pub fn sub(&self, other: &RealMatrix) -> RealMatrix {
        let bits = self.data[0].prec();
        RealMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| Float::with_val(bits, a - b))
                .collect(),
        }
    }

    /// Inverse of a unit lower-triangular matrix by forward substitution.
    pub fn inverse_unit_lower(&self) -> RealMatrix {
        let n = self.n;
        let bits = self.data[0].prec();
        let mut inv = RealMatrix {
            n,
            data: vec![Float::new(bits); n * n],
        };
        for j in 0..n {
            inv[(j, j)] = Float::with_val(bits, 1);
            for i in j + 1..n {
                let mut acc = Float::new(bits);
                for k in j..i {
                    acc += Float::with_val(bits, &self[(i, k)] * &inv[(k, j)]);
                }
                inv[(i, j)] = -acc;
            }
        }
        inv
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = Float;
    fn index(&self, (i, j): (usize, usize)) -> &Float {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Float {
        &mut self.data[i * self.n + j]
    }
}

/// Factors `G = L D U` with `L` unit lower, `D` diagonal, `U` unit upper.
#[derive(Clone, Debug)]
pub struct Ldu {
    pub l: RealMatrix,
    pub d: Vec<Float>,
    pub u: RealMatrix,
}

impl Ldu {
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.l.size();
        let mut du = self.u.clone();
        for i in 0..n {
            for j in 0..n {
                du[(i, j)] *= &self.d[i];
            }
        }
        self.l.mul(&du)
    }

    /// Solves `G x = rhs` with the stored factors.
    pub fn solve(&self, rhs: &[Float]) -> Vec<Float> {
        let n = self.l.size();
        let bits = self.d[0].prec();
        let mut y: Vec<Float> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Float::with_val(bits, &rhs[i]);
            for (k, yk) in y.iter().enumerate() {
                acc -= Float::with_val(bits, &self.l[(i, k)] * yk);
            }
            y.push(acc);
        }
        for (yi, di) in y.iter_mut().zip(&self.d) {
            *yi /= di;
        }
        for i in (0..n).rev() {
            let mut acc = y[i].clone();
            for k in i + 1..n {
                acc -= Float::with_val(bits, &self.u[(i, k)] * &y[k]);
            }
            y[i] = acc;
        }
        y
    }
}

/// Unpivoted Doolittle factorization `G = L D U`.
///
/// Fails with the order of the first leading principal minor whose pivot
/// falls below `10^(-digits/2)` times the corresponding row norm of `G`.
pub fn ldu_decompose(g: &RealMatrix, prec: Precision) -> Result<Ldu> {
    let n = g.size();
    let bits = prec.bits();
    let threshold = prec.ten_pow_neg((prec.digits() / 2) as i32);
    let mut a = g.clone();
    let mut l = RealMatrix::identity(n, prec);
    let mut u = RealMatrix::identity(n, prec);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let row_norm = (0..n).fold(Float::new(bits), |m, j| {
            m.max(&Float::with_val(bits, g[(k, j)].abs_ref()))
        });
        let pivot = a[(k, k)].clone();
        if Float::with_val(bits, pivot.abs_ref()) <= Float::with_val(bits, &row_norm * &threshold) {
            return Err(Error::SingularMinor { minor: k + 1 });
        }
        for i in k + 1..n {
            l[(i, k)] = Float::with_val(bits, &a[(i, k)] / &pivot);
            u[(k, i)] = Float::with_val(bits, &a[(k, i)] / &pivot);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let upd = Float::with_val(bits, &l[(i, k)] * &a[(k, j)]);
                a[(i, j)] -= upd;
            }
        }
        d.push(pivot);
    }
    Ok(Ldu { l, d, u })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factors_trivially() {
        let p = Precision::new(40).unwrap();
        let f = ldu_decompose(&RealMatrix::identity(4, p), p).unwrap();
        assert_eq!(f.l, RealMatrix::identity(4, p));
        assert_eq!(f.u, RealMatrix::identity(4, p));
        assert!(f.d.iter().all(|v| *v == 1));
    }

    #[test]
    fn two_by_two_by_hand() {
        let p = Precision::new(40).unwrap();
        let g = RealMatrix::from_fn(2, p, |i, j| p.real([[2, 1], [1, 1]][i][j]));
        let f = ldu_decompose(&g, p).unwrap();
        assert_eq!(f.l[(1, 0)], 0.5);
        assert_eq!(f.u[(0, 1)], 0.5);
        assert_eq!(f.d[0], 2);
        assert_eq!(f.d[1], 0.5);
    }

    #[test]
    fn hilbert_reconstruction() {
        let p = Precision::new(50).unwrap();
        let g = RealMatrix::from_fn(5, p, |i, j| p.real(1) / p.real((i + j + 1) as u32));
        let f = ldu_decompose(&g, p).unwrap();
        let resid = f.reconstruct().sub(&g).max_abs();
        let bound = p.ten_pow_neg(50 - 6) * g.max_abs();
        assert!(resid <= bound);
        let x = f.solve(&[p.real(1), p.real(0), p.real(0), p.real(0), p.real(0)]);
        // First column of the inverse Hilbert matrix of order 5.
        for (v, e) in x.iter().zip([25, -300, 1050, -1400, 630]) {
            assert!((v.clone() - p.real(e)).abs() < 1e-35);
        }
    }

    #[test]
    fn singular_minor_is_named() {
        let p = Precision::new(40).unwrap();
        let g = RealMatrix::from_fn(3, p, |i, j| p.real([[1, 2, 3], [2, 4, 5], [3, 5, 6]][i][j]));
        match ldu_decompose(&g, p) {
            Err(Error::SingularMinor { minor }) => assert_eq!(minor, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_lower_inverse() {
        let p = Precision::new(40).unwrap();
        let l = RealMatrix::from_fn(3, p, |i, j| {
            p.real([[1, 0, 0], [2, 1, 0], [-1, 3, 1]][i][j])
        });
        let prod = l.mul(&l.inverse_unit_lower());
        assert_eq!(prod, RealMatrix::identity(3, p));
    }
}

use super::{cabs, Precision};
use rug::{Complex, Float};
use std::ops::{Index, IndexMut, Mul};

/// Dense 3x3 matrix of arbitrary-precision complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3 {
    entries: [[Complex; 3]; 3],
}

impl Mat3 {
    pub fn new(entries: [[Complex; 3]; 3]) -> Self {
        Mat3 { entries }
    }

    pub fn zeros(prec: Precision) -> Self {
        Self::from_fn(prec, |_, _| prec.complex(0))
    }

    pub fn identity(prec: Precision) -> Self {
        Self::from_fn(prec, |i, j| prec.complex(if i == j { 1 } else { 0 }))
    }

    pub fn diag(d: [Complex; 3]) -> Self {
        let bits = d[0].prec().0;
        let [a, b, c] = d;
        let z = || Complex::new(bits);
        Mat3::new([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    pub fn from_fn(prec: Precision, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let bits = prec.bits();
        let mut row = |i: usize| {
            [
                Complex::with_val(bits, f(i, 0)),
                Complex::with_val(bits, f(i, 1)),
                Complex::with_val(bits, f(i, 2)),
            ]
        };
        let r0 = row(0);
        let r1 = row(1);
        let r2 = row(2);
        Mat3 {
            entries: [r0, r1, r2],
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: [[Complex; 3]; 3]) -> Self {
        let [c0, c1, c2] = cols;
        let [a0, a1, a2] = c0;
        let [b0, b1, b2] = c1;
        let [d0, d1, d2] = c2;
        Mat3::new([[a0, b0, d0], [a1, b1, d1], [a2, b2, d2]])
    }

    fn bits(&self) -> u32 {
        self.entries[0][0].prec().0
    }

    pub fn transpose(&self) -> Mat3 {
        let e = &self.entries;
        Mat3::new([
            [e[0][0].clone(), e[1][0].clone(), e[2][0].clone()],
            [e[0][1].clone(), e[1][1].clone(), e[2][1].clone()],
            [e[0][2].clone(), e[1][2].clone(), e[2][2].clone()],
        ])
    }

    pub fn scale(&self, s: &Complex) -> Mat3 {
        let bits = self.bits();
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for v in row.iter_mut() {
                *v = Complex::with_val(bits, &*v * s);
            }
        }
        out
    }

    pub fn sub(&self, other: &Mat3) -> Mat3 {
        let bits = self.bits();
        let mut out = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[i][j] =
                    Complex::with_val(bits, &self.entries[i][j] - &other.entries[i][j]);
            }
        }
        out
    }

    pub fn add(&self, other: &Mat3) -> Mat3 {
        let bits = self.bits();
        let mut out = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[i][j] =
                    Complex::with_val(bits, &self.entries[i][j] + &other.entries[i][j]);
            }
        }
        out
    }

    pub fn det(&self) -> Complex {
        let bits = self.bits();
        let e = &self.entries;
        let m = |a: &Complex, b: &Complex, c: &Complex, d: &Complex| {
            Complex::with_val(bits, a * b) - Complex::with_val(bits, c * d)
        };
        let c0 = m(&e[1][1], &e[2][2], &e[1][2], &e[2][1]);
        let c1 = m(&e[1][0], &e[2][2], &e[1][2], &e[2][0]);
        let c2 = m(&e[1][0], &e[2][1], &e[1][1], &e[2][0]);
        Complex::with_val(bits, &e[0][0] * &c0) - Complex::with_val(bits, &e[0][1] * &c1)
            + Complex::with_val(bits, &e[0][2] * &c2)
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> Mat3 {
        let bits = self.bits();
        let e = &self.entries;
        let cof = |i: usize, j: usize| {
            let r = [(i + 1) % 3, (i + 2) % 3];
            let c = [(j + 1) % 3, (j + 2) % 3];
            Complex::with_val(bits, &e[r[0]][c[0]] * &e[r[1]][c[1]])
                - Complex::with_val(bits, &e[r[0]][c[1]] * &e[r[1]][c[0]])
        };
        let det = self.det();
        let mut out = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[j][i] = cof(i, j) / &det;
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> Float {
        let bits = self.bits();
        let mut m = Float::new(bits);
        for row in &self.entries {
            for v in row {
                let a = cabs(v);
                if a > m {
                    m = a;
                }
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> [Complex; 3] {
        [
            self.entries[0][j].clone(),
            self.entries[1][j].clone(),
            self.entries[2][j].clone(),
        ]
    }

    pub fn row(&self, i: usize) -> [Complex; 3] {
        self.entries[i].clone()
    }

    pub fn mul_vec(&self, v: &[Complex; 3]) -> [Complex; 3] {
        let bits = self.bits();
        let row = |i: usize| {
            let mut acc = Complex::new(bits);
            for (a, b) in self.entries[i].iter().zip(v) {
                acc += Complex::with_val(bits, a * b);
            }
            acc
        };
        [row(0), row(1), row(2)]
    }
}

impl Mul for &Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: &Mat3) -> Mat3 {
        let bits = self.bits();
        let mut out = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Complex::new(bits);
                for k in 0..3 {
                    acc += Complex::with_val(bits, &self.entries[i][k] * &rhs.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i][j]
    }
}

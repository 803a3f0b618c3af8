use std::ops::{Add, Mul, Sub};

use super::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub u11: C64,
    pub u12: C64,
    pub u21: C64,
    pub u22: C64,
}

impl Matrix2 {
    pub const fn new(u11: C64, u12: C64, u21: C64, u22: C64) -> Self {
        Self { u11, u12, u21, u22 }
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn det(&self) -> C64 {
        self.u11 * self.u22 - self.u12 * self.u21
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.u11 * v[0] + self.u12 * v[1],
            self.u21 * v[0] + self.u22 * v[1],
        ]
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, r: [C64; 2]) -> [C64; 2] {
        [
            r[0] * self.u11 + r[1] * self.u21,
            r[0] * self.u12 + r[1] * self.u22,
        ]
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.u11 * s, self.u12 * s, self.u21 * s, self.u22 * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        [self.u11, self.u12, self.u21, self.u22]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Induced 1-norm.
    pub fn norm1(&self) -> f64 {
        (self.u11.norm() + self.u21.norm()).max(self.u12.norm() + self.u22.norm())
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.u11, self.u12, self.u21, self.u22]
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, b: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.u11 * b.u11 + self.u12 * b.u21,
            self.u11 * b.u12 + self.u12 * b.u22,
            self.u21 * b.u11 + self.u22 * b.u21,
            self.u21 * b.u12 + self.u22 * b.u22,
        )
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;

    fn add(self, b: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.u11 + b.u11,
            self.u12 + b.u12,
            self.u21 + b.u21,
            self.u22 + b.u22,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;

    fn sub(self, b: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.u11 - b.u11,
            self.u12 - b.u12,
            self.u21 - b.u21,
            self.u22 - b.u22,
        )
    }
}

/// Exponential of the block matrix `[[a, e], [0, a]]`.
///
/// Returns `(exp(a), L)` where `L` is the top-right block of the 4×4
/// exponential, i.e. the derivative of `exp(a + s e)` with respect to `s`
/// at `s = 0`. The series and the squaring steps act on the 2×2 blocks
/// directly; the lower-left block stays zero throughout.
pub fn block_exp_derivative(a: Matrix2, e: Matrix2) -> (Matrix2, Matrix2) {
    let norm = a.norm1() + e.norm1();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = C64::new(0.5f64.powi(squarings), 0.0);
    let a = a.scale(scale);
    let e = e.scale(scale);

    let mut x = Matrix2::identity();
    let mut y = Matrix2::zero();
    let mut exp_a = x;
    let mut frechet = y;
    for k in 1..40 {
        let inv = C64::new(1.0 / k as f64, 0.0);
        let nx = (x * a).scale(inv);
        let ny = (x * e + y * a).scale(inv);
        x = nx;
        y = ny;
        exp_a = exp_a + x;
        frechet = frechet + y;
        if x.max_abs() + y.max_abs() < 1e-18 * (1.0 + exp_a.max_abs()) {
            break;
        }
    }
    for _ in 0..squarings {
        let next_frechet = exp_a * frechet + frechet * exp_a;
        exp_a = exp_a * exp_a;
        frechet = next_frechet;
    }
    (exp_a, frechet)
}

/// Dense square complex matrix for the multi-mode generator.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, b: &CMatrix) -> CMatrix {
        assert_eq!(self.n, b.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * b.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.data[i * self.n + j] * v[j]).sum())
            .collect()
    }

    pub fn add_assign(&mut self, b: &CMatrix) {
        for (x, y) in self.data.iter_mut().zip(&b.data) {
            *x += y;
        }
    }

    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| self.data[i * self.n + j].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    ///
    /// Intended for the small, well-conditioned generators used here
    /// (dimension up to a few tens, dissipative spectrum).
    pub fn expm(&self) -> CMatrix {
        let norm = self.norm1();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let a = self.scale(C64::new(0.5f64.powi(squarings), 0.0));
        let mut term = CMatrix::identity(self.n);
        let mut sum = term.clone();
        for k in 1..40 {
            term = term.matmul(&a).scale(C64::new(1.0 / k as f64, 0.0));
            sum.add_assign(&term);
            if term.max_abs() < 1e-18 * (1.0 + sum.max_abs()) {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum);
        }
        sum
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl From<Matrix2> for CMatrix {
    fn from(m: Matrix2) -> Self {
        Self {
            n: 2,
            data: vec![m.u11, m.u12, m.u21, m.u22],
        }
    }
}

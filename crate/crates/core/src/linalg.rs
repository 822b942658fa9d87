//! Small fixed-size matrices used by the propagators.
//!
//! Everything here is plain straight-line arithmetic so that operation
//! counts are exactly what the code says: a 3-vector dot product is three
//! multiplies and two adds, a 3x3 product is 27 multiplies and 18 adds.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Real;

/// Column 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<S = f64>(pub [S; 3]);

impl<S: Real> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Self([x, y, z])
    }

    pub fn zeros() -> Self {
        Self([S::zero(); 3])
    }

    pub fn from_f64(v: [f64; 3]) -> Self {
        Self(v.map(S::from_f64))
    }

    pub fn to_f64(&self) -> Vec3<f64> {
        Vec3(self.0.map(Real::to_f64))
    }

    pub fn scale(&self, s: S) -> Self {
        Self([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn dot(&self, other: &Self) -> S {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = other.0;
        Self([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm_squared(&self) -> S {
        self.dot(self)
    }

    pub fn norm(&self) -> S {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl<S> Index<usize> for Vec3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S> IndexMut<usize> for Vec3<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Real> Add for Vec3<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl<S: Real> Sub for Vec3<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl<S: Real> Neg for Vec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|v| -v))
    }
}

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<S = f64>(pub [[S; 3]; 3]);

impl<S: Real> Mat3<S> {
    pub fn zeros() -> Self {
        Self([[S::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        let (o, z) = (S::one(), S::zero());
        Self([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn from_f64(m: [[f64; 3]; 3]) -> Self {
        Self(m.map(|row| row.map(S::from_f64)))
    }

    pub fn to_f64(&self) -> Mat3<f64> {
        Mat3(self.0.map(|row| row.map(Real::to_f64)))
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]])
    }

    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3<S> {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn mul_vec(&self, v: &Vec3<S>) -> Vec3<S> {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    pub fn scale(&self, s: S) -> Self {
        Self(self.0.map(|row| row.map(|v| v * s)))
    }

    pub fn trace(&self) -> S {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Mat3<f64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

impl<S: Real> Mul for Mat3<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j] + self.0[i][2] * rhs.0[2][j];
            }
        }
        out
    }
}

impl<S: Real> Mul<Vec3<S>> for Mat3<S> {
    type Output = Vec3<S>;
    fn mul(self, rhs: Vec3<S>) -> Vec3<S> {
        self.mul_vec(&rhs)
    }
}

impl<S: Real> Add for Mat3<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        out
    }
}

impl<S: Real> Sub for Mat3<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        out
    }
}

/// 3x2 block stored as two columns. In a navigation factor column 0 is
/// velocity-like (m/s) and column 1 is position-like (m).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3x2<S = f64>(pub [Vec3<S>; 2]);

impl<S: Real> Mat3x2<S> {
    pub fn zeros() -> Self {
        Self([Vec3::zeros(); 2])
    }

    pub fn from_cols(c0: Vec3<S>, c1: Vec3<S>) -> Self {
        Self([c0, c1])
    }

    pub fn col(&self, j: usize) -> Vec3<S> {
        self.0[j]
    }

    pub fn scale(&self, s: S) -> Self {
        Self([self.0[0].scale(s), self.0[1].scale(s)])
    }

    /// `self * m` for a 2x2 right factor.
    pub fn mul_mat2(&self, m: &Mat2<S>) -> Self {
        let [c0, c1] = self.0;
        let col = |j: usize| c0.scale(m.0[0][j]) + c1.scale(m.0[1][j]);
        Self([col(0), col(1)])
    }

    /// `m * self` for a 3x3 left factor.
    pub fn premul(&self, m: &Mat3<S>) -> Self {
        Self([m.mul_vec(&self.0[0]), m.mul_vec(&self.0[1])])
    }

    pub fn to_f64(&self) -> Mat3x2<f64> {
        Mat3x2([self.0[0].to_f64(), self.0[1].to_f64()])
    }

    pub fn is_finite(&self) -> bool {
        self.0[0].is_finite() && self.0[1].is_finite()
    }
}

impl<S: Real> Add for Mat3x2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl<S: Real> Sub for Mat3x2<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

/// Row-major 2x2 matrix (the clock block of an SE2(3) element).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<S = f64>(pub [[S; 2]; 2]);

impl<S: Real> Mat2<S> {
    pub fn zeros() -> Self {
        Self([[S::zero(); 2]; 2])
    }

    pub fn identity() -> Self {
        Self([[S::one(), S::zero()], [S::zero(), S::one()]])
    }

    /// The nilpotent clock generator `[[0, 1], [0, 0]]`.
    pub fn shift() -> Self {
        Self([[S::zero(), S::one()], [S::zero(), S::zero()]])
    }

    pub fn scale(&self, s: S) -> Self {
        Self(self.0.map(|row| row.map(|v| v * s)))
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        Mat2(self.0.map(|row| row.map(Real::to_f64)))
    }
}

impl<S: Real> Add for Mat2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl<S: Real> Mul for Mat2<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

impl Mat2<f64> {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Dense 5x5 matrix, used for the assembled SE2(3) representation and the
/// independent matrix-exponential oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat5(pub [[f64; 5]; 5]);

impl Mat5 {
    pub fn zeros() -> Self {
        Self([[0.0; 5]; 5])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..5 {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|v| v * s)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.0.iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Places a 3x3, a 3x2 and a 2x2 block as `[[a, b], [0, d]]`.
    pub fn from_blocks(a: &Mat3<f64>, b: &Mat3x2<f64>, d: &Mat2<f64>) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = a.0[i][j];
            }
            m.0[i][3] = b.0[0][i];
            m.0[i][4] = b.0[1][i];
        }
        for i in 0..2 {
            for j in 0..2 {
                m.0[3 + i][3 + j] = d.0[i][j];
            }
        }
        m
    }

    pub fn top_left(&self) -> Mat3<f64> {
        let mut a = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                a.0[i][j] = self.0[i][j];
            }
        }
        a
    }

    pub fn top_right(&self) -> Mat3x2<f64> {
        let col = |j: usize| Vec3([self.0[0][j], self.0[1][j], self.0[2][j]]);
        Mat3x2([col(3), col(4)])
    }

    pub fn bottom_right(&self) -> Mat2<f64> {
        Mat2([[self.0[3][3], self.0[3][4]], [self.0[4][3], self.0[4][4]]])
    }
}

impl Mul for Mat5 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..5 {
            for j in 0..5 {
                out.0[i][j] = (0..5).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

impl Add for Mat5 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..5 {
            for j in 0..5 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat5 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..5 {
            for j in 0..5 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::geometry::Vec3;
use crate::Scalar;

/// Dense 3×3 matrix, row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Scalar> Mat3<T> {
    #[inline]
    pub const fn from_rows(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn zeros() -> Self {
        Self { m: [[T::zero(); 3]; 3] }
    }

    pub fn identity() -> Self {
        Self::from_diagonal(Vec3::new(T::one(), T::one(), T::one()))
    }

    pub fn from_diagonal(d: Vec3<T>) -> Self {
        let mut out = Self::zeros();
        out.m[0][0] = d.x;
        out.m[1][1] = d.y;
        out.m[2][2] = d.z;
        out
    }

    /// `a·bᵀ`
    pub fn outer(a: &Vec3<T>, b: &Vec3<T>) -> Self {
        let (a, b) = (a.to_array(), b.to_array());
        let mut out = Self::zeros();
        for (row, ai) in out.m.iter_mut().zip(a) {
            for (cell, bj) in row.iter_mut().zip(b) {
                *cell = ai * bj;
            }
        }
        out
    }

    #[inline]
    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3::from(self.m[i])
    }

    #[inline]
    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[j][i];
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse by the adjugate, or `None` if the determinant is zero or non-finite.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        let m = &self.m;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Some(Self::from_rows(adj).scale(T::one() / det))
    }

    pub fn frobenius_norm(&self) -> T {
        self.m.iter().flatten().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }
}

impl<T> Index<(usize, usize)> for Mat3<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.m[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat3<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.m[i][j]
    }
}

impl<T: Scalar> Add for Mat3<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.m.iter_mut().flatten().zip(rhs.m.iter().flatten()) {
            *a += *b;
        }
        self
    }
}

impl<T: Scalar> Sub for Mat3<T> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.m.iter_mut().flatten().zip(rhs.m.iter().flatten()) {
            *a -= *b;
        }
        self
    }
}

impl<T: Scalar> Neg for Mat3<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for Mat3<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.row(i).dot(&rhs.col(j));
            }
        }
        out
    }
}

impl<T: Scalar> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;

    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.mul_vec(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Mat3<f64>;

    #[test]
    fn inverse_round_trip() {
        let a = M::from_rows([[2.0, 1.0, 0.5], [0.0, 3.0, -1.0], [1.0, 0.0, 4.0]]);
        let inv = a.inverse().unwrap();
        let err = (a * inv - M::identity()).frobenius_norm();
        assert!(err < 1e-14, "err {err}");
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = M::outer(&Vec3::new(1.0, 2.0, 3.0), &Vec3::new(0.0, 1.0, 1.0));
        assert!(a.inverse().is_none());
    }

    #[test]
    fn determinant_of_diagonal() {
        assert_eq!(M::from_diagonal(Vec3::new(2.0, 3.0, 4.0)).determinant(), 24.0);
    }
}

use std::ops::{Add, Index, IndexMut, Mul};

use crate::geometry::Mat3;
use crate::Scalar;

pub const DIM: usize = 9;

/// Dense 9×9 matrix viewed as a 3×3 grid of 3×3 blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat9<T> {
    pub m: [[T; DIM]; DIM],
}

impl<T: Scalar> Mat9<T> {
    pub fn zeros() -> Self {
        Self { m: [[T::zero(); DIM]; DIM] }
    }

    pub fn identity() -> Self {
        let mut out = Self::zeros();
        (0..DIM).for_each(|i| out.m[i][i] = T::one());
        out
    }

    pub fn from_diagonal(d: [T; DIM]) -> Self {
        let mut out = Self::zeros();
        (0..DIM).for_each(|i| out.m[i][i] = d[i]);
        out
    }

    /// The 3×3 block at block-row `bi`, block-column `bj`.
    pub fn block(&self, bi: usize, bj: usize) -> Mat3<T> {
        let mut out = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[3 * bi + i][3 * bj + j];
            }
        }
        out
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, b: &Mat3<T>) {
        for i in 0..3 {
            for j in 0..3 {
                self.m[3 * bi + i][3 * bj + j] = b.m[i][j];
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
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

    pub fn diagonal(&self) -> [T; DIM] {
        std::array::from_fn(|i| self.m[i][i])
    }

    /// Column `j` as an array.
    pub fn col(&self, j: usize) -> [T; DIM] {
        std::array::from_fn(|i| self.m[i][j])
    }

    /// Replaces the matrix with `(A + Aᵀ) / 2`.
    pub fn symmetrize(&mut self) {
        let half = T::lit(0.5);
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let avg = (self.m[i][j] + self.m[j][i]) * half;
                self.m[i][j] = avg;
                self.m[j][i] = avg;
            }
        }
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                worst = worst.max((self.m[i][j] - self.m[j][i]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    /// Lower Cholesky factor of `A + jitter·I`, or `None` if a pivot is not positive.
    pub fn cholesky(&self, jitter: T) -> Option<Self> {
        let mut l = Self::zeros();
        for j in 0..DIM {
            let mut d = self.m[j][j] + jitter;
            for k in 0..j {
                d -= l.m[j][k] * l.m[j][k];
            }
            if !(d > T::zero()) {
                return None;
            }
            let d = d.sqrt();
            l.m[j][j] = d;
            for i in (j + 1)..DIM {
                let mut s = self.m[i][j];
                for k in 0..j {
                    s -= l.m[i][k] * l.m[j][k];
                }
                l.m[i][j] = s / d;
            }
        }
        Some(l)
    }

    pub fn mul_vec(&self, v: &[T; DIM]) -> [T; DIM] {
        std::array::from_fn(|i| (0..DIM).map(|j| self.m[i][j] * v[j]).sum())
    }
}

impl<T> Index<(usize, usize)> for Mat9<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.m[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat9<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.m[i][j]
    }
}

impl<T: Scalar> Add for Mat9<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.m.iter_mut().flatten().zip(rhs.m.iter().flatten()) {
            *a += *b;
        }
        self
    }
}

impl<T: Scalar> Mul for Mat9<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..DIM {
            for k in 0..DIM {
                let a = self.m[i][k];
                if a == T::zero() {
                    continue;
                }
                for j in 0..DIM {
                    out.m[i][j] += a * rhs.m[k][j];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_round_trip() {
        let mut a = Mat9::<f64>::zeros();
        let b = Mat3::from_rows([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]);
        a.set_block(1, 2, &b);
        assert_eq!(a.block(1, 2), b);
        assert_eq!(a[(3, 6)], 1.0);
        assert_eq!(a[(5, 8)], 9.0);
        assert_eq!(a.transpose().block(2, 1), b.transpose());
    }

    #[test]
    fn cholesky_reconstructs_spd_matrix() {
        let mut a = Mat9::<f64>::identity();
        for i in 0..DIM {
            for j in 0..DIM {
                a.m[i][j] += 0.1 / (1.0 + (i + j) as f64);
            }
        }
        a.symmetrize();
        let l = a.cholesky(0.0).unwrap();
        let err = (l * l.transpose())
            .m
            .iter()
            .flatten()
            .zip(a.m.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = Mat9::<f64>::identity();
        a.m[4][4] = -1e-6;
        assert!(a.cholesky(1e-12).is_none());
        a.m[4][4] = 0.0;
        assert!(a.cholesky(1e-12).is_some());
    }

    #[test]
    fn symmetrize_removes_asymmetry() {
        let mut a = Mat9::<f64>::identity();
        a.m[0][8] = 1.0;
        assert_eq!(a.asymmetry(), 1.0);
        a.symmetrize();
        assert_eq!(a.asymmetry(), 0.0);
        assert_eq!(a.m[8][0], 0.5);
    }
}

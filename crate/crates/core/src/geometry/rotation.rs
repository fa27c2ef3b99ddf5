use std::ops::Mul;

use crate::error::{Error, Result};
use crate::geometry::{Mat3, Vec3};
use crate::Scalar;

/// Below this angle `so3_exp` switches to its series expansion.
const SMALL_ANGLE: f64 = 1e-8;

/// Largest distance from SO(3) accepted by [`reorthonormalize`].
pub const MAX_REPAIR_DISTANCE: f64 = 0.1;

const POLAR_MAX_ITERS: usize = 32;

/// A 3×3 rotation matrix mapping body-frame vectors into the inertial frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation<T> {
    m: Mat3<T>,
}

impl<T: Scalar> Rotation<T> {
    pub fn identity() -> Self {
        Self { m: Mat3::identity() }
    }

    /// Wraps a matrix without checking orthonormality.
    ///
    /// Callers must guarantee the matrix is already in SO(3); everything else
    /// should go through [`reorthonormalize`].
    pub(crate) fn from_matrix_unchecked(m: Mat3<T>) -> Self {
        Self { m }
    }

    #[inline]
    pub fn matrix(&self) -> &Mat3<T> {
        &self.m
    }

    #[inline]
    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    #[inline]
    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        self.m.mul_vec(v)
    }

    /// `‖RᵀR − I‖_F`
    pub fn orthonormality_error(&self) -> T {
        orthonormality_error(&self.m)
    }

    /// Geodesic angle of this rotation in `[0, π]`.
    pub fn angle(&self) -> T {
        let m = &self.m;
        let two = T::lit(2.0);
        let cos = (self.m.trace() - T::one()) / two;
        let axis = Vec3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
        (axis.norm() / two).atan2(cos)
    }

    /// Geodesic distance between two rotations.
    pub fn angle_to(&self, other: &Self) -> T {
        (self.transpose() * *other).angle()
    }

    /// Z-Y-X Euler angles `(yaw, pitch, roll)` in radians.
    pub fn yaw_pitch_roll(&self) -> (T, T, T) {
        let m = &self.m;
        let pitch = (-m[(2, 0)]).max(-T::one()).min(T::one()).asin();
        let yaw = m[(1, 0)].atan2(m[(0, 0)]);
        let roll = m[(2, 1)].atan2(m[(2, 2)]);
        (yaw, pitch, roll)
    }
}

impl<T: Scalar> Mul for Rotation<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self { m: self.m * rhs.m }
    }
}

impl<T: Scalar> Mul<Vec3<T>> for Rotation<T> {
    type Output = Vec3<T>;

    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.apply(&v)
    }
}

fn orthonormality_error<T: Scalar>(m: &Mat3<T>) -> T {
    (m.transpose() * *m - Mat3::identity()).frobenius_norm()
}

/// The matrix `S(w)` with `S(w)·y = w × y`.
pub fn skew<T: Scalar>(w: &Vec3<T>) -> Mat3<T> {
    let z = T::zero();
    Mat3::from_rows([[z, -w.z, w.y], [w.z, z, -w.x], [-w.y, w.x, z]])
}

/// Rotation exponential (Rodrigues' formula).
pub fn so3_exp<T: Scalar>(phi: &Vec3<T>) -> Rotation<T> {
    let theta_sq = phi.norm_squared();
    let theta = theta_sq.sqrt();
    let s = skew(phi);
    let s2 = s * s;
    let (a, b) = if theta < T::lit(SMALL_ANGLE) {
        (T::one(), T::lit(0.5))
    } else {
        (theta.sin() / theta, (T::one() - theta.cos()) / theta_sq)
    };
    Rotation::from_matrix_unchecked(Mat3::identity() + s.scale(a) + s2.scale(b))
}

/// Projects a matrix onto SO(3) without a distance check.
///
/// Newton iteration for the orthogonal polar factor, `X ← (X + X⁻ᵀ)/2`,
/// which converges quadratically to the nearest rotation for any
/// non-singular input with positive determinant.
pub(crate) fn project_to_so3<T: Scalar>(m: &Mat3<T>) -> Option<Rotation<T>> {
    if !m.is_finite() || m.determinant() <= T::zero() {
        return None;
    }
    let half = T::lit(0.5);
    let tol = T::epsilon() * T::lit(8.0);
    let mut x = *m;
    for _ in 0..POLAR_MAX_ITERS {
        let inv_t = x.inverse()?.transpose();
        let next = (x + inv_t).scale(half);
        let step = (next - x).frobenius_norm();
        x = next;
        if step <= tol {
            break;
        }
    }
    Some(Rotation::from_matrix_unchecked(x))
}

/// Repairs integration drift by replacing `r` with its nearest rotation.
///
/// The input must lie within [`MAX_REPAIR_DISTANCE`] of SO(3), measured as
/// `‖RᵀR − I‖_F / 2` (the first-order Frobenius distance), and have positive
/// determinant.
pub fn reorthonormalize<T: Scalar>(r: &Mat3<T>) -> Result<Rotation<T>> {
    if !r.is_finite() {
        return Err(Error::NonFinite("rotation matrix"));
    }
    let distance = orthonormality_error(r) / T::lit(2.0);
    if distance > T::lit(MAX_REPAIR_DISTANCE) || r.determinant() <= T::zero() {
        return Err(Error::NotARotation(distance.as_f64()));
    }
    project_to_so3(r).ok_or(Error::NotARotation(distance.as_f64()))
}

use crate::error::{Error, Result};
use crate::geometry::{reorthonormalize, so3_exp, Rotation, Vec3};
use crate::Scalar;

/// Gravity in the inertial frame [m/s²].
pub fn gravity<T: Scalar>() -> Vec3<T> {
    Vec3::new(T::zero(), T::zero(), T::lit(-9.81))
}

/// Ground-truth kinematic state of the agent.
///
/// `accel` (inertial frame) and `angular_velocity` (body frame) are the inputs
/// held over the current integration step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidBodyTruth<T> {
    pub position: Vec3<T>,
    pub velocity: Vec3<T>,
    pub attitude: Rotation<T>,
    pub angular_velocity: Vec3<T>,
    pub accel: Vec3<T>,
}

impl<T: Scalar> RigidBodyTruth<T> {
    pub fn at_rest(position: Vec3<T>) -> Self {
        Self {
            position,
            velocity: Vec3::zeros(),
            attitude: Rotation::identity(),
            angular_velocity: Vec3::zeros(),
            accel: Vec3::zeros(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite()
            && self.velocity.is_finite()
            && self.attitude.matrix().is_finite()
            && self.angular_velocity.is_finite()
            && self.accel.is_finite()
    }

    /// Projects the attitude back onto SO(3) after long integrations.
    pub fn repair_attitude(&mut self) -> Result<()> {
        self.attitude = reorthonormalize(self.attitude.matrix())?;
        Ok(())
    }
}

/// Advances the truth by `dt` with `accel` and `angular_velocity` held constant.
pub fn step_truth<T: Scalar>(
    state: &RigidBodyTruth<T>,
    accel: Vec3<T>,
    angular_velocity: Vec3<T>,
    dt: T,
) -> Result<RigidBodyTruth<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::NonFinite("truth step interval"));
    }
    if !accel.is_finite() || !angular_velocity.is_finite() || !state.is_finite() {
        return Err(Error::NonFinite("truth inputs"));
    }
    let half = T::lit(0.5);
    Ok(RigidBodyTruth {
        position: state.position + state.velocity * dt + accel * (half * dt * dt),
        velocity: state.velocity + accel * dt,
        attitude: state.attitude * so3_exp(&(angular_velocity * dt)),
        angular_velocity,
        accel,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    type V = Vec3<f64>;

    #[test]
    fn ballistic_step() {
        let mut s = RigidBodyTruth::at_rest(V::new(1.0, 2.0, 3.0));
        s.velocity = V::new(1.0, 0.0, 0.0);
        let next = step_truth(&s, V::zeros(), V::zeros(), 0.5).unwrap();
        assert_eq!(next.position, V::new(1.5, 2.0, 3.0));
        assert_eq!(next.attitude, s.attitude);
    }

    #[test]
    fn constant_acceleration_step() {
        let s = RigidBodyTruth::at_rest(V::zeros());
        let next = step_truth(&s, V::new(0.0, 0.0, 1.0), V::zeros(), 1.0).unwrap();
        assert_eq!(next.velocity, V::new(0.0, 0.0, 1.0));
        assert_eq!(next.position, V::new(0.0, 0.0, 0.5));
    }

    #[test]
    fn half_turn_about_z() {
        let mut s = RigidBodyTruth::at_rest(V::zeros());
        for _ in 0..1000 {
            s = step_truth(&s, V::zeros(), V::new(0.0, 0.0, PI), 1e-3).unwrap();
        }
        let expected = so3_exp(&V::new(0.0, 0.0, PI));
        let diff = (*s.attitude.matrix() - *expected.matrix()).frobenius_norm();
        assert!(diff < 1e-6, "diff {diff}");
    }

    #[test]
    fn speed_conserved_without_acceleration() {
        let mut s = RigidBodyTruth::at_rest(V::zeros());
        s.velocity = V::new(0.3, -1.7, 0.2);
        let speed = s.velocity.norm();
        for _ in 0..10_000 {
            s = step_truth(&s, V::zeros(), V::new(0.1, 0.2, -0.3), 2e-3).unwrap();
        }
        assert_eq!(s.velocity.norm(), speed);
    }

    #[test]
    fn attitude_stays_in_so3_over_a_million_steps() {
        let mut s = RigidBodyTruth::at_rest(V::zeros());
        let w = V::new(0.7, -0.4, 1.3);
        for k in 0..1_000_000 {
            s = step_truth(&s, V::zeros(), w, 2e-3).unwrap();
            if k % 1000 == 999 {
                s.repair_attitude().unwrap();
            }
        }
        assert!(s.attitude.orthonormality_error() < 1e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = RigidBodyTruth::at_rest(V::zeros());
        assert!(step_truth(&s, V::zeros(), V::zeros(), 0.0).is_err());
        assert!(step_truth(&s, V::new(f64::NAN, 0.0, 0.0), V::zeros(), 0.1).is_err());
        assert!(step_truth(&s, V::zeros(), V::new(0.0, f64::INFINITY, 0.0), 0.1).is_err());
    }
}

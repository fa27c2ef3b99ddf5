//! Range-based localization with a mobile ranging anchor.
//!
//! An error-state EKF fuses accelerometer, gyroscope and UWB range
//! measurements for a 6DOF agent. A planner moves one or more mobile anchors
//! by gradient ascent on `det(AᵀA)`, the determinant of the position
//! information matrix, which shrinks the volume of the agent's position
//! covariance ellipsoid. A scenario harness closes the loop in simulation and
//! compares fixed and mobile anchor networks over Monte-Carlo trials.
//!
//! The estimator, planner and geometry are generic over [`Scalar`] (`f32` or
//! `f64`); the aliases below fix the scalar for the common cases. The harness
//! runs in `f64`.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ekf;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod planner;
mod scalar;
pub mod simworld;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Vec3d = geometry::Vec3<f64>;
pub type Vec3f = geometry::Vec3<f32>;
pub type Mat3d = geometry::Mat3<f64>;
pub type Mat3f = geometry::Mat3<f32>;
pub type Rotationd = geometry::Rotation<f64>;
pub type Rotationf = geometry::Rotation<f32>;
pub type Anchord = simworld::Anchor<f64>;
pub type Anchorf = simworld::Anchor<f32>;
pub type EstimatorStated = ekf::EstimatorState<f64>;
pub type Covariance9d = ekf::Covariance9<f64>;
pub type Ekfd = ekf::Ekf<f64>;
pub type Ekff = ekf::Ekf<f32>;
pub type InfoMatrixd = planner::InfoMatrix<f64>;
pub type InfoMatrixf = planner::InfoMatrix<f32>;

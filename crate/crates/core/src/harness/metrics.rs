use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Rotation, Vec3};

/// Position, velocity and attitude at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoseSample {
    pub position: Vec3<f64>,
    pub velocity: Vec3<f64>,
    pub attitude: Rotation<f64>,
}

/// Root-mean-square errors over a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Rmse {
    /// [m]
    pub position: f64,
    /// [m/s]
    pub velocity: f64,
    /// Geodesic angle between estimated and true attitude [deg].
    pub attitude_deg: f64,
}

impl Rmse {
    pub fn as_array(&self) -> [f64; 3] {
        [self.position, self.velocity, self.attitude_deg]
    }
}

/// RMS of the Euclidean position and velocity errors and of the geodesic
/// attitude error. Empty series give zeros.
pub fn compute_rmse(estimate: &[PoseSample], truth: &[PoseSample]) -> Result<Rmse> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch { left: estimate.len(), right: truth.len() });
    }
    if estimate.is_empty() {
        return Ok(Rmse::default());
    }
    let (mut pos, mut vel, mut att) = (0.0, 0.0, 0.0);
    for (e, t) in estimate.iter().zip(truth) {
        pos += (e.position - t.position).norm_squared();
        vel += (e.velocity - t.velocity).norm_squared();
        att += e.attitude.angle_to(&t.attitude).powi(2);
    }
    let n = estimate.len() as f64;
    let rmse =
        Rmse { position: (pos / n).sqrt(), velocity: (vel / n).sqrt(), attitude_deg: (att / n).sqrt().to_degrees() };
    if !rmse.as_array().iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("RMSE"));
    }
    Ok(rmse)
}

/// Sample mean and (n − 1) standard deviation; zero deviation for one sample.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

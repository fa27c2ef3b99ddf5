//! Error-state extended Kalman filter for a 6DOF rigid body driven by
//! accelerometer and gyroscope readings and corrected with scalar UWB ranges.
//!
//! The stochastic state is `(x, v, δ)`: position, velocity and a small
//! attitude error about a separately stored reference rotation `R_ref`, so
//! that `R̂ = R_ref (I + S(δ))`. The gyroscope is an input, not a state.
//! After every range update the attitude error is folded into `R_ref`.

mod covariance;
mod predict;
mod update;

use serde::{Deserialize, Serialize};

pub use covariance::{Block, Covariance9, PSD_JITTER, SYMMETRY_TOL};
pub use predict::{predict, transition_matrix};
pub use update::{measurement_jacobian, reset_attitude, update_range, AttitudeReset, RangeUpdate};

use crate::error::{Error, Result};
use crate::geometry::{project_to_so3, skew, so3_exp, Mat3, Rotation, Vec3};
use crate::simworld::{Anchor, ImuSample, NoiseSpec, RangeSample};
use crate::Scalar;

/// Attitude errors at or above this norm fall outside the small-angle regime [rad].
pub const MAX_ATTITUDE_ERROR: f64 = 0.5;

/// Mean of the error-state filter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorState<T> {
    pub position: Vec3<T>,
    pub velocity: Vec3<T>,
    pub attitude_error: Vec3<T>,
    pub reference: Rotation<T>,
}

impl<T: Scalar> EstimatorState<T> {
    pub fn new(position: Vec3<T>, velocity: Vec3<T>, reference: Rotation<T>) -> Self {
        Self { position, velocity, attitude_error: Vec3::zeros(), reference }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite()
            && self.velocity.is_finite()
            && self.attitude_error.is_finite()
            && self.reference.matrix().is_finite()
    }
}

/// `R̂ = R_ref (I + S(δ))`, projected onto SO(3).
pub fn estimate_attitude<T: Scalar>(state: &EstimatorState<T>) -> Rotation<T> {
    if state.attitude_error == Vec3::zeros() {
        return state.reference;
    }
    let raw = *state.reference.matrix() * (Mat3::identity() + skew(&state.attitude_error));
    project_to_so3(&raw).unwrap_or_else(|| state.reference * so3_exp(&state.attitude_error))
}

/// Filter tuning as read from a scenario file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    /// Initial position variance per axis [m²].
    pub initial_position_var: f64,
    /// Initial velocity variance per axis [(m/s)²].
    pub initial_velocity_var: f64,
    /// Initial attitude-error variance per axis [rad²].
    pub initial_attitude_var: f64,
    /// Lower bound on the range measurement variance used by the filter [m²].
    pub range_var_floor: f64,
    /// Reject ranges whose innovation exceeds this many standard deviations.
    pub gate_sigma: Option<f64>,
    /// Sensor noise the filter is tuned for. Defaults to the simulated noise.
    pub assumed_noise: Option<NoiseSpec>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            initial_position_var: 0.01,
            initial_velocity_var: 0.01,
            initial_attitude_var: 0.001,
            range_var_floor: 1e-6,
            gate_sigma: None,
            assumed_noise: None,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        let vars = [
            ("initial_position_var", self.initial_position_var),
            ("initial_velocity_var", self.initial_velocity_var),
            ("initial_attitude_var", self.initial_attitude_var),
            ("range_var_floor", self.range_var_floor),
        ];
        for (name, v) in vars {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("filter.{name} must be finite and non-negative, got {v}")));
            }
        }
        if let Some(g) = self.gate_sigma {
            if !(g > 0.0) {
                return Err(Error::Config(format!("filter.gate_sigma must be positive, got {g}")));
            }
        }
        if let Some(n) = &self.assumed_noise {
            n.validate()?;
        }
        Ok(())
    }

    pub fn initial_covariance<T: Scalar>(&self) -> Covariance9<T> {
        Covariance9::from_diagonal(
            T::lit(self.initial_position_var),
            T::lit(self.initial_velocity_var),
            T::lit(self.initial_attitude_var),
        )
    }
}

/// Noise parameters consumed by `predict` and `update_range`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterParams<T> {
    /// Accelerometer noise variance per sample [(m/s²)²].
    pub accel_var: T,
    /// Gyroscope noise variance per sample [(rad/s)²].
    pub gyro_var: T,
    /// Range measurement variance `q` [m²].
    pub range_var: T,
    pub gate_sigma: Option<T>,
}

impl<T: Scalar> FilterParams<T> {
    /// Parameters for a filter facing `noise`, unless `cfg` names the noise
    /// the filter should assume instead.
    pub fn new(noise: &NoiseSpec, cfg: &FilterConfig) -> Self {
        let noise = cfg.assumed_noise.as_ref().unwrap_or(noise);
        Self {
            accel_var: T::lit(noise.accel_std * noise.accel_std),
            gyro_var: T::lit(noise.gyro_std * noise.gyro_std),
            range_var: T::lit(noise.range_variance().max(cfg.range_var_floor)),
            gate_sigma: cfg.gate_sigma.map(T::lit),
        }
    }
}

/// Outcome of feeding one range sample to [`Ekf::update`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateReport<T> {
    pub innovation: T,
    pub innovation_var: T,
    pub gated: bool,
    pub reset_warning: bool,
}

/// A filter instance: mean, covariance and noise parameters.
#[derive(Clone, Debug)]
pub struct Ekf<T> {
    pub state: EstimatorState<T>,
    pub cov: Covariance9<T>,
    pub params: FilterParams<T>,
}

impl<T: Scalar> Ekf<T> {
    pub fn new(state: EstimatorState<T>, cov: Covariance9<T>, params: FilterParams<T>) -> Self {
        Self { state, cov, params }
    }

    pub fn attitude(&self) -> Rotation<T> {
        estimate_attitude(&self.state)
    }

    /// Propagates with one IMU sample. On error the filter is left unchanged.
    pub fn predict(&mut self, imu: &ImuSample<T>, dt: T) -> Result<()> {
        let (state, cov) = predict(&self.state, &self.cov, imu, dt, &self.params)?;
        self.state = state;
        self.cov = cov;
        Ok(())
    }

    /// Applies one range measurement. On error the filter is left unchanged.
    pub fn update(&mut self, meas: &RangeSample<T>, anchor: &Anchor<T>) -> Result<UpdateReport<T>> {
        let out = update_range(&self.state, &self.cov, meas, anchor, self.params.range_var, self.params.gate_sigma)?;
        self.state = out.state;
        self.cov = out.cov;
        Ok(UpdateReport {
            innovation: out.innovation,
            innovation_var: out.innovation_var,
            gated: out.gated,
            reset_warning: out.reset_warning,
        })
    }

    /// Position NEES `eᵀ Σ_xx⁻¹ e` against a true position.
    pub fn position_nees(&self, truth: &Vec3<T>) -> Option<T> {
        let err = *truth - self.state.position;
        let inv = self.cov.position().inverse()?;
        Some(err.dot(&inv.mul_vec(&err)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type V = Vec3<f64>;

    #[test]
    fn zero_error_gives_reference() {
        let r = so3_exp(&V::new(0.2, -0.3, 0.9));
        let s = EstimatorState::new(V::zeros(), V::zeros(), r);
        assert_eq!(estimate_attitude(&s), r);
    }

    #[test]
    fn small_error_matches_exponential() {
        let mut s = EstimatorState::new(V::zeros(), V::zeros(), Rotation::identity());
        s.attitude_error = V::new(0.0, 0.0, 1e-3);
        let diff = (*estimate_attitude(&s).matrix() - *so3_exp(&s.attitude_error).matrix()).frobenius_norm();
        assert!(diff < 1e-6, "diff {diff}");
    }

    #[test]
    fn estimate_is_a_rotation_for_small_errors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let reference =
                so3_exp(&V::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)));
            let mut s = EstimatorState::new(V::zeros(), V::zeros(), reference);
            let dir = V::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            s.attitude_error = dir.normalized().unwrap() * rng.random_range(0.0..0.3);
            let r = estimate_attitude(&s);
            assert!(r.orthonormality_error() < 1e-9);
            assert!((r.matrix().determinant() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn config_validation() {
        FilterConfig::default().validate().unwrap();
        assert!(FilterConfig { initial_position_var: -1.0, ..Default::default() }.validate().is_err());
        assert!(FilterConfig { gate_sigma: Some(0.0), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn range_variance_floor() {
        let p = FilterParams::<f64>::new(&NoiseSpec::noiseless(), &FilterConfig::default());
        assert_eq!(p.range_var, 1e-6);
        let p = FilterParams::<f64>::new(&NoiseSpec::default(), &FilterConfig::default());
        assert!((p.range_var - 0.0025).abs() < 1e-15);
        let tuned = FilterConfig { assumed_noise: Some(NoiseSpec::default()), ..Default::default() };
        let p = FilterParams::<f64>::new(&NoiseSpec::noiseless(), &tuned);
        assert!((p.range_var - 0.0025).abs() < 1e-15);
        assert_eq!(p.accel_var, 0.25);
    }
}

use crate::ekf::{estimate_attitude, Covariance9, EstimatorState, FilterParams};
use crate::error::{Error, Result};
use crate::geometry::{skew, so3_exp, Mat3, Mat9, Vec3};
use crate::simworld::{gravity, ImuSample};
use crate::Scalar;

/// First-order state-transition matrix over one IMU interval.
///
/// ```text
///     | I   I·dt   0              |
/// F = | 0   I     −R̂·S(α_m)·dt    |
///     | 0   0      exp(−γ·dt)     |
/// ```
///
/// The velocity/attitude block is the linearization of `R̂ α_m` in `δ`; the
/// attitude block re-expresses the error in the advanced reference frame.
pub fn transition_matrix<T: Scalar>(state: &EstimatorState<T>, imu: &ImuSample<T>, dt: T) -> Mat9<T> {
    let r_hat = estimate_attitude(state);
    let mut f = Mat9::identity();
    f.set_block(0, 1, &Mat3::identity().scale(dt));
    f.set_block(1, 2, &(-(*r_hat.matrix() * skew(&imu.accel)).scale(dt)));
    f.set_block(2, 2, &so3_exp(&(imu.gyro * dt)).transpose().matrix().clone());
    f
}

/// Process noise added over one IMU interval. Sensor noise is white per
/// sample, so its contribution to the velocity and attitude increments scales
/// with `dt²`.
fn process_noise<T: Scalar>(params: &FilterParams<T>, dt: T) -> Mat9<T> {
    let dt2 = dt * dt;
    let mut q = Mat9::zeros();
    q.set_block(1, 1, &Mat3::identity().scale(params.accel_var * dt2));
    q.set_block(2, 2, &Mat3::identity().scale(params.gyro_var * dt2));
    q
}

/// Euler propagation of mean and covariance with one IMU sample.
///
/// The gyro increment is folded straight into `R_ref`, keeping `δ` a pure
/// error state. The covariance is symmetrized and checked afterwards.
pub fn predict<T: Scalar>(
    state: &EstimatorState<T>,
    cov: &Covariance9<T>,
    imu: &ImuSample<T>,
    dt: T,
    params: &FilterParams<T>,
) -> Result<(EstimatorState<T>, Covariance9<T>)> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::NonFinite("prediction interval"));
    }
    if !imu.accel.is_finite() || !imu.gyro.is_finite() || !state.is_finite() {
        return Err(Error::NonFinite("prediction inputs"));
    }

    let r_hat = estimate_attitude(state);
    let accel_world: Vec3<T> = r_hat.apply(&imu.accel) + gravity();
    let step = so3_exp(&(imu.gyro * dt));

    let next = EstimatorState {
        position: state.position + state.velocity * dt,
        velocity: state.velocity + accel_world * dt,
        attitude_error: step.transpose().apply(&state.attitude_error),
        reference: state.reference * step,
    };

    let f = transition_matrix(state, imu, dt);
    let fp = f * *cov.matrix();
    // F·P·Fᵀ = F·(F·P)ᵀ because P is symmetric
    let mut p = f * fp.transpose() + process_noise(params, dt);
    p.symmetrize();
    let cov = Covariance9::from_matrix_unchecked(p);
    cov.check()?;
    Ok((next, cov))
}

use crate::ekf::{Covariance9, EstimatorState, MAX_ATTITUDE_ERROR};
use crate::error::{Error, Result};
use crate::geometry::{project_to_so3, so3_exp, Vec3, MAT9_DIM};
use crate::simworld::{Anchor, RangeSample, MIN_RANGE};
use crate::Scalar;

/// Row `H = ∂ρ/∂(x, v, δ)` of a range measurement: the unit vector from the
/// anchor to the agent, then six zeros.
pub fn measurement_jacobian<T: Scalar>(state: &EstimatorState<T>, anchor_position: &Vec3<T>) -> Result<[T; MAT9_DIM]> {
    let diff = state.position - *anchor_position;
    let dist = diff.norm();
    if !dist.is_finite() {
        return Err(Error::NonFinite("measurement geometry"));
    }
    if dist < T::lit(MIN_RANGE) {
        return Err(Error::DegenerateGeometry("estimate coincides with anchor".into()));
    }
    let e = diff / dist;
    let mut h = [T::zero(); MAT9_DIM];
    h[..3].copy_from_slice(&e.to_array());
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttitudeReset<T> {
    pub state: EstimatorState<T>,
    pub cov: Covariance9<T>,
    /// Set when the folded error was outside the small-angle regime.
    pub warning: bool,
}

/// Folds `δ` into the reference attitude and zeroes it.
///
/// The covariance is carried over unchanged (identity reset Jacobian), which
/// is correct to first order in `δ`.
pub fn reset_attitude<T: Scalar>(state: &EstimatorState<T>, cov: &Covariance9<T>) -> AttitudeReset<T> {
    let delta = state.attitude_error;
    if delta == Vec3::zeros() {
        return AttitudeReset { state: *state, cov: *cov, warning: false };
    }
    let warning = !(delta.norm() < T::lit(MAX_ATTITUDE_ERROR));
    let folded = state.reference * so3_exp(&delta);
    let reference = project_to_so3(folded.matrix()).unwrap_or(folded);
    AttitudeReset { state: EstimatorState { attitude_error: Vec3::zeros(), reference, ..*state }, cov: *cov, warning }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeUpdate<T> {
    pub state: EstimatorState<T>,
    pub cov: Covariance9<T>,
    /// `ρ − ‖x̂ − p‖`
    pub innovation: T,
    /// `H Σ Hᵀ + q`
    pub innovation_var: T,
    /// The measurement failed the innovation gate and was not applied.
    pub gated: bool,
    pub reset_warning: bool,
}

/// Scalar EKF update with one range measurement, followed by an attitude reset.
pub fn update_range<T: Scalar>(
    state: &EstimatorState<T>,
    cov: &Covariance9<T>,
    meas: &RangeSample<T>,
    anchor: &Anchor<T>,
    range_var: T,
    gate_sigma: Option<T>,
) -> Result<RangeUpdate<T>> {
    if meas.anchor_id != anchor.id {
        return Err(Error::Config(format!(
            "range sample from anchor {} applied with anchor {}",
            meas.anchor_id, anchor.id
        )));
    }
    if !meas.range.is_finite() {
        return Err(Error::NonFinite("range measurement"));
    }
    let h = measurement_jacobian(state, &anchor.position)?;
    let predicted = (state.position - anchor.position).norm();
    let innovation = meas.range - predicted;

    let p = cov.matrix();
    // Σ·Hᵀ; only the position columns of H are non-zero
    let ph: [T; MAT9_DIM] = std::array::from_fn(|i| (0..3).map(|j| p[(i, j)] * h[j]).sum());
    let s = (0..3).map(|i| h[i] * ph[i]).sum::<T>() + range_var;
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::NumericalFailure(format!("innovation variance {s} is not positive")));
    }

    if let Some(g) = gate_sigma {
        if innovation.abs() > g * s.sqrt() {
            return Ok(RangeUpdate {
                state: *state,
                cov: *cov,
                innovation,
                innovation_var: s,
                gated: true,
                reset_warning: false,
            });
        }
    }

    let gain: [T; MAT9_DIM] = ph.map(|v| v / s);
    let shift = |k: usize| Vec3::new(gain[k], gain[k + 1], gain[k + 2]) * innovation;
    let updated = EstimatorState {
        position: state.position + shift(0),
        velocity: state.velocity + shift(3),
        attitude_error: state.attitude_error + shift(6),
        reference: state.reference,
    };

    // (I − K·H)·Σ = Σ − K·(Σ·Hᵀ)ᵀ for symmetric Σ
    let mut next = *p;
    for i in 0..MAT9_DIM {
        for j in 0..MAT9_DIM {
            next[(i, j)] -= gain[i] * ph[j];
        }
    }
    next.symmetrize();
    let next = Covariance9::from_matrix_unchecked(next);
    next.check()?;

    let reset = reset_attitude(&updated, &next);
    Ok(RangeUpdate {
        state: reset.state,
        cov: reset.cov,
        innovation,
        innovation_var: s,
        gated: false,
        reset_warning: reset.warning,
    })
}

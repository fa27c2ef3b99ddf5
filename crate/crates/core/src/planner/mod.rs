//! Mobile-anchor planner: moves ranging anchors by gradient ascent on
//! `det(AᵀA)` evaluated at the agent's estimated position.
//!
//! Maximizing the determinant minimizes the volume of the least-squares
//! position covariance ellipsoid `q (AᵀA)⁻¹`. Because every row of `A` is a
//! unit vector, `tr(AᵀA)` equals the anchor count, so raising the
//! determinant also pushes the eigenvalues toward each other.
//!
//! Nothing here sees the true agent state; callers pass the filter estimate.

mod control;
mod gradient;
mod info;

pub use control::{ascend, planner_step, step_anchor, velocity_command, AscentTrace, PlannerConfig, PlannerTick};
pub use gradient::{det_with_anchor_at, grad_det};
pub use info::{build_info_matrix, det_info, InfoMatrix};

//! Fixed-size linear algebra and SO(3) utilities shared by the estimator,
//! the planner and the truth simulator.

mod mat3;
mod mat9;
mod rotation;
mod vec3;

pub use mat3::Mat3;
pub use mat9::{Mat9, DIM as MAT9_DIM};
pub(crate) use rotation::project_to_so3;
pub use rotation::{reorthonormalize, skew, so3_exp, Rotation, MAX_REPAIR_DISTANCE};
pub use vec3::Vec3;

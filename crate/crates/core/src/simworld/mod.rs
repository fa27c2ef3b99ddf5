//! Ground-truth world: kinematic propagation of the agent from scripted
//! inputs, and synthesis of noisy IMU and UWB range measurements.

mod anchor;
mod motion;
mod schedule;
mod sensors;
mod truth;

pub use anchor::{validate_network, Anchor, AnchorRole};
pub use motion::{MotionScript, ProfileSegment};
pub use schedule::RoundRobin;
pub use sensors::{synth_imu, synth_range, ImuSample, NoiseSpec, RangeSample, MIN_RANGE};
pub use truth::{gravity, step_truth, RigidBodyTruth};

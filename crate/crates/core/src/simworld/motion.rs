use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Scripted agent motion. The truth world is kinematic: a script only supplies
/// the initial position/velocity and the inertial acceleration and body rate
/// over time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MotionScript {
    /// Stationary at `position`.
    Hover { position: Vec3<f64> },
    /// Visits `points` in order. Each leg takes `leg_duration` seconds with a
    /// half-cosine speed profile (zero velocity at every waypoint), after
    /// `start_delay` seconds of hovering at the first point. Holds the last
    /// point afterwards.
    Waypoints {
        points: Vec<Vec3<f64>>,
        leg_duration: f64,
        #[serde(default)]
        start_delay: f64,
    },
    /// Piecewise-constant acceleration and body rate.
    Profile {
        position: Vec3<f64>,
        #[serde(default)]
        velocity: Vec3<f64>,
        segments: Vec<ProfileSegment>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSegment {
    pub duration: f64,
    #[serde(default)]
    pub accel: Vec3<f64>,
    #[serde(default)]
    pub angular_velocity: Vec3<f64>,
}

impl MotionScript {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("motion: {msg}")));
        match self {
            MotionScript::Hover { position } if !position.is_finite() => bad("hover position must be finite"),
            MotionScript::Hover { .. } => Ok(()),
            MotionScript::Waypoints { points, leg_duration, start_delay } => {
                if points.is_empty() {
                    bad("waypoint list is empty")
                } else if points.iter().any(|p| !p.is_finite()) {
                    bad("waypoints must be finite")
                } else if !(*leg_duration > 0.0) || !leg_duration.is_finite() {
                    bad("leg_duration must be positive")
                } else if !(*start_delay >= 0.0) || !start_delay.is_finite() {
                    bad("start_delay must be non-negative")
                } else {
                    Ok(())
                }
            }
            MotionScript::Profile { position, velocity, segments } => {
                if !position.is_finite() || !velocity.is_finite() {
                    return bad("profile initial state must be finite");
                }
                for s in segments {
                    if !(s.duration > 0.0) || !s.accel.is_finite() || !s.angular_velocity.is_finite() {
                        return bad("profile segments need positive duration and finite inputs");
                    }
                }
                Ok(())
            }
        }
    }

    /// Initial position and velocity.
    pub fn initial_state(&self) -> (Vec3<f64>, Vec3<f64>) {
        match self {
            MotionScript::Hover { position } => (*position, Vec3::zeros()),
            MotionScript::Waypoints { points, .. } => (points[0], Vec3::zeros()),
            MotionScript::Profile { position, velocity, .. } => (*position, *velocity),
        }
    }

    /// Inertial acceleration and body angular velocity at time `t`.
    pub fn inputs_at(&self, t: f64) -> (Vec3<f64>, Vec3<f64>) {
        match self {
            MotionScript::Hover { .. } => (Vec3::zeros(), Vec3::zeros()),
            MotionScript::Waypoints { points, leg_duration, start_delay } => {
                let tau = t - start_delay;
                if tau < 0.0 || points.len() < 2 {
                    return (Vec3::zeros(), Vec3::zeros());
                }
                let leg = (tau / leg_duration).floor() as usize;
                if leg + 1 >= points.len() {
                    return (Vec3::zeros(), Vec3::zeros());
                }
                let phase = PI * (tau - leg as f64 * leg_duration) / leg_duration;
                let delta = points[leg + 1] - points[leg];
                let gain = 0.5 * (PI / leg_duration).powi(2) * phase.cos();
                (delta * gain, Vec3::zeros())
            }
            MotionScript::Profile { segments, .. } => {
                let mut start = 0.0;
                for s in segments {
                    if t < start + s.duration {
                        return (s.accel, s.angular_velocity);
                    }
                    start += s.duration;
                }
                (Vec3::zeros(), Vec3::zeros())
            }
        }
    }

    /// Closed-form position for the hover and waypoint scripts.
    pub fn position_at(&self, t: f64) -> Option<Vec3<f64>> {
        match self {
            MotionScript::Hover { position } => Some(*position),
            MotionScript::Waypoints { points, leg_duration, start_delay } => {
                let tau = (t - start_delay).max(0.0);
                let leg = (tau / leg_duration).floor() as usize;
                if leg + 1 >= points.len() {
                    return points.last().copied();
                }
                let phase = PI * (tau - leg as f64 * leg_duration) / leg_duration;
                let s = 0.5 * (1.0 - phase.cos());
                Some(points[leg] + (points[leg + 1] - points[leg]) * s)
            }
            MotionScript::Profile { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simworld::{step_truth, RigidBodyTruth};

    #[test]
    fn integrating_waypoint_inputs_follows_the_path() {
        let script = MotionScript::Waypoints {
            points: vec![Vec3::new(0.0, -1.0, 1.0), Vec3::new(0.0, 1.0, 1.0), Vec3::new(0.0, -1.0, 1.0)],
            leg_duration: 4.0,
            start_delay: 1.0,
        };
        script.validate().unwrap();
        let dt = 0.002;
        let (p0, v0) = script.initial_state();
        let mut s = RigidBodyTruth::at_rest(p0);
        s.velocity = v0;
        let mut worst: f64 = 0.0;
        for k in 0..6000 {
            let t = k as f64 * dt;
            let (a, w) = script.inputs_at(t + 0.5 * dt);
            s = step_truth(&s, a, w, dt).unwrap();
            worst = worst.max((s.position - script.position_at(t + dt).unwrap()).norm());
        }
        assert!(worst < 1e-4, "worst {worst}");
        assert!(s.velocity.norm() < 1e-4);
    }

    #[test]
    fn profile_segments_in_order() {
        let script = MotionScript::Profile {
            position: Vec3::zeros(),
            velocity: Vec3::zeros(),
            segments: vec![
                ProfileSegment { duration: 1.0, accel: Vec3::new(1.0, 0.0, 0.0), angular_velocity: Vec3::zeros() },
                ProfileSegment {
                    duration: 1.0,
                    accel: Vec3::new(-1.0, 0.0, 0.0),
                    angular_velocity: Vec3::new(0.0, 0.0, 0.5),
                },
            ],
        };
        assert_eq!(script.inputs_at(0.5).0.x, 1.0);
        assert_eq!(script.inputs_at(1.5), (Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 0.5)));
        assert_eq!(script.inputs_at(2.5), (Vec3::zeros(), Vec3::zeros()));
    }

    #[test]
    fn validation() {
        assert!(MotionScript::Waypoints { points: vec![], leg_duration: 1.0, start_delay: 0.0 }.validate().is_err());
        assert!(MotionScript::Waypoints { points: vec![Vec3::zeros()], leg_duration: 0.0, start_delay: 0.0 }
            .validate()
            .is_err());
        assert!(MotionScript::Hover { position: Vec3::new(f64::NAN, 0.0, 0.0) }.validate().is_err());
    }
}

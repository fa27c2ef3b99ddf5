use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::planner::{build_info_matrix, det_info, grad_det};
use crate::simworld::Anchor;
use crate::Scalar;

/// Mobile-anchor controller settings.
///
/// Gain and clamps are tuned for a desk-scale layout of a few metres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlannerConfig {
    /// Velocity per unit of determinant gradient [m²/s].
    pub gain: f64,
    /// Interval between planner steps [s]. Set from the planner rate.
    #[serde(skip)]
    pub dt: f64,
    /// Speed limit for commanded anchor motion [m/s].
    pub max_speed: f64,
    /// Keep mobile anchors at their current altitude.
    pub fix_altitude: bool,
    /// Minimum agent-anchor distance [m].
    pub standoff: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { gain: 2.0, dt: 0.02, max_speed: 0.5, fix_altitude: false, standoff: 0.3 }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gain", self.gain), ("dt", self.dt), ("max_speed", self.max_speed)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("planner.{name} must be positive, got {v}")));
            }
        }
        if !(self.standoff >= 0.0) || !self.standoff.is_finite() {
            return Err(Error::Config(format!("planner.standoff must be non-negative, got {}", self.standoff)));
        }
        Ok(())
    }
}

/// `v = s·∇det`, z zeroed in fixed-altitude mode, then norm-clamped.
pub fn velocity_command<T: Scalar>(grad: &Vec3<T>, cfg: &PlannerConfig) -> Vec3<T> {
    let mut v = *grad * T::lit(cfg.gain);
    if cfg.fix_altitude {
        v.z = T::zero();
    }
    let speed = v.norm();
    let max = T::lit(cfg.max_speed);
    if speed > max {
        v = v * (max / speed);
    }
    v
}

/// `p' = p + Δt·v`, with the inward radial part of `v` removed if the step
/// would end inside the standoff radius around the agent estimate.
pub fn step_anchor<T: Scalar>(position: &Vec3<T>, v_cmd: &Vec3<T>, agent: &Vec3<T>, cfg: &PlannerConfig) -> Vec3<T> {
    let dt = T::lit(cfg.dt);
    let standoff = T::lit(cfg.standoff);
    let next = *position + *v_cmd * dt;
    if (next - *agent).norm() >= standoff {
        return next;
    }
    let mut outward = *position - *agent;
    if cfg.fix_altitude {
        outward.z = T::zero();
    }
    let Some(outward) = outward.normalized() else {
        return next;
    };
    let radial = v_cmd.dot(&outward);
    if radial >= T::zero() {
        return next;
    }
    *position + (*v_cmd - outward * radial) * dt
}

/// One planner step taken by [`planner_step`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerTick<T> {
    /// `det(AᵀA)` after the move, at the same agent estimate.
    pub det: T,
    /// Largest gradient norm over the mobile anchors before the move.
    pub grad_norm: T,
}

/// Moves every mobile anchor one step up its own determinant gradient.
///
/// Gradients are all evaluated at the current network before any anchor
/// moves, so each anchor treats the others as fixed. Uses only the agent
/// estimate and known anchor positions.
pub fn planner_step<T: Scalar>(
    agent: &Vec3<T>,
    anchors: &mut [Anchor<T>],
    cfg: &PlannerConfig,
) -> Result<PlannerTick<T>> {
    let standoff = T::lit(cfg.standoff);
    let mut moves = Vec::new();
    let mut grad_norm = T::zero();
    for a in anchors.iter().filter(|a| a.is_mobile()) {
        let g = grad_det(agent, anchors, a.id, standoff)?;
        grad_norm = grad_norm.max(g.norm());
        let v = velocity_command(&g, cfg);
        moves.push((a.id, step_anchor(&a.position, &v, agent, cfg)));
    }
    for (id, p) in moves {
        if let Some(a) = anchors.iter_mut().find(|a| a.id == id) {
            a.position = p;
        }
    }
    let det = det_info(&build_info_matrix(agent, anchors, standoff));
    Ok(PlannerTick { det, grad_norm })
}

/// Result of running the planner against a stationary agent.
#[derive(Clone, Debug)]
pub struct AscentTrace<T> {
    /// Determinant before the first step, then after each step.
    pub dets: Vec<T>,
    pub grad_norms: Vec<T>,
    pub anchors: Vec<Anchor<T>>,
    pub converged: bool,
}

/// Repeats [`planner_step`] until every mobile gradient norm is below `tol`
/// or `max_steps` is reached.
pub fn ascend<T: Scalar>(
    agent: &Vec3<T>,
    anchors: &[Anchor<T>],
    cfg: &PlannerConfig,
    tol: T,
    max_steps: usize,
) -> Result<AscentTrace<T>> {
    let mut anchors = anchors.to_vec();
    let standoff = T::lit(cfg.standoff);
    let mut dets = vec![det_info(&build_info_matrix(agent, &anchors, standoff))];
    let mut grad_norms = Vec::new();
    let mut converged = false;
    for _ in 0..max_steps {
        let tick = planner_step(agent, &mut anchors, cfg)?;
        grad_norms.push(tick.grad_norm);
        if tick.grad_norm < tol {
            converged = true;
            break;
        }
        dets.push(tick.det);
    }
    Ok(AscentTrace { dets, grad_norms, anchors, converged })
}

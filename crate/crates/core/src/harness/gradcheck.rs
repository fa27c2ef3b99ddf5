use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::Vec3;
use crate::planner::{build_info_matrix, det_with_anchor_at, grad_det};
use crate::simworld::Anchor;

/// Largest accepted relative error between the analytic and finite-difference gradients.
pub const GRAD_REL_TOL: f64 = 1e-5;
/// Largest accepted deviation of `trace(AᵀA)` from the anchor count.
pub const TRACE_TOL: f64 = 1e-9;
/// Central-difference step [m].
pub const FD_STEP: f64 = 1e-6;
/// Edge of the cube that agent and anchors are drawn from [m].
pub const BOX_SIZE: f64 = 10.0;
pub const ANCHOR_COUNT: u32 = 5;
pub const STANDOFF: f64 = 0.3;

/// Outcome of [`grad_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradCheckReport {
    pub configs: usize,
    pub max_rel_error: f64,
    pub max_trace_error: f64,
    pub elapsed: Duration,
}

impl GradCheckReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error < GRAD_REL_TOL && self.max_trace_error <= TRACE_TOL
    }
}

/// Compares the analytic determinant gradient with central finite differences
/// on `configs` random networks of five anchors, and checks that the
/// information-matrix trace equals the anchor count on each.
///
/// Agent and anchors are uniform in a 10 m cube; draws that put an anchor
/// inside the standoff radius are redrawn. Anchor 0 is the one differentiated.
pub fn grad_check(configs: usize, seed: u64) -> Result<GradCheckReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel_error = 0.0f64;
    let mut max_trace_error = 0.0f64;
    let mut done = 0;
    while done < configs {
        let mut point = || {
            Vec3::new(rng.random_range(0.0..BOX_SIZE), rng.random_range(0.0..BOX_SIZE), rng.random_range(0.0..BOX_SIZE))
        };
        let agent = point();
        let anchors: Vec<Anchor<f64>> = (0..ANCHOR_COUNT)
            .map(|id| if id == 0 { Anchor::mobile(id, point()) } else { Anchor::fixed(id, point()) })
            .collect();
        if anchors.iter().any(|a| (a.position - agent).norm() < STANDOFF) {
            continue;
        }
        let g = grad_det(&agent, &anchors, 0, STANDOFF)?;
        let fd = finite_difference(&agent, &anchors, 0);
        let scale = g.norm().max(fd.norm()).max(f64::MIN_POSITIVE);
        max_rel_error = max_rel_error.max((g - fd).norm() / scale);
        let trace = build_info_matrix(&agent, &anchors, STANDOFF).trace();
        max_trace_error = max_trace_error.max((trace - f64::from(ANCHOR_COUNT)).abs());
        done += 1;
    }
    Ok(GradCheckReport { configs, max_rel_error, max_trace_error, elapsed: start.elapsed() })
}

fn finite_difference(agent: &Vec3<f64>, anchors: &[Anchor<f64>], id: u32) -> Vec3<f64> {
    let p = anchors.iter().find(|a| a.id == id).map(|a| a.position).unwrap_or_default();
    let f = |q: Vec3<f64>| det_with_anchor_at(agent, anchors, id, q, STANDOFF);
    let along = |k: usize| {
        let mut e = [0.0; 3];
        e[k] = FD_STEP;
        let e = Vec3::from(e);
        (f(p + e) - f(p - e)) / (2.0 * FD_STEP)
    };
    Vec3::new(along(0), along(1), along(2))
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ekf::{Block, Ekf, EstimatorState, FilterParams};
use crate::error::{Error, Result};
use crate::geometry::{so3_exp, Vec3};
use crate::harness::metrics::{compute_rmse, PoseSample, Rmse};
use crate::harness::scenario::ScenarioConfig;
use crate::planner::{build_info_matrix, det_info, planner_step};
use crate::simworld::{step_truth, synth_imu, synth_range, Anchor, RigidBodyTruth, RoundRobin};

/// Independent random streams of one trial. Each source draws a fixed number
/// of samples per event, so two configurations with the same seed and rates
/// see identical noise realizations.
const IMU_STREAM: u64 = 0;
const RANGE_STREAM: u64 = 1;
const INIT_STREAM: u64 = 2;

/// Truth attitude is re-projected onto SO(3) this often [IMU steps].
const TRUTH_REPAIR_INTERVAL: usize = 1000;

/// Filter and world state after one IMU step (and any range update and
/// planner tick falling on it).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub estimate: PoseSample,
    pub truth: PoseSample,
    /// `√diag Σ` of the position block [m].
    pub position_std: Vec3<f64>,
    /// `√diag Σ` of the velocity block [m/s].
    pub velocity_std: Vec3<f64>,
    /// `√diag Σ` of the attitude-error block [rad].
    pub attitude_std: Vec3<f64>,
    /// `det(AᵀA)` at the current estimate and anchor positions.
    pub det: f64,
    /// Position of the tracked anchor: the first mobile anchor, or the
    /// highest-id anchor of a fixed network.
    pub anchor: Vec3<f64>,
    /// Position NEES against the truth.
    pub nees: f64,
}

/// One planner tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerRecord {
    /// Index into [`TrialResult::records`] of the step this tick ran on.
    pub step: usize,
    pub t: f64,
    /// Tracked mobile anchor after the move.
    pub anchor: Vec3<f64>,
    pub det: f64,
    pub grad_norm: f64,
}

/// Event counts of one trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub imu_steps: usize,
    pub range_updates: usize,
    pub range_gated: usize,
    /// Ranges skipped for degenerate agent-anchor geometry.
    pub range_skipped: usize,
    pub reset_warnings: usize,
    pub planner_ticks: usize,
    /// Planner ticks skipped for degenerate geometry.
    pub planner_skipped: usize,
    /// Steps at which the covariance passed the symmetric-PSD check.
    pub covariance_checks: usize,
}

/// Full output of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub name: String,
    pub seed: u64,
    /// One record at t = 0 and one after every IMU step.
    pub records: Vec<StepRecord>,
    pub planner_trace: Vec<PlannerRecord>,
    pub rmse: Rmse,
    /// Position NEES averaged over all records.
    pub mean_nees: f64,
    pub stats: RunStats,
    pub final_anchors: Vec<Anchor<f64>>,
}

impl TrialResult {
    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("a trial has at least one record")
    }

    pub fn estimates(&self) -> Vec<PoseSample> {
        self.records.iter().map(|r| r.estimate).collect()
    }

    pub fn truths(&self) -> Vec<PoseSample> {
        self.records.iter().map(|r| r.truth).collect()
    }
}

/// Runs one trial with the scenario's own seed.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<TrialResult> {
    run_trial(cfg, cfg.seed)
}

/// Runs one closed-loop trial: truth → IMU → predict, round-robin ranges →
/// update, planner ticks → mobile anchor motion.
///
/// Events are snapped to IMU ticks. At a tick the range update runs before the
/// planner, and the planner sees only the filter's position estimate and the
/// known anchor positions.
pub fn run_trial(cfg: &ScenarioConfig, seed: u64) -> Result<TrialResult> {
    cfg.validate()?;
    let mut imu_rng = stream(seed, IMU_STREAM);
    let mut range_rng = stream(seed, RANGE_STREAM);
    let mut init_rng = stream(seed, INIT_STREAM);

    let rates = cfg.rates;
    let dt = 1.0 / rates.imu_hz;
    let steps = cfg.step_count();
    let standoff = cfg.planner.standoff;
    let mut anchors = cfg.anchors.clone();
    let tracked = tracked_anchor(&anchors);
    let mut schedule = RoundRobin::new(&anchors, 0)?;

    let (p0, v0) = cfg.motion.initial_state();
    let mut truth = RigidBodyTruth::at_rest(p0);
    truth.velocity = v0;

    let params = FilterParams::new(&cfg.noise, &cfg.filter);
    let initial = if cfg.perturb_initial_estimate {
        let f = &cfg.filter;
        let dp = gaussian3(&mut init_rng) * f.initial_position_var.sqrt();
        let dv = gaussian3(&mut init_rng) * f.initial_velocity_var.sqrt();
        let dr = gaussian3(&mut init_rng) * f.initial_attitude_var.sqrt();
        // true = estimate ⊕ error, so the reference absorbs the negated error
        EstimatorState::new(p0 - dp, v0 - dv, truth.attitude * so3_exp(&-dr))
    } else {
        EstimatorState::new(p0, v0, truth.attitude)
    };
    let mut ekf = Ekf::new(initial, cfg.filter.initial_covariance(), params);

    let mut stats = RunStats::default();
    let mut records = Vec::with_capacity(steps + 1);
    let mut planner_trace = Vec::new();
    records.push(record(0.0, &ekf, &truth, &anchors, tracked, standoff, &mut stats)?);

    let mut next_range = 1usize;
    let mut next_planner = 1usize;
    let mobile = cfg.has_mobile_anchor();

    for k in 0..steps {
        let t = k as f64 * dt;
        let (accel, omega) = cfg.motion.inputs_at(t + 0.5 * dt);
        truth.accel = accel;
        truth.angular_velocity = omega;
        let imu = synth_imu(&truth, t, &cfg.noise, &mut imu_rng);
        ekf.predict(&imu, dt).map_err(|e| diagnose(e, "predict", t))?;
        truth = step_truth(&truth, accel, omega, dt)?;
        if (k + 1) % TRUTH_REPAIR_INTERVAL == 0 {
            truth.repair_attitude()?;
        }
        stats.imu_steps += 1;

        let tick = k + 1;
        let t_now = tick as f64 / rates.imu_hz;
        while due(next_range, rates.range_hz, tick, rates.imu_hz) {
            next_range += 1;
            let id = schedule.next_anchor();
            let anchor = *anchors.iter().find(|a| a.id == id).expect("scheduled anchors come from the network");
            let meas = match synth_range(&truth.position, &anchor, t_now, &cfg.noise, &mut range_rng) {
                Ok(m) => m,
                Err(Error::DegenerateGeometry(_)) => {
                    stats.range_skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match ekf.update(&meas, &anchor) {
                Ok(report) => {
                    stats.range_updates += 1;
                    stats.range_gated += usize::from(report.gated);
                    stats.reset_warnings += usize::from(report.reset_warning);
                }
                Err(Error::DegenerateGeometry(_)) => stats.range_skipped += 1,
                Err(e) => return Err(diagnose(e, "range update", t_now)),
            }
        }

        while due(next_planner, rates.planner_hz, tick, rates.imu_hz) {
            next_planner += 1;
            if !mobile {
                continue;
            }
            let agent = ekf.state.position;
            match planner_step(&agent, &mut anchors, &cfg.planner) {
                Ok(out) => {
                    stats.planner_ticks += 1;
                    planner_trace.push(PlannerRecord {
                        step: tick,
                        t: t_now,
                        anchor: anchor_position(&anchors, tracked),
                        det: out.det,
                        grad_norm: out.grad_norm,
                    });
                }
                Err(Error::DegenerateGeometry(_)) => stats.planner_skipped += 1,
                Err(e) => return Err(diagnose(e, "planner", t_now)),
            }
        }

        records.push(record(t_now, &ekf, &truth, &anchors, tracked, standoff, &mut stats)?);
    }

    let rmse = compute_rmse(
        &records.iter().map(|r| r.estimate).collect::<Vec<_>>(),
        &records.iter().map(|r| r.truth).collect::<Vec<_>>(),
    )?;
    let mean_nees = records.iter().map(|r| r.nees).sum::<f64>() / records.len() as f64;
    Ok(TrialResult {
        name: cfg.name.clone(),
        seed,
        records,
        planner_trace,
        rmse,
        mean_nees,
        stats,
        final_anchors: anchors,
    })
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn gaussian3(rng: &mut ChaCha8Rng) -> Vec3<f64> {
    let mut draw = || -> f64 { StandardNormal.sample(rng) };
    Vec3::new(draw(), draw(), draw())
}

/// Whether event `n` of a stream at `rate` has fallen due by IMU tick `tick`.
fn due(n: usize, rate: f64, tick: usize, imu_rate: f64) -> bool {
    let event = n as f64 * imu_rate;
    let now = tick as f64 * rate;
    event <= now * (1.0 + 1e-12)
}

fn tracked_anchor(anchors: &[Anchor<f64>]) -> u32 {
    anchors
        .iter()
        .find(|a| a.is_mobile())
        .or_else(|| anchors.iter().max_by_key(|a| a.id))
        .map(|a| a.id)
        .expect("validated networks are non-empty")
}

fn anchor_position(anchors: &[Anchor<f64>], id: u32) -> Vec3<f64> {
    anchors.iter().find(|a| a.id == id).map(|a| a.position).expect("tracked anchor is in the network")
}

fn diagnose(err: Error, stage: &str, t: f64) -> Error {
    match err {
        Error::NumericalFailure(msg) => Error::NumericalFailure(format!("{stage} at t = {t:.4} s: {msg}")),
        Error::NonFinite(what) => Error::NumericalFailure(format!("{stage} at t = {t:.4} s: non-finite {what}")),
        other => other,
    }
}

fn record(
    t: f64,
    ekf: &Ekf<f64>,
    truth: &RigidBodyTruth<f64>,
    anchors: &[Anchor<f64>],
    tracked: u32,
    standoff: f64,
    stats: &mut RunStats,
) -> Result<StepRecord> {
    ekf.cov.check().map_err(|e| diagnose(e, "covariance check", t))?;
    stats.covariance_checks += 1;
    let nees = ekf
        .position_nees(&truth.position)
        .ok_or_else(|| Error::NumericalFailure(format!("singular position covariance at t = {t:.4} s")))?;
    Ok(StepRecord {
        t,
        estimate: PoseSample { position: ekf.state.position, velocity: ekf.state.velocity, attitude: ekf.attitude() },
        truth: PoseSample { position: truth.position, velocity: truth.velocity, attitude: truth.attitude },
        position_std: ekf.cov.std_devs(Block::Position),
        velocity_std: ekf.cov.std_devs(Block::Velocity),
        attitude_std: ekf.cov.std_devs(Block::Attitude),
        det: det_info(&build_info_matrix(&ekf.state.position, anchors, standoff)),
        anchor: anchor_position(anchors, tracked),
        nees,
    })
}

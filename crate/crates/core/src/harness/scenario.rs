use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ekf::FilterConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::planner::PlannerConfig;
use crate::simworld::{validate_network, Anchor, MotionScript, NoiseSpec};

/// Sensor and controller rates [Hz].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Rates {
    pub imu_hz: f64,
    /// Aggregate ranging rate, shared round-robin over all anchors.
    pub range_hz: f64,
    pub planner_hz: f64,
}

impl Default for Rates {
    fn default() -> Self {
        Self { imu_hz: 500.0, range_hz: 80.0, planner_hz: 50.0 }
    }
}

/// Everything needed to run one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Simulated time [s].
    pub duration: f64,
    /// Draw the initial estimate error from the initial covariance. When off,
    /// the filter starts at the true state.
    #[serde(default = "default_true")]
    pub perturb_initial_estimate: bool,
    #[serde(default)]
    pub rates: Rates,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub planner: PlannerConfig,
    pub motion: MotionScript,
    pub anchors: Vec<Anchor<f64>>,
}

fn default_name() -> String {
    "scenario".to_owned()
}

fn default_trials() -> usize {
    1
}

fn default_true() -> bool {
    true
}

/// Built-in scenario variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Canonical {
    /// Hovering agent, four fixed anchors plus one mobile anchor.
    Mobile,
    /// Hovering agent, five fixed anchors (the mobile anchor frozen at its start).
    Fixed,
    /// Agent tracking a horizontal path along y, with the mobile anchor.
    Tracking,
    /// The tracking path against five fixed anchors.
    TrackingFixed,
}

impl Canonical {
    pub const ALL: [Canonical; 4] =
        [Canonical::Mobile, Canonical::Fixed, Canonical::Tracking, Canonical::TrackingFixed];

    pub fn name(self) -> &'static str {
        match self {
            Canonical::Mobile => "mobile",
            Canonical::Fixed => "fixed",
            Canonical::Tracking => "tracking",
            Canonical::TrackingFixed => "tracking-fixed",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Hover point of the agent in the canonical scenarios [m].
pub const CANONICAL_HOVER: Vec3<f64> = Vec3::new(0.0, 0.0, 1.0);
/// Start position of the mobile anchor in the canonical scenarios [m].
pub const CANONICAL_MOBILE_START: Vec3<f64> = Vec3::new(-0.1, -0.6, 0.0);

/// The four fixed anchors of the canonical layout: symmetric about the y axis,
/// on the line x = −0.5 at z = 0.
pub fn canonical_fixed_anchors() -> Vec<Anchor<f64>> {
    vec![
        Anchor::fixed(0, Vec3::new(-0.5, -3.0, 0.0)),
        Anchor::fixed(1, Vec3::new(-0.5, -1.5, 0.0)),
        Anchor::fixed(2, Vec3::new(-0.5, 1.5, 0.0)),
        Anchor::fixed(3, Vec3::new(-0.5, 3.0, 0.0)),
    ]
}

impl ScenarioConfig {
    /// A built-in scenario. All variants share the seed, rates, noise and
    /// filter settings, so any two of them can be compared trial by trial.
    pub fn canonical(variant: Canonical) -> Self {
        let mut anchors = canonical_fixed_anchors();
        anchors.push(match variant {
            Canonical::Mobile | Canonical::Tracking => Anchor::mobile(4, CANONICAL_MOBILE_START),
            Canonical::Fixed | Canonical::TrackingFixed => Anchor::fixed(4, CANONICAL_MOBILE_START),
        });
        let motion = match variant {
            Canonical::Mobile | Canonical::Fixed => MotionScript::Hover { position: CANONICAL_HOVER },
            Canonical::Tracking | Canonical::TrackingFixed => MotionScript::Waypoints {
                points: vec![Vec3::new(0.0, -1.0, 1.0), Vec3::new(0.0, 1.0, 1.0), Vec3::new(0.0, -1.0, 1.0)],
                leg_duration: 10.0,
                start_delay: 5.0,
            },
        };
        let mut cfg = Self {
            name: variant.name().to_owned(),
            seed: 1,
            trials: 50,
            duration: 30.0,
            perturb_initial_estimate: true,
            rates: Rates::default(),
            noise: NoiseSpec::default(),
            filter: FilterConfig::default(),
            planner: PlannerConfig { fix_altitude: true, ..PlannerConfig::default() },
            motion,
            anchors,
        };
        cfg.sync_planner_dt();
        cfg
    }

    /// Parses a scenario from TOML text and validates it.
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, toml::de::Error> {
        let mut cfg: Self = toml::from_str(text)?;
        cfg.sync_planner_dt();
        Ok(cfg)
    }

    /// Reads and validates a scenario file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let cfg =
            Self::from_toml_str(&text).map_err(|source| Error::ScenarioParse { path: path.to_owned(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize scenario: {e}")))
    }

    /// Sets the planner step interval from the planner rate.
    pub fn sync_planner_dt(&mut self) {
        self.planner.dt = 1.0 / self.rates.planner_hz;
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::Config(format!("duration must be positive, got {}", self.duration)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".to_owned()));
        }
        let r = &self.rates;
        for (name, v) in [("imu_hz", r.imu_hz), ("range_hz", r.range_hz), ("planner_hz", r.planner_hz)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("rates.{name} must be positive, got {v}")));
            }
        }
        if r.range_hz > r.imu_hz || r.planner_hz > r.imu_hz {
            return Err(Error::Config("ranging and planner rates cannot exceed the IMU rate".to_owned()));
        }
        if self.step_count() == 0 {
            return Err(Error::Config("duration is shorter than one IMU period".to_owned()));
        }
        validate_network(&self.anchors)?;
        self.noise.validate()?;
        self.filter.validate()?;
        self.planner.validate()?;
        if (self.planner.dt - 1.0 / r.planner_hz).abs() > 1e-12 * self.planner.dt.abs().max(1.0) {
            return Err(Error::Config("planner.dt does not match rates.planner_hz".to_owned()));
        }
        self.motion.validate()
    }

    /// Number of IMU steps in the run.
    pub fn step_count(&self) -> usize {
        (self.duration * self.rates.imu_hz).round() as usize
    }

    pub fn has_mobile_anchor(&self) -> bool {
        self.anchors.iter().any(|a| a.is_mobile())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simworld::AnchorRole;

    #[test]
    fn canonical_variants_validate() {
        for v in Canonical::ALL {
            let mut cfg = ScenarioConfig::canonical(v);
            cfg.sync_planner_dt();
            cfg.validate().unwrap();
            assert_eq!(cfg.anchors.len(), 5);
            assert_eq!(cfg.has_mobile_anchor(), matches!(v, Canonical::Mobile | Canonical::Tracking));
            assert_eq!(Canonical::from_name(v.name()), Some(v));
        }
    }

    #[test]
    fn toml_round_trip() {
        for v in Canonical::ALL {
            let cfg = ScenarioConfig::canonical(v);
            let text = cfg.to_toml_string().unwrap();
            let back = ScenarioConfig::from_toml_str(&text).unwrap();
            assert_eq!(back, cfg, "{text}");
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = ScenarioConfig::canonical(Canonical::Mobile).to_toml_string().unwrap();
        for (from, to) in [
            ("duration = ", "durration = "),
            ("imu_hz", "imu_rate"),
            ("accel_std", "accel_sigma"),
            ("gain", "gane"),
            ("initial_position_var", "p0"),
        ] {
            let bad = text.replacen(from, to, 1);
            assert!(ScenarioConfig::from_toml_str(&bad).is_err(), "accepted {to}");
        }
        let extra = format!("{text}\n[extra]\nfoo = 1\n");
        assert!(ScenarioConfig::from_toml_str(&extra).is_err());
    }

    #[test]
    fn minimal_file_uses_defaults() {
        let text = r#"
            duration = 2.0
            [motion]
            kind = "hover"
            position = [0.0, 0.0, 1.0]
            [[anchors]]
            id = 0
            position = [1.0, 0.0, 0.0]
            [[anchors]]
            id = 1
            position = [0.0, 1.0, 0.0]
            role = "mobile"
        "#;
        let cfg = ScenarioConfig::from_toml_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.rates, Rates::default());
        assert_eq!(cfg.anchors[0].role, AnchorRole::Fixed);
        assert_eq!(cfg.anchors[1].role, AnchorRole::Mobile);
        assert_eq!(cfg.planner.dt, 1.0 / 50.0);
        assert_eq!(cfg.step_count(), 1000);
    }

    #[test]
    fn invalid_configs() {
        let base = || {
            let mut c = ScenarioConfig::canonical(Canonical::Mobile);
            c.sync_planner_dt();
            c
        };
        let mut c = base();
        c.anchors.clear();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = base();
        c.duration = 0.0;
        assert!(c.validate().is_err());
        let mut c = base();
        c.rates.range_hz = -1.0;
        assert!(c.validate().is_err());
        let mut c = base();
        c.anchors[1].id = 0;
        assert!(c.validate().is_err());
        let mut c = base();
        c.trials = 0;
        assert!(c.validate().is_err());
    }
}

use rayon::prelude::*;

use crate::error::Result;
use crate::harness::metrics::{mean_std, Rmse};
use crate::harness::run::{run_trial, TrialResult};
use crate::harness::scenario::ScenarioConfig;

/// Mean and sample standard deviation of one metric over the completed trials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Self {
        let (mean, std) = mean_std(values);
        Self { mean, std }
    }
}

/// A failed trial and the reason it aborted.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialFailure {
    pub seed: u64,
    pub message: String,
}

/// Statistics over a batch of trials.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloSummary {
    pub name: String,
    pub trials: usize,
    pub completed: usize,
    pub failures: Vec<TrialFailure>,
    pub position: Stat,
    pub velocity: Stat,
    pub attitude_deg: Stat,
    /// Mean of the per-trial average position NEES.
    pub mean_nees: f64,
    /// End-of-run position standard deviations, averaged over trials [m].
    pub final_position_std: [f64; 3],
    /// Records over all completed trials.
    pub records: usize,
    /// Records at which the covariance passed the symmetric-PSD check.
    pub covariance_checks: usize,
}

impl MonteCarloSummary {
    pub fn means(&self) -> Rmse {
        Rmse { position: self.position.mean, velocity: self.velocity.mean, attitude_deg: self.attitude_deg.mean }
    }

    fn from_results(name: &str, trials: usize, results: Vec<std::result::Result<TrialResult, TrialFailure>>) -> Self {
        let mut ok = Vec::new();
        let mut failures = Vec::new();
        for r in results {
            match r {
                Ok(t) => ok.push(t),
                Err(f) => failures.push(f),
            }
        }
        let pick = |f: &dyn Fn(&TrialResult) -> f64| ok.iter().map(f).collect::<Vec<_>>();
        let std_axis = |i: usize| Stat::of(&pick(&|t| t.last().position_std[i])).mean;
        Self {
            name: name.to_owned(),
            trials,
            completed: ok.len(),
            failures,
            position: Stat::of(&pick(&|t| t.rmse.position)),
            velocity: Stat::of(&pick(&|t| t.rmse.velocity)),
            attitude_deg: Stat::of(&pick(&|t| t.rmse.attitude_deg)),
            mean_nees: Stat::of(&pick(&|t| t.mean_nees)).mean,
            final_position_std: [std_axis(0), std_axis(1), std_axis(2)],
            records: ok.iter().map(|t| t.records.len()).sum(),
            covariance_checks: ok.iter().map(|t| t.stats.covariance_checks).sum(),
        }
    }
}

/// Seed of trial `index`: the scenario seed plus the index.
pub fn trial_seed(cfg: &ScenarioConfig, index: usize) -> u64 {
    cfg.seed.wrapping_add(index as u64)
}

/// Runs `trials` independent trials in parallel and summarizes them. A trial
/// that fails is recorded and left out of the statistics.
pub fn monte_carlo(cfg: &ScenarioConfig, trials: usize) -> Result<MonteCarloSummary> {
    let mut check = cfg.clone();
    check.trials = trials;
    check.validate()?;
    let results: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg, i);
            run_trial(cfg, seed).map_err(|e| TrialFailure { seed, message: e.to_string() })
        })
        .collect();
    Ok(MonteCarloSummary::from_results(&cfg.name, trials, results))
}

/// Two configurations run over the same trial seeds, so each pair of trials
/// shares its noise realizations.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub candidate: MonteCarloSummary,
    pub reference: MonteCarloSummary,
}

impl Comparison {
    /// `(candidate − reference) / reference` of the mean RMSEs, in percent.
    /// Negative values mean the candidate is more accurate.
    pub fn percent_difference(&self) -> Rmse {
        let c = self.candidate.means();
        let r = self.reference.means();
        let pct = |a: f64, b: f64| 100.0 * (a - b) / b;
        Rmse {
            position: pct(c.position, r.position),
            velocity: pct(c.velocity, r.velocity),
            attitude_deg: pct(c.attitude_deg, r.attitude_deg),
        }
    }
}

/// Runs both configurations with the candidate's seed for every trial.
pub fn compare(candidate: &ScenarioConfig, reference: &ScenarioConfig, trials: usize) -> Result<Comparison> {
    let mut reference = reference.clone();
    reference.seed = candidate.seed;
    Ok(Comparison { candidate: monte_carlo(candidate, trials)?, reference: monte_carlo(&reference, trials)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::run_scenario;
    use crate::harness::scenario::Canonical;

    fn short(variant: Canonical) -> ScenarioConfig {
        ScenarioConfig { duration: 1.0, ..ScenarioConfig::canonical(variant) }
    }

    #[test]
    fn single_trial_equals_run() {
        let cfg = short(Canonical::Mobile);
        let s = monte_carlo(&cfg, 1).unwrap();
        let r = run_scenario(&cfg).unwrap();
        assert_eq!(s.means(), r.rmse);
        assert_eq!(s.position.std, 0.0);
        assert_eq!(s.completed, 1);
        assert!(s.failures.is_empty());
        assert_eq!(s.mean_nees, r.mean_nees);
    }

    #[test]
    fn repeatable() {
        let cfg = short(Canonical::Fixed);
        assert_eq!(monte_carlo(&cfg, 4).unwrap(), monte_carlo(&cfg, 4).unwrap());
    }

    #[test]
    fn comparing_a_config_with_itself_gives_zero() {
        let cfg = short(Canonical::Fixed);
        let pct = compare(&cfg, &cfg, 3).unwrap().percent_difference();
        assert_eq!(pct.as_array(), [0.0; 3]);
    }

    #[test]
    fn failures_are_left_out_of_the_statistics() {
        let cfg = short(Canonical::Fixed);
        let ok = run_scenario(&cfg).unwrap();
        let failed = TrialFailure { seed: 9, message: "numerical failure".to_owned() };
        let s = MonteCarloSummary::from_results("x", 2, vec![Ok(ok.clone()), Err(failed.clone())]);
        assert_eq!(s.completed, 1);
        assert_eq!(s.failures, vec![failed]);
        assert_eq!(s.means(), ok.rmse);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(monte_carlo(&short(Canonical::Fixed), 0).is_err());
    }
}

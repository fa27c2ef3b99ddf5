use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mobile_anchor::harness::{
    compare, comparison_summary, export_results, grad_check, monte_carlo, monte_carlo_summary, run_scenario,
    trial_summary, Canonical, ScenarioConfig, GRAD_REL_TOL, TRACE_TOL,
};
use mobile_anchor::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 3;

/// Range-based localization with a mobile ranging anchor: closed-loop
/// simulation, Monte-Carlo comparison and gradient checks.
#[derive(Parser)]
#[command(name = "mobile-anchor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial and write trajectory.csv, det_trace.csv and summary.txt.
    Simulate {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a batch of trials and report mean and std of the RMSEs.
    Montecarlo {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Number of trials; defaults to the scenario's `trials`.
        #[arg(long)]
        trials: Option<usize>,
        /// Reference scenario. Both run with the same per-trial noise, and the
        /// report gives (scenario − reference) / reference in percent.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Compare the analytic determinant gradient with finite differences on
    /// random networks.
    GradCheck {
        #[arg(long, default_value_t = 1000)]
        configs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Print a built-in scenario as TOML.
    PrintCanonical {
        /// mobile, fixed, tracking or tracking-fixed.
        #[arg(long, default_value = "mobile", value_parser = parse_variant)]
        variant: Canonical,
    },
}

fn parse_variant(name: &str) -> Result<Canonical, String> {
    Canonical::from_name(name).ok_or_else(|| {
        let names: Vec<_> = Canonical::ALL.iter().map(|c| c.name()).collect();
        format!("unknown variant '{name}', expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> mobile_anchor::Result<ExitCode> {
    match command {
        Command::Simulate { scenario, out, seed } => {
            let mut cfg = ScenarioConfig::load(&scenario)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let result = run_scenario(&cfg)?;
            let files = export_results(&result, &out)?;
            print!("{}", trial_summary(&result));
            println!("wrote {}", files.trajectory.display());
            println!("wrote {}", files.det_trace.display());
            println!("wrote {}", files.summary.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Montecarlo { scenario, trials, compare: reference } => {
            let cfg = ScenarioConfig::load(&scenario)?;
            let trials = trials.unwrap_or(cfg.trials);
            let completed = match reference {
                Some(path) => {
                    let reference = ScenarioConfig::load(&path)?;
                    let c = compare(&cfg, &reference, trials)?;
                    print!("{}", monte_carlo_summary(&c.candidate));
                    println!();
                    print!("{}", monte_carlo_summary(&c.reference));
                    println!();
                    print!("{}", comparison_summary(&c));
                    c.candidate.completed.min(c.reference.completed)
                }
                None => {
                    let s = monte_carlo(&cfg, trials)?;
                    print!("{}", monte_carlo_summary(&s));
                    s.completed
                }
            };
            if completed == 0 {
                return Err(Error::NumericalFailure("no trial completed".to_owned()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GradCheck { configs, seed } => {
            let r = grad_check(configs, seed)?;
            println!("configs: {}", r.configs);
            println!("max relative gradient error: {:.3e} (limit {GRAD_REL_TOL:.0e})", r.max_rel_error);
            println!("max trace deviation: {:.3e} (limit {TRACE_TOL:.0e})", r.max_trace_error);
            println!("elapsed: {:.3} s", r.elapsed.as_secs_f64());
            if r.passed() {
                println!("PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL");
                Ok(ExitCode::from(EXIT_CHECK_FAILED))
            }
        }
        Command::Scenario { action: ScenarioAction::PrintCanonical { variant } } => {
            print!("{}", ScenarioConfig::canonical(variant).to_toml_string()?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Config(String::new()).exit_code(), EXIT_CONFIG);
        assert_eq!(Error::NumericalFailure(String::new()).exit_code(), 2);
        assert_ne!(EXIT_CHECK_FAILED, EXIT_CONFIG);
    }
}

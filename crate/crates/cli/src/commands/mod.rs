//! Subcommand implementations. Each command resolves its configuration,
//! writes its outputs into the output directory, finishes with a
//! `manifest.json`, and prints a short summary to stdout.

use std::path::Path;
use std::str::FromStr;

use epictrl_core::{Error, Restriction, Result, Trajectory};

use crate::args::{Cli, Command};
use crate::config::ToolkitConfig;

mod calibrate;
mod compare;
mod evaluate;
mod simulate;
mod steer;
mod train;

pub fn run(cli: Cli) -> Result<()> {
    let mut config = ToolkitConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    config.validate()?;
    let out_dir = config.output_dir.clone();
    std::fs::create_dir_all(&out_dir)?;

    // The manifest needs the full invocation: flags like --schedule or
    // --weights are not part of the configuration snapshot.
    let invocation = cli.command.invocation();
    let ctx = RunContext {
        config: &config,
        out_dir: &out_dir,
        invocation: &invocation,
    };
    match cli.command {
        Command::Simulate {
            restriction,
            schedule,
        } => simulate::run(&ctx, restriction.as_deref(), schedule.as_deref()),
        Command::Calibrate { targets } => calibrate::run(&ctx, targets),
        Command::Train => train::run(&ctx),
        Command::Evaluate { weights } => evaluate::run(&ctx, &weights),
        Command::Compare { inputs } => compare::run(&ctx, &inputs),
        Command::Steer { weights } => steer::run(&ctx, weights.as_deref()),
    }
}

/// Everything a subcommand needs besides its own arguments: the resolved
/// configuration, the output directory, and the invocation line the run
/// manifest records.
pub(crate) struct RunContext<'a> {
    pub config: &'a ToolkitConfig,
    pub out_dir: &'a Path,
    pub invocation: &'a str,
}

impl RunContext<'_> {
    pub fn manifest(&self) -> crate::manifest::RunManifest {
        crate::manifest::RunManifest::begin(self.invocation, self.config.seed, self.config)
    }
}

fn parse_restriction(token: &str) -> Result<Restriction> {
    Restriction::from_str(token).map_err(|_| {
        Error::ConfigInvalid(format!(
            "unknown restriction {token:?}; use a code 0-3 or one of {}",
            Restriction::ALL.map(|r| r.name()).join(", ")
        ))
    })
}

/// Prints the statistics every trajectory-producing command reports.
fn print_trajectory_summary(config: &ToolkitConfig, trajectory: &Trajectory) {
    let population = config.simulation.population;
    let fraction = epictrl_core::seird::CROSSING_FRACTION;
    let crossing = |d: Option<u32>| match d {
        Some(day) => format!("day {day}"),
        None => "never".to_string(),
    };
    println!("  length: {} days", trajectory.last_day());
    println!(
        "  25% crossing: cumulative {}, currently-infected {}",
        crossing(trajectory.crossing_day_cumulative(fraction, population)),
        crossing(trajectory.crossing_day_current(fraction, population)),
    );
    println!(
        "  mean economy: {:.1}% of the unrestricted baseline",
        trajectory.mean_economy_norm() * 100.0
    );
    if let Some(last) = trajectory.final_point() {
        println!(
            "  final state: {:.1} infected, {:.1} dead, economy {:.1}%",
            last.state.i,
            last.state.d,
            last.economy_norm * 100.0
        );
    }
}

/// Mean and peak over the rewards a trajectory actually carries; plain
/// simulations carry none and report no reward statistics.
fn reward_stats(trajectory: &Trajectory) -> (Option<f64>, Option<f64>) {
    let rewards: Vec<f64> = trajectory.points().iter().filter_map(|p| p.reward).collect();
    if rewards.is_empty() {
        return (None, None);
    }
    let mean = rewards.iter().sum::<f64>() / rewards.len() as f64;
    let peak = rewards.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    (Some(mean), Some(peak))
}

fn remove_if_present(dir: &Path, names: &[&str]) {
    for name in names {
        let _ = std::fs::remove_file(dir.join(name));
    }
}

//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "epictrl",
    version,
    about = "SEIRD pandemic simulation and restriction-policy training toolkit"
)]
pub struct Cli {
    /// TOML configuration file; unset fields fall back to built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Random seed, overriding the configuration file.
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,

    /// Output directory, overriding the configuration file.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a constant restriction or a day-indexed schedule.
    Simulate {
        /// Restriction held constant for the whole run (code 0-3 or
        /// snake_case name). Defaults to no_restriction.
        #[arg(long, conflicts_with = "schedule", value_name = "RESTRICTION")]
        restriction: Option<String>,

        /// Schedule CSV (day,action) driving the run day by day; the
        /// simulation stops at the schedule's last day.
        #[arg(long, value_name = "PATH")]
        schedule: Option<PathBuf>,
    },

    /// Bisect transmission multipliers so each constant restriction
    /// crosses 25% cumulative infections on its target day.
    Calibrate {
        /// Target crossing days, one per restriction from least to most
        /// strict, strictly increasing. Defaults to 50,80,150,300.
        #[arg(long, value_delimiter = ',', value_name = "DAYS")]
        targets: Option<Vec<u32>>,
    },

    /// Train a restriction policy with double deep Q-learning.
    Train,

    /// Roll out a trained policy greedily and record the trajectory.
    Evaluate {
        /// Weight archive produced by train.
        #[arg(long, value_name = "PATH")]
        weights: PathBuf,
    },

    /// Summarize and compare recorded trajectories side by side.
    Compare {
        /// Trajectory CSVs, or baseline:<restriction> tokens simulated
        /// on the fly.
        #[arg(required = true, num_args = 2.., value_name = "INPUT")]
        inputs: Vec<String>,
    },

    /// Step through a pandemic day by day, choosing restrictions
    /// interactively.
    Steer {
        /// Weight archive enabling the "auto N" command.
        #[arg(long, value_name = "PATH")]
        weights: Option<PathBuf>,
    },
}

impl Command {
    /// Re-serializes the subcommand and its arguments as one line, so a
    /// run manifest records everything needed to repeat the run beyond
    /// what the configuration snapshot carries.
    pub fn invocation(&self) -> String {
        match self {
            Command::Simulate {
                restriction,
                schedule,
            } => match (restriction, schedule) {
                (Some(r), _) => format!("simulate --restriction {r}"),
                (None, Some(path)) => format!("simulate --schedule {}", path.display()),
                (None, None) => "simulate".to_string(),
            },
            Command::Calibrate { targets: None } => "calibrate".to_string(),
            Command::Calibrate {
                targets: Some(days),
            } => {
                let days: Vec<String> = days.iter().map(u32::to_string).collect();
                format!("calibrate --targets {}", days.join(","))
            }
            Command::Train => "train".to_string(),
            Command::Evaluate { weights } => {
                format!("evaluate --weights {}", weights.display())
            }
            Command::Compare { inputs } => format!("compare {}", inputs.join(" ")),
            Command::Steer { weights: None } => "steer".to_string(),
            Command::Steer {
                weights: Some(path),
            } => format!("steer --weights {}", path.display()),
        }
    }
}

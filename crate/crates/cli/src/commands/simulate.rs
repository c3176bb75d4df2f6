//! `simulate`: integrate the outbreak under a constant restriction or a
//! day-indexed schedule, then write `trajectory.csv` and `trajectory.svg`.

use std::path::Path;

use epictrl_core::seird::simulate_policy;
use epictrl_core::{Restriction, Result, SeirdState};

use crate::commands::RunContext;
use crate::{csvio, svg};

pub fn run(ctx: &RunContext, restriction: Option<&str>, schedule: Option<&Path>) -> Result<()> {
    let config = ctx.config;
    let out_dir = ctx.out_dir;
    let params = config.params();
    let effects = config.effects()?;
    let init = SeirdState::outbreak(&params, config.simulation.initial_infected_fraction);

    let (trajectory, label) = match schedule {
        Some(path) => {
            // The run stops at the schedule's last day, so a recorded
            // session replays to exactly the same number of rows.
            let actions = csvio::read_schedule(path)?;
            let max_days = config.simulation.max_days.min(actions.len() as u32 - 1);
            let trajectory = simulate_policy(
                &init,
                &params,
                &effects,
                |day| actions[day as usize],
                max_days,
                config.simulation.termination_threshold,
            )?;
            (trajectory, format!("schedule {}", path.display()))
        }
        None => {
            let action = match restriction {
                Some(token) => super::parse_restriction(token)?,
                None => Restriction::NoRestriction,
            };
            let trajectory = simulate_policy(
                &init,
                &params,
                &effects,
                |_| action,
                config.simulation.max_days,
                config.simulation.termination_threshold,
            )?;
            (trajectory, format!("constant {}", action.name()))
        }
    };

    csvio::write_trajectory(&out_dir.join("trajectory.csv"), &trajectory)?;
    let chart = svg::trajectory_chart(
        &format!("SEIRD simulation, {label}"),
        &trajectory,
        schedule.is_some(),
    );
    std::fs::write(out_dir.join("trajectory.svg"), chart)?;

    let mut manifest = ctx.manifest();
    manifest.record(out_dir, "trajectory.csv")?;
    manifest.record(out_dir, "trajectory.svg")?;
    manifest.finish(out_dir)?;

    println!("simulated {label}:");
    super::print_trajectory_summary(config, &trajectory);
    println!("wrote {}", out_dir.join("trajectory.csv").display());
    Ok(())
}

//! `compare`: summarize recorded trajectories (or freshly simulated
//! constant-restriction baselines) side by side into `comparison.csv`.

use std::path::Path;

use epictrl_core::seird::{simulate_constant, CROSSING_FRACTION};
use epictrl_core::{Error, Result, Trajectory};

use crate::commands::RunContext;
use crate::csvio::{self, ComparisonRow};

pub fn run(ctx: &RunContext, inputs: &[String]) -> Result<()> {
    let config = ctx.config;
    let out_dir = ctx.out_dir;
    let params = config.params();
    let effects = config.effects()?;

    let mut rows = Vec::with_capacity(inputs.len());
    for input in inputs {
        let trajectory = match input.strip_prefix("baseline:") {
            Some(token) => {
                let action = super::parse_restriction(token)?;
                simulate_constant(&params, &effects, action, config.simulation.max_days)?
            }
            None => csvio::read_trajectory(Path::new(input))?,
        };
        rows.push(summarize(input, &trajectory)?);
    }

    csvio::write_comparison(&out_dir.join("comparison.csv"), &rows)?;
    let mut manifest = ctx.manifest();
    manifest.record(out_dir, "comparison.csv")?;
    manifest.finish(out_dir)?;

    let fmt_day = |d: Option<u32>| d.map_or_else(|| "never".into(), |d| format!("day {d}"));
    for row in &rows {
        println!("{}:", row.input);
        println!(
            "  {} days, 25% crossing: cumulative {}, current {}",
            row.length_days,
            fmt_day(row.crossing_cumulative),
            fmt_day(row.crossing_current),
        );
        println!(
            "  economy mean {:.1}%, final {:.1}%, deaths {:.1}",
            row.mean_economy_pct, row.final_economy_pct, row.total_deaths
        );
        if let (Some(mean), Some(peak)) = (row.mean_reward, row.peak_reward) {
            println!("  reward mean {mean:+.4}, peak {peak:+.4}");
        }
    }
    println!("wrote {}", out_dir.join("comparison.csv").display());
    Ok(())
}

fn summarize(input: &str, trajectory: &Trajectory) -> Result<ComparisonRow> {
    // Trajectories may come from runs with a different population than
    // the active configuration; compartments always sum to it, so the
    // first row recovers the right crossing threshold.
    let first = trajectory.points().first().ok_or_else(|| {
        Error::SchemaMismatch(format!("{input}: trajectory has no rows"))
    })?;
    let population: f64 = first.state.as_array().iter().sum();
    let last = trajectory
        .final_point()
        .expect("a first row implies a last row");
    let (mean_reward, peak_reward) = super::reward_stats(trajectory);
    Ok(ComparisonRow {
        input: input.to_string(),
        crossing_cumulative: trajectory.crossing_day_cumulative(CROSSING_FRACTION, population),
        crossing_current: trajectory.crossing_day_current(CROSSING_FRACTION, population),
        mean_economy_pct: trajectory.mean_economy_norm() * 100.0,
        final_economy_pct: last.economy_norm * 100.0,
        total_deaths: last.state.d,
        length_days: trajectory.last_day(),
        mean_reward,
        peak_reward,
    })
}

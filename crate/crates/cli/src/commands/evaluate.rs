//! `evaluate`: load a weight archive, roll the policy out greedily on a
//! fresh outbreak, and record the trajectory with per-day action bands.

use std::path::Path;

use epictrl_core::nn::load_network;
use epictrl_core::{ddqn, Network, PandemicEnv, Result};

use crate::commands::RunContext;
use crate::{csvio, svg};

pub fn run(ctx: &RunContext, weights: &Path) -> Result<()> {
    let config = ctx.config;
    let out_dir = ctx.out_dir;
    let network: Network = load_network(weights)?;
    let mut env = PandemicEnv::new(config.env_config()?)?;
    let trajectory = ddqn::greedy_rollout(&network, &mut env)?;

    csvio::write_trajectory(&out_dir.join("rollout.csv"), &trajectory)?;
    let chart = svg::trajectory_chart("greedy policy rollout", &trajectory, true);
    std::fs::write(out_dir.join("rollout.svg"), chart)?;

    let mut manifest = ctx.manifest();
    manifest.record(out_dir, "rollout.csv")?;
    manifest.record(out_dir, "rollout.svg")?;
    manifest.finish(out_dir)?;

    println!("evaluated {} greedily:", weights.display());
    super::print_trajectory_summary(config, &trajectory);
    let (mean_reward, peak_reward) = super::reward_stats(&trajectory);
    if let (Some(mean), Some(peak)) = (mean_reward, peak_reward) {
        println!("  reward: mean {mean:+.4}, peak {peak:+.4}");
    }
    let mut counts = [0u32; 4];
    for p in trajectory.points() {
        counts[p.restriction.index()] += 1;
    }
    println!(
        "  action days: {}",
        epictrl_core::Restriction::ALL
            .map(|r| format!("{} {}", r.name(), counts[r.index()]))
            .join(", ")
    );
    println!("wrote {}", out_dir.join("rollout.csv").display());
    Ok(())
}

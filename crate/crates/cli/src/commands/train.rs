//! `train`: double deep Q-learning on the pandemic environment. Writes
//! the learned weights (`weights.bin`), the per-episode log
//! (`training.csv`), and a reward curve (`training.svg`).

use epictrl_core::nn::save_network;
use epictrl_core::{ddqn, PandemicEnv, Result};

use crate::commands::RunContext;
use crate::{csvio, svg};

const OUTPUTS: [&str; 3] = ["weights.bin", "training.csv", "training.svg"];

pub fn run(ctx: &RunContext) -> Result<()> {
    let config = ctx.config;
    let out_dir = ctx.out_dir;
    let train_config = config.train_config();
    let mut env = PandemicEnv::new(config.env_config()?)?;

    println!(
        "training for {} episodes (seed {}, {} hidden units)",
        train_config.episodes, train_config.seed, train_config.hidden
    );
    let report_every = (train_config.episodes / 20).max(1) as u32;
    let outcome = ddqn::train(&mut env, &train_config, |log| {
        if log.episode % report_every == 0 || log.episode as usize + 1 == train_config.episodes {
            println!(
                "  episode {:>4}: {:>4} days, mean reward {:+.4}, epsilon {:.3}, deaths {:.1}",
                log.episode, log.length_days, log.mean_reward, log.epsilon, log.final_state.d
            );
        }
    });
    let outcome = match outcome {
        Ok(outcome) => outcome,
        Err(err) => {
            // A failed run must not leave stale outputs from an earlier
            // run sitting next to a fresh manifest.
            super::remove_if_present(out_dir, &OUTPUTS);
            return Err(err);
        }
    };

    save_network(out_dir.join("weights.bin"), &outcome.network)?;
    csvio::write_training(&out_dir.join("training.csv"), &outcome.episodes)?;
    let means: Vec<(u32, f64)> = outcome
        .episodes
        .iter()
        .map(|log| (log.episode, log.mean_reward))
        .collect();
    std::fs::write(
        out_dir.join("training.svg"),
        svg::training_chart("training reward", &means),
    )?;

    let mut manifest = ctx.manifest();
    for name in OUTPUTS {
        manifest.record(out_dir, name)?;
    }
    manifest.finish(out_dir)?;

    if let Some(last) = outcome.episodes.last() {
        println!(
            "finished: final episode ran {} days with mean reward {:+.4}",
            last.length_days, last.mean_reward
        );
    }
    println!("wrote {}", out_dir.join("weights.bin").display());
    Ok(())
}

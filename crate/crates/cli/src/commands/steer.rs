//! `steer`: drive one episode by hand, choosing each day's restriction
//! at a prompt. The session is recorded as both a full trajectory
//! (`session.csv`) and a replayable schedule (`schedule.csv`), so
//! `simulate --schedule` reproduces the same compartment path.

use std::io::{BufRead, Write as _};
use std::path::Path;
use std::str::FromStr;

use epictrl_core::economy::economy_under;
use epictrl_core::nn::load_network;
use epictrl_core::{ddqn, Environment, Network, PandemicEnv, Restriction, Result, Trajectory};

use crate::commands::RunContext;
use crate::{csvio, svg};

enum Input {
    Action(Restriction),
    Auto(u32),
    Quit,
}

fn parse_input(line: &str) -> std::result::Result<Input, String> {
    let line = line.trim();
    if line.is_empty() {
        return Err("empty input".into());
    }
    if line == "q" || line == "quit" {
        return Ok(Input::Quit);
    }
    if let Some(rest) = line.strip_prefix("auto") {
        let rest = rest.trim();
        let days: u32 = rest
            .parse()
            .map_err(|_| format!("auto needs a day count, got {rest:?}"))?;
        if days == 0 {
            return Err("auto needs at least one day".into());
        }
        return Ok(Input::Auto(days));
    }
    Restriction::from_str(line)
        .map(Input::Action)
        .map_err(|_| format!("unknown restriction {line:?}"))
}

pub fn run(ctx: &RunContext, weights: Option<&Path>) -> Result<()> {
    let config = ctx.config;
    let out_dir = ctx.out_dir;
    let network: Option<Network> = weights.map(load_network).transpose()?;
    let mut env = PandemicEnv::new(config.env_config()?)?;
    let population = config.simulation.population;

    println!("steering a fresh outbreak; each choice holds for one day");
    println!(
        "commands: a restriction (0-3 or {}), \"auto N\"{}, q to stop",
        Restriction::ALL.map(|r| r.name()).join(", "),
        if network.is_some() {
            ""
        } else {
            " (needs --weights)"
        }
    );

    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut observation = env.reset();
    let mut trajectory = Trajectory::new();
    let mut arrival_reward: Option<f64> = None;
    let mut last_action: Option<Restriction> = None;
    let mut pending_auto = 0u32;
    let mut done = false;

    loop {
        let state = *env.state();
        if done {
            // No further day will be integrated; close the record with
            // the previous action so the schedule stays contiguous.
            let action = last_action.unwrap_or(Restriction::NoRestriction);
            let economy = economy_under(&state, &env.config().effects, action, population);
            trajectory.push(state, action, economy, arrival_reward);
            println!(
                "episode over on day {}: {:.2} infected, {:.1} dead",
                env.day(),
                state.i,
                state.d
            );
            break;
        }

        let action = if pending_auto > 0 {
            let network = network.as_ref().expect("auto requires loaded weights");
            let action = ddqn::greedy_action(network, &observation)?;
            pending_auto -= 1;
            println!("day {:>3}: auto picks {}", env.day(), action.name());
            action
        } else {
            print!(
                "day {:>3} [S {:.1}, E {:.1}, I {:.1}, R {:.1}, D {:.1}, economy {:.0}%{}] > ",
                env.day(),
                state.s,
                state.e,
                state.i,
                state.r,
                state.d,
                economy_under(
                    &state,
                    &env.config().effects,
                    last_action.unwrap_or(Restriction::NoRestriction),
                    population
                )
                .normalized
                    * 100.0,
                match arrival_reward {
                    Some(r) => format!(", reward {r:+.3}"),
                    None => String::new(),
                }
            );
            std::io::stdout().flush()?;
            let Some(line) = lines.next() else {
                // End of input acts like an explicit quit.
                let action = last_action.unwrap_or(Restriction::NoRestriction);
                let economy = economy_under(&state, &env.config().effects, action, population);
                trajectory.push(state, action, economy, arrival_reward);
                println!();
                break;
            };
            match parse_input(&line?) {
                Ok(Input::Quit) => {
                    let action = last_action.unwrap_or(Restriction::NoRestriction);
                    let economy =
                        economy_under(&state, &env.config().effects, action, population);
                    trajectory.push(state, action, economy, arrival_reward);
                    break;
                }
                Ok(Input::Auto(days)) => {
                    if network.is_none() {
                        println!("auto needs a weight archive; rerun with --weights");
                    } else {
                        pending_auto = days;
                    }
                    continue;
                }
                Ok(Input::Action(action)) => action,
                Err(message) => {
                    println!("{message}; enter 0-3, a name, auto N, or q");
                    continue;
                }
            }
        };

        let economy = economy_under(&state, &env.config().effects, action, population);
        trajectory.push(state, action, economy, arrival_reward);
        let result = env.step(action)?;
        arrival_reward = Some(result.reward);
        observation = result.observation;
        done = result.done;
        last_action = Some(action);
    }

    let actions: Vec<Restriction> = trajectory.points().iter().map(|p| p.restriction).collect();
    csvio::write_trajectory(&out_dir.join("session.csv"), &trajectory)?;
    csvio::write_schedule(&out_dir.join("schedule.csv"), &actions)?;
    std::fs::write(
        out_dir.join("session.svg"),
        svg::trajectory_chart("steered session", &trajectory, true),
    )?;

    let mut manifest = ctx.manifest();
    manifest.record(out_dir, "session.csv")?;
    manifest.record(out_dir, "schedule.csv")?;
    manifest.record(out_dir, "session.svg")?;
    manifest.finish(out_dir)?;

    println!("steered {} days:", trajectory.last_day());
    super::print_trajectory_summary(config, &trajectory);
    println!(
        "wrote {}; replay with simulate --schedule {}",
        out_dir.join("session.csv").display(),
        out_dir.join("schedule.csv").display()
    );
    Ok(())
}

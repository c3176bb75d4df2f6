//! `calibrate`: bisect one transmission multiplier per restriction so
//! each constant-restriction run crosses 25% cumulative infections on
//! its target day, then write the multipliers as `calibrated.toml`.

use serde::Serialize;

use epictrl_core::seird::calibrate_multiplier;
use epictrl_core::{Error, Restriction, Result};

use crate::commands::RunContext;
use crate::config::RestrictionsSection;

pub const DEFAULT_TARGETS: [u32; 4] = [50, 80, 150, 300];
/// Crossing days move in whole-day steps and grow very steep in the
/// slow-spread regime, so a one-day window can fall between adjacent
/// multipliers; two days is reachable across the supported range.
pub const TOLERANCE_DAYS: u32 = 2;
const MAX_ITERATIONS: u32 = 60;

/// Wrapper so the output file is a loadable configuration fragment.
#[derive(Serialize)]
struct CalibratedDoc<'a> {
    restrictions: &'a RestrictionsSection,
}

pub fn run(ctx: &RunContext, targets: Option<Vec<u32>>) -> Result<()> {
    let config = ctx.config;
    let out_dir = ctx.out_dir;
    let targets = match targets {
        Some(t) => {
            if t.len() != Restriction::COUNT {
                return Err(Error::ConfigInvalid(format!(
                    "{} calibration targets given, expected one per restriction ({})",
                    t.len(),
                    Restriction::COUNT
                )));
            }
            let mut arr = [0u32; Restriction::COUNT];
            arr.copy_from_slice(&t);
            arr
        }
        None => DEFAULT_TARGETS,
    };
    if !targets.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::ConfigInvalid(format!(
            "calibration targets {targets:?} must be strictly increasing, stricter \
             restrictions cross later"
        )));
    }

    let params = config.params();
    let mut multipliers = [0f64; Restriction::COUNT];
    println!("calibrating transmission multipliers (target +/- {TOLERANCE_DAYS} day):");
    for action in Restriction::ALL {
        let target = targets[action.index()];
        let (multiplier, achieved) = calibrate_multiplier(
            &params,
            target,
            TOLERANCE_DAYS,
            MAX_ITERATIONS,
            config.simulation.max_days,
        )?;
        multipliers[action.index()] = multiplier;
        println!(
            "  {:<20} target day {:>3}, achieved day {:>3}, multiplier {:.6}",
            action.name(),
            target,
            achieved,
            multiplier
        );
    }

    // The calibrated table must still be a valid restriction table:
    // multipliers in (0, 1], strictly decreasing with strictness.
    let section = RestrictionsSection {
        beta_multipliers: multipliers,
        zetas: config.restrictions.zetas,
    };
    epictrl_core::RestrictionEffects::new(section.beta_multipliers, section.zetas)?;

    let doc = toml::to_string_pretty(&CalibratedDoc {
        restrictions: &section,
    })
    .map_err(|e| Error::Format(format!("calibrated table serialization failed: {e}")))?;
    std::fs::write(out_dir.join("calibrated.toml"), &doc)?;

    let mut manifest = ctx.manifest();
    manifest.record(out_dir, "calibrated.toml")?;
    manifest.finish(out_dir)?;

    println!("wrote {}", out_dir.join("calibrated.toml").display());
    println!("pass it back with --config to simulate or train on the calibrated dynamics");
    Ok(())
}

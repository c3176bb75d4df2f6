//! Scalar reward balancing economic output against infections and deaths.
//!
//! `reward = economy * exp(-r * infected) - s * deceased`, all three
//! signals normalized to [0, 1]. The exponential suppresses the economic
//! term while infections are widespread; the death term is a direct
//! penalty that never recovers within an episode.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seird::SeirdState;

/// Weights shaping the reward: `infection_weight` (r) controls how hard
/// prevalence suppresses the economic term, `death_weight` (s) prices
/// cumulative deaths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewardWeights<T> {
    pub infection_weight: T,
    pub death_weight: T,
}

impl<T: Scalar> Default for RewardWeights<T> {
    /// The baseline preset (r=10, s=7).
    fn default() -> Self {
        RewardWeights {
            infection_weight: T::from_f(10.0),
            death_weight: T::from_f(7.0),
        }
    }
}

impl<T: Scalar> RewardWeights<T> {
    pub fn new(infection_weight: T, death_weight: T) -> Result<Self> {
        if !infection_weight.is_finite() || infection_weight <= T::zero() {
            return Err(Error::ConfigInvalid(format!(
                "infection weight must be finite and positive, got {infection_weight}"
            )));
        }
        if !death_weight.is_finite() || death_weight < T::zero() {
            return Err(Error::ConfigInvalid(format!(
                "death weight must be finite and nonnegative, got {death_weight}"
            )));
        }
        Ok(RewardWeights {
            infection_weight,
            death_weight,
        })
    }

    /// Preset weighting infection suppression over deaths (r=12, s=5).
    pub fn balanced() -> Self {
        RewardWeights {
            infection_weight: T::from_f(12.0),
            death_weight: T::from_f(5.0),
        }
    }

    /// Preset tolerating infections for economic output (r=10, s=9).
    pub fn economy_biased() -> Self {
        RewardWeights {
            infection_weight: T::from_f(10.0),
            death_weight: T::from_f(9.0),
        }
    }
}

/// The three normalized signals the reward consumes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedState<T> {
    /// Economy as a fraction of the population (full workforce = 1).
    pub economy: T,
    /// Fraction currently infected.
    pub infected: T,
    /// Fraction deceased (cumulative).
    pub deceased: T,
}

impl<T: Scalar> NormalizedState<T> {
    pub fn from_state(state: &SeirdState<T>, economy_norm: T, population: T) -> Self {
        NormalizedState {
            economy: economy_norm,
            infected: state.i / population,
            deceased: state.d / population,
        }
    }
}

/// `economy * exp(-r * infected) - s * deceased`.
pub fn reward<T: Scalar>(ns: &NormalizedState<T>, w: &RewardWeights<T>) -> T {
    ns.economy * (-w.infection_weight * ns.infected).exp() - w.death_weight * ns.deceased
}

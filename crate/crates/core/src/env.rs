//! Episode-structured reinforcement-learning environment.
//!
//! Wraps the simulator, economy, and reward into a reset/step interface.
//! Observations are a sliding window of the last 30 daily feature
//! vectors; each vector holds the five compartment fractions, the
//! normalized economy, and the active restriction code scaled to [0, 1].

use crate::economy;
use crate::error::{Error, Result};
use crate::reward::{self, NormalizedState, RewardWeights};
use crate::scalar::Scalar;
use crate::seird::{
    self, effective_params, integrate_day, Restriction, RestrictionEffects, SeirdParams,
    SeirdState,
};

/// Days of history in one observation window.
pub const OBSERVATION_DAYS: usize = 30;

/// Features per day: five compartment fractions, normalized economy,
/// scaled restriction code.
pub const FEATURES: usize = 7;

/// A 30-day x 7-feature window; row 0 is the oldest day, row 29 the
/// newest.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation<T> {
    rows: [[T; FEATURES]; OBSERVATION_DAYS],
}

impl<T: Scalar> Observation<T> {
    fn filled(row: [T; FEATURES]) -> Self {
        Observation {
            rows: [row; OBSERVATION_DAYS],
        }
    }

    /// Builds a window directly from its rows, oldest day first. Custom
    /// [`Environment`] implementations use this to emit observations.
    pub fn from_rows(rows: [[T; FEATURES]; OBSERVATION_DAYS]) -> Self {
        Observation { rows }
    }

    pub fn rows(&self) -> &[[T; FEATURES]; OBSERVATION_DAYS] {
        &self.rows
    }

    pub fn newest(&self) -> &[T; FEATURES] {
        &self.rows[OBSERVATION_DAYS - 1]
    }

    /// Evicts the oldest row and appends `row` as the newest.
    fn push_row(&mut self, row: [T; FEATURES]) {
        self.rows.rotate_left(1);
        self.rows[OBSERVATION_DAYS - 1] = row;
    }

    /// Writes the window row-major (oldest day first) into `out`, which
    /// must hold exactly `OBSERVATION_DAYS * FEATURES` values.
    pub fn write_flat(&self, out: &mut [T]) -> Result<()> {
        if out.len() != OBSERVATION_DAYS * FEATURES {
            return Err(Error::ShapeMismatch {
                op: "observation flatten",
                expected: format!("{}", OBSERVATION_DAYS * FEATURES),
                got: format!("{}", out.len()),
            });
        }
        for (chunk, row) in out.chunks_exact_mut(FEATURES).zip(&self.rows) {
            chunk.copy_from_slice(row);
        }
        Ok(())
    }
}

fn feature_row<T: Scalar>(
    state: &SeirdState<T>,
    economy_norm: T,
    restriction: Restriction,
    population: T,
) -> [T; FEATURES] {
    [
        state.s / population,
        state.e / population,
        state.i / population,
        state.r / population,
        state.d / population,
        economy_norm,
        T::from_f(restriction.code() as f64 / 3.0),
    ]
}

/// Everything an episode needs: disease parameters, restriction table,
/// reward weights, and the episode-shape settings.
#[derive(Clone, Copy, Debug)]
pub struct EnvConfig<T> {
    pub params: SeirdParams<T>,
    pub effects: RestrictionEffects<T>,
    pub weights: RewardWeights<T>,
    pub initial_infected_fraction: T,
    pub max_days: u32,
    pub termination_threshold: T,
}

impl<T: Scalar> Default for EnvConfig<T> {
    fn default() -> Self {
        EnvConfig {
            params: SeirdParams::default(),
            effects: RestrictionEffects::default(),
            weights: RewardWeights::default(),
            initial_infected_fraction: T::from_f(seird::INITIAL_INFECTED_FRACTION),
            max_days: seird::MAX_DAYS,
            termination_threshold: T::from_f(seird::TERMINATION_THRESHOLD),
        }
    }
}

impl<T: Scalar> EnvConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        reward::RewardWeights::new(self.weights.infection_weight, self.weights.death_weight)?;
        let f = self.initial_infected_fraction;
        if !f.is_finite() || f < T::zero() || f > T::one() {
            return Err(Error::ConfigInvalid(format!(
                "initial infected fraction must lie in [0, 1], got {f}"
            )));
        }
        if self.max_days == 0 {
            return Err(Error::ConfigInvalid("max_days must be at least 1".into()));
        }
        if !self.termination_threshold.is_finite() || self.termination_threshold <= T::zero() {
            return Err(Error::ConfigInvalid(format!(
                "termination threshold must be finite and positive, got {}",
                self.termination_threshold
            )));
        }
        Ok(())
    }
}

/// Diagnostics accompanying each step: the raw state behind the newest
/// observation row.
#[derive(Clone, Copy, Debug)]
pub struct StepInfo<T> {
    pub day: u32,
    pub state: SeirdState<T>,
    pub economy: T,
    pub economy_norm: T,
    pub restriction: Restriction,
}

#[derive(Clone, Debug)]
pub struct StepResult<T> {
    pub observation: Observation<T>,
    pub reward: T,
    pub done: bool,
    pub info: StepInfo<T>,
}

/// Anything the training loop can drive: the pandemic environment or a
/// test double with the same observation shape.
pub trait Environment<T: Scalar> {
    fn reset(&mut self) -> Observation<T>;
    fn step(&mut self, action: Restriction) -> Result<StepResult<T>>;
}

/// The pandemic episode environment. One instance owns one episode's
/// mutable state; create independent instances to run concurrently.
#[derive(Clone, Debug)]
pub struct PandemicEnv<T> {
    config: EnvConfig<T>,
    state: SeirdState<T>,
    day: u32,
    window: Observation<T>,
    done: bool,
}

impl<T: Scalar> PandemicEnv<T> {
    pub fn new(config: EnvConfig<T>) -> Result<Self> {
        config.validate()?;
        let mut env = PandemicEnv {
            config,
            state: SeirdState::outbreak(&config.params, config.initial_infected_fraction),
            day: 0,
            window: Observation::filled([T::zero(); FEATURES]),
            done: false,
        };
        env.reset();
        Ok(env)
    }

    pub fn config(&self) -> &EnvConfig<T> {
        &self.config
    }

    pub fn state(&self) -> &SeirdState<T> {
        &self.state
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    pub fn observation(&self) -> &Observation<T> {
        &self.window
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// True once the current state satisfies the episode-ending
    /// condition, independent of whether a step has reported it.
    pub fn episode_over(&self) -> bool {
        self.state.i < self.config.termination_threshold || self.day >= self.config.max_days
    }
}

impl<T: Scalar> Environment<T> for PandemicEnv<T> {
    /// Starts a fresh outbreak. The window is padded by repeating the
    /// day-0 feature vector with no restriction active, so the network
    /// never sees a regime the simulator didn't produce.
    fn reset(&mut self) -> Observation<T> {
        let population = self.config.params.population;
        self.state = SeirdState::outbreak(&self.config.params, self.config.initial_infected_fraction);
        self.day = 0;
        self.done = false;
        let econ = economy::economy_under(
            &self.state,
            &self.config.effects,
            Restriction::NoRestriction,
            population,
        );
        self.window = Observation::filled(feature_row(
            &self.state,
            econ.normalized,
            Restriction::NoRestriction,
            population,
        ));
        self.window.clone()
    }

    /// Applies `action` for exactly one simulated day. The reward is
    /// computed from the post-step state and the action's economy.
    fn step(&mut self, action: Restriction) -> Result<StepResult<T>> {
        if self.done {
            return Err(Error::EpisodeFinished);
        }
        let population = self.config.params.population;
        let effective = effective_params(&self.config.params, &self.config.effects, action);
        self.state = integrate_day(&self.state, &effective, self.day)?;
        self.day += 1;

        let econ = economy::economy_under(&self.state, &self.config.effects, action, population);
        let normalized = NormalizedState::from_state(&self.state, econ.normalized, population);
        let reward = reward::reward(&normalized, &self.config.weights);
        self.window
            .push_row(feature_row(&self.state, econ.normalized, action, population));
        self.done = self.episode_over();

        Ok(StepResult {
            observation: self.window.clone(),
            reward,
            done: self.done,
            info: StepInfo {
                day: self.day,
                state: self.state,
                economy: econ.value,
                economy_norm: econ.normalized,
                restriction: action,
            },
        })
    }
}

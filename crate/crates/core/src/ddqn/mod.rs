//! Double deep Q-learning over the pandemic environment.
//!
//! One online network selects actions and is trained; a periodically
//! synced copy scores the bootstrap target. The target for a sampled
//! transition is `r + discount * Q_target(s')[argmax_a Q_online(s')]`,
//! or plain `r` on terminal transitions, and the regression loss covers
//! only each transition's taken action.

pub mod replay;

pub use replay::{ReplayBuffer, Transition};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::env::{Environment, Observation, PandemicEnv, FEATURES, OBSERVATION_DAYS};
use crate::error::{Error, Result};
use crate::nn::{Adam, Mat, Network, NetworkSizes};
use crate::scalar::Scalar;
use crate::economy::economy_under;
use crate::seird::{Restriction, SeirdState, Trajectory};

/// Training hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig<T> {
    pub episodes: usize,
    pub batch_size: usize,
    /// Transitions collected before the first gradient step.
    pub warmup: usize,
    pub discount: T,
    /// Environment steps between hard target-network syncs.
    pub target_sync_interval: usize,
    pub epsilon_floor: T,
    /// Episodes over which exploration decays linearly from 1 to 0
    /// before the floor takes over.
    pub epsilon_decay_episodes: usize,
    pub learning_rate: T,
    /// Hidden units per LSTM direction.
    pub hidden: usize,
    /// Units in the dense hidden layer.
    pub dense: usize,
    pub replay_capacity: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        TrainConfig {
            episodes: 200,
            batch_size: 32,
            warmup: 200,
            discount: T::from_f(0.95),
            target_sync_interval: 100,
            epsilon_floor: T::from_f(0.01),
            epsilon_decay_episodes: 125,
            learning_rate: T::from_f(1e-3),
            hidden: 32,
            dense: 64,
            replay_capacity: 10_000,
            seed: 0,
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::ConfigInvalid("episodes must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::ConfigInvalid("batch size must be at least 1".into()));
        }
        if self.replay_capacity < self.batch_size {
            return Err(Error::ConfigInvalid(format!(
                "replay capacity {} cannot hold a batch of {}",
                self.replay_capacity, self.batch_size
            )));
        }
        if !(T::zero()..=T::one()).contains(&self.discount) {
            return Err(Error::ConfigInvalid(format!(
                "discount must lie in [0, 1], got {}",
                self.discount
            )));
        }
        if !(T::zero()..=T::one()).contains(&self.epsilon_floor) {
            return Err(Error::ConfigInvalid(format!(
                "epsilon floor must lie in [0, 1], got {}",
                self.epsilon_floor
            )));
        }
        if self.epsilon_decay_episodes == 0 {
            return Err(Error::ConfigInvalid(
                "epsilon decay must span at least 1 episode".into(),
            ));
        }
        if self.target_sync_interval == 0 {
            return Err(Error::ConfigInvalid(
                "target sync interval must be at least 1".into(),
            ));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= T::zero() {
            return Err(Error::ConfigInvalid(format!(
                "learning rate must be finite and positive, got {}",
                self.learning_rate
            )));
        }
        if self.hidden == 0 || self.dense == 0 {
            return Err(Error::ConfigInvalid(
                "network layer sizes must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Network shape induced by this configuration.
    pub fn network_sizes(&self) -> NetworkSizes {
        NetworkSizes {
            input_features: FEATURES,
            window: OBSERVATION_DAYS,
            hidden: self.hidden,
            dense: self.dense,
            actions: Restriction::COUNT,
            recurrent_layers: 3,
        }
    }

    pub fn epsilon(&self, episode: usize) -> T {
        epsilon_schedule(episode, self.epsilon_floor, self.epsilon_decay_episodes)
    }
}

/// Linear decay from 1 at episode 0 to 0 at `decay_episodes`, clipped
/// from below at `floor`.
pub fn epsilon_schedule<T: Scalar>(episode: usize, floor: T, decay_episodes: usize) -> T {
    let linear = T::one() - T::from_f(episode as f64) / T::from_f(decay_episodes as f64);
    linear.max(floor)
}

/// Double-DQN bootstrap: the online network picks the next action, the
/// target network prices it.
pub fn td_target<T: Scalar>(
    reward: T,
    done: bool,
    discount: T,
    next_online: &[T],
    next_target: &[T],
) -> T {
    if done {
        return reward;
    }
    reward + discount * next_target[argmax_index(next_online)]
}

/// Index of the largest value; ties resolve to the lowest index.
fn argmax_index<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for k in 1..values.len() {
        if values[k] > values[best] {
            best = k;
        }
    }
    best
}

fn observation_matrix<T: Scalar>(observations: &[&Observation<T>]) -> Result<Mat<T>> {
    let mut m = Mat::zeros(observations.len(), OBSERVATION_DAYS * FEATURES);
    for (i, obs) in observations.iter().enumerate() {
        obs.write_flat(m.row_mut(i))?;
    }
    Ok(m)
}

/// Action values for a single observation.
pub fn q_values<T: Scalar>(net: &Network<T>, observation: &Observation<T>) -> Result<Vec<T>> {
    if net.sizes().actions != Restriction::COUNT {
        return Err(Error::ShapeMismatch {
            op: "action values",
            expected: format!("{} outputs", Restriction::COUNT),
            got: format!("{} outputs", net.sizes().actions),
        });
    }
    let out = net.forward(&observation_matrix(&[observation])?)?;
    Ok(out.row(0).to_vec())
}

/// Highest-valued action; ties resolve to the lowest code.
pub fn greedy_action<T: Scalar>(net: &Network<T>, observation: &Observation<T>) -> Result<Restriction> {
    let q = q_values(net, observation)?;
    Restriction::from_code(argmax_index(&q) as u8)
}

/// Epsilon-greedy choice: one uniform draw decides between exploring
/// (one more draw picks the action) and acting greedily.
pub fn select_action<T: Scalar, R: Rng>(
    net: &Network<T>,
    observation: &Observation<T>,
    epsilon: T,
    rng: &mut R,
) -> Result<Restriction> {
    let draw: f64 = rng.gen();
    if draw < epsilon.to_f() {
        return Restriction::from_code(rng.gen_range(0..Restriction::COUNT as u8));
    }
    greedy_action(net, observation)
}

/// Summary of one training episode.
#[derive(Clone, Debug)]
pub struct EpisodeLog<T> {
    pub episode: u32,
    pub length_days: u32,
    /// Reward received on each step, in order.
    pub rewards: Vec<T>,
    pub mean_reward: T,
    /// Largest single-step reward.
    pub peak_reward: T,
    pub epsilon: T,
    pub final_state: SeirdState<T>,
    /// Times each restriction was taken, indexed by code.
    pub action_counts: [u32; Restriction::COUNT],
}

/// A trained network together with its episode history.
pub struct TrainOutcome<T> {
    pub network: Network<T>,
    pub episodes: Vec<EpisodeLog<T>>,
}

/// Runs double deep Q-learning on `env` and returns the trained online
/// network. `on_episode` fires after every completed episode.
///
/// All randomness comes from `config.seed`: weight initialization draws
/// on one stream, action selection and replay sampling on another, so a
/// given seed replays bit-identically.
pub fn train<T: Scalar, E: Environment<T>>(
    env: &mut E,
    config: &TrainConfig<T>,
    mut on_episode: impl FnMut(&EpisodeLog<T>),
) -> Result<TrainOutcome<T>> {
    config.validate()?;
    let mut online = Network::init(config.network_sizes(), config.seed)?;
    let mut target = online.clone();
    let mut adam = Adam::new(online.param_count(), config.learning_rate);
    let mut buffer = ReplayBuffer::new(config.replay_capacity);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);

    let mut env_steps: usize = 0;
    let mut episodes = Vec::with_capacity(config.episodes);
    for episode in 0..config.episodes {
        let epsilon = config.epsilon(episode);
        let mut observation = env.reset();
        let mut rewards = Vec::new();
        let mut action_counts = [0u32; Restriction::COUNT];
        let mut final_state;
        loop {
            let action = select_action(&online, &observation, epsilon, &mut rng)?;
            let step = env.step(action)?;
            action_counts[action.index()] += 1;
            rewards.push(step.reward);
            final_state = step.info.state;
            buffer.push(Transition {
                observation,
                action,
                reward: step.reward,
                next_observation: step.observation.clone(),
                done: step.done,
            });
            observation = step.observation;
            env_steps += 1;
            if buffer.len() >= config.warmup.max(config.batch_size) {
                train_step(&mut online, &target, &mut adam, &buffer, config, &mut rng)?;
            }
            if env_steps.is_multiple_of(config.target_sync_interval) {
                target = online.clone();
            }
            if step.done {
                break;
            }
        }
        let len = T::from_f(rewards.len() as f64);
        let sum = rewards.iter().fold(T::zero(), |acc, &r| acc + r);
        let peak = rewards
            .iter()
            .fold(rewards[0], |acc, &r| if r > acc { r } else { acc });
        let log = EpisodeLog {
            episode: episode as u32,
            length_days: rewards.len() as u32,
            mean_reward: sum / len,
            peak_reward: peak,
            rewards,
            epsilon,
            final_state,
            action_counts,
        };
        on_episode(&log);
        episodes.push(log);
    }
    Ok(TrainOutcome {
        network: online,
        episodes,
    })
}

/// One gradient step on a uniformly sampled batch.
fn train_step<T: Scalar, R: Rng>(
    online: &mut Network<T>,
    target: &Network<T>,
    adam: &mut Adam<T>,
    buffer: &ReplayBuffer<T>,
    config: &TrainConfig<T>,
    rng: &mut R,
) -> Result<T> {
    let batch = buffer.sample(rng, config.batch_size)?;
    let next: Vec<&Observation<T>> = batch.iter().map(|t| &t.next_observation).collect();
    let next_mat = observation_matrix(&next)?;
    let next_online = online.forward(&next_mat)?;
    let next_target = target.forward(&next_mat)?;

    let current: Vec<&Observation<T>> = batch.iter().map(|t| &t.observation).collect();
    let (q_pred, cache) = online.forward_cached(&observation_matrix(&current)?)?;
    let mut predictions = Vec::with_capacity(batch.len());
    let mut targets = Vec::with_capacity(batch.len());
    for (i, tr) in batch.iter().enumerate() {
        predictions.push(q_pred.at(i, tr.action.index()));
        targets.push(td_target(
            tr.reward,
            tr.done,
            config.discount,
            next_online.row(i),
            next_target.row(i),
        ));
    }
    let (loss, grad) = crate::nn::mse_loss(&predictions, &targets)?;
    // Only the taken action's output carries gradient.
    let mut dout = Mat::zeros(batch.len(), Restriction::COUNT);
    for (i, tr) in batch.iter().enumerate() {
        dout.row_mut(i)[tr.action.index()] = grad[i];
    }
    let grads = online.backward(&cache, &dout)?;
    adam.step(&mut online.tensor_slices_mut(), &grads.tensor_slices())?;
    Ok(loss)
}

/// Plays one episode greedily (no exploration) and records it as a
/// trajectory. The terminal day's action is chosen and logged but never
/// integrated, mirroring policy simulation.
pub fn greedy_rollout<T: Scalar>(
    net: &Network<T>,
    env: &mut PandemicEnv<T>,
) -> Result<Trajectory<T>> {
    let mut observation = env.reset();
    let mut trajectory = Trajectory::new();
    let mut arrival_reward: Option<T> = None;
    let mut done = false;
    loop {
        let action = greedy_action(net, &observation)?;
        let state = *env.state();
        let economy = economy_under(
            &state,
            &env.config().effects,
            action,
            env.config().params.population,
        );
        trajectory.push(state, action, economy, arrival_reward);
        if done {
            return Ok(trajectory);
        }
        let step = env.step(action)?;
        arrival_reward = Some(step.reward);
        observation = step.observation;
        done = step.done;
    }
}

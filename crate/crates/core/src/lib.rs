//! Pandemic restriction-policy toolkit core.
//!
//! Everything needed to simulate a SEIRD epidemic under four levels of
//! non-pharmaceutical restriction, track the workforce economy it leaves
//! standing, and train a double deep Q-network with a bidirectional
//! recurrent core to trade infections against economic activity:
//!
//! * [`seird`]: deterministic compartment dynamics (fixed-step
//!   Runge-Kutta, restriction-scaled transmission, trajectories).
//! * [`economy`]: the daily workforce proxy `(s + e + r) * (1 - zeta)`.
//! * [`reward`]: scalar reward `E * exp(-r * A) - s * D`.
//! * [`env`]: episode-structured RL environment with 30-day x 7-feature
//!   observation windows.
//! * [`nn`]: from-scratch bidirectional LSTM stack with exact
//!   backpropagation through time, MSE loss, Adam, and a binary weight
//!   archive.
//! * [`ddqn`]: epsilon-greedy double Q-learning over full episodes with
//!   replay and a periodically synced target network.
//!
//! All numeric code is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the type aliases at the crate root fix the default `f64` precision
//! that training, archives, and gradient checks assume.

pub mod ddqn;
pub mod economy;
pub mod env;
pub mod error;
pub mod nn;
pub mod reward;
pub mod scalar;
pub mod seird;

pub use env::Environment;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use seird::Restriction;

/// Default scalar precision for the concrete aliases below.
pub type Real = f64;

pub type SeirdParams = seird::SeirdParams<Real>;
pub type SeirdState = seird::SeirdState<Real>;
pub type RestrictionEffects = seird::RestrictionEffects<Real>;
pub type Trajectory = seird::Trajectory<Real>;
pub type TrajectoryPoint = seird::TrajectoryPoint<Real>;
pub type EconomyValue = economy::EconomyValue<Real>;
pub type RewardWeights = reward::RewardWeights<Real>;
pub type NormalizedState = reward::NormalizedState<Real>;
pub type Observation = env::Observation<Real>;
pub type EnvConfig = env::EnvConfig<Real>;
pub type PandemicEnv = env::PandemicEnv<Real>;
pub type StepResult = env::StepResult<Real>;
pub type Network = nn::Network<Real>;
pub use nn::NetworkSizes;
pub type Adam = nn::Adam<Real>;
pub type TrainConfig = ddqn::TrainConfig<Real>;
pub type EpisodeLog = ddqn::EpisodeLog<Real>;
pub type ReplayBuffer = ddqn::ReplayBuffer<Real>;
pub type Transition = ddqn::Transition<Real>;

//! Toolkit configuration: one TOML document with nested sections.
//!
//! Every field has a default, so an empty (or absent) file runs the
//! stock scenario; unknown keys are rejected with the offending key
//! named. Command-line flags override file values, which override
//! defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use epictrl_core::reward;
use epictrl_core::{
    EnvConfig, Error, RestrictionEffects, Result, RewardWeights, SeirdParams, TrainConfig,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToolkitConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub simulation: SimulationSection,
    pub restrictions: RestrictionsSection,
    pub reward: RewardSection,
    pub training: TrainingSection,
}

impl Default for ToolkitConfig {
    fn default() -> Self {
        ToolkitConfig {
            seed: 0,
            output_dir: PathBuf::from("out"),
            simulation: SimulationSection::default(),
            restrictions: RestrictionsSection::default(),
            reward: RewardSection::default(),
            training: TrainingSection::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub population: f64,
    pub beta: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub mu: f64,
    pub initial_infected_fraction: f64,
    pub max_days: u32,
    pub termination_threshold: f64,
}

impl Default for SimulationSection {
    fn default() -> Self {
        let params = SeirdParams::default();
        SimulationSection {
            population: params.population,
            beta: params.beta,
            sigma: params.sigma,
            gamma: params.gamma,
            mu: params.mu,
            initial_infected_fraction: epictrl_core::seird::INITIAL_INFECTED_FRACTION,
            max_days: epictrl_core::seird::MAX_DAYS,
            termination_threshold: epictrl_core::seird::TERMINATION_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RestrictionsSection {
    /// Transmission multipliers by restriction code, least to most strict.
    pub beta_multipliers: [f64; 4],
    /// Workforce-reduction fractions by restriction code.
    pub zetas: [f64; 4],
}

impl Default for RestrictionsSection {
    fn default() -> Self {
        let effects = RestrictionEffects::default();
        RestrictionsSection {
            beta_multipliers: effects.beta_multipliers(),
            zetas: effects.zetas(),
        }
    }
}

/// Either a named preset or explicit weights; naming both is an error.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RewardSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infection_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub death_weight: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingSection {
    pub episodes: usize,
    pub batch_size: usize,
    pub warmup: usize,
    pub discount: f64,
    pub target_sync_interval: usize,
    pub epsilon_floor: f64,
    pub epsilon_decay_episodes: usize,
    pub learning_rate: f64,
    pub hidden: usize,
    pub dense: usize,
    pub replay_capacity: usize,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let train = TrainConfig::default();
        TrainingSection {
            episodes: train.episodes,
            batch_size: train.batch_size,
            warmup: train.warmup,
            discount: train.discount,
            target_sync_interval: train.target_sync_interval,
            epsilon_floor: train.epsilon_floor,
            epsilon_decay_episodes: train.epsilon_decay_episodes,
            learning_rate: train.learning_rate,
            hidden: train.hidden,
            dense: train.dense,
            replay_capacity: train.replay_capacity,
        }
    }
}

impl ToolkitConfig {
    /// Loads from a TOML file, or returns the defaults when no path is
    /// given.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(ToolkitConfig::default());
        };
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| {
            Error::ConfigInvalid(format!("{}: {}", path.display(), e.message()))
        })
    }

    pub fn params(&self) -> SeirdParams {
        SeirdParams {
            population: self.simulation.population,
            beta: self.simulation.beta,
            sigma: self.simulation.sigma,
            gamma: self.simulation.gamma,
            mu: self.simulation.mu,
        }
    }

    pub fn effects(&self) -> Result<RestrictionEffects> {
        RestrictionEffects::new(self.restrictions.beta_multipliers, self.restrictions.zetas)
    }

    pub fn reward_weights(&self) -> Result<RewardWeights> {
        let section = &self.reward;
        let explicit = (section.infection_weight, section.death_weight);
        match (&section.preset, explicit) {
            (None, (None, None)) => Ok(RewardWeights::default()),
            (Some(name), (None, None)) => match name.as_str() {
                "default" => Ok(RewardWeights::default()),
                "balanced" => Ok(reward::RewardWeights::balanced()),
                "economy_biased" => Ok(reward::RewardWeights::economy_biased()),
                other => Err(Error::ConfigInvalid(format!(
                    "unknown reward preset {other:?}; expected default, balanced, or economy_biased"
                ))),
            },
            (None, (Some(r), Some(s))) => RewardWeights::new(r, s),
            (None, _) => Err(Error::ConfigInvalid(
                "explicit reward weights need both infection_weight and death_weight".into(),
            )),
            (Some(_), _) => Err(Error::ConfigInvalid(
                "reward preset and explicit weights are mutually exclusive".into(),
            )),
        }
    }

    pub fn env_config(&self) -> Result<EnvConfig> {
        let config = EnvConfig {
            params: self.params(),
            effects: self.effects()?,
            weights: self.reward_weights()?,
            initial_infected_fraction: self.simulation.initial_infected_fraction,
            max_days: self.simulation.max_days,
            termination_threshold: self.simulation.termination_threshold,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.training;
        TrainConfig {
            episodes: t.episodes,
            batch_size: t.batch_size,
            warmup: t.warmup,
            discount: t.discount,
            target_sync_interval: t.target_sync_interval,
            epsilon_floor: t.epsilon_floor,
            epsilon_decay_episodes: t.epsilon_decay_episodes,
            learning_rate: t.learning_rate,
            hidden: t.hidden,
            dense: t.dense,
            replay_capacity: t.replay_capacity,
            seed: self.seed,
        }
    }

    /// Validates every section by constructing the runtime values.
    pub fn validate(&self) -> Result<()> {
        self.env_config()?;
        self.train_config().validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        file
    }

    #[test]
    fn defaults_match_the_stock_scenario() {
        let config = ToolkitConfig::default();
        config.validate().unwrap();
        assert_eq!(config.simulation.population, 1000.0);
        assert_eq!(config.simulation.beta, 0.12);
        assert_eq!(config.restrictions.beta_multipliers, [1.0, 0.55, 0.30, 0.18]);
        assert_eq!(config.restrictions.zetas, [0.0, 0.25, 0.5, 0.65]);
        let weights = config.reward_weights().unwrap();
        assert_eq!(weights.infection_weight, 10.0);
        assert_eq!(weights.death_weight, 7.0);
        assert_eq!(config.training.episodes, 200);
    }

    #[test]
    fn missing_file_defaults_and_partial_files_merge() {
        let config = ToolkitConfig::load(None).unwrap();
        assert_eq!(config.seed, 0);

        let file = write_config("seed = 9\n[simulation]\nbeta = 0.2\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.simulation.beta, 0.2);
        // Untouched fields keep their defaults.
        assert_eq!(config.simulation.population, 1000.0);
        assert_eq!(config.training.batch_size, 32);
    }

    #[test]
    fn unknown_keys_are_named() {
        let file = write_config("[simulation]\nbetaa = 0.2\n");
        let err = ToolkitConfig::load(Some(file.path())).unwrap_err();
        assert!(err.to_string().contains("betaa"), "{err}");
        assert!(matches!(err, Error::ConfigInvalid(_)));
    }

    #[test]
    fn reward_presets_resolve() {
        let file = write_config("[reward]\npreset = \"balanced\"\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        let weights = config.reward_weights().unwrap();
        assert_eq!(weights.infection_weight, 12.0);
        assert_eq!(weights.death_weight, 5.0);

        let file = write_config("[reward]\ninfection_weight = 3.0\ndeath_weight = 4.0\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        let weights = config.reward_weights().unwrap();
        assert_eq!(weights.infection_weight, 3.0);
        assert_eq!(weights.death_weight, 4.0);
    }

    #[test]
    fn conflicting_reward_settings_are_rejected() {
        let file = write_config("[reward]\npreset = \"balanced\"\ninfection_weight = 3.0\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        assert!(config.reward_weights().is_err());

        let file = write_config("[reward]\ninfection_weight = 3.0\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        assert!(config.reward_weights().is_err());

        let file = write_config("[reward]\npreset = \"harsh\"\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        let err = config.reward_weights().unwrap_err();
        assert!(err.to_string().contains("harsh"), "{err}");
    }

    #[test]
    fn invalid_tables_fail_validation() {
        let file = write_config("[restrictions]\nbeta_multipliers = [1.0, 0.6, 0.7, 0.2]\n");
        let config = ToolkitConfig::load(Some(file.path())).unwrap();
        assert!(config.validate().is_err());
    }

    #[test]
    fn config_roundtrips_through_serialization() {
        let config = ToolkitConfig::default();
        let text = toml::to_string(&config).unwrap();
        let back: ToolkitConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.simulation.gamma, config.simulation.gamma);
        assert_eq!(back.restrictions.zetas, config.restrictions.zetas);
    }
}

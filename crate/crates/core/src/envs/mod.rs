//! The reference environments and their configuration.
//!
//! Parameters can be overridden from a TOML file whose tables mirror the
//! parameter structs:
//!
//! ```toml
//! [observation]
//! height = 100
//! width = 100
//! depth = 4
//!
//! [hover2d]
//! max_steps = 300
//!
//! [goalie]
//! max_angle_deg = 10.0
//! ```

pub mod cartpole;
pub mod goalie;
pub mod hover;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cartpole::{CartPole, CartPoleParams, CartPoleState};
pub use goalie::{Goalie, GoalieParams, GoalieState};
pub use hover::{Hover2D, HoverParams, HoverState};

use crate::env::{DynEnv, Dynamics, Env, EnvError, ObservationSpec};

pub const ENV_NAMES: [&str; 3] = ["cartpole", "hover2d", "goalie"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvConfig {
    pub observation: ObservationSpec,
    pub cartpole: CartPoleParams,
    pub hover2d: HoverParams,
    pub goalie: GoalieParams,
}

impl EnvConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let cfg: EnvConfig = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.observation.is_valid() {
            return Err(ConfigError::Invalid(
                "observation height, width and depth must be >= 1".into(),
            ));
        }
        self.cartpole.validate().map_err(ConfigError::Invalid)?;
        self.hover2d.validate().map_err(ConfigError::Invalid)?;
        self.goalie.validate().map_err(ConfigError::Invalid)?;
        Ok(())
    }

    /// Bare dynamics for `name`, without rendering.
    pub fn dynamics(&self, name: &str) -> Result<Box<dyn Dynamics + Send>, EnvError> {
        Ok(match name {
            "cartpole" => Box::new(CartPole::new(self.cartpole.clone())),
            "hover2d" => Box::new(Hover2D::new(self.hover2d.clone())),
            "goalie" => Box::new(Goalie::new(self.goalie.clone())),
            other => return Err(EnvError::UnknownEnv(other.to_owned())),
        })
    }

    pub fn make(&self, name: &str) -> Result<DynEnv, EnvError> {
        Ok(Env::new(self.dynamics(name)?, self.observation))
    }
}

/// Environment `name` with default parameters.
pub fn make_env(name: &str) -> Result<DynEnv, EnvError> {
    EnvConfig::default().make(name)
}

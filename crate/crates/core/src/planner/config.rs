use serde::{Deserialize, Serialize};

use crate::autodiff::Hyper;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    /// Maximum plan length N. With `w3 = 100` a step only moves when more than
    /// about a hundred later steps pull on it, so N must be well above that.
    pub steps: usize,
    /// Learning rate.
    pub omega: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub max_iterations: usize,
    pub cutoff_secs: f64,
    /// Half-width of the interval parameters are drawn from initially.
    pub init_scale: f64,
    pub seed: u64,
    /// Offset of detour targets from obstacle vertices.
    pub eps: f64,
    /// Consecutive exhausted rollouts without improvement before giving up.
    pub stall_limit: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            steps: 200,
            omega: 0.001,
            w1: 1.0,
            w2: 1.0,
            w3: 100.0,
            max_iterations: 1_000_000,
            cutoff_secs: 300.0,
            init_scale: 1.0,
            seed: 0,
            eps: 0.5,
            stall_limit: 200,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl PlannerConfig {
    /// Reads a TOML table; missing keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: PlannerConfig = toml::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.steps < 1 {
            return bad("steps must be at least 1");
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad("omega must be positive");
        }
        if [self.w1, self.w2, self.w3].iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return bad("weights must be non-negative");
        }
        if !(self.cutoff_secs > 0.0) {
            return bad("cutoff must be positive");
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad("eps must be positive");
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return bad("init_scale must be positive");
        }
        if self.max_iterations < 1 || self.stall_limit < 1 {
            return bad("iteration limits must be at least 1");
        }
        Ok(())
    }

    pub fn hyper(&self) -> Hyper {
        Hyper { w1: self.w1, w2: self.w2, w3: self.w3, eps: self.eps }
    }
}

//! Built-in scenarios. Each is a TOML config shipped in `scenarios/` with
//! a pinned default seed.

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

pub struct Scenario {
    pub name: &'static str,
    pub toml: &'static str,
}

macro_rules! scenario {
    ($name:literal) => {
        Scenario {
            name: $name,
            toml: include_str!(concat!("../scenarios/", $name, ".toml")),
        }
    };
}

pub const SCENARIOS: &[Scenario] = &[
    scenario!("fig2"),
    scenario!("fig3"),
    scenario!("fig4a"),
    scenario!("fig4b"),
    scenario!("fig5a"),
    scenario!("fig5b"),
    scenario!("fig6"),
    scenario!("fig6-assign-appraise"),
    scenario!("fig7"),
    scenario!("manager-baseline"),
    scenario!("random-baseline"),
];

pub fn names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.name).collect()
}

/// The named scenario, with its seed replaced when `seed` is given.
pub fn scenario(name: &str, seed: Option<u64>) -> Result<ExperimentConfig> {
    let s = SCENARIOS.iter().find(|s| s.name == name).ok_or_else(|| {
        HarnessError::Config(format!(
            "unknown scenario {name:?}; available: {}",
            names().join(", ")
        ))
    })?;
    let mut cfg = ExperimentConfig::from_toml_str(s.toml)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

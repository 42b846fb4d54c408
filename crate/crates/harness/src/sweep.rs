//! One-parameter sweeps over a config.

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// `path=v1,v2,...`, e.g. `model.tau_app=1,2,4`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub path: Vec<String>,
    pub values: Vec<toml::Value>,
    /// The values as written, for labelling outputs.
    pub labels: Vec<String>,
}

fn parse_value(raw: &str) -> toml::Value {
    #[derive(serde::Deserialize)]
    struct Wrap {
        v: toml::Value,
    }
    toml::from_str::<Wrap>(&format!("v = {raw}"))
        .map(|w| w.v)
        .unwrap_or_else(|_| toml::Value::String(raw.to_string()))
}

impl SweepSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let (path, values) = spec.split_once('=').ok_or_else(|| {
            HarnessError::Config(format!(
                "sweep parameter {spec:?} is not of the form path=v1,v2"
            ))
        })?;
        let path: Vec<String> = path.trim().split('.').map(str::to_string).collect();
        if path.iter().any(|p| p.is_empty()) {
            return Err(HarnessError::Config(format!(
                "bad parameter path in {spec:?}"
            )));
        }
        let labels: Vec<String> = values
            .split(',')
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty())
            .collect();
        if labels.is_empty() {
            return Err(HarnessError::Config(format!("no values in {spec:?}")));
        }
        Ok(SweepSpec {
            path,
            values: labels.iter().map(|l| parse_value(l)).collect(),
            labels,
        })
    }

    pub fn key(&self) -> String {
        self.path.join(".")
    }
}

/// `cfg` with the value at `path` replaced. Missing intermediate tables
/// are created; the result is revalidated.
pub fn with_override(
    cfg: &ExperimentConfig,
    path: &[String],
    value: toml::Value,
) -> Result<ExperimentConfig> {
    let mut root = toml::Value::try_from(cfg)
        .map_err(|e| HarnessError::Config(format!("config to TOML: {e}")))?;
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut node = &mut root;
    for p in parents {
        let table = node
            .as_table_mut()
            .ok_or_else(|| HarnessError::Config(format!("{} is not a table", path.join("."))))?;
        node = table
            .entry(p.clone())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    node.as_table_mut()
        .ok_or_else(|| HarnessError::Config(format!("{} is not a table", path.join("."))))?
        .insert(last.clone(), value);
    let out: ExperimentConfig = root
        .try_into()
        .map_err(|e: toml::de::Error| HarnessError::Config(format!("{}: {e}", path.join("."))))?;
    out.validate()?;
    Ok(out)
}

/// Expands a sweep into configs, one per value, in the order given.
pub fn expand(cfg: &ExperimentConfig, spec: &SweepSpec) -> Result<Vec<ExperimentConfig>> {
    spec.values
        .iter()
        .map(|v| with_override(cfg, &spec.path, v.clone()))
        .collect()
}

/// Runs `f` on every expanded config in parallel; results come back in
/// sweep order regardless of scheduling.
pub fn run_sweep<T: Send>(
    cfg: &ExperimentConfig,
    spec: &SweepSpec,
    f: impl Fn(usize, &ExperimentConfig) -> T + Sync,
) -> Result<Vec<T>> {
    let configs = expand(cfg, spec)?;
    Ok(configs
        .par_iter()
        .enumerate()
        .map(|(k, c)| f(k, c))
        .collect())
}

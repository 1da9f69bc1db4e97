use std::path::Path;

use anyhow::Context;
use serde::Deserialize;

/// Optional TOML defaults. Command-line flags override every key.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub initial_grid: Option<usize>,
    pub refine_levels: Option<usize>,
    pub tol_det: Option<f64>,
    pub grid: Option<usize>,
    pub quad: Option<usize>,
    pub j_range: Option<usize>,
    pub x_range: Option<String>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub grid_range: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
            }
        }
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// `lo:hi:n` as `n` evenly spaced points.
pub fn parse_range(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    anyhow::ensure!(parts.len() == 3, "range `{s}` is not of the form lo:hi:n");
    let lo: f64 = parts[0].trim().parse().with_context(|| format!("range start in `{s}`"))?;
    let hi: f64 = parts[1].trim().parse().with_context(|| format!("range end in `{s}`"))?;
    let n: usize = parts[2].trim().parse().with_context(|| format!("point count in `{s}`"))?;
    anyhow::ensure!(n >= 1, "range `{s}` needs at least one point");
    anyhow::ensure!(lo.is_finite() && hi.is_finite(), "range `{s}` has a non-finite bound");
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

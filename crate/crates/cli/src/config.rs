//! Flat `key = value` configuration files. Keys are the long command-line
//! flag names; values given on the command line take precedence.

use std::path::{Path, PathBuf};

use tfd_core::CostKind;

use crate::error::{HarnessError, Result};
use crate::grid::GridReading;

/// Every setting that may come from a flag or from a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub g: Option<f64>,
    pub beta: Option<f64>,
    pub cost: Option<CostKind>,
    pub zeta: Option<f64>,
    pub tau: Option<f64>,
    pub seed: Option<u64>,
    pub pop: Option<usize>,
    pub max_gen: Option<usize>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub betas: Option<Vec<f64>>,
    pub g_values: Option<Vec<f64>>,
    pub costs: Option<Vec<CostKind>>,
    pub zeta_min: Option<f64>,
    pub zeta_max: Option<f64>,
    pub zeta_step: Option<f64>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_step: Option<f64>,
    pub coarse: Option<usize>,
    pub grid_reading: Option<GridReading>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        Options { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Options {
    /// `self` with every field set in `top` replaced.
    pub fn overridden_by(self, top: Options) -> Options {
        let base = self;
        overlay!(base, top; g, beta, cost, zeta, tau, seed, pop, max_gen, out, workers, betas,
            g_values, costs, zeta_min, zeta_max, zeta_step, tau_min, tau_max, tau_step, coarse, grid_reading)
    }

    pub fn parse_config(text: &str) -> Result<Options> {
        let mut o = Options::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| HarnessError::Config(format!("line {}: {msg}", n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, found {line:?}")))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            o.set(&key, value).map_err(|e| bad(e.to_string()))?;
        }
        Ok(o)
    }

    pub fn load(path: &Path) -> Result<Options> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse_config(&text).map_err(|e| e.with_path(path))
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "g" => self.g = Some(parse_num(key, value)?),
            "beta" => self.beta = Some(parse_num(key, value)?),
            "cost" => self.cost = Some(parse_cost(value)?),
            "zeta" => self.zeta = Some(parse_num(key, value)?),
            "tau" => self.tau = Some(parse_num(key, value)?),
            "seed" => self.seed = Some(parse_num(key, value)?),
            "pop" => self.pop = Some(parse_num(key, value)?),
            "max-gen" => self.max_gen = Some(parse_num(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "workers" => self.workers = Some(parse_num(key, value)?),
            "betas" => self.betas = Some(parse_list(key, value, parse_num)?),
            "g-values" => self.g_values = Some(parse_list(key, value, parse_num)?),
            "costs" => self.costs = Some(parse_list(key, value, |_, v| parse_cost(v))?),
            "zeta-min" => self.zeta_min = Some(parse_num(key, value)?),
            "zeta-max" => self.zeta_max = Some(parse_num(key, value)?),
            "zeta-step" => self.zeta_step = Some(parse_num(key, value)?),
            "tau-min" => self.tau_min = Some(parse_num(key, value)?),
            "tau-max" => self.tau_max = Some(parse_num(key, value)?),
            "tau-step" => self.tau_step = Some(parse_num(key, value)?),
            "coarse" => self.coarse = Some(parse_num(key, value)?),
            "grid-reading" => self.grid_reading = Some(value.parse().map_err(HarnessError::Config)?),
            other => return Err(HarnessError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| HarnessError::Config(format!("{key} = {value:?} is not a valid number")))
}

pub fn parse_cost(value: &str) -> Result<CostKind> {
    value.parse().map_err(|e: tfd_core::Error| HarnessError::Config(e.to_string()))
}

fn parse_list<T>(key: &str, value: &str, item: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(key, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_lists() {
        let o = Options::parse_config(
            "# sweep settings\n g = 2\nmax_gen=50  # short run\ncosts = c0, c2\n\nout = a b.csv\n",
        )
        .unwrap();
        assert_eq!(o.g, Some(2.0));
        assert_eq!(o.max_gen, Some(50));
        assert_eq!(o.costs, Some(vec![CostKind::C0, CostKind::C2]));
        assert_eq!(o.out, Some(PathBuf::from("a b.csv")));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Options::parse_config("colour = red").is_err());
        assert!(Options::parse_config("pop = many").is_err());
        assert!(Options::parse_config("just text").is_err());
        assert!(Options::parse_config("cost = c9").is_err());
    }

    #[test]
    fn command_line_wins() {
        let file = Options::parse_config("g = 2\nseed = 4").unwrap();
        let cli = Options {
            g: Some(5.0),
            ..Options::default()
        };
        let merged = file.overridden_by(cli);
        assert_eq!(merged.g, Some(5.0));
        assert_eq!(merged.seed, Some(4));
    }
}

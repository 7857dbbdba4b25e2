//! Run configuration: flat `key=value` files overridden by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "QNLAB_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub dmax: u64,
    pub qmax: u64,
    pub primes: Vec<u64>,
    /// Coordinate bound for norm-element searches.
    pub bound: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub group_cap: usize,
    /// Attach the Minkowski-bound class number to scan records (`Δ ≤ 2000`).
    pub oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dmax: 1000,
            qmax: 200,
            primes: vec![3, 5],
            bound: 4,
            workers: 0,
            out: None,
            group_cap: quadnorm::transfer::DEFAULT_ORDER_CAP,
            oracle: false,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are ignored; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::InvalidConfig(format!("line {}: expected key=value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dmax" => self.dmax = parse_num(key, value)?,
            "qmax" => self.qmax = parse_num(key, value)?,
            "primes" => self.primes = parse_list(value)?,
            "bound" => self.bound = parse_num(key, value)?,
            "workers" => self.workers = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "group_cap" => self.group_cap = parse_num(key, value)?,
            "oracle" => {
                self.oracle = value.parse().map_err(|_| {
                    HarnessError::InvalidConfig(format!("oracle: expected true or false, got {value:?}"))
                })?
            }
            _ => return Err(HarnessError::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dmax", self.dmax),
            ("qmax", self.qmax),
            ("bound", self.bound),
            ("group_cap", self.group_cap as u64),
        ];
        if let Some((key, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(HarnessError::InvalidConfig(format!("{key} must be positive")));
        }
        if self.primes.is_empty() {
            return Err(HarnessError::InvalidConfig("primes must be nonempty".into()));
        }
        if let Some(p) = self.primes.iter().find(|&&p| p < 3 || !quadnorm::arith::is_prime(p)) {
            return Err(HarnessError::InvalidConfig(format!("{p} is not an odd prime")));
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| HarnessError::InvalidConfig(format!("{key}: not a number: {value:?}")))
}

/// Comma- or space-separated integers.
pub fn parse_list(value: &str) -> Result<Vec<u64>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_num("list", t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let cfg = RunConfig::parse("# lab\ndmax = 500\nprimes=3, 5,7\noracle=true\n").unwrap();
        assert_eq!(cfg.dmax, 500);
        assert_eq!(cfg.primes, vec![3, 5, 7]);
        assert!(cfg.oracle);
        assert_eq!(cfg.qmax, RunConfig::default().qmax);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["dmax", "dmax=x", "colour=red", "dmax=0", "primes=4", "primes=2", "oracle=maybe"] {
            assert!(matches!(RunConfig::parse(text), Err(HarnessError::InvalidConfig(_))), "{text}");
        }
    }
}

//! Textual forms of run parameters: block specs, α, grids and length lists.

use std::fmt;
use std::str::FromStr;

use alphadpp_core::fermion::{Block, BlockSpec, Parity};
use serde::Serialize;
use thiserror::Error;

/// A malformed command-line value. Always maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UsageError {
    #[error("malformed block token `{token}`: {reason}")]
    BlockToken { token: String, reason: String },
    #[error("malformed {what} `{value}`: {reason}")]
    Value {
        what: &'static str,
        value: String,
        reason: String,
    },
    #[error("{0}")]
    Invalid(String),
}

fn value_error(what: &'static str, value: &str, reason: impl Into<String>) -> UsageError {
    UsageError::Value {
        what,
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn parse_real(what: &'static str, s: &str) -> Result<f64, UsageError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| value_error(what, s, "expected a real number"))?;
    if !v.is_finite() {
        return Err(value_error(what, s, "must be finite"));
    }
    Ok(v)
}

/// Parses `a:w[,a:w…]`.
pub fn parse_blocks(s: &str) -> Result<Vec<Block>, UsageError> {
    if s.trim().is_empty() {
        return Err(UsageError::BlockToken {
            token: s.to_string(),
            reason: "expected at least one `a:w` pair".into(),
        });
    }
    s.split(',')
        .map(|token| {
            let bad = |reason: &str| UsageError::BlockToken {
                token: token.to_string(),
                reason: reason.to_string(),
            };
            let (a, w) = token.split_once(':').ok_or_else(|| bad("expected `a:w`"))?;
            if a.trim().is_empty() || w.trim().is_empty() {
                return Err(bad("both the offset a and the width w are required"));
            }
            let a: f64 = a.trim().parse().map_err(|_| bad("offset a is not a number"))?;
            let w: f64 = w.trim().parse().map_err(|_| bad("width w is not a number"))?;
            if !(a.is_finite() && a >= 0.0) {
                return Err(bad("offset a must be finite and >= 0"));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(bad("width w must be finite and > 0"));
            }
            Ok(Block::new(a, w))
        })
        .collect()
}

/// Canonical `a:w,…` form using shortest round-trip decimal representations.
pub fn format_blocks(blocks: &[Block]) -> String {
    blocks
        .iter()
        .map(|b| format!("{}:{}", b.a, b.w))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Even,
    Odd,
    Custom,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
            ParityArg::Custom => Parity::Custom,
        }
    }
}

pub fn build_spec(blocks: &str, m: u64, parity: ParityArg) -> Result<BlockSpec, UsageError> {
    let blocks = parse_blocks(blocks)?;
    BlockSpec::new(blocks, m, parity.into()).map_err(|e| UsageError::Invalid(e.to_string()))
}

/// `α` given as `p/q`, an integer or a decimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(pub f64);

impl FromStr for Alpha {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = match s.split_once('/') {
            Some((p, q)) => {
                let p = parse_real("alpha", p)?;
                let q = parse_real("alpha", q)?;
                if q == 0.0 {
                    return Err(value_error("alpha", s, "zero denominator"));
                }
                p / q
            }
            None => parse_real("alpha", s)?,
        };
        Ok(Alpha(v))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 0.0 {
            let m = -1.0 / self.0;
            if (m - m.round()).abs() < 1e-12 && m.round() >= 1.0 {
                return write!(f, "-1/{}", m.round() as u64);
            }
        }
        write!(f, "{}", self.0)
    }
}

impl Alpha {
    /// `m` with `α = -1/m`, or a usage error.
    pub fn m(self) -> Result<u64, UsageError> {
        alphadpp_core::alpha_det::AlphaParam::process(self.0)
            .ok()
            .and_then(|a| a.m())
            .ok_or_else(|| {
                value_error(
                    "alpha",
                    &self.to_string(),
                    "must be -1/m for a positive integer m",
                )
            })
    }
}

/// `min:max:count` with equally spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(value_error("grid", s, "expected min:max:count"));
        }
        let min = parse_real("grid", parts[0])?;
        let max = parse_real("grid", parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| value_error("grid", s, "count must be a non-negative integer"))?;
        Grid::new(min, max, count).map_err(|reason| value_error("grid", s, reason))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, &'static str> {
        if count == 0 {
            return Err("the grid is empty");
        }
        if count > 1 && !(min < max) {
            return Err("min must be smaller than max");
        }
        Ok(Self { min, max, count })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + h * i as f64).collect()
    }
}

/// `min:max:count` (linear) or `min:max:logcount` (geometric).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthList {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl FromStr for LengthList {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(value_error(
                "length list",
                s,
                "expected min:max:count or min:max:logcount",
            ));
        }
        let min = parse_real("length list", parts[0])?;
        let max = parse_real("length list", parts[1])?;
        let (log, count) = match parts[2].trim().strip_prefix("log") {
            Some(rest) => (true, rest),
            None => (false, parts[2].trim()),
        };
        let count: usize = count
            .parse()
            .map_err(|_| value_error("length list", s, "count must be a positive integer"))?;
        if count == 0 {
            return Err(value_error("length list", s, "the list is empty"));
        }
        if !(min > 0.0) || (count > 1 && !(min < max)) {
            return Err(value_error(
                "length list",
                s,
                "lengths must satisfy 0 < min < max",
            ));
        }
        Ok(Self { min, max, count, log })
    }
}

impl fmt::Display for LengthList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let log = if self.log { "log" } else { "" };
        write!(f, "{}:{}:{log}{}", self.min, self.max, self.count)
    }
}

impl LengthList {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let t = |i: usize| i as f64 / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if self.log {
                    (self.min.ln() + t(i) * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t(i) * (self.max - self.min)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything that determines a command's output, echoed into file headers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<String>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l_list: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str, format: Format) -> Self {
        Self {
            command: command.to_string(),
            blocks: None,
            m: None,
            parity: None,
            alpha: None,
            grid: None,
            l_list: None,
            replicates: None,
            seed: None,
            extra: None,
            output: None,
            format,
        }
    }
}

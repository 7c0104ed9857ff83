//! Sweep configuration: a flat `key = value` text format with `#` comments.
//!
//! ```text
//! d = 2
//! N = 4, 8, 16        # or: N-range = 4:16:4
//! k = 1, 2
//! state = random-mixed:rank=2
//! seed = 7
//! samples = 0
//! output = sweep.csv
//! tolerance = 1e-10
//! ```

use std::fmt;
use std::str::FromStr;

use definetti::family::StateFamily;

use crate::error::CliError;

/// Longest particle-number list a range may expand to.
pub const MAX_RANGE_LEN: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub d: usize,
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub state: StateFamily,
    pub seed: u64,
    /// Monte Carlo samples per row; 0 disables the estimator.
    pub mc_samples: usize,
    pub output: String,
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            d: 2,
            n_list: vec![4, 8, 16],
            k_list: vec![1],
            state: StateFamily::Hartree,
            seed: 0,
            mc_samples: 0,
            output: "sweep.csv".into(),
            tolerance: 1e-10,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_uint<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| usage(format!("{key}: `{}` is not a non-negative integer", value.trim())))
}

/// Comma-separated list of non-negative integers.
pub fn parse_list(key: &str, value: &str) -> Result<Vec<usize>, CliError> {
    let out: Vec<usize> = value.split(',').map(|t| parse_uint(key, t)).collect::<Result<_, _>>()?;
    if out.len() > MAX_RANGE_LEN {
        return Err(usage(format!("{key}: more than {MAX_RANGE_LEN} entries")));
    }
    Ok(out)
}

/// `a:b:step` (or `a:b` with step 1), inclusive of `b` when reached.
pub fn parse_n_range(value: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = value.trim().split(':').collect();
    let (a, b, step) = match parts.as_slice() {
        [a, b] => (
            parse_uint::<usize>("N-range", a)?,
            parse_uint::<usize>("N-range", b)?,
            1,
        ),
        [a, b, s] => (
            parse_uint::<usize>("N-range", a)?,
            parse_uint::<usize>("N-range", b)?,
            parse_uint::<usize>("N-range", s)?,
        ),
        _ => return Err(usage(format!("N-range: expected a:b or a:b:step, got `{value}`"))),
    };
    if step == 0 {
        return Err(usage("N-range: step must be positive"));
    }
    if a > b {
        return Err(usage(format!("N-range: start {a} exceeds end {b}")));
    }
    if (b - a) / step >= MAX_RANGE_LEN {
        return Err(usage(format!("N-range: more than {MAX_RANGE_LEN} entries")));
    }
    Ok((a..=b).step_by(step).collect())
}

impl SweepConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key.trim() {
            "d" => self.d = parse_uint(key, value)?,
            "N" => self.n_list = parse_list(key, value)?,
            "N-range" => self.n_list = parse_n_range(value)?,
            "k" => self.k_list = parse_list(key, value)?,
            "state" => self.state = value.parse().map_err(|e: definetti::Error| usage(e.to_string()))?,
            "seed" => self.seed = parse_uint(key, value)?,
            "samples" => self.mc_samples = parse_uint(key, value)?,
            "output" => {
                if value.is_empty() {
                    return Err(usage("output: empty path"));
                }
                self.output = value.to_string();
            }
            "tolerance" => {
                let t: f64 = value
                    .parse()
                    .map_err(|_| usage(format!("tolerance: `{value}` is not a number")))?;
                self.tolerance = t;
            }
            other => return Err(usage(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Check the cross-field invariants.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.d == 0 {
            return Err(usage("d must be at least 1"));
        }
        if self.n_list.is_empty() || self.k_list.is_empty() {
            return Err(usage("N and k lists must be non-empty"));
        }
        if self.k_list.contains(&0) {
            return Err(usage("k must be at least 1"));
        }
        let min_n = *self.n_list.iter().min().expect("non-empty");
        let max_k = *self.k_list.iter().max().expect("non-empty");
        if max_k > min_n {
            return Err(usage(format!("k = {max_k} exceeds N = {min_n}")));
        }
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return Err(usage(format!(
                "tolerance must be finite and non-negative, got {}",
                self.tolerance
            )));
        }
        if self.mc_samples == 1 {
            return Err(usage("samples must be 0 or at least 2"));
        }
        if !self.state.supports(self.d) {
            return Err(usage(format!(
                "state `{}` is not available for d = {}",
                self.state, self.d
            )));
        }
        Ok(())
    }
}

impl FromStr for SweepConfig {
    type Err = CliError;

    /// Parse a config file; keys not present keep their defaults. The
    /// result is not validated.
    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut cfg = SweepConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key, value)
                .map_err(|e| usage(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SweepConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d = {}", self.d)?;
        writeln!(f, "N = {}", join(&self.n_list))?;
        writeln!(f, "k = {}", join(&self.k_list))?;
        writeln!(f, "state = {}", self.state)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "samples = {}", self.mc_samples)?;
        writeln!(f, "output = {}", self.output)?;
        writeln!(f, "tolerance = {:e}", self.tolerance)
    }
}

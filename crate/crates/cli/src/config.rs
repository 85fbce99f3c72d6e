//! JSON run configuration.
//!
//! ```json
//! {
//!   "mu": "100-1/6",
//!   "a": ["7/3", "5/3"],
//!   "n_values": [10, 100, 1000],
//!   "tol": 1e-12,
//!   "max_iter": 50000,
//!   "seed": 0,
//!   "output_dir": "out",
//!   "emit_svg": true
//! }
//! ```
//!
//! `mu` and the entries of `a` are exact rationals given as strings
//! (`"7/3"`, `"2.5"`, `"100-1/6"`) or JSON integers. JSON floats are refused
//! because most of them are not the value the user wrote. Every field is
//! optional; missing parameters fall back to the period-2 reference set.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use tritoep::matrix::Limits;
use tritoep::presets::{reference_set, Preset};
use tritoep::{MatrixSpec, PowerOptions, Rational};

/// Number of points on the default `n` grid.
pub const GRID_POINTS: usize = 40;
pub const GRID_MIN: usize = 10;
pub const GRID_MAX: usize = 2000;

/// `GRID_POINTS` integers log-spaced over `[GRID_MIN, GRID_MAX]`.
pub fn default_grid() -> Vec<usize> {
    let ratio = (GRID_MAX as f64 / GRID_MIN as f64).ln();
    let mut grid: Vec<usize> = (0..GRID_POINTS)
        .map(|k| {
            let t = k as f64 / (GRID_POINTS - 1) as f64;
            (GRID_MIN as f64 * (ratio * t).exp()).round() as usize
        })
        .collect();
    grid.dedup();
    grid
}

/// A rational literal as it appears in the config file.
#[derive(Debug, Clone, PartialEq)]
struct Literal(Rational);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct LiteralVisitor;

        impl<'de> Visitor<'de> for LiteralVisitor {
            type Value = Literal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a string such as \"7/3\" or \"100-1/6\", or an integer")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Literal, E> {
                s.parse().map(Literal).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Literal, E> {
                Ok(Literal(Rational::from_integer(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Literal, E> {
                i64::try_from(v)
                    .map(|v| Literal(Rational::from_integer(v)))
                    .map_err(|_| E::custom(format!("integer {v} is out of range")))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Literal, E> {
                Err(E::custom(format!(
                    "float {v} is not exact; write it as a string, e.g. \"{v}\" or \"p/q\""
                )))
            }
        }

        d.deserialize_any(LiteralVisitor)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mu: Option<Literal>,
    a: Option<Vec<Literal>>,
    n_values: Option<Vec<usize>>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    emit_svg: Option<bool>,
    exact_cap: Option<usize>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mu: Rational,
    pub a: Vec<Rational>,
    /// Non-empty and strictly increasing.
    pub n_values: Vec<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    /// Largest `n` for which the Frobenius norm of the inverse is computed.
    pub exact_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let preset = reference_set(2).expect("period-2 set exists");
        let power = PowerOptions::default();
        RunConfig {
            mu: preset.mu,
            a: preset.a,
            n_values: default_grid(),
            tol: power.tol,
            max_iter: power.max_iter,
            seed: power.seed,
            output_dir: PathBuf::from("."),
            emit_svg: false,
            exact_cap: Limits::default().exact_cap,
        }
    }
}

impl RunConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let mut cfg = RunConfig::default();
        match (raw.mu, raw.a) {
            (Some(mu), Some(a)) => {
                cfg.mu = mu.0;
                cfg.a = a.into_iter().map(|l| l.0).collect();
            }
            (None, None) => {}
            (Some(_), None) => bail!("field `mu` is set but `a` is missing"),
            (None, Some(_)) => bail!("field `a` is set but `mu` is missing"),
        }
        if let Some(n) = raw.n_values {
            cfg.n_values = n;
        }
        if let Some(t) = raw.tol {
            cfg.tol = t;
        }
        if let Some(m) = raw.max_iter {
            cfg.max_iter = m;
        }
        if let Some(s) = raw.seed {
            cfg.seed = s;
        }
        if let Some(d) = raw.output_dir {
            cfg.output_dir = d;
        }
        if let Some(s) = raw.emit_svg {
            cfg.emit_svg = s;
        }
        if let Some(c) = raw.exact_cap {
            cfg.exact_cap = c;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.a.is_empty() {
            bail!("field `a`: need at least one entry");
        }
        if self.n_values.is_empty() {
            bail!("field `n_values`: need at least one entry");
        }
        if let Some(pos) = self.n_values.iter().position(|&n| n == 0) {
            bail!("field `n_values[{pos}]`: dimension must be at least 1");
        }
        if let Some(pos) = self.n_values.windows(2).position(|w| w[0] >= w[1]) {
            bail!(
                "field `n_values[{}]`: values must be strictly increasing ({} follows {})",
                pos + 1,
                self.n_values[pos + 1],
                self.n_values[pos]
            );
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            bail!("field `tol`: must be positive and finite, got {}", self.tol);
        }
        if self.max_iter == 0 {
            bail!("field `max_iter`: must be at least 1");
        }
        Ok(())
    }

    pub fn use_preset(&mut self, preset: Preset) {
        self.mu = preset.mu;
        self.a = preset.a;
    }

    pub fn spec(&self, n: usize) -> anyhow::Result<MatrixSpec> {
        Ok(MatrixSpec::new(self.mu.clone(), self.a.clone(), n)?)
    }

    pub fn max_n(&self) -> usize {
        *self.n_values.last().expect("validated non-empty")
    }

    pub fn power_options(&self) -> PowerOptions {
        PowerOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
        }
    }

    pub fn limits(&self) -> Limits {
        Limits {
            exact_cap: self.exact_cap,
            ..Limits::default()
        }
    }
}

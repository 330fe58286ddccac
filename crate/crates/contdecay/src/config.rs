//! Run configuration: a flat `key = value` text format (one assignment per
//! line, `#` comments) describing the spectral support, model parameters,
//! time grid, and requested analyses for one computation.
//!
//! Parsing is strict: unknown keys, duplicate keys, malformed lines, and
//! values inconsistent with the chosen support are all hard errors, so a
//! typo cannot silently change what gets computed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

use crate::model::{ContinuumSpec, ModelError, ModelParams};

/// Errors from configuration parsing and validation.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    /// A line is not `key = value` (and not blank or a comment).
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    /// A key this format does not define.
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    /// The same key assigned twice.
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    /// A value failed to parse as its expected type.
    #[error("key `{key}`: expected {expected}, got `{value}`")]
    BadValue { key: String, expected: &'static str, value: String },
    /// A key the chosen support requires is absent.
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    /// A key that contradicts the chosen support is present.
    #[error("key `{key}` is not allowed when spec.kind = {kind}")]
    KeyNotAllowed { key: &'static str, kind: &'static str },
    /// Not enough parameter keys to pin down the model.
    #[error("parameters need at least `params.alpha` or both `params.vbar` and `params.epsilon`")]
    UnderdeterminedParams,
    /// Grid keys describe an unusable grid.
    #[error("grid: {0}")]
    Grid(String),
    /// A fit window sticks out of the computed time range.
    #[error("analysis window [{lo}, {hi}] extends outside the grid range [{t_min}, {t_max}]")]
    WindowOutsideGrid { lo: f64, hi: f64, t_min: f64, t_max: f64 },
    /// A sweepable parameter that does not apply to this configuration.
    #[error("unsupported sweep parameter `{0}` (expected omega_min, omega_max, alpha, or m)")]
    UnsupportedSweep(String),
    /// Model-level validation failure (support shape, parameter relation).
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which analyses a run should perform on the computed series.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisRequests {
    /// Exponential decay-constant fit over this window.
    pub fit_exponential: Option<(f64, f64)>,
    /// Power-law exponent fit over this window.
    pub fit_power_law: Option<(f64, f64)>,
    /// Detect regrowth events.
    pub regrowth: bool,
    /// Classify spectral moments up to this order.
    pub moments: Option<u32>,
    /// Classify the short-time behavior (grid must start at 0).
    pub short_time: bool,
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Spectral support to compute on.
    pub spec: ContinuumSpec,
    /// Model parameters.
    pub params: ModelParams,
    /// First grid time.
    pub t0: f64,
    /// Grid step (> 0).
    pub dt: f64,
    /// Number of grid points (≥ 1).
    pub n: usize,
    /// Whether the series is normalized to the raw amplitude at `t = 0`.
    pub normalize: bool,
    /// Absolute tolerance handed to the quadrature.
    pub abs_tol: f64,
    /// Where to write the series CSV (resolved by the command layer).
    pub output_path: Option<PathBuf>,
    /// Requested analyses.
    pub analysis: AnalysisRequests,
}

impl RunConfig {
    /// Last grid time, `t0 + (n − 1)·dt`.
    pub fn t_max(&self) -> f64 {
        self.t0 + (self.n - 1) as f64 * self.dt
    }
}

/// Raw `key = value` pairs with their line numbers, consumed one key at a
/// time so leftovers can be reported as unknown.
struct Keys {
    entries: BTreeMap<String, (usize, String)>,
}

impl Keys {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Malformed { line, text: content.to_string() });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Malformed { line, text: content.to_string() });
            }
            if entries.contains_key(&key) {
                return Err(ConfigError::DuplicateKey { line, key });
            }
            entries.insert(key, (line, value));
        }
        Ok(Keys { entries })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.take(key)
            .map(|v| match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(ConfigError::BadValue {
                    key: key.to_string(),
                    expected: "a finite real number",
                    value: v,
                }),
            })
            .transpose()
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.take(key)
            .map(|v| match v.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(ConfigError::BadValue {
                    key: key.to_string(),
                    expected: "true or false",
                    value: v,
                }),
            })
            .transpose()
    }

    fn take_u32(&mut self, key: &str) -> Result<Option<u32>, ConfigError> {
        self.take(key)
            .map(|v| {
                v.parse::<u32>().map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    expected: "a non-negative integer",
                    value: v,
                })
            })
            .transpose()
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.take(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    expected: "a non-negative integer",
                    value: v,
                })
            })
            .transpose()
    }

    /// A `lo,hi` pair with `lo < hi`.
    fn take_window(&mut self, key: &str) -> Result<Option<(f64, f64)>, ConfigError> {
        let Some(v) = self.take(key) else { return Ok(None) };
        let bad = || ConfigError::BadValue {
            key: key.to_string(),
            expected: "a window `lo,hi` with lo < hi",
            value: v.clone(),
        };
        let Some((lo, hi)) = v.split_once(',') else { return Err(bad()) };
        let (Ok(lo), Ok(hi)) = (lo.trim().parse::<f64>(), hi.trim().parse::<f64>()) else {
            return Err(bad());
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(bad());
        }
        Ok(Some((lo, hi)))
    }

    /// Errors on the first (lowest-line) remaining key.
    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_iter().min_by_key(|(_, (line, _))| *line) {
            Some((key, (line, _))) => Err(ConfigError::UnknownKey { line, key }),
            None => Ok(()),
        }
    }
}

fn build_spec(keys: &mut Keys) -> Result<ContinuumSpec, ConfigError> {
    let kind = keys.take("spec.kind").ok_or(ConfigError::MissingKey("spec.kind"))?;
    let omega_min = keys.take_f64("spec.omega_min")?;
    let omega_max = keys.take_f64("spec.omega_max")?;
    let m = keys.take_u32("spec.m")?;

    let forbid = |key: &'static str, present: bool, kind: &'static str| {
        if present {
            Err(ConfigError::KeyNotAllowed { key, kind })
        } else {
            Ok(())
        }
    };
    let spec = match kind.as_str() {
        "full" => {
            forbid("spec.omega_min", omega_min.is_some(), "full")?;
            forbid("spec.omega_max", omega_max.is_some(), "full")?;
            forbid("spec.m", m.is_some(), "full")?;
            ContinuumSpec::Full
        }
        "lower_truncated" => {
            forbid("spec.omega_max", omega_max.is_some(), "lower_truncated")?;
            forbid("spec.m", m.is_some(), "lower_truncated")?;
            let omega_min = omega_min.ok_or(ConfigError::MissingKey("spec.omega_min"))?;
            ContinuumSpec::LowerTruncated { omega_min }
        }
        "doubly_truncated" => {
            forbid("spec.m", m.is_some(), "doubly_truncated")?;
            let omega_min = omega_min.ok_or(ConfigError::MissingKey("spec.omega_min"))?;
            let omega_max = omega_max.ok_or(ConfigError::MissingKey("spec.omega_max"))?;
            ContinuumSpec::DoublyTruncated { omega_min, omega_max }
        }
        "discrete" => {
            forbid("spec.omega_min", omega_min.is_some(), "discrete")?;
            forbid("spec.omega_max", omega_max.is_some(), "discrete")?;
            let m = m.ok_or(ConfigError::MissingKey("spec.m"))?;
            ContinuumSpec::Discrete { m }
        }
        _ => {
            return Err(ConfigError::BadValue {
                key: "spec.kind".to_string(),
                expected: "one of full, lower_truncated, doubly_truncated, discrete",
                value: kind,
            })
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn build_params(keys: &mut Keys) -> Result<ModelParams, ConfigError> {
    let alpha = keys.take_f64("params.alpha")?;
    let vbar = keys.take_f64("params.vbar")?;
    let epsilon = keys.take_f64("params.epsilon")?;
    let omega_s = keys.take_f64("params.omega_s")?;
    let include = keys.take_bool("params.include_vbar_sq")?;

    let mut params = match (alpha, vbar, epsilon) {
        (Some(a), Some(v), Some(e)) => ModelParams::from_alpha_and_coupling(a, v, e)?,
        (Some(a), Some(v), None) => ModelParams::from_alpha_with_vbar(a, v)?,
        (None, Some(v), Some(e)) => ModelParams::from_coupling(v, e)?,
        (Some(a), None, None) => ModelParams::from_alpha(a)?,
        _ => return Err(ConfigError::UnderdeterminedParams),
    };
    if let Some(w) = omega_s {
        params = params.with_omega_s(w)?;
    }
    if let Some(flag) = include {
        params = params.with_vbar_sq_in_denominator(flag)?;
    }
    Ok(params)
}

/// Parses and validates one run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut keys = Keys::parse(text)?;

    let spec = build_spec(&mut keys)?;
    let params = build_params(&mut keys)?;

    let t0 = keys.take_f64("grid.t0")?.ok_or(ConfigError::MissingKey("grid.t0"))?;
    let dt = keys.take_f64("grid.dt")?.ok_or(ConfigError::MissingKey("grid.dt"))?;
    let n = keys.take_usize("grid.n")?.ok_or(ConfigError::MissingKey("grid.n"))?;
    if !(dt > 0.0) {
        return Err(ConfigError::Grid(format!("grid.dt must be positive, got {dt}")));
    }
    if n == 0 {
        return Err(ConfigError::Grid("grid.n must be at least 1".to_string()));
    }

    let normalize = keys.take_bool("normalize")?.unwrap_or(true);
    let abs_tol = keys.take_f64("abs_tol")?.unwrap_or(1e-10);
    if !(abs_tol > 0.0) {
        return Err(ConfigError::BadValue {
            key: "abs_tol".to_string(),
            expected: "a positive tolerance",
            value: abs_tol.to_string(),
        });
    }
    let output_path = keys.take("output_path").map(PathBuf::from);

    let analysis = AnalysisRequests {
        fit_exponential: keys.take_window("analysis.fit_exponential")?,
        fit_power_law: keys.take_window("analysis.fit_power_law")?,
        regrowth: keys.take_bool("analysis.regrowth")?.unwrap_or(false),
        moments: keys.take_u32("analysis.moments")?,
        short_time: keys.take_bool("analysis.short_time")?.unwrap_or(false),
    };
    keys.finish()?;

    let config = RunConfig {
        spec,
        params,
        t0,
        dt,
        n,
        normalize,
        abs_tol,
        output_path,
        analysis,
    };
    let t_max = config.t_max();
    let slop = 1e-9 * (1.0 + t_max.abs().max(config.t0.abs()));
    for window in [config.analysis.fit_exponential, config.analysis.fit_power_law]
        .into_iter()
        .flatten()
    {
        let (lo, hi) = window;
        if lo < config.t0 - slop || hi > t_max + slop {
            return Err(ConfigError::WindowOutsideGrid {
                lo,
                hi,
                t_min: config.t0,
                t_max,
            });
        }
    }
    Ok(config)
}

/// Returns a copy of `config` with one sweepable parameter replaced:
/// `omega_min`/`omega_max` (truncated supports), `alpha` (any support;
/// rebuilt keeping the coupling strength, the level-shift convention, and
/// the initial-state frequency), or `m` (discrete support).
pub fn apply_override(
    config: &RunConfig,
    param: &str,
    value: &str,
) -> Result<RunConfig, ConfigError> {
    let mut out = config.clone();
    let parse_real = || -> Result<f64, ConfigError> {
        match value.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(ConfigError::BadValue {
                key: param.to_string(),
                expected: "a finite real number",
                value: value.to_string(),
            }),
        }
    };
    match param {
        "omega_min" => {
            let x = parse_real()?;
            out.spec = match config.spec {
                ContinuumSpec::LowerTruncated { .. } => {
                    ContinuumSpec::LowerTruncated { omega_min: x }
                }
                ContinuumSpec::DoublyTruncated { omega_max, .. } => {
                    ContinuumSpec::DoublyTruncated { omega_min: x, omega_max }
                }
                ContinuumSpec::Full => {
                    return Err(ConfigError::KeyNotAllowed { key: "omega_min", kind: "full" })
                }
                ContinuumSpec::Discrete { .. } => {
                    return Err(ConfigError::KeyNotAllowed { key: "omega_min", kind: "discrete" })
                }
            };
        }
        "omega_max" => {
            let x = parse_real()?;
            out.spec = match config.spec {
                ContinuumSpec::DoublyTruncated { omega_min, .. } => {
                    ContinuumSpec::DoublyTruncated { omega_min, omega_max: x }
                }
                ContinuumSpec::Full => {
                    return Err(ConfigError::KeyNotAllowed { key: "omega_max", kind: "full" })
                }
                ContinuumSpec::LowerTruncated { .. } => {
                    return Err(ConfigError::KeyNotAllowed {
                        key: "omega_max",
                        kind: "lower_truncated",
                    })
                }
                ContinuumSpec::Discrete { .. } => {
                    return Err(ConfigError::KeyNotAllowed { key: "omega_max", kind: "discrete" })
                }
            };
        }
        "alpha" => {
            let a = parse_real()?;
            let mut params = match config.params.vbar() {
                Some(v) => ModelParams::from_alpha_with_vbar(a, v)?,
                None => ModelParams::from_alpha(a)?,
            };
            params = params.with_omega_s(config.params.omega_s())?;
            if config.params.include_vbar_sq() {
                params = params.with_vbar_sq_in_denominator(true)?;
            }
            out.params = params;
        }
        "m" => {
            let ContinuumSpec::Discrete { .. } = config.spec else {
                return Err(ConfigError::KeyNotAllowed { key: "m", kind: "continuum" });
            };
            let m = value.parse::<u32>().map_err(|_| ConfigError::BadValue {
                key: param.to_string(),
                expected: "a non-negative integer",
                value: value.to_string(),
            })?;
            out.spec = ContinuumSpec::Discrete { m };
        }
        _ => return Err(ConfigError::UnsupportedSweep(param.to_string())),
    }
    out.spec.validate()?;
    Ok(out)
}

//! Run configuration: scenario selection, stepsize parameters, output
//! control, and the flat TOML config-file schema with override merging.
//!
//! A run is fully determined by about ten scalars. Values resolve in the
//! order: command-line flag, config-file key, built-in default. The defaults
//! reproduce the switching experiment (tau = 16, horizon 100, condition
//! coefficient 100, gamma auto, h = 1, start (0, 40), disk of radius 50).

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::adversaries::{self, LossParams, Regime, Scenario};
use crate::error::{Error, Result};
use crate::space::{FeasibleSet, Vector};

/// Stepsize denominator: an explicit value, or the family Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    /// Use the loss family's gradient Lipschitz constant (the tightest value
    /// for which the bound certificate applies).
    Auto,
    Value(f64),
}

/// Which artifacts a run writes to its output directory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitSet {
    pub trace: bool,
    pub bounds: bool,
    pub summary: bool,
}

impl EmitSet {
    pub fn all() -> Self {
        Self { trace: true, bounds: true, summary: true }
    }

    pub fn none() -> Self {
        Self { trace: false, bounds: false, summary: false }
    }

    pub fn is_empty(&self) -> bool {
        !(self.trace || self.bounds || self.summary)
    }

    /// Parse a comma-separated subset of `trace,bounds,summary`, or `none`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("none") || spec.is_empty() {
            return Ok(Self::none());
        }
        let mut out = Self::none();
        for part in spec.split(',') {
            match part.trim() {
                "trace" => out.trace = true,
                "bounds" => out.bounds = true,
                "summary" => out.summary = true,
                other => {
                    return Err(Error::Config(format!(
                        "unknown emit target {other:?}; expected trace, bounds, summary, or none"
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Scenario family plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    Switching { s1: LossParams, s2: LossParams, cond: f64, tau: usize },
    Diminishing { a1: f64, b1: f64, drift_coeff: f64, cond: f64 },
    Preset { regime: Regime, base: LossParams, cond: f64 },
}

impl ScenarioSpec {
    pub fn build(&self, horizon: usize, set: FeasibleSet) -> Result<Scenario> {
        match *self {
            ScenarioSpec::Switching { s1, s2, cond, tau } => {
                adversaries::switching(s1, s2, cond, tau, horizon, set)
            }
            ScenarioSpec::Diminishing { a1, b1, drift_coeff, cond } => {
                adversaries::diminishing(a1, b1, drift_coeff, cond, horizon, set)
            }
            ScenarioSpec::Preset { regime, base, cond } => {
                adversaries::preset(regime, base, cond, horizon, set)
            }
        }
    }

    /// Short label used for sweep rows and per-run subdirectories.
    pub fn label(&self) -> String {
        match self {
            ScenarioSpec::Switching { tau, .. } => format!("switching-tau{tau}"),
            ScenarioSpec::Diminishing { .. } => "diminishing".into(),
            ScenarioSpec::Preset { regime, .. } => match regime {
                Regime::Constant => "constant".into(),
                Regime::LogPath => "log-path".into(),
                Regime::PowerPath { alpha } => format!("power-path-{alpha}"),
                Regime::ConstantDrift { step } => format!("constant-drift-{step}"),
            },
        }
    }
}

/// A fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    pub set: FeasibleSet,
    pub x_init: Vector,
    pub gamma: GammaSpec,
    pub h: f64,
    pub horizon: usize,
    pub output_dir: PathBuf,
    pub emit: EmitSet,
}

/// Unresolved configuration: every field optional, as read from a config
/// file or command-line flags. Merge layers with [`RawConfig::or`], then
/// [`RawConfig::resolve`] applies defaults and validates.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub scenario: Option<String>,
    pub tau: Option<usize>,
    pub horizon: Option<usize>,
    pub cond: Option<f64>,
    pub gamma: Option<GammaField>,
    pub h: Option<f64>,
    pub x_init: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub out: Option<PathBuf>,
    pub emit: Option<EmitField>,
    // Switching losses: centers (a, b) / (a2, b2), offsets c / c2.
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub a2: Option<f64>,
    pub b2: Option<f64>,
    pub c2: Option<f64>,
    // Diminishing scenario.
    pub a1: Option<f64>,
    pub b1: Option<f64>,
    pub drift_coeff: Option<f64>,
    // Presets.
    pub alpha: Option<f64>,
    pub drift: Option<f64>,
}

/// `gamma = 200.0` or `gamma = "auto"` in the file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GammaField {
    Value(f64),
    Word(String),
}

/// `emit = ["trace", "bounds"]` or `emit = "trace,bounds"` in the file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum EmitField {
    List(Vec<String>),
    Spec(String),
}

impl RawConfig {
    /// Load a flat key-value TOML file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Field-wise preference for `self`, falling back to `fallback`.
    pub fn or(self, fallback: RawConfig) -> RawConfig {
        RawConfig {
            scenario: self.scenario.or(fallback.scenario),
            tau: self.tau.or(fallback.tau),
            horizon: self.horizon.or(fallback.horizon),
            cond: self.cond.or(fallback.cond),
            gamma: self.gamma.or(fallback.gamma),
            h: self.h.or(fallback.h),
            x_init: self.x_init.or(fallback.x_init),
            radius: self.radius.or(fallback.radius),
            out: self.out.or(fallback.out),
            emit: self.emit.or(fallback.emit),
            a: self.a.or(fallback.a),
            b: self.b.or(fallback.b),
            c: self.c.or(fallback.c),
            a2: self.a2.or(fallback.a2),
            b2: self.b2.or(fallback.b2),
            c2: self.c2.or(fallback.c2),
            a1: self.a1.or(fallback.a1),
            b1: self.b1.or(fallback.b1),
            drift_coeff: self.drift_coeff.or(fallback.drift_coeff),
            alpha: self.alpha.or(fallback.alpha),
            drift: self.drift.or(fallback.drift),
        }
    }

    /// Apply defaults and validate into a runnable configuration.
    pub fn resolve(&self) -> Result<RunConfig> {
        let scenario_name = self.scenario.as_deref().unwrap_or("switching");
        let cond = self.cond.unwrap_or(100.0);

        let scenario = match scenario_name {
            "switching" => ScenarioSpec::Switching {
                s1: LossParams {
                    a: self.a.unwrap_or(-100.0),
                    b: self.b.unwrap_or(0.0),
                    c: self.c.unwrap_or(30.0),
                },
                s2: LossParams {
                    a: self.a2.unwrap_or(100.0),
                    b: self.b2.unwrap_or(20.0),
                    c: self.c2.unwrap_or(-50.0),
                },
                cond,
                tau: self.tau.unwrap_or(16),
            },
            "diminishing" => ScenarioSpec::Diminishing {
                a1: self.a1.unwrap_or(-60.0),
                b1: self.b1.unwrap_or(100.0),
                drift_coeff: self.drift_coeff.unwrap_or(5.0),
                cond,
            },
            "constant" | "log-path" | "power-path" | "constant-drift" => {
                let base = LossParams {
                    a: self.a.unwrap_or(0.0),
                    b: self.b.unwrap_or(0.0),
                    c: self.c.unwrap_or(0.0),
                };
                let regime = match scenario_name {
                    "constant" => Regime::Constant,
                    "log-path" => Regime::LogPath,
                    "power-path" => Regime::PowerPath { alpha: self.alpha.unwrap_or(0.5) },
                    _ => Regime::ConstantDrift { step: self.drift.unwrap_or(1.0) },
                };
                ScenarioSpec::Preset { regime, base, cond }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario {other:?}; expected switching, diminishing, constant, \
                     log-path, power-path, or constant-drift"
                )))
            }
        };

        let horizon = self.horizon.unwrap_or(match scenario {
            ScenarioSpec::Diminishing { .. } => 250,
            _ => 100,
        });
        if horizon < 1 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }

        let radius = self.radius.unwrap_or(50.0);
        let set = FeasibleSet::ball(Vector::zeros(2), radius)?;

        let x_init = match &self.x_init {
            Some(coords) => Vector::new(coords.clone())?,
            None => Vector::new(vec![0.0, 40.0])?,
        };
        if x_init.dim() != 2 {
            return Err(Error::Config("x_init must have exactly two coordinates".into()));
        }

        let gamma = match &self.gamma {
            None => GammaSpec::Auto,
            Some(GammaField::Value(v)) => {
                if !v.is_finite() || *v <= 0.0 {
                    return Err(Error::Config(format!("gamma must be positive, got {v}")));
                }
                GammaSpec::Value(*v)
            }
            Some(GammaField::Word(w)) if w.eq_ignore_ascii_case("auto") => GammaSpec::Auto,
            Some(GammaField::Word(w)) => {
                let v: f64 = w
                    .parse()
                    .map_err(|_| Error::Config(format!("gamma must be a number or `auto`, got {w:?}")))?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::Config(format!("gamma must be positive, got {v}")));
                }
                GammaSpec::Value(v)
            }
        };

        let h = self.h.unwrap_or(1.0);
        if !h.is_finite() || h <= 0.0 || h > 1.0 {
            return Err(Error::Config(format!("h must lie in (0, 1], got {h}")));
        }

        let emit = match &self.emit {
            None => EmitSet::all(),
            Some(EmitField::Spec(s)) => EmitSet::parse(s)?,
            Some(EmitField::List(items)) => EmitSet::parse(&items.join(","))?,
        };

        Ok(RunConfig {
            scenario,
            set,
            x_init,
            gamma,
            h,
            horizon,
            output_dir: self.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            emit,
        })
    }
}

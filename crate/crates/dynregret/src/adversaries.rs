//! Scenario generators: deterministic per-round loss sequences for the
//! 2-D quadratic experiments.
//!
//! Three families are provided: a switching adversary that alternates between
//! two fixed quadratics every `tau` rounds, a diminishing-variation adversary
//! whose first center coordinate drifts by `drift_coeff * sqrt(1/t)` per
//! round, and variability-regime presets whose minimizer path length follows
//! a prescribed growth law exactly.
//!
//! The adversary is oblivious: every `loss_at(t)` is a pure function of the
//! construction parameters and `t`.

use crate::error::{Error, Result};
use crate::losses::{LossConstants, QuadraticLoss};
use crate::space::{FeasibleSet, Vector};

/// Scalar parameters of one 2-D quadratic: center `(a, b)` and offset `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Center-drift law for `preset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// No drift: the loss is constant, so the minimizer path length is 0.
    Constant,
    /// Per-round drift `1/t`: path length grows like `log T`.
    LogPath,
    /// Per-round drift `1/t^alpha`, `alpha` in (0,1): path length `T^(1-alpha)`.
    PowerPath { alpha: f64 },
    /// Constant per-round drift: path length grows linearly.
    ConstantDrift { step: f64 },
}

/// A deterministic loss sequence over a feasible set.
#[derive(Debug, Clone)]
pub struct Scenario {
    name: String,
    description: String,
    set: FeasibleSet,
    losses: Vec<QuadraticLoss>,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn horizon(&self) -> usize {
        self.losses.len()
    }

    /// Loss of round `t` (1-based).
    pub fn loss_at(&self, t: usize) -> &QuadraticLoss {
        assert!(
            t >= 1 && t <= self.losses.len(),
            "round {t} outside 1..={}",
            self.losses.len()
        );
        &self.losses[t - 1]
    }

    pub fn losses(&self) -> &[QuadraticLoss] {
        &self.losses
    }

    /// Family-wide constants: the smallest strong-convexity modulus, the
    /// largest gradient Lipschitz constant, and the largest gradient bound
    /// across all rounds, so each is uniformly valid over the horizon.
    pub fn family_constants(&self) -> Result<LossConstants> {
        let mut mu = f64::INFINITY;
        let mut lip: f64 = 0.0;
        let mut grad_bound: f64 = 0.0;
        for loss in &self.losses {
            let c = loss.constants(&self.set)?;
            mu = mu.min(c.mu);
            lip = lip.max(c.lip);
            grad_bound = grad_bound.max(c.grad_bound);
        }
        Ok(LossConstants { mu, lip, grad_bound })
    }
}

fn check_common(cond: f64, horizon: usize, set: &FeasibleSet) -> Result<()> {
    if !cond.is_finite() || cond <= 0.0 {
        return Err(Error::InvalidParam(format!("condition coefficient must be positive, got {cond}")));
    }
    if horizon < 1 {
        return Err(Error::InvalidParam("horizon must be at least 1".into()));
    }
    if set.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: set.dim() });
    }
    Ok(())
}

fn quad(params: LossParams, cond: f64) -> Result<QuadraticLoss> {
    QuadraticLoss::new(vec![cond, 1.0], Vector::new(vec![params.a, params.b])?, params.c)
}

/// Switching adversary: rounds 1..=tau use the first loss, the next tau
/// rounds the second, alternating. The k-th switch happens at round
/// `k*tau + 1`, so `floor((T-1)/tau)` switches occur within the horizon.
pub fn switching(
    s1: LossParams,
    s2: LossParams,
    cond: f64,
    tau: usize,
    horizon: usize,
    set: FeasibleSet,
) -> Result<Scenario> {
    check_common(cond, horizon, &set)?;
    if tau < 1 {
        return Err(Error::InvalidParam("tau must be at least 1".into()));
    }
    let f1 = quad(s1, cond)?;
    let f2 = quad(s2, cond)?;
    let losses = (1..=horizon)
        .map(|t| if ((t - 1) / tau).is_multiple_of(2) { f1.clone() } else { f2.clone() })
        .collect();
    Ok(Scenario {
        name: format!("switching(tau={tau})"),
        description: format!(
            "alternates between two quadratics every {tau} rounds; centers ({}, {}) and ({}, {})",
            s1.a, s1.b, s2.a, s2.b
        ),
        set,
        losses,
    })
}

/// Diminishing-variation adversary: `b_t = b1` for all rounds while
/// `a_{t+1} = a_t + drift_coeff * sqrt(1/t)`; offsets are 0 (they shift
/// neither minimizers nor regret differences).
pub fn diminishing(
    a1: f64,
    b1: f64,
    drift_coeff: f64,
    cond: f64,
    horizon: usize,
    set: FeasibleSet,
) -> Result<Scenario> {
    check_common(cond, horizon, &set)?;
    if !(a1.is_finite() && b1.is_finite() && drift_coeff.is_finite()) {
        return Err(Error::NonFinite("diminishing scenario parameter"));
    }
    let mut losses = Vec::with_capacity(horizon);
    let mut a = a1;
    for t in 1..=horizon {
        losses.push(quad(LossParams { a, b: b1, c: 0.0 }, cond)?);
        a += drift_coeff * (1.0 / t as f64).sqrt();
    }
    Ok(Scenario {
        name: "diminishing".into(),
        description: format!(
            "center drifts by {drift_coeff}*sqrt(1/t) per round from ({a1}, {b1})"
        ),
        set,
        losses,
    })
}

/// Variability-regime preset: the loss center starts at `base` and drifts
/// along the first coordinate axis by the regime's per-round step, reflecting
/// off the set boundary so every center (hence every minimizer) stays inside
/// the set and the minimizer path length equals the summed steps exactly.
pub fn preset(
    regime: Regime,
    base: LossParams,
    cond: f64,
    horizon: usize,
    set: FeasibleSet,
) -> Result<Scenario> {
    check_common(cond, horizon, &set)?;
    let (name, max_step) = match regime {
        Regime::Constant => ("constant".to_string(), 0.0),
        Regime::LogPath => ("log-path".to_string(), 0.5),
        Regime::PowerPath { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParam(format!("alpha must lie in (0, 1), got {alpha}")));
            }
            (format!("power-path(alpha={alpha})"), 0.5f64.powf(alpha))
        }
        Regime::ConstantDrift { step } => {
            if !step.is_finite() || step <= 0.0 {
                return Err(Error::InvalidParam(format!("drift step must be positive, got {step}")));
            }
            (format!("constant-drift(step={step})"), step)
        }
    };

    // Admissible interval for the first center coordinate, with the second
    // held at base.b.
    let (lo, hi) = match &set {
        FeasibleSet::Ball { center, radius } => {
            let dy = base.b - center.coords()[1];
            let disc = radius * radius - dy * dy;
            if disc < 0.0 {
                return Err(Error::InvalidParam(
                    "preset base center lies outside the feasible set".into(),
                ));
            }
            let q = disc.sqrt();
            (center.coords()[0] - q, center.coords()[0] + q)
        }
        FeasibleSet::Box { lower, upper } => {
            if base.b < lower.coords()[1] || base.b > upper.coords()[1] {
                return Err(Error::InvalidParam(
                    "preset base center lies outside the feasible set".into(),
                ));
            }
            (lower.coords()[0], upper.coords()[0])
        }
    };
    if base.a < lo || base.a > hi {
        return Err(Error::InvalidParam("preset base center lies outside the feasible set".into()));
    }
    // Reflection keeps the walk inside [lo, hi] only when a step fits in
    // half the interval.
    if max_step > 0.5 * (hi - lo) {
        return Err(Error::InvalidParam(format!(
            "per-round drift {max_step} exceeds half the admissible interval [{lo}, {hi}]"
        )));
    }

    let mut losses = Vec::with_capacity(horizon);
    let mut a = base.a;
    let mut dir = 1.0;
    losses.push(quad(LossParams { a, b: base.b, c: base.c }, cond)?);
    for t in 2..=horizon {
        let step = match regime {
            Regime::Constant => 0.0,
            Regime::LogPath => 1.0 / t as f64,
            Regime::PowerPath { alpha } => 1.0 / (t as f64).powf(alpha),
            Regime::ConstantDrift { step } => step,
        };
        let mut next = a + dir * step;
        if next < lo || next > hi {
            dir = -dir;
            next = a + dir * step;
        }
        a = next;
        losses.push(quad(LossParams { a, b: base.b, c: base.c }, cond)?);
    }
    Ok(Scenario {
        name,
        description: format!(
            "center drifts along the first axis from ({}, {}) under the {regime:?} law",
            base.a, base.b
        ),
        set,
        losses,
    })
}

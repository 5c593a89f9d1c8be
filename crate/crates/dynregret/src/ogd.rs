//! Online gradient descent with constant stepsize: the auxiliary
//! projected-gradient step, the averaged action update, the equivalent
//! proximal reformulation, and the per-round contraction factor.
//!
//! The tracker sees only gradients. `step` takes the gradient as an argument
//! rather than a loss object; the experiment harness, not the tracker, knows
//! the loss.

use crate::error::{Error, Result};
use crate::space::{FeasibleSet, Vector};

/// Stepsize parameters: `gamma` divides the gradient, `h in (0, 1]` weights
/// the averaged update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OGDConfig {
    gamma: f64,
    h: f64,
}

impl OGDConfig {
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidParam(format!("gamma must be finite and positive, got {gamma}")));
        }
        if !h.is_finite() || h <= 0.0 || h > 1.0 {
            return Err(Error::InvalidParam(format!("h must lie in (0, 1], got {h}")));
        }
        Ok(Self { gamma, h })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

/// Current action and round index of one tracking run.
#[derive(Debug, Clone, PartialEq)]
pub struct OGDState {
    x: Vector,
    t: usize,
}

impl OGDState {
    /// Start a run at round 1 with the given initial action.
    pub fn start(x: Vector) -> Self {
        Self { x, t: 1 }
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn round(&self) -> usize {
        self.t
    }
}

/// Auxiliary iterate: projected gradient step `Pi_set(x - g / gamma)`.
pub fn aux_step(x: &Vector, g: &Vector, set: &FeasibleSet, cfg: &OGDConfig) -> Result<Vector> {
    g.check_dim(x.dim())?;
    let p = x - &g.scale(1.0 / cfg.gamma);
    set.project(&p)
}

/// Proximal form of the same update:
/// `argmin_{v in set} g^T (v - x) + (gamma / 2) ||v - x||^2`.
///
/// Completing the square centers an isotropic quadratic at `p = x - g/gamma`;
/// the ball case is solved through the explicit KKT multiplier
/// `lam = (gamma/2) (||p - b||/r - 1)` rather than radial rescaling, so this
/// path shares no code with `aux_step`.
pub fn prox_step(x: &Vector, g: &Vector, set: &FeasibleSet, cfg: &OGDConfig) -> Result<Vector> {
    g.check_dim(x.dim())?;
    x.check_dim(set.dim())?;
    let w = cfg.gamma / 2.0;
    let p: Vec<f64> = x
        .coords()
        .iter()
        .zip(g.coords())
        .map(|(xi, gi)| xi - gi / cfg.gamma)
        .collect();
    match set {
        FeasibleSet::Box { lower, upper } => Ok(Vector::from_raw(
            p.iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .map(|(pi, (lo, hi))| pi.clamp(*lo, *hi))
                .collect(),
        )),
        FeasibleSet::Ball { center: b, radius: r } => {
            let dist = p
                .iter()
                .zip(b.coords())
                .map(|(pi, bi)| (pi - bi) * (pi - bi))
                .sum::<f64>()
                .sqrt();
            if dist <= *r {
                return Ok(Vector::from_raw(p));
            }
            let lam = w * (dist / r - 1.0);
            Ok(Vector::from_raw(
                p.iter()
                    .zip(b.coords())
                    .map(|(pi, bi)| (w * pi + lam * bi) / (w + lam))
                    .collect(),
            ))
        }
    }
}

/// One round of the tracker: compute the auxiliary iterate from the supplied
/// gradient, average it into the next action `x_{t+1} = (1-h) x_t + h xhat_t`,
/// and advance the round counter. Returns the new state and the auxiliary
/// iterate.
pub fn step(
    state: &OGDState,
    g: &Vector,
    set: &FeasibleSet,
    cfg: &OGDConfig,
) -> Result<(OGDState, Vector)> {
    let xhat = aux_step(&state.x, g, set, cfg)?;
    let x_next = if cfg.h == 1.0 {
        xhat.clone()
    } else {
        &state.x.scale(1.0 - cfg.h) + &xhat.scale(cfg.h)
    };
    Ok((OGDState { x: x_next, t: state.t + 1 }, xhat))
}

/// Per-round contraction factor `sqrt(1 - h mu / gamma)`, in `[0, 1)` whenever
/// `0 < h <= 1` and `0 < mu <= gamma`.
pub fn contraction_factor(cfg: &OGDConfig, mu: f64) -> Result<f64> {
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::InvalidParam(format!("mu must be finite and positive, got {mu}")));
    }
    let ratio = cfg.h * mu / cfg.gamma;
    if ratio > 1.0 {
        return Err(Error::InvalidParam(format!(
            "h*mu/gamma = {ratio} exceeds 1; the contraction factor leaves [0, 1)"
        )));
    }
    Ok((1.0 - ratio).sqrt())
}

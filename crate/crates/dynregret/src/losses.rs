//! Time-indexed strongly convex quadratic losses, their derivatives,
//! curvature constants, and exact constrained minimizers.
//!
//! A loss is `f(x) = sum_i w_i (x_i - c_i)^2 + offset` with per-coordinate
//! positive weights `w` (the diagonal of the half-Hessian) and center `c`.
//! The Hessian is `2 diag(w)`, so the strong-convexity modulus is
//! `mu = 2 min_i w_i` and the gradient Lipschitz constant is
//! `lip = 2 max_i w_i`.

use crate::ballopt;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::space::{FeasibleSet, Vector};

/// Relative convergence tolerance on the ball-constraint residual of the
/// KKT multiplier search.
const KKT_NORM_TOL_REL: f64 = 1e-12;
const KKT_MAX_ITER: usize = 200;

/// A diagonal quadratic loss `sum_i w_i (x_i - c_i)^2 + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLoss {
    weights: Vec<f64>,
    center: Vector,
    offset: f64,
}

/// Family constants of a loss over a feasible set: strong-convexity modulus,
/// gradient Lipschitz constant, and a valid uniform gradient-norm bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConstants {
    pub mu: f64,
    pub lip: f64,
    pub grad_bound: f64,
}

impl QuadraticLoss {
    pub fn new(weights: Vec<f64>, center: Vector, offset: f64) -> Result<Self> {
        if weights.len() != center.dim() {
            return Err(Error::DimensionMismatch { expected: center.dim(), got: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidParam("loss weights must be finite and positive".into()));
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite("loss offset"));
        }
        Ok(Self { weights, center, offset })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Evaluate the loss at `x`.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim())?;
        let q: f64 = x
            .coords()
            .iter()
            .zip(self.center.coords().iter().zip(&self.weights))
            .map(|(xi, (ci, wi))| wi * (xi - ci) * (xi - ci))
            .sum();
        Ok(q + self.offset)
    }

    /// Gradient at `x`: components `2 w_i (x_i - c_i)`.
    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        Ok(Vector::from_raw(
            x.coords()
                .iter()
                .zip(self.center.coords().iter().zip(&self.weights))
                .map(|(xi, (ci, wi))| 2.0 * wi * (xi - ci))
                .collect(),
        ))
    }

    /// Curvature constants over `set`.
    ///
    /// `grad_bound` is a valid upper bound on `sup_{x in set} ||grad f(x)||`:
    /// exact constrained maximization of the separable quadratic
    /// `||grad f||^2 = sum_i 4 w_i^2 (x_i - c_i)^2` for balls, coordinate-wise
    /// extremes for boxes.
    pub fn constants(&self, set: &FeasibleSet) -> Result<LossConstants> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: set.dim() });
        }
        let mu = 2.0 * self.weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let lip = 2.0 * self.weights.iter().cloned().fold(0.0, f64::max);
        let grad_sq_sup = match set {
            FeasibleSet::Ball { center: b, radius } => {
                let n = self.dim();
                let mut d = Vec::with_capacity(n);
                let mut e = Vec::with_capacity(n);
                let mut k = 0.0;
                for i in 0..n {
                    let wi = self.weights[i];
                    let ci = self.center.coords()[i];
                    d.push(4.0 * wi * wi);
                    e.push(-8.0 * wi * wi * ci);
                    k += 4.0 * wi * wi * ci * ci;
                }
                let (_, hi) = ballopt::extremes_over_ball(&d, &e, k, b.coords(), *radius)?;
                hi.max(0.0)
            }
            FeasibleSet::Box { lower, upper } => self
                .weights
                .iter()
                .zip(self.center.coords())
                .zip(lower.coords().iter().zip(upper.coords()))
                .map(|((wi, ci), (lo, hi))| {
                    let far = (lo - ci).abs().max((hi - ci).abs());
                    4.0 * wi * wi * far * far
                })
                .sum(),
        };
        Ok(LossConstants { mu, lip, grad_bound: grad_sq_sup.sqrt() })
    }

    /// Unique minimizer of the loss over `set`.
    pub fn minimizer(&self, set: &FeasibleSet) -> Result<Vector> {
        self.minimizer_kkt(set).map(|(x, _)| x)
    }

    /// Minimizer together with the multiplier of the ball constraint
    /// (0 when the constraint is inactive, or for box sets).
    ///
    /// For an active ball constraint the stationarity system is
    /// `x_i(lam) = (w_i c_i + lam b_i) / (w_i + lam)` with `lam >= 0` the
    /// unique root of `||x(lam) - b|| = r`; `||x(lam) - b||` is strictly
    /// decreasing in `lam`, so bracketing always succeeds for valid inputs.
    pub fn minimizer_kkt(&self, set: &FeasibleSet) -> Result<(Vector, f64)> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: set.dim() });
        }
        match set {
            FeasibleSet::Box { lower, upper } => {
                // The quadratic is separable: clamp the center coordinate-wise.
                let x = Vector::from_raw(
                    self.center
                        .coords()
                        .iter()
                        .zip(lower.coords().iter().zip(upper.coords()))
                        .map(|(c, (lo, hi))| c.clamp(*lo, *hi))
                        .collect(),
                );
                Ok((x, 0.0))
            }
            FeasibleSet::Ball { center: b, radius: r } => {
                if set.contains(&self.center, 0.0)? {
                    return Ok((self.center.clone(), 0.0));
                }
                let point_at = |lam: f64| -> Vector {
                    Vector::from_raw(
                        self.weights
                            .iter()
                            .zip(self.center.coords().iter().zip(b.coords()))
                            .map(|(wi, (ci, bi))| (wi * ci + lam * bi) / (wi + lam))
                            .collect(),
                    )
                };
                let resid = |lam: f64| point_at(lam).dist(b) - r;

                // Bracket: resid(0) > 0 (center infeasible); double from max w.
                let mut lo = 0.0;
                let mut hi = self.weights.iter().cloned().fold(0.0, f64::max);
                let mut guard = 0;
                while resid(hi) >= 0.0 {
                    hi *= 2.0;
                    guard += 1;
                    if guard > KKT_MAX_ITER {
                        return Err(Error::MultiplierSearch(format!(
                            "no bracket for the ball multiplier after {guard} doublings \
                             (center {:?}, radius {r})",
                            self.center
                        )));
                    }
                }

                let mut lam = 0.5 * (lo + hi);
                for _ in 0..KKT_MAX_ITER {
                    let x = point_at(lam);
                    let dist = x.dist(b);
                    let psi = dist - r;
                    if psi.abs() <= KKT_NORM_TOL_REL * r {
                        break;
                    }
                    if psi > 0.0 {
                        lo = lam;
                    } else {
                        hi = lam;
                    }
                    // d/dlam ||x(lam) - b||^2 = sum -2 w_i^2 (c_i - b_i)^2 / (w_i + lam)^3
                    let mut dsq = 0.0;
                    for (wi, (ci, bi)) in
                        self.weights.iter().zip(self.center.coords().iter().zip(b.coords()))
                    {
                        let diff = wi * (ci - bi) / (wi + lam);
                        dsq += -2.0 * diff * diff / (wi + lam);
                    }
                    let dpsi = dsq / (2.0 * dist);
                    let newton = lam - psi / dpsi;
                    lam = if newton.is_finite() && newton > lo && newton < hi {
                        newton
                    } else {
                        0.5 * (lo + hi)
                    };
                }
                Ok((point_at(lam), lam))
            }
        }
    }

    /// Sum of losses as a single diagonal quadratic (weights add, centers
    /// combine by weighted mean, offsets absorb the completed square).
    pub fn aggregate(losses: &[QuadraticLoss]) -> Result<QuadraticLoss> {
        let first = losses.first().ok_or(Error::EmptyTrace)?;
        let n = first.dim();
        let mut w_sum = vec![KahanSum::new(); n];
        let mut wc_sum = vec![KahanSum::new(); n];
        let mut wc2_sum = vec![KahanSum::new(); n];
        let mut off_sum = KahanSum::new();
        for loss in losses {
            if loss.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: loss.dim() });
            }
            for i in 0..n {
                let w = loss.weights[i];
                let c = loss.center.coords()[i];
                w_sum[i].add(w);
                wc_sum[i].add(w * c);
                wc2_sum[i].add(w * c * c);
            }
            off_sum.add(loss.offset);
        }
        let weights: Vec<f64> = w_sum.iter().map(|s| s.value()).collect();
        let center: Vec<f64> =
            wc_sum.iter().zip(&weights).map(|(s, w)| s.value() / w).collect();
        let mut offset = off_sum.value();
        for i in 0..n {
            offset += wc2_sum[i].value() - weights[i] * center[i] * center[i];
        }
        QuadraticLoss::new(weights, Vector::new(center)?, offset)
    }
}

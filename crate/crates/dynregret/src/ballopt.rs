//! Extremization of diagonal quadratics over Euclidean balls via the scalar
//! multiplier method.
//!
//! Solves `min sum_i (d_i z_i^2 + e_i z_i)  s.t. ||z|| <= r` for arbitrary-sign
//! diagonal coefficients. Global optimality follows the trust-region
//! conditions: `(2 d_i + lam) z_i = -e_i` with `lam >= max(0, -2 min_i d_i)`,
//! and `lam (||z|| - r) = 0`. Maximization negates the objective.

use crate::error::{Error, Result};

const NORM_TOL_REL: f64 = 1e-12;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone)]
pub(crate) struct BallExtremum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Minimize `sum_i d_i z_i^2 + e_i z_i` over `||z|| <= r`.
pub(crate) fn min_over_ball(d: &[f64], e: &[f64], r: f64) -> Result<BallExtremum> {
    assert_eq!(d.len(), e.len());
    assert!(r > 0.0 && r.is_finite());
    let n = d.len();

    // Smallest multiplier keeping 2 d_i + lam >= 0 for every coordinate.
    let lam_req = d.iter().map(|di| -2.0 * di).fold(0.0, f64::max);

    // Unconstrained stationary point, valid when lam = 0 is admissible.
    if lam_req == 0.0 {
        let mut z = vec![0.0; n];
        let mut defined = true;
        for i in 0..n {
            if d[i] > 0.0 {
                z[i] = -e[i] / (2.0 * d[i]);
            } else if e[i] != 0.0 {
                // Flat direction with linear drift: the constraint must bind.
                defined = false;
                break;
            }
        }
        if defined && norm(&z) <= r {
            let value = eval(d, e, &z);
            return Ok(BallExtremum { point: z, value });
        }
    }

    // Norm of the determined coordinates as lam approaches lam_req from above.
    let mut sq_at_req = 0.0;
    let mut divergent = false;
    let mut degenerate: Option<usize> = None;
    for i in 0..n {
        let h = 2.0 * d[i] + lam_req;
        if h > 0.0 {
            sq_at_req += (e[i] / h) * (e[i] / h);
        } else if e[i] != 0.0 {
            divergent = true; // norm blows up, a root exists beyond lam_req
        } else if degenerate.is_none() {
            degenerate = Some(i);
        }
    }

    if lam_req > 0.0 && !divergent && sq_at_req.sqrt() < r {
        // Hard case: fill the slack along the first degenerate coordinate.
        let i0 = degenerate.ok_or_else(|| {
            Error::MultiplierSearch("hard case without degenerate coordinate".into())
        })?;
        let mut z = vec![0.0; n];
        for i in 0..n {
            let h = 2.0 * d[i] + lam_req;
            if h > 0.0 {
                z[i] = -e[i] / h;
            }
        }
        z[i0] = (r * r - sq_at_req).max(0.0).sqrt();
        let value = eval(d, e, &z);
        return Ok(BallExtremum { point: z, value });
    }

    // Root-find lam in (lam_req, inf) where ||z(lam)|| = r; the norm is
    // strictly decreasing there. ||z(lam)|| <= ||e|| / (lam - lam_req) gives
    // an analytic upper bracket.
    let e_norm = norm(e);
    let mut lo = lam_req;
    let mut hi = lam_req + e_norm / r + 1.0;
    let mut guard = 0;
    while norm(&point_at(d, e, hi)) > r {
        hi = lam_req + (hi - lam_req) * 2.0;
        guard += 1;
        if guard > MAX_ITER {
            return Err(Error::MultiplierSearch("failed to bracket the ball multiplier".into()));
        }
    }

    let mut lam = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let z = point_at(d, e, lam);
        let s = norm(&z);
        let psi = s - r;
        if psi.abs() <= NORM_TOL_REL * r {
            break;
        }
        if psi > 0.0 {
            lo = lam;
        } else {
            hi = lam;
        }
        // Newton step on ||z(lam)|| - r, bisection fallback outside the bracket.
        let mut ds_sq = 0.0;
        for i in 0..n {
            let h = 2.0 * d[i] + lam;
            if h > 0.0 {
                ds_sq += -2.0 * e[i] * e[i] / (h * h * h);
            }
        }
        let dpsi = ds_sq / (2.0 * s);
        let newton = lam - psi / dpsi;
        lam = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }

    let z = point_at(d, e, lam);
    let value = eval(d, e, &z);
    Ok(BallExtremum { point: z, value })
}

/// Maximize `sum_i d_i z_i^2 + e_i z_i` over `||z|| <= r`.
pub(crate) fn max_over_ball(d: &[f64], e: &[f64], r: f64) -> Result<BallExtremum> {
    let neg_d: Vec<f64> = d.iter().map(|v| -v).collect();
    let neg_e: Vec<f64> = e.iter().map(|v| -v).collect();
    let res = min_over_ball(&neg_d, &neg_e, r)?;
    Ok(BallExtremum { point: res.point, value: -res.value })
}

/// Min and max of `q(x) = sum_i (d_i x_i^2 + e_i x_i) + k` over the ball
/// `||x - b|| <= r`, in the original coordinates.
pub(crate) fn extremes_over_ball(
    d: &[f64],
    e: &[f64],
    k: f64,
    b: &[f64],
    r: f64,
) -> Result<(f64, f64)> {
    assert_eq!(d.len(), b.len());
    // Shift z = x - b.
    let e_shift: Vec<f64> = (0..d.len()).map(|i| e[i] + 2.0 * d[i] * b[i]).collect();
    let k_shift = k + (0..d.len()).map(|i| (d[i] * b[i] + e[i]) * b[i]).sum::<f64>();
    let lo = min_over_ball(d, &e_shift, r)?.value + k_shift;
    let hi = max_over_ball(d, &e_shift, r)?.value + k_shift;
    Ok((lo, hi))
}

fn point_at(d: &[f64], e: &[f64], lam: f64) -> Vec<f64> {
    d.iter()
        .zip(e)
        .map(|(di, ei)| {
            let h = 2.0 * di + lam;
            if h > 0.0 {
                -ei / h
            } else {
                0.0
            }
        })
        .collect()
}

fn norm(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn eval(d: &[f64], e: &[f64], z: &[f64]) -> f64 {
    z.iter().zip(d.iter().zip(e)).map(|(zi, (di, ei))| di * zi * zi + ei * zi).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_minimum_of_convex_quadratic() {
        // min (z1-1)^2 + (z2+0.5)^2 over ||z|| <= 3: interior at (1, -0.5).
        let res = min_over_ball(&[1.0, 1.0], &[-2.0, 1.0], 3.0).unwrap();
        assert!((res.point[0] - 1.0).abs() < 1e-12);
        assert!((res.point[1] + 0.5).abs() < 1e-12);
        assert!((res.value - -1.25).abs() < 1e-12);
    }

    #[test]
    fn boundary_minimum_of_convex_quadratic() {
        // min (z1 - 10)^2 over ||z|| <= 2 (ignoring constant 100): z = (2, 0).
        let res = min_over_ball(&[1.0, 1.0], &[-20.0, 0.0], 2.0).unwrap();
        assert!((res.point[0] - 2.0).abs() < 1e-9);
        assert!(res.point[1].abs() < 1e-9);
    }

    #[test]
    fn maximum_of_convex_quadratic_is_on_boundary() {
        // max z1^2 + z2^2 over ||z|| <= 2 is 4; gradient-free (hard) case.
        let res = max_over_ball(&[1.0, 1.0], &[0.0, 0.0], 2.0).unwrap();
        assert!((res.value - 4.0).abs() < 1e-9);
        assert!((norm(&res.point) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn anisotropic_maximum_picks_stiff_axis() {
        // max 4 z1^2 + z2^2 + z2 over ||z|| <= 1: boundary, dominated by z1,
        // but the linear term breaks the tie away from (±1, 0).
        let res = max_over_ball(&[4.0, 1.0], &[0.0, 1.0], 1.0).unwrap();
        let brute = brute_max(&[4.0, 1.0], &[0.0, 1.0], 1.0);
        assert!((res.value - brute).abs() <= 1e-6 * brute.abs().max(1.0));
    }

    #[test]
    fn indefinite_extremes_match_brute_force() {
        let d = [2.0, -3.0];
        let e = [0.5, -1.0];
        let (lo, hi) = extremes_over_ball(&d, &e, 0.7, &[0.3, -0.2], 1.5).unwrap();
        let (blo, bhi) = brute_extremes(&d, &e, 0.7, &[0.3, -0.2], 1.5);
        assert!((lo - blo).abs() <= 1e-4 * blo.abs().max(1.0), "{lo} vs {blo}");
        assert!((hi - bhi).abs() <= 1e-4 * bhi.abs().max(1.0), "{hi} vs {bhi}");
    }

    fn brute_max(d: &[f64], e: &[f64], r: f64) -> f64 {
        brute_extremes(d, e, 0.0, &[0.0, 0.0], r).1
    }

    fn brute_extremes(d: &[f64], e: &[f64], k: f64, b: &[f64], r: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let steps = 2000;
        for i in 0..=steps {
            for j in 0..=steps {
                let x0 = b[0] - r + 2.0 * r * (i as f64) / (steps as f64);
                let x1 = b[1] - r + 2.0 * r * (j as f64) / (steps as f64);
                let dz = (x0 - b[0]) * (x0 - b[0]) + (x1 - b[1]) * (x1 - b[1]);
                if dz > r * r {
                    continue;
                }
                let q = d[0] * x0 * x0 + e[0] * x0 + d[1] * x1 * x1 + e[1] * x1 + k;
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        // Boundary sweep refines the grid near the sphere.
        for i in 0..200_000 {
            let th = 2.0 * std::f64::consts::PI * (i as f64) / 200_000.0;
            let x0 = b[0] + r * th.cos();
            let x1 = b[1] + r * th.sin();
            let q = d[0] * x0 * x0 + e[0] * x0 + d[1] * x1 * x1 + e[1] * x1 + k;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        (lo, hi)
    }
}

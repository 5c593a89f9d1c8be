//! Regret and variation accounting over a recorded trace, plus runtime
//! certificates for the per-round contraction bound, the path-length bound on
//! aggregate tracking error, and the derived dynamic-regret bound.
//!
//! All sums use compensated summation: per-round terms reach 1e6 while the
//! certified totals are compared at 1e-9 relative slack.

use crate::ballopt;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::losses::{LossConstants, QuadraticLoss};
use crate::ogd::{self, OGDConfig};
use crate::space::{FeasibleSet, Vector};

/// Relative slack for certified inequalities.
pub const CERT_REL_SLACK: f64 = 1e-9;
/// Absolute slack for certified inequalities (quantities reach ~1e7).
pub const CERT_ABS_SLACK: f64 = 1e-6;

/// One round of a tracking run: the action, the per-round minimizer, their
/// loss values, the observed gradient, and an optional gradient prediction.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: usize,
    pub x: Vector,
    pub x_star: Vector,
    pub f_x: f64,
    pub f_star: f64,
    pub grad: Vector,
    pub predicted_grad: Option<Vector>,
}

impl StepRecord {
    pub fn new(
        t: usize,
        x: Vector,
        x_star: Vector,
        f_x: f64,
        f_star: f64,
        grad: Vector,
        predicted_grad: Option<Vector>,
    ) -> Result<Self> {
        x_star.check_dim(x.dim())?;
        grad.check_dim(x.dim())?;
        if let Some(p) = &predicted_grad {
            p.check_dim(x.dim())?;
        }
        if !f_x.is_finite() || !f_star.is_finite() {
            return Err(Error::NonFinite("loss value in step record"));
        }
        if f_x < f_star - 1e-6 * (1.0 + f_star.abs()) {
            return Err(Error::InvalidParam(format!(
                "round {t}: f(x) = {f_x} is below the recorded minimum {f_star}"
            )));
        }
        Ok(Self { t, x, x_star, f_x, f_star, grad, predicted_grad })
    }

    /// Instantaneous objective error `f_t(x_t) - f_t(x_t*)`.
    pub fn inst_error(&self) -> f64 {
        self.f_x - self.f_star
    }

    pub fn grad_norm(&self) -> f64 {
        self.grad.norm()
    }

    pub fn dist_to_opt(&self) -> f64 {
        self.x.dist(&self.x_star)
    }
}

/// Complete per-round log of one run, with the set, family constants, and
/// stepsize configuration needed to certify the bounds.
#[derive(Debug, Clone)]
pub struct Trace {
    records: Vec<StepRecord>,
    set: FeasibleSet,
    constants: LossConstants,
    config: OGDConfig,
}

impl Trace {
    pub fn new(
        records: Vec<StepRecord>,
        set: FeasibleSet,
        constants: LossConstants,
        config: OGDConfig,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyTrace);
        }
        for (i, r) in records.iter().enumerate() {
            if r.t != i + 1 {
                return Err(Error::InvalidParam(format!(
                    "records must cover rounds 1..=T without gaps; position {i} holds round {}",
                    r.t
                )));
            }
            r.x.check_dim(set.dim())?;
        }
        if !(constants.mu > 0.0 && constants.mu <= constants.lip && constants.grad_bound >= 0.0) {
            return Err(Error::InvalidParam("loss constants must satisfy 0 < mu <= lip".into()));
        }
        Ok(Self { records, set, constants, config })
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn horizon(&self) -> usize {
        self.records.len()
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn constants(&self) -> &LossConstants {
        &self.constants
    }

    pub fn config(&self) -> &OGDConfig {
        &self.config
    }
}

/// Certified quantities of one run: contraction factor, path-length bound
/// constants, both sides of the certified inequalities, and violation counts.
///
/// `valid` records whether `gamma >= lip` held, i.e. whether the certificate
/// is backed by the contraction guarantee; when it is false the values are
/// reported but nothing is asserted.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub rho: f64,
    pub k1: f64,
    pub k2: f64,
    pub path_length: f64,
    pub lhs_thm3: f64,
    pub rhs_thm3: f64,
    pub dyn_regret: f64,
    pub rhs_cor4: f64,
    pub contraction_violations: usize,
    pub valid: bool,
}

impl BoundCertificate {
    /// Aggregate tracking-error inequality within slack.
    pub fn thm3_holds(&self) -> bool {
        self.lhs_thm3 <= self.rhs_thm3 + CERT_REL_SLACK * self.rhs_thm3.abs() + CERT_ABS_SLACK
    }

    /// Dynamic-regret inequality within slack.
    pub fn cor4_holds(&self) -> bool {
        self.dyn_regret <= self.rhs_cor4 + CERT_REL_SLACK * self.rhs_cor4.abs() + CERT_ABS_SLACK
    }

    /// All certified inequalities hold.
    pub fn holds(&self) -> bool {
        self.contraction_violations == 0 && self.thm3_holds() && self.cor4_holds()
    }
}

/// One per-round contraction check: `||x_{t+1} - x_t*|| <= rho ||x_t - x_t*||`
/// for step `t`, with slack `1e-9 (1 + ||x_t - x_t*||)`.
#[derive(Debug, Clone, Copy)]
pub struct ContractionRow {
    pub t: usize,
    pub dist_to_opt: f64,
    pub contraction_rhs: f64,
    pub violated: bool,
}

/// Cumulative regret against the per-round minimizers up to round `upto`.
pub fn dynamic_regret(trace: &Trace, upto: usize) -> Result<f64> {
    check_round(trace, upto)?;
    Ok(KahanSum::sum_iter(trace.records[..upto].iter().map(StepRecord::inst_error)))
}

/// Regret against the single best fixed action in hindsight: the constrained
/// minimizer of the aggregate loss.
pub fn static_regret(trace: &Trace, losses: &[QuadraticLoss]) -> Result<f64> {
    if losses.len() != trace.horizon() {
        return Err(Error::InvalidParam(format!(
            "{} losses for a horizon of {}",
            losses.len(),
            trace.horizon()
        )));
    }
    let aggregate = QuadraticLoss::aggregate(losses)?;
    let x_best = aggregate.minimizer(&trace.set)?;
    let mut acc = KahanSum::new();
    for (r, f) in trace.records.iter().zip(losses) {
        acc.add(r.f_x - f.eval(&x_best)?);
    }
    Ok(acc.value())
}

/// Total movement of the minimizer sequence up to round `upto`:
/// `sum_{t=2..upto} ||x_t* - x_{t-1}*||`.
pub fn path_length(trace: &Trace, upto: usize) -> Result<f64> {
    check_round(trace, upto)?;
    let mut acc = KahanSum::new();
    for w in trace.records[..upto].windows(2) {
        acc.add(w[1].x_star.dist(&w[0].x_star));
    }
    Ok(acc.value())
}

/// Minimizer movement measured against a per-round dynamics model:
/// `sum_{t=2..T} ||x_t* - phi(t, x_{t-1}*)||`. The identity model recovers
/// `path_length`.
pub fn predicted_path_length<F>(trace: &Trace, dynamics: F) -> Result<f64>
where
    F: Fn(usize, &Vector) -> Vector,
{
    let mut acc = KahanSum::new();
    for w in trace.records.windows(2) {
        let predicted = dynamics(w[1].t, &w[0].x_star);
        predicted.check_dim(trace.set.dim())?;
        acc.add(w[1].x_star.dist(&predicted));
    }
    Ok(acc.value())
}

/// Summed worst-case gap between consecutive losses over the set:
/// `sum_t sup_{x in set} |f_t(x) - f_{t-1}(x)|`.
///
/// Consecutive losses with identical weights differ by an affine function,
/// whose supremum has a closed form on balls and boxes; differing weights
/// leave a diagonal quadratic, extremized exactly per set.
pub fn functional_variation(losses: &[QuadraticLoss], set: &FeasibleSet) -> Result<f64> {
    if losses.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut acc = KahanSum::new();
    for pair in losses.windows(2) {
        acc.add(sup_abs_difference(&pair[0], &pair[1], set)?);
    }
    Ok(acc.value())
}

fn sup_abs_difference(
    prev: &QuadraticLoss,
    next: &QuadraticLoss,
    set: &FeasibleSet,
) -> Result<f64> {
    let n = set.dim();
    if prev.dim() != n || next.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: prev.dim().max(next.dim()) });
    }
    if prev.weights() == next.weights() {
        // next - prev = coeff . x + d with coeff_i = 2 w_i (c_prev_i - c_next_i).
        let w = prev.weights();
        let cp = prev.center().coords();
        let cn = next.center().coords();
        let coeff: Vec<f64> = (0..n).map(|i| 2.0 * w[i] * (cp[i] - cn[i])).collect();
        let d = (next.offset() - prev.offset())
            - (0..n).map(|i| w[i] * (cp[i] * cp[i] - cn[i] * cn[i])).sum::<f64>();
        return Ok(match set {
            FeasibleSet::Ball { center: b, radius } => {
                let mid: f64 = coeff.iter().zip(b.coords()).map(|(c, bi)| c * bi).sum::<f64>() + d;
                let half_width = radius * coeff.iter().map(|c| c * c).sum::<f64>().sqrt();
                mid.abs() + half_width
            }
            FeasibleSet::Box { lower, upper } => {
                let mut mid = d;
                let mut half_width = 0.0;
                for (ci, (lo, hi)) in
                    coeff.iter().zip(lower.coords().iter().zip(upper.coords()))
                {
                    mid += ci * 0.5 * (lo + hi);
                    half_width += ci.abs() * 0.5 * (hi - lo);
                }
                mid.abs() + half_width
            }
        });
    }

    // General pair: the difference is the diagonal quadratic
    // sum_i (dq_i x_i^2 + eq_i x_i) + kq.
    let mut dq = Vec::with_capacity(n);
    let mut eq = Vec::with_capacity(n);
    let mut kq = next.offset() - prev.offset();
    for i in 0..n {
        let (wn, wp) = (next.weights()[i], prev.weights()[i]);
        let (cn, cp) = (next.center().coords()[i], prev.center().coords()[i]);
        dq.push(wn - wp);
        eq.push(-2.0 * (wn * cn - wp * cp));
        kq += wn * cn * cn - wp * cp * cp;
    }
    match set {
        FeasibleSet::Ball { center: b, radius } => {
            let (lo, hi) = ballopt::extremes_over_ball(&dq, &eq, kq, b.coords(), *radius)?;
            Ok(hi.abs().max(lo.abs()))
        }
        FeasibleSet::Box { lower, upper } => {
            // Separable: per-coordinate interval extremes add up.
            let mut lo_sum = kq;
            let mut hi_sum = kq;
            for i in 0..n {
                let (lo_i, hi_i) =
                    interval_extremes(dq[i], eq[i], lower.coords()[i], upper.coords()[i]);
                lo_sum += lo_i;
                hi_sum += hi_i;
            }
            Ok(hi_sum.abs().max(lo_sum.abs()))
        }
    }
}

/// Extremes of `d x^2 + e x` over `[lo, hi]`: endpoints plus the interior
/// vertex when it exists.
fn interval_extremes(d: f64, e: f64, lo: f64, hi: f64) -> (f64, f64) {
    let q = |x: f64| d * x * x + e * x;
    let mut min = q(lo).min(q(hi));
    let mut max = q(lo).max(q(hi));
    if d != 0.0 {
        let vertex = -e / (2.0 * d);
        if vertex > lo && vertex < hi {
            min = min.min(q(vertex));
            max = max.max(q(vertex));
        }
    }
    (min, max)
}

/// Summed squared gap between observed gradients and their predictions:
/// `sum_t ||grad_t - M_t||^2`. Every record must carry a prediction.
pub fn gradient_variation(trace: &Trace) -> Result<f64> {
    let mut acc = KahanSum::new();
    for r in &trace.records {
        let m = r
            .predicted_grad
            .as_ref()
            .ok_or(Error::MissingPrediction { t: r.t })?;
        let gap = (&r.grad - m).norm();
        acc.add(gap * gap);
    }
    Ok(acc.value())
}

/// Per-step contraction checks for every step `t = 1..T-1`.
pub fn contraction_rows(trace: &Trace) -> Result<Vec<ContractionRow>> {
    let rho = ogd::contraction_factor(&trace.config, trace.constants.mu)?;
    let mut rows = Vec::with_capacity(trace.horizon().saturating_sub(1));
    for w in trace.records.windows(2) {
        let d_t = w[0].dist_to_opt();
        let lhs = w[1].x.dist(&w[0].x_star);
        let rhs = rho * d_t;
        rows.push(ContractionRow {
            t: w[0].t,
            dist_to_opt: lhs,
            contraction_rhs: rhs,
            violated: lhs > rhs + 1e-9 * (1.0 + d_t),
        });
    }
    Ok(rows)
}

/// Compute the run certificate: contraction factor, bound constants
/// `k1 = (||x_1 - x_1*|| - rho ||x_T - x_T*||) / (1 - rho)` and
/// `k2 = 1 / (1 - rho)`, both certified inequalities, and the per-step
/// contraction violation count.
pub fn certify(trace: &Trace) -> Result<BoundCertificate> {
    let cfg = &trace.config;
    let constants = &trace.constants;
    let rho = ogd::contraction_factor(cfg, constants.mu)?;
    if rho >= 1.0 {
        return Err(Error::InvalidParam(format!("contraction factor {rho} is not below 1")));
    }
    let records = &trace.records;
    let horizon = trace.horizon();
    let d_first = records[0].dist_to_opt();
    let d_last = records[horizon - 1].dist_to_opt();
    let k1 = (d_first - rho * d_last) / (1.0 - rho);
    let k2 = 1.0 / (1.0 - rho);

    let lhs_thm3 = KahanSum::sum_iter(records.iter().map(StepRecord::dist_to_opt));
    let c_t = path_length(trace, horizon)?;
    let rhs_thm3 = k1 * c_t + k2;
    let dyn_regret = dynamic_regret(trace, horizon)?;
    let g = constants.grad_bound;
    let rhs_cor4 = g * k1 * c_t + g * k2;
    let contraction_violations =
        contraction_rows(trace)?.iter().filter(|r| r.violated).count();

    Ok(BoundCertificate {
        rho,
        k1,
        k2,
        path_length: c_t,
        lhs_thm3,
        rhs_thm3,
        dyn_regret,
        rhs_cor4,
        contraction_violations,
        valid: cfg.gamma() >= constants.lip,
    })
}

fn check_round(trace: &Trace, upto: usize) -> Result<()> {
    if upto == 0 || upto > trace.horizon() {
        return Err(Error::RoundOutOfRange { t: upto, horizon: trace.horizon() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    fn disk50() -> FeasibleSet {
        FeasibleSet::ball(Vector::zeros(2), 50.0).unwrap()
    }

    fn loss1() -> QuadraticLoss {
        QuadraticLoss::new(vec![100.0, 1.0], v2(-100.0, 0.0), 30.0).unwrap()
    }

    fn loss2() -> QuadraticLoss {
        QuadraticLoss::new(vec![100.0, 1.0], v2(100.0, 20.0), -50.0).unwrap()
    }

    fn constants() -> LossConstants {
        LossConstants { mu: 2.0, lip: 200.0, grad_bound: 30_000.03 }
    }

    fn cfg() -> OGDConfig {
        OGDConfig::new(200.0, 1.0).unwrap()
    }

    /// Synthetic trace whose actions sit exactly on the per-round minimizers.
    fn perfect_trace(horizon: usize) -> Trace {
        let f = loss1();
        let set = disk50();
        let xstar = f.minimizer(&set).unwrap();
        let records = (1..=horizon)
            .map(|t| {
                let fv = f.eval(&xstar).unwrap();
                StepRecord::new(
                    t,
                    xstar.clone(),
                    xstar.clone(),
                    fv,
                    fv,
                    f.grad(&xstar).unwrap(),
                    Some(Vector::zeros(2)),
                )
                .unwrap()
            })
            .collect();
        Trace::new(records, set, constants(), cfg()).unwrap()
    }

    /// Alternating trace between the two reference minimizers, with the
    /// action lagging one round behind (a crude tracking pattern that gives
    /// nonzero regret and path length without running the full loop).
    fn lagging_trace(horizon: usize) -> (Trace, Vec<QuadraticLoss>) {
        let set = disk50();
        let (f1, f2) = (loss1(), loss2());
        let (s1, s2) = (f1.minimizer(&set).unwrap(), f2.minimizer(&set).unwrap());
        let mut records = Vec::new();
        let mut losses = Vec::new();
        let mut prev_grad = Vector::zeros(2);
        for t in 1..=horizon {
            let (f, xstar) = if t % 2 == 1 { (&f1, &s1) } else { (&f2, &s2) };
            let x = if t % 2 == 1 { &s2 } else { &s1 };
            let grad = f.grad(x).unwrap();
            records.push(
                StepRecord::new(
                    t,
                    x.clone(),
                    xstar.clone(),
                    f.eval(x).unwrap(),
                    f.eval(xstar).unwrap(),
                    grad.clone(),
                    Some(prev_grad.clone()),
                )
                .unwrap(),
            );
            prev_grad = grad;
            losses.push(f.clone());
        }
        (Trace::new(records, set, constants(), cfg()).unwrap(), losses)
    }

    #[test]
    fn empty_trace_is_rejected() {
        assert!(matches!(
            Trace::new(vec![], disk50(), constants(), cfg()),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn gapped_rounds_are_rejected() {
        let f = loss1();
        let x = v2(0.0, 40.0);
        let mk = |t| {
            StepRecord::new(
                t,
                x.clone(),
                f.minimizer(&disk50()).unwrap(),
                f.eval(&x).unwrap(),
                250_030.0,
                f.grad(&x).unwrap(),
                None,
            )
            .unwrap()
        };
        assert!(Trace::new(vec![mk(1), mk(3)], disk50(), constants(), cfg()).is_err());
    }

    #[test]
    fn perfect_tracking_has_zero_regret() {
        let trace = perfect_trace(10);
        assert_eq!(dynamic_regret(&trace, 10).unwrap(), 0.0);
        assert_eq!(path_length(&trace, 10).unwrap(), 0.0);
    }

    #[test]
    fn round_bounds_are_checked() {
        let trace = perfect_trace(5);
        assert!(dynamic_regret(&trace, 0).is_err());
        assert!(dynamic_regret(&trace, 6).is_err());
        assert!(path_length(&trace, 6).is_err());
    }

    #[test]
    fn path_length_counts_jumps() {
        let (trace, _) = lagging_trace(5);
        // 4 alternations of ~100 each.
        let c = path_length(&trace, 5).unwrap();
        assert!((c - 4.0 * 99.9998039459).abs() < 1e-3, "C = {c}");
        // Prefix is monotone.
        let mut prev = 0.0;
        for t in 1..=5 {
            let v = path_length(&trace, t).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn predicted_path_length_identity_equals_path_length() {
        let (trace, _) = lagging_trace(9);
        let plain = path_length(&trace, 9).unwrap();
        let predicted = predicted_path_length(&trace, |_, prev| prev.clone()).unwrap();
        assert_eq!(plain, predicted);
    }

    #[test]
    fn predicted_path_length_oracle_dynamics_is_zero() {
        let (trace, _) = lagging_trace(9);
        let stars: Vec<Vector> = trace.records().iter().map(|r| r.x_star.clone()).collect();
        let oracle = predicted_path_length(&trace, |t, _| stars[t - 1].clone()).unwrap();
        assert_eq!(oracle, 0.0);
    }

    #[test]
    fn functional_variation_frozen_pair() {
        // sup |f1 - f2| over the disk: |d| + r ||coeff|| with
        // coeff = (40000, 40), d = -320.
        let v = functional_variation(&[loss1(), loss2()], &disk50()).unwrap();
        let expect = 320.0 + 50.0 * (40_000.0f64 * 40_000.0 + 40.0 * 40.0).sqrt();
        assert!((v - expect).abs() <= 1e-9 * expect, "{v} vs {expect}");
        assert!((v - 2_000_321.0).abs() < 0.01);
    }

    #[test]
    fn functional_variation_identical_losses_is_zero() {
        let seq = vec![loss1(); 7];
        assert_eq!(functional_variation(&seq, &disk50()).unwrap(), 0.0);
    }

    #[test]
    fn functional_variation_general_weights_matches_sweep() {
        let fa = QuadraticLoss::new(vec![100.0, 1.0], v2(-1.0, 1.0), 2.0).unwrap();
        let fb = QuadraticLoss::new(vec![90.0, 2.0], v2(1.5, -0.5), -1.0).unwrap();
        let set = FeasibleSet::ball(v2(0.5, -0.5), 2.0).unwrap();
        let got = functional_variation(&[fa.clone(), fb.clone()], &set).unwrap();
        // Oracle: dense boundary sweep. The difference has indefinite
        // diagonal (-10, 1), so both its min and max over the ball sit on
        // the boundary circle.
        let mut sup: f64 = 0.0;
        for ia in 0..200_000 {
            let th = 2.0 * std::f64::consts::PI * (ia as f64) / 200_000.0;
            let x = v2(0.5 + 2.0 * th.cos(), -0.5 + 2.0 * th.sin());
            let d = (fb.eval(&x).unwrap() - fa.eval(&x).unwrap()).abs();
            sup = sup.max(d);
        }
        assert!(got >= sup - 1e-6 * sup, "exact {got} below sweep {sup}");
        assert!((got - sup).abs() <= 1e-3 * sup, "exact {got} vs sweep {sup}");
    }

    #[test]
    fn functional_variation_general_weights_box() {
        let fa = QuadraticLoss::new(vec![2.0, 1.0], v2(0.5, -1.0), 0.0).unwrap();
        let fb = QuadraticLoss::new(vec![1.0, 3.0], v2(-0.5, 0.5), 1.0).unwrap();
        let set = FeasibleSet::box_set(v2(-2.0, -2.0), v2(2.0, 2.0)).unwrap();
        let got = functional_variation(&[fa.clone(), fb.clone()], &set).unwrap();
        let mut sup: f64 = 0.0;
        let steps = 400;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = v2(
                    -2.0 + 4.0 * (i as f64) / (steps as f64),
                    -2.0 + 4.0 * (j as f64) / (steps as f64),
                );
                sup = sup.max((fb.eval(&x).unwrap() - fa.eval(&x).unwrap()).abs());
            }
        }
        assert!(got >= sup - 1e-9);
        assert!((got - sup).abs() <= 1e-2 * sup.max(1.0));
    }

    #[test]
    fn gradient_variation_oracle_predictor_is_zero() {
        let (trace, _) = lagging_trace(6);
        let mut records = trace.records().to_vec();
        for r in &mut records {
            r.predicted_grad = Some(r.grad.clone());
        }
        let t2 = Trace::new(records, disk50(), constants(), cfg()).unwrap();
        assert_eq!(gradient_variation(&t2).unwrap(), 0.0);
    }

    #[test]
    fn gradient_variation_requires_predictions() {
        let (trace, _) = lagging_trace(3);
        let mut records = trace.records().to_vec();
        records[1].predicted_grad = None;
        let t2 = Trace::new(records, disk50(), constants(), cfg()).unwrap();
        assert!(matches!(
            gradient_variation(&t2),
            Err(Error::MissingPrediction { t: 2 })
        ));
    }

    #[test]
    fn gradient_variation_matches_direct_sum() {
        let (trace, _) = lagging_trace(8);
        let got = gradient_variation(&trace).unwrap();
        let mut direct = 0.0;
        for r in trace.records() {
            let m = r.predicted_grad.as_ref().unwrap();
            direct += (&r.grad - m).norm().powi(2);
        }
        assert!((got - direct).abs() <= 1e-9 * direct.max(1.0));
    }

    #[test]
    fn static_regret_of_constant_loss_at_optimum_is_zero() {
        let trace = perfect_trace(6);
        let losses = vec![loss1(); 6];
        let s = static_regret(&trace, &losses).unwrap();
        assert!(s.abs() <= 1e-9);
    }

    #[test]
    fn static_regret_never_exceeds_dynamic() {
        let (trace, losses) = lagging_trace(12);
        let s = static_regret(&trace, &losses).unwrap();
        let d = dynamic_regret(&trace, 12).unwrap();
        assert!(s <= d + 1e-9 * d.abs().max(1.0), "static {s} vs dynamic {d}");
    }

    #[test]
    fn certificate_constants_frozen_values() {
        let trace = perfect_trace(4);
        let cert = certify(&trace).unwrap();
        assert!((cert.rho - 0.99498743710662).abs() < 1e-12);
        assert!((cert.k2 - 199.4987437106624).abs() < 1e-9);
        assert!(cert.valid);
        assert_eq!(cert.contraction_violations, 0);
        assert!(cert.holds());
    }

    #[test]
    fn certificate_single_round_reduces_to_k2_check() {
        let trace = perfect_trace(1);
        let cert = certify(&trace).unwrap();
        assert_eq!(cert.path_length, 0.0);
        assert_eq!(cert.rhs_thm3, cert.k1 * 0.0 + cert.k2);
        assert!(cert.lhs_thm3 <= cert.k2);
    }

    #[test]
    fn certificate_flags_gamma_below_lipschitz() {
        let f = loss1();
        let set = disk50();
        let xstar = f.minimizer(&set).unwrap();
        let fv = f.eval(&xstar).unwrap();
        let records = vec![StepRecord::new(
            1,
            xstar.clone(),
            xstar.clone(),
            fv,
            fv,
            f.grad(&xstar).unwrap(),
            None,
        )
        .unwrap()];
        let low_gamma = OGDConfig::new(50.0, 1.0).unwrap();
        let trace = Trace::new(records, set, constants(), low_gamma).unwrap();
        let cert = certify(&trace).unwrap();
        assert!(!cert.valid);
    }

    #[test]
    fn compensated_sum_is_order_insensitive() {
        let (trace, _) = lagging_trace(40);
        let forward = dynamic_regret(&trace, 40).unwrap();
        let mut records: Vec<StepRecord> = trace.records().to_vec();
        records.reverse();
        for (i, r) in records.iter_mut().enumerate() {
            r.t = i + 1;
        }
        let reversed = Trace::new(records, disk50(), constants(), cfg()).unwrap();
        let backward = dynamic_regret(&reversed, 40).unwrap();
        assert!(
            (forward - backward).abs() <= 1e-10 * forward.abs().max(1.0),
            "forward {forward} vs backward {backward}"
        );
    }

    proptest! {
        // Regret and path length are nondecreasing in the round index, and
        // every per-round regret term is nonnegative.
        #[test]
        fn prefix_measures_are_monotone(horizon in 2usize..30) {
            let (trace, _) = lagging_trace(horizon);
            let mut prev_reg = 0.0;
            let mut prev_c = 0.0;
            for t in 1..=horizon {
                let reg = dynamic_regret(&trace, t).unwrap();
                let c = path_length(&trace, t).unwrap();
                prop_assert!(reg >= prev_reg - 1e-9);
                prop_assert!(c >= prev_c);
                prev_reg = reg;
                prev_c = c;
            }
            for r in trace.records() {
                prop_assert!(r.inst_error() >= -1e-9 * r.f_star.abs().max(1.0));
            }
        }
    }
}

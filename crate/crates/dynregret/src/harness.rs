//! Experiment runner: executes the learner/adversary loop with gradient-only
//! feedback, records the trace, computes every measure and the bound
//! certificate, and emits CSV/summary artifacts.
//!
//! Artifacts (all floats use shortest round-trip decimals):
//! - `trace.csv`: `t,x1,..,xn,xstar1,..,xstarn,f_x,f_star,inst_error,grad_norm,C_t,Reg_t`
//!   with cumulative columns folded in record order.
//! - `bounds.csv`: `t,dist_to_opt,contraction_rhs,violated`, one row per
//!   contraction instance `t = 1..T-1`; `dist_to_opt` is `||x_{t+1} - x_t*||`,
//!   the quantity the per-round bound constrains.
//! - `path.csv`: `t,a_t,b_t,xstar1,xstar2`, the loss-center and minimizer
//!   paths (written with the trace for 2-D runs).
//! - `summary.txt`: flat `key = value` report mirroring [`RunReport`].
//!
//! A run is deterministic: identical configs produce byte-identical CSVs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use crate::adversaries::Scenario;
use crate::config::{GammaSpec, RunConfig};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::losses::LossConstants;
use crate::ogd::{self, OGDConfig, OGDState};
use crate::regret::{
    self, BoundCertificate, ContractionRow, StepRecord, Trace,
};
use crate::space::Vector;

/// All measures and certificate values of one completed run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub horizon: usize,
    pub gamma: f64,
    pub h: f64,
    pub constants: LossConstants,
    pub final_x: Vector,
    pub final_x_star: Vector,
    pub path_length: f64,
    pub functional_variation: f64,
    pub gradient_variation: f64,
    pub dynamic_regret: f64,
    pub static_regret: f64,
    pub certificate: BoundCertificate,
    pub duration: Duration,
}

/// Execute a run and write the requested artifacts.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    run_with_trace(config).map(|(report, _)| report)
}

/// Execute a run, returning the report together with the recorded trace.
pub fn run_with_trace(config: &RunConfig) -> Result<(RunReport, Trace)> {
    let started = Instant::now();
    let scenario = config.scenario.build(config.horizon, config.set.clone())?;
    let set = scenario.set().clone();
    if !set.contains(&config.x_init, set.default_tol())? {
        return Err(Error::InfeasibleStart);
    }

    let constants = scenario.family_constants()?;
    let gamma = match config.gamma {
        GammaSpec::Auto => constants.lip,
        GammaSpec::Value(v) => v,
    };
    let ogd_cfg = OGDConfig::new(gamma, config.h)?;

    // Learner/adversary loop. The tracker update sees only the gradient;
    // minimizers and loss values are recorded on the environment side.
    let dim = set.dim();
    let mut state = OGDState::start(config.x_init.clone());
    let mut prev_grad: Option<Vector> = None;
    let mut records = Vec::with_capacity(config.horizon);
    for t in 1..=config.horizon {
        let loss = scenario.loss_at(t);
        let x_star = loss.minimizer(&set)?;
        let x_t = state.x().clone();
        let f_x = loss.eval(&x_t)?;
        let f_star = loss.eval(&x_star)?;
        let grad = loss.grad(&x_t)?;
        let predicted = prev_grad.take().unwrap_or_else(|| Vector::zeros(dim));
        records.push(StepRecord::new(t, x_t, x_star, f_x, f_star, grad.clone(), Some(predicted))?);
        let (next, _aux) = ogd::step(&state, &grad, &set, &ogd_cfg)?;
        prev_grad = Some(grad);
        state = next;
    }
    let trace = Trace::new(records, set, constants, ogd_cfg)?;

    let horizon = trace.horizon();
    let c_t = regret::path_length(&trace, horizon)?;
    let v_t = if horizon >= 2 {
        regret::functional_variation(scenario.losses(), trace.set())?
    } else {
        0.0
    };
    let d_t = regret::gradient_variation(&trace)?;
    let dynamic = regret::dynamic_regret(&trace, horizon)?;
    let static_r = regret::static_regret(&trace, scenario.losses())?;
    let certificate = regret::certify(&trace)?;

    let last = &trace.records()[horizon - 1];
    let report = RunReport {
        name: scenario.name().to_string(),
        horizon,
        gamma,
        h: config.h,
        constants,
        final_x: last.x.clone(),
        final_x_star: last.x_star.clone(),
        path_length: c_t,
        functional_variation: v_t,
        gradient_variation: d_t,
        dynamic_regret: dynamic,
        static_regret: static_r,
        certificate,
        duration: started.elapsed(),
    };

    emit_artifacts(config, &scenario, &trace, &report)?;
    Ok((report, trace))
}

/// Run several configurations (in parallel; runs share nothing) and write a
/// combined comparison CSV when a path is given. Per-run failures are
/// recorded in the result list without aborting the sweep.
pub fn sweep(
    configs: &[RunConfig],
    comparison_out: Option<&Path>,
) -> Result<Vec<Result<RunReport>>> {
    if configs.is_empty() {
        return Err(Error::InvalidParam("sweep needs at least one configuration".into()));
    }
    let results: Vec<Result<RunReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| scope.spawn(move || run(cfg)))
            .collect();
        handles
            .into_iter()
            .map(|handle| match handle.join() {
                Ok(res) => res,
                Err(_) => Err(Error::InvalidParam("run panicked".into())),
            })
            .collect()
    });

    if let Some(path) = comparison_out {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(
            w,
            "name,horizon,gamma,h,C_T,V_T,D_T,dynamic_regret,static_regret,rho,K1,K2,\
             lhs_thm3,rhs_thm3,rhs_cor4,contraction_violations,certificate_valid,\
             certificate_holds,error"
        )?;
        for (cfg, res) in configs.iter().zip(&results) {
            match res {
                Ok(r) => {
                    let c = &r.certificate;
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},",
                        r.name,
                        r.horizon,
                        r.gamma,
                        r.h,
                        r.path_length,
                        r.functional_variation,
                        r.gradient_variation,
                        r.dynamic_regret,
                        r.static_regret,
                        c.rho,
                        c.k1,
                        c.k2,
                        c.lhs_thm3,
                        c.rhs_thm3,
                        c.rhs_cor4,
                        c.contraction_violations,
                        c.valid,
                        c.holds(),
                    )?;
                }
                Err(e) => {
                    writeln!(
                        w,
                        "{},,,,,,,,,,,,,,,,,,\"{}\"",
                        cfg.scenario.label(),
                        e.to_string().replace('"', "'")
                    )?;
                }
            }
        }
        w.flush()?;
    }
    Ok(results)
}

/// Recompute the action sequence from the recorded gradients alone.
///
/// The tracker is a function of (x_init, gradients, set, config); replaying
/// the recorded gradients must reproduce the recorded actions bit for bit.
pub fn replay_actions(trace: &Trace) -> Result<Vec<Vector>> {
    let records = trace.records();
    let mut state = OGDState::start(records[0].x.clone());
    let mut actions = Vec::with_capacity(records.len());
    actions.push(records[0].x.clone());
    for r in &records[..records.len() - 1] {
        let (next, _) = ogd::step(&state, &r.grad, trace.set(), trace.config())?;
        actions.push(next.x().clone());
        state = next;
    }
    Ok(actions)
}

fn emit_artifacts(
    config: &RunConfig,
    scenario: &Scenario,
    trace: &Trace,
    report: &RunReport,
) -> Result<()> {
    if config.emit.is_empty() {
        return Ok(());
    }
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir)?;
    if config.emit.trace {
        write_trace_csv(&dir.join("trace.csv"), trace)?;
        if trace.set().dim() == 2 {
            write_path_csv(&dir.join("path.csv"), scenario, trace)?;
        }
    }
    if config.emit.bounds {
        let rows = regret::contraction_rows(trace)?;
        write_bounds_csv(&dir.join("bounds.csv"), &rows)?;
    }
    if config.emit.summary {
        write_summary(&dir.join("summary.txt"), report)?;
    }
    Ok(())
}

fn write_trace_csv(path: &Path, trace: &Trace) -> Result<()> {
    let dim = trace.set().dim();
    let mut w = BufWriter::new(File::create(path)?);
    let mut header = String::from("t");
    for i in 1..=dim {
        header.push_str(&format!(",x{i}"));
    }
    for i in 1..=dim {
        header.push_str(&format!(",xstar{i}"));
    }
    header.push_str(",f_x,f_star,inst_error,grad_norm,C_t,Reg_t");
    writeln!(w, "{header}")?;

    let mut c_acc = KahanSum::new();
    let mut reg_acc = KahanSum::new();
    let mut prev_star: Option<&Vector> = None;
    for r in trace.records() {
        if let Some(prev) = prev_star {
            c_acc.add(r.x_star.dist(prev));
        }
        reg_acc.add(r.inst_error());
        let mut line = format!("{}", r.t);
        for c in r.x.coords() {
            line.push_str(&format!(",{c}"));
        }
        for c in r.x_star.coords() {
            line.push_str(&format!(",{c}"));
        }
        line.push_str(&format!(
            ",{},{},{},{},{},{}",
            r.f_x,
            r.f_star,
            r.inst_error(),
            r.grad_norm(),
            c_acc.value(),
            reg_acc.value()
        ));
        writeln!(w, "{line}")?;
        prev_star = Some(&r.x_star);
    }
    w.flush()?;
    Ok(())
}

fn write_bounds_csv(path: &Path, rows: &[ContractionRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,dist_to_opt,contraction_rhs,violated")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.t,
            r.dist_to_opt,
            r.contraction_rhs,
            u8::from(r.violated)
        )?;
    }
    w.flush()?;
    Ok(())
}

fn write_path_csv(path: &Path, scenario: &Scenario, trace: &Trace) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,a_t,b_t,xstar1,xstar2")?;
    for r in trace.records() {
        let center = scenario.loss_at(r.t).center().coords();
        writeln!(
            w,
            "{},{},{},{},{}",
            r.t,
            center[0],
            center[1],
            r.x_star.coords()[0],
            r.x_star.coords()[1]
        )?;
    }
    w.flush()?;
    Ok(())
}

fn write_summary(path: &Path, report: &RunReport) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let c = &report.certificate;
    writeln!(w, "scenario = {}", report.name)?;
    writeln!(w, "horizon = {}", report.horizon)?;
    writeln!(w, "gamma = {}", report.gamma)?;
    writeln!(w, "h = {}", report.h)?;
    writeln!(w, "mu = {}", report.constants.mu)?;
    writeln!(w, "lip = {}", report.constants.lip)?;
    writeln!(w, "grad_bound = {}", report.constants.grad_bound)?;
    writeln!(w, "final_x = {}", report.final_x)?;
    writeln!(w, "final_x_star = {}", report.final_x_star)?;
    writeln!(w, "C_T = {}", report.path_length)?;
    writeln!(w, "V_T = {}", report.functional_variation)?;
    writeln!(w, "D_T = {}", report.gradient_variation)?;
    writeln!(w, "dynamic_regret = {}", report.dynamic_regret)?;
    writeln!(w, "static_regret = {}", report.static_regret)?;
    writeln!(w, "rho = {}", c.rho)?;
    writeln!(w, "K1 = {}", c.k1)?;
    writeln!(w, "K2 = {}", c.k2)?;
    writeln!(w, "lhs_thm3 = {}", c.lhs_thm3)?;
    writeln!(w, "rhs_thm3 = {}", c.rhs_thm3)?;
    writeln!(w, "rhs_cor4 = {}", c.rhs_cor4)?;
    writeln!(w, "contraction_violations = {}", c.contraction_violations)?;
    writeln!(w, "certificate_valid = {}", c.valid)?;
    writeln!(w, "thm3_holds = {}", c.thm3_holds())?;
    writeln!(w, "cor4_holds = {}", c.cor4_holds())?;
    writeln!(w, "duration_ms = {}", report.duration.as_millis())?;
    w.flush()?;
    Ok(())
}

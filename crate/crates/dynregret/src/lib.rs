//! Online gradient descent for tracking the time-varying minimizers of
//! strongly convex quadratic losses, with full regret accounting and runtime
//! verification of the contraction and path-length regret bounds.
//!
//! The pieces fit together as a learner/adversary loop:
//!
//! - [`space`]: vectors, feasible sets (balls and boxes), exact projection.
//! - [`losses`]: diagonal quadratic losses, gradients, curvature constants,
//!   exact constrained minimizers.
//! - [`ogd`]: the constant-stepsize tracker (projected-gradient step plus
//!   averaged update), its proximal reformulation, and the contraction factor.
//! - [`regret`]: dynamic/static regret, four variation measures, and the
//!   bound certificate checked after every run.
//! - [`adversaries`]: deterministic scenario generators (switching,
//!   diminishing variation, variability-regime presets).
//! - [`harness`]: the experiment runner, CSV/summary emission, sweeps.
//! - [`config`]: run configuration, TOML config files, override merging.
//!
//! The tracker receives only gradients; losses and minimizers live on the
//! environment side of the loop. Everything is deterministic: there is no
//! randomness anywhere in the system.

pub mod adversaries;
pub mod config;
pub mod error;
pub mod harness;
pub mod kahan;
pub mod losses;
pub mod ogd;
pub mod regret;
pub mod space;

mod ballopt;

pub use error::{Error, Result};

//! Long-range percolation on the box `[N]^d`.
//!
//! Sites `x ≠ y` of `{0, ..., N}^d` are joined independently with
//! probability 1 when `‖x − y‖₁ = 1` and `1 − exp(−β / ‖x − y‖₁^s)`
//! otherwise. The library samples such graphs, grows graph-distance balls
//! both on a fixed graph and with fresh randomness per step, evaluates the
//! weight statistic `ρ(y, S)` and the bounds derived from it, and measures
//! diameters and the scaling statistic `D_N log log N / log N` at the
//! critical exponent `s = d`.
//!
//! Logarithms are natural throughout.

pub mod ballgrowth;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod rng;
pub mod siteset;
pub mod stats;
pub mod weights;

pub use ballgrowth::{BallState, Driver, GrowthTrajectory, Mode, StopReason, StopRule};
pub use error::{Error, Result};
pub use graph::{Graph, ModelParams};
pub use lattice::{BoxSpec, Site};
pub use siteset::SiteSet;

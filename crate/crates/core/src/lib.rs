//! Dynamics of the wheeled inverted pendulum: a body pivoting on the axle
//! of two independently driven wheels that roll without slipping.
//!
//! Three formulations of the same motion are provided and cross-checked:
//!
//! * [`dynamics_full`]: Euler-Lagrange equations in the base coordinates
//!   `(α, φ₁, φ₂)` with the curvature of the rolling connection as forcing.
//! * [`dynamics_reduced`]: momentum and shape equations on SE(2)×S¹ with
//!   group reconstruction through the nonholonomic connection.
//! * [`oracle`]: the unconstrained Lagrangian plus constraint multipliers,
//!   differentiated numerically.
//!
//! [`sim`] integrates any of them with fixed-step RK4, [`validation`] compares
//! trajectories and runs the structural checks, and [`cli`] backs the `wip`
//! binary.
//!
//! ```
//! use wip_dynamics::{simulate, FullState, Initial, ModelKind, Params, TorqueProfile};
//!
//! let p = Params::default();
//! let start = Initial::Full(FullState { alpha: 0.05, ..Default::default() });
//! let traj = simulate(ModelKind::Full, &start, &TorqueProfile::zero(), 0.5, 1e-3, &p).unwrap();
//! assert_eq!(traj.len(), 501);
//! ```

pub mod cli;
pub mod config;
pub mod connection;
pub mod dynamics_full;
pub mod dynamics_reduced;
pub mod error;
pub mod model;
pub mod oracle;
pub mod sim;
pub mod validation;

pub use config::Config;
pub use dynamics_reduced::{MomentumInputs, WheelAnchor};
pub use error::{Error, Result};
pub use model::{Controls, FullState, Params, ReducedState};
pub use sim::{simulate, Initial, ModelKind, Scenario, TorqueProfile, Trajectory};

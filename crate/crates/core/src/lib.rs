//! Exact strapdown inertial propagation on SE2(3).
//!
//! For gyro and accelerometer readings held constant over a sample interval,
//! the attitude/velocity/position kinematics have a closed-form solution
//! `X(t) = e^{Mt} X(0) e^{Nt}`. This crate implements that solution together
//! with the pieces needed to check and benchmark it:
//!
//! - [`so3`]: hat/vee, SO(3) exponential and logarithm.
//! - [`mixed_exp`]: closed-form exponentials of the block generators.
//! - [`propagator`]: navigation state, generators and the one-step propagator.
//! - [`integrators`]: RK4 and Euler baselines on the flattened state.
//! - [`opcount`]: instrumented scalar and per-step operation counts.
//! - [`scenario`]: analytic test trajectories, scenario files and IMU CSV.
//! - [`expm`]: dense matrix exponential used as an independent oracle.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod expm;
pub mod integrators;
pub mod linalg;
pub mod mixed_exp;
pub mod opcount;
pub mod propagator;
pub mod scalar;
pub mod scenario;
pub mod so3;

pub use error::{Error, Result};
pub use integrators::Method;
pub use linalg::{Mat2, Mat3, Mat3x2, Mat5, Vec3};
pub use propagator::{
    propagate, propagate_sequence, GravityModel, ImuInput, ImuSample, NavState, TimedState, Trajectory,
};
pub use scenario::{load_scenario, parse_imu_csv, parse_scenario, Scenario};

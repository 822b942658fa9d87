//! Navigation state on SE2(3) and its exact one-step propagation.
//!
//! The strapdown kinematics
//!
//! ```text
//! Ṙ = R hat(ω)      v̇ = R a + a_g      ṗ = v
//! ```
//!
//! are the mixed-invariant field `Ẋ = M X + X N` with
//!
//! ```text
//! M = | 0  [a_g 0] |      N = | hat(ω)  [a 0] |      B = | 0 1 |
//!     | 0    -B    |          | 0         B   |          | 0 0 |
//! ```
//!
//! whose flow is `X(t) = e^{Mt} X(0) e^{Nt}`. Both factors have closed forms
//! (see [`crate::mixed_exp`]), so one step is exact for any duration as long as
//! ω, a and a_g are constant over it.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat3, Mat3x2, Mat5, Vec3};
use crate::mixed_exp::{self, MixedGenerator};
use crate::scalar::Real;
use crate::so3::{self, AngleBranch};

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Attitude (body to world), world velocity and world position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NavState<S = f64> {
    pub attitude: Mat3<S>,
    pub velocity: Vec3<S>,
    pub position: Vec3<S>,
}

impl<S: Real> NavState<S> {
    pub fn new(attitude: Mat3<S>, velocity: Vec3<S>, position: Vec3<S>) -> Self {
        Self { attitude, velocity, position }
    }

    pub fn identity() -> Self {
        Self { attitude: Mat3::identity(), velocity: Vec3::zeros(), position: Vec3::zeros() }
    }

    pub fn is_finite(&self) -> bool {
        self.attitude.is_finite() && self.velocity.is_finite() && self.position.is_finite()
    }

    /// Row-major attitude, then velocity, then position.
    pub fn to_flat(&self) -> [S; 15] {
        let mut out = [S::zero(); 15];
        for i in 0..3 {
            for j in 0..3 {
                out[3 * i + j] = self.attitude.0[i][j];
            }
            out[9 + i] = self.velocity[i];
            out[12 + i] = self.position[i];
        }
        out
    }

    pub fn from_flat(x: &[S; 15]) -> Self {
        let mut s = Self::identity();
        for i in 0..3 {
            for j in 0..3 {
                s.attitude.0[i][j] = x[3 * i + j];
            }
            s.velocity[i] = x[9 + i];
            s.position[i] = x[12 + i];
        }
        s
    }

    pub fn to_f64(&self) -> NavState<f64> {
        NavState {
            attitude: self.attitude.to_f64(),
            velocity: self.velocity.to_f64(),
            position: self.position.to_f64(),
        }
    }
}

impl NavState<f64> {
    /// The 5x5 group element `[[R, v, p], [0, 1, 0], [0, 0, 1]]`.
    pub fn to_matrix(&self) -> Mat5 {
        Mat5::from_blocks(&self.attitude, &Mat3x2::from_cols(self.velocity, self.position), &Mat2::identity())
    }

    /// Reads the attitude, velocity and position blocks; the bottom rows are
    /// not checked.
    pub fn from_matrix(m: &Mat5) -> Self {
        let p = m.top_right();
        Self { attitude: m.top_left(), velocity: p.col(0), position: p.col(1) }
    }
}

/// Body angular rate (rad/s) and body acceleration (m/s²), held constant
/// over a sample interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImuInput<S = f64> {
    pub gyro: Vec3<S>,
    pub accel: Vec3<S>,
}

impl<S: Real> ImuInput<S> {
    pub fn new(gyro: Vec3<S>, accel: Vec3<S>) -> Self {
        Self { gyro, accel }
    }

    pub fn zero() -> Self {
        Self { gyro: Vec3::zeros(), accel: Vec3::zeros() }
    }

    pub fn is_finite(&self) -> bool {
        self.gyro.is_finite() && self.accel.is_finite()
    }
}

/// Constant world-frame gravitational acceleration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityModel<S = f64> {
    pub accel: Vec3<S>,
}

impl<S: Real> GravityModel<S> {
    pub fn new(accel: Vec3<S>) -> Self {
        Self { accel }
    }

    pub fn none() -> Self {
        Self { accel: Vec3::zeros() }
    }
}

impl Default for GravityModel<f64> {
    /// z-up world: `(0, 0, -9.80665)`.
    fn default() -> Self {
        Self { accel: Vec3::new(0.0, 0.0, -STANDARD_GRAVITY) }
    }
}

/// Lie algebra coordinates `x = [u1, u2, ω]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub u1: Vec3<f64>,
    pub u2: Vec3<f64>,
    pub omega: Vec3<f64>,
}

impl TangentVector {
    pub fn to_array(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        out[..3].copy_from_slice(&self.u1.0);
        out[3..6].copy_from_slice(&self.u2.0);
        out[6..].copy_from_slice(&self.omega.0);
        out
    }
}

/// `[x]^` in se2(3).
pub fn wedge_se23(x: &TangentVector) -> Mat5 {
    Mat5::from_blocks(&so3::hat(&x.omega), &Mat3x2::from_cols(x.u1, x.u2), &Mat2::zeros())
}

/// Inverse of [`wedge_se23`]; the bottom rows and the symmetric part of the
/// rotation block are ignored.
pub fn vee_se23(m: &Mat5) -> TangentVector {
    let p = m.top_right();
    TangentVector { u1: p.col(0), u2: p.col(1), omega: so3::vee_unchecked(&m.top_left()) }
}

/// The gravity generator `M` and body generator `N`.
pub fn build_generators(u: &ImuInput<f64>, grav: &GravityModel<f64>) -> (MixedGenerator<f64>, MixedGenerator<f64>) {
    let m = MixedGenerator::from_parts(None, Mat3x2::from_cols(grav.accel, Vec3::zeros()), Mat2::shift().scale(-1.0));
    let n = MixedGenerator::from_parts(Some(u.gyro), Mat3x2::from_cols(u.accel, Vec3::zeros()), Mat2::shift());
    (m, n)
}

/// Exact flow of the strapdown kinematics over `t` seconds for constant
/// inputs. `t` may be negative; `t == 0` returns `x0` unchanged.
pub fn propagate<S: Real>(x0: &NavState<S>, u: &ImuInput<S>, grav: &GravityModel<S>, t: S) -> Result<NavState<S>> {
    if !x0.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    if !u.is_finite() || !grav.accel.is_finite() {
        return Err(Error::NonFinite("inputs"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    if t == S::zero() {
        return Ok(*x0);
    }
    Ok(propagate_unchecked(x0, u, grav, t, AngleBranch::Auto))
}

/// `e^{Mt} X(0) e^{Nt}` expanded blockwise. With `e^{Mt} = [[I, P_M], [0, I - Bt]]`
/// and `e^{Nt} = [[R_N, P_N], [0, I + Bt]]`:
///
/// ```text
/// R(t) = R₀ R_N
/// [v p](t) = R₀ P_N + (P₀ + P_M)(I + Bt)
/// ```
///
/// and the clock blocks cancel to `I`.
pub(crate) fn propagate_unchecked<S: Real>(
    x0: &NavState<S>,
    u: &ImuInput<S>,
    grav: &GravityModel<S>,
    t: S,
    branch: AngleBranch,
) -> NavState<S> {
    let body = mixed_exp::body_factor(&u.gyro, &u.accel, t, branch);
    let gravity = mixed_exp::gravity_factor(&grav.accel, t);

    let r0 = &x0.attitude;
    let rotated = body.translation.premul(r0);
    let q_vel = x0.velocity + gravity.translation.col(0);
    let q_pos = x0.position + gravity.translation.col(1);
    NavState {
        attitude: *r0 * body.rotation,
        velocity: rotated.col(0) + q_vel,
        position: rotated.col(1) + (q_pos + q_vel.scale(t)),
    }
}

/// One IMU sample held over `dt` seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImuSample {
    pub input: ImuInput<f64>,
    pub dt: f64,
}

/// A state paired with its time stamp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimedState {
    pub t: f64,
    pub state: NavState<f64>,
}

pub type Trajectory = Vec<TimedState>;

/// Applies [`propagate`] to each sample in turn, keeping every intermediate
/// state (starting with `x0` at `t = 0`).
pub fn propagate_sequence(x0: &NavState<f64>, samples: &[ImuSample], grav: &GravityModel<f64>) -> Result<Trajectory> {
    let mut out = Vec::with_capacity(samples.len() + 1);
    out.push(TimedState { t: 0.0, state: *x0 });
    let mut t = 0.0;
    let mut x = *x0;
    for s in samples {
        if !(s.dt.is_finite() && s.dt > 0.0) {
            return Err(Error::InvalidStep(s.dt));
        }
        x = propagate(&x, &s.input, grav, s.dt)?;
        t += s.dt;
        out.push(TimedState { t, state: x });
    }
    Ok(out)
}

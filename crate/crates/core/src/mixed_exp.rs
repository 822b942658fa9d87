//! Closed-form exponential of block upper-triangular generators
//!
//! ```text
//!     l = | Ω  A |      Ω: 3x3 skew, A: 3x2, B: 2x2 with B² = 0
//!         | 0  B |
//! ```
//!
//! Because `B² = 0`, every power `lⁿ` (n ≥ 2) has top-right block
//! `Ωⁿ⁻¹A + Ωⁿ⁻²AB`. Summing the exponential series and folding the even and
//! odd powers of Ω with `Ω³ = -θ²Ω` gives
//!
//! ```text
//! e^l = | e^Ω  P(Ω, A, B) |
//!       | 0    I + B      |
//!
//! P = A + AB/2 + ΩA (c1 I + c2 B) + Ω²A (c2 I + c3 B)
//! ```
//!
//! with `c1 = Σ(-θ²)ⁿ/(2n+2)!`, `c2 = Σ(-θ²)ⁿ/(2n+3)!`, `c3 = Σ(-θ²)ⁿ/(2n+4)!`.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat3, Mat3x2, Mat5, Vec3};
use crate::scalar::Real;
use crate::so3::{self, AngleBranch, AngleCoefficients};

/// Bound on `|B²|` for a clock block to count as nilpotent.
pub const NILPOTENT_TOLERANCE: f64 = 1e-12;

/// The three series coefficients of the translation block at angle `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RodriguesCoefficients {
    pub theta: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Evaluates `c1`, `c2`, `c3` at `theta` radians.
pub fn coefficients(theta: f64) -> Result<RodriguesCoefficients> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::InvalidAngle(theta));
    }
    let k = AngleCoefficients::from_theta_sq(theta * theta, AngleBranch::Auto);
    Ok(RodriguesCoefficients { theta, c1: k.c1, c2: k.c2, c3: k.c3 })
}

/// A generator `[[Ω, A], [0, B]]` with nilpotent `B`.
///
/// `rotation_rate == None` marks a structurally zero Ω block (the gravity
/// generator); the exponential then skips the rotation entirely.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedGenerator<S = f64> {
    rotation_rate: Option<Vec3<S>>,
    accel: Mat3x2<S>,
    clock: Mat2<S>,
}

impl<S: Real> MixedGenerator<S> {
    /// Builds a generator whose blocks are known to be well formed.
    pub(crate) fn from_parts(rotation_rate: Option<Vec3<S>>, accel: Mat3x2<S>, clock: Mat2<S>) -> Self {
        Self { rotation_rate, accel, clock }
    }

    pub fn rotation_rate(&self) -> Option<&Vec3<S>> {
        self.rotation_rate.as_ref()
    }

    pub fn accel(&self) -> &Mat3x2<S> {
        &self.accel
    }

    pub fn clock(&self) -> &Mat2<S> {
        &self.clock
    }

    pub fn omega_block(&self) -> Mat3<S> {
        self.rotation_rate.as_ref().map(so3::hat).unwrap_or_else(Mat3::zeros)
    }
}

impl MixedGenerator<f64> {
    /// Validates finiteness and nilpotency of the clock block.
    pub fn new(rotation_rate: Option<Vec3<f64>>, accel: Mat3x2<f64>, clock: Mat2<f64>) -> Result<Self> {
        if rotation_rate.is_some_and(|w| !w.is_finite()) || !accel.is_finite() {
            return Err(Error::NonFinite("generator"));
        }
        check_nilpotent(&clock)?;
        Ok(Self { rotation_rate, accel, clock })
    }

    /// The assembled 5x5 generator.
    pub fn to_matrix(&self) -> Mat5 {
        Mat5::from_blocks(&self.omega_block(), &self.accel, &self.clock)
    }
}

fn check_nilpotent(b: &Mat2<f64>) -> Result<()> {
    if b.0.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("clock block"));
    }
    let sq = (*b * *b).max_abs();
    if sq > NILPOTENT_TOLERANCE {
        return Err(Error::NotNilpotent(sq));
    }
    Ok(())
}

/// One exponential factor `[[R, P], [0, D]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedExpFactor<S = f64> {
    pub rotation: Mat3<S>,
    pub translation: Mat3x2<S>,
    pub clock: Mat2<S>,
}

impl<S: Real> MixedExpFactor<S> {
    pub fn identity() -> Self {
        Self { rotation: Mat3::identity(), translation: Mat3x2::zeros(), clock: Mat2::identity() }
    }

    /// Block product `self * rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            rotation: self.rotation * rhs.rotation,
            translation: rhs.translation.premul(&self.rotation) + self.translation.mul_mat2(&rhs.clock),
            clock: self.clock * rhs.clock,
        }
    }
}

impl MixedExpFactor<f64> {
    pub fn to_matrix(&self) -> Mat5 {
        Mat5::from_blocks(&self.rotation, &self.translation, &self.clock)
    }
}

/// `P(Ω, A, B)` for a skew `Ω`, with `θ = |vee(Ω)|`.
pub fn translation_block(omega: &Mat3<f64>, a: &Mat3x2<f64>, b: &Mat2<f64>) -> Result<Mat3x2<f64>> {
    let w = so3::vee(omega)?;
    if !a.is_finite() {
        return Err(Error::NonFinite("translation block"));
    }
    check_nilpotent(b)?;
    let (_, theta_sq) = so3::squares(&w);
    let k = AngleCoefficients::from_theta_sq(theta_sq, AngleBranch::Auto);
    Ok(translation_from(&w, a, b, &k))
}

fn translation_from<S: Real>(w: &Vec3<S>, a: &Mat3x2<S>, b: &Mat2<S>, k: &AngleCoefficients<S>) -> Mat3x2<S> {
    let half = S::from_f64(0.5);
    let omega_a = Mat3x2([w.cross(&a.0[0]), w.cross(&a.0[1])]);
    let omega2_a = Mat3x2([w.cross(&omega_a.0[0]), w.cross(&omega_a.0[1])]);
    let eye = Mat2::<S>::identity();
    *a + a.mul_mat2(b).scale(half)
        + omega_a.mul_mat2(&(eye.scale(k.c1) + b.scale(k.c2)))
        + omega2_a.mul_mat2(&(eye.scale(k.c2) + b.scale(k.c3)))
}

/// `e^{gen · t}` in block form. Negative `t` is allowed.
pub fn exp_factor(gen: &MixedGenerator<f64>, t: f64) -> Result<MixedExpFactor<f64>> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    check_nilpotent(&gen.clock)?;
    let a = gen.accel.scale(t);
    let b = gen.clock.scale(t);
    let (rotation, translation) = match gen.rotation_rate {
        Some(rate) => {
            let w = rate.scale(t);
            let (sq, theta_sq) = so3::squares(&w);
            let k = AngleCoefficients::from_theta_sq(theta_sq, AngleBranch::Auto);
            (so3::rotation_from(&w, &sq, &k), translation_from(&w, &a, &b, &k))
        }
        None => (Mat3::identity(), a + a.mul_mat2(&b).scale(0.5)),
    };
    Ok(MixedExpFactor { rotation, translation, clock: Mat2::identity() + b })
}

/// `e^{N t}` for the body generator `N = [[hat(ω), [a 0]], [0, B]]`.
///
/// With `A = [a t, 0]` and `B t = [[0, t], [0, 0]]` the translation block
/// reduces to two columns built from `w₁ = ω t × a t` and `w₂ = ω t × w₁`:
/// `[α + c1 w₁ + c2 w₂,  t (α/2 + c2 w₁ + c3 w₂)]` where `α = a t`.
pub(crate) fn body_factor<S: Real>(rate: &Vec3<S>, accel: &Vec3<S>, t: S, branch: AngleBranch) -> MixedExpFactor<S> {
    let w = rate.scale(t);
    let alpha = accel.scale(t);
    let (sq, theta_sq) = so3::squares(&w);
    let k = AngleCoefficients::from_theta_sq(theta_sq, branch);
    let rotation = so3::rotation_from(&w, &sq, &k);

    let w1 = w.cross(&alpha);
    let w2 = w.cross(&w1);
    let half = S::from_f64(0.5);
    let mut vel = Vec3::zeros();
    let mut pos = Vec3::zeros();
    for i in 0..3 {
        vel[i] = alpha[i] + k.c1 * w1[i] + k.c2 * w2[i];
        pos[i] = t * (half * alpha[i] + k.c2 * w1[i] + k.c3 * w2[i]);
    }
    let clock = Mat2([[S::one(), t], [S::zero(), S::one()]]);
    MixedExpFactor { rotation, translation: Mat3x2([vel, pos]), clock }
}

/// `e^{M t}` for the gravity generator `M = [[0, [g 0]], [0, -B]]`.
pub(crate) fn gravity_factor<S: Real>(gravity: &Vec3<S>, t: S) -> MixedExpFactor<S> {
    let alpha = gravity.scale(t);
    let half_t = t * S::from_f64(0.5);
    let clock = Mat2([[S::one(), -t], [S::zero(), S::one()]]);
    MixedExpFactor { rotation: Mat3::identity(), translation: Mat3x2([alpha, -alpha.scale(half_t)]), clock }
}

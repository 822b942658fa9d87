//! Rotation primitives: hat/vee, the SO(3) exponential and logarithm.
//!
//! Every coefficient that appears in the closed-form exponentials is a power
//! series in `x = θ²` with alternating signs. Near zero we evaluate the series
//! directly; above [`SERIES_ANGLE`] we use half-angle closed forms, which do
//! not suffer the cancellation in `1 - cos θ` or `θ - sin θ`.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// Below this angle (radians) the coefficient series is summed directly.
pub const SERIES_ANGLE: f64 = 0.5;

/// Terms kept in each truncated series; the first dropped term is below
/// 1e-19 relative at `SERIES_ANGLE`.
const SERIES_TERMS: usize = 8;

/// Tolerance on the symmetric part accepted by [`vee`].
pub const SKEW_TOLERANCE: f64 = 1e-9;

/// Tolerance on `|RᵀR - I|_F` accepted by [`log_so3`].
pub const ROTATION_TOLERANCE: f64 = 1e-6;

/// Selects how the angle coefficients are evaluated.
///
/// `Auto` picks the series below [`SERIES_ANGLE`]. The pinned variants exist
/// so that operation counts can be taken on one branch regardless of input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AngleBranch {
    #[default]
    Auto,
    Closed,
    Series,
}

const fn inverse_factorials<const N: usize>() -> [f64; N] {
    let mut out = [0.0; N];
    let mut fact = 1.0;
    let mut i = 0;
    while i < N {
        if i > 0 {
            fact *= i as f64;
        }
        out[i] = 1.0 / fact;
        i += 1;
    }
    out
}

const INV_FACT: [f64; 2 * SERIES_TERMS + 5] = inverse_factorials();

/// `Σ_{n<SERIES_TERMS} (-x)^n / (2n + offset)!` by Horner's rule.
fn alternating_series<S: Real>(x: S, offset: usize) -> S {
    let coeff = |n: usize| S::from_f64(INV_FACT[2 * n + offset]);
    let mut acc = coeff(SERIES_TERMS - 1);
    for n in (0..SERIES_TERMS - 1).rev() {
        acc = coeff(n) - x * acc;
    }
    acc
}

/// Scalar coefficients shared by the SO(3) exponential and the translation
/// block of the mixed exponential, all functions of `θ² = |ω|²`.
///
/// * `sinc  = sin θ / θ`
/// * `c1    = (1 - cos θ) / θ²`
/// * `c2    = (θ - sin θ) / θ³`
/// * `c3    = (θ²/2 - 1 + cos θ) / θ⁴`
/// * `cos   = cos θ`
#[derive(Clone, Copy, Debug)]
pub(crate) struct AngleCoefficients<S> {
    pub sinc: S,
    pub c1: S,
    pub c2: S,
    pub c3: S,
    pub cos: S,
}

impl<S: Real> AngleCoefficients<S> {
    pub(crate) fn from_theta_sq(theta_sq: S, branch: AngleBranch) -> Self {
        let use_series = match branch {
            AngleBranch::Auto => theta_sq < S::from_f64(SERIES_ANGLE * SERIES_ANGLE),
            AngleBranch::Closed => false,
            AngleBranch::Series => true,
        };
        if use_series {
            let c1 = alternating_series(theta_sq, 2);
            Self {
                sinc: alternating_series(theta_sq, 1),
                c1,
                c2: alternating_series(theta_sq, 3),
                c3: alternating_series(theta_sq, 4),
                cos: S::one() - theta_sq * c1,
            }
        } else {
            let theta = theta_sq.sqrt();
            let half = theta * S::from_f64(0.5);
            let (sh, ch) = (half.sin(), half.cos());
            let two = S::from_f64(2.0);
            let sin = two * sh * ch;
            let one_minus_cos = two * sh * sh;
            Self {
                sinc: sin / theta,
                c1: one_minus_cos / theta_sq,
                c2: (theta - sin) / (theta_sq * theta),
                c3: (theta_sq * S::from_f64(0.5) - one_minus_cos) / (theta_sq * theta_sq),
                cos: S::one() - one_minus_cos,
            }
        }
    }
}

/// Cross-product matrix: `hat(w) * x == w × x`.
pub fn hat<S: Real>(w: &Vec3<S>) -> Mat3<S> {
    let z = S::zero();
    let [x, y, zz] = w.0;
    Mat3([[z, -zz, y], [zz, z, -x], [-y, x, z]])
}

/// Inverse of [`hat`]. Rejects matrices whose symmetric part exceeds
/// [`SKEW_TOLERANCE`]; the returned vector averages the two off-diagonal
/// estimates of each component.
pub fn vee(m: &Mat3<f64>) -> Result<Vec3<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("skew matrix"));
    }
    let sym = (*m + m.transpose()).scale(0.5).frobenius_norm();
    if sym > SKEW_TOLERANCE {
        return Err(Error::NotSkew(sym));
    }
    Ok(vee_unchecked(m))
}

pub(crate) fn vee_unchecked<S: Real>(m: &Mat3<S>) -> Vec3<S> {
    let h = S::from_f64(0.5);
    let a = &m.0;
    Vec3([(a[2][1] - a[1][2]) * h, (a[0][2] - a[2][0]) * h, (a[1][0] - a[0][1]) * h])
}

/// Rodrigues' formula written as `R = cos θ I + sinc Ω + c1 ω ωᵀ`, which
/// equals `I + sinc Ω + c1 Ω²` because `Ω² = ω ωᵀ - θ² I`.
pub(crate) fn rotation_from<S: Real>(w: &Vec3<S>, sq: &[S; 3], k: &AngleCoefficients<S>) -> Mat3<S> {
    let [x, y, z] = w.0;
    let (a, b) = (k.sinc, k.c1);
    let (bxy, bxz, byz) = (b * (x * y), b * (x * z), b * (y * z));
    let (ax, ay, az) = (a * x, a * y, a * z);
    Mat3([
        [k.cos + b * sq[0], bxy - az, bxz + ay],
        [bxy + az, k.cos + b * sq[1], byz - ax],
        [bxz - ay, byz + ax, k.cos + b * sq[2]],
    ])
}

pub(crate) fn squares<S: Real>(w: &Vec3<S>) -> ([S; 3], S) {
    let sq = [w[0] * w[0], w[1] * w[1], w[2] * w[2]];
    (sq, sq[0] + sq[1] + sq[2])
}

pub(crate) fn exp_so3_with<S: Real>(w: &Vec3<S>, branch: AngleBranch) -> Mat3<S> {
    let (sq, theta_sq) = squares(w);
    let k = AngleCoefficients::from_theta_sq(theta_sq, branch);
    rotation_from(w, &sq, &k)
}

/// The SO(3) exponential `e^{hat(w)}`.
pub fn exp_so3<S: Real>(w: &Vec3<S>) -> Mat3<S> {
    exp_so3_with(w, AngleBranch::Auto)
}

/// Rotation angle in `[0, π]` recovered from the trace and the
/// antisymmetric part. Tolerates matrices that are only approximately
/// orthonormal, which is what a non-projected integrator produces.
pub fn rotation_angle(r: &Mat3<f64>) -> f64 {
    let s = vee_unchecked(r).norm();
    let c = 0.5 * (r.trace() - 1.0);
    s.atan2(c)
}

/// `|RᵀR - I|_F`.
pub fn orthogonality_error(r: &Mat3<f64>) -> f64 {
    (r.transpose() * *r - Mat3::identity()).frobenius_norm()
}

/// The SO(3) logarithm, returning the rotation vector with angle in `[0, π)`.
///
/// Fails with [`Error::AmbiguousAxis`] when the angle is within 1e-6 of π.
pub fn log_so3(r: &Mat3<f64>) -> Result<Vec3<f64>> {
    if !r.is_finite() {
        return Err(Error::NonFinite("rotation matrix"));
    }
    let ortho = orthogonality_error(r);
    if ortho > ROTATION_TOLERANCE {
        return Err(Error::NotRotation(ortho));
    }
    let s = vee_unchecked(r);
    let sin = s.norm();
    let cos = 0.5 * (r.trace() - 1.0);
    let theta = sin.atan2(cos);

    if std::f64::consts::PI - theta < 1e-6 {
        return Err(Error::AmbiguousAxis(theta));
    }
    if theta < 1e-2 {
        // θ / sin θ = 1 + θ²/6 + 7θ⁴/360 + ...
        let t2 = theta * theta;
        return Ok(s.scale(1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0));
    }
    if theta < 3.0 {
        return Ok(s.scale(theta / sin));
    }

    // Near π the antisymmetric part vanishes; take the axis from the
    // symmetric part (1 - cos θ) n nᵀ and fix its sign from `s`.
    let sym = (*r + r.transpose()).scale(0.5);
    let one_minus_cos = 1.0 - cos;
    let k = (0..3).max_by(|&i, &j| sym.0[i][i].total_cmp(&sym.0[j][j])).unwrap_or(0);
    let mut axis = Vec3::zeros();
    for i in 0..3 {
        axis[i] = sym.0[i][k] - if i == k { cos } else { 0.0 };
    }
    axis = axis.scale(1.0 / (axis[k] * one_minus_cos).sqrt());
    let axis = axis.scale(1.0 / axis.norm());
    let sign = if axis.dot(&s) < 0.0 { -1.0 } else { 1.0 };
    Ok(axis.scale(sign * theta))
}

/// Unit quaternion `[w, x, y, z]` to a rotation matrix. The input is
/// normalized; a zero or non-finite quaternion is rejected.
pub fn rotation_from_quaternion(q: [f64; 4]) -> Result<Mat3<f64>> {
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("quaternion"));
    }
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n < 1e-9 {
        return Err(Error::InvalidScenario("attitude quaternion has zero norm".into()));
    }
    let [w, x, y, z] = q.map(|v| v / n);
    Ok(Mat3([
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]))
}

/// Rotation by `angle` about world z.
pub fn rotation_z(angle: f64) -> Mat3<f64> {
    let (s, c) = angle.sin_cos();
    Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

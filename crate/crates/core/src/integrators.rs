//! Fixed-step baselines for the strapdown kinematics on the flattened
//! 15-element state `[R (row-major), v, p]`.
//!
//! RK4 here is the plain textbook scheme: the rotation matrix is integrated
//! as nine independent numbers and is not re-orthonormalized unless asked.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::propagator::{propagate, GravityModel, ImuInput, ImuSample, NavState, TimedState, Trajectory};
use crate::scalar::Real;
use crate::so3;

/// Time derivative `(R hat(ω), R a + a_g, v)` in flattened order.
pub fn kinematics_rhs<S: Real>(x: &NavState<S>, u: &ImuInput<S>, grav: &GravityModel<S>) -> [S; 15] {
    let r_dot = x.attitude * so3::hat(&u.gyro);
    let v_dot = x.attitude.mul_vec(&u.accel) + grav.accel;
    NavState::new(r_dot, v_dot, x.velocity).to_flat()
}

fn axpy<S: Real>(y: &[S; 15], a: S, k: &[S; 15]) -> [S; 15] {
    std::array::from_fn(|i| y[i] + a * k[i])
}

/// One classical fourth-order Runge-Kutta step of size `h`.
pub fn rk4_step<S: Real>(x: &NavState<S>, u: &ImuInput<S>, grav: &GravityModel<S>, h: S) -> NavState<S> {
    let f = |y: &[S; 15]| kinematics_rhs(&NavState::from_flat(y), u, grav);
    let y = x.to_flat();
    let half = h * S::from_f64(0.5);
    let k1 = f(&y);
    let k2 = f(&axpy(&y, half, &k1));
    let k3 = f(&axpy(&y, half, &k2));
    let k4 = f(&axpy(&y, h, &k3));
    let two = S::from_f64(2.0);
    let sixth = h / S::from_f64(6.0);
    let out = std::array::from_fn(|i| y[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]));
    NavState::from_flat(&out)
}

/// One forward Euler step.
pub fn euler_step<S: Real>(x: &NavState<S>, u: &ImuInput<S>, grav: &GravityModel<S>, h: S) -> NavState<S> {
    let y = x.to_flat();
    NavState::from_flat(&axpy(&y, h, &kinematics_rhs(x, u, grav)))
}

/// RK4 applied to the full 5x5 matrix equation `Ẋ = M X + X N`, with every
/// entry of the group element treated as a state. Only used as a second
/// comparator when counting operations.
pub fn rk4_matrix_step<S: Real>(x: &NavState<S>, u: &ImuInput<S>, grav: &GravityModel<S>, h: S) -> NavState<S> {
    type M5<S> = [[S; 5]; 5];
    let (z, o) = (S::zero(), S::one());
    let mut m: M5<S> = [[z; 5]; 5];
    let mut n: M5<S> = [[z; 5]; 5];
    let omega = so3::hat(&u.gyro);
    for i in 0..3 {
        m[i][3] = grav.accel[i];
        n[i][3] = u.accel[i];
        for j in 0..3 {
            n[i][j] = omega.0[i][j];
        }
    }
    m[3][4] = -o;
    n[3][4] = o;

    let mul = |a: &M5<S>, b: &M5<S>| -> M5<S> {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = a[i][0] * b[0][j];
                for k in 1..5 {
                    acc = acc + a[i][k] * b[k][j];
                }
                acc
            })
        })
    };
    let rhs = |y: &M5<S>| -> M5<S> {
        let (l, r) = (mul(&m, y), mul(y, &n));
        std::array::from_fn(|i| std::array::from_fn(|j| l[i][j] + r[i][j]))
    };
    let step = |y: &M5<S>, a: S, k: &M5<S>| -> M5<S> {
        std::array::from_fn(|i| std::array::from_fn(|j| y[i][j] + a * k[i][j]))
    };

    let mut y: M5<S> = [[z; 5]; 5];
    for i in 0..3 {
        for j in 0..3 {
            y[i][j] = x.attitude.0[i][j];
        }
        y[i][3] = x.velocity[i];
        y[i][4] = x.position[i];
    }
    y[3][3] = o;
    y[4][4] = o;

    let half = h * S::from_f64(0.5);
    let k1 = rhs(&y);
    let k2 = rhs(&step(&y, half, &k1));
    let k3 = rhs(&step(&y, half, &k2));
    let k4 = rhs(&step(&y, h, &k3));
    let two = S::from_f64(2.0);
    let sixth = h / S::from_f64(6.0);
    let out: M5<S> = std::array::from_fn(|i| {
        std::array::from_fn(|j| y[i][j] + sixth * (k1[i][j] + two * k2[i][j] + two * k3[i][j] + k4[i][j]))
    });

    let mut s = NavState::identity();
    for i in 0..3 {
        for j in 0..3 {
            s.attitude.0[i][j] = out[i][j];
        }
        s.velocity[i] = out[i][3];
        s.position[i] = out[i][4];
    }
    s
}

/// Gram-Schmidt re-orthonormalization of the rows of `r`.
pub fn orthonormalize(r: &Mat3<f64>) -> Mat3<f64> {
    let r0 = r.row(0).scale(1.0 / r.row(0).norm());
    let r1 = r.row(1) - r0.scale(r0.dot(&r.row(1)));
    let r1 = r1.scale(1.0 / r1.norm());
    let r2 = r0.cross(&r1);
    Mat3([r0.0, r1.0, r2.0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Closed,
    Rk4,
    Euler,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Rk4 => "rk4",
            Method::Euler => "euler",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "closed" => Ok(Method::Closed),
            "rk4" => Ok(Method::Rk4),
            "euler" => Ok(Method::Euler),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IntegrateOptions {
    /// Re-orthonormalize the attitude after every RK4/Euler step.
    pub project: bool,
}

/// Integrates the samples with `method`, splitting each sample interval into
/// `substeps` equal steps. One state is emitted per sample boundary.
pub fn integrate(
    x0: &NavState<f64>,
    samples: &[ImuSample],
    grav: &GravityModel<f64>,
    method: Method,
    substeps: usize,
) -> Result<Trajectory> {
    integrate_with(x0, samples, grav, method, substeps, IntegrateOptions::default())
}

pub fn integrate_with(
    x0: &NavState<f64>,
    samples: &[ImuSample],
    grav: &GravityModel<f64>,
    method: Method,
    substeps: usize,
    opts: IntegrateOptions,
) -> Result<Trajectory> {
    if substeps == 0 {
        return Err(Error::InvalidSubsteps);
    }
    if !x0.is_finite() || !grav.accel.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    let mut out = Vec::with_capacity(samples.len() + 1);
    out.push(TimedState { t: 0.0, state: *x0 });
    let mut x = *x0;
    let mut t = 0.0;
    for s in samples {
        if !(s.dt.is_finite() && s.dt > 0.0) {
            return Err(Error::InvalidStep(s.dt));
        }
        if !s.input.is_finite() {
            return Err(Error::NonFinite("inputs"));
        }
        let h = s.dt / substeps as f64;
        for _ in 0..substeps {
            x = match method {
                Method::Closed => propagate(&x, &s.input, grav, h)?,
                Method::Rk4 => rk4_step(&x, &s.input, grav, h),
                Method::Euler => euler_step(&x, &s.input, grav, h),
            };
            if opts.project && method != Method::Closed {
                x.attitude = orthonormalize(&x.attitude);
            }
        }
        t += s.dt;
        out.push(TimedState { t, state: x });
    }
    Ok(out)
}

/// Euclidean distance between positions.
pub fn position_error(reference: &NavState<f64>, x: &NavState<f64>) -> f64 {
    (x.position - reference.position).norm()
}

/// Angle of `R_refᵀ R`, in radians.
pub fn attitude_error(reference: &NavState<f64>, x: &NavState<f64>) -> f64 {
    so3::rotation_angle(&(reference.attitude.transpose() * x.attitude))
}

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(h, e)| (h.ln(), e.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Mat5, Vec3};
    use crate::propagator::{build_generators, STANDARD_GRAVITY};
    use crate::so3::{exp_so3, orthogonality_error};
    use std::f64::consts::PI;

    fn circle() -> (NavState, ImuInput, GravityModel) {
        (
            NavState::new(Mat3::identity(), Vec3::new(1.0, 0.0, 0.0), Vec3::zeros()),
            ImuInput::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, STANDARD_GRAVITY)),
            GravityModel::default(),
        )
    }

    fn run(method: Method, h: f64, duration: f64) -> NavState {
        let (x0, u, grav) = circle();
        let n = (duration / h).round() as usize;
        let samples = vec![ImuSample { input: u, dt: duration / n as f64 }; n];
        integrate(&x0, &samples, &grav, method, 1).unwrap().last().unwrap().state
    }

    #[test]
    fn rhs_examples() {
        let g = GravityModel::new(Vec3::new(0.0, 0.0, 9.81));
        let d = kinematics_rhs(&NavState::identity(), &ImuInput::zero(), &g);
        assert_eq!(NavState::from_flat(&d), NavState::new(Mat3::zeros(), Vec3::new(0.0, 0.0, 9.81), Vec3::zeros()));
        let u = ImuInput::new(Vec3::new(0.0, 0.0, 1.0), Vec3::zeros());
        let d = NavState::from_flat(&kinematics_rhs(&NavState::identity(), &u, &g));
        assert_eq!(d.attitude, so3::hat(&Vec3::new(0.0, 0.0, 1.0)));
    }

    #[test]
    fn rhs_matches_generator_blocks() {
        let x = NavState::new(exp_so3(&Vec3::new(0.4, -0.2, 1.0)), Vec3::new(1.0, 2.0, 3.0), Vec3::new(-1.0, 0.5, 2.0));
        let u = ImuInput::new(Vec3::new(0.3, 0.1, -0.2), Vec3::new(0.5, -1.0, 9.0));
        let grav = GravityModel::default();
        let (m, n) = build_generators(&u, &grav);
        let xm = x.to_matrix();
        let dense: Mat5 = m.to_matrix() * xm + xm * n.to_matrix();
        let d = NavState::from_flat(&kinematics_rhs(&x, &u, &grav));
        assert!((d.to_matrix() - NavState::from_matrix(&dense).to_matrix()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rk4_exact_for_free_fall() {
        let x0 = NavState::new(Mat3::identity(), Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.5, 0.0, 10.0));
        let grav = GravityModel::default();
        let rk = rk4_step(&x0, &ImuInput::zero(), &grav, 0.7);
        let exact = propagate(&x0, &ImuInput::zero(), &grav, 0.7).unwrap();
        assert!((rk.to_matrix() - exact.to_matrix()).frobenius_norm() < 1e-13);
    }

    #[test]
    fn rk4_one_step_error_band() {
        let (x0, u, grav) = circle();
        let rk = rk4_step(&x0, &u, &grav, 0.1);
        let exact = propagate(&x0, &u, &grav, 0.1).unwrap();
        let err = position_error(&exact, &rk);
        // The ODE is affine, so RK4 reproduces the degree-4 Taylor flow and the
        // leading position miss is the h^5 term of sin h (y is off by h^6/720).
        let h: f64 = 0.1;
        let predicted = ((h.powi(5) / 120.0 - h.powi(7) / 5040.0).powi(2) + (h.powi(6) / 720.0).powi(2)).sqrt();
        assert!((err - predicted).abs() < 1e-3 * predicted, "err={err} predicted={predicted}");
    }

    #[test]
    fn rk4_local_and_global_order() {
        let (x0, u, grav) = circle();
        let local = |h: f64| {
            let exact = propagate(&x0, &u, &grav, h).unwrap();
            (rk4_step(&x0, &u, &grav, h).to_matrix() - exact.to_matrix()).frobenius_norm()
        };
        let ratio = local(0.2) / local(0.1);
        assert!((25.0..40.0).contains(&ratio), "local ratio {ratio}");

        let exact = propagate(&x0, &u, &grav, 2.0 * PI).unwrap();
        let global = |h| position_error(&exact, &run(Method::Rk4, h, 2.0 * PI));
        let ratio = global(2.0 * PI / 40.0) / global(2.0 * PI / 80.0);
        assert!((12.0..20.0).contains(&ratio), "global ratio {ratio}");
    }

    #[test]
    fn convergence_slopes() {
        let (x0, u, grav) = circle();
        let exact = propagate(&x0, &u, &grav, 2.0 * PI).unwrap();
        let hs = [0.2, 0.1, 0.05, 0.025, 0.0125];
        let sweep =
            |m| -> Vec<(f64, f64)> { hs.iter().map(|&h| (h, position_error(&exact, &run(m, h, 2.0 * PI)))).collect() };
        let rk = sweep(Method::Rk4);
        let slope = loglog_slope(&rk);
        assert!((3.7..=4.3).contains(&slope), "rk4 slope {slope}");
        assert!(rk.last().unwrap().1 < 1e-8);
        let eu = loglog_slope(&sweep(Method::Euler));
        assert!((0.8..=1.2).contains(&eu), "euler slope {eu}");
    }

    #[test]
    fn closed_ignores_substeps() {
        let (x0, u, grav) = circle();
        let samples = vec![ImuSample { input: u, dt: 0.25 }; 8];
        let a = integrate(&x0, &samples, &grav, Method::Closed, 1).unwrap();
        let b = integrate(&x0, &samples, &grav, Method::Closed, 7).unwrap();
        let (a, b) = (a.last().unwrap().state, b.last().unwrap().state);
        assert!((a.to_matrix() - b.to_matrix()).frobenius_norm() < 1e-10);
    }

    #[test]
    fn rk4_drift_exceeds_closed() {
        let (x0, u, grav) = circle();
        let n = 63;
        let samples = vec![ImuSample { input: u, dt: 2.0 * PI / n as f64 }; n];
        let rk = integrate(&x0, &samples, &grav, Method::Rk4, 1).unwrap();
        let cf = integrate(&x0, &samples, &grav, Method::Closed, 1).unwrap();
        let rk_drift = orthogonality_error(&rk.last().unwrap().state.attitude);
        let cf_drift = orthogonality_error(&cf.last().unwrap().state.attitude);
        assert!(cf_drift <= 1e-12);
        assert!(rk_drift > cf_drift);

        let projected =
            integrate_with(&x0, &samples, &grav, Method::Rk4, 1, IntegrateOptions { project: true }).unwrap();
        assert!(orthogonality_error(&projected.last().unwrap().state.attitude) < 1e-14);
    }

    #[test]
    fn matrix_rk4_agrees_with_flat_rk4() {
        let x = NavState::new(exp_so3(&Vec3::new(0.4, -0.2, 1.0)), Vec3::new(1.0, 2.0, 3.0), Vec3::new(-1.0, 0.5, 2.0));
        let u = ImuInput::new(Vec3::new(0.3, 0.1, -0.2), Vec3::new(0.5, -1.0, 9.0));
        let grav = GravityModel::default();
        let a = rk4_step(&x, &u, &grav, 0.05);
        let b = rk4_matrix_step(&x, &u, &grav, 0.05);
        assert!((a.to_matrix() - b.to_matrix()).frobenius_norm() < 1e-13);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("RK4".parse::<Method>().unwrap(), Method::Rk4);
        assert_eq!(" closed ".parse::<Method>().unwrap(), Method::Closed);
        assert!(matches!("rk45".parse::<Method>(), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn integrate_rejects_bad_arguments() {
        let (x0, u, grav) = circle();
        let samples = [ImuSample { input: u, dt: 0.1 }];
        assert!(matches!(integrate(&x0, &samples, &grav, Method::Rk4, 0), Err(Error::InvalidSubsteps)));
        let bad = [ImuSample { input: u, dt: -0.1 }];
        assert!(matches!(integrate(&x0, &bad, &grav, Method::Rk4, 1), Err(Error::InvalidStep(_))));
    }
}

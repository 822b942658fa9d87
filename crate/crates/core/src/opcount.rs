//! Floating-point operation counts for a single propagation step.
//!
//! The propagators are generic over [`Real`], so counting is done by running
//! the exact same code on [`Counted`], a transparent `f64` wrapper that bumps
//! a thread-local tally on every arithmetic operation. No common
//! subexpression elimination or constant folding is applied: the count is
//! what the straight-line code executes.
//!
//! Negation, comparisons and constant conversions are free. `sqrt`, `sin`
//! and `cos` count one each in their own category.

use std::cell::Cell;
use std::fmt::{self, Write as _};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::integrators::{rk4_matrix_step, rk4_step};
use crate::linalg::{Mat3, Vec3};
use crate::propagator::{propagate_unchecked, GravityModel, ImuInput, NavState};
use crate::scalar::Real;
use crate::so3::{exp_so3, AngleBranch};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    add: u64,
    sub: u64,
    mul: u64,
    div: u64,
    sqrt: u64,
    trig: u64,
}

thread_local! {
    static TALLY: Cell<Tally> = const { Cell::new(Tally { add: 0, sub: 0, mul: 0, div: 0, sqrt: 0, trig: 0 }) };
}

fn bump(f: impl FnOnce(&mut Tally)) {
    TALLY.with(|t| {
        let mut v = t.get();
        f(&mut v);
        t.set(v);
    });
}

/// `f64` that records every arithmetic operation performed on it.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Counted(pub f64);

impl Add for Counted {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        bump(|t| t.add += 1);
        Counted(self.0 + rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for Counted {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        bump(|t| t.sub += 1);
        Counted(self.0 - rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Counted {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        bump(|t| t.mul += 1);
        Counted(self.0 * rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Counted {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        bump(|t| t.div += 1);
        Counted(self.0 / rhs.0)
    }
}

impl Neg for Counted {
    type Output = Self;
    fn neg(self) -> Self {
        Counted(-self.0)
    }
}

impl Real for Counted {
    fn from_f64(value: f64) -> Self {
        Counted(value)
    }

    fn to_f64(self) -> f64 {
        self.0
    }

    fn sqrt(self) -> Self {
        bump(|t| t.sqrt += 1);
        Counted(self.0.sqrt())
    }

    fn sin(self) -> Self {
        bump(|t| t.trig += 1);
        Counted(self.0.sin())
    }

    fn cos(self) -> Self {
        bump(|t| t.trig += 1);
        Counted(self.0.cos())
    }
}

/// Runs `f` with a fresh tally and returns its result with the operation
/// counts. Sessions nest: an enclosing session's tally is restored after.
pub fn count_ops<T>(label: &str, f: impl FnOnce() -> T) -> (T, OpCountReport) {
    let saved = TALLY.with(|t| t.replace(Tally::default()));
    let out = f();
    let tally = TALLY.with(|t| t.replace(saved));
    let report = OpCountReport {
        method: label.to_string(),
        add: tally.add,
        sub: tally.sub,
        mul: tally.mul,
        div: tally.div,
        sqrt: tally.sqrt,
        trig: tally.trig,
    };
    (out, report)
}

/// Operation counts for one step of one method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpCountReport {
    pub method: String,
    pub add: u64,
    pub sub: u64,
    pub mul: u64,
    pub div: u64,
    pub sqrt: u64,
    pub trig: u64,
}

impl OpCountReport {
    pub fn total(&self) -> u64 {
        self.total_no_transcendental() + self.sqrt + self.trig
    }

    pub fn total_no_transcendental(&self) -> u64 {
        self.add + self.sub + self.mul + self.div
    }
}

/// Step methods that can be counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountedMethod {
    /// Closed-form mixed-invariant step, general-angle branch.
    Closed,
    /// Closed-form step on the small-angle series branch.
    ClosedSeries,
    /// Classical RK4 on the 15-element state.
    Rk4,
    /// Classical RK4 on every entry of the 5x5 group element.
    Rk4Matrix,
}

impl CountedMethod {
    pub fn label(self) -> &'static str {
        match self {
            CountedMethod::Closed => "closed",
            CountedMethod::ClosedSeries => "closed-series",
            CountedMethod::Rk4 => "rk4",
            CountedMethod::Rk4Matrix => "rk4-matrix",
        }
    }
}

impl fmt::Display for CountedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn counted_state(x: &NavState<f64>) -> NavState<Counted> {
    NavState::new(Mat3::from_f64(x.attitude.0), Vec3::from_f64(x.velocity.0), Vec3::from_f64(x.position.0))
}

/// Counts the arithmetic of one step of `method` from a generic initial
/// state. The closed form is pinned to one angle branch, so the count does
/// not depend on the input values.
pub fn count_step(method: CountedMethod, u: &ImuInput<f64>, grav: &GravityModel<f64>, h: f64) -> OpCountReport {
    let x0 = NavState::new(exp_so3(&Vec3::new(0.1, -0.2, 0.3)), Vec3::new(1.0, 0.5, -0.25), Vec3::new(3.0, -2.0, 1.0));
    count_step_from(method, &x0, u, grav, h).1
}

/// As [`count_step`], from a chosen initial state, also returning the
/// propagated state.
pub fn count_step_from(
    method: CountedMethod,
    x0: &NavState<f64>,
    u: &ImuInput<f64>,
    grav: &GravityModel<f64>,
    h: f64,
) -> (NavState<f64>, OpCountReport) {
    let x = counted_state(x0);
    let u = ImuInput::new(Vec3::from_f64(u.gyro.0), Vec3::from_f64(u.accel.0));
    let g = GravityModel::new(Vec3::from_f64(grav.accel.0));
    let h = Counted(h);
    let (out, report) = count_ops(method.label(), || match method {
        CountedMethod::Closed => propagate_unchecked(&x, &u, &g, h, AngleBranch::Closed),
        CountedMethod::ClosedSeries => propagate_unchecked(&x, &u, &g, h, AngleBranch::Series),
        CountedMethod::Rk4 => rk4_step(&x, &u, &g, h),
        CountedMethod::Rk4Matrix => rk4_matrix_step(&x, &u, &g, h),
    });
    (out.to_f64(), report)
}

/// `numerator.total / denominator.total`.
pub fn total_ratio(numerator: &OpCountReport, denominator: &OpCountReport) -> f64 {
    numerator.total() as f64 / denominator.total() as f64
}

pub const CSV_HEADER: &str = "method,add,sub,mul,div,sqrt,trig,total,total_no_transcendental";

/// CSV with one row per report. When there is more than one report a ratio
/// row `<name>/<first>` is appended for each later report, filled in the two
/// total columns only.
pub fn report_csv(reports: &[OpCountReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.method,
            r.add,
            r.sub,
            r.mul,
            r.div,
            r.sqrt,
            r.trig,
            r.total(),
            r.total_no_transcendental()
        );
    }
    if let Some((base, rest)) = reports.split_first() {
        for r in rest {
            let plain = r.total_no_transcendental() as f64 / base.total_no_transcendental() as f64;
            let _ = writeln!(out, "{}/{},,,,,,,{:.16e},{:.16e}", r.method, base.method, total_ratio(r, base), plain);
        }
    }
    out
}

/// Human-readable table of the same content as [`report_csv`].
pub fn report_table(reports: &[OpCountReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>7} {:>9}",
        "method", "add", "sub", "mul", "div", "sqrt", "trig", "total", "no-trans"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<16} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>7} {:>9}",
            r.method,
            r.add,
            r.sub,
            r.mul,
            r.div,
            r.sqrt,
            r.trig,
            r.total(),
            r.total_no_transcendental()
        );
    }
    if let Some((base, rest)) = reports.split_first() {
        for r in rest {
            let _ = writeln!(out, "{}/{} total ratio: {:.2}", r.method, base.method, total_ratio(r, base));
        }
    }
    out
}

//! Commands behind the `sins` binary. Each command writes CSV (and optionally
//! an SVG chart) and returns a short summary for the terminal.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use sins_core::integrators::{integrate, Method};
use sins_core::opcount::{count_step, report_csv, total_ratio, CountedMethod, OpCountReport};
use sins_core::scenario::{error_sweep, load_scenario, SweepPoint};
use sins_core::{GravityModel, ImuInput, TimedState, Vec3};

pub mod svg;

/// Ratio reported for the operation-count comparison in the literature.
pub const REFERENCE_RATIO: f64 = 12.0;

pub const TRAJECTORY_HEADER: &str = "t,px,py,pz,vx,vy,vz,r11,r12,r13,r21,r22,r23,r31,r32,r33";
pub const SWEEP_HEADER: &str = "h,pos_err,att_err";

/// 17 significant digits, so values survive a text round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_method(name: &str) -> Result<Method> {
    Ok(name.parse::<Method>()?)
}

/// Comma-separated positive step sizes.
pub fn parse_h_list(text: &str) -> Result<Vec<f64>> {
    let hs = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            let h: f64 = s.parse().with_context(|| format!("step size `{s}` is not a number"))?;
            if !(h.is_finite() && h > 0.0) {
                bail!("step size `{s}` must be positive");
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    if hs.len() < 2 {
        bail!("--h-list needs at least two step sizes");
    }
    Ok(hs)
}

pub fn trajectory_csv(traj: &[TimedState]) -> String {
    let mut out = String::with_capacity(64 + traj.len() * 16 * 24);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for ts in traj {
        let x = &ts.state;
        let fields = std::iter::once(ts.t)
            .chain(x.position.0)
            .chain(x.velocity.0)
            .chain(x.attitude.0.into_iter().flatten())
            .map(fmt_f64)
            .collect::<Vec<_>>();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(out, "{},{},{}", fmt_f64(p.h), fmt_f64(p.pos_err), fmt_f64(p.att_err));
    }
    out
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_svg(path: Option<&Path>, text: impl FnOnce() -> String) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text()).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(()),
    }
}

pub struct PropagateSummary {
    pub trajectory: Vec<TimedState>,
    pub csv: String,
}

/// Integrates a scenario file with `method` and writes the trajectory.
pub fn cmd_propagate(
    scenario: &Path,
    method: Method,
    substeps: usize,
    out: Option<&Path>,
    svg_out: Option<&Path>,
) -> Result<PropagateSummary> {
    let s = load_scenario(scenario).with_context(|| format!("scenario {}", scenario.display()))?;
    let trajectory = integrate(&s.initial, &s.imu_samples(), &s.gravity, method, substeps)?;
    let csv = trajectory_csv(&trajectory);
    write_output(out, &csv)?;
    write_svg(svg_out, || {
        let xy: Vec<(f64, f64)> = trajectory.iter().map(|t| (t.state.position[0], t.state.position[1])).collect();
        svg::line_chart(
            &format!("{} ({})", s.name, method),
            "x [m]",
            "y [m]",
            false,
            &[svg::Series { label: method.name().into(), points: xy }],
        )
    })?;
    Ok(PropagateSummary { trajectory, csv })
}

/// Final-time error of `method` for each step size.
pub fn cmd_sweep(
    scenario: &Path,
    method: Method,
    hs: &[f64],
    out: Option<&Path>,
    svg_out: Option<&Path>,
) -> Result<Vec<SweepPoint>> {
    let s = load_scenario(scenario).with_context(|| format!("scenario {}", scenario.display()))?;
    let points = error_sweep(&s, method, hs)?;
    write_output(out, &sweep_csv(&points))?;
    write_svg(svg_out, || {
        let series = |label: &str, f: fn(&SweepPoint) -> f64| svg::Series {
            label: label.into(),
            points: points.iter().map(|p| (p.h, f(p))).collect(),
        };
        svg::line_chart(
            &format!("{} error vs step size ({})", s.name, method),
            "h [s]",
            "final error",
            true,
            &[series("position [m]", |p| p.pos_err), series("attitude [rad]", |p| p.att_err)],
        )
    })?;
    Ok(points)
}

pub struct FlopsSummary {
    pub reports: Vec<OpCountReport>,
    pub csv: String,
    /// `rk4 / closed` total operation ratio.
    pub ratio: f64,
}

/// One step of the level 1 m/s, 1 m turn at h = 0.1 s.
pub fn default_flops_case() -> (ImuInput, GravityModel, f64) {
    let grav = GravityModel::default();
    let u = ImuInput::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 0.0) - grav.accel);
    (u, grav, 0.1)
}

/// Counts one step of the closed form, the flat RK4 and the matrix RK4.
pub fn flops_reports() -> Vec<OpCountReport> {
    let (u, grav, h) = default_flops_case();
    [CountedMethod::Closed, CountedMethod::Rk4, CountedMethod::Rk4Matrix]
        .into_iter()
        .map(|m| count_step(m, &u, &grav, h))
        .collect()
}

pub fn cmd_flops(out: Option<&Path>, svg_out: Option<&Path>) -> Result<FlopsSummary> {
    let reports = flops_reports();
    let csv = report_csv(&reports);
    let ratio = total_ratio(&reports[1], &reports[0]);
    write_output(out, &csv)?;
    write_svg(svg_out, || {
        let bars: Vec<(String, f64)> = reports.iter().map(|r| (r.method.clone(), r.total() as f64)).collect();
        svg::bar_chart("operations per step", "operations", &bars)
    })?;
    Ok(FlopsSummary { reports, csv, ratio })
}

//! Test trajectories with known solutions, scenario files and IMU CSV input.
//!
//! # Scenario file
//!
//! A flat `key = value` text file; `#` starts a comment. Vectors are three
//! (or four, for the quaternion) numbers separated by commas or spaces.
//!
//! ```text
//! name     = circle
//! duration = 6.283185307179586   # s
//! dt       = 0.1                 # s
//! gravity  = 0, 0, -9.80665      # world frame, m/s^2
//! attitude = 1, 0, 0, 0          # body-to-world quaternion w, x, y, z
//! velocity = 0, 0, 0             # m/s (not allowed for `circle`)
//! position = 0, 0, 0             # m
//! input    = circle              # constant | circle | freefall | csv
//! speed    = 1                   # circle: m/s
//! radius   = 1                   # circle: m
//! omega    = 0, 0, 0             # constant: body rad/s
//! accel    = 0, 0, 0             # constant: body m/s^2
//! csv      = imu.csv             # csv: path relative to the scenario file
//! ```
//!
//! # IMU CSV
//!
//! Header `t,wx,wy,wz,ax,ay,az`, SI units, strictly increasing `t`. Row `i`
//! is held from `t_i` to `t_{i+1}`, so `n` rows give `n - 1` samples.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::integrators::{attitude_error, integrate, position_error, Method};
use crate::linalg::{Mat3, Vec3};
use crate::propagator::{propagate, GravityModel, ImuInput, ImuSample, NavState};
use crate::so3::{rotation_from_quaternion, rotation_z};

pub const IMU_CSV_HEADER: &str = "t,wx,wy,wz,ax,ay,az";

/// How body-frame inputs are generated.
#[derive(Clone, Debug, PartialEq)]
pub enum InputModel {
    /// Fixed `(ω, a)` for the whole run.
    Constant(ImuInput),
    /// Level coordinated turn in the world x-y plane, counter-clockwise seen
    /// from +z, starting along +x.
    Circle { speed: f64, radius: f64 },
    /// No rotation and no body acceleration.
    FreeFall,
    /// Samples read from an IMU CSV file.
    Csv { path: PathBuf, samples: Vec<ImuSample> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub initial: NavState,
    pub gravity: GravityModel,
    pub input: InputModel,
    pub duration: f64,
    pub dt: f64,
}

impl Scenario {
    /// The 1 m/s, 1 m radius circle with z-up gravity and `R₀ = I`.
    pub fn circle(speed: f64, radius: f64, duration: f64, dt: f64) -> Result<Self> {
        let s = Self {
            name: "circle".into(),
            initial: NavState::new(Mat3::identity(), Vec3::new(speed, 0.0, 0.0), Vec3::zeros()),
            gravity: GravityModel::default(),
            input: InputModel::Circle { speed, radius },
            duration,
            dt,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScenario(m.to_string()));
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return bad("duration must be positive");
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !self.initial.is_finite() || !self.gravity.accel.is_finite() {
            return Err(Error::NonFinite("scenario"));
        }
        match &self.input {
            InputModel::Circle { speed, radius } => {
                if !(speed.is_finite() && *speed > 0.0 && radius.is_finite() && *radius > 0.0) {
                    return bad("circle needs positive speed and radius");
                }
                if self.gravity.accel[0] != 0.0 || self.gravity.accel[1] != 0.0 {
                    return bad("circle requires gravity along world z");
                }
            }
            InputModel::Constant(u) if !u.is_finite() => return Err(Error::NonFinite("scenario inputs")),
            InputModel::Csv { samples, .. } if samples.is_empty() => return bad("IMU CSV has no samples"),
            _ => {}
        }
        Ok(())
    }

    /// Whether [`Scenario::analytic_state`] is available.
    pub fn has_analytic_state(&self) -> bool {
        !matches!(self.input, InputModel::Csv { .. })
    }

    /// Ground-truth state at time `t`.
    ///
    /// Circle: `R = Rz(ψ̇t) R₀`, `v = s (cos ψ̇t, sin ψ̇t, 0)`,
    /// `p = p₀ + r (sin ψ̇t, 1 - cos ψ̇t, 0)` with `ψ̇ = s / r`. Free fall is the
    /// usual quadratic. A constant-input run has no simpler form than the
    /// exact propagator itself, which is what is returned.
    pub fn analytic_state(&self, t: f64) -> Result<NavState> {
        if !(t.is_finite() && (0.0..=self.duration).contains(&t)) {
            return Err(Error::InvalidScenario(format!("time {t} outside [0, {}]", self.duration)));
        }
        let x0 = &self.initial;
        match &self.input {
            InputModel::Circle { speed, radius } => {
                let rate = speed / radius;
                let psi = rate * t;
                let (s, c) = psi.sin_cos();
                Ok(NavState::new(
                    rotation_z(psi) * x0.attitude,
                    Vec3::new(speed * c, speed * s, 0.0),
                    x0.position + Vec3::new(radius * s, radius * (1.0 - c), 0.0),
                ))
            }
            InputModel::FreeFall => {
                let g = self.gravity.accel;
                Ok(NavState::new(
                    x0.attitude,
                    x0.velocity + g.scale(t),
                    x0.position + x0.velocity.scale(t) + g.scale(0.5 * t * t),
                ))
            }
            InputModel::Constant(u) => propagate(x0, u, &self.gravity, t),
            InputModel::Csv { .. } => Err(Error::InvalidScenario("recorded IMU input has no analytic state".into())),
        }
    }

    /// Body inputs of an analytic model; `None` for recorded input.
    fn model_input(&self) -> Option<ImuInput> {
        let r0t = self.initial.attitude.transpose();
        match &self.input {
            InputModel::Circle { speed, radius } => {
                // Body rate ψ̇ R₀ᵀ ẑ. In the turning frame the world
                // acceleration is (0, s²/r, 0) and gravity is unchanged,
                // so a = R₀ᵀ((0, s²/r, 0) - a_g) is constant.
                let rate = speed / radius;
                let centripetal = Vec3::new(0.0, speed * speed / radius, 0.0);
                Some(ImuInput::new(
                    r0t.mul_vec(&Vec3::new(0.0, 0.0, rate)),
                    r0t.mul_vec(&(centripetal - self.gravity.accel)),
                ))
            }
            InputModel::FreeFall => Some(ImuInput::zero()),
            InputModel::Constant(u) => Some(*u),
            InputModel::Csv { .. } => None,
        }
    }

    /// IMU samples covering `[0, duration]` at the scenario's `dt`.
    pub fn imu_samples(&self) -> Vec<ImuSample> {
        match &self.input {
            InputModel::Csv { samples, .. } => samples.clone(),
            _ => self.samples_with_step(self.dt),
        }
    }

    /// Samples with step `h`. Analytic models are resampled, ending with a
    /// shorter step if `h` does not divide the duration. Recorded input keeps
    /// its rows and splits each interval into `ceil(dt / h)` equal pieces.
    pub fn samples_with_step(&self, h: f64) -> Vec<ImuSample> {
        match (&self.input, self.model_input()) {
            (InputModel::Csv { samples, .. }, _) => samples
                .iter()
                .flat_map(|s| {
                    let n = (s.dt / h).ceil().max(1.0) as usize;
                    std::iter::repeat_n(ImuSample { input: s.input, dt: s.dt / n as f64 }, n)
                })
                .collect(),
            (_, Some(input)) => uniform_steps(self.duration, h).into_iter().map(|dt| ImuSample { input, dt }).collect(),
            (_, None) => Vec::new(),
        }
    }
}

/// Step lengths covering `duration` with steps of `h`, the last one possibly
/// shorter. Boundaries are computed as `min((i + 1) h, duration)` so that
/// they do not drift.
fn uniform_steps(duration: f64, h: f64) -> Vec<f64> {
    let n = ((duration / h) - 1e-9).ceil().max(1.0) as usize;
    (0..n)
        .map(|i| {
            let start = i as f64 * h;
            let end = if i + 1 == n { duration } else { ((i + 1) as f64 * h).min(duration) };
            end - start
        })
        .filter(|dt| *dt > 0.0)
        .collect()
}

/// Scenario file contents before any referenced CSV is loaded.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub duration: Option<f64>,
    pub dt: Option<f64>,
    pub gravity: Vec3,
    pub attitude: [f64; 4],
    pub velocity: Option<Vec3>,
    pub position: Vec3,
    pub input: InputSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputSpec {
    Constant { omega: Vec3, accel: Vec3 },
    Circle { speed: f64, radius: f64 },
    FreeFall,
    Csv(PathBuf),
}

const KEYS: &[&str] = &[
    "name", "duration", "dt", "gravity", "attitude", "velocity", "position", "input", "speed", "radius", "omega",
    "accel", "csv",
];

fn parse_numbers<const N: usize>(value: &str, line: usize, key: &str) -> Result<[f64; N]> {
    let err = |message: String| Error::Scenario { line, message };
    let parts: Vec<&str> = value.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
    if parts.len() != N {
        return Err(err(format!("`{key}` needs {N} numbers, got {}", parts.len())));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(&parts) {
        let v: f64 = p.parse().map_err(|_| err(format!("`{key}`: `{p}` is not a number")))?;
        if !v.is_finite() {
            return Err(err(format!("`{key}`: non-finite value")));
        }
        *slot = v;
    }
    Ok(out)
}

/// Parses a scenario file. Referenced CSV paths are returned unresolved.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut entries: Vec<(&str, &str, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Scenario { line, message: "expected `key = value`".into() })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::Scenario { line, message: format!("unknown key `{key}`") });
        }
        if entries.iter().any(|(k, _, _)| *k == key) {
            return Err(Error::Scenario { line, message: format!("duplicate key `{key}`") });
        }
        if value.is_empty() {
            return Err(Error::Scenario { line, message: format!("`{key}` has no value") });
        }
        entries.push((key, value, line));
    }
    let get = |key: &str| entries.iter().find(|(k, _, _)| *k == key).map(|&(_, v, l)| (v, l));
    let last_line = text.lines().count().max(1);
    let missing = |key: &str| Error::Scenario { line: last_line, message: format!("missing `{key}`") };
    let scalar = |key: &str| -> Result<Option<f64>> {
        get(key).map(|(v, l)| parse_numbers::<1>(v, l, key).map(|[x]| x)).transpose()
    };
    let vec3 = |key: &str| -> Result<Option<Vec3>> {
        get(key).map(|(v, l)| parse_numbers::<3>(v, l, key).map(Vec3)).transpose()
    };

    let (kind, kind_line) = get("input").ok_or_else(|| missing("input"))?;
    let input = match kind {
        "constant" => InputSpec::Constant {
            omega: vec3("omega")?.ok_or_else(|| missing("omega"))?,
            accel: vec3("accel")?.ok_or_else(|| missing("accel"))?,
        },
        "circle" => InputSpec::Circle {
            speed: scalar("speed")?.ok_or_else(|| missing("speed"))?,
            radius: scalar("radius")?.ok_or_else(|| missing("radius"))?,
        },
        "freefall" => InputSpec::FreeFall,
        "csv" => InputSpec::Csv(PathBuf::from(get("csv").ok_or_else(|| missing("csv"))?.0)),
        other => {
            return Err(Error::Scenario {
                line: kind_line,
                message: format!("unknown input model `{other}` (expected constant, circle, freefall or csv)"),
            })
        }
    };
    // Parameters belonging to another model are almost certainly a mistake.
    let allowed: &[&str] = match input {
        InputSpec::Constant { .. } => &["omega", "accel"],
        InputSpec::Circle { .. } => &["speed", "radius"],
        InputSpec::FreeFall => &[],
        InputSpec::Csv(_) => &["csv"],
    };
    for key in ["speed", "radius", "omega", "accel", "csv"] {
        if let Some((_, line)) = get(key) {
            if !allowed.contains(&key) {
                return Err(Error::Scenario { line, message: format!("`{key}` does not apply to input `{kind}`") });
            }
        }
    }
    if let (InputSpec::Circle { .. }, Some((_, line))) = (&input, get("velocity")) {
        return Err(Error::Scenario { line, message: "`velocity` is implied by the circle model".into() });
    }

    let attitude = get("attitude").map(|(v, l)| parse_numbers::<4>(v, l, "attitude")).transpose()?;
    Ok(ScenarioConfig {
        name: get("name").map(|(v, _)| v.to_string()).unwrap_or_else(|| "scenario".into()),
        duration: scalar("duration")?,
        dt: scalar("dt")?,
        gravity: vec3("gravity")?.unwrap_or(GravityModel::default().accel),
        attitude: attitude.unwrap_or([1.0, 0.0, 0.0, 0.0]),
        velocity: vec3("velocity")?,
        position: vec3("position")?.unwrap_or_else(Vec3::zeros),
        input,
    })
}

/// Parses an IMU CSV into held samples.
pub fn parse_imu_csv(text: &str) -> Result<Vec<ImuSample>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Csv { row: 1, message: "empty file".into() })?;
    let header: String = header.chars().filter(|c| !c.is_whitespace()).collect();
    if header != IMU_CSV_HEADER {
        return Err(Error::Csv { row: 1, message: format!("expected header `{IMU_CSV_HEADER}`") });
    }
    let mut rows: Vec<(f64, ImuInput, usize)> = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(Error::Csv { row, message: format!("expected 7 fields, got {}", fields.len()) });
        }
        let mut v = [0.0; 7];
        for (slot, f) in v.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Csv { row, message: format!("`{f}` is not a finite number") })?;
        }
        if let Some(&(prev, _, _)) = rows.last() {
            if v[0] <= prev {
                return Err(Error::Csv { row, message: "timestamps must be strictly increasing".into() });
            }
        }
        rows.push((v[0], ImuInput::new(Vec3::new(v[1], v[2], v[3]), Vec3::new(v[4], v[5], v[6])), row));
    }
    if rows.len() < 2 {
        return Err(Error::Csv { row: rows.last().map_or(1, |r| r.2), message: "need at least two rows".into() });
    }
    let samples: Vec<ImuSample> = rows.windows(2).map(|w| ImuSample { input: w[0].1, dt: w[1].0 - w[0].0 }).collect();
    if let Some((i, _)) = samples.iter().enumerate().find(|(_, s)| !(s.dt.is_finite() && s.dt > 0.0)) {
        return Err(Error::Csv { row: rows[i + 1].2, message: "time step underflows".into() });
    }
    Ok(samples)
}

impl ScenarioConfig {
    /// Resolves the configuration into a scenario, reading a referenced CSV
    /// relative to `base_dir`.
    pub fn into_scenario(self, base_dir: &Path) -> Result<Scenario> {
        let attitude = rotation_from_quaternion(self.attitude)?;
        let velocity = self.velocity.unwrap_or_else(Vec3::zeros);
        let (input, velocity, duration, dt) = match self.input {
            InputSpec::Csv(rel) => {
                let path = base_dir.join(rel);
                let text = std::fs::read_to_string(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
                let samples = parse_imu_csv(&text)?;
                let duration: f64 = samples.iter().map(|s| s.dt).sum();
                let dt = samples.iter().map(|s| s.dt).fold(f64::INFINITY, f64::min);
                (InputModel::Csv { path, samples }, velocity, duration, dt)
            }
            other => {
                let duration = self.duration.ok_or_else(|| Error::InvalidScenario("missing `duration`".into()))?;
                let dt = self.dt.ok_or_else(|| Error::InvalidScenario("missing `dt`".into()))?;
                let (model, velocity) = match other {
                    InputSpec::Constant { omega, accel } => {
                        (InputModel::Constant(ImuInput::new(omega, accel)), velocity)
                    }
                    InputSpec::Circle { speed, radius } => {
                        (InputModel::Circle { speed, radius }, Vec3::new(speed, 0.0, 0.0))
                    }
                    InputSpec::FreeFall => (InputModel::FreeFall, velocity),
                    InputSpec::Csv(_) => unreachable!("handled above"),
                };
                (model, velocity, duration, dt)
            }
        };
        let scenario = Scenario {
            name: self.name,
            initial: NavState::new(attitude, velocity, self.position),
            gravity: GravityModel::new(self.gravity),
            input,
            duration,
            dt,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Reads and resolves a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_scenario(&text)?.into_scenario(base)
}

/// Final-time error of one step size in a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub h: f64,
    pub pos_err: f64,
    pub att_err: f64,
}

/// Runs `method` at each step size in `hs` and measures the final state
/// against the analytic solution, or for recorded input against the closed
/// form on the original samples.
pub fn error_sweep(scenario: &Scenario, method: Method, hs: &[f64]) -> Result<Vec<SweepPoint>> {
    if hs.len() < 2 {
        return Err(Error::InvalidScenario("a sweep needs at least two step sizes".into()));
    }
    if let Some(&h) = hs.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(Error::InvalidStep(h));
    }
    let reference = if scenario.has_analytic_state() {
        scenario.analytic_state(scenario.duration)?
    } else {
        final_state(&integrate(&scenario.initial, &scenario.imu_samples(), &scenario.gravity, Method::Closed, 1)?)
    };
    hs.iter()
        .map(|&h| {
            let samples = scenario.samples_with_step(h);
            let end = final_state(&integrate(&scenario.initial, &samples, &scenario.gravity, method, 1)?);
            Ok(SweepPoint { h, pos_err: position_error(&reference, &end), att_err: attitude_error(&reference, &end) })
        })
        .collect()
}

fn final_state(traj: &[crate::propagator::TimedState]) -> NavState {
    traj.last().expect("trajectory always holds the initial state").state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::propagate_sequence;
    use crate::so3::rotation_angle;
    use std::f64::consts::PI;

    const CIRCLE: &str = "\
# one lap of the unit circle
name = circle
duration = 6.283185307179586
dt = 0.1
gravity = 0, 0, -9.80665
input = circle
speed = 1
radius = 1
";

    fn circle() -> Scenario {
        Scenario::circle(1.0, 1.0, 2.0 * PI, 0.1).unwrap()
    }

    #[test]
    fn circle_analytic_examples() {
        let s = circle();
        let x = s.analytic_state(0.0).unwrap();
        assert_eq!(x, s.initial);
        let x = s.analytic_state(2.0 * PI).unwrap();
        assert!((x.to_matrix() - s.initial.to_matrix()).frobenius_norm() < 1e-15);
        let x = s.analytic_state(PI / 2.0).unwrap();
        assert!((x.position - Vec3::new(1.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((x.velocity - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn analytic_velocity_is_position_derivative() {
        let s = circle();
        for t in [0.3, 1.7, 4.0] {
            let h = 1e-6;
            let fd =
                (s.analytic_state(t + h).unwrap().position - s.analytic_state(t - h).unwrap().position).scale(0.5 / h);
            assert!((fd - s.analytic_state(t).unwrap().velocity).norm() < 1e-6);
        }
    }

    #[test]
    fn circle_inputs_are_constant() {
        let samples = circle().imu_samples();
        assert_eq!(samples.len(), 63);
        for s in &samples {
            assert_eq!(s.input.gyro, Vec3::new(0.0, 0.0, 1.0));
            assert_eq!(s.input.accel, Vec3::new(0.0, 1.0, 9.80665));
        }
        let total: f64 = samples.iter().map(|s| s.dt).sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn other_models_emit_fixed_inputs() {
        let mut s = circle();
        s.input = InputModel::FreeFall;
        assert!(s.imu_samples().iter().all(|x| x.input == ImuInput::zero()));
        let u = ImuInput::new(Vec3::new(0.1, 0.2, 0.3), Vec3::new(1.0, 2.0, 3.0));
        s.input = InputModel::Constant(u);
        assert!(s.imu_samples().iter().all(|x| x.input == u));
    }

    #[test]
    fn closed_form_tracks_circle_at_every_sample() {
        for dt in [0.1, 0.37, 1.0] {
            let mut s = circle();
            s.dt = dt;
            let traj = propagate_sequence(&s.initial, &s.imu_samples(), &s.gravity).unwrap();
            for ts in &traj {
                let truth = s.analytic_state(ts.t.min(s.duration)).unwrap();
                assert!((ts.state.position - truth.position).norm() < 1e-9);
                let att = rotation_angle(&(truth.attitude.transpose() * ts.state.attitude));
                assert!(att < 1e-10);
            }
        }
    }

    #[test]
    fn tilted_circle_still_exact() {
        let mut s = circle();
        s.initial.attitude = rotation_from_quaternion([0.9, 0.1, -0.3, 0.2]).unwrap();
        let traj = propagate_sequence(&s.initial, &s.imu_samples(), &s.gravity).unwrap();
        let end = traj.last().unwrap();
        let truth = s.analytic_state(s.duration).unwrap();
        assert!((end.state.to_matrix() - truth.to_matrix()).frobenius_norm() < 1e-9);
    }

    #[test]
    fn free_fall_analytic() {
        let mut s = circle();
        s.input = InputModel::FreeFall;
        s.initial.velocity = Vec3::new(1.0, 2.0, 3.0);
        let x = s.analytic_state(2.0).unwrap();
        assert!((x.velocity - Vec3::new(1.0, 2.0, 3.0 - 2.0 * 9.80665)).norm() < 1e-13);
        assert!((x.position - Vec3::new(2.0, 4.0, 6.0 - 2.0 * 9.80665)).norm() < 1e-13);
    }

    #[test]
    fn parse_circle_file() {
        let cfg = parse_scenario(CIRCLE).unwrap();
        assert_eq!(cfg.input, InputSpec::Circle { speed: 1.0, radius: 1.0 });
        let s = cfg.into_scenario(Path::new(".")).unwrap();
        assert_eq!(s, circle());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("input = circle\nspeed = 1\nradius = x\n", 3),
            ("input = circle\nbogus = 1\n", 2),
            ("input = circle\nspeed = 1\nspeed = 2\n", 3),
            ("gravity = 1, 2\ninput = freefall\n", 1),
            ("input = warp\n", 1),
            ("input = freefall\nspeed = 3\n", 2),
            ("input = circle\nspeed = 1\nradius = 1\nvelocity = 1, 0, 0\n", 4),
            ("just text\n", 1),
        ];
        for (text, want) in cases {
            match parse_scenario(text) {
                Err(Error::Scenario { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn invalid_values_rejected() {
        let text = "duration = -1\ndt = 0.1\ninput = freefall\n";
        let err = parse_scenario(text).unwrap().into_scenario(Path::new(".")).unwrap_err();
        assert!(matches!(err, Error::InvalidScenario(_)));
        let text = "duration = 1\ndt = 0.1\ninput = circle\nspeed = 0\nradius = 1\n";
        assert!(parse_scenario(text).unwrap().into_scenario(Path::new(".")).is_err());
        let text = "duration = 1\ndt = 0.1\ninput = circle\nspeed = 1\nradius = 1\ngravity = 1, 0, -9.8\n";
        assert!(parse_scenario(text).unwrap().into_scenario(Path::new(".")).is_err());
    }

    #[test]
    fn csv_parsing() {
        let text = "t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,1,9.8\n0.5,0,0,1,0,1,9.8\n1.5,0,0,0,0,0,0\n";
        let samples = parse_imu_csv(text).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(samples[0].dt, 0.5);
        assert_eq!(samples[1].dt, 1.0);
        assert_eq!(samples[1].input.gyro, Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn csv_errors_carry_row_numbers() {
        let cases = [
            ("t,wx,wy,wz,ax,ay\n", 1),
            ("t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,1\n", 2),
            ("t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,1,0\n1,0,0,x,0,1,0\n", 3),
            ("t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,1,0\n0,0,0,1,0,1,0\n", 3),
            ("t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,1,0\n", 2),
            ("t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,1,0\n1,0,0,1,0,NaN,0\n", 3),
        ];
        for (text, want) in cases {
            match parse_imu_csv(text) {
                Err(Error::Csv { row, .. }) => assert_eq!(row, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn csv_subdivision() {
        let samples = parse_imu_csv("t,wx,wy,wz,ax,ay,az\n0,0,0,1,0,0,0\n1,0,0,1,0,0,0\n1.5,0,0,0,0,0,0\n").unwrap();
        let s = Scenario {
            name: "rec".into(),
            initial: NavState::identity(),
            gravity: GravityModel::default(),
            input: InputModel::Csv { path: "x.csv".into(), samples },
            duration: 1.5,
            dt: 0.5,
        };
        assert!(!s.has_analytic_state());
        assert!(s.analytic_state(0.1).is_err());
        let fine = s.samples_with_step(0.3);
        assert_eq!(fine.len(), 4 + 2);
        let total: f64 = fine.iter().map(|x| x.dt).sum();
        assert!((total - 1.5).abs() < 1e-15);
    }

    #[test]
    fn sweep_orders() {
        let s = circle();
        let hs = [0.2, 0.1, 0.05, 0.025, 0.0125];
        let closed = error_sweep(&s, Method::Closed, &hs).unwrap();
        assert!(closed.iter().all(|p| p.pos_err <= 1e-9 && p.att_err <= 1e-10));
        let rk4 = error_sweep(&s, Method::Rk4, &hs).unwrap();
        let slope = crate::integrators::loglog_slope(&rk4.iter().map(|p| (p.h, p.pos_err)).collect::<Vec<_>>());
        assert!((slope - 4.0).abs() <= 0.3, "slope {slope}");
        let euler = error_sweep(&s, Method::Euler, &hs[1..]).unwrap();
        for w in euler.windows(2) {
            let ratio = w[0].pos_err / w[1].pos_err;
            assert!((1.6..2.4).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn sweep_rejects_bad_step_lists() {
        let s = circle();
        assert!(error_sweep(&s, Method::Rk4, &[0.1]).is_err());
        assert!(matches!(error_sweep(&s, Method::Rk4, &[0.1, -0.1]), Err(Error::InvalidStep(_))));
        assert!(error_sweep(&s, Method::Rk4, &[0.1, f64::NAN]).is_err());
    }

    #[test]
    fn uniform_steps_end_exactly() {
        let steps = uniform_steps(2.0 * PI, 0.2);
        assert_eq!(steps.len(), 32);
        assert!((steps.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        assert_eq!(uniform_steps(1.0, 0.25).len(), 4);
        assert_eq!(uniform_steps(2.0 * PI, 2.0 * PI), vec![2.0 * PI]);
    }
}

//! Fixed-step closed-loop simulation under a saturated PI law, plus the
//! trajectory metrics and the storage-function audit.

use std::f64::consts::PI;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gains::PiGains;
use crate::linalg::{Matrix, Vector};
use crate::plant::{DisturbanceSource, Plant};

pub const DEFAULT_DT: f64 = 1e-3;

/// Magnitude and rate bounds on the applied input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub u_min: Vec<f64>,
    pub u_max: Vec<f64>,
    pub du_min: Vec<f64>,
    pub du_max: Vec<f64>,
}

impl Limits {
    /// Roll angle and load-factor bounds of the UAV benchmark.
    pub fn uav() -> Self {
        Self {
            u_min: vec![-PI / 4.0, -2.1],
            u_max: vec![PI / 4.0, 2.1],
            du_min: vec![-PI / 6.0, -1.0],
            du_max: vec![PI / 6.0, 1.0],
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let lens = [self.u_min.len(), self.u_max.len(), self.du_min.len(), self.du_max.len()];
        if lens.iter().any(|&l| l != m) {
            return Err(Error::Dimension(format!("limits must have {m} entries per bound")));
        }
        for i in 0..m {
            if !(self.u_min[i] < self.u_max[i]) || !(self.du_min[i] < self.du_max[i]) {
                return Err(Error::InvalidArgument(format!("inconsistent limits on input {i}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AntiWindup {
    None,
    /// Stop integrating error components that push a saturated channel further.
    #[default]
    Conditional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub t_end: f64,
    pub dt: f64,
    pub e0: Vector,
    pub limits: Option<Limits>,
    pub anti_windup: AntiWindup,
}

impl SimConfig {
    pub fn new(t_end: f64, e0: Vector) -> Self {
        Self {
            t_end,
            dt: DEFAULT_DT,
            e0,
            limits: None,
            anti_windup: AntiWindup::default(),
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = Some(limits);
        self
    }

    pub fn with_anti_windup(mut self, aw: AntiWindup) -> Self {
        self.anti_windup = aw;
        self
    }
}

/// Uniformly sampled closed-loop log.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub e: Vec<Vector>,
    pub e_dot: Vec<Vector>,
    pub u: Vec<Vector>,
    pub d: Vec<Vector>,
    pub d_dot: Vec<Vector>,
    pub diverged: bool,
    /// Why the run stopped early, if it did.
    pub stop_reason: Option<String>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dt(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }

    /// `s_i = [e'_i; e_i]`.
    pub fn augmented(&self, i: usize) -> Vector {
        let n = self.e[i].len();
        let mut s = Vector::zeros(2 * n);
        s.rows_mut(0, n).copy_from(&self.e_dot[i]);
        s.rows_mut(n, n).copy_from(&self.e[i]);
        s
    }

    fn dims(&self) -> (usize, usize, usize) {
        let n = self.e.first().map_or(0, |v| v.len());
        let m = self.u.first().map_or(0, |v| v.len());
        let l = self.d.first().map_or(0, |v| v.len());
        (n, m, l)
    }

    pub fn csv_header(n: usize, m: usize, l: usize) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        let mut block = |prefix: &str, k: usize| h.extend((1..=k).map(|i| format!("{prefix}_{i}")));
        block("e", n);
        block("edot", n);
        block("u", m);
        block("d", l);
        block("ddot", l);
        h
    }

    /// CSV with header `t,e_1..,edot_1..,u_1..,d_1..,ddot_1..`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let (n, m, l) = self.dims();
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(Self::csv_header(n, m, l))?;
        for i in 0..self.len() {
            let row = std::iter::once(self.times[i])
                .chain(self.e[i].iter().copied())
                .chain(self.e_dot[i].iter().copied())
                .chain(self.u[i].iter().copied())
                .chain(self.d[i].iter().copied())
                .chain(self.d_dot[i].iter().copied())
                .map(|x| x.to_string());
            wr.write_record(row)?;
        }
        wr.flush()
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers().map_err(|e| Error::InvalidArgument(e.to_string()))?.clone();
        let count = |prefix: &str| {
            header
                .iter()
                .filter(|h| h.strip_prefix(prefix).is_some_and(|rest| rest.parse::<usize>().is_ok()))
                .count()
        };
        let (n, m, l) = (count("e_"), count("u_"), count("d_"));
        if count("edot_") != n || count("ddot_") != l {
            return Err(Error::InvalidArgument("trajectory header is inconsistent".into()));
        }
        let expected = Self::csv_header(n, m, l);
        if header.iter().ne(expected.iter().map(String::as_str)) {
            return Err(Error::InvalidArgument(format!(
                "unexpected trajectory header {header:?}"
            )));
        }
        let mut traj = Self::default();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidArgument(format!("bad number {f:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            let mut at = 1;
            let mut take = |k: usize| {
                let v = Vector::from_row_slice(&vals[at..at + k]);
                at += k;
                v
            };
            traj.times.push(vals[0]);
            traj.e.push(take(n));
            traj.e_dot.push(take(n));
            traj.u.push(take(m));
            traj.d.push(take(l));
            traj.d_dot.push(take(l));
        }
        Ok(traj)
    }
}

fn clamp_vec(x: &Vector, lo: &[f64], hi: &[f64]) -> Vector {
    Vector::from_iterator(x.len(), x.iter().enumerate().map(|(i, v)| v.clamp(lo[i], hi[i])))
}

/// Integrates the closed loop with RK4, holding the input over each step.
///
/// The applied input is `trim(0) + u_PI`, where `u_PI = K_P e + K_I z` and
/// `z' = e`. Each step the raw command is rate-limited against the previous
/// applied input and then clamped in magnitude. The very first sample is only
/// magnitude-clamped. A non-finite state or a plant refusal truncates the log
/// and sets `diverged`.
pub fn simulate(
    plant: &dyn Plant,
    gains: &PiGains,
    disturbance: &dyn DisturbanceSource,
    config: &SimConfig,
) -> Result<Trajectory> {
    let (n, m, l) = (plant.state_dim(), plant.input_dim(), plant.disturbance_dim());
    if gains.state_dim() != n || gains.input_dim() != m {
        return Err(Error::Dimension("gains do not match the plant".into()));
    }
    if disturbance.dim() != l {
        return Err(Error::Dimension(format!(
            "disturbance has dimension {}, plant expects {l}",
            disturbance.dim()
        )));
    }
    if !(config.dt > 0.0 && config.dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {}",
            config.dt
        )));
    }
    if !(config.t_end >= 0.0 && config.t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "t_end must be non-negative, got {}",
            config.t_end
        )));
    }
    if config.e0.len() != n {
        return Err(Error::Dimension(format!(
            "e0 has length {}, expected {n}",
            config.e0.len()
        )));
    }
    if config.e0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(lim) = &config.limits {
        lim.validate(m)?;
    }

    let dt = config.dt;
    let steps = (config.t_end / dt).round() as usize;
    let gamma = plant.disturbance_matrix();
    let offset = plant.trim(&Vector::zeros(n)).unwrap_or_else(|| plant.reference_input());

    let mut traj = Trajectory::default();
    let mut e = config.e0.clone();
    let mut z = Vector::zeros(n);
    let mut u_prev: Option<Vector> = None;

    let rhs = |e: &Vector, u: &Vector, t: f64| -> Result<Vector> {
        let (w, _) = disturbance.eval(t);
        Ok(plant.dynamics(e, u)? + &gamma * w)
    };

    for k in 0..=steps {
        let t = k as f64 * dt;
        let raw = &offset + gains.command(&e, &z);
        let (u, sat_hi, sat_lo) = match &config.limits {
            None => (raw, vec![false; m], vec![false; m]),
            Some(lim) => {
                let limited = match &u_prev {
                    None => raw,
                    Some(prev) => {
                        let rate = clamp_vec(&((&raw - prev) / dt), &lim.du_min, &lim.du_max);
                        prev + rate * dt
                    }
                };
                let hi = (0..m).map(|j| limited[j] > lim.u_max[j]).collect();
                let lo = (0..m).map(|j| limited[j] < lim.u_min[j]).collect();
                (clamp_vec(&limited, &lim.u_min, &lim.u_max), hi, lo)
            }
        };

        let (w, w_dot) = disturbance.eval(t);
        let e_dot = match plant.dynamics(&e, &u) {
            Ok(f) => f + &gamma * &w,
            Err(err) => {
                traj.diverged = true;
                traj.stop_reason = Some(err.to_string());
                break;
            }
        };
        traj.times.push(t);
        traj.e.push(e.clone());
        traj.e_dot.push(e_dot.clone());
        traj.u.push(u.clone());
        traj.d.push(w);
        traj.d_dot.push(w_dot);
        if k == steps {
            break;
        }

        let mut integrate = vec![true; n];
        if config.anti_windup == AntiWindup::Conditional {
            for (i, flag) in integrate.iter_mut().enumerate() {
                *flag = !(0..m).any(|j| {
                    let push = gains.ki[(j, i)] * e[i];
                    (sat_hi[j] && push > 0.0) || (sat_lo[j] && push < 0.0)
                });
            }
        }
        let mask =
            |v: &Vector| Vector::from_iterator(n, v.iter().zip(&integrate).map(|(x, &on)| if on { *x } else { 0.0 }));

        let step = (|| -> Result<(Vector, Vector)> {
            let k1 = rhs(&e, &u, t)?;
            let e2 = &e + &k1 * (dt / 2.0);
            let k2 = rhs(&e2, &u, t + dt / 2.0)?;
            let e3 = &e + &k2 * (dt / 2.0);
            let k3 = rhs(&e3, &u, t + dt / 2.0)?;
            let e4 = &e + &k3 * dt;
            let k4 = rhs(&e4, &u, t + dt)?;
            let e_next = &e + (&k1 + &k2 * 2.0 + &k3 * 2.0 + &k4) * (dt / 6.0);
            let z_dot = (&e + &e2 * 2.0 + &e3 * 2.0 + &e4) / 6.0;
            Ok((e_next, &z + mask(&z_dot) * dt))
        })();
        match step {
            Ok((e_next, z_next)) if e_next.iter().chain(z_next.iter()).all(|v| v.is_finite()) => {
                e = e_next;
                z = z_next;
            }
            Ok(_) => {
                traj.diverged = true;
                traj.stop_reason = Some("state became non-finite".into());
                break;
            }
            Err(err) => {
                traj.diverged = true;
                traj.stop_reason = Some(err.to_string());
                break;
            }
        }
        u_prev = Some(u);
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub itae: f64,
    pub std_e: Vec<f64>,
    pub std_e_dot: Vec<f64>,
    pub l2_ratio: Option<f64>,
    pub final_error_norm: f64,
}

fn trapezoid(times: &[f64], y: impl Fn(usize) -> f64) -> f64 {
    times
        .windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (y(i) + y(i + 1)))
        .sum()
}

fn sample_std(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut count, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for x in xs {
        count += 1;
        let delta = x - mean;
        mean += delta / count as f64;
        m2 += delta * (x - mean);
    }
    if count < 2 {
        0.0
    } else {
        (m2 / (count - 1) as f64).sqrt()
    }
}

/// Metrics over the samples with `t <= T`.
pub fn metrics(traj: &Trajectory, t_final: f64) -> Result<Metrics> {
    if traj.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    if !(t_final > 0.0) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t_final}")));
    }
    let slack = traj.dt().unwrap_or(0.0) * 1e-6 + 1e-12;
    let end = traj.times.partition_point(|&t| t <= t_final + slack);
    if end == 0 || traj.times[end - 1] < t_final - slack {
        return Err(Error::InvalidArgument(format!(
            "trajectory does not cover [0, {t_final}]"
        )));
    }
    let times = &traj.times[..end];
    let itae = trapezoid(times, |i| traj.e[i].norm()) / t_final;
    let n = traj.e[0].len();
    let std_of = |series: &[Vector], c: usize| sample_std(series[..end].iter().map(move |v| v[c]));
    Ok(Metrics {
        itae,
        std_e: (0..n).map(|c| std_of(&traj.e, c)).collect(),
        std_e_dot: (0..n).map(|c| std_of(&traj.e_dot, c)).collect(),
        l2_ratio: empirical_l2_ratio(traj),
        final_error_norm: traj.e[end - 1].norm(),
    })
}

/// `sqrt(int ||s||^2 / int ||w'||^2)`, defined only from a zero initial error
/// with a non-zero disturbance derivative.
pub fn empirical_l2_ratio(traj: &Trajectory) -> Option<f64> {
    if traj.len() < 2 || traj.e[0].iter().any(|&v| v != 0.0) {
        return None;
    }
    let input = trapezoid(&traj.times, |i| traj.d_dot[i].norm_squared());
    if !(input > 0.0) {
        return None;
    }
    let output = trapezoid(&traj.times, |i| traj.augmented(i).norm_squared());
    Some((output / input).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipationAudit {
    pub violation_fraction: f64,
    pub samples: usize,
    pub violations: usize,
    /// Largest `V' - (gamma^2 ||w'||^2 - ||s||^2) / 2` observed.
    pub max_excess: f64,
    pub tolerance: f64,
}

/// Default slack for the forward-difference audit: `1e-6 + 10 dt`.
pub fn audit_tolerance(dt: f64) -> f64 {
    1e-6 + 10.0 * dt
}

/// Checks `V' <= (gamma^2 ||w'||^2 - ||s||^2) / 2` for `V = s^T P s / 2` at
/// every interior sample, with `V'` from forward differences.
pub fn dissipation_audit(traj: &Trajectory, p: &Matrix, gamma: f64) -> Result<DissipationAudit> {
    let dt = traj
        .dt()
        .ok_or_else(|| Error::InvalidArgument("trajectory needs at least 3 samples".into()))?;
    dissipation_audit_with_tolerance(traj, p, gamma, audit_tolerance(dt))
}

pub fn dissipation_audit_with_tolerance(
    traj: &Trajectory,
    p: &Matrix,
    gamma: f64,
    tol: f64,
) -> Result<DissipationAudit> {
    if traj.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "trajectory needs at least 3 samples, got {}",
            traj.len()
        )));
    }
    let dim = 2 * traj.e[0].len();
    if p.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "P is {:?}, trajectory state needs {dim}x{dim}",
            p.shape()
        )));
    }
    if (p - p.transpose()).amax() > 1e-9 * p.amax().max(1.0) || p.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be non-negative, got {gamma}"
        )));
    }
    let storage = |i: usize| {
        let s = traj.augmented(i);
        0.5 * s.dot(&(p * &s))
    };
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    let samples = traj.len() - 2;
    for i in 1..traj.len() - 1 {
        let dt = traj.times[i + 1] - traj.times[i];
        let v_dot = (storage(i + 1) - storage(i)) / dt;
        let supply = 0.5 * (gamma * gamma * traj.d_dot[i].norm_squared() - traj.augmented(i).norm_squared());
        let excess = v_dot - supply;
        max_excess = max_excess.max(excess);
        if excess > tol {
            violations += 1;
        }
    }
    Ok(DissipationAudit {
        violation_fraction: violations as f64 / samples as f64,
        samples,
        violations,
        max_excess,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::{NoDisturbance, UavParams, UavPlant};
    use approx::assert_relative_eq;

    fn benchmark_config(e0: Vector) -> SimConfig {
        SimConfig::new(20.0, e0).with_limits(Limits::uav())
    }

    #[test]
    fn equilibrium_is_invariant() {
        let p = UavPlant::default();
        let cfg = benchmark_config(Vector::zeros(2));
        let traj = simulate(&p, &PiGains::uav_benchmark(), &NoDisturbance(2), &cfg).unwrap();
        let trim = p.trim(&Vector::zeros(2)).unwrap();
        assert_eq!(traj.len(), 20_001);
        assert!(traj.e.iter().all(|e| e.amax() == 0.0));
        assert!(traj.u.iter().all(|u| *u == trim));
        let m = metrics(&traj, 20.0).unwrap();
        assert_eq!(m.itae, 0.0);
        assert_eq!(m.l2_ratio, None);
    }

    #[test]
    fn benchmark_initial_condition_converges() {
        let params = UavParams::default();
        let p = UavPlant::new(params).unwrap();
        let cfg = benchmark_config(params.initial_error(PI / 3.0, PI / 4.0));
        let traj = simulate(&p, &PiGains::uav_benchmark(), &params, &cfg).unwrap();
        assert!(!traj.diverged);
        assert!(traj.e.last().unwrap().norm() < 0.05);
    }

    #[test]
    fn clamps_hold_under_aggressive_gains() {
        let params = UavParams::default();
        let p = UavPlant::new(params).unwrap();
        let k = PiGains::uav_benchmark();
        let hot = PiGains::new(&k.kp * 100.0, &k.ki * 100.0).unwrap();
        let lim = Limits::uav();
        let cfg = benchmark_config(params.initial_error(PI / 3.0, PI / 4.0)).with_dt(1e-3);
        let traj = simulate(&p, &hot, &params, &cfg).unwrap();
        for (i, u) in traj.u.iter().enumerate() {
            for j in 0..2 {
                assert!(lim.u_min[j] <= u[j] && u[j] <= lim.u_max[j]);
                if i > 0 {
                    let du = u[j] - traj.u[i - 1][j];
                    assert!(du >= lim.du_min[j] * cfg.dt - 1e-12 && du <= lim.du_max[j] * cfg.dt + 1e-12);
                }
            }
        }
    }

    #[test]
    fn log_is_consistent_with_dynamics() {
        let params = UavParams::default();
        let p = UavPlant::new(params).unwrap();
        let cfg = benchmark_config(Vector::from_row_slice(&[0.3, -0.1]));
        let traj = simulate(&p, &PiGains::uav_benchmark(), &params, &cfg).unwrap();
        let gamma = p.disturbance_matrix();
        for i in (0..traj.len()).step_by(997) {
            let f = p.dynamics(&traj.e[i], &traj.u[i]).unwrap() + &gamma * &traj.d[i];
            assert_eq!(f, traj.e_dot[i]);
        }
    }

    fn synthetic(times: Vec<f64>, e: impl Fn(f64) -> Vector) -> Trajectory {
        let n = e(0.0).len();
        let zeros = |_: &f64| Vector::zeros(n);
        Trajectory {
            e: times.iter().map(|&t| e(t)).collect(),
            e_dot: times.iter().map(zeros).collect(),
            u: times.iter().map(zeros).collect(),
            d: times.iter().map(zeros).collect(),
            d_dot: times.iter().map(zeros).collect(),
            times,
            ..Trajectory::default()
        }
    }

    #[test]
    fn itae_examples() {
        let times: Vec<f64> = (0..=20_000).map(|k| k as f64 * 2.0 * PI / 20_000.0).collect();
        let sine = synthetic(times.clone(), |t| Vector::from_row_slice(&[t.sin(), 0.0]));
        let m = metrics(&sine, 2.0 * PI).unwrap();
        assert_relative_eq!(m.itae, 2.0 / PI, max_relative = 1e-7);

        let c = Vector::from_row_slice(&[0.3, -0.4]);
        let flat = synthetic(times, |_| c.clone());
        let m = metrics(&flat, 2.0 * PI).unwrap();
        assert_relative_eq!(m.itae, 0.5, max_relative = 1e-12);
        assert!(m.std_e.iter().all(|&s| s < 1e-15));
        assert!(metrics(&Trajectory::default(), 1.0).is_err());
        assert!(metrics(&flat, 10.0).is_err());
    }

    #[test]
    fn l2_ratio_preconditions() {
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.1).collect();
        let quiet = synthetic(times.clone(), |_| Vector::zeros(2));
        assert_eq!(empirical_l2_ratio(&quiet), None);
        let mut offset = synthetic(times, |_| Vector::from_row_slice(&[0.1, 0.0]));
        offset.d_dot.iter_mut().for_each(|w| w[0] = 1.0);
        assert_eq!(empirical_l2_ratio(&offset), None);
    }

    #[test]
    fn audit_on_zero_trajectory_and_short_logs() {
        let p = UavPlant::default();
        let cfg = SimConfig::new(1.0, Vector::zeros(2));
        let traj = simulate(&p, &PiGains::uav_benchmark(), &NoDisturbance(2), &cfg).unwrap();
        let pm = Matrix::identity(4, 4);
        assert_eq!(dissipation_audit(&traj, &pm, 1.0).unwrap().violation_fraction, 0.0);
        let mut short = traj.clone();
        for v in [
            &mut short.e,
            &mut short.e_dot,
            &mut short.u,
            &mut short.d,
            &mut short.d_dot,
        ] {
            v.truncate(2);
        }
        short.times.truncate(2);
        assert!(dissipation_audit(&short, &pm, 1.0).is_err());
        assert!(dissipation_audit(&traj, &(-pm), 1.0).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let params = UavParams::default();
        let p = UavPlant::new(params).unwrap();
        let cfg = SimConfig::new(0.05, Vector::from_row_slice(&[0.1, 1.0 / 3.0]));
        let traj = simulate(&p, &PiGains::uav_benchmark(), &params, &cfg).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,e_1,e_2,edot_1,edot_2,u_1,u_2,d_1,d_2,ddot_1,ddot_2\n"));
        let back = Trajectory::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, traj);
    }

    #[test]
    fn invalid_configs_rejected() {
        let p = UavPlant::default();
        let k = PiGains::uav_benchmark();
        let zero = Vector::zeros(2);
        assert!(simulate(
            &p,
            &k,
            &NoDisturbance(2),
            &SimConfig::new(1.0, zero.clone()).with_dt(0.0)
        )
        .is_err());
        assert!(simulate(&p, &k, &NoDisturbance(3), &SimConfig::new(1.0, zero.clone())).is_err());
        assert!(simulate(&p, &k, &NoDisturbance(2), &SimConfig::new(1.0, Vector::zeros(3))).is_err());
        let mut lim = Limits::uav();
        lim.u_min[0] = 1.0;
        assert!(simulate(&p, &k, &NoDisturbance(2), &SimConfig::new(1.0, zero).with_limits(lim)).is_err());
    }
}

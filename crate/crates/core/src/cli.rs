//! JSON run configuration and the command implementations behind `pidiss`.
//!
//! Every command reads a [`RunConfig`], writes CSV/JSON into an output
//! directory and reports an [`Outcome`]. Exit codes: 0 success, 1 config
//! error, 2 numerical or model error, 3 IO error, 4 advisory (infeasible,
//! diverged or failed audit).

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dissipativity::{self, Certifier, Region};
use crate::error::Error;
use crate::gains::{matrix_to_rows, rows_to_matrix, GainsSpec, PiGains};
use crate::linalg::{Matrix, Vector};
use crate::plant::{Decaying, DisturbanceSource, LinearizationPoint, NoDisturbance, Plant, UavParams, UavPlant};
use crate::sim::{self, AntiWindup, Limits, SimConfig, Trajectory};
use crate::tuner::{self, SweepMode, SweepSpec, BENCHMARK_EPSILONS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_ADVISORY: i32 = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
    pub advisory: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.advisory {
            EXIT_ADVISORY
        } else {
            EXIT_OK
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantConfig {
    pub name: String,
    pub params: UavParams,
}

impl Default for PlantConfig {
    fn default() -> Self {
        Self {
            name: "uav".into(),
            params: UavParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedRegion {
    pub name: String,
    #[serde(flatten)]
    pub region: Region,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisturbanceKind {
    #[default]
    Sinusoidal,
    /// Sinusoid multiplied by `exp(-decay_rate t)`.
    Decaying,
    None,
}

/// Storage matrix and gain budget for the dissipation audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct AuditConfig {
    /// Explicit `P`; derived from the gains on `region` when absent.
    pub p: Option<Vec<Vec<f64>>>,
    /// Explicit `gamma`; the certified bound on `region` when absent.
    pub gamma: Option<f64>,
    /// Index into `regions`; defaults to `report_region`.
    pub region: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    pub t_end: f64,
    pub dt: f64,
    /// Initial error; the benchmark initial angles when absent.
    pub e0: Option<Vec<f64>>,
    pub disturbance: DisturbanceKind,
    pub decay_rate: f64,
    /// `null` disables both clamps.
    pub limits: Option<Limits>,
    pub anti_windup: AntiWindup,
    pub audit: Option<AuditConfig>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            t_end: 20.0,
            dt: sim::DEFAULT_DT,
            e0: None,
            disturbance: DisturbanceKind::Sinusoidal,
            decay_rate: 1.0,
            limits: Some(Limits::uav()),
            anti_windup: AntiWindup::Conditional,
            audit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct VerifyConfig {
    pub trajectory: Option<PathBuf>,
    pub report: Option<PathBuf>,
    /// Replaces the report's `gamma_star`.
    pub gamma: Option<f64>,
    pub eps_k: Option<f64>,
}

/// Single-document configuration; every field has a benchmark default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub plant: PlantConfig,
    pub linearization: LinearizationPoint,
    pub gains: GainsSpec,
    pub sweep: SweepMode,
    pub regions: Vec<NamedRegion>,
    pub objective_region: usize,
    /// Region used by `gamma` and the derived audit.
    pub report_region: usize,
    pub heatmap_region: Region,
    pub scan_axis: usize,
    pub lmi_tol: f64,
    /// `eps_K` scaling of the common storage matrix.
    pub eps_k: f64,
    pub simulation: SimulationConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let regions = Region::uav_benchmark_regions()
            .into_iter()
            .enumerate()
            .map(|(i, region)| NamedRegion {
                name: format!("Omega{}", i + 1),
                region,
            })
            .collect();
        Self {
            plant: PlantConfig::default(),
            linearization: LinearizationPoint::Trim,
            gains: GainsSpec::from(&PiGains::uav_benchmark()),
            sweep: SweepMode::EpsilonFamily {
                epsilons: BENCHMARK_EPSILONS.to_vec(),
            },
            regions,
            objective_region: 3,
            report_region: 3,
            heatmap_region: Region::uav_heatmap(),
            scan_axis: 1,
            lmi_tol: 1e-8,
            eps_k: 2.0,
            simulation: SimulationConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    /// Reads a config file, or returns the defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
            }
        }
    }

    pub fn plant(&self) -> CliResult<UavPlant> {
        if self.plant.name != "uav" {
            return Err(CliError::Config(format!("unknown plant {:?}", self.plant.name)));
        }
        UavPlant::new(self.plant.params).map_err(config_err)
    }

    pub fn pi_gains(&self) -> CliResult<PiGains> {
        let g = PiGains::try_from(&self.gains).map_err(config_err)?;
        if g.input_dim() != 2 || g.state_dim() != 2 {
            return Err(CliError::Config(format!(
                "gains are {}x{}, the plant needs 2x2",
                g.input_dim(),
                g.state_dim()
            )));
        }
        Ok(g)
    }

    fn check_region(&self, r: &Region, what: &str) -> CliResult<()> {
        r.validate().map_err(|e| CliError::Config(format!("{what}: {e}")))?;
        if r.dim() != 2 {
            return Err(CliError::Config(format!("{what} must have 2 axes")));
        }
        Ok(())
    }

    pub fn validated_regions(&self) -> CliResult<Vec<Region>> {
        if self.regions.is_empty() {
            return Err(CliError::Config("no regions configured".into()));
        }
        for r in &self.regions {
            self.check_region(&r.region, &r.name)?;
        }
        Ok(self.regions.iter().map(|r| r.region.clone()).collect())
    }

    fn region_at(&self, idx: usize, what: &str) -> CliResult<&NamedRegion> {
        self.validated_regions()?;
        self.regions
            .get(idx)
            .ok_or_else(|| CliError::Config(format!("{what} index {idx} out of range")))
    }

    fn heatmap(&self) -> CliResult<&Region> {
        self.check_region(&self.heatmap_region, "heatmap_region")?;
        if self.scan_axis >= 2 {
            return Err(CliError::Config(format!("scan_axis {} out of range", self.scan_axis)));
        }
        Ok(&self.heatmap_region)
    }

    pub fn sweep_spec(&self) -> CliResult<SweepSpec> {
        let spec = SweepSpec {
            base_gains: self.pi_gains()?,
            mode: self.sweep.clone(),
            regions: self.validated_regions()?,
            objective_region: self
                .region_at(self.objective_region, "objective_region")
                .map(|_| self.objective_region)?,
            width_region: self.heatmap()?.clone(),
            width_axis: self.scan_axis,
            linearization: self.linearization,
        };
        tuner::generate_candidates(&spec).map_err(config_err)?;
        Ok(spec)
    }

    pub fn sim_config(&self) -> CliResult<SimConfig> {
        let s = &self.simulation;
        let e0 = match &s.e0 {
            Some(v) if v.len() == 2 => Vector::from_row_slice(v),
            Some(v) => return Err(CliError::Config(format!("e0 has {} entries, expected 2", v.len()))),
            None => self.plant.params.initial_error(PI / 3.0, PI / 4.0),
        };
        if !(s.dt > 0.0) || !(s.t_end > 0.0) {
            return Err(CliError::Config("simulation needs dt > 0 and t_end > 0".into()));
        }
        if let Some(l) = &s.limits {
            l.validate(2).map_err(config_err)?;
        }
        Ok(SimConfig {
            t_end: s.t_end,
            dt: s.dt,
            e0,
            limits: s.limits.clone(),
            anti_windup: s.anti_windup,
        })
    }

    pub fn disturbance(&self) -> CliResult<Box<dyn DisturbanceSource>> {
        let p = self.plant.params;
        Ok(match self.simulation.disturbance {
            DisturbanceKind::Sinusoidal => Box::new(p),
            DisturbanceKind::Decaying => {
                if !(self.simulation.decay_rate > 0.0) {
                    return Err(CliError::Config("decay_rate must be positive".into()));
                }
                Box::new(Decaying {
                    inner: p,
                    rate: self.simulation.decay_rate,
                })
            }
            DisturbanceKind::None => Box::new(NoDisturbance(2)),
        })
    }
}

fn create_dir(out: &Path) -> CliResult<()> {
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let f = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::to_writer_pretty(BufWriter::new(f), value).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapSidecar {
    #[serde(rename = "W")]
    pub width: f64,
    pub lower: f64,
    pub upper: f64,
    pub crossings: Vec<f64>,
    pub scan_axis: usize,
    pub hurwitz_at_origin: bool,
    pub region: Region,
    #[serde(rename = "K")]
    pub gains: GainsSpec,
}

/// Writes `heatmap.csv` (`e_chi,e_gamma,L_K`) and `heatmap.json`.
pub fn cmd_heatmap(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let plant = cfg.plant()?;
    let gains = cfg.pi_gains()?;
    let region = cfg.heatmap()?;
    create_dir(out)?;

    let csv_path = out.join("heatmap.csv");
    let mut wr = csv_writer(&csv_path)?;
    let mut header = plant.state_names();
    header.push("L_K".into());
    wr.write_record(&header).map_err(csv_io)?;

    let (zero_line, hurwitz) = match Certifier::new(&plant, &gains, cfg.linearization) {
        Ok(cert) => {
            let hm = cert.heatmap(region)?;
            for (p, v) in hm.points.iter().zip(&hm.values) {
                wr.write_record(p.iter().chain(std::iter::once(v)).map(|x| x.to_string()))
                    .map_err(csv_io)?;
            }
            (cert.zero_line(region, cfg.scan_axis)?, true)
        }
        Err(Error::NotHurwitz { .. }) => (
            dissipativity::zero_line_width(&plant, &gains, cfg.linearization, region, cfg.scan_axis)?,
            false,
        ),
        Err(e) => return Err(e.into()),
    };
    wr.flush()?;

    let json_path = out.join("heatmap.json");
    let sidecar = HeatmapSidecar {
        width: zero_line.width,
        lower: zero_line.lower,
        upper: zero_line.upper,
        crossings: zero_line.crossings.clone(),
        scan_axis: cfg.scan_axis,
        hurwitz_at_origin: hurwitz,
        region: region.clone(),
        gains: cfg.gains.clone(),
    };
    write_json(&json_path, &sidecar)?;
    Ok(Outcome {
        files: vec![csv_path, json_path],
        summary: format!("W_K = {} ({} crossings)", zero_line.width, zero_line.crossings.len()),
        advisory: !hurwitz,
    })
}

/// Serialized [`dissipativity::DissipativityReport`] for one gain and region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    #[serde(rename = "M0")]
    pub m0: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub gamma_star: Option<f64>,
    pub gamma_star_lmi: Option<f64>,
    #[serde(rename = "W")]
    pub width: Option<f64>,
    pub feasible: bool,
    pub abscissa_origin: f64,
    pub region_name: String,
    pub region: Region,
    #[serde(rename = "K")]
    pub gains: GainsSpec,
    #[serde(rename = "P_tilde")]
    pub p_tilde: Option<Vec<Vec<f64>>>,
}

/// Writes `report.json` for the configured gains on `report_region`.
pub fn cmd_gamma(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let plant = cfg.plant()?;
    let gains = cfg.pi_gains()?;
    let named = cfg.region_at(cfg.report_region, "report_region")?;
    let scan = cfg.heatmap()?;
    if !(cfg.lmi_tol > 0.0) {
        return Err(CliError::Config("lmi_tol must be positive".into()));
    }
    create_dir(out)?;

    let report = dissipativity::analyze(
        &plant,
        &gains,
        cfg.linearization,
        &named.region,
        Some((scan, cfg.scan_axis)),
    )?;
    let gamma_lmi = if report.p_tilde.is_some() {
        Certifier::new(&plant, &gains, cfg.linearization)?.gamma_star_lmi(&named.region, cfg.lmi_tol)?
    } else {
        None
    };
    let json = ReportJson {
        m0: report.m0,
        s: report.s,
        l: report.l,
        gamma_star: report.gamma_star,
        gamma_star_lmi: gamma_lmi,
        width: report.width,
        feasible: report.feasible,
        abscissa_origin: report.abscissa_origin,
        region_name: named.name.clone(),
        region: named.region.clone(),
        gains: cfg.gains.clone(),
        p_tilde: report.p_tilde.as_ref().map(matrix_to_rows),
    };
    let path = out.join("report.json");
    write_json(&path, &json)?;
    let summary = match report.gamma_star {
        Some(g) => format!("{}: gamma* = {g}, L = {}", named.name, report.l.unwrap_or(f64::NAN)),
        None => format!("{}: infeasible", named.name),
    };
    Ok(Outcome {
        files: vec![path],
        summary,
        advisory: !report.feasible,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub name: String,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    pub gamma_star: Option<f64>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub index: usize,
    pub epsilon: Option<f64>,
    #[serde(rename = "K")]
    pub gains: GainsSpec,
    #[serde(rename = "W")]
    pub width: f64,
    pub regions: Vec<RegionSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneJson {
    pub candidates: Vec<CandidateJson>,
    pub selected: Option<usize>,
    pub objective_region: String,
}

fn opt_cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Writes `tune.json` and `tune.csv` for the configured sweep.
pub fn cmd_tune(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let plant = cfg.plant()?;
    let spec = cfg.sweep_spec()?;
    create_dir(out)?;
    let result = tuner::tune(&plant, &spec)?;
    let epsilons: Vec<Option<f64>> = match &spec.mode {
        SweepMode::EpsilonFamily { epsilons } => epsilons.iter().copied().map(Some).collect(),
        SweepMode::Grid { .. } => vec![None; result.candidates.len()],
    };

    let candidates: Vec<CandidateJson> = result
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| CandidateJson {
            index: i,
            epsilon: epsilons[i],
            gains: GainsSpec::from(&c.gains),
            width: c.width,
            regions: c
                .reports
                .iter()
                .zip(&cfg.regions)
                .map(|(r, named)| RegionSummary {
                    name: named.name.clone(),
                    l: r.l,
                    s: r.s,
                    gamma_star: r.gamma_star,
                    feasible: r.feasible,
                })
                .collect(),
        })
        .collect();

    let csv_path = out.join("tune.csv");
    let mut wr = csv_writer(&csv_path)?;
    let mut header = vec!["K".to_string(), "epsilon".into(), "W_K".into()];
    header.extend(cfg.regions.iter().map(|r| format!("gamma_{}", r.name)));
    wr.write_record(&header).map_err(csv_io)?;
    for c in &candidates {
        let mut row = vec![format!("K{}", c.index + 1), opt_cell(c.epsilon), c.width.to_string()];
        row.extend(c.regions.iter().map(|r| opt_cell(r.gamma_star)));
        wr.write_record(&row).map_err(csv_io)?;
    }
    wr.flush()?;

    let json_path = out.join("tune.json");
    write_json(
        &json_path,
        &TuneJson {
            candidates,
            selected: result.best,
            objective_region: cfg.regions[spec.objective_region].name.clone(),
        },
    )?;
    let summary = match result.best {
        Some(i) => format!("selected K{} of {}", i + 1, result.candidates.len()),
        None => "no feasible candidate".into(),
    };
    Ok(Outcome {
        files: vec![json_path, csv_path],
        summary,
        advisory: result.best.is_none(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditJson {
    pub gamma: f64,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(flatten)]
    pub audit: sim::DissipationAudit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsJson {
    #[serde(flatten)]
    pub metrics: sim::Metrics,
    pub diverged: bool,
    pub stop_reason: Option<String>,
    pub samples: usize,
    pub audit: Option<AuditJson>,
}

/// `P = eps_K (1 - S/L) P~` and the certified `gamma*` for the configured
/// gains on region `idx`.
fn derived_storage(cfg: &RunConfig, plant: &UavPlant, gains: &PiGains, idx: usize) -> CliResult<(Matrix, f64)> {
    let named = cfg.region_at(idx, "audit region")?;
    let cert = Certifier::new(plant, gains, cfg.linearization)?;
    let p = cert.common_p(&named.region, cfg.eps_k)?;
    let gamma = cert
        .gamma_star_closed_form(&named.region)?
        .ok_or(CliError::Numerical(format!("{} is infeasible", named.name)))?;
    Ok((p, gamma))
}

/// Writes `trajectory.csv` and `metrics.json`.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let plant = cfg.plant()?;
    let gains = cfg.pi_gains()?;
    let sim_cfg = cfg.sim_config()?;
    let dist = cfg.disturbance()?;
    create_dir(out)?;

    let traj = sim::simulate(&plant, &gains, dist.as_ref(), &sim_cfg)?;
    let traj_path = out.join("trajectory.csv");
    let f = File::create(&traj_path).map_err(|e| CliError::Io(format!("{}: {e}", traj_path.display())))?;
    traj.write_csv(BufWriter::new(f))?;

    let t_final = traj.times.last().copied().unwrap_or(0.0);
    let metrics = if t_final > 0.0 {
        sim::metrics(&traj, t_final)?
    } else {
        return Err(CliError::Numerical("trajectory is too short for metrics".into()));
    };

    let audit = match &cfg.simulation.audit {
        None => None,
        Some(a) => {
            let idx = a.region.unwrap_or(cfg.report_region);
            let (p, gamma) = match (&a.p, a.gamma) {
                (Some(rows), Some(g)) => (rows_to_matrix(rows).map_err(config_err)?, g),
                (p_rows, g) => {
                    let (p, gamma) = derived_storage(cfg, &plant, &gains, idx)?;
                    let p = match p_rows {
                        Some(rows) => rows_to_matrix(rows).map_err(config_err)?,
                        None => p,
                    };
                    (p, g.unwrap_or(gamma))
                }
            };
            let res = sim::dissipation_audit(&traj, &p, gamma).map_err(config_err)?;
            Some(AuditJson {
                gamma,
                p: matrix_to_rows(&p),
                audit: res,
            })
        }
    };

    let metrics_path = out.join("metrics.json");
    let audit_failed = audit.as_ref().is_some_and(|a| a.audit.violation_fraction > 0.0);
    let summary = format!(
        "ITAE = {}, |e(T)| = {}{}",
        metrics.itae,
        metrics.final_error_norm,
        if traj.diverged { " (diverged)" } else { "" }
    );
    write_json(
        &metrics_path,
        &MetricsJson {
            metrics,
            diverged: traj.diverged,
            stop_reason: traj.stop_reason.clone(),
            samples: traj.len(),
            audit,
        },
    )?;
    Ok(Outcome {
        files: vec![traj_path, metrics_path],
        summary,
        advisory: traj.diverged || audit_failed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub pass: bool,
    pub gamma: f64,
    pub eps_k: f64,
    pub l2_ratio: Option<f64>,
    pub l2_within_bound: Option<bool>,
    pub violation_fraction: f64,
    pub violations: usize,
    pub samples: usize,
    pub max_excess: f64,
    pub tolerance: f64,
}

/// Audits a stored trajectory against a stored report and writes `verify.json`.
pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    let traj_path = cfg
        .verify
        .trajectory
        .as_ref()
        .ok_or_else(|| CliError::Config("verify.trajectory is required".into()))?;
    let report_path = cfg
        .verify
        .report
        .as_ref()
        .ok_or_else(|| CliError::Config("verify.report is required".into()))?;
    let f = File::open(traj_path).map_err(|e| CliError::Io(format!("{}: {e}", traj_path.display())))?;
    let traj = Trajectory::read_csv(f).map_err(config_err)?;
    let report: ReportJson = read_json(report_path)?;

    let (p_tilde, s, l) = match (&report.p_tilde, report.s, report.l) {
        (Some(pt), Some(s), Some(l)) => (rows_to_matrix(pt).map_err(config_err)?, s, l),
        _ => {
            return Err(CliError::Numerical(
                "report has no storage data (A_K(0) not Hurwitz)".into(),
            ))
        }
    };
    if !(l < 0.0) {
        return Err(CliError::Numerical(format!("report region is infeasible (L = {l})")));
    }
    let n = traj.e.first().map_or(0, |e| e.len());
    if p_tilde.shape() != (2 * n, 2 * n) {
        return Err(CliError::Config(format!(
            "report P_tilde is {:?} but the trajectory has {n} error states",
            p_tilde.shape()
        )));
    }
    let gamma = match cfg.verify.gamma.or(report.gamma_star) {
        Some(g) => g,
        None => return Err(CliError::Numerical("report has no gamma_star".into())),
    };
    let eps_k = cfg.verify.eps_k.unwrap_or(cfg.eps_k);
    if !(eps_k > 1.0) {
        return Err(CliError::Config("eps_k must exceed 1".into()));
    }
    let p = &p_tilde * (eps_k * (1.0 - s / l));
    let audit = sim::dissipation_audit(&traj, &p, gamma).map_err(config_err)?;
    let l2 = sim::empirical_l2_ratio(&traj);
    let within = l2.map(|r| r <= gamma);
    let pass = audit.violation_fraction == 0.0 && within != Some(false);

    create_dir(out)?;
    let path = out.join("verify.json");
    write_json(
        &path,
        &VerifyJson {
            pass,
            gamma,
            eps_k,
            l2_ratio: l2,
            l2_within_bound: within,
            violation_fraction: audit.violation_fraction,
            violations: audit.violations,
            samples: audit.samples,
            max_excess: audit.max_excess,
            tolerance: audit.tolerance,
        },
    )?;
    Ok(Outcome {
        files: vec![path],
        summary: format!(
            "{}: violation fraction {}, l2 ratio {}",
            if pass { "pass" } else { "fail" },
            audit.violation_fraction,
            l2.map_or("none".into(), |r| r.to_string())
        ),
        advisory: !pass,
    })
}

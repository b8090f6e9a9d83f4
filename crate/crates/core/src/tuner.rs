//! Gain sweeps: generate candidate PI gains, certify each on a set of regions
//! and pick the one with the smallest certified gain bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dissipativity::{Certifier, DissipativityReport, Region};
use crate::error::{Error, Result};
use crate::gains::PiGains;
use crate::linalg::Matrix;
use crate::plant::{LinearizationPoint, Plant};

/// Shifts of the benchmark family `K(eps) = K* - eps [I, I]` used by the
/// default sweep.
pub const BENCHMARK_EPSILONS: [f64; 6] = [-4.0, -2.0, -1.0, 0.5, 0.8, 1.0];

/// Inclusive range for one entry of the stacked gain `[K_P, K_I]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl EntryRange {
    pub fn fixed(v: f64) -> Self {
        Self {
            lo: v,
            hi: v,
            step: 1.0,
        }
    }

    fn values(&self) -> Result<Vec<f64>> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.step > 0.0 && self.step.is_finite())
            || self.lo > self.hi
        {
            return Err(Error::InvalidArgument(format!("bad entry range {self:?}")));
        }
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| self.lo + k as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SweepMode {
    /// `base - eps [I, I]` for each listed `eps`.
    EpsilonFamily { epsilons: Vec<f64> },
    /// Cartesian product over the stacked-gain entries, row-major.
    Grid { ranges: Vec<EntryRange> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base_gains: PiGains,
    pub mode: SweepMode,
    pub regions: Vec<Region>,
    /// Index into `regions` used by [`select_best`].
    pub objective_region: usize,
    /// Region and axis of the zero-line scan that defines `W_K`.
    pub width_region: Region,
    pub width_axis: usize,
    pub linearization: LinearizationPoint,
}

impl SweepSpec {
    /// The benchmark sweep: the six benchmark shifts over the four nested
    /// regions, objective on the smallest one.
    pub fn uav_benchmark() -> Self {
        Self {
            base_gains: PiGains::uav_benchmark(),
            mode: SweepMode::EpsilonFamily {
                epsilons: BENCHMARK_EPSILONS.to_vec(),
            },
            regions: Region::uav_benchmark_regions().to_vec(),
            objective_region: 3,
            width_region: Region::uav_heatmap(),
            width_axis: 1,
            linearization: LinearizationPoint::Trim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.regions.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one region".into()));
        }
        if self.objective_region >= self.regions.len() {
            return Err(Error::InvalidArgument(format!(
                "objective region {} out of range ({} regions)",
                self.objective_region,
                self.regions.len()
            )));
        }
        for r in self.regions.iter().chain(std::iter::once(&self.width_region)) {
            r.validate()?;
        }
        if self.width_axis >= self.width_region.dim() {
            return Err(Error::InvalidArgument(format!(
                "width axis {} out of range",
                self.width_axis
            )));
        }
        Ok(())
    }
}

pub fn generate_candidates(spec: &SweepSpec) -> Result<Vec<PiGains>> {
    let out = match &spec.mode {
        SweepMode::EpsilonFamily { epsilons } => epsilons
            .iter()
            .map(|&eps| spec.base_gains.shifted(eps))
            .collect::<Result<Vec<_>>>()?,
        SweepMode::Grid { ranges } => {
            let shape = spec.base_gains.stacked().shape();
            if ranges.len() != shape.0 * shape.1 {
                return Err(Error::Dimension(format!(
                    "grid needs {} entry ranges for a {}x{} stacked gain, got {}",
                    shape.0 * shape.1,
                    shape.0,
                    shape.1,
                    ranges.len()
                )));
            }
            let axes = ranges.iter().map(EntryRange::values).collect::<Result<Vec<_>>>()?;
            let mut flat: Vec<Vec<f64>> = vec![Vec::new()];
            for axis in &axes {
                flat = flat
                    .into_iter()
                    .flat_map(|prefix| {
                        axis.iter().map(move |&x| {
                            let mut p = prefix.clone();
                            p.push(x);
                            p
                        })
                    })
                    .collect();
            }
            flat.iter()
                .map(|entries| PiGains::from_stacked(&Matrix::from_row_slice(shape.0, shape.1, entries)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    if out.is_empty() {
        return Err(Error::InvalidArgument("sweep produced no candidates".into()));
    }
    Ok(out)
}

/// Reports for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateResult {
    pub gains: PiGains,
    pub reports: Vec<DissipativityReport>,
    pub width: f64,
}

fn infeasible_report(abscissa: f64) -> DissipativityReport {
    DissipativityReport {
        abscissa_origin: abscissa,
        m0: None,
        s: None,
        l: None,
        p_tilde: None,
        gamma_star: None,
        feasible: false,
        width: None,
    }
}

/// Certifies `gains` on every region. A non-Hurwitz `A_K(0)` marks all
/// regions infeasible with `W_K = 0`.
pub fn evaluate(
    plant: &dyn Plant,
    gains: &PiGains,
    regions: &[Region],
    width_scan: (&Region, usize),
    point: LinearizationPoint,
) -> Result<CandidateResult> {
    let cert = match Certifier::new(plant, gains, point) {
        Ok(c) => c,
        Err(Error::NotHurwitz { abscissa }) => {
            return Ok(CandidateResult {
                gains: gains.clone(),
                reports: vec![infeasible_report(abscissa); regions.len()],
                width: 0.0,
            })
        }
        Err(e) => return Err(e),
    };
    let reports = regions
        .iter()
        .map(|r| cert.report(r, None))
        .collect::<Result<Vec<_>>>()?;
    let width = cert.zero_line(width_scan.0, width_scan.1)?.width;
    Ok(CandidateResult {
        gains: gains.clone(),
        reports,
        width,
    })
}

fn objective(c: &CandidateResult, region: usize) -> Option<f64> {
    let r = c.reports.get(region)?;
    match (r.feasible, r.l, r.gamma_star) {
        (true, Some(l), Some(g)) if l < 0.0 => Some(g),
        _ => None,
    }
}

/// Feasible candidate with the least `gamma*` on `region`; ties go to the
/// larger `W_K`, then to the earlier candidate.
pub fn select_best(results: &[CandidateResult], region: usize) -> Option<usize> {
    let mut best: Option<(usize, f64, f64)> = None;
    for (i, c) in results.iter().enumerate() {
        let Some(g) = objective(c, region) else { continue };
        let better = match best {
            None => true,
            Some((_, bg, bw)) => g < bg || (g == bg && c.width > bw),
        };
        if better {
            best = Some((i, g, c.width));
        }
    }
    best.map(|b| b.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub candidates: Vec<CandidateResult>,
    pub best: Option<usize>,
    pub objective_region: usize,
}

impl TuneResult {
    pub fn best_gains(&self) -> Option<&PiGains> {
        self.best.map(|i| &self.candidates[i].gains)
    }
}

/// Generates, evaluates (in parallel) and selects.
pub fn tune(plant: &dyn Plant, spec: &SweepSpec) -> Result<TuneResult> {
    spec.validate()?;
    let candidates = generate_candidates(spec)?;
    let results = candidates
        .par_iter()
        .map(|k| {
            evaluate(
                plant,
                k,
                &spec.regions,
                (&spec.width_region, spec.width_axis),
                spec.linearization,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let best = select_best(&results, spec.objective_region);
    Ok(TuneResult {
        candidates: results,
        best,
        objective_region: spec.objective_region,
    })
}

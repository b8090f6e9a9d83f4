//! Certification of gamma-dissipativity for the PI-controlled plant.
//!
//! With `s = [e', e]` the PI loop linearizes to `s' = A_K(e) s + G w'` where
//! `A_K(e) = D1(e) + D2(e) K`. Over a gridded region `Omega` containing the
//! origin, the index
//!
//! ```text
//! L_K(Omega) = sup_e abscissa(A_K(e)) + S_K(Omega),
//! S_K(Omega) = sup_e ||A_K(e) - A_K(0)|| * M_K(0)^2
//! ```
//! certifies the region when negative, and the certified L2-gain bound is
//! `gamma* = 2 (1 - S/L) ||G^T P~||` with `A_K(0)^T P~ + P~ A_K(0) + I = 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gains::PiGains;
use crate::linalg::{self, MEstimate, Matrix, Vector};
use crate::plant::{LinearizationPoint, Plant};

/// Tolerance used when testing the matrix inequalities on grid points.
pub const LMI_TOL: f64 = 1e-9;

/// Blocks of the augmented closed-loop system at one error point.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSystem {
    /// `[[df/de, 0], [I, 0]]`
    pub d1: Matrix,
    /// `[[df/du], [0]]`
    pub d2: Matrix,
    /// `[[Gamma], [0]]`
    pub g: Matrix,
    /// `D1 + D2 [K_P, K_I]`
    pub a_k: Matrix,
}

fn check_gain_dims(plant: &dyn Plant, gains: &PiGains) -> Result<()> {
    if gains.state_dim() != plant.state_dim() || gains.input_dim() != plant.input_dim() {
        return Err(Error::Dimension(format!(
            "gains are {}x{} but plant has m={}, n={}",
            gains.input_dim(),
            gains.state_dim(),
            plant.input_dim(),
            plant.state_dim()
        )));
    }
    Ok(())
}

/// Builds `D1`, `D2`, `G` and `A_K` at `e`, linearizing the input at `point`.
pub fn assemble(plant: &dyn Plant, gains: &PiGains, e: &Vector, point: LinearizationPoint) -> Result<AugmentedSystem> {
    check_gain_dims(plant, gains)?;
    let n = plant.state_dim();
    let m = plant.input_dim();
    let l = plant.disturbance_dim();
    if e.len() != n {
        return Err(Error::Dimension(format!(
            "error vector has length {}, expected {n}",
            e.len()
        )));
    }
    let u = point.input_at(plant, e);
    let je = plant.jac_state(e, &u)?;
    let ju = plant.jac_input(e, &u)?;
    if je.shape() != (n, n) || ju.shape() != (n, m) {
        return Err(Error::Dimension("plant Jacobian shapes".into()));
    }
    if je.iter().chain(ju.iter()).any(|v| !v.is_finite()) {
        return Err(Error::PlantDomain(format!("non-finite Jacobian at e = {e:?}")));
    }

    let mut d1 = Matrix::zeros(2 * n, 2 * n);
    d1.view_mut((0, 0), (n, n)).copy_from(&je);
    d1.view_mut((n, 0), (n, n)).fill_with_identity();

    let mut d2 = Matrix::zeros(2 * n, m);
    d2.view_mut((0, 0), (n, m)).copy_from(&ju);

    let mut g = Matrix::zeros(2 * n, l);
    g.view_mut((0, 0), (n, l)).copy_from(&plant.disturbance_matrix());

    let a_k = &d1 + &d2 * gains.stacked();
    Ok(AugmentedSystem { d1, d2, g, a_k })
}

/// Axis-aligned box `[lo, hi]` gridded from `lo` with per-axis `step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub step: Vec<f64>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, step: Vec<f64>) -> Result<Self> {
        let region = Self { lo, hi, step };
        region.validate()?;
        Ok(region)
    }

    /// `[-half, half]` on every axis.
    pub fn symmetric(half: &[f64], step: &[f64]) -> Result<Self> {
        Self::new(half.iter().map(|h| -h).collect(), half.to_vec(), step.to_vec())
    }

    /// The single point `{0}` in `n` dimensions.
    pub fn origin(n: usize) -> Self {
        Self {
            lo: vec![0.0; n],
            hi: vec![0.0; n],
            step: vec![1.0; n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.lo.len();
        if n == 0 || self.hi.len() != n || self.step.len() != n {
            return Err(Error::InvalidArgument(
                "region bounds and steps must share a non-zero length".into(),
            ));
        }
        for i in 0..n {
            let (lo, hi, st) = (self.lo[i], self.hi[i], self.step[i]);
            if !(lo.is_finite() && hi.is_finite() && st.is_finite()) {
                return Err(Error::InvalidArgument("region values must be finite".into()));
            }
            if lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "empty region on axis {i}: [{lo}, {hi}]"
                )));
            }
            if st <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "grid step on axis {i} must be positive"
                )));
            }
            if lo > 0.0 || hi < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "region must contain the origin (axis {i})"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// `lo + k step` for `k = 0..=floor((hi - lo) / step)`.
    pub fn axis_points(&self, axis: usize) -> Vec<f64> {
        let (lo, hi, st) = (self.lo[axis], self.hi[axis], self.step[axis]);
        let count = ((hi - lo) / st + 1e-9).floor() as usize + 1;
        (0..count).map(|k| lo + k as f64 * st).collect()
    }

    pub fn shape(&self) -> Vec<usize> {
        (0..self.dim()).map(|i| self.axis_points(i).len()).collect()
    }

    /// All grid nodes, first axis outermost.
    pub fn points(&self) -> Vec<Vector> {
        let axes: Vec<Vec<f64>> = (0..self.dim()).map(|i| self.axis_points(i)).collect();
        let mut out = vec![Vec::with_capacity(self.dim())];
        for axis in &axes {
            out = out
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
        out.into_iter().map(Vector::from_vec).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().enumerate().all(|(i, &v)| self.lo[i] <= v && v <= self.hi[i])
    }

    /// Grid of the point-wise heatmap for the UAV benchmark.
    pub fn uav_heatmap() -> Self {
        use std::f64::consts::PI;
        Self {
            lo: vec![-PI / 3.0, -PI / 6.0],
            hi: vec![PI / 3.0, PI / 6.0],
            step: vec![0.05, 0.01],
        }
    }

    /// The four nested benchmark regions, largest first.
    pub fn uav_benchmark_regions() -> [Self; 4] {
        let step = [0.05, 0.01];
        [
            Self::symmetric(&[0.7, 0.3], &step).expect("valid region"),
            Self::symmetric(&[0.5, 0.22], &step).expect("valid region"),
            Self::symmetric(&[0.25, 0.15], &step).expect("valid region"),
            Self::symmetric(&[0.1, 0.06], &step).expect("valid region"),
        ]
    }
}

/// `L_K(Omega)`, `S_K(Omega)`, `M_K(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionIndex {
    pub l: f64,
    pub s: f64,
    pub m0: f64,
    pub sup_abscissa: f64,
}

impl RegionIndex {
    pub fn feasible(&self) -> bool {
        self.l < 0.0
    }
}

/// Zero-line scan along one axis through the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroLine {
    /// Distance between the lowest and highest sign change. With a single
    /// change the negative side extends to the end of the scan; with none it
    /// is the full span. Zero when `L_K(0) >= 0`.
    pub width: f64,
    pub lower: f64,
    pub upper: f64,
    /// Every interpolated sign change along the scan.
    pub crossings: Vec<f64>,
}

impl ZeroLine {
    fn empty() -> Self {
        Self {
            width: 0.0,
            lower: 0.0,
            upper: 0.0,
            crossings: Vec::new(),
        }
    }
}

/// Point-wise index values on a region grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub shape: Vec<usize>,
    pub points: Vec<Vector>,
    pub values: Vec<f64>,
}

/// Outcome of checking `P A_K(e) + A_K(e)^T P + eps I <= 0` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonPAudit {
    pub total: usize,
    pub satisfied: usize,
    /// Grid points where the inequality fails, with the offending eigenvalue.
    pub residual: Vec<(Vector, f64)>,
}

impl CommonPAudit {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.satisfied as f64 / self.total as f64
        }
    }
}

/// Everything computed for one gain and one region.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipativityReport {
    pub abscissa_origin: f64,
    pub m0: Option<f64>,
    pub s: Option<f64>,
    pub l: Option<f64>,
    pub p_tilde: Option<Matrix>,
    pub gamma_star: Option<f64>,
    pub feasible: bool,
    pub width: Option<f64>,
}

/// `gamma* = 2 (1 - S/L) sigma_max(G^T P~)`; `None` when `L >= 0`.
pub fn closed_form_gamma(s: f64, l: f64, g: &Matrix, p_tilde: &Matrix) -> Result<Option<f64>> {
    if !(l < 0.0) {
        return Ok(None);
    }
    let sigma = linalg::spectral_norm(&(g.transpose() * p_tilde))?;
    Ok(Some(2.0 * (1.0 - s / l) * sigma))
}

/// `[[0, c P~ G], [c G^T P~, 0]]` with `c = 2 (1 - S/L)`.
pub fn lmi_block(s: f64, l: f64, g: &Matrix, p_tilde: &Matrix) -> Matrix {
    let c = 2.0 * (1.0 - s / l);
    let pg = p_tilde * g * c;
    let (r, k) = pg.shape();
    let mut block = Matrix::zeros(r + k, r + k);
    block.view_mut((0, r), (r, k)).copy_from(&pg);
    block.view_mut((r, 0), (k, r)).copy_from(&pg.transpose());
    block
}

/// Smallest `gamma` with `lmi_block <= gamma I`, by bisection to within `tol`.
pub fn lmi_gamma(s: f64, l: f64, g: &Matrix, p_tilde: &Matrix, tol: f64) -> Result<Option<f64>> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    if !(l < 0.0) {
        return Ok(None);
    }
    let block = lmi_block(s, l, g, p_tilde);
    let eye = Matrix::identity(block.nrows(), block.nrows());
    let holds = |gamma: f64| linalg::is_negative_semidefinite(&(&block - &eye * gamma), 0.0);

    if holds(0.0) {
        return Ok(Some(0.0));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !holds(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 {
            return Err(Error::BracketFailure(hi));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Analysis context for one plant and gain pair, anchored at the origin.
///
/// Construction fails with [`Error::NotHurwitz`] when `A_K(0)` is not Hurwitz,
/// since `M_K(0)` and `P~` are then undefined.
pub struct Certifier<'a> {
    plant: &'a dyn Plant,
    gains: PiGains,
    point: LinearizationPoint,
    a0: Matrix,
    g: Matrix,
    m0: MEstimate,
    p_tilde: Matrix,
}

impl<'a> Certifier<'a> {
    pub fn new(plant: &'a dyn Plant, gains: &PiGains, point: LinearizationPoint) -> Result<Self> {
        let origin = Vector::zeros(plant.state_dim());
        let sys = assemble(plant, gains, &origin, point)?;
        let m0 = linalg::estimate_m(&sys.a_k)?;
        let n2 = sys.a_k.nrows();
        let p_tilde = linalg::solve_lyapunov(&sys.a_k, &Matrix::identity(n2, n2))?;
        Ok(Self {
            plant,
            gains: gains.clone(),
            point,
            a0: sys.a_k,
            g: sys.g,
            m0,
            p_tilde,
        })
    }

    pub fn gains(&self) -> &PiGains {
        &self.gains
    }

    /// `A_K(0)`.
    pub fn a0(&self) -> &Matrix {
        &self.a0
    }

    /// `G = [Gamma; 0]`.
    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn m0(&self) -> MEstimate {
        self.m0
    }

    /// `P~` solving `A_K(0)^T P~ + P~ A_K(0) + I = 0`.
    pub fn p_tilde(&self) -> &Matrix {
        &self.p_tilde
    }

    pub fn a_k(&self, e: &Vector) -> Result<Matrix> {
        Ok(assemble(self.plant, &self.gains, e, self.point)?.a_k)
    }

    fn terms(&self, e: &Vector) -> Result<(f64, f64)> {
        let a = self.a_k(e)?;
        let abscissa = linalg::spectral_abscissa(&a)?;
        let dist = linalg::spectral_norm(&(&a - &self.a0))?;
        Ok((abscissa, dist * self.m0.m_tilde.powi(2)))
    }

    /// `L_K(e) = abscissa(A_K(e)) + ||A_K(e) - A_K(0)|| M_K(0)^2`.
    pub fn pointwise_index(&self, e: &Vector) -> Result<f64> {
        let (abscissa, penalty) = self.terms(e)?;
        Ok(abscissa + penalty)
    }

    /// Suprema over the region grid plus the origin.
    pub fn region_index(&self, region: &Region) -> Result<RegionIndex> {
        region.validate()?;
        if region.dim() != self.plant.state_dim() {
            return Err(Error::Dimension(format!(
                "region has {} axes, plant has {} states",
                region.dim(),
                self.plant.state_dim()
            )));
        }
        let mut points = region.points();
        points.push(Vector::zeros(region.dim()));
        let terms: Vec<(f64, f64)> = points.par_iter().map(|e| self.terms(e)).collect::<Result<_>>()?;
        let sup_abscissa = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        let s = terms.iter().map(|t| t.1).fold(0.0, f64::max);
        Ok(RegionIndex {
            l: sup_abscissa + s,
            s,
            m0: self.m0.m_tilde,
            sup_abscissa,
        })
    }

    pub fn gamma_star_closed_form(&self, region: &Region) -> Result<Option<f64>> {
        let idx = self.region_index(region)?;
        closed_form_gamma(idx.s, idx.l, &self.g, &self.p_tilde)
    }

    pub fn gamma_star_lmi(&self, region: &Region, tol: f64) -> Result<Option<f64>> {
        let idx = self.region_index(region)?;
        lmi_gamma(idx.s, idx.l, &self.g, &self.p_tilde, tol)
    }

    /// `P_K(eps_K) = eps_K (1 - S/L) P~`.
    pub fn common_p(&self, region: &Region, eps_k: f64) -> Result<Matrix> {
        if !(eps_k > 1.0 && eps_k.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps_K must exceed 1, got {eps_k}")));
        }
        let idx = self.region_index(region)?;
        if !idx.feasible() {
            return Err(Error::Infeasible { l: idx.l });
        }
        Ok(&self.p_tilde * (eps_k * (1.0 - idx.s / idx.l)))
    }

    /// `P A_K(e) + A_K(e)^T P + eps I`.
    pub fn lyapunov_lhs(&self, p: &Matrix, e: &Vector, eps: f64) -> Result<Matrix> {
        let a = self.a_k(e)?;
        let n = a.nrows();
        Ok(p * &a + a.transpose() * p + Matrix::identity(n, n) * eps)
    }

    /// `P A_K(e) + A_K(e)^T P + P G G^T P / gamma^2 + I`.
    pub fn hji_matrix(&self, p: &Matrix, e: &Vector, gamma: f64) -> Result<Matrix> {
        let a = self.a_k(e)?;
        let n = a.nrows();
        let pg = p * &self.g;
        Ok(p * &a + a.transpose() * p + &pg * pg.transpose() / (gamma * gamma) + Matrix::identity(n, n))
    }

    /// Checks the common-`P` inequality at every grid node of `region`.
    pub fn audit_common_p(&self, p: &Matrix, region: &Region, eps: f64) -> Result<CommonPAudit> {
        let points = region.points();
        let worst: Vec<f64> = points
            .par_iter()
            .map(|e| linalg::max_symmetric_eigenvalue(&self.lyapunov_lhs(p, e, eps)?))
            .collect::<Result<_>>()?;
        let scale = p.norm().max(1.0);
        let residual: Vec<(Vector, f64)> = points
            .into_iter()
            .zip(worst)
            .filter(|(_, lmax)| *lmax > LMI_TOL * scale)
            .collect();
        let total = region.shape().iter().product();
        Ok(CommonPAudit {
            total,
            satisfied: total - residual.len(),
            residual,
        })
    }

    /// Scans `L_K` along `axis` through the origin over the region's extent.
    pub fn zero_line(&self, region: &Region, axis: usize) -> Result<ZeroLine> {
        region.validate()?;
        if axis >= region.dim() || region.dim() != self.plant.state_dim() {
            return Err(Error::InvalidArgument(format!("scan axis {axis} out of range")));
        }
        let (lo, hi) = (region.lo[axis], region.hi[axis]);
        let mut coords = region.axis_points(axis);
        if coords.last().is_some_and(|&c| c < hi - 1e-12) {
            coords.push(hi);
        }
        if !coords.iter().any(|c| c.abs() <= 1e-12) {
            let pos = coords.partition_point(|&c| c < 0.0);
            coords.insert(pos, 0.0);
        }
        let at = |c: f64| {
            let mut e = Vector::zeros(region.dim());
            e[axis] = c;
            e
        };
        let values: Vec<f64> = coords
            .par_iter()
            .map(|&c| self.pointwise_index(&at(c)))
            .collect::<Result<_>>()?;

        let cross = |i: usize| {
            let (x0, x1, v0, v1) = (coords[i], coords[i + 1], values[i], values[i + 1]);
            x0 + (x1 - x0) * (-v0) / (v1 - v0)
        };
        let crossings: Vec<f64> = (0..coords.len() - 1)
            .filter(|&i| (values[i] < 0.0) != (values[i + 1] < 0.0))
            .map(cross)
            .collect();

        let origin = coords
            .iter()
            .position(|c| c.abs() <= 1e-12)
            .expect("origin inserted above");
        if values[origin] >= 0.0 {
            return Ok(ZeroLine {
                crossings,
                ..ZeroLine::empty()
            });
        }
        let (lower, upper) = match crossings.as_slice() {
            [] => (lo, hi),
            [only] if *only > 0.0 => (lo, *only),
            [only] => (*only, hi),
            [first, .., last] => (*first, *last),
        };
        Ok(ZeroLine {
            width: upper - lower,
            lower,
            upper,
            crossings,
        })
    }

    /// `L_K(e)` on every node of the region grid.
    pub fn heatmap(&self, region: &Region) -> Result<Heatmap> {
        region.validate()?;
        let points = region.points();
        let values = points
            .par_iter()
            .map(|e| self.pointwise_index(e))
            .collect::<Result<_>>()?;
        Ok(Heatmap {
            shape: region.shape(),
            points,
            values,
        })
    }

    pub fn report(&self, region: &Region, scan: Option<(&Region, usize)>) -> Result<DissipativityReport> {
        let idx = self.region_index(region)?;
        let gamma_star = closed_form_gamma(idx.s, idx.l, &self.g, &self.p_tilde)?;
        let width = scan
            .map(|(r, axis)| self.zero_line(r, axis).map(|z| z.width))
            .transpose()?;
        Ok(DissipativityReport {
            abscissa_origin: -self.m0.epsilon,
            m0: Some(idx.m0),
            s: Some(idx.s),
            l: Some(idx.l),
            p_tilde: Some(self.p_tilde.clone()),
            gamma_star,
            feasible: idx.feasible(),
            width,
        })
    }
}

/// Report that treats a non-Hurwitz `A_K(0)` as infeasible data (`W_K = 0`)
/// instead of an error. Plant evaluation failures still propagate.
pub fn analyze(
    plant: &dyn Plant,
    gains: &PiGains,
    point: LinearizationPoint,
    region: &Region,
    scan: Option<(&Region, usize)>,
) -> Result<DissipativityReport> {
    match Certifier::new(plant, gains, point) {
        Ok(cert) => cert.report(region, scan),
        Err(Error::NotHurwitz { abscissa }) => Ok(DissipativityReport {
            abscissa_origin: abscissa,
            m0: None,
            s: None,
            l: None,
            p_tilde: None,
            gamma_star: None,
            feasible: false,
            width: scan.map(|_| 0.0),
        }),
        Err(e) => Err(e),
    }
}

/// `W_K` with the convention that a non-Hurwitz `A_K(0)` yields zero width.
pub fn zero_line_width(
    plant: &dyn Plant,
    gains: &PiGains,
    point: LinearizationPoint,
    region: &Region,
    axis: usize,
) -> Result<ZeroLine> {
    match Certifier::new(plant, gains, point) {
        Ok(cert) => cert.zero_line(region, axis),
        Err(Error::NotHurwitz { .. }) => Ok(ZeroLine::empty()),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::{LinearPlant, UavPlant};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v(x: &[f64]) -> Vector {
        Vector::from_row_slice(x)
    }

    fn k4() -> PiGains {
        PiGains::uav_benchmark().shifted(0.5).unwrap()
    }

    #[test]
    fn zero_gain_gives_d1() {
        let p = UavPlant::default();
        let zero = PiGains::new(Matrix::zeros(2, 2), Matrix::zeros(2, 2)).unwrap();
        let sys = assemble(&p, &zero, &v(&[0.1, 0.2]), LinearizationPoint::Trim).unwrap();
        assert_eq!(sys.a_k, sys.d1);
    }

    #[test]
    fn uav_blocks_at_origin() {
        let p = UavPlant::default();
        let k = PiGains::uav_benchmark();
        let sys = assemble(&p, &k, &v(&[0.0, 0.0]), LinearizationPoint::Trim).unwrap();
        let mut g = Matrix::zeros(4, 2);
        g[(0, 0)] = -1.0;
        g[(1, 1)] = -1.0;
        assert_eq!(sys.g, g);

        // Hand-assembled: top-left = J_e + J_u K_P, top-right = J_u K_I with J_u = -(g/V) I.
        let c = 9.81 / 25.0;
        let top_left =
            Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, c * (std::f64::consts::PI / 12.0).sin()]) - &k.kp * c;
        let top_right = -&k.ki * c;
        assert_relative_eq!(sys.a_k.view((0, 0), (2, 2)).into_owned(), top_left, epsilon = 1e-14);
        assert_relative_eq!(sys.a_k.view((0, 2), (2, 2)).into_owned(), top_right, epsilon = 1e-14);
        assert_eq!(sys.a_k.view((2, 0), (2, 2)).into_owned(), Matrix::identity(2, 2));
        assert_eq!(sys.a_k.view((2, 2), (2, 2)).into_owned(), Matrix::zeros(2, 2));
    }

    #[test]
    fn reference_linearization_agrees_for_uav() {
        // phi = 0 at both points, so J_u does not depend on n_z.
        let p = UavPlant::default();
        let k = PiGains::uav_benchmark();
        let e = v(&[0.2, -0.3]);
        let trim = assemble(&p, &k, &e, LinearizationPoint::Trim).unwrap();
        let reference = assemble(&p, &k, &e, LinearizationPoint::Reference).unwrap();
        assert_eq!(trim.a_k, reference.a_k);
    }

    #[test]
    fn singular_roll_rejected() {
        struct Rolled(UavPlant);
        impl Plant for Rolled {
            fn state_dim(&self) -> usize {
                2
            }
            fn input_dim(&self) -> usize {
                2
            }
            fn disturbance_dim(&self) -> usize {
                2
            }
            fn dynamics(&self, e: &Vector, u: &Vector) -> Result<Vector> {
                self.0.dynamics(e, u)
            }
            fn jac_state(&self, e: &Vector, u: &Vector) -> Result<Matrix> {
                self.0.jac_state(e, u)
            }
            fn jac_input(&self, e: &Vector, u: &Vector) -> Result<Matrix> {
                self.0.jac_input(e, u)
            }
            fn disturbance_matrix(&self) -> Matrix {
                self.0.disturbance_matrix()
            }
            fn reference_input(&self) -> Vector {
                v(&[std::f64::consts::FRAC_PI_2, 1.0])
            }
        }
        let p = Rolled(UavPlant::default());
        let res = assemble(
            &p,
            &PiGains::uav_benchmark(),
            &v(&[0.0, 0.0]),
            LinearizationPoint::Reference,
        );
        assert!(matches!(res, Err(Error::PlantDomain(_))));
    }

    #[test]
    fn pointwise_index_at_origin_is_abscissa() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let l0 = cert.pointwise_index(&v(&[0.0, 0.0])).unwrap();
        assert_eq!(l0, linalg::spectral_abscissa(cert.a0()).unwrap());
    }

    #[test]
    fn pointwise_index_flat_in_course_error() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let l0 = cert.pointwise_index(&v(&[0.0, 0.0])).unwrap();
        assert_eq!(cert.pointwise_index(&v(&[0.5, 0.0])).unwrap(), l0);
        assert_eq!(cert.pointwise_index(&v(&[-0.5, 0.0])).unwrap(), l0);
    }

    #[test]
    fn pointwise_index_nearly_symmetric_in_flight_path_error() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        for eg in [0.05, 0.1, 0.2, 0.3] {
            let up = cert.pointwise_index(&v(&[0.0, eg])).unwrap();
            let down = cert.pointwise_index(&v(&[0.0, -eg])).unwrap();
            assert!((up - down).abs() < 0.05, "eg={eg}: {up} vs {down}");
        }
    }

    #[test]
    fn non_hurwitz_gain_is_an_error_for_certifier_and_data_for_analyze() {
        let p = UavPlant::default();
        let bad = PiGains::uav_benchmark().shifted(10.0).unwrap();
        assert!(matches!(
            Certifier::new(&p, &bad, LinearizationPoint::Trim),
            Err(Error::NotHurwitz { .. })
        ));
        let region = Region::uav_benchmark_regions()[3].clone();
        let rep = analyze(
            &p,
            &bad,
            LinearizationPoint::Trim,
            &region,
            Some((&Region::uav_heatmap(), 1)),
        )
        .unwrap();
        assert!(!rep.feasible);
        assert_eq!(rep.gamma_star, None);
        assert_eq!(rep.width, Some(0.0));
        let zl = zero_line_width(&p, &bad, LinearizationPoint::Trim, &Region::uav_heatmap(), 1).unwrap();
        assert_eq!(zl.width, 0.0);
    }

    #[test]
    fn degenerate_region_is_the_origin() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let idx = cert.region_index(&Region::origin(2)).unwrap();
        assert_eq!(idx.s, 0.0);
        assert_eq!(idx.l, linalg::spectral_abscissa(cert.a0()).unwrap());
        let hm = cert.heatmap(&Region::origin(2)).unwrap();
        assert_eq!(hm.values.len(), 1);
    }

    #[test]
    fn course_only_region_matches_slice() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let wide = Region::new(vec![-0.7, -0.2], vec![0.7, 0.2], vec![0.05, 0.01]).unwrap();
        let slice = Region::new(vec![0.0, -0.2], vec![0.0, 0.2], vec![0.05, 0.01]).unwrap();
        let a = cert.region_index(&wide).unwrap();
        let b = cert.region_index(&slice).unwrap();
        assert_eq!(a.l, b.l);
        assert_eq!(a.s, b.s);
    }

    #[test]
    fn k4_is_feasible_on_largest_region() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &k4(), LinearizationPoint::Trim).unwrap();
        let idx = cert.region_index(&Region::uav_benchmark_regions()[0]).unwrap();
        assert!(idx.l < 0.0, "L = {}", idx.l);
    }

    #[test]
    fn k4_smallest_region_gamma_near_reported_value() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &k4(), LinearizationPoint::Trim).unwrap();
        let gamma = cert
            .gamma_star_closed_form(&Region::uav_benchmark_regions()[3])
            .unwrap()
            .unwrap();
        assert!((gamma - 5.07).abs() <= 0.5 * 5.07, "gamma = {gamma}");
    }

    #[test]
    fn closed_form_unit_case_and_homogeneity() {
        let g = Matrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let p = Matrix::identity(2, 2);
        assert_relative_eq!(closed_form_gamma(0.0, -1.0, &g, &p).unwrap().unwrap(), 2.0);
        let lmi = lmi_gamma(0.0, -1.0, &g, &p, 1e-8).unwrap().unwrap();
        assert!((lmi - 2.0).abs() <= 1e-8);
        for c in [0.3, 2.0, 17.0] {
            let scaled = closed_form_gamma(0.4, -1.3, &(&g * c), &p).unwrap().unwrap();
            let base = closed_form_gamma(0.4, -1.3, &g, &p).unwrap().unwrap();
            assert_relative_eq!(scaled, c * base, max_relative = 1e-14);
        }
        assert_eq!(closed_form_gamma(0.1, 0.0, &g, &p).unwrap(), None);
        assert_eq!(lmi_gamma(0.1, 0.2, &g, &p, 1e-8).unwrap(), None);
        assert!(lmi_gamma(0.0, -1.0, &g, &p, 0.0).is_err());
    }

    #[test]
    fn lmi_strict_below_optimum() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let region = &Region::uav_benchmark_regions()[3];
        let idx = cert.region_index(region).unwrap();
        let gamma = cert.gamma_star_closed_form(region).unwrap().unwrap();
        let block = lmi_block(idx.s, idx.l, cert.g(), cert.p_tilde());
        let eye = Matrix::identity(block.nrows(), block.nrows());
        assert!(!linalg::is_negative_semidefinite(
            &(&block - &eye * (0.99 * gamma)),
            0.0
        ));
        assert!(linalg::is_negative_semidefinite(
            &(&block - &eye * (gamma * (1.0 + 1e-12))),
            0.0
        ));
    }

    #[test]
    fn common_p_scaling() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let at_origin = cert.common_p(&Region::origin(2), 2.0).unwrap();
        assert_relative_eq!(at_origin, cert.p_tilde() * 2.0, max_relative = 1e-14);
        let big = cert.common_p(&Region::uav_benchmark_regions()[2], 3.0).unwrap();
        assert!(big.clone().cholesky().is_some());
        assert!((&big - big.transpose()).amax() == 0.0);
        assert!(cert.common_p(&Region::origin(2), 1.0).is_err());
    }

    #[test]
    fn common_p_refused_on_infeasible_region() {
        let p = UavPlant::default();
        let k6 = PiGains::uav_benchmark().shifted(1.0).unwrap();
        let cert = Certifier::new(&p, &k6, LinearizationPoint::Trim).unwrap();
        let res = cert.common_p(&Region::uav_benchmark_regions()[0], 2.0);
        assert!(matches!(res, Err(Error::Infeasible { .. })));
    }

    #[test]
    fn full_span_width_when_everywhere_negative() {
        // Linear plant: A_K is constant so L_K(e) = abscissa(A_K(0)) < 0 everywhere.
        let plant = LinearPlant::new(
            Matrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]),
            Matrix::identity(2, 2),
            Matrix::identity(2, 2),
        )
        .unwrap();
        let gains = PiGains::new(-Matrix::identity(2, 2), -Matrix::identity(2, 2)).unwrap();
        let cert = Certifier::new(&plant, &gains, LinearizationPoint::Trim).unwrap();
        let zl = cert.zero_line(&Region::uav_heatmap(), 1).unwrap();
        assert_relative_eq!(zl.width, std::f64::consts::PI / 3.0, epsilon = 1e-12);
        assert!(zl.crossings.is_empty());
    }

    #[test]
    fn heatmap_grid_size() {
        let region = Region::uav_heatmap();
        let pi = std::f64::consts::PI;
        let expected = ((2.0 * pi / 3.0 / 0.05).floor() as usize + 1) * ((pi / 3.0 / 0.01).floor() as usize + 1);
        assert_eq!(region.points().len(), expected);
        assert_eq!(region.shape(), vec![42, 105]);
    }

    #[test]
    fn heatmap_columns_constant_in_course_error() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let region = Region::new(vec![-0.3, -0.2], vec![0.3, 0.2], vec![0.1, 0.05]).unwrap();
        let hm = cert.heatmap(&region).unwrap();
        let cols = hm.shape[1];
        for (i, val) in hm.values.iter().enumerate() {
            assert_eq!(*val, hm.values[i % cols]);
        }
    }

    #[test]
    fn region_validation() {
        assert!(Region::new(vec![0.1], vec![0.5], vec![0.1]).is_err());
        assert!(Region::new(vec![0.5], vec![-0.5], vec![0.1]).is_err());
        assert!(Region::new(vec![-0.5], vec![0.5], vec![0.0]).is_err());
        assert!(Region::new(vec![-0.5, 0.0], vec![0.5], vec![0.1]).is_err());
        let r = Region::symmetric(&[0.1, 0.06], &[0.05, 0.01]).unwrap();
        assert_eq!(r.shape(), vec![5, 13]);
        assert!(r.contains(&[0.1, -0.06]));
        assert!(!r.contains(&[0.11, 0.0]));
    }

    #[test]
    fn hji_holds_where_common_p_inequality_holds() {
        let p = UavPlant::default();
        let cert = Certifier::new(&p, &PiGains::uav_benchmark(), LinearizationPoint::Trim).unwrap();
        let region = &Region::uav_benchmark_regions()[3];
        let pmat = cert.common_p(region, 2.0).unwrap();
        let gamma = cert.gamma_star_closed_form(region).unwrap().unwrap();
        let scale = pmat.norm();
        for e in region.points() {
            let lhs = cert.lyapunov_lhs(&pmat, &e, 2.0).unwrap();
            if linalg::is_negative_semidefinite(&lhs, LMI_TOL * scale) {
                let hji = cert.hji_matrix(&pmat, &e, gamma).unwrap();
                assert!(
                    linalg::is_negative_semidefinite(&hji, LMI_TOL * scale),
                    "HJI fails at {e}"
                );
            }
        }
    }

    fn random_gains() -> impl Strategy<Value = PiGains> {
        proptest::collection::vec(-2.0f64..2.0, 8).prop_map(|v| {
            PiGains::new(
                Matrix::from_row_slice(2, 2, &v[..4]),
                Matrix::from_row_slice(2, 2, &v[4..]),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn decomposition_identity(k in random_gains(), eg in -0.5f64..0.5) {
            let p = UavPlant::default();
            let sys = assemble(&p, &k, &v(&[0.1, eg]), LinearizationPoint::Trim).unwrap();
            prop_assert_eq!(&sys.a_k, &(&sys.d1 + &sys.d2 * k.stacked()));
        }

        #[test]
        fn pointwise_index_dominates_abscissa(shift in -3.0f64..0.3, eg in -0.5f64..0.5) {
            let p = UavPlant::default();
            let k = PiGains::uav_benchmark().shifted(shift).unwrap();
            let cert = Certifier::new(&p, &k, LinearizationPoint::Trim).unwrap();
            let e = v(&[0.0, eg]);
            let abscissa = linalg::spectral_abscissa(&cert.a_k(&e).unwrap()).unwrap();
            prop_assert!(cert.pointwise_index(&e).unwrap() >= abscissa);
        }

        #[test]
        fn region_index_monotone_under_inclusion(shift in -3.0f64..0.3, inner in 1usize..10, extra in 1usize..10) {
            let p = UavPlant::default();
            let k = PiGains::uav_benchmark().shifted(shift).unwrap();
            let cert = Certifier::new(&p, &k, LinearizationPoint::Trim).unwrap();
            let step = 0.02;
            let small = Region::symmetric(&[0.0, inner as f64 * step], &[0.05, step]).unwrap();
            let large = Region::symmetric(&[0.0, (inner + extra) as f64 * step], &[0.05, step]).unwrap();
            let a = cert.region_index(&small).unwrap();
            let b = cert.region_index(&large).unwrap();
            prop_assert!(a.l <= b.l + 1e-12);
            prop_assert!(a.s <= b.s + 1e-12);
            if let (Some(ga), Some(gb)) = (
                closed_form_gamma(a.s, a.l, cert.g(), cert.p_tilde()).unwrap(),
                closed_form_gamma(b.s, b.l, cert.g(), cert.p_tilde()).unwrap(),
            ) {
                prop_assert!(ga <= gb * (1.0 + 1e-12));
            }
        }
    }
}

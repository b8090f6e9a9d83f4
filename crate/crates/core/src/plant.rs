//! Disturbed nonlinear plants `e' = f(e, u) + Gamma w` and the UAV guidance
//! benchmark.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// A plant with evaluable dynamics and Jacobians.
///
/// Implementations must be pure: the analysis evaluates them concurrently
/// across grid points.
pub trait Plant: Send + Sync {
    fn state_dim(&self) -> usize;
    fn input_dim(&self) -> usize;
    fn disturbance_dim(&self) -> usize;

    /// `f(e, u)`.
    fn dynamics(&self, e: &Vector, u: &Vector) -> Result<Vector>;
    /// `df/de`, `n x n`.
    fn jac_state(&self, e: &Vector, u: &Vector) -> Result<Matrix>;
    /// `df/du`, `n x m`.
    fn jac_input(&self, e: &Vector, u: &Vector) -> Result<Matrix>;
    /// `Gamma`, `n x l`.
    fn disturbance_matrix(&self) -> Matrix;

    /// Input that makes `f(e, u) = 0`, when one is known in closed form.
    fn trim(&self, _e: &Vector) -> Option<Vector> {
        None
    }

    /// Nominal reference input.
    fn reference_input(&self) -> Vector {
        Vector::zeros(self.input_dim())
    }

    fn state_names(&self) -> Vec<String> {
        (1..=self.state_dim()).map(|i| format!("e_{i}")).collect()
    }
}

/// Where the input Jacobian is evaluated when building `A_K(e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearizationPoint {
    /// `u = trim(e)`, falling back to the reference input.
    #[default]
    Trim,
    /// `u` = the plant's reference input for every `e`.
    Reference,
}

impl LinearizationPoint {
    pub fn input_at(self, plant: &dyn Plant, e: &Vector) -> Vector {
        match self {
            Self::Trim => plant.trim(e).unwrap_or_else(|| plant.reference_input()),
            Self::Reference => plant.reference_input(),
        }
    }
}

/// Physical and disturbance parameters of the UAV guidance model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UavParams {
    /// Airspeed (m/s).
    #[serde(rename = "V")]
    pub speed: f64,
    /// Gravity (m/s^2).
    pub g: f64,
    /// Reference climb angle (rad).
    pub gamma_c: f64,
    /// Reference azimuth (rad).
    pub chi_c: f64,
    #[serde(rename = "L_d_chi")]
    pub amp_chi: f64,
    #[serde(rename = "L_d_gamma")]
    pub amp_gamma: f64,
    #[serde(rename = "omega_chi")]
    pub freq_chi: f64,
    #[serde(rename = "omega_gamma")]
    pub freq_gamma: f64,
}

impl Default for UavParams {
    fn default() -> Self {
        Self {
            speed: 25.0,
            g: 9.81,
            gamma_c: std::f64::consts::PI / 12.0,
            chi_c: 0.0,
            amp_chi: 0.1,
            amp_gamma: 0.1,
            freq_chi: 0.15,
            freq_gamma: 0.15,
        }
    }
}

impl UavParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.speed,
            self.g,
            self.gamma_c,
            self.chi_c,
            self.amp_chi,
            self.amp_gamma,
            self.freq_chi,
            self.freq_gamma,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("UAV parameters must be finite".into()));
        }
        if self.speed <= 0.0 || self.g <= 0.0 {
            return Err(Error::InvalidArgument("UAV speed and gravity must be positive".into()));
        }
        Ok(())
    }

    /// `d = [L_chi sin(w_chi t), L_gamma cos(w_gamma t)]` and its time derivative.
    pub fn disturbance(&self, t: f64) -> (Vector, Vector) {
        let d = Vector::from_vec(vec![
            self.amp_chi * (self.freq_chi * t).sin(),
            self.amp_gamma * (self.freq_gamma * t).cos(),
        ]);
        let d_dot = Vector::from_vec(vec![
            self.amp_chi * self.freq_chi * (self.freq_chi * t).cos(),
            -self.amp_gamma * self.freq_gamma * (self.freq_gamma * t).sin(),
        ]);
        (d, d_dot)
    }

    /// Initial error `(chi_c - chi0, gamma_c - gamma0)` for given initial angles.
    pub fn initial_error(&self, chi0: f64, gamma0: f64) -> Vector {
        Vector::from_vec(vec![self.chi_c - chi0, self.gamma_c - gamma0])
    }
}

/// Course / flight-path error dynamics of a fixed-wing UAV with roll angle and
/// normal load factor as inputs: `e = [e_chi, e_gamma]`, `u = [phi, n_z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UavPlant {
    pub params: UavParams,
}

impl UavPlant {
    pub fn new(params: UavParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    fn g_over_v(&self) -> f64 {
        self.params.g / self.params.speed
    }

    fn check_dims(e: &Vector, u: &Vector) -> Result<()> {
        if e.len() != 2 || u.len() != 2 {
            return Err(Error::Dimension(format!(
                "UAV model expects e, u of length 2, got {} and {}",
                e.len(),
                u.len()
            )));
        }
        Ok(())
    }

    fn check_roll(phi: f64) -> Result<()> {
        if !phi.is_finite() || phi.abs() >= FRAC_PI_2 || phi.cos().abs() < 1e-12 {
            return Err(Error::PlantDomain(format!("roll angle {phi} outside (-pi/2, pi/2)")));
        }
        Ok(())
    }
}

impl Plant for UavPlant {
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
        Self::check_dims(e, u)?;
        let (phi, nz) = (u[0], u[1]);
        Self::check_roll(phi)?;
        let k = self.g_over_v();
        Ok(Vector::from_vec(vec![
            -k * phi.tan(),
            -k * (nz * phi.cos() - (self.params.gamma_c - e[1]).cos()),
        ]))
    }

    fn jac_state(&self, e: &Vector, u: &Vector) -> Result<Matrix> {
        Self::check_dims(e, u)?;
        Self::check_roll(u[0])?;
        let k = self.g_over_v();
        Ok(Matrix::from_row_slice(
            2,
            2,
            &[0.0, 0.0, 0.0, k * (self.params.gamma_c - e[1]).sin()],
        ))
    }

    fn jac_input(&self, e: &Vector, u: &Vector) -> Result<Matrix> {
        Self::check_dims(e, u)?;
        let (phi, nz) = (u[0], u[1]);
        Self::check_roll(phi)?;
        let k = self.g_over_v();
        let sec = 1.0 / phi.cos();
        Ok(Matrix::from_row_slice(
            2,
            2,
            &[-k * sec * sec, 0.0, k * nz * phi.sin(), -k * phi.cos()],
        ))
    }

    fn disturbance_matrix(&self) -> Matrix {
        -Matrix::identity(2, 2)
    }

    fn trim(&self, e: &Vector) -> Option<Vector> {
        let eg = *e.get(1)?;
        Some(Vector::from_vec(vec![0.0, (self.params.gamma_c - eg).cos()]))
    }

    fn state_names(&self) -> Vec<String> {
        vec!["e_chi".into(), "e_gamma".into()]
    }
}

/// `f(e, u) = A e + B u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPlant {
    pub a: Matrix,
    pub b: Matrix,
    pub gamma: Matrix,
}

impl LinearPlant {
    pub fn new(a: Matrix, b: Matrix, gamma: Matrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.nrows() != n || gamma.nrows() != n {
            return Err(Error::Dimension("A must be n x n and B, Gamma must have n rows".into()));
        }
        Ok(Self { a, b, gamma })
    }
}

impl Plant for LinearPlant {
    fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    fn disturbance_dim(&self) -> usize {
        self.gamma.ncols()
    }

    fn dynamics(&self, e: &Vector, u: &Vector) -> Result<Vector> {
        if e.len() != self.state_dim() || u.len() != self.input_dim() {
            return Err(Error::Dimension("state or input length".into()));
        }
        Ok(&self.a * e + &self.b * u)
    }

    fn jac_state(&self, _e: &Vector, _u: &Vector) -> Result<Matrix> {
        Ok(self.a.clone())
    }

    fn jac_input(&self, _e: &Vector, _u: &Vector) -> Result<Matrix> {
        Ok(self.b.clone())
    }

    fn disturbance_matrix(&self) -> Matrix {
        self.gamma.clone()
    }
}

/// Max absolute discrepancy between central finite differences of `f` and the
/// plant's analytic Jacobians at `(e, u)`.
pub fn check_jacobians(plant: &dyn Plant, e: &Vector, u: &Vector, h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let je = plant.jac_state(e, u)?;
    let ju = plant.jac_input(e, u)?;
    let mut worst = 0.0_f64;

    for j in 0..e.len() {
        let mut ep = e.clone();
        let mut em = e.clone();
        ep[j] += h;
        em[j] -= h;
        let col = (plant.dynamics(&ep, u)? - plant.dynamics(&em, u)?) / (2.0 * h);
        worst = worst.max((col - je.column(j)).amax());
    }
    for j in 0..u.len() {
        let mut up = u.clone();
        let mut um = u.clone();
        up[j] += h;
        um[j] -= h;
        let col = (plant.dynamics(e, &up)? - plant.dynamics(e, &um)?) / (2.0 * h);
        worst = worst.max((col - ju.column(j)).amax());
    }
    Ok(worst)
}

/// A time-varying disturbance `w(t)` with its derivative.
pub trait DisturbanceSource: Send + Sync {
    fn dim(&self) -> usize;
    /// `(w(t), w'(t))`.
    fn eval(&self, t: f64) -> (Vector, Vector);
}

impl DisturbanceSource for UavParams {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, t: f64) -> (Vector, Vector) {
        self.disturbance(t)
    }
}

/// `w = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoDisturbance(pub usize);

impl DisturbanceSource for NoDisturbance {
    fn dim(&self) -> usize {
        self.0
    }

    fn eval(&self, _t: f64) -> (Vector, Vector) {
        (Vector::zeros(self.0), Vector::zeros(self.0))
    }
}

/// Finite-energy variant `w(t) exp(-rate t)` of another source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decaying<D> {
    pub inner: D,
    pub rate: f64,
}

impl<D: DisturbanceSource> DisturbanceSource for Decaying<D> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, t: f64) -> (Vector, Vector) {
        let (w, w_dot) = self.inner.eval(t);
        let k = (-self.rate * t).exp();
        let d_dot = (w_dot - &w * self.rate) * k;
        (w * k, d_dot)
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// Proportional and integral gain matrices of the MIMO-PI law
/// `u = K_P e + K_I * integral(e)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiGains {
    pub kp: Matrix,
    pub ki: Matrix,
}

impl PiGains {
    pub fn new(kp: Matrix, ki: Matrix) -> Result<Self> {
        if kp.shape() != ki.shape() {
            return Err(Error::Dimension(format!(
                "K_P is {:?} but K_I is {:?}",
                kp.shape(),
                ki.shape()
            )));
        }
        if kp.iter().chain(ki.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { kp, ki })
    }

    /// The controller used for the UAV guidance benchmark.
    pub fn uav_benchmark() -> Self {
        Self {
            kp: Matrix::from_row_slice(2, 2, &[1.6968, 0.5906, -0.5906, 1.9556]),
            ki: Matrix::from_row_slice(2, 2, &[3.4869, 0.1784, -0.1784, 3.4869]),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.kp.nrows()
    }

    pub fn state_dim(&self) -> usize {
        self.kp.ncols()
    }

    /// `K = [K_P, K_I]`, shape `m x 2n`.
    pub fn stacked(&self) -> Matrix {
        let (m, n) = self.kp.shape();
        let mut k = Matrix::zeros(m, 2 * n);
        k.view_mut((0, 0), (m, n)).copy_from(&self.kp);
        k.view_mut((0, n), (m, n)).copy_from(&self.ki);
        k
    }

    /// Inverse of [`PiGains::stacked`].
    pub fn from_stacked(k: &Matrix) -> Result<Self> {
        if !k.ncols().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "stacked K has odd column count {}",
                k.ncols()
            )));
        }
        let n = k.ncols() / 2;
        Self::new(k.columns(0, n).into_owned(), k.columns(n, n).into_owned())
    }

    /// `K - shift * [I, I]`; requires square blocks.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        let (m, n) = self.kp.shape();
        if m != n {
            return Err(Error::Dimension(format!(
                "identity shift needs square gain blocks, got {m}x{n}"
            )));
        }
        let eye = Matrix::identity(n, n) * shift;
        Self::new(&self.kp - &eye, &self.ki - &eye)
    }

    /// Raw PI command for the given error and error integral.
    pub fn command(&self, e: &Vector, integral: &Vector) -> Vector {
        &self.kp * e + &self.ki * integral
    }
}

/// JSON form: `{"kp": [[..],[..]], "ki": [[..],[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainsSpec {
    pub kp: Vec<Vec<f64>>,
    pub ki: Vec<Vec<f64>>,
}

impl From<&PiGains> for GainsSpec {
    fn from(g: &PiGains) -> Self {
        Self {
            kp: matrix_to_rows(&g.kp),
            ki: matrix_to_rows(&g.ki),
        }
    }
}

impl TryFrom<&GainsSpec> for PiGains {
    type Error = Error;

    fn try_from(spec: &GainsSpec) -> Result<Self> {
        PiGains::new(rows_to_matrix(&spec.kp)?, rows_to_matrix(&spec.ki)?)
    }
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<Matrix> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(Matrix::from_row_slice(rows.len(), ncols, &flat))
}

//! Dense real-matrix kernels used by the dissipativity analysis.
//!
//! Everything here works on small dense matrices (the benchmark's augmented
//! system is 4x4). Eigenvalues come from nalgebra's real Schur decomposition;
//! eigenvectors are recovered per eigenvalue cluster as the null space of
//! `A - lambda I` through a complex SVD.

use nalgebra::{Complex, DMatrix, DVector, Schur, SVD};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Eigenvector matrices with a condition number at or above this value are
/// treated as numerically defective.
pub const DIAGONALIZABLE_COND_LIMIT: f64 = 1e8;

/// Time grid used to bound `sup_t ||exp((A^T + eps I) t)||` when the
/// eigenvector route is unavailable.
pub const SUP_SAMPLES: usize = 400;
pub const SUP_T_MIN: f64 = 1e-4;
pub const SUP_T_MAX: f64 = 200.0;
pub const SUP_SAFETY: f64 = 1.05;

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigen-structure of a square real matrix.
#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    pub eigenvalues: Vec<Complex<f64>>,
    pub spectral_abscissa: f64,
    pub is_diagonalizable: bool,
    /// `||V|| ||V^-1||` for the unit-column eigenvector matrix `V`;
    /// infinite when the matrix is not (numerically) diagonalizable.
    pub eigvec_condition: f64,
}

/// Output of [`estimate_m`]: `||exp(A^T t)|| <= m_tilde * exp(-epsilon t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MEstimate {
    pub m_tilde: f64,
    pub epsilon: f64,
    /// Whether the eigenvector-conditioning shortcut was used.
    pub diagonalizable: bool,
}

pub(crate) fn ensure_square(a: &Matrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub(crate) fn ensure_finite(a: &Matrix) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Eigenvalues of a square matrix (complex conjugate pairs included).
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex<f64>>> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITER).ok_or(Error::EigenFailure)?;
    let eigs: Vec<_> = schur.complex_eigenvalues().iter().copied().collect();
    if eigs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigenFailure);
    }
    Ok(eigs)
}

/// Largest real part over the eigenvalues of `a`.
pub fn spectral_abscissa(a: &Matrix) -> Result<f64> {
    let eigs = eigenvalues(a)?;
    if eigs.is_empty() {
        return Err(Error::InvalidArgument("empty matrix has no spectrum".into()));
    }
    Ok(eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Largest singular value.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    ensure_finite(a)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let sv = SVD::new(a.clone(), false, false).singular_values;
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

/// Largest eigenvalue of the symmetric part `(S + S^T) / 2`.
pub fn max_symmetric_eigenvalue(s: &Matrix) -> Result<f64> {
    ensure_square(s)?;
    ensure_finite(s)?;
    let sym = (s + s.transpose()) * 0.5;
    Ok(sym
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `true` iff the largest eigenvalue of `(S + S^T) / 2` is at most `tol`.
pub fn is_negative_semidefinite(s: &Matrix, tol: f64) -> bool {
    match max_symmetric_eigenvalue(s) {
        Ok(lmax) => lmax <= tol,
        Err(_) => false,
    }
}

/// `e^A` via Pade scaling and squaring.
pub fn matrix_exponential(a: &Matrix) -> Result<Matrix> {
    ensure_square(a)?;
    ensure_finite(a)?;
    if a.is_empty() {
        return Ok(a.clone());
    }
    let e = a.exp();
    if e.iter().all(|v| v.is_finite()) {
        Ok(e)
    } else {
        Err(Error::ExpOverflow)
    }
}

/// Solves `A^T X + X A + Q = 0` for Hurwitz `A` and symmetric positive
/// definite `Q` through the Kronecker-vectorized linear system.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let n = ensure_square(a)?;
    ensure_square(q)?;
    if q.nrows() != n {
        return Err(Error::Dimension(format!(
            "A is {n}x{n} but Q is {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    ensure_finite(a)?;
    ensure_finite(q)?;
    let qnorm = q.norm().max(f64::MIN_POSITIVE);
    if (q - q.transpose()).norm() > 1e-12 * qnorm {
        return Err(Error::NotPositiveDefinite);
    }
    if q.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let abscissa = spectral_abscissa(a)?;
    if abscissa >= 0.0 {
        return Err(Error::NotHurwitz { abscissa });
    }

    let at = a.transpose();
    let eye = Matrix::identity(n, n);
    // Column-major vec: vec(A^T X) = (I kron A^T) vec X, vec(X A) = (A^T kron I) vec X.
    let kron = eye.kronecker(&at) + at.kronecker(&eye);
    let rhs = DVector::from_iterator(n * n, q.iter().map(|v| -v));
    let sol = kron.lu().solve(&rhs).ok_or(Error::SingularLyapunov)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularLyapunov);
    }
    let x = Matrix::from_column_slice(n, n, sol.as_slice());
    Ok((&x + x.transpose()) * 0.5)
}

/// Eigenvalues plus eigenvector conditioning.
pub fn spectrum(a: &Matrix) -> Result<SpectrumSummary> {
    let eigenvalues = eigenvalues(a)?;
    if eigenvalues.is_empty() {
        return Err(Error::InvalidArgument("empty matrix has no spectrum".into()));
    }
    let spectral_abscissa = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let eigvec_condition = eigenvector_condition(a, &eigenvalues).unwrap_or(f64::INFINITY);
    Ok(SpectrumSummary {
        eigenvalues,
        spectral_abscissa,
        is_diagonalizable: eigvec_condition < DIAGONALIZABLE_COND_LIMIT,
        eigvec_condition,
    })
}

fn to_complex(a: &Matrix) -> DMatrix<Complex<f64>> {
    a.map(|v| Complex::new(v, 0.0))
}

/// Groups nearly equal eigenvalues so that a repeated eigenvalue contributes
/// a multi-dimensional null space instead of one vector twice.
fn cluster(eigs: &[Complex<f64>], tol: f64) -> Vec<(Complex<f64>, usize)> {
    let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
    for &z in eigs {
        match clusters.iter_mut().find(|(c, k)| (*c / *k as f64 - z).norm() <= tol) {
            Some((sum, k)) => {
                *sum += z;
                *k += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters.into_iter().map(|(sum, k)| (sum / k as f64, k)).collect()
}

/// Condition number of the unit-column eigenvector matrix, or `None` when
/// some cluster lacks a full set of eigenvectors.
fn eigenvector_condition(a: &Matrix, eigs: &[Complex<f64>]) -> Option<f64> {
    let n = a.nrows();
    let scale = a.norm().max(1.0);
    let ac = to_complex(a);
    let mut columns: Vec<DVector<Complex<f64>>> = Vec::with_capacity(n);

    for (lambda, mult) in cluster(eigs, 1e-5 * scale) {
        let shifted = &ac - DMatrix::<Complex<f64>>::identity(n, n) * lambda;
        let svd = SVD::try_new(shifted, false, true, f64::EPSILON, SCHUR_MAX_ITER)?;
        let v_t = svd.v_t.as_ref()?;
        // Singular values are sorted descending; the null space sits at the end.
        for idx in (n - mult)..n {
            if svd.singular_values[idx] > 1e-6 * scale {
                return None;
            }
            let v: DVector<Complex<f64>> = v_t.row(idx).adjoint();
            let norm = v.norm();
            if norm == 0.0 {
                return None;
            }
            columns.push(v / Complex::new(norm, 0.0));
        }
    }

    let p = DMatrix::from_columns(&columns);
    let sv = SVD::try_new(p, false, false, f64::EPSILON, SCHUR_MAX_ITER)?.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 || !smin.is_finite() {
        return None;
    }
    Some((smax / smin).max(1.0))
}

/// Log-spaced sample times on `[SUP_T_MIN, SUP_T_MAX]`.
pub fn sup_time_grid() -> impl Iterator<Item = f64> {
    let ratio = (SUP_T_MAX / SUP_T_MIN).ln();
    (0..SUP_SAMPLES).map(move |k| SUP_T_MIN * (ratio * k as f64 / (SUP_SAMPLES - 1) as f64).exp())
}

/// Estimate of the transient constant of a Hurwitz matrix.
///
/// Returns `epsilon = -spectral_abscissa(A)` and `m_tilde` with
/// `||exp(A^T t)|| <= m_tilde exp(-epsilon t)`. For diagonalizable `A^T` this is
/// the eigenvector condition number; otherwise the supremum of
/// `||exp((A^T + epsilon I) t)||` is sampled on [`sup_time_grid`] and inflated
/// by [`SUP_SAFETY`]. The bound is re-checked on the same grid either way.
pub fn estimate_m(a: &Matrix) -> Result<MEstimate> {
    let n = ensure_square(a)?;
    let at = a.transpose();
    let spec = spectrum(&at)?;
    if spec.spectral_abscissa >= 0.0 {
        return Err(Error::NotHurwitz {
            abscissa: spec.spectral_abscissa,
        });
    }
    let epsilon = -spec.spectral_abscissa;
    let shifted = &at + Matrix::identity(n, n) * epsilon;

    let mut sampled_sup = 1.0_f64;
    for t in sup_time_grid() {
        let norm = spectral_norm(&matrix_exponential(&(&shifted * t))?)?;
        sampled_sup = sampled_sup.max(norm);
    }

    if spec.is_diagonalizable {
        // sup factor is 1 in exact arithmetic; keep the checked bound honest.
        let cond = spec.eigvec_condition;
        let m_tilde = if sampled_sup <= cond * (1.0 + 1e-12) {
            cond
        } else {
            sampled_sup * SUP_SAFETY
        };
        Ok(MEstimate {
            m_tilde,
            epsilon,
            diagonalizable: true,
        })
    } else {
        Ok(MEstimate {
            m_tilde: sampled_sup * SUP_SAFETY,
            epsilon,
            diagonalizable: false,
        })
    }
}

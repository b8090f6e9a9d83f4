//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Complex;
use pi_dissipativity::linalg::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Characteristic polynomial coefficients `[1, c1, ..., cn]` of `det(tI - A)`
/// by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &Matrix) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + Matrix::identity(n, n) * coeffs[k - 1];
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex<f64>| coeffs.iter().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c);
    let radius = 1.0 + coeffs[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

pub fn abscissa_by_char_poly(a: &Matrix) -> f64 {
    poly_roots(&char_poly(a))
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `exp(A)` by Taylor series with scaling and squaring.
pub fn taylor_exp(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm = a.abs().row_sum().max();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);
    let mut term = Matrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `int_0^T exp(A^T t) Q exp(A t) dt` by composite Simpson on `steps` panels,
/// with `T` doubled until the integrand norm falls below `tail`.
pub fn gramian_quadrature(a: &Matrix, q: &Matrix, tail: f64, steps_per_unit: usize) -> Matrix {
    let n = a.nrows();
    let mut t_end = 1.0;
    loop {
        let e = taylor_exp(&(a * t_end));
        if (e.transpose() * q * &e).norm() < tail {
            break;
        }
        t_end *= 2.0;
        assert!(t_end < 1e4, "integrand does not decay");
    }
    let steps = ((t_end * steps_per_unit as f64) as usize).max(2) & !1;
    let h = t_end / steps as f64;
    let step_exp = taylor_exp(&(a * h));
    let mut e = Matrix::identity(n, n);
    let mut acc = Matrix::zeros(n, n);
    for k in 0..=steps {
        let w = if k == 0 || k == steps {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += (e.transpose() * q * &e) * w;
        e = &e * &step_exp;
    }
    acc * (h / 3.0)
}

/// Random matrix with entries in `[-1, 1]`, shifted so its spectral abscissa
/// is at most `-margin`.
pub fn random_hurwitz(r: &mut ChaCha8Rng, n: usize, margin: f64) -> Matrix {
    let a = Matrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0));
    let abscissa = abscissa_by_char_poly(&a);
    a - Matrix::identity(n, n) * (abscissa + margin)
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| r.random_range(-1.0..1.0))
}

/// Prints the one-line verdict for an acceptance criterion. Writes to the
/// process stdout directly so the line survives libtest's output capture.
pub fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "\ncriterion {id} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Prints an informational line next to a verdict.
pub fn note(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "    {text}");
}

//! Spectral quantities of the closed-loop benchmark matrix at the origin.

use pi_dissipativity::dissipativity::assemble;
use pi_dissipativity::linalg::{self, Matrix, Vector};
use pi_dissipativity::{LinearizationPoint, PiGains, UavPlant};

fn main() -> pi_dissipativity::Result<()> {
    let plant = UavPlant::default();
    let a0 = assemble(
        &plant,
        &PiGains::uav_benchmark(),
        &Vector::zeros(2),
        LinearizationPoint::Trim,
    )?
    .a_k;
    println!("A_K(0) = {a0:.4}");

    let spec = linalg::spectrum(&a0)?;
    for z in &spec.eigenvalues {
        println!("lambda = {:.6} {:+.6}i", z.re, z.im);
    }
    println!("abscissa = {:.6}", spec.spectral_abscissa);
    println!("eigenvector condition = {:.4}", spec.eigvec_condition);

    let m = linalg::estimate_m(&a0)?;
    println!(
        "M~ = {:.4} (eps = {:.3e}, diagonalizable: {})",
        m.m_tilde, m.epsilon, m.diagonalizable
    );

    let p = linalg::solve_lyapunov(&a0, &Matrix::identity(4, 4))?;
    let residual = (a0.transpose() * &p + &p * &a0 + Matrix::identity(4, 4)).amax();
    println!("P~ = {p:.5}");
    println!("Lyapunov residual = {residual:.2e}");
    Ok(())
}

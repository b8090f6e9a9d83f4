//! Certifying a user-defined plant: a damped pendulum with torque input.

use pi_dissipativity::dissipativity::Region;
use pi_dissipativity::linalg::{Matrix, Vector};
use pi_dissipativity::plant::{check_jacobians, NoDisturbance};
use pi_dissipativity::sim::{self, SimConfig};
use pi_dissipativity::{Certifier, LinearizationPoint, PiGains, Plant};

/// `theta'' = -sin(theta) - c theta' + u + d` written in first-order form.
struct Pendulum {
    damping: f64,
}

impl Plant for Pendulum {
    fn state_dim(&self) -> usize {
        2
    }
    fn input_dim(&self) -> usize {
        2
    }
    fn disturbance_dim(&self) -> usize {
        2
    }
    fn dynamics(&self, e: &Vector, u: &Vector) -> pi_dissipativity::Result<Vector> {
        Ok(Vector::from_row_slice(&[
            e[1] + u[0],
            -e[0].sin() - self.damping * e[1] + u[1],
        ]))
    }
    fn jac_state(&self, e: &Vector, _u: &Vector) -> pi_dissipativity::Result<Matrix> {
        Ok(Matrix::from_row_slice(2, 2, &[0.0, 1.0, -e[0].cos(), -self.damping]))
    }
    fn jac_input(&self, _e: &Vector, _u: &Vector) -> pi_dissipativity::Result<Matrix> {
        Ok(Matrix::identity(2, 2))
    }
    fn disturbance_matrix(&self) -> Matrix {
        Matrix::identity(2, 2)
    }
}

fn main() -> pi_dissipativity::Result<()> {
    let plant = Pendulum { damping: 0.5 };
    let probe = Vector::from_row_slice(&[0.4, -0.2]);
    println!(
        "Jacobian check: {:.2e}",
        check_jacobians(&plant, &probe, &Vector::zeros(2), 1e-6)?
    );

    let gains = PiGains::new(-2.0 * Matrix::identity(2, 2), -1.0 * Matrix::identity(2, 2))?;
    let cert = Certifier::new(&plant, &gains, LinearizationPoint::Trim)?;
    for half in [0.2, 0.5, 1.0] {
        let region = Region::symmetric(&[half, half], &[0.05, 0.05])?;
        let r = cert.report(&region, Some((&region, 0)))?;
        println!(
            "|e| <= {half}: L = {:+.4}, gamma* = {:?}, W = {:?}",
            r.l.unwrap(),
            r.gamma_star,
            r.width
        );
    }

    let cfg = SimConfig::new(15.0, Vector::from_row_slice(&[0.5, 0.0]));
    let traj = sim::simulate(&plant, &gains, &NoDisturbance(2), &cfg)?;
    println!("|e(15)| = {:.3e}", traj.e.last().unwrap().norm());
    Ok(())
}

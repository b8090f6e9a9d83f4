//! Checks a simulated trajectory from rest against the certified bound: the
//! empirical L2 ratio and the sample-wise dissipation inequality.

use pi_dissipativity::dissipativity::Region;
use pi_dissipativity::linalg::Vector;
use pi_dissipativity::sim::{self, Limits, SimConfig};
use pi_dissipativity::{Certifier, LinearizationPoint, PiGains, UavParams, UavPlant};

fn main() -> pi_dissipativity::Result<()> {
    let params = UavParams::default();
    let plant = UavPlant::new(params)?;
    let gains = PiGains::uav_benchmark();
    let cert = Certifier::new(&plant, &gains, LinearizationPoint::Trim)?;
    let region = &Region::uav_benchmark_regions()[3];
    let gamma = cert
        .gamma_star_closed_form(region)?
        .expect("benchmark gains are feasible");
    let p = cert.common_p(region, 2.0)?;

    let cfg = SimConfig::new(20.0, Vector::zeros(2)).with_limits(Limits::uav());
    let traj = sim::simulate(&plant, &gains, &params, &cfg)?;
    let ratio = sim::empirical_l2_ratio(&traj).expect("started from rest");
    println!("gamma* = {gamma:.4}, empirical ratio = {ratio:.4}");

    let audit = sim::dissipation_audit(&traj, &p, gamma)?;
    println!(
        "{}/{} samples violate the inequality at gamma*",
        audit.violations, audit.samples
    );

    // With no gain budget the inequality must break once the gust is strong
    // enough for the excess to clear the discretisation tolerance.
    let strong = UavParams {
        amp_chi: 1.0,
        amp_gamma: 1.0,
        ..params
    };
    let traj = sim::simulate(&UavPlant::new(strong)?, &gains, &strong, &cfg)?;
    let audit = sim::dissipation_audit(&traj, &p, 0.0)?;
    println!(
        "gamma = 0, strong gust: {}/{} violations, max excess {:.3e} (tolerance {:.1e})",
        audit.violations, audit.samples, audit.max_excess, audit.tolerance
    );
    Ok(())
}

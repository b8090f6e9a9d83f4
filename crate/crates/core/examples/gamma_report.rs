//! Certified L2-gain bound of the benchmark gains on each nested region, by
//! closed form and by LMI bisection.

use pi_dissipativity::dissipativity::{Region, LMI_TOL};
use pi_dissipativity::{Certifier, LinearizationPoint, PiGains, UavPlant};

fn main() -> pi_dissipativity::Result<()> {
    let plant = UavPlant::default();
    let cert = Certifier::new(&plant, &PiGains::uav_benchmark(), LinearizationPoint::Trim)?;
    println!("M0 = {:.4}", cert.m0().m_tilde);
    println!(
        "{:>8} {:>10} {:>10} {:>12} {:>12}",
        "region", "S", "L", "gamma*", "gamma_lmi"
    );
    for (i, region) in Region::uav_benchmark_regions().iter().enumerate() {
        let r = cert.report(region, None)?;
        let lmi = cert.gamma_star_lmi(region, LMI_TOL)?;
        let show = |g: Option<f64>| g.map_or("infeasible".to_string(), |g| format!("{g:.6}"));
        println!(
            "{:>8} {:>10.4} {:>10.4} {:>12} {:>12}",
            format!("Omega{}", i + 1),
            r.s.unwrap_or(f64::NAN),
            r.l.unwrap_or(f64::NAN),
            show(r.gamma_star),
            show(lmi),
        );
    }

    let region = &Region::uav_benchmark_regions()[3];
    let p = cert.common_p(region, 2.0)?;
    let audit = cert.audit_common_p(&p, region, 2.0)?;
    println!("common P holds on {}/{} grid points", audit.satisfied, audit.total);
    Ok(())
}

//! Point-wise index over the error plane and the width of its negative band.
//!
//! Usage: `cargo run --example heatmap [-- <epsilon>]`, where `epsilon` shifts
//! the benchmark gains by `-epsilon [I, I]`.

use pi_dissipativity::dissipativity::Region;
use pi_dissipativity::{Certifier, LinearizationPoint, PiGains, UavPlant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.0);
    let plant = UavPlant::default();
    let gains = PiGains::uav_benchmark().shifted(eps)?;
    let cert = Certifier::new(&plant, &gains, LinearizationPoint::Trim)?;
    let region = Region::uav_heatmap();
    let hm = cert.heatmap(&region)?;

    // Columns are constant in e_chi, so one row summarises the map.
    let cols = hm.shape[1];
    for (p, v) in hm.points.iter().zip(&hm.values).take(cols).step_by(8) {
        let bar = if *v < 0.0 { "-" } else { "+" };
        println!("e_gamma = {:+.3}  L = {:+.4} {bar}", p[1], v);
    }

    let zl = cert.zero_line(&region, 1)?;
    println!("crossings = {:?}", zl.crossings);
    println!("W = {:.4} on [{:.4}, {:.4}]", zl.width, zl.lower, zl.upper);
    Ok(())
}

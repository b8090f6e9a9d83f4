//! Sweeps the shifted benchmark family and picks the smallest certified bound.

use pi_dissipativity::tuner::{self, SweepSpec};
use pi_dissipativity::UavPlant;

fn main() -> pi_dissipativity::Result<()> {
    let plant = UavPlant::default();
    let spec = SweepSpec::uav_benchmark();
    let result = tuner::tune(&plant, &spec)?;

    for (i, c) in result.candidates.iter().enumerate() {
        let gammas: Vec<String> = c
            .reports
            .iter()
            .map(|r| r.gamma_star.map_or("inf".into(), |g| format!("{g:.3}")))
            .collect();
        println!("K{}  W = {:.4}  gamma = [{}]", i + 1, c.width, gammas.join(", "));
    }
    match result.best_gains() {
        Some(k) => println!(
            "selected K{}:\nK_P = {:.4}K_I = {:.4}",
            result.best.unwrap() + 1,
            k.kp,
            k.ki
        ),
        None => println!("no candidate is feasible on the objective region"),
    }
    Ok(())
}

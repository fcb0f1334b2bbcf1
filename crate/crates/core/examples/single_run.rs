//! One 266 nm, single-cycle pulse at 10¹⁵ W/cm² with moving nuclei.
//!
//! `cargo run --release --example single_run`

use h2pulse::config::RunConfig;
use h2pulse::scenario;

fn main() -> h2pulse::Result<()> {
    let cfg = RunConfig::from_preset("fig2a")?;
    let out = scenario::run(&cfg)?;
    let p = out.summary.populations;
    println!("H2 {:.4}  H2+(g) {:.4}  H2+(u) {:.4}  CE {:.4}", p.h2, p.g, p.u, p.ce);
    if let Some(peak) = out.summary.coulomb_explosion.spectrum.peaks.first() {
        println!("Coulomb-explosion peak at {:.2} eV per proton", peak.energy);
    }
    println!("channel sum - 1 = {:.1e}", out.summary.diagnostics.conservation_error);
    Ok(())
}

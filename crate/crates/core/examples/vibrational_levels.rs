//! Vibrational levels of H₂ and of H₂⁺ (1sσg) on the propagation grid.
//!
//! `cargo run --release --example vibrational_levels`

use std::sync::Arc;

use h2pulse::bound::bound_levels;
use h2pulse::grid::{Channel, RadialGrid};
use h2pulse::molecular::MolecularDataset;
use h2pulse::units::HARTREE_EV;

fn main() -> h2pulse::Result<()> {
    let ds = MolecularDataset::bundled();
    let grid = Arc::new(RadialGrid::standard());
    let h2 = bound_levels(&ds.v_h2, &grid, ds.reduced_mass, -1.0, Channel::H2)?;
    let ion = bound_levels(&ds.v_g, &grid, ds.reduced_mass, -0.5, Channel::G)?;
    println!("H2: {} levels, zero-point energy {:.4} eV", h2.len(), (h2[0].energy - ds.v_h2.eval(1.4)?) * HARTREE_EV);
    println!("{:>3} {:>14} {:>14} {:>9}", "v", "E(H2) hartree", "E(H2+) hartree", "<R> H2+");
    for v in 0..h2.len().max(ion.len()) {
        let a = h2.get(v).map_or(String::new(), |l| format!("{:.8}", l.energy));
        let (b, r) = ion.get(v).map_or((String::new(), String::new()), |l| {
            (format!("{:.8}", l.energy), format!("{:.3}", l.wavefunction.mean_r().unwrap_or(f64::NAN)))
        });
        println!("{v:>3} {a:>14} {b:>14} {r:>9}");
    }
    Ok(())
}

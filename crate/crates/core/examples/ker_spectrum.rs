//! Proton kinetic-energy spectra written as CSV, plus the detected peaks.
//!
//! `cargo run --release --example ker_spectrum -- [out_dir]`

use std::path::PathBuf;

use h2pulse::config::RunConfig;
use h2pulse::{output, scenario};

fn main() -> h2pulse::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| PathBuf::from("out/ker_spectrum"), PathBuf::from);
    let mut cfg = RunConfig::from_preset("fig4b")?;
    // a shorter pulse keeps the example quick
    cfg.pulse.cycles = 12.0;
    let out = scenario::run(&cfg)?;
    for path in output::write_run(&dir, &out)? {
        println!("wrote {}", path.display());
    }
    let s = &out.summary;
    for (name, part) in [
        ("Coulomb explosion", &s.coulomb_explosion.spectrum),
        ("photodissociation", &s.photodissociation.spectrum),
    ] {
        print!("{name}: total {:.3e}, peaks", part.integral);
        for p in part.peaks.iter().take(3) {
            print!(" {:.2} eV", p.energy);
        }
        println!();
    }
    Ok(())
}

//! Photon-dressed H₂⁺ curves at 266 nm and their crossings.
//!
//! `cargo run --example dressed_curves`

use h2pulse::config::RunConfig;
use h2pulse::scenario;

fn main() -> h2pulse::Result<()> {
    let cfg = RunConfig::from_preset("fig5")?;
    let d = scenario::dressed(&cfg)?;
    println!("omega = {:.4} hartree, E0 = {:.4} a.u.", cfg.pulse.omega(), cfg.pulse.e0());
    for c in &d.crossings {
        match (c.r_bohr, c.gap_au) {
            (Some(r), Some(gap)) => println!(
                "|g, {}> x |u, {}>: R* = {:.3} bohr, splitting {:.4} eV",
                c.n_g,
                c.n_u,
                r,
                gap * h2pulse::units::HARTREE_EV
            ),
            _ => println!("|g, {}> x |u, {}>: no crossing", c.n_g, c.n_u),
        }
    }
    Ok(())
}

//! PPT ionization rates of H₂ at its equilibrium distance, and of H₂⁺ on both channels.
//!
//! `cargo run --release --example ppt_rates`

use h2pulse::molecular::MolecularDataset;
use h2pulse::rates::{keldysh, ppt_rate, RateModel};
use h2pulse::units::{field_from_intensity, omega_from_wavelength_nm};

fn main() -> h2pulse::Result<()> {
    let ds = MolecularDataset::bundled();
    let ip = ds.ionization_potentials(1.4)?;
    let first = RateModel::first_ionization();
    let second = RateModel::second_ionization();
    for nm in [800.0, 266.0] {
        let omega = omega_from_wavelength_nm(nm);
        println!("{nm} nm");
        println!("{:>12} {:>7} {:>11} {:>11} {:>11}", "I (W/cm2)", "gamma", "W(H2)", "W(g)", "W(u)");
        for i in [1e13, 1e14, 5e14, 1e15, 5e15] {
            let f = field_from_intensity(i);
            println!(
                "{i:>12.1e} {:>7.3} {:>11.3e} {:>11.3e} {:>11.3e}",
                keldysh(f, omega, ip.ip1)?,
                ppt_rate(f, omega, ip.ip1, &first)?,
                ppt_rate(f, omega, ip.ipg, &second)?,
                ppt_rate(f, omega, ip.ipu, &second)?
            );
        }
    }
    Ok(())
}

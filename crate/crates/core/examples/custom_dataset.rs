//! Loading a curve set from disk and checking it before use.
//!
//! A dataset directory holds `manifest.txt` and one two-column table per curve.
//!
//! `cargo run --example custom_dataset -- [dir]`

use h2pulse::molecular::MolecularDataset;

fn main() -> h2pulse::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2").to_string());
    let ds = MolecularDataset::load(&dir)?;
    ds.validate()?;
    println!("{dir}: sha256 {}", ds.checksum());
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "R", "Ip1", "Ip_g", "Ip_u", "mu_ug");
    for r in [1.0, 1.4, 2.0, 3.0, 4.0, 6.0, 10.0] {
        let ip = ds.ionization_potentials(r)?;
        println!("{r:>6.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4}", ip.ip1, ip.ipg, ip.ipu, ds.mu_ug.eval(r)?);
    }
    Ok(())
}

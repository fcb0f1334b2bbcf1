//! Frozen versus moving nuclei for a single 800 nm cycle.
//!
//! `cargo run --release --example frozen_vs_dynamic`

use h2pulse::config::RunConfig;
use h2pulse::propagator::Mode;
use h2pulse::scenario::{self, Setup};

fn main() -> h2pulse::Result<()> {
    let mut cfg = RunConfig::from_preset("fig2b")?;
    let setup = Setup::from_config(&cfg)?;
    let rates = setup.rates(&cfg, cfg.pulse.e0())?;
    for mode in [Mode::Frozen, Mode::Dynamic] {
        cfg.mode = mode;
        let out = scenario::run_with(&cfg, &setup, &rates)?;
        let ce = &out.summary.coulomb_explosion;
        println!(
            "{:<8} CE yield {:.4e}  peak {:>5.2} eV  mean {:.2} eV",
            mode.label(),
            ce.population,
            ce.spectrum.peaks.first().map_or(f64::NAN, |p| p.energy),
            ce.spectrum.mean_energy_ev.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

//! Final populations against peak intensity for a short 800 nm pulse.
//!
//! The rate tables are built once and shared by every point.
//!
//! `cargo run --release --example intensity_scan`

use h2pulse::config::{log_spaced, RunConfig};
use h2pulse::scenario;

fn main() -> h2pulse::Result<()> {
    let mut cfg = RunConfig::from_text(
        "example",
        "scenario = scan\nwavelength_nm = 800\ncycles = 3\nmode = dynamic\n",
    )?;
    cfg.scan_intensities = log_spaced(1e14, 2e15, 5)?;
    let scan = scenario::scan(&cfg)?;
    println!("{:>12} {:>10} {:>10} {:>10}", "I (W/cm2)", "H2", "H2+", "CE");
    for run in &scan.runs {
        let p = run.summary.populations;
        println!("{:>12.3e} {:>10.4} {:>10.4} {:>10.3e}", run.config.pulse.intensity_w_cm2, p.h2, p.ion(), p.ce);
    }
    Ok(())
}

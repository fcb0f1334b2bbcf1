//! CSV and JSON files written for each scenario.
//!
//! Every CSV starts with `#` lines carrying the crate version, the dataset checksum and the
//! effective configuration, followed by one header row. Numbers use the shortest
//! round-trip exponent form, so identical runs give identical bytes.
//!
//! | file | columns |
//! |---|---|
//! | `populations.csv` | `t_fs,E_over_E0,pop_H2,pop_g,pop_u,pop_CE,mean_R_g` |
//! | `spectrum.csv` | `E_eV,P_c,P_diss,P_total` |
//! | `p_vib.csv` | `R_bohr,P_vib` |
//! | `scan.csv` | `intensity_W_cm2,pop_H2,pop_g,pop_u,pop_CE,P_diss,P_c_integral,P_diss_integral,ce_peak_eV,diss_peak_eV` |
//! | `dressed.csv` | `n_g,n_u,R_bohr,V_g_dressed,V_u_dressed,lower,upper` |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::scenario::{DressedOutput, RunOutput, ScanOutput};
use crate::units::au_time_to_fs;

pub const POPULATIONS_HEADER: &str = "t_fs,E_over_E0,pop_H2,pop_g,pop_u,pop_CE,mean_R_g";
pub const SPECTRUM_HEADER: &str = "E_eV,P_c,P_diss,P_total";
pub const P_VIB_HEADER: &str = "R_bohr,P_vib";
pub const SCAN_HEADER: &str =
    "intensity_W_cm2,pop_H2,pop_g,pop_u,pop_CE,P_diss,P_c_integral,P_diss_integral,ce_peak_eV,diss_peak_eV";
pub const DRESSED_HEADER: &str = "n_g,n_u,R_bohr,V_g_dressed,V_u_dressed,lower,upper";

/// Shortest round-trip exponent form.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn provenance(cfg: &RunConfig, sha: &str) -> String {
    let mut s = format!("# h2pulse {}\n# dataset sha256 {sha}\n", env!("CARGO_PKG_VERSION"));
    for line in cfg.echo().lines() {
        let _ = writeln!(s, "# {line}");
    }
    s
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write(path, &s)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn populations_csv(out: &RunOutput) -> String {
    let mut s = provenance(&out.config, &out.dataset_sha256);
    s.push_str(POPULATIONS_HEADER);
    s.push('\n');
    let e0 = out.config.pulse.e0();
    for row in out.result.trace() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            num(au_time_to_fs(row.t)),
            num(row.field / e0),
            num(row.pop_h2),
            num(row.pop_g),
            num(row.pop_u),
            num(row.pop_ce),
            opt(row.mean_r_g)
        );
    }
    s
}

pub fn spectrum_csv(out: &RunOutput) -> String {
    let mut s = provenance(&out.config, &out.dataset_sha256);
    s.push_str(SPECTRUM_HEADER);
    s.push('\n');
    let sp = &out.spectrum;
    for j in 0..sp.energies.len() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            num(sp.energies[j]),
            num(sp.p_c[j]),
            num(sp.p_diss[j]),
            num(sp.p_c[j] + sp.p_diss[j])
        );
    }
    s
}

pub fn p_vib_csv(out: &RunOutput) -> String {
    let mut s = provenance(&out.config, &out.dataset_sha256);
    s.push_str(P_VIB_HEADER);
    s.push('\n');
    let grid = out.result.final_state.psi_g.grid();
    for (r, p) in grid.r().iter().zip(&out.result.final_state.p_vib) {
        let _ = writeln!(s, "{},{}", num(*r), num(*p));
    }
    s
}

/// Writes `populations.csv`, `spectrum.csv`, `p_vib.csv` and `summary.json` into `dir`.
pub fn write_run(dir: &Path, out: &RunOutput) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let files = [
        ("populations.csv", populations_csv(out)),
        ("spectrum.csv", spectrum_csv(out)),
        ("p_vib.csv", p_vib_csv(out)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        write(&path, &body)?;
        written.push(path);
    }
    let path = dir.join("summary.json");
    write_json(&path, &out.summary)?;
    written.push(path);
    Ok(written)
}

/// Subdirectory name for scan point `index`.
pub fn scan_point_dir(index: usize, intensity: f64) -> String {
    format!("point_{index:02}_{intensity:.3e}")
}

pub fn scan_csv(scan: &ScanOutput) -> String {
    let mut s = provenance(&scan.config, &scan.dataset_sha256);
    s.push_str(SCAN_HEADER);
    s.push('\n');
    for run in &scan.runs {
        let sm = &run.summary;
        let p = sm.populations;
        let peak = |v: &[crate::spectra::Peak]| opt(v.first().map(|p| p.energy));
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            num(sm.intensity_w_cm2),
            num(p.h2),
            num(p.g),
            num(p.u),
            num(p.ce),
            num(sm.photodissociation.reference),
            num(sm.coulomb_explosion.spectrum.integral),
            num(sm.photodissociation.spectrum.integral),
            peak(&sm.coulomb_explosion.spectrum.peaks),
            peak(&sm.photodissociation.spectrum.peaks)
        );
    }
    s
}

/// Writes each point into its own subdirectory, then `scan.csv`.
pub fn write_scan(dir: &Path, scan: &ScanOutput) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let mut written = Vec::new();
    for (i, run) in scan.runs.iter().enumerate() {
        let sub = dir.join(scan_point_dir(i, run.config.pulse.intensity_w_cm2));
        written.extend(write_run(&sub, run)?);
    }
    let path = dir.join("scan.csv");
    write(&path, &scan_csv(scan))?;
    written.push(path);
    Ok(written)
}

pub fn dressed_csv(d: &DressedOutput) -> String {
    let mut s = provenance(&d.config, &d.dataset_sha256);
    s.push_str(DRESSED_HEADER);
    s.push('\n');
    for c in &d.curves {
        for i in 0..c.r.len() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.n_g,
                c.n_u,
                num(c.r[i]),
                num(c.diabatic_g[i]),
                num(c.diabatic_u[i]),
                num(c.adiabatic_lower[i]),
                num(c.adiabatic_upper[i])
            );
        }
    }
    s
}

#[derive(Serialize)]
struct DressedSummary<'a> {
    version: &'static str,
    dataset_sha256: &'a str,
    omega_au: f64,
    peak_field_au: f64,
    crossings: &'a [crate::scenario::Crossing],
    config: Vec<String>,
}

/// Writes `dressed.csv` and `crossings.json`.
pub fn write_dressed(dir: &Path, d: &DressedOutput) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let csv = dir.join("dressed.csv");
    write(&csv, &dressed_csv(d))?;
    let json = dir.join("crossings.json");
    write_json(
        &json,
        &DressedSummary {
            version: env!("CARGO_PKG_VERSION"),
            dataset_sha256: &d.dataset_sha256,
            omega_au: d.config.pulse.omega(),
            peak_field_au: d.config.pulse.e0(),
            crossings: &d.crossings,
            config: d.config.echo().lines().map(str::to_string).collect(),
        },
    )?;
    Ok(vec![csv, json])
}

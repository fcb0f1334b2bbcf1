//! End-to-end scenarios: a single pulse, an intensity scan and dressed-curve analysis.

use std::sync::Arc;
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::dressed::{dressed_pair, find_crossing, DressedCurves, CROSSING_RANGE};
use crate::error::{Error, Result};
use crate::grid::{AbsorbingMask, RadialGrid};
use crate::molecular::MolecularDataset;
use crate::propagator::{initial_state, simulate, Populations, RateSet, SimulationResult, StepConfig};
use crate::spectra::{dissociated_fraction, dissociation_spectrum, find_peaks, mean_energy, Peak, Spectrum};
use crate::units::au_time_to_fs;

/// Peaks must dominate this many bins on each side.
pub const PEAK_HALF_WIDTH: usize = 3;
/// Peaks below this fraction of the spectrum maximum are not reported.
pub const PEAK_FLOOR: f64 = 0.05;

/// Dataset and grid shared by every run of a scenario.
#[derive(Debug, Clone)]
pub struct Setup {
    pub dataset: Arc<MolecularDataset>,
    pub grid: Arc<RadialGrid>,
}

impl Setup {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let dataset = match &cfg.dataset {
            Some(dir) => MolecularDataset::load(dir)?,
            None => MolecularDataset::bundled(),
        };
        dataset.validate()?;
        Ok(Self {
            dataset: Arc::new(dataset),
            grid: Arc::new(cfg.grid.build()?),
        })
    }

    /// Rate tables for `cfg`'s wavelength covering peak fields up to `f_max`.
    pub fn rates(&self, cfg: &RunConfig, f_max: f64) -> Result<RateSet> {
        let t0 = Instant::now();
        let rates = RateSet::build(
            &self.dataset,
            &self.grid,
            cfg.pulse.omega(),
            &cfg.first_rate,
            &cfg.second_rate,
            f_max,
        )?;
        info!("rate tables built in {:.2} s", t0.elapsed().as_secs_f64());
        Ok(rates)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    /// `Σ P ΔE`.
    pub integral: f64,
    pub mean_energy_ev: Option<f64>,
    pub peaks: Vec<Peak>,
}

impl SpectrumSummary {
    fn new(energies: &[f64], values: &[f64], de: f64) -> Self {
        Self {
            integral: values.iter().sum::<f64>() * de,
            mean_energy_ev: mean_energy(energies, values),
            peaks: find_peaks(energies, values, PEAK_HALF_WIDTH, PEAK_FLOOR),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoulombExplosion {
    /// Population transferred to the doubly ionized channel.
    pub population: f64,
    /// `∫ P_vib dR`.
    pub p_vib_integral: f64,
    /// Probability mapped above the energy axis.
    pub overflow: f64,
    pub spectrum: SpectrumSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Photodissociation {
    /// Norm of the H₂⁺ packets outside the bound 1sσg levels.
    pub reference: f64,
    pub spectrum: SpectrumSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub dt_au: f64,
    pub duration_fs: f64,
    pub conservation_error: f64,
    pub clamp_events: usize,
    pub boundary_flux: bool,
    pub absorbed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub version: &'static str,
    pub dataset_sha256: String,
    pub mode: &'static str,
    pub wavelength_nm: f64,
    pub intensity_w_cm2: f64,
    pub cycles: f64,
    pub peak_field_au: f64,
    pub populations: Populations,
    pub coulomb_explosion: CoulombExplosion,
    pub photodissociation: Photodissociation,
    pub diagnostics: Diagnostics,
    /// Effective configuration, one `key = value` per entry.
    pub config: Vec<String>,
}

/// Everything produced by one pulse.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub dataset_sha256: String,
    pub result: SimulationResult,
    pub spectrum: Spectrum,
    pub summary: Summary,
}

/// One pulse with freshly built rate tables.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let setup = Setup::from_config(cfg)?;
    let rates = setup.rates(cfg, cfg.pulse.e0())?;
    run_with(cfg, &setup, &rates)
}

/// One pulse reusing `setup` and `rates`.
pub fn run_with(cfg: &RunConfig, setup: &Setup, rates: &RateSet) -> Result<RunOutput> {
    cfg.validate()?;
    let ds = &setup.dataset;
    let grid = &setup.grid;
    let mut step_cfg = StepConfig::new(ds, grid, cfg.pulse, cfg.mode, rates)?;
    step_cfg.trace_every = cfg.trace_every;
    if cfg.absorber_fraction > 0.0 {
        step_cfg.mask = Some(AbsorbingMask::new(grid, cfg.absorber_fraction));
    }
    let chi0 = initial_state(ds, grid)?;

    let t0 = Instant::now();
    let result = simulate(&step_cfg, &chi0)?;
    info!(
        "{:.3e} W/cm2: propagation took {:.2} s",
        cfg.pulse.intensity_w_cm2,
        t0.elapsed().as_secs_f64()
    );

    let fin = &result.final_state;
    let mut spectrum = Spectrum::new(cfg.energy_axis);
    spectrum.deposit_ce(grid, &result.p_vib_cells());
    spectrum.p_diss = dissociation_spectrum(&fin.psi_g, &fin.psi_u, ds, &cfg.energy_axis)?;
    let reference = dissociated_fraction(&fin.psi_g, &fin.psi_u, ds)?;

    let de = cfg.energy_axis.de;
    let p = result.populations;
    let summary = Summary {
        version: env!("CARGO_PKG_VERSION"),
        dataset_sha256: ds.checksum().to_string(),
        mode: cfg.mode.label(),
        wavelength_nm: cfg.pulse.wavelength_nm,
        intensity_w_cm2: cfg.pulse.intensity_w_cm2,
        cycles: cfg.pulse.cycles,
        peak_field_au: cfg.pulse.e0(),
        populations: p,
        coulomb_explosion: CoulombExplosion {
            population: p.ce,
            p_vib_integral: result.p_vib_integral(),
            overflow: spectrum.overflow,
            spectrum: SpectrumSummary::new(&spectrum.energies, &spectrum.p_c, de),
        },
        photodissociation: Photodissociation {
            reference,
            spectrum: SpectrumSummary::new(&spectrum.energies, &spectrum.p_diss, de),
        },
        diagnostics: Diagnostics {
            steps: result.steps,
            dt_au: cfg.pulse.dt(),
            duration_fs: au_time_to_fs(fin.t),
            conservation_error: p.total() + fin.absorbed - 1.0,
            clamp_events: fin.clamp_events,
            boundary_flux: fin.boundary_flux,
            absorbed: fin.absorbed,
        },
        config: cfg.echo().lines().map(str::to_string).collect(),
    };
    Ok(RunOutput {
        config: cfg.clone(),
        dataset_sha256: ds.checksum().to_string(),
        result,
        spectrum,
        summary,
    })
}

#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub config: RunConfig,
    pub dataset_sha256: String,
    /// One run per intensity, in the configured order.
    pub runs: Vec<RunOutput>,
}

/// The configured pulse at each scan intensity; the rate tables are built once.
pub fn scan(cfg: &RunConfig) -> Result<ScanOutput> {
    cfg.validate()?;
    if cfg.scan_intensities.is_empty() {
        return Err(Error::Config("scan has no intensities".into()));
    }
    let setup = Setup::from_config(cfg)?;
    let points: Vec<RunConfig> = cfg
        .scan_intensities
        .iter()
        .map(|&i| {
            let mut c = cfg.clone();
            c.pulse.intensity_w_cm2 = i;
            c.scan_intensities.clear();
            c.scenario = crate::config::Scenario::Run;
            c
        })
        .collect();
    let f_max = 1.05 * points.iter().map(|c| c.pulse.e0()).fold(0.0, f64::max);
    let rates = setup.rates(cfg, f_max)?;
    let runs = points
        .par_iter()
        .map(|c| run_with(c, &setup, &rates))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanOutput {
        config: cfg.clone(),
        dataset_sha256: setup.dataset.checksum().to_string(),
        runs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub n_g: i32,
    pub n_u: i32,
    /// `None` when the diabatic curves do not cross in the search range.
    pub r_bohr: Option<f64>,
    /// Adiabatic splitting `μ(R) E0` at the crossing, hartree.
    pub gap_au: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DressedOutput {
    pub config: RunConfig,
    pub dataset_sha256: String,
    pub curves: Vec<DressedCurves>,
    pub crossings: Vec<Crossing>,
}

/// Dressed H₂⁺ curves for every configured photon pair on `[0.5, 15]` bohr.
pub fn dressed(cfg: &RunConfig) -> Result<DressedOutput> {
    cfg.validate()?;
    let setup = Setup::from_config(cfg)?;
    let ds = &setup.dataset;
    let omega = cfg.pulse.omega();
    let e0 = cfg.pulse.e0();
    let (lo, hi) = CROSSING_RANGE;
    let n = ((hi - lo) / 0.01).round() as usize;
    let r: Vec<f64> = (0..=n).map(|i| lo + i as f64 * 0.01).collect();
    let mut curves = Vec::new();
    let mut crossings = Vec::new();
    for &(n_g, n_u) in &cfg.dressed_pairs {
        curves.push(dressed_pair(ds, omega, e0, n_g, n_u, &r)?);
        let (r_bohr, gap_au) = match find_crossing(ds, omega, n_g, n_u) {
            Ok(rc) => (Some(rc), Some(ds.mu_ug.eval(rc)?.abs() * e0)),
            Err(Error::NoCrossing(..)) => (None, None),
            Err(e) => return Err(e),
        };
        crossings.push(Crossing { n_g, n_u, r_bohr, gap_au });
    }
    Ok(DressedOutput {
        config: cfg.clone(),
        dataset_sha256: ds.checksum().to_string(),
        curves,
        crossings,
    })
}

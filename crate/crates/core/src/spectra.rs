//! Proton kinetic-energy spectra, in eV per proton.
//!
//! The Coulomb-explosion part maps each R to `E = 1/(2R)` hartree per proton. The
//! dissociation part projects the final H₂⁺ packets onto energy-normalized continuum states
//! of each channel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{bound_levels, continuum_state_sampled};
use crate::error::{Error, Result};
use crate::grid::{Channel, RadialGrid, WavePacket};
use crate::molecular::MolecularDataset;
use crate::units::HARTREE_EV;

/// H(1s) + H⁺ limit of both H₂⁺ channels, hartree.
pub const H2PLUS_LIMIT: f64 = -0.5;

/// Per-proton Coulomb-explosion energy in eV at internuclear distance `r` (bohr).
pub fn map_r_to_energy(r: f64) -> f64 {
    HARTREE_EV / (2.0 * r)
}

/// Inverse of [`map_r_to_energy`].
pub fn map_energy_to_r(e_ev: f64) -> f64 {
    HARTREE_EV / (2.0 * e_ev)
}

/// Uniform energy axis `E_j = j ΔE`, `j = 0..=n`; each point is the centre of a bin of width ΔE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyAxis {
    pub e_max: f64,
    pub de: f64,
}

impl Default for EnergyAxis {
    fn default() -> Self {
        Self { e_max: 20.0, de: 0.01 }
    }
}

impl EnergyAxis {
    pub fn new(e_max: f64, de: f64) -> Result<Self> {
        if !(de > 0.0) || !(e_max > de) {
            return Err(Error::Config(format!("bad energy axis: max {e_max} eV, step {de} eV")));
        }
        Ok(Self { e_max, de })
    }

    pub fn len(&self) -> usize {
        (self.e_max / self.de).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| j as f64 * self.de).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub axis: EnergyAxis,
    /// eV per proton.
    pub energies: Vec<f64>,
    /// Coulomb explosion, 1/eV.
    pub p_c: Vec<f64>,
    /// Photodissociation, 1/eV.
    pub p_diss: Vec<f64>,
    /// Coulomb-explosion probability that fell above the axis.
    pub overflow: f64,
}

impl Spectrum {
    pub fn new(axis: EnergyAxis) -> Self {
        let n = axis.len();
        Self {
            axis,
            energies: axis.points(),
            p_c: vec![0.0; n],
            p_diss: vec![0.0; n],
            overflow: 0.0,
        }
    }

    /// Deposits probability `weights[i]` carried by grid point `i`.
    ///
    /// The weights are read as a piecewise-linear density in R (a hat of half-width `dr`
    /// around each point). Each hat is mapped onto the energy axis and integrated exactly
    /// over the bins it overlaps, so the total is conserved and sparse high-energy points
    /// leave no gaps.
    pub fn deposit_ce(&mut self, grid: &RadialGrid, weights: &[f64]) {
        let de = self.axis.de;
        let n = self.p_c.len();
        let top = (n as f64 - 0.5) * de;
        let dr = grid.dr();
        // primitive of the unit-area hat (1 - |x|/dr)/dr, clamped to its support
        let prim = |x: f64| {
            let x = x.clamp(-dr, dr);
            (x - x * x.abs() / (2.0 * dr)) / dr
        };
        let r_top = map_energy_to_r(top);
        for (&r, &w) in grid.r().iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let r_lo = (r - dr).max(1e-12);
            let e_hi = map_r_to_energy(r_lo);
            let e_lo = map_r_to_energy(r + dr);
            if e_hi > top {
                self.overflow += w * (prim(r_top - r) - prim(r_lo - r));
                if e_lo >= top {
                    continue;
                }
            }
            // bin j covers [(j - 1/2) ΔE, (j + 1/2) ΔE]
            let j0 = ((e_lo / de + 0.5).floor() as usize).min(n - 1);
            let j1 = ((e_hi.min(top) / de + 0.5).floor() as usize).min(n - 1);
            for j in j0..=j1 {
                let ea = ((j as f64 - 0.5) * de).max(e_lo);
                let eb = ((j as f64 + 0.5) * de).min(e_hi).min(top);
                if eb > ea {
                    let frac = prim(map_energy_to_r(ea) - r) - prim(map_energy_to_r(eb) - r);
                    self.p_c[j] += w * frac / de;
                }
            }
        }
    }

    /// `Σ P_c ΔE`.
    pub fn ce_integral(&self) -> f64 {
        self.p_c.iter().sum::<f64>() * self.axis.de
    }

    /// `Σ P_diss ΔE`.
    pub fn diss_integral(&self) -> f64 {
        self.p_diss.iter().sum::<f64>() * self.axis.de
    }

    pub fn total(&self) -> Vec<f64> {
        self.p_c.iter().zip(&self.p_diss).map(|(a, b)| a + b).collect()
    }
}

/// Adds one step's Coulomb-explosion yield `[W_g|ψ_g|² + W_u|ψ_u|²] δt` to the spectrum.
pub fn accumulate_ce(
    spec: &mut Spectrum,
    psi_g: &WavePacket,
    psi_u: &WavePacket,
    w_g: &[f64],
    w_u: &[f64],
    dt: f64,
) {
    let grid = psi_g.grid().clone();
    let dr = grid.dr();
    let weights: Vec<f64> = psi_g
        .amp()
        .iter()
        .zip(psi_u.amp())
        .zip(w_g.iter().zip(w_u))
        .map(|((g, u), (wg, wu))| ((wg * dt).min(1.0) * g.norm_sqr() + (wu * dt).min(1.0) * u.norm_sqr()) * dr)
        .collect();
    spec.deposit_ce(&grid, &weights);
}

/// Photodissociation density (1/eV per proton) on the axis points.
///
/// A proton energy `E` corresponds to a total fragment energy `2E` above the H(1s) + H⁺
/// limit; the per-hartree projection density is converted to per-eV and doubled for the
/// per-proton variable.
pub fn dissociation_spectrum(
    psi_g: &WavePacket,
    psi_u: &WavePacket,
    ds: &MolecularDataset,
    axis: &EnergyAxis,
) -> Result<Vec<f64>> {
    let grid = psi_g.grid();
    let vg = ds.v_g.sample(grid.r())?;
    let vu = ds.v_u.sample(grid.r())?;
    let (ng, nu) = (psi_g.norm2(), psi_u.norm2());
    let dr = grid.dr();
    let project = |v: &[f64], wp: &WavePacket, e: f64, ch: Channel| -> Result<f64> {
        let phi = continuum_state_sampled(v, grid, ds.reduced_mass, e, H2PLUS_LIMIT, ch)?;
        let s = phi
            .wavefunction
            .iter()
            .zip(wp.amp())
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, (p, a)| acc + p * a)
            * dr;
        Ok(s.norm_sqr())
    };
    axis.points()
        .par_iter()
        .map(|&e_ev| {
            if e_ev <= 0.0 {
                return Ok(0.0);
            }
            let e = H2PLUS_LIMIT + 2.0 * e_ev / HARTREE_EV;
            let mut p = 0.0;
            if ng > 0.0 {
                p += project(&vg, psi_g, e, Channel::G)?;
            }
            if nu > 0.0 {
                p += project(&vu, psi_u, e, Channel::U)?;
            }
            Ok(2.0 * p / HARTREE_EV)
        })
        .collect()
}

/// Dissociated probability obtained by removing every bound level of 1sσg from the g packet;
/// 2pσu holds no bound levels.
pub fn dissociated_fraction(psi_g: &WavePacket, psi_u: &WavePacket, ds: &MolecularDataset) -> Result<f64> {
    let grid = psi_g.grid();
    let levels = bound_levels(&ds.v_g, grid, ds.reduced_mass, H2PLUS_LIMIT, Channel::G)?;
    let bound: f64 = levels
        .iter()
        .map(|l| l.wavefunction.inner(psi_g).norm_sqr())
        .sum();
    Ok(psi_g.norm2() - bound + psi_u.norm2())
}

/// Pointwise `P_c + P_diss`.
pub fn total_spectrum(p_c: &[f64], p_diss: &[f64]) -> Result<Vec<f64>> {
    if p_c.len() != p_diss.len() {
        return Err(Error::AxisMismatch);
    }
    Ok(p_c.iter().zip(p_diss).map(|(a, b)| a + b).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// eV per proton.
    pub energy: f64,
    /// 1/eV.
    pub height: f64,
}

/// Local maxima that dominate `half_width` bins on each side and reach `rel_floor` of the
/// global maximum; highest first.
pub fn find_peaks(energies: &[f64], values: &[f64], half_width: usize, rel_floor: f64) -> Vec<Peak> {
    let n = values.len();
    let global = values.iter().copied().fold(0.0f64, f64::max);
    if global <= 0.0 || n < 2 * half_width + 1 {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    for j in 0..n {
        let y = values[j];
        if y < rel_floor * global || y <= 0.0 {
            continue;
        }
        let lo = j.saturating_sub(half_width);
        let hi = (j + half_width).min(n - 1);
        // ties go to the leftmost point of a plateau
        let dominates = (lo..j).all(|i| values[i] < y) && (j + 1..=hi).all(|i| values[i] <= y);
        // a peak needs room to fall on both sides, except at the axis ends
        let falls = (j == 0 || values[lo] < y) && (j == n - 1 || values[hi] < y);
        if dominates && falls {
            peaks.push(Peak {
                energy: energies[j],
                height: y,
            });
        }
    }
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
    peaks
}

/// The highest point inside `[e_lo, e_hi]`.
pub fn max_in_window(energies: &[f64], values: &[f64], e_lo: f64, e_hi: f64) -> Option<Peak> {
    energies
        .iter()
        .zip(values)
        .filter(|(e, _)| **e >= e_lo && **e <= e_hi)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(e, v)| Peak { energy: *e, height: *v })
}

/// Probability-weighted mean energy.
pub fn mean_energy(energies: &[f64], values: &[f64]) -> Option<f64> {
    let w: f64 = values.iter().sum();
    (w > 0.0).then(|| energies.iter().zip(values).map(|(e, v)| e * v).sum::<f64>() / w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    #[test]
    fn coulomb_energies() {
        assert_abs_diff_eq!(map_r_to_energy(1.4), 9.7, epsilon = 0.05);
        assert_abs_diff_eq!(map_r_to_energy(1.7), 8.0, epsilon = 0.05);
        assert_abs_diff_eq!(map_r_to_energy(2.0), 6.80, epsilon = 0.005);
        assert_abs_diff_eq!(map_energy_to_r(map_r_to_energy(3.3)), 3.3, epsilon = 1e-12);
    }

    #[test]
    fn single_point_deposit() {
        let grid = RadialGrid::standard();
        let mut s = Spectrum::new(EnergyAxis::default());
        let mut w = vec![0.0; grid.len()];
        let i = grid.index_of(2.0);
        w[i] = 0.25;
        s.deposit_ce(&grid, &w);
        assert_abs_diff_eq!(s.ce_integral(), 0.25, epsilon = 1e-14);
        let peak = find_peaks(&s.energies, &s.p_c, 3, 0.0);
        assert!(!peak.is_empty());
        assert_abs_diff_eq!(s.energies.iter().zip(&s.p_c).map(|(e, p)| e * p).sum::<f64>() * 0.01 / 0.25,
            map_r_to_energy(grid.r()[i]), epsilon = 0.01);
        assert_eq!(s.overflow, 0.0);
    }

    #[test]
    fn deposit_matches_jacobian_mapping() {
        // smooth density on R, compared with P(E) = P(R(E)) |dR/dE| = P(R) 2R² (in hartree)
        let grid = RadialGrid::standard();
        let dens = |r: f64| (-(r - 2.5f64).powi(2) / 0.18).exp() / (0.18 * std::f64::consts::PI).sqrt();
        let w: Vec<f64> = grid.r().iter().map(|&r| dens(r) * grid.dr()).collect();
        let mut s = Spectrum::new(EnergyAxis::default());
        s.deposit_ce(&grid, &w);
        assert_abs_diff_eq!(s.ce_integral() + s.overflow, w.iter().sum::<f64>(), epsilon = 1e-12);
        for (e, p) in s.energies.iter().zip(&s.p_c) {
            if *e < 2.0 || *e > 12.0 {
                continue;
            }
            let r = map_energy_to_r(*e);
            let expect = dens(r) * 2.0 * r * r / HARTREE_EV;
            assert_abs_diff_eq!(*p, expect, epsilon = 1e-5 + 1e-2 * expect);
        }
    }

    #[test]
    fn overflow_is_counted() {
        let grid = RadialGrid::standard();
        let mut s = Spectrum::new(EnergyAxis::default());
        let mut w = vec![0.0; grid.len()];
        w[0] = 0.1; // R = 0.1 → 136 eV
        s.deposit_ce(&grid, &w);
        assert_abs_diff_eq!(s.overflow, 0.1, epsilon = 1e-15);
        assert_eq!(s.ce_integral(), 0.0);
    }

    #[test]
    fn empty_packets_do_not_dissociate() {
        let ds = MolecularDataset::bundled();
        let grid = Arc::new(RadialGrid::standard());
        let g = WavePacket::zeros(grid.clone(), Channel::G);
        let u = WavePacket::zeros(grid, Channel::U);
        let axis = EnergyAxis::new(2.0, 0.1).unwrap();
        assert!(dissociation_spectrum(&g, &u, &ds, &axis).unwrap().iter().all(|p| *p == 0.0));
    }

    #[test]
    fn total_needs_matching_axes() {
        assert!(matches!(total_spectrum(&[1.0], &[1.0, 2.0]), Err(Error::AxisMismatch)));
        assert_eq!(total_spectrum(&[0.0, 0.0], &[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn peak_finder() {
        let e: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let y: Vec<f64> = e
            .iter()
            .map(|&x| (-(x - 2.7f64).powi(2) / 0.1).exp() + 0.3 * (-(x - 6.0f64).powi(2) / 0.2).exp())
            .collect();
        let p = find_peaks(&e, &y, 3, 1e-3);
        assert_eq!(p.len(), 2);
        assert_abs_diff_eq!(p[0].energy, 2.7, epsilon = 1e-9);
        assert_abs_diff_eq!(p[1].energy, 6.0, epsilon = 1e-9);
        assert!(find_peaks(&e, &vec![0.0; 200], 3, 0.0).is_empty());
    }
}

//! Numerov solutions of the radial nuclear Schrödinger equation
//! `-1/(2m) ψ'' + V ψ = E ψ` on a [`RadialGrid`].
//!
//! Bound states obey Dirichlet conditions one step outside the first grid point and at the
//! last grid point. Continuum states are energy normalized.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Channel, RadialGrid, WavePacket};
use crate::molecular::CurveTable;

const RESCALE: f64 = 1e150;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone)]
pub struct BoundState {
    /// Hartree.
    pub energy: f64,
    /// Real, normalized to `Σ ψ² dr = 1`.
    pub wavefunction: WavePacket,
    pub node_count: usize,
}

#[derive(Debug, Clone)]
pub struct ContinuumState {
    /// Hartree, above the channel threshold.
    pub energy: f64,
    pub wavefunction: Vec<f64>,
    pub channel: Channel,
    pub asymptotic_k: f64,
    /// Phase of the fitted `sin(kR + δ)`.
    pub phase: f64,
}

/// Samples a curve on the grid points.
pub fn sample_on_grid(curve: &CurveTable, grid: &RadialGrid) -> Result<Vec<f64>> {
    curve.sample(grid.r())
}

struct Numerov<'a> {
    h2: f64,
    two_m: f64,
    v: &'a [f64],
}

impl Numerov<'_> {
    /// Numerov weight `1 + h² q / 12`. Deep under a barrier `q` is capped so the weight stays
    /// positive; the solution there is negligible and only has to keep growing.
    fn c(&self, i: usize, e: f64) -> f64 {
        let q = (self.two_m * (e - self.v[i])).max(-6.0 / self.h2);
        1.0 + self.h2 / 12.0 * q
    }

    /// `ψ_j` from `ψ_i` and the value on the other side of `i` (`j = i ± 1`).
    /// Index -1 lies outside the grid, where ψ = 0.
    fn next(&self, other: f64, cur: f64, i: usize, j: usize, e: f64) -> f64 {
        let k = 2 * i as isize - j as isize;
        let ck = if k < 0 { 1.0 } else { self.c(k as usize, e) };
        ((12.0 - 10.0 * self.c(i, e)) * cur - ck * other) / self.c(j, e)
    }

    /// Number of sign changes of the outward solution on points `0..n-1`.
    fn count_nodes(&self, e: f64) -> usize {
        let n = self.v.len();
        let (mut prev, mut cur) = (0.0, 1e-30);
        let mut nodes = 0;
        for i in 0..n - 1 {
            let nxt = self.next(prev, cur, i, i + 1, e);
            if nxt == 0.0 || (nxt < 0.0) != (cur < 0.0) {
                nodes += 1;
            }
            prev = cur;
            cur = nxt;
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
            }
        }
        // a zero landing exactly on the boundary belongs to the level below
        if cur == 0.0 {
            nodes -= 1;
        }
        nodes
    }

    fn outward(&self, e: f64, upto: usize) -> Vec<f64> {
        let mut psi = vec![0.0; upto + 1];
        psi[0] = 1e-30;
        let mut prev = 0.0;
        for i in 0..upto {
            psi[i + 1] = self.next(prev, psi[i], i, i + 1, e);
            prev = psi[i];
            if psi[i + 1].abs() > RESCALE {
                psi[..=i + 1].iter_mut().for_each(|p| *p /= RESCALE);
                prev /= RESCALE;
            }
        }
        psi
    }

    /// Inward from `ψ_{n-1} = 0` down to index `from`.
    fn inward(&self, e: f64, from: usize) -> Vec<f64> {
        let n = self.v.len();
        let mut psi = vec![0.0; n];
        psi[n - 2] = 1e-30;
        for i in (from + 1..n - 1).rev() {
            psi[i - 1] = self.next(psi[i + 1], psi[i], i, i - 1, e);
            if psi[i - 1].abs() > RESCALE {
                psi[i - 1..].iter_mut().for_each(|p| *p /= RESCALE);
            }
        }
        psi
    }
}

/// The `v`-th bound level of the sampled potential `v_grid` (one value per grid point).
pub fn numerov_bound_sampled(
    v_grid: &[f64],
    grid: &Arc<RadialGrid>,
    mass: f64,
    level: usize,
    channel: Channel,
) -> Result<BoundState> {
    let n = grid.len();
    if v_grid.len() != n {
        return Err(Error::Grid(format!("{} potential samples for {n} grid points", v_grid.len())));
    }
    let num = Numerov {
        h2: grid.dr() * grid.dr(),
        two_m: 2.0 * mass,
        v: v_grid,
    };
    let v_min = v_grid.iter().copied().fold(f64::INFINITY, f64::min);
    // the outer edge value stands in for the dissociation limit of the curve
    let e_top = v_grid[n - 1];
    if num.count_nodes(e_top) <= level {
        return Err(Error::NoSuchLevel(level));
    }
    let (mut lo, mut hi) = (v_min, e_top);
    let mut converged = false;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if num.count_nodes(mid) <= level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + lo.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("level {level} bisection did not close")));
    }
    let e = 0.5 * (lo + hi);

    // match outward and inward branches at the outer classical turning point
    let turning = (0..n).rev().find(|&i| v_grid[i] <= e).unwrap_or(n / 2);
    let m = turning.clamp(2, n - 3);
    let out = num.outward(e, m);
    let inw = num.inward(e, m);
    if inw[m] == 0.0 || out[m] == 0.0 {
        return Err(Error::NoConvergence(format!("level {level}: node at the matching point")));
    }
    let s = out[m] / inw[m];
    let mut psi: Vec<f64> = out[..m].iter().copied().chain(inw[m..].iter().map(|p| p * s)).collect();
    let norm = (psi.iter().map(|p| p * p).sum::<f64>() * grid.dr()).sqrt();
    let peak = psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    let first_lobe = psi.iter().find(|p| p.abs() > 1e-3 * peak).copied().unwrap_or(1.0);
    let sign = if first_lobe < 0.0 { -1.0 } else { 1.0 };
    psi.iter_mut().for_each(|p| *p *= sign / norm);
    let node_count = count_sign_changes(&psi, 1e-8);
    Ok(BoundState {
        energy: e,
        wavefunction: WavePacket::from_real(grid.clone(), channel, &psi)?,
        node_count,
    })
}

/// The `v`-th bound level of `potential` on the grid.
pub fn numerov_bound(
    potential: &CurveTable,
    grid: &Arc<RadialGrid>,
    mass: f64,
    level: usize,
    channel: Channel,
) -> Result<BoundState> {
    numerov_bound_sampled(&sample_on_grid(potential, grid)?, grid, mass, level, channel)
}

/// All levels below `threshold`, lowest first.
pub fn bound_levels(
    potential: &CurveTable,
    grid: &Arc<RadialGrid>,
    mass: f64,
    threshold: f64,
    channel: Channel,
) -> Result<Vec<BoundState>> {
    let v_grid = sample_on_grid(potential, grid)?;
    let mut levels = Vec::new();
    loop {
        match numerov_bound_sampled(&v_grid, grid, mass, levels.len(), channel) {
            Ok(s) if s.energy < threshold => levels.push(s),
            Ok(_) | Err(Error::NoSuchLevel(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(levels)
}

fn count_sign_changes(psi: &[f64], rel_floor: f64) -> usize {
    let peak = psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    let mut last = 0.0;
    let mut count = 0;
    for &p in psi {
        if p.abs() <= rel_floor * peak {
            continue;
        }
        if last != 0.0 && (p < 0.0) != (last < 0.0) {
            count += 1;
        }
        last = p;
    }
    count
}

/// Energy-normalized continuum solution on the sampled potential.
///
/// The amplitude is fixed on the asymptotic window (last 20% of the grid, restricted to
/// points where `|V - v_inf| < 1e-4`) against `√(2m/(πk)) sin(kR + δ)`.
pub fn continuum_state_sampled(
    v_grid: &[f64],
    grid: &RadialGrid,
    mass: f64,
    energy: f64,
    v_inf: f64,
    channel: Channel,
) -> Result<ContinuumState> {
    let n = grid.len();
    if v_grid.len() != n {
        return Err(Error::Grid(format!("{} potential samples for {n} grid points", v_grid.len())));
    }
    if !(energy > v_inf) {
        return Err(Error::BelowThreshold {
            energy,
            threshold: v_inf,
        });
    }
    let h = grid.dr();
    let num = Numerov {
        h2: h * h,
        two_m: 2.0 * mass,
        v: v_grid,
    };
    let mut psi = num.outward(energy, n - 1);
    let start = (0.8 * n as f64).floor() as usize;
    let window: Vec<usize> = (start.max(1)..n - 1)
        .filter(|&i| (v_grid[i] - v_inf).abs() < 1e-4)
        .collect();
    if window.len() < 8 {
        return Err(Error::NotAsymptotic(format!(
            "only {} asymptotic points in the last 20% of the grid",
            window.len()
        )));
    }
    let k = (2.0 * mass * (energy - v_inf)).sqrt();
    // wavenumber of the discrete Numerov sinusoid, which the samples follow exactly
    let q = 2.0 * mass * (energy - v_inf) * h * h;
    let cos_kh = (1.0 - 5.0 * q / 12.0) / (1.0 + q / 12.0);
    if cos_kh.abs() >= 1.0 {
        return Err(Error::NotAsymptotic(format!("k·dr too large at E = {energy}")));
    }
    let sin_kh = (1.0 - cos_kh * cos_kh).sqrt();
    let kt = cos_kh.acos() / h;
    let mut a2 = 0.0;
    let mut phase = (0.0, 0.0);
    for &i in &window {
        let s = psi[i];
        let c = (psi[i + 1] - psi[i - 1]) / (2.0 * sin_kh);
        a2 += s * s + c * c;
        // unwind kR so the phase estimates add coherently
        let (sr, cr) = (kt * grid.r()[i]).sin_cos();
        phase.0 += s * cr - c * sr;
        phase.1 += c * cr + s * sr;
    }
    let amp = (a2 / window.len() as f64).sqrt();
    let target = (2.0 * mass / (std::f64::consts::PI * k)).sqrt();
    let scale = target / amp;
    psi.iter_mut().for_each(|p| *p *= scale);
    psi.truncate(n);
    Ok(ContinuumState {
        energy,
        wavefunction: psi,
        channel,
        asymptotic_k: k,
        phase: phase.0.atan2(phase.1),
    })
}

pub fn continuum_state(
    potential: &CurveTable,
    grid: &RadialGrid,
    mass: f64,
    energy: f64,
    v_inf: f64,
    channel: Channel,
) -> Result<ContinuumState> {
    continuum_state_sampled(&sample_on_grid(potential, grid)?, grid, mass, energy, v_inf, channel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecular::MolecularDataset;
    use crate::units::H2_REDUCED_MASS;
    use approx::assert_abs_diff_eq;

    const M: f64 = H2_REDUCED_MASS;
    const WH: f64 = 0.02;

    fn harmonic(grid: &RadialGrid) -> Vec<f64> {
        grid.r().iter().map(|r| 0.5 * M * WH * WH * (r - 3.0).powi(2)).collect()
    }

    #[test]
    fn harmonic_levels() {
        let grid = Arc::new(RadialGrid::standard());
        let v = harmonic(&grid);
        let s0 = numerov_bound_sampled(&v, &grid, M, 0, Channel::H2).unwrap();
        let s1 = numerov_bound_sampled(&v, &grid, M, 1, Channel::H2).unwrap();
        assert_abs_diff_eq!(s0.energy, 0.5 * WH, epsilon = 1e-8);
        assert_abs_diff_eq!(s1.energy - s0.energy, WH, epsilon = 1e-6);
        assert_eq!(s0.node_count, 0);
        assert_eq!(s1.node_count, 1);
        assert_abs_diff_eq!(s0.wavefunction.norm2(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s0.wavefunction.mean_r().unwrap(), 3.0, epsilon = 1e-6);
        let amp = s1.wavefunction.amp();
        assert!(amp[grid.index_of(2.8)].re > 0.0, "inner lobe positive");
        assert!(amp[0].norm() < 1e-12 && amp[grid.len() - 1].norm() < 1e-12);
    }

    #[test]
    fn free_particle_continuum_is_a_sine() {
        let grid = RadialGrid::new(0.1, 40.0, 2048).unwrap();
        let v = vec![0.0; grid.len()];
        let e = 0.05;
        let st = continuum_state_sampled(&v, &grid, M, e, 0.0, Channel::G).unwrap();
        let k = (2.0 * M * e).sqrt();
        let a = (2.0 * M / (std::f64::consts::PI * k)).sqrt();
        let r0 = grid.r_min() - grid.dr();
        for i in (100..2000).step_by(97) {
            let r = grid.r()[i];
            assert_abs_diff_eq!(st.wavefunction[i], a * (k * (r - r0)).sin(), epsilon = 2e-3 * a);
        }
    }

    #[test]
    fn h2_ground_state() {
        let ds = MolecularDataset::bundled();
        let grid = Arc::new(RadialGrid::standard());
        let s = numerov_bound(&ds.v_h2, &grid, ds.reduced_mass, 0, Channel::H2).unwrap();
        let mean_r = s.wavefunction.mean_r().unwrap();
        assert!((mean_r - 1.4).abs() < 0.1, "⟨R⟩ = {mean_r}");
        assert_eq!(s.node_count, 0);
    }

    #[test]
    fn errors() {
        let grid = Arc::new(RadialGrid::standard());
        let v = vec![0.0; grid.len()];
        assert!(matches!(
            continuum_state_sampled(&v, &grid, M, -0.1, 0.0, Channel::G),
            Err(Error::BelowThreshold { .. })
        ));
        let tilted: Vec<f64> = grid.r().iter().map(|r| 0.01 * r).collect();
        assert!(matches!(
            continuum_state_sampled(&tilted, &grid, M, 1.0, 0.0, Channel::G),
            Err(Error::NotAsymptotic(_))
        ));
        // a shallow square well holds no level below its rim
        let well: Vec<f64> = grid.r().iter().map(|&r| if (2.0..2.05).contains(&r) { -1e-4 } else { 0.0 }).collect();
        assert!(matches!(
            numerov_bound_sampled(&well, &grid, M, 0, Channel::G),
            Err(Error::NoSuchLevel(0))
        ));
    }
}

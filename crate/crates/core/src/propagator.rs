//! Time evolution of the three nuclear packets.
//!
//! Each step of length δt runs, in order:
//! 1. loss from H₂ at `E(t)`,
//! 2. split-operator propagation of H₂,
//! 3. gain into 1sσg from the pre-loss H₂ packet (1sσu untouched),
//! 4. coupled g/u split-operator propagation with the coupling at `E(t + δt/2)`,
//! 5. losses from g and u at `E(t + δt)`, which feed the Coulomb-explosion distribution.
//!
//! The Coulomb-explosion channel is kept only through its accumulated probability density
//! over R.

use std::sync::Arc;

use log::{info, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bound::numerov_bound;
use crate::error::{Error, Result};
use crate::field::PulseParams;
use crate::grid::{AbsorbingMask, Channel, RadialGrid, WavePacket};
use crate::molecular::MolecularDataset;
use crate::rates::{PointRates, RateModel, RateTable, Species};

/// Tolerance on `pop_H2 + pop_g + pop_u + pop_CE (+ absorbed) = 1`.
pub const CONSERVATION_TOL: f64 = 1e-8;
/// Amplitude at the outer grid edge above which a run is flagged.
pub const BOUNDARY_AMPLITUDE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dynamic,
    Frozen,
}

impl Mode {
    pub fn is_frozen(self) -> bool {
        self == Mode::Frozen
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Dynamic => "dynamic",
            Mode::Frozen => "frozen",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dynamic" => Ok(Mode::Dynamic),
            "frozen" => Ok(Mode::Frozen),
            _ => Err(Error::Config(format!("mode must be `dynamic` or `frozen`, got `{s}`"))),
        }
    }
}

/// Outcome of a loss step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loss {
    /// Probability removed (positive).
    pub removed: f64,
    /// Number of points where `W δt ≥ 1` and the survival factor was clamped to zero.
    pub clamped: usize,
}

/// Removes `W δt |ψ|²` pointwise: `ψ ← (1 - W δt)^{1/2} ψ`.
///
/// When `removed_density` is given, the removed density `min(W δt, 1) |ψ|²` is added to it.
pub fn apply_loss(wp: &mut WavePacket, rates: &[f64], dt: f64, removed_density: Option<&mut [f64]>) -> Loss {
    let mut removed = 0.0;
    let mut clamped = 0;
    let dr = wp.grid().dr();
    let mut density = removed_density;
    for (i, (a, &w)) in wp.amp_mut().iter_mut().zip(rates).enumerate() {
        if w == 0.0 {
            continue;
        }
        let mut p = w * dt;
        if p >= 1.0 {
            p = 1.0;
            clamped += 1;
        }
        let lost = p * a.norm_sqr();
        removed += lost;
        if let Some(d) = density.as_deref_mut() {
            d[i] += lost;
        }
        *a *= (1.0 - p).sqrt();
    }
    Loss {
        removed: removed * dr,
        clamped,
    }
}

/// Adds `-i α (W δt)^{1/2} ψ_source` to `target` with real `α ≥ 0` chosen so that the norm of
/// `target` grows by exactly `delta_p`. Returns `α`.
pub fn apply_gain(target: &mut WavePacket, source: &WavePacket, rates: &[f64], dt: f64, delta_p: f64) -> Result<f64> {
    if !(delta_p >= 0.0) {
        return Err(Error::Invariant(format!("gain target {delta_p} is negative")));
    }
    if delta_p == 0.0 {
        return Ok(0.0);
    }
    let dr = target.grid().dr();
    let mut b = Vec::with_capacity(rates.len());
    let (mut bb, mut gb) = (0.0, 0.0);
    for ((s, t), &w) in source.amp().iter().zip(target.amp()).zip(rates) {
        let bi = Complex64::new(0.0, -(w * dt).min(1.0).sqrt()) * s;
        bb += bi.norm_sqr();
        gb += (t.conj() * bi).re;
        b.push(bi);
    }
    bb *= dr;
    gb *= dr;
    if !(bb > 0.0) {
        return Err(Error::Invariant(format!(
            "gain of {delta_p} requested from an empty source"
        )));
    }
    let disc = gb * gb + bb * delta_p;
    let alpha = (-gb + disc.sqrt()) / bb;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Invariant(format!("no non-negative gain factor (α = {alpha})")));
    }
    for (t, bi) in target.amp_mut().iter_mut().zip(b) {
        *t += alpha * bi;
    }
    Ok(alpha)
}

/// Precomputed split-operator factors for one grid, mass and time step.
#[derive(Debug, Clone)]
pub struct SplitOperator {
    grid: Arc<RadialGrid>,
    dt: f64,
    frozen: bool,
    kinetic_half: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl SplitOperator {
    pub fn new(grid: Arc<RadialGrid>, mass: f64, dt: f64, frozen: bool) -> Self {
        let n = grid.len();
        // the unitary FFT normalisation folds into the kinetic factor
        let norm = 1.0 / n as f64;
        let kinetic_half = grid
            .k()
            .iter()
            .map(|k| Complex64::from_polar(norm, -k * k / (2.0 * mass) * dt / 2.0))
            .collect();
        let scratch = vec![Complex64::new(0.0, 0.0); grid.scratch_len()];
        Self {
            grid,
            dt,
            frozen,
            kinetic_half,
            scratch,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn frozen(&self) -> bool {
        self.frozen
    }

    fn kinetic(&mut self, amp: &mut [Complex64]) {
        if self.frozen {
            return;
        }
        self.grid.fft_forward(amp, &mut self.scratch);
        for (a, k) in amp.iter_mut().zip(&self.kinetic_half) {
            *a *= k;
        }
        self.grid.fft_inverse(amp, &mut self.scratch);
    }

    /// `exp(-iTδt/2) exp(-iVδt) exp(-iTδt/2)` with the potential factor supplied.
    pub fn step_single(&mut self, wp: &mut WavePacket, potential_phase: &[Complex64]) {
        let amp = wp.amp_mut();
        self.kinetic(amp);
        for (a, p) in amp.iter_mut().zip(potential_phase) {
            *a *= p;
        }
        self.kinetic(amp);
    }

    /// Single-channel step in a static potential.
    pub fn step_in_potential(&mut self, wp: &mut WavePacket, v: &[f64]) {
        let phase = potential_phase(v, self.dt);
        self.step_single(wp, &phase);
    }

    /// Coupled g/u step; the potential matrix `[[V_g, c], [c, V_u]]` with `c = -μ E` is
    /// exponentiated exactly at every point.
    pub fn step_coupled(&mut self, g: &mut WavePacket, u: &mut WavePacket, pot: &CoupledPotential, field: f64) {
        self.kinetic(g.amp_mut());
        self.kinetic(u.amp_mut());
        pot.apply(g.amp_mut(), u.amp_mut(), field, self.dt);
        self.kinetic(g.amp_mut());
        self.kinetic(u.amp_mut());
    }
}

/// `exp(-i V δt)` pointwise.
pub fn potential_phase(v: &[f64], dt: f64) -> Vec<Complex64> {
    v.iter().map(|&v| Complex64::from_polar(1.0, -v * dt)).collect()
}

/// Sampled g/u potentials and transition dipole.
#[derive(Debug, Clone)]
pub struct CoupledPotential {
    /// `exp(-i (V_g + V_u)/2 δt)`, cached for one δt.
    mean_phase: Vec<Complex64>,
    half_diff: Vec<f64>,
    mu: Vec<f64>,
    dt: f64,
}

impl CoupledPotential {
    pub fn new(v_g: &[f64], v_u: &[f64], mu: &[f64], dt: f64) -> Self {
        let mean: Vec<f64> = v_g.iter().zip(v_u).map(|(g, u)| 0.5 * (g + u)).collect();
        Self {
            mean_phase: potential_phase(&mean, dt),
            half_diff: v_g.iter().zip(v_u).map(|(g, u)| 0.5 * (g - u)).collect(),
            mu: mu.to_vec(),
            dt,
        }
    }

    fn apply(&self, g: &mut [Complex64], u: &mut [Complex64], field: f64, dt: f64) {
        debug_assert_eq!(dt, self.dt);
        for i in 0..g.len() {
            let d = self.half_diff[i];
            let c = -self.mu[i] * field;
            let delta = (d * d + c * c).sqrt();
            let (s, co) = (delta * dt).sin_cos();
            // sin(Δδt)/Δ, finite as Δ → 0
            let sinc = if delta * dt < 1e-8 { dt } else { s / delta };
            let (a, b) = (g[i], u[i]);
            let im = Complex64::new(0.0, -sinc);
            let ng = co * a + im * (d * a + c * b);
            let nu = co * b + im * (c * a - d * b);
            g[i] = self.mean_phase[i] * ng;
            u[i] = self.mean_phase[i] * nu;
        }
    }
}

/// One decimated sample of the population history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// a.u.
    pub t: f64,
    /// Field at `t`, a.u.
    pub field: f64,
    pub pop_h2: f64,
    pub pop_g: f64,
    pub pop_u: f64,
    pub pop_ce: f64,
    /// `None` while the 1sσg packet is empty.
    pub mean_r_g: Option<f64>,
}

/// Everything a step needs besides the packets.
#[derive(Debug, Clone)]
pub struct StepConfig {
    pub pulse: PulseParams,
    pub mode: Mode,
    pub mass: f64,
    pub trace_every: usize,
    pub mask: Option<AbsorbingMask>,
    h2_phase: Vec<Complex64>,
    coupled: CoupledPotential,
    rates_h2: PointRates,
    rates_g: PointRates,
    rates_u: PointRates,
}

/// The three rate tables for one carrier frequency; cheap to clone and share.
#[derive(Debug, Clone)]
pub struct RateSet {
    pub h2: Arc<RateTable>,
    pub g: Arc<RateTable>,
    pub u: Arc<RateTable>,
}

impl RateSet {
    /// Field nodes per decade in the rate tables. Remnant populations after near-total
    /// depletion change by several percent at 40 and by 0.1% between 200 and 400.
    pub const NODES_PER_DECADE: usize = 200;

    /// Builds tables covering fields up to `f_max`.
    pub fn build(
        ds: &MolecularDataset,
        grid: &RadialGrid,
        omega: f64,
        first: &RateModel,
        second: &RateModel,
        f_max: f64,
    ) -> Result<Self> {
        let r_axis = RateTable::default_r_axis(grid.r_min(), grid.r_max());
        let table = |sp: Species, m: &RateModel| -> Result<Arc<RateTable>> {
            let f_axis = RateTable::log_axis(m.f_floor, f_max.max(2.0 * m.f_floor), Self::NODES_PER_DECADE);
            Ok(Arc::new(RateTable::build(ds, sp, omega, m, r_axis.clone(), f_axis)?))
        };
        Ok(Self {
            h2: table(Species::H2, first)?,
            g: table(Species::G, second)?,
            u: table(Species::U, second)?,
        })
    }

    /// Largest field all three tables cover.
    pub fn f_max(&self) -> f64 {
        self.h2.f_max().min(self.g.f_max()).min(self.u.f_max())
    }
}

impl StepConfig {
    pub fn new(
        ds: &MolecularDataset,
        grid: &Arc<RadialGrid>,
        pulse: PulseParams,
        mode: Mode,
        rates: &RateSet,
    ) -> Result<Self> {
        pulse.validate()?;
        if rates.f_max() < pulse.e0() * (1.0 - 1e-12) {
            return Err(Error::Rate(format!(
                "rate tables stop at F = {} below the peak field {}",
                rates.f_max(),
                pulse.e0()
            )));
        }
        if (rates.h2.omega - pulse.omega()).abs() > 1e-12 * pulse.omega() {
            return Err(Error::Rate("rate tables were built for another frequency".into()));
        }
        let dt = pulse.dt();
        let r = grid.r();
        let v_h2 = ds.v_h2.sample(r)?;
        let v_g = ds.v_g.sample(r)?;
        let v_u = ds.v_u.sample(r)?;
        let mu = ds.mu_ug.sample(r)?;
        Ok(Self {
            pulse,
            mode,
            mass: ds.reduced_mass,
            trace_every: 10,
            mask: None,
            h2_phase: potential_phase(&v_h2, dt),
            coupled: CoupledPotential::new(&v_g, &v_u, &mu, dt),
            rates_h2: rates.h2.on_points(r),
            rates_g: rates.g.on_points(r),
            rates_u: rates.u.on_points(r),
        })
    }

    pub fn dt(&self) -> f64 {
        self.pulse.dt()
    }
}

#[derive(Debug, Clone)]
pub struct SimulationState {
    pub step: usize,
    pub t: f64,
    pub psi_h2: WavePacket,
    pub psi_g: WavePacket,
    pub psi_u: WavePacket,
    /// Accumulated Coulomb-explosion density over R, `Σ_t [W_g|ψ_g|² + W_u|ψ_u|²] δt` (1/bohr).
    pub p_vib: Vec<f64>,
    pub pop_ce: f64,
    /// Norm removed by the absorbing mask, if any.
    pub absorbed: f64,
    pub clamp_events: usize,
    pub boundary_flux: bool,
    pub trace: Vec<TraceRow>,
}

impl SimulationState {
    /// H₂ in `chi0`, everything else empty.
    pub fn initial(chi0: &WavePacket) -> Self {
        let grid = chi0.grid().clone();
        let mut psi_h2 = chi0.clone();
        let norm = psi_h2.norm2().sqrt();
        psi_h2.scale(1.0 / norm);
        Self {
            step: 0,
            t: 0.0,
            psi_g: WavePacket::zeros(grid.clone(), Channel::G),
            psi_u: WavePacket::zeros(grid.clone(), Channel::U),
            p_vib: vec![0.0; grid.len()],
            psi_h2,
            pop_ce: 0.0,
            absorbed: 0.0,
            clamp_events: 0,
            boundary_flux: false,
            trace: Vec::new(),
        }
    }

    pub fn populations(&self) -> Populations {
        Populations {
            h2: self.psi_h2.norm2(),
            g: self.psi_g.norm2(),
            u: self.psi_u.norm2(),
            ce: self.pop_ce,
        }
    }

    fn trace_row(&self, field: f64) -> TraceRow {
        let p = self.populations();
        TraceRow {
            t: self.t,
            field,
            pop_h2: p.h2,
            pop_g: p.g,
            pop_u: p.u,
            pop_ce: p.ce,
            mean_r_g: self.psi_g.observables().mean_r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Populations {
    pub h2: f64,
    pub g: f64,
    pub u: f64,
    pub ce: f64,
}

impl Populations {
    pub fn total(&self) -> f64 {
        self.h2 + self.g + self.u + self.ce
    }

    /// `g + u`: the H₂⁺ population.
    pub fn ion(&self) -> f64 {
        self.g + self.u
    }
}

/// Reusable buffers for [`step`].
#[derive(Debug, Clone)]
pub struct Workspace {
    split: SplitOperator,
    w: Vec<f64>,
    w2: Vec<f64>,
    h2_before: WavePacket,
}

impl Workspace {
    pub fn new(cfg: &StepConfig, grid: &Arc<RadialGrid>) -> Self {
        let n = grid.len();
        Self {
            split: SplitOperator::new(grid.clone(), cfg.mass, cfg.dt(), cfg.mode.is_frozen()),
            w: vec![0.0; n],
            w2: vec![0.0; n],
            h2_before: WavePacket::zeros(grid.clone(), Channel::H2),
        }
    }
}

/// Advances the state by one time step.
pub fn step(state: &mut SimulationState, cfg: &StepConfig, ws: &mut Workspace) -> Result<()> {
    let dt = cfg.dt();
    let t = state.t;
    let pulse = &cfg.pulse;

    // 1. H2 loss at E(t)
    cfg.rates_h2.fill(pulse.field(t), &mut ws.w);
    ws.h2_before.amp_mut().copy_from_slice(state.psi_h2.amp());
    let loss_h2 = apply_loss(&mut state.psi_h2, &ws.w, dt, None);

    // 2. H2 propagation
    ws.split.step_single(&mut state.psi_h2, &cfg.h2_phase);

    // 3. gain into g from the pre-loss packet
    if loss_h2.removed > 0.0 {
        apply_gain(&mut state.psi_g, &ws.h2_before, &ws.w, dt, loss_h2.removed)?;
    }

    // 4. coupled g/u propagation at the mid-step field
    ws.split
        .step_coupled(&mut state.psi_g, &mut state.psi_u, &cfg.coupled, pulse.field(t + 0.5 * dt));

    // 5. g/u losses at E(t + δt)
    let f_end = pulse.field(t + dt);
    cfg.rates_g.fill(f_end, &mut ws.w);
    cfg.rates_u.fill(f_end, &mut ws.w2);
    let loss_g = apply_loss(&mut state.psi_g, &ws.w, dt, Some(&mut state.p_vib));
    let loss_u = apply_loss(&mut state.psi_u, &ws.w2, dt, Some(&mut state.p_vib));
    state.pop_ce += loss_g.removed + loss_u.removed;

    let clamped = loss_h2.clamped + loss_g.clamped + loss_u.clamped;
    if clamped > 0 {
        if state.clamp_events == 0 {
            warn!("rate step overflow (W δt ≥ 1) at t = {:.3} a.u.; survival clamped to zero", t);
        }
        state.clamp_events += clamped;
    }

    if let Some(mask) = &cfg.mask {
        for wp in [&mut state.psi_h2, &mut state.psi_g, &mut state.psi_u] {
            state.absorbed += mask.apply(wp);
        }
    }

    state.step += 1;
    state.t = (state.step as f64) * dt;

    let n = state.psi_g.amp().len();
    let edge = [&state.psi_h2, &state.psi_g, &state.psi_u]
        .iter()
        .map(|wp| wp.amp()[n - 1].norm())
        .fold(0.0, f64::max);
    if edge > BOUNDARY_AMPLITUDE && !state.boundary_flux {
        warn!("packet amplitude {edge:.2e} at the outer grid edge at t = {:.3} a.u.", state.t);
        state.boundary_flux = true;
    }

    let total = state.populations().total() + state.absorbed;
    if (total - 1.0).abs() > CONSERVATION_TOL {
        return Err(Error::ConservationViolated { total, t: state.t });
    }
    Ok(())
}

/// A finished run.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub pulse: PulseParams,
    pub mode: Mode,
    pub final_state: SimulationState,
    pub populations: Populations,
    pub steps: usize,
}

impl SimulationResult {
    pub fn trace(&self) -> &[TraceRow] {
        &self.final_state.trace
    }

    /// `∫P_vib dR`, the Coulomb-explosion probability from the accumulated density.
    pub fn p_vib_integral(&self) -> f64 {
        let s = &self.final_state;
        s.p_vib.iter().sum::<f64>() * s.psi_g.grid().dr()
    }

    /// Probability carried by each grid cell, `P_vib(R_i) δR`.
    pub fn p_vib_cells(&self) -> Vec<f64> {
        let dr = self.final_state.psi_g.grid().dr();
        self.final_state.p_vib.iter().map(|p| p * dr).collect()
    }
}

/// Runs a whole pulse from `Ψ_H2 = χ₀`.
pub fn simulate(cfg: &StepConfig, chi0: &WavePacket) -> Result<SimulationResult> {
    let grid = chi0.grid().clone();
    let mut ws = Workspace::new(cfg, &grid);
    let mut state = SimulationState::initial(chi0);
    let n_steps = cfg.pulse.n_steps();
    let every = cfg.trace_every.max(1);
    state.trace.push(state.trace_row(cfg.pulse.field(0.0)));
    for k in 0..n_steps {
        step(&mut state, cfg, &mut ws)?;
        if (k + 1) % every == 0 || k + 1 == n_steps {
            let f = cfg.pulse.field(state.t);
            state.trace.push(state.trace_row(f));
        }
    }
    if state.clamp_events > 0 {
        warn!("{} clamped rate evaluations in total", state.clamp_events);
    }
    if cfg.mask.is_some() && state.absorbed > 0.0 {
        warn!(
            "absorbing mask removed {:.3e}; the dissociation spectrum misses this flux",
            state.absorbed
        );
    }
    info!("{} steps, mode {}", n_steps, cfg.mode.label());
    Ok(SimulationResult {
        pulse: cfg.pulse,
        mode: cfg.mode,
        populations: state.populations(),
        final_state: state,
        steps: n_steps,
    })
}

/// Ground vibrational state of H₂ on the grid.
pub fn initial_state(ds: &MolecularDataset, grid: &Arc<RadialGrid>) -> Result<WavePacket> {
    Ok(numerov_bound(&ds.v_h2, grid, ds.reduced_mass, 0, Channel::H2)?.wavefunction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Arc<RadialGrid> {
        Arc::new(RadialGrid::standard())
    }

    fn gaussian(grid: &Arc<RadialGrid>, r0: f64, sigma: f64, channel: Channel) -> WavePacket {
        let mut wp = WavePacket::from_fn(grid.clone(), channel, |r| {
            Complex64::new((-(r - r0).powi(2) / (4.0 * sigma * sigma)).exp(), 0.0)
        });
        let n = wp.norm2().sqrt();
        wp.scale(1.0 / n);
        wp
    }

    #[test]
    fn loss_examples() {
        let g = grid();
        let mut wp = gaussian(&g, 5.0, 0.5, Channel::G);
        let before = wp.clone();
        let zero = vec![0.0; g.len()];
        let l = apply_loss(&mut wp, &zero, 0.1, None);
        assert_eq!(l.removed, 0.0);
        assert_eq!(wp.amp(), before.amp());

        let uniform = vec![0.02; g.len()];
        let l = apply_loss(&mut wp, &uniform, 0.5, None);
        assert_abs_diff_eq!(l.removed, 0.01, epsilon = 1e-13);
        assert_abs_diff_eq!(wp.norm2(), 0.99, epsilon = 1e-13);

        let far: Vec<f64> = g.r().iter().map(|&r| if r > 30.0 { 1.0 } else { 0.0 }).collect();
        let mut spike = WavePacket::zeros(g.clone(), Channel::G);
        spike.amp_mut()[100] = Complex64::new(1.0, 0.0);
        assert_eq!(apply_loss(&mut spike, &far, 0.1, None).removed, 0.0);

        let huge = vec![100.0; g.len()];
        let l = apply_loss(&mut spike, &huge, 0.1, None);
        assert_eq!(l.clamped, g.len());
        assert_eq!(spike.norm2(), 0.0);
    }

    #[test]
    fn gain_examples() {
        let g = grid();
        let src = gaussian(&g, 1.4, 0.2, Channel::H2);
        let w = vec![1e-3; g.len()];
        let dt = 0.5;
        let dp = 5e-4;
        let mut empty = WavePacket::zeros(g.clone(), Channel::G);
        let alpha = apply_gain(&mut empty, &src, &w, dt, dp).unwrap();
        assert_abs_diff_eq!(alpha, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(empty.norm2(), dp, epsilon = 1e-15);

        // a real target is orthogonal (in the real part) to -i·(real source)
        let mut real_target = gaussian(&g, 1.6, 0.3, Channel::G);
        real_target.scale(0.1);
        let before = real_target.norm2();
        let alpha = apply_gain(&mut real_target, &src, &w, dt, dp).unwrap();
        assert_abs_diff_eq!(alpha, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(real_target.norm2() - before, dp, epsilon = 1e-15);

        let mut t = gaussian(&g, 1.4, 0.2, Channel::G);
        t.amp_mut().iter_mut().for_each(|a| *a *= Complex64::new(0.0, -0.1));
        let before = t.norm2();
        apply_gain(&mut t, &src, &w, dt, dp).unwrap();
        assert_abs_diff_eq!(t.norm2() - before, dp, epsilon = 1e-14);

        let snapshot = t.clone();
        apply_gain(&mut t, &src, &w, dt, 0.0).unwrap();
        assert_eq!(t.amp(), snapshot.amp());
    }

    #[test]
    fn coupled_without_coupling_matches_single_steps() {
        let g = grid();
        let dt = 0.5;
        let vg: Vec<f64> = g.r().iter().map(|r| 0.01 * (r - 2.0).powi(2)).collect();
        let vu: Vec<f64> = g.r().iter().map(|r| 0.3 / r).collect();
        let mu = vec![0.0; g.len()];
        let pot = CoupledPotential::new(&vg, &vu, &mu, dt);
        let mut op = SplitOperator::new(g.clone(), 918.0764, dt, false);
        let (mut a, mut b) = (gaussian(&g, 2.0, 0.3, Channel::G), gaussian(&g, 3.0, 0.3, Channel::U));
        let (mut a1, mut b1) = (a.clone(), b.clone());
        for _ in 0..20 {
            op.step_coupled(&mut a, &mut b, &pot, 0.7);
            op.step_in_potential(&mut a1, &vg);
            op.step_in_potential(&mut b1, &vu);
        }
        for (x, y) in a.amp().iter().zip(a1.amp()).chain(b.amp().iter().zip(b1.amp())) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn frozen_mode_only_changes_phases() {
        let g = grid();
        let v: Vec<f64> = g.r().iter().map(|r| 1.0 / r).collect();
        let mut op = SplitOperator::new(g.clone(), 918.0764, 1.0, true);
        let mut wp = gaussian(&g, 2.0, 0.3, Channel::H2);
        let before: Vec<f64> = wp.amp().iter().map(|a| a.norm()).collect();
        for _ in 0..50 {
            op.step_in_potential(&mut wp, &v);
        }
        for (a, b) in wp.amp().iter().zip(before) {
            assert_abs_diff_eq!(a.norm(), b, epsilon = 1e-14);
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("frozen".parse::<Mode>().unwrap(), Mode::Frozen);
        assert_eq!("dynamic".parse::<Mode>().unwrap(), Mode::Dynamic);
        assert!("static".parse::<Mode>().is_err());
    }
}

mod common;

use std::sync::Arc;

use approx::assert_abs_diff_eq;
use h2pulse::bound::{bound_levels, continuum_state, numerov_bound, numerov_bound_sampled};
use h2pulse::field::PulseParams;
use h2pulse::grid::{Channel, RadialGrid, WavePacket};
use h2pulse::molecular::MolecularDataset;
use h2pulse::propagator::{initial_state, simulate, CoupledPotential, Mode, RateSet, SplitOperator, StepConfig};
use h2pulse::rates::{keldysh, ppt_rate, RateModel};
use num_complex::Complex64;

fn grid() -> Arc<RadialGrid> {
    Arc::new(RadialGrid::standard())
}

#[test]
fn free_gaussian_spreads_analytically() {
    let grid = grid();
    let (mass, sigma0, dt) = (918.0764, 0.2, 5.0);
    let mut wp = common::gaussian(&grid, Channel::G, 15.0, sigma0, 0.0);
    let mut split = SplitOperator::new(grid.clone(), mass, dt, false);
    let zero = vec![0.0; grid.len()];
    for step in 1..=100 {
        split.step_in_potential(&mut wp, &zero);
        let t = step as f64 * dt;
        let expect = (sigma0 * sigma0 + (t / (2.0 * mass * sigma0)).powi(2)).sqrt();
        let got = common::width(&wp);
        assert!((got / expect - 1.0).abs() < 1e-3, "t = {t}: width {got} vs {expect}");
    }
    assert_abs_diff_eq!(wp.norm2(), 1.0, epsilon = 1e-12);
}

#[test]
fn moving_gaussian_keeps_group_velocity() {
    let grid = grid();
    let (mass, dt) = (918.0764, 2.0);
    let k0 = 10.0;
    let mut wp = common::gaussian(&grid, Channel::U, 10.0, 0.5, k0);
    let mut split = SplitOperator::new(grid.clone(), mass, dt, false);
    let zero = vec![0.0; grid.len()];
    for _ in 0..500 {
        split.step_in_potential(&mut wp, &zero);
    }
    assert_abs_diff_eq!(wp.mean_r().unwrap(), 10.0 + k0 / mass * 1000.0, epsilon = 1e-6);
}

#[test]
fn ground_state_is_stationary() {
    let ds = MolecularDataset::bundled();
    let grid = grid();
    let chi0 = initial_state(&ds, &grid).unwrap();
    let v = ds.v_h2.sample(grid.r()).unwrap();
    let pulse = PulseParams::new(266.0, 1e14, 1.0).unwrap();
    let mut split = SplitOperator::new(grid.clone(), ds.reduced_mass, pulse.dt(), false);
    let mut wp = chi0.clone();
    for _ in 0..1000 {
        split.step_in_potential(&mut wp, &v);
    }
    let overlap = chi0.inner(&wp).norm_sqr();
    assert!(overlap >= 1.0 - 1e-6, "|<chi0|psi(t)>|^2 = {overlap}");
}

#[test]
fn rabi_oscillation_with_frozen_nuclei() {
    let grid = grid();
    let n = grid.len();
    let (dt, field, mu) = (0.05, 0.01, 1.0);
    let zero = vec![0.0; n];
    let pot = CoupledPotential::new(&zero, &zero, &vec![mu; n], dt);
    let mut split = SplitOperator::new(grid.clone(), 918.0764, dt, true);
    let mut g = common::gaussian(&grid, Channel::G, 2.0, 0.2, 0.0);
    let mut u = WavePacket::zeros(grid.clone(), Channel::U);
    for step in 1..=4000 {
        split.step_coupled(&mut g, &mut u, &pot, field);
        let t = step as f64 * dt;
        let expect = (mu * field * t).sin().powi(2);
        assert_abs_diff_eq!(u.norm2(), expect, epsilon = 1e-6);
        assert_abs_diff_eq!(g.norm2() + u.norm2(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn coupled_propagation_is_unitary() {
    let ds = MolecularDataset::bundled();
    let grid = grid();
    let r = grid.r();
    let pulse = PulseParams::new(266.0, 1e15, 1.0).unwrap();
    let pot = CoupledPotential::new(
        &ds.v_g.sample(r).unwrap(),
        &ds.v_u.sample(r).unwrap(),
        &ds.mu_ug.sample(r).unwrap(),
        pulse.dt(),
    );
    let mut split = SplitOperator::new(grid.clone(), ds.reduced_mass, pulse.dt(), false);
    let mut g = initial_state(&ds, &grid).unwrap();
    let mut u = WavePacket::zeros(grid.clone(), Channel::U);
    for k in 0..1000 {
        split.step_coupled(&mut g, &mut u, &pot, pulse.field((k as f64 + 0.5) * pulse.dt()));
    }
    assert!(u.norm2() > 1e-3, "field should transfer population");
    assert_abs_diff_eq!(g.norm2() + u.norm2(), 1.0, epsilon = 1e-12);
}

#[test]
fn negligible_field_leaves_h2_untouched() {
    let ds = MolecularDataset::bundled();
    let grid = grid();
    // 1e8 W/cm2 keeps |E| below the rate floor throughout
    let pulse = PulseParams::new(800.0, 1e8, 2.0).unwrap();
    let rates = RateSet::build(
        &ds,
        &grid,
        pulse.omega(),
        &RateModel::first_ionization(),
        &RateModel::second_ionization(),
        pulse.e0(),
    )
    .unwrap();
    let cfg = StepConfig::new(&ds, &grid, pulse, Mode::Dynamic, &rates).unwrap();
    let res = simulate(&cfg, &initial_state(&ds, &grid).unwrap()).unwrap();
    assert_abs_diff_eq!(res.populations.h2, 1.0, epsilon = 1e-12);
    assert_eq!(res.populations.g, 0.0);
    assert_eq!(res.populations.ce, 0.0);
}

#[test]
fn zero_point_energy_matches_finite_difference_diagonalisation() {
    let ds = MolecularDataset::bundled();
    let grid = grid();
    let numerov = numerov_bound(&ds.v_h2, &grid, ds.reduced_mass, 0, Channel::H2).unwrap();
    let fd = common::fd_ground_energy(|r| ds.v_h2.eval(r).unwrap(), ds.reduced_mass, 0.3, 6.0, 0.002);
    assert_abs_diff_eq!(numerov.energy, fd, epsilon = 1e-6);
    assert_eq!(numerov.node_count, 0);
    assert_abs_diff_eq!(numerov.wavefunction.mean_r().unwrap(), 1.4, epsilon = 0.1);
}

#[test]
fn ground_levels_survive_grid_doubling() {
    let ds = MolecularDataset::bundled();
    let (mass, omega, r0) = (918.0764, 0.02, 3.0);
    let energy = |n: usize, which: usize| {
        let grid = Arc::new(RadialGrid::new(0.1, 40.0, n).unwrap());
        let v: Vec<f64> = match which {
            0 => grid.r().iter().map(|r| 0.5 * mass * omega * omega * (r - r0).powi(2)).collect(),
            1 => ds.v_h2.sample(grid.r()).unwrap(),
            _ => ds.v_g.sample(grid.r()).unwrap(),
        };
        numerov_bound_sampled(&v, &grid, mass, 0, Channel::H2).unwrap().energy
    };
    for which in 0..3 {
        assert_abs_diff_eq!(energy(2048, which), energy(4096, which), epsilon = 1e-8);
    }
    assert_abs_diff_eq!(energy(2048, 0), 0.5 * omega, epsilon = 1e-8);
}

#[test]
fn continuum_is_orthogonal_to_bound_levels() {
    let ds = MolecularDataset::bundled();
    let grid = grid();
    let levels = bound_levels(&ds.v_g, &grid, ds.reduced_mass, -0.5, Channel::G).unwrap();
    assert!(levels.len() >= 18);
    for e in [-0.49, -0.45, -0.3] {
        let phi = continuum_state(&ds.v_g, &grid, ds.reduced_mass, e, -0.5, Channel::G).unwrap();
        for lv in levels.iter().take(12) {
            let s: f64 = phi
                .wavefunction
                .iter()
                .zip(lv.wavefunction.amp())
                .map(|(p, a)| p * a.re)
                .sum::<f64>()
                * grid.dr();
            assert!(s.abs() < 1e-6, "E = {e}, v = {}: overlap {s:e}", lv.node_count);
        }
    }
}

#[test]
fn continuum_is_energy_normalised() {
    let ds = MolecularDataset::bundled();
    let grid = grid();
    let mass = ds.reduced_mass;
    let e = -0.45;
    let sigma_e = 4e-3;
    let phi = continuum_state(&ds.v_u, &grid, mass, e, -0.5, Channel::U).unwrap();
    let de = sigma_e / 25.0;
    let mut weights = Vec::new();
    for j in -150i32..=150 {
        let ep = e + j as f64 * de;
        let other = continuum_state(&ds.v_u, &grid, mass, ep, -0.5, Channel::U).unwrap();
        let overlap: f64 =
            phi.wavefunction.iter().zip(&other.wavefunction).map(|(a, b)| a * b).sum::<f64>() * grid.dr();
        // unit window at E' = E, wide compared with the box resolution 2πk/(mL)
        let window = (-(j as f64 * de).powi(2) / (2.0 * sigma_e * sigma_e)).exp();
        weights.push(overlap * window);
    }
    let total = common::trapz(&weights, de);
    assert!((total - 1.0).abs() < 1e-2, "smeared delta integral {total}");
}

#[test]
fn ppt_approaches_adk_in_the_tunnelling_regime() {
    let model = RateModel::first_ionization();
    let omega = 0.004;
    for i in 0..=10 {
        let f = 0.03 + 0.005 * i as f64;
        assert!(keldysh(f, omega, 0.5).unwrap() < 0.3);
        let w = ppt_rate(f, omega, 0.5, &model).unwrap();
        let adk = common::adk_hydrogen_cycle_averaged(f);
        assert!((w / adk - 1.0).abs() < 0.2, "F = {f}: PPT {w:e} vs ADK {adk:e}");
    }
}

#[test]
fn complex_amplitudes_stay_finite_under_strong_coupling() {
    let grid = grid();
    let n = grid.len();
    let pot = CoupledPotential::new(&vec![0.0; n], &vec![0.3; n], &vec![20.0; n], 0.05);
    let mut split = SplitOperator::new(grid.clone(), 918.0764, 0.05, false);
    let mut g = common::gaussian(&grid, Channel::G, 5.0, 0.3, 0.0);
    let mut u = WavePacket::zeros(grid.clone(), Channel::U);
    for _ in 0..200 {
        split.step_coupled(&mut g, &mut u, &pot, 0.3);
    }
    assert!(g.amp().iter().chain(u.amp()).all(|a: &Complex64| a.is_finite()));
    assert_abs_diff_eq!(g.norm2() + u.norm2(), 1.0, epsilon = 1e-12);
}

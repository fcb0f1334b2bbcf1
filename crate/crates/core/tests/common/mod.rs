//! Independent reference implementations used by the integration and acceptance tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use h2pulse::grid::{Channel, RadialGrid, WavePacket};
use num_complex::Complex64;

/// Static tunnelling rate of ground-state hydrogen, `(4/F) exp(-2/(3F))`.
pub fn adk_hydrogen_static(f: f64) -> f64 {
    4.0 / f * (-2.0 / (3.0 * f)).exp()
}

/// Cycle average of the static rate for a linearly polarised field of amplitude `f`.
pub fn adk_hydrogen_cycle_averaged(f: f64) -> f64 {
    adk_hydrogen_static(f) * (3.0 * f / PI).sqrt()
}

/// Normalised Gaussian `exp(-(R-R0)²/(4σ²)) e^{ik0 R}`.
pub fn gaussian(grid: &Arc<RadialGrid>, channel: Channel, r0: f64, sigma: f64, k0: f64) -> WavePacket {
    let mut wp = WavePacket::from_fn(grid.clone(), channel, |r| {
        Complex64::from_polar((-(r - r0).powi(2) / (4.0 * sigma * sigma)).exp(), k0 * r)
    });
    let n = wp.norm2().sqrt();
    wp.scale(1.0 / n);
    wp
}

/// Standard deviation of `|ψ|²` in R.
pub fn width(wp: &WavePacket) -> f64 {
    let grid = wp.grid();
    let n = wp.norm2();
    let mean = wp.mean_r().unwrap();
    let var = wp
        .amp()
        .iter()
        .zip(grid.r())
        .map(|(a, r)| a.norm_sqr() * (r - mean).powi(2))
        .sum::<f64>()
        * grid.dr()
        / n;
    var.sqrt()
}

/// Lowest eigenvalue of the three-point finite-difference Hamiltonian
/// `-1/(2m) d²/dR² + V` on `[a, b]` with spacing `h` and Dirichlet ends,
/// found by Sturm-sequence bisection.
pub fn fd_ground_energy(v: impl Fn(f64) -> f64, mass: f64, a: f64, b: f64, h: f64) -> f64 {
    let n = ((b - a) / h).round() as usize - 1;
    let off = -1.0 / (2.0 * mass * h * h);
    let diag: Vec<f64> = (1..=n).map(|i| 1.0 / (mass * h * h) + v(a + i as f64 * h)).collect();
    // eigenvalues below x = sign changes of the LDLᵀ pivots
    let below = |x: f64| {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for d in &diag[1..] {
            let prev = if q == 0.0 { 1e-300 } else { q };
            q = d - x - off * off / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let vmin = diag.iter().fold(f64::MAX, |m, d| m.min(*d)) - 2.0 * off.abs();
    let (mut lo, mut hi) = (vmin, vmin + 1.0);
    while below(hi) < 1 {
        hi += 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Trapezoidal integral of samples with uniform spacing.
pub fn trapz(y: &[f64], h: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    h * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[y.len() - 1]))
}

/// Local maxima of a sequence (strictly above both neighbours).
pub fn local_maxima(t: &[f64], y: &[f64]) -> Vec<f64> {
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1])
        .map(|i| t[i])
        .collect()
}

/// Centred moving average over `width` samples; returns the matching abscissae.
pub fn boxcar(t: &[f64], y: &[f64], width: usize) -> (Vec<f64>, Vec<f64>) {
    let width = width.max(1);
    if y.len() < width {
        return (Vec::new(), Vec::new());
    }
    let mut sum: f64 = y[..width].iter().sum();
    let mut out = vec![sum / width as f64];
    for i in width..y.len() {
        sum += y[i] - y[i - width];
        out.push(sum / width as f64);
    }
    let ts = t[width / 2..width / 2 + out.len()].to_vec();
    (ts, out)
}

/// Longest sequence of (not necessarily adjacent) times in which each is followed by the
/// next at `spacing` within relative tolerance `tol`.
pub fn longest_chain(times: &[f64], spacing: f64, tol: f64) -> usize {
    let mut len = vec![1usize; times.len()];
    for i in (0..times.len()).rev() {
        for j in i + 1..times.len() {
            if ((times[j] - times[i]) / spacing - 1.0).abs() <= tol {
                len[i] = len[i].max(1 + len[j]);
            }
        }
    }
    len.into_iter().max().unwrap_or(0)
}

//! Molecular PPT ionization rates and their precomputed tables.
//!
//! The rate follows the cycle-averaged Perelomov-Popov-Terent'ev expression with the
//! Ammosov-Delone-Krainov effective quantum numbers. It is applied instantaneously,
//! with `|E(t)|` as the field and the carrier frequency in the Keldysh parameter.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::molecular::{IonizationPotentials, MolecularDataset};

/// Keldysh parameter `γ = ω √(2 Ip) / F`.
pub fn keldysh(field: f64, omega: f64, ip: f64) -> Result<f64> {
    if !(field > 0.0) {
        return Err(Error::Rate(format!("Keldysh parameter needs F > 0, got {field}")));
    }
    if !(ip > 0.0) {
        return Err(Error::Rate(format!("ionization potential must be positive, got {ip}")));
    }
    Ok(omega * (2.0 * ip).sqrt() / field)
}

/// Exponent shape function `g(γ)`; `g(0) = 1`.
pub fn shape_g(gamma: f64) -> f64 {
    if gamma < 1e-3 {
        let g2 = gamma * gamma;
        return 1.0 - g2 / 10.0 + 9.0 * g2 * g2 / 280.0;
    }
    let s = (1.0 + gamma * gamma).sqrt();
    1.5 / gamma * ((1.0 + 0.5 / (gamma * gamma)) * gamma.asinh() - s / (2.0 * gamma))
}

/// Dawson's integral `e^{-x²} ∫₀ˣ e^{y²} dy`.
pub fn dawson(x: f64) -> f64 {
    const H: f64 = 0.2;
    const NMAX: usize = 16;
    let ax = x.abs();
    if ax < 0.2 {
        let x2 = x * x;
        return x * (1.0 - 2.0 / 3.0 * x2 * (1.0 - 0.4 * x2 * (1.0 - 2.0 / 7.0 * x2)));
    }
    if ax > 25.0 {
        let inv = 1.0 / (x * x);
        return 0.5 / x * (1.0 + inv * (0.5 + inv * (0.75 + inv * (1.875 + inv * 6.5625))));
    }
    // Rybicki's exponentially convergent sum
    let n0 = 2.0 * (0.5 * ax / H).round();
    let xp = ax - n0 * H;
    let mut e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = n0 + 1.0;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for i in 1..=NMAX {
        let c = (-((2 * i - 1) as f64 * H).powi(2)).exp();
        sum += c * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    x.signum() / PI.sqrt() * (-xp * xp).exp() * sum
}

/// `w_m(x) = x^{2m+1} ∫₀¹ e^{-x²(1-s²)} (1-s²)^m ds`; `w_0` is Dawson's integral.
pub fn w_m(m: u32, x: f64) -> f64 {
    if m == 0 {
        return dawson(x);
    }
    if x > 30.0 {
        let mf = m as f64;
        let inv = 1.0 / (x * x);
        return gamma(mf + 1.0) / (2.0 * x)
            * (1.0 + (mf + 1.0) * inv / 2.0 + 3.0 * (mf + 1.0) * (mf + 2.0) * inv * inv / 8.0);
    }
    // t = 1 - s² removes the endpoint singularity
    // with u = 1 - s the integrand is peaked at u = 0 with width ~1/x²
    let x2 = x * x;
    let f = |u: f64| {
        let t = u * (2.0 - u);
        (-x2 * t).exp() * t.powi(m as i32)
    };
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = (0.25 / x2).min(1.0);
    loop {
        total += adaptive_simpson(&f, lo, hi, 1e-14, 30);
        if hi >= 1.0 {
            break;
        }
        lo = hi;
        hi = (2.0 * hi).min(1.0);
    }
    x.powi(2 * m as i32 + 1) * total
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

/// `∫_{x0}^∞ e^{-αx} (βx)^{-s} dx` for `s ∈ {1/2, 3/2, 5/2}` via upper incomplete gammas.
fn tail_power_integrals(alpha: f64, beta: f64, x0: f64) -> [f64; 3] {
    let z = alpha * x0;
    let ez = (-z).exp();
    let g_half = PI.sqrt() * erfc(z.sqrt());
    let g_mhalf = 2.0 * (ez / z.sqrt() - g_half);
    let g_m3half = -(2.0 / 3.0) * (g_mhalf - ez / (z * z.sqrt()));
    [
        beta.powf(-0.5) * alpha.powf(-0.5) * g_half,
        beta.powf(-1.5) * alpha.powf(0.5) * g_mhalf,
        beta.powf(-2.5) * alpha.powf(1.5) * g_m3half,
    ]
}

/// Multiphoton factor `A_m(ω, γ)`; tends to 1 in the tunneling limit.
pub fn multiphoton_factor(m: u32, omega: f64, gamma: f64, ip: f64) -> Result<f64> {
    let s = (1.0 + gamma * gamma).sqrt();
    let alpha = 2.0 * (gamma.asinh() - gamma / s);
    let beta = 2.0 * gamma / s;
    let nu = ip / omega * (1.0 + 0.5 / (gamma * gamma));
    if !(alpha > 0.0) || !(beta > 0.0) || !nu.is_finite() {
        return Err(Error::Rate(format!(
            "multiphoton sum diverges (γ = {gamma}, α = {alpha}, ν = {nu})"
        )));
    }
    let first = nu.ceil();
    let delta = first - nu;
    let cap = 4096usize.max((36.0 / beta).ceil() as usize);
    let mut sum = 0.0;
    let mut prev = 0.0;
    let mut converged = false;
    let mut k = 0usize;
    while k < cap {
        let x = k as f64 + delta;
        let term = (-alpha * x).exp() * w_m(m, (beta * x).sqrt());
        sum += term;
        if term < prev && term <= 1e-12 * sum {
            converged = true;
            k += 1;
            break;
        }
        prev = term;
        k += 1;
    }
    if !converged {
        // remaining terms are smooth on the scale of one photon: midpoint-rule integral
        // with the large-argument expansion of w_m
        let mf = m as f64;
        let x0 = k as f64 + delta - 0.5;
        let [i1, i3, i5] = tail_power_integrals(alpha, beta, x0);
        let fact = gamma_int(m);
        sum += 0.5 * fact * (i1 + 0.5 * (mf + 1.0) * i3 + 0.375 * (mf + 1.0) * (mf + 2.0) * i5);
    }
    if !sum.is_finite() {
        return Err(Error::Rate(format!("multiphoton sum diverged at γ = {gamma}")));
    }
    let pref = 4.0 / (3.0 * PI).sqrt() / gamma_int(m) * gamma * gamma / (1.0 + gamma * gamma);
    Ok(pref * sum)
}

fn gamma_int(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// How the asymptotic coefficient `|C_{n*l*}|²` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StructureCoefficient {
    /// ADK rule with `l* = max(n* - 1, 0)`.
    Hydrogenic,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    /// Charge left behind by the outgoing electron.
    pub z_res: f64,
    pub l: u32,
    pub m: u32,
    pub structure: StructureCoefficient,
    /// Below this field (a.u.) the rate is zero.
    pub f_floor: f64,
}

impl RateModel {
    pub const DEFAULT_F_FLOOR: f64 = 1e-4;

    /// H2 -> H2+ + e.
    pub fn first_ionization() -> Self {
        Self {
            z_res: 1.0,
            l: 0,
            m: 0,
            structure: StructureCoefficient::Hydrogenic,
            f_floor: Self::DEFAULT_F_FLOOR,
        }
    }

    /// H2+ -> H+ + H+ + e.
    pub fn second_ionization() -> Self {
        Self {
            z_res: 2.0,
            ..Self::first_ionization()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.z_res != 1.0 && self.z_res != 2.0 {
            return Err(Error::Rate(format!("residual charge must be 1 or 2, got {}", self.z_res)));
        }
        if !(self.f_floor > 0.0) {
            return Err(Error::Rate(format!("field floor must be positive, got {}", self.f_floor)));
        }
        if self.m > self.l {
            return Err(Error::Rate(format!("|m| = {} exceeds l = {}", self.m, self.l)));
        }
        Ok(())
    }

    pub fn c2(&self, ip: f64) -> f64 {
        match self.structure {
            StructureCoefficient::Fixed(c2) => c2,
            StructureCoefficient::Hydrogenic => hydrogenic_c2(self.z_res / (2.0 * ip).sqrt()),
        }
    }
}

/// `2^{2n*} / (n* Γ(n*+l*+1) Γ(n*-l*))` with `l* = max(n*-1, 0)`.
pub fn hydrogenic_c2(n_star: f64) -> f64 {
    let l_star = (n_star - 1.0).max(0.0);
    let ln = 2.0 * n_star * 2f64.ln() - n_star.ln() - ln_gamma(n_star + l_star + 1.0) - ln_gamma(n_star - l_star);
    ln.exp()
}

/// `(2l+1)(l+|m|)! / (2^|m| |m|! (l-|m|)!)`.
pub fn angular_factor(l: u32, m: u32) -> f64 {
    (2 * l + 1) as f64 * gamma_int(l + m) / (2f64.powi(m as i32) * gamma_int(m) * gamma_int(l - m))
}

/// Cycle-averaged PPT rate (1/a.u. time) at field `F`, frequency `ω` and ionization potential `Ip`.
pub fn ppt_rate(field: f64, omega: f64, ip: f64, model: &RateModel) -> Result<f64> {
    if !(ip > 0.0) {
        return Err(Error::Rate(format!("ionization potential must be positive, got {ip}")));
    }
    if !(field >= 0.0) {
        return Err(Error::Rate(format!("field magnitude must be non-negative, got {field}")));
    }
    if field < model.f_floor {
        return Ok(0.0);
    }
    let n_star = model.z_res / (2.0 * ip).sqrt();
    let f0 = (2.0 * ip).powf(1.5);
    let gamma = keldysh(field, omega, ip)?;
    let m = model.m as f64;
    let exponent = -(2.0 * f0 / (3.0 * field)) * shape_g(gamma);
    let ln_pref = (6.0 / PI).sqrt().ln()
        + model.c2(ip).ln()
        + angular_factor(model.l, model.m).ln()
        + ip.ln()
        + (2.0 * n_star - m - 1.5) * (2.0 * f0 / field).ln()
        + (0.5 * m + 0.75) * (1.0 + gamma * gamma).ln();
    if ln_pref + exponent < -700.0 {
        return Ok(0.0);
    }
    let a = multiphoton_factor(model.m, omega, gamma, ip)?;
    Ok(a * (ln_pref + exponent).exp())
}

/// Which ionization step a rate describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Species {
    /// H2 -> H2+(1sσg).
    H2,
    /// H2+(1sσg) -> Coulomb explosion.
    G,
    /// H2+(2pσu) -> Coulomb explosion.
    U,
}

impl Species {
    pub fn ip(self, ips: &IonizationPotentials) -> f64 {
        match self {
            Species::H2 => ips.ip1,
            Species::G => ips.ipg,
            Species::U => ips.ipu,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Species::H2 => "H2",
            Species::G => "g",
            Species::U => "u",
        }
    }
}

/// Rates `W(R_i, F_j)` on a rectangular (R, log F) mesh for one carrier frequency.
#[derive(Debug, Clone)]
pub struct RateTable {
    pub species: Species,
    pub omega: f64,
    pub r_axis: Vec<f64>,
    /// Log-spaced, `f_axis[0]` is the model's field floor.
    pub f_axis: Vec<f64>,
    /// Row-major: `w[i * f_axis.len() + j]`.
    pub w: Vec<f64>,
    ln_f: Vec<f64>,
    ln_w: Vec<f64>,
}

impl RateTable {
    /// Default R mesh: 0.02 bohr up to 8 bohr, 0.1 bohr beyond.
    pub fn default_r_axis(r_min: f64, r_max: f64) -> Vec<f64> {
        let mut axis = Vec::new();
        let mut r = r_min;
        while r < r_max {
            axis.push(r);
            r += if r < 8.0 { 0.02 } else { 0.1 };
        }
        axis.push(r_max);
        axis
    }

    /// Field mesh `f_floor · 10^(j/per_decade)`, extended until it covers `f_max`.
    ///
    /// The nodes depend only on the floor and the density, so tables built for different
    /// peak fields interpolate identically wherever they overlap.
    pub fn log_axis(f_floor: f64, f_max: f64, per_decade: usize) -> Vec<f64> {
        let decades = (f_max / f_floor).log10().max(0.0);
        let n = ((decades * per_decade as f64 - 1e-9).ceil() as usize).max(1);
        (0..=n)
            .map(|j| f_floor * 10f64.powf(j as f64 / per_decade as f64))
            .collect()
    }

    pub fn build(
        ds: &MolecularDataset,
        species: Species,
        omega: f64,
        model: &RateModel,
        r_axis: Vec<f64>,
        f_axis: Vec<f64>,
    ) -> Result<Self> {
        model.validate()?;
        if f_axis.len() < 2 || f_axis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Rate("field axis must be increasing with at least two points".into()));
        }
        if f_axis[0] > model.f_floor * (1.0 + 1e-12) {
            return Err(Error::Rate(format!(
                "field axis starts at {} above the floor {}",
                f_axis[0], model.f_floor
            )));
        }
        let ips: Vec<f64> = r_axis
            .iter()
            .map(|&r| ds.ionization_potentials(r).map(|ip| species.ip(&ip)))
            .collect::<Result<_>>()?;
        let nf = f_axis.len();
        // parallel over the field axis
        let columns: Vec<Vec<f64>> = f_axis
            .par_iter()
            .map(|&f| ips.iter().map(|&ip| ppt_rate(f, omega, ip, model)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let mut w = vec![0.0; r_axis.len() * nf];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                w[i * nf + j] = *v;
            }
        }
        let ln_w = w.iter().map(|&v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY }).collect();
        let ln_f = f_axis.iter().map(|f| f.ln()).collect();
        Ok(Self {
            species,
            omega,
            r_axis,
            f_axis,
            w,
            ln_f,
            ln_w,
        })
    }

    pub fn f_max(&self) -> f64 {
        *self.f_axis.last().unwrap()
    }

    pub fn at_node(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.f_axis.len() + j]
    }

    /// Locates `x` in an increasing axis: lower index and fractional position.
    fn locate(axis: &[f64], x: f64) -> (usize, f64) {
        let n = axis.len();
        if x <= axis[0] {
            return (0, 0.0);
        }
        if x >= axis[n - 1] {
            return (n - 2, 1.0);
        }
        let i = axis.partition_point(|&a| a <= x) - 1;
        (i, (x - axis[i]) / (axis[i + 1] - axis[i]))
    }

    fn field_cell(&self, field: f64) -> Option<(usize, f64)> {
        if field < self.f_axis[0] {
            return None;
        }
        Some(Self::locate(&self.ln_f, field.ln()))
    }

    /// Bilinear lookup in (R, ln F) on ln W; cells touching a zero rate fall back to W itself.
    pub fn lookup(&self, r: f64, field: f64) -> f64 {
        let Some((j, fj)) = self.field_cell(field.abs()) else {
            return 0.0;
        };
        let (i, fi) = Self::locate(&self.r_axis, r);
        let nf = self.f_axis.len();
        let corners = [
            (i * nf + j, (1.0 - fi) * (1.0 - fj)),
            (i * nf + j + 1, (1.0 - fi) * fj),
            ((i + 1) * nf + j, fi * (1.0 - fj)),
            ((i + 1) * nf + j + 1, fi * fj),
        ];
        if corners.iter().all(|&(k, _)| self.w[k] > 0.0) {
            corners.iter().map(|&(k, c)| c * self.ln_w[k]).sum::<f64>().exp()
        } else {
            corners.iter().map(|&(k, c)| c * self.w[k]).sum()
        }
    }

    /// Interpolates the table onto fixed R points, leaving only the field dimension.
    pub fn on_points(&self, rs: &[f64]) -> PointRates {
        let nf = self.f_axis.len();
        let mut ln_w = vec![f64::NEG_INFINITY; rs.len() * nf];
        let mut w = vec![0.0; rs.len() * nf];
        for (p, &r) in rs.iter().enumerate() {
            let (i, fi) = Self::locate(&self.r_axis, r);
            for j in 0..nf {
                let (a, b) = (self.w[i * nf + j], self.w[(i + 1) * nf + j]);
                w[p * nf + j] = (1.0 - fi) * a + fi * b;
                if a > 0.0 && b > 0.0 {
                    ln_w[p * nf + j] = (1.0 - fi) * self.ln_w[i * nf + j] + fi * self.ln_w[(i + 1) * nf + j];
                }
            }
        }
        PointRates {
            nf,
            ln_f: self.ln_f.clone(),
            f_floor: self.f_axis[0],
            ln_w,
            w,
        }
    }
}

/// A rate table pre-interpolated onto the points of a simulation grid.
#[derive(Debug, Clone)]
pub struct PointRates {
    nf: usize,
    ln_f: Vec<f64>,
    f_floor: f64,
    ln_w: Vec<f64>,
    w: Vec<f64>,
}

impl PointRates {
    /// Fills `out[p] = W(R_p, |field|)`.
    pub fn fill(&self, field: f64, out: &mut [f64]) {
        let field = field.abs();
        if field < self.f_floor {
            out.iter_mut().for_each(|w| *w = 0.0);
            return;
        }
        let (j, fj) = RateTable::locate(&self.ln_f, field.ln());
        for (p, o) in out.iter_mut().enumerate() {
            let k = p * self.nf + j;
            let (la, lb) = (self.ln_w[k], self.ln_w[k + 1]);
            *o = if la.is_finite() && lb.is_finite() {
                ((1.0 - fj) * la + fj * lb).exp()
            } else {
                (1.0 - fj) * self.w[k] + fj * self.w[k + 1]
            };
        }
    }

    pub fn len(&self) -> usize {
        self.w.len() / self.nf
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

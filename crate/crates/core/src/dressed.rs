//! Photon-dressed H₂⁺ potential curves and their crossings.
//!
//! A dressed curve `V_c(R) - n ω` describes channel `c` after absorbing `n` photons. Two
//! curves whose photon numbers differ by an odd number are radiatively coupled by
//! `μ(R) E0 / 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::molecular::MolecularDataset;

/// Search interval for crossings, bohr.
pub const CROSSING_RANGE: (f64, f64) = (0.5, 15.0);
const SCAN_STEP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressedCurves {
    pub omega: f64,
    pub e0: f64,
    pub n_g: i32,
    pub n_u: i32,
    pub r: Vec<f64>,
    /// `V_g - n_g ω`.
    pub diabatic_g: Vec<f64>,
    /// `V_u - n_u ω`.
    pub diabatic_u: Vec<f64>,
    pub adiabatic_lower: Vec<f64>,
    pub adiabatic_upper: Vec<f64>,
}

fn check_pair(n_g: i32, n_u: i32) -> Result<()> {
    if (n_g - n_u).rem_euclid(2) == 0 {
        return Err(Error::EvenPhotonDifference(n_g, n_u));
    }
    Ok(())
}

/// Eigenvalues of `[[a, c], [c, b]]`, lower first.
pub fn two_level_eigenvalues(a: f64, b: f64, c: f64) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let h = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    (m - h, m + h)
}

pub fn dressed_pair(ds: &MolecularDataset, omega: f64, e0: f64, n_g: i32, n_u: i32, r: &[f64]) -> Result<DressedCurves> {
    check_pair(n_g, n_u)?;
    let mut out = DressedCurves {
        omega,
        e0,
        n_g,
        n_u,
        r: r.to_vec(),
        diabatic_g: Vec::with_capacity(r.len()),
        diabatic_u: Vec::with_capacity(r.len()),
        adiabatic_lower: Vec::with_capacity(r.len()),
        adiabatic_upper: Vec::with_capacity(r.len()),
    };
    for &x in r {
        let g = ds.v_g.eval(x)? - n_g as f64 * omega;
        let u = ds.v_u.eval(x)? - n_u as f64 * omega;
        let c = 0.5 * ds.mu_ug.eval(x)? * e0;
        let (lo, hi) = two_level_eigenvalues(g, u, c);
        out.diabatic_g.push(g);
        out.diabatic_u.push(u);
        out.adiabatic_lower.push(lo);
        out.adiabatic_upper.push(hi);
    }
    Ok(out)
}

/// First root of `gap` on `[lo, hi]`, located on a uniform scan and refined by bisection.
pub fn find_root(gap: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, step: f64, tol: f64) -> Result<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut a = lo;
    let mut fa = gap(a)?;
    for i in 1..=n {
        let b = (lo + i as f64 * step).min(hi);
        let fb = gap(b)?;
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            while x1 - x0 > tol {
                let m = 0.5 * (x0 + x1);
                let fm = gap(m)?;
                if fm == 0.0 {
                    return Ok(m);
                }
                if fm.signum() == f0.signum() {
                    x0 = m;
                    f0 = fm;
                } else {
                    x1 = m;
                }
            }
            return Ok(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoCrossing(lo, hi))
}

/// Crossing of `V_g - n_g ω` and `V_u - n_u ω` in [`CROSSING_RANGE`].
pub fn find_crossing(ds: &MolecularDataset, omega: f64, n_g: i32, n_u: i32) -> Result<f64> {
    check_pair(n_g, n_u)?;
    let gap = |r: f64| -> Result<f64> {
        Ok(ds.v_u.eval(r)? - n_u as f64 * omega - ds.v_g.eval(r)? + n_g as f64 * omega)
    };
    find_root(gap, CROSSING_RANGE.0, CROSSING_RANGE.1, SCAN_STEP, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn analytic_root() {
        // 0.3/R - 0.1 crosses zero at R = 3
        let r = find_root(|r| Ok(0.3 / r - 0.1), 0.5, 15.0, 0.01, 1e-10).unwrap();
        assert_abs_diff_eq!(r, 3.0, epsilon = 1e-9);
        assert!(matches!(
            find_root(|_| Ok(1.0), 0.5, 15.0, 0.01, 1e-10),
            Err(Error::NoCrossing(..))
        ));
    }

    #[test]
    fn even_difference_is_rejected() {
        let ds = MolecularDataset::bundled();
        assert!(matches!(find_crossing(&ds, 0.17, 0, 2), Err(Error::EvenPhotonDifference(0, 2))));
        assert!(dressed_pair(&ds, 0.17, 0.05, 1, 3, &[2.0]).is_err());
    }

    #[test]
    fn zero_field_leaves_curves_diabatic() {
        let ds = MolecularDataset::bundled();
        let r: Vec<f64> = (0..100).map(|i| 1.0 + 0.05 * i as f64).collect();
        let d = dressed_pair(&ds, 0.1713, 0.0, 0, 3, &r).unwrap();
        for i in 0..r.len() {
            let (a, b) = (d.diabatic_g[i], d.diabatic_u[i]);
            assert_abs_diff_eq!(d.adiabatic_lower[i], a.min(b), epsilon = 1e-14);
            assert_abs_diff_eq!(d.adiabatic_upper[i], a.max(b), epsilon = 1e-14);
        }
    }

    #[test]
    fn gap_at_crossing_is_mu_e0() {
        let ds = MolecularDataset::bundled();
        let omega = 0.1713;
        let e0 = 0.1688;
        let rc = find_crossing(&ds, omega, 2, 3).unwrap();
        let d = dressed_pair(&ds, omega, e0, 2, 3, &[rc]).unwrap();
        let gap = d.adiabatic_upper[0] - d.adiabatic_lower[0];
        assert_abs_diff_eq!(gap, ds.mu_ug.eval(rc).unwrap() * e0, epsilon = 1e-6);
    }
}

//! Potential curves, transition dipole and R-dependent ionization potentials.
//!
//! A dataset is a directory holding a `manifest.txt` plus one two-column file per curve:
//!
//! ```text
//! v_h2 = v_h2.dat
//! v_g = v_g.dat
//! v_u = v_u.dat
//! mu_ug = mu_ug.dat
//! reduced_mass = 918.0764
//! v_g.above = inverse_power:-0.5:4     # optional extrapolation override
//! ```

mod curve;

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

pub use curve::{CurveTable, Extrapolation};

use crate::error::{Error, Result};
use crate::units::H2_REDUCED_MASS;

/// The five manifest roles, in checksum order.
pub const ROLES: [&str; 5] = ["v_h2", "v_g", "v_u", "mu_ug", "reduced_mass"];

const BUNDLED_MANIFEST: &str = include_str!("../../data/h2/manifest.txt");
const BUNDLED_FILES: [(&str, &str); 4] = [
    ("v_h2.dat", include_str!("../../data/h2/v_h2.dat")),
    ("v_g.dat", include_str!("../../data/h2/v_g.dat")),
    ("v_u.dat", include_str!("../../data/h2/v_u.dat")),
    ("mu_ug.dat", include_str!("../../data/h2/mu_ug.dat")),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonizationPotentials {
    /// H2 -> H2+(1sσg).
    pub ip1: f64,
    /// H2+(1sσg) -> H+ + H+.
    pub ipg: f64,
    /// H2+(2pσu) -> H+ + H+.
    pub ipu: f64,
}

#[derive(Debug, Clone)]
pub struct MolecularDataset {
    pub v_h2: CurveTable,
    pub v_g: CurveTable,
    pub v_u: CurveTable,
    pub mu_ug: CurveTable,
    pub reduced_mass: f64,
    checksum: String,
}

fn default_rules(role: &str) -> (Extrapolation, Extrapolation) {
    match role {
        "v_h2" => (
            Extrapolation::Coulomb,
            Extrapolation::InversePower {
                asymptote: -1.0,
                power: 6.0,
            },
        ),
        "v_g" | "v_u" => (
            Extrapolation::Coulomb,
            Extrapolation::InversePower {
                asymptote: -0.5,
                power: 4.0,
            },
        ),
        "mu_ug" => (Extrapolation::Clamp, Extrapolation::Linear { slope: 0.5 }),
        _ => unreachable!("not a curve role: {role}"),
    }
}

struct Manifest {
    files: [Option<String>; 4],
    reduced_mass: Option<f64>,
    rules: Vec<(String, bool, Extrapolation)>,
}

fn parse_manifest(source: &str, text: &str) -> Result<Manifest> {
    let mut m = Manifest {
        files: Default::default(),
        reduced_mass: None,
        rules: Vec::new(),
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            path: source.to_string(),
            line: lineno + 1,
            msg,
        };
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err("expected `key = value`".into()))?;
        if let Some((role, side)) = key.split_once('.') {
            if !ROLES[..4].contains(&role) || !(side == "below" || side == "above") {
                return Err(err(format!("unknown manifest key `{key}`")));
            }
            let rule = Extrapolation::parse(value).ok_or_else(|| err(format!("bad extrapolation rule `{value}`")))?;
            m.rules.push((role.to_string(), side == "above", rule));
            continue;
        }
        match ROLES.iter().position(|r| *r == key) {
            Some(4) => {
                let mass: f64 = value.parse().map_err(|_| err(format!("bad reduced mass `{value}`")))?;
                m.reduced_mass = Some(mass);
            }
            Some(i) => m.files[i] = Some(value.to_string()),
            None => return Err(err(format!("unknown manifest key `{key}`"))),
        }
    }
    Ok(m)
}

impl MolecularDataset {
    /// The reference dataset compiled into the crate.
    pub fn bundled() -> Self {
        Self::from_sources("<bundled>", BUNDLED_MANIFEST, |name| {
            BUNDLED_FILES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| Error::Config(format!("bundled file {name} missing")))
        })
        .expect("bundled dataset is valid")
    }

    /// Loads a dataset directory containing `manifest.txt`.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest_path = dir.join("manifest.txt");
        let manifest = std::fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
        Self::from_sources(&manifest_path.display().to_string(), &manifest, |name| {
            let p = dir.join(name);
            std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))
        })
    }

    fn from_sources(
        manifest_name: &str,
        manifest_text: &str,
        read: impl Fn(&str) -> Result<String>,
    ) -> Result<Self> {
        let manifest = parse_manifest(manifest_name, manifest_text)?;
        let mut hasher = Sha256::new();
        hasher.update(manifest_text.as_bytes());

        let mut curves = Vec::with_capacity(4);
        for (i, role) in ROLES[..4].iter().enumerate() {
            let file = manifest.files[i].as_deref().ok_or(Error::MissingCurve(role))?;
            let text = read(file)?;
            hasher.update(text.as_bytes());
            let (mut below, mut above) = default_rules(role);
            for (r, is_above, rule) in &manifest.rules {
                if r == role {
                    if *is_above {
                        above = *rule;
                    } else {
                        below = *rule;
                    }
                }
            }
            curves.push(CurveTable::parse(role, file, &text, below, above)?);
        }
        let digest = hasher.finalize();
        let mut checksum = String::with_capacity(64);
        for b in digest {
            let _ = write!(checksum, "{b:02x}");
        }
        let mut it = curves.into_iter();
        let ds = Self {
            v_h2: it.next().unwrap(),
            v_g: it.next().unwrap(),
            v_u: it.next().unwrap(),
            mu_ug: it.next().unwrap(),
            reduced_mass: manifest.reduced_mass.unwrap_or(H2_REDUCED_MASS),
            checksum,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Assemble a dataset from in-memory curves (checksum computed from the samples).
    pub fn from_curves(
        v_h2: CurveTable,
        v_g: CurveTable,
        v_u: CurveTable,
        mu_ug: CurveTable,
        reduced_mass: f64,
    ) -> Result<Self> {
        let mut hasher = Sha256::new();
        for c in [&v_h2, &v_g, &v_u, &mu_ug] {
            for (r, v) in c.r_samples().iter().zip(c.values()) {
                hasher.update(r.to_le_bytes());
                hasher.update(v.to_le_bytes());
            }
        }
        hasher.update(reduced_mass.to_le_bytes());
        let checksum = hasher.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        let ds = Self {
            v_h2,
            v_g,
            v_u,
            mu_ug,
            reduced_mass,
            checksum,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// SHA-256 of the manifest and curve files, hex encoded.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn ionization_potentials(&self, r: f64) -> Result<IonizationPotentials> {
        let vh2 = self.v_h2.eval(r)?;
        let vg = self.v_g.eval(r)?;
        let vu = self.v_u.eval(r)?;
        Ok(IonizationPotentials {
            ip1: vg - vh2,
            ipg: 1.0 / r - vg,
            ipu: 1.0 / r - vu,
        })
    }

    /// Range over which the invariants are checked: from the first common node to 30 bohr.
    fn check_range(&self) -> (f64, f64) {
        let lo = [&self.v_h2, &self.v_g, &self.v_u]
            .iter()
            .map(|c| c.first())
            .fold(f64::MIN, f64::max);
        (lo, 30.0)
    }

    /// Asymptotic, positivity and monotonicity checks.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let vg30 = self.v_g.eval(30.0)?;
        let vu30 = self.v_u.eval(30.0)?;
        let vh30 = self.v_h2.eval(30.0)?;
        if (vg30 + 0.5).abs() > 1e-2 {
            return fail(format!("V_g(30) = {vg30}, expected -0.5 ± 0.01 (H(1s) + H+ limit)"));
        }
        if (vu30 - vg30).abs() > 1e-2 {
            return fail(format!("V_u(30) - V_g(30) = {}, expected 0 ± 0.01", vu30 - vg30));
        }
        if (vh30 + 1.0).abs() > 1e-2 {
            return fail(format!("V_H2(30) = {vh30}, expected -1.0 ± 0.01"));
        }
        let mu15 = self.mu_ug.eval(15.0)?;
        if ((mu15 / 15.0) - 0.5).abs() > 0.025 {
            return fail(format!("mu_ug(15)/15 = {}, expected 0.5 within 5%", mu15 / 15.0));
        }
        if !(self.reduced_mass > 0.0) {
            return fail(format!("reduced mass {} must be positive", self.reduced_mass));
        }

        let (lo, hi) = self.check_range();
        let n = 4000;
        for i in 0..=n {
            let r = lo + (hi - lo) * i as f64 / n as f64;
            let ip = self.ionization_potentials(r)?;
            if !(ip.ip1 > 0.0) {
                return fail(format!("Ip1({r:.3}) = {} is not positive", ip.ip1));
            }
            if !(ip.ipg > 0.0) {
                return fail(format!("Ip_g({r:.3}) = {} is not positive", ip.ipg));
            }
            if !(ip.ipu > 0.0) {
                return fail(format!("Ip_u({r:.3}) = {} is not positive", ip.ipu));
            }
        }

        let mono = |name: &str, f: &dyn Fn(&IonizationPotentials) -> f64, a: f64, b: f64| -> Result<()> {
            let m = 500;
            let mut prev = f64::INFINITY;
            for i in 0..=m {
                let r = a + (b - a) * i as f64 / m as f64;
                let v = f(&self.ionization_potentials(r)?);
                if v > prev {
                    return Err(Error::Invariant(format!("{name} increases at R = {r:.3} bohr")));
                }
                prev = v;
            }
            Ok(())
        };
        mono("Ip1", &|ip| ip.ip1, 1.0, Self::IP1_MONOTONE_UNTIL)?;
        mono("Ip_g", &|ip| ip.ipg, 1.0, 6.0)?;
        Ok(())
    }

    /// Upper end of the range where Ip1 must decrease. Born-Oppenheimer H2 and H2+
    /// curves give Ip1 a shallow minimum near 4 bohr, so the check stops short of it.
    pub const IP1_MONOTONE_UNTIL: f64 = 3.5;
}

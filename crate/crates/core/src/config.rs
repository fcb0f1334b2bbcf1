//! Run configuration: `key = value` files, named presets and flag overrides.
//!
//! ```text
//! # 266 nm, 36 cycles
//! wavelength_nm = 266
//! intensity_W_cm2 = 2e14 W/cm2
//! cycles = 36
//! mode = dynamic
//! ```
//!
//! A value may carry a trailing unit token; it must match the unit in the key name.
//! Unknown keys are errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PulseParams;
use crate::grid::RadialGrid;
use crate::propagator::Mode;
use crate::rates::{RateModel, StructureCoefficient};
use crate::spectra::EnergyAxis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Run,
    Scan,
    Dressed,
}

impl Scenario {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "run" => Ok(Scenario::Run),
            "scan" => Ok(Scenario::Scan),
            "dressed" => Ok(Scenario::Dressed),
            _ => Err(Error::Config(format!("scenario must be run, scan or dressed, got `{s}`"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scenario::Run => "run",
            Scenario::Scan => "scan",
            Scenario::Dressed => "dressed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_min: RadialGrid::DEFAULT_R_MIN,
            r_max: RadialGrid::DEFAULT_R_MAX,
            points: RadialGrid::DEFAULT_POINTS,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.r_min, self.r_max, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub pulse: PulseParams,
    pub mode: Mode,
    pub grid: GridSpec,
    pub first_rate: RateModel,
    pub second_rate: RateModel,
    pub energy_axis: EnergyAxis,
    pub trace_every: usize,
    /// Fraction of the grid covered by the absorbing mask; 0 disables it.
    pub absorber_fraction: f64,
    /// Peak intensities for a scan, W/cm².
    pub scan_intensities: Vec<f64>,
    /// `(n_g, n_u)` photon numbers of the dressed pairs.
    pub dressed_pairs: Vec<(i32, i32)>,
    pub dataset: Option<PathBuf>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Run,
            pulse: PulseParams {
                wavelength_nm: 800.0,
                intensity_w_cm2: 1e14,
                cycles: 12.0,
                steps_per_cycle: PulseParams::DEFAULT_STEPS_PER_CYCLE,
            },
            mode: Mode::Dynamic,
            grid: GridSpec::default(),
            first_rate: RateModel::first_ionization(),
            second_rate: RateModel::second_ionization(),
            energy_axis: EnergyAxis::default(),
            trace_every: 10,
            absorber_fraction: 0.0,
            scan_intensities: Vec::new(),
            dressed_pairs: vec![(0, 1), (0, 3), (2, 3)],
            dataset: None,
            out: PathBuf::from("out"),
        }
    }
}

/// Recognised keys and the unit token their values may carry.
pub const KEYS: &[(&str, Option<&str>)] = &[
    ("scenario", None),
    ("wavelength_nm", Some("nm")),
    ("intensity_W_cm2", Some("W/cm2")),
    ("cycles", None),
    ("steps_per_cycle", None),
    ("mode", None),
    ("r_min_bohr", Some("bohr")),
    ("r_max_bohr", Some("bohr")),
    ("grid_points", None),
    ("h2_z_res", None),
    ("ion_z_res", None),
    ("l", None),
    ("m", None),
    ("h2_c2", None),
    ("ion_c2", None),
    ("f_floor_au", Some("au")),
    ("e_max_eV", Some("eV")),
    ("de_eV", Some("eV")),
    ("trace_every", None),
    ("absorber_fraction", None),
    ("scan_intensities_W_cm2", Some("W/cm2")),
    ("scan_min_W_cm2", Some("W/cm2")),
    ("scan_max_W_cm2", Some("W/cm2")),
    ("scan_points", None),
    ("dressed_pairs", None),
    ("dataset", None),
    ("out", None),
];

fn unit_aliases(unit: &str) -> &[&str] {
    match unit {
        "W/cm2" => &["W/cm2", "W/cm^2", "W cm-2"],
        "au" => &["au", "a.u."],
        other => std::slice::from_ref(match other {
            "nm" => &"nm",
            "bohr" => &"bohr",
            "eV" => &"eV",
            _ => &"",
        }),
    }
}

/// Splits a trailing unit token from a value and checks it against the key's unit.
fn strip_unit<'a>(key: &str, value: &'a str) -> Result<&'a str> {
    let unit = KEYS
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| Error::UnknownKey(key.to_string()))?
        .1;
    let Some((number, token)) = value.rsplit_once(char::is_whitespace) else {
        return Ok(value);
    };
    let token = token.trim();
    // only a trailing token that does not parse as a number is a unit
    if token.parse::<f64>().is_ok() || token.ends_with(',') || number.trim_end().ends_with(',') {
        return Ok(value);
    }
    match unit {
        Some(u) if unit_aliases(u).contains(&token) => Ok(number.trim()),
        expected => Err(Error::UnitMismatch {
            key: key.to_string(),
            expected: expected.unwrap_or("none").to_string(),
            found: token.to_string(),
        }),
    }
}

fn num(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("`{key}` expects a number, got `{v}`")))
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("`{key}` expects a non-negative integer, got `{v}`")))
}

/// Parses `key = value` text into `(key, value, line)` triples.
pub fn parse_pairs(source: &str, text: &str) -> Result<Vec<(String, String, usize)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: source.to_string(),
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string(), i + 1));
    }
    Ok(pairs)
}

#[derive(Default)]
struct ScanRange {
    min: Option<f64>,
    max: Option<f64>,
    points: Option<usize>,
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let mut range = ScanRange::default();
        self.set_inner(key, value, &mut range)?;
        self.finish_range(range)
    }

    fn set_inner(&mut self, key: &str, value: &str, range: &mut ScanRange) -> Result<()> {
        let v = strip_unit(key, value)?;
        match key {
            "scenario" => self.scenario = Scenario::parse(v)?,
            "wavelength_nm" => self.pulse.wavelength_nm = num(key, v)?,
            "intensity_W_cm2" => self.pulse.intensity_w_cm2 = num(key, v)?,
            "cycles" => self.pulse.cycles = num(key, v)?,
            "steps_per_cycle" => self.pulse.steps_per_cycle = count(key, v)?,
            "mode" => self.mode = v.parse()?,
            "r_min_bohr" => self.grid.r_min = num(key, v)?,
            "r_max_bohr" => self.grid.r_max = num(key, v)?,
            "grid_points" => self.grid.points = count(key, v)?,
            "h2_z_res" => self.first_rate.z_res = num(key, v)?,
            "ion_z_res" => self.second_rate.z_res = num(key, v)?,
            "l" => {
                let l = count(key, v)? as u32;
                self.first_rate.l = l;
                self.second_rate.l = l;
            }
            "m" => {
                let m = count(key, v)? as u32;
                self.first_rate.m = m;
                self.second_rate.m = m;
            }
            "h2_c2" => self.first_rate.structure = parse_structure(key, v)?,
            "ion_c2" => self.second_rate.structure = parse_structure(key, v)?,
            "f_floor_au" => {
                let f = num(key, v)?;
                self.first_rate.f_floor = f;
                self.second_rate.f_floor = f;
            }
            "e_max_eV" => self.energy_axis.e_max = num(key, v)?,
            "de_eV" => self.energy_axis.de = num(key, v)?,
            "trace_every" => self.trace_every = count(key, v)?,
            "absorber_fraction" => self.absorber_fraction = num(key, v)?,
            "scan_intensities_W_cm2" => {
                self.scan_intensities = v
                    .split(',')
                    .map(|s| num(key, strip_unit(key, s.trim())?))
                    .collect::<Result<_>>()?
            }
            "scan_min_W_cm2" => range.min = Some(num(key, v)?),
            "scan_max_W_cm2" => range.max = Some(num(key, v)?),
            "scan_points" => range.points = Some(count(key, v)?),
            "dressed_pairs" => {
                self.dressed_pairs = v
                    .split(',')
                    .map(|p| {
                        let (g, u) = p
                            .trim()
                            .split_once(':')
                            .ok_or_else(|| Error::Config(format!("dressed pair `{p}` is not `n_g:n_u`")))?;
                        let parse = |s: &str| {
                            s.trim()
                                .parse::<i32>()
                                .map_err(|_| Error::Config(format!("bad photon number `{s}`")))
                        };
                        Ok((parse(g)?, parse(u)?))
                    })
                    .collect::<Result<_>>()?
            }
            "dataset" => self.dataset = Some(PathBuf::from(v)),
            "out" => self.out = PathBuf::from(v),
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    fn finish_range(&mut self, range: ScanRange) -> Result<()> {
        match (range.min, range.max, range.points) {
            (None, None, None) => Ok(()),
            (Some(lo), Some(hi), Some(n)) => {
                self.scan_intensities = log_spaced(lo, hi, n)?;
                Ok(())
            }
            _ => Err(Error::Config(
                "scan_min_W_cm2, scan_max_W_cm2 and scan_points must be given together".into(),
            )),
        }
    }

    /// Applies a list of settings in order; a scan range may be spread over several keys.
    pub fn apply(&mut self, pairs: &[(String, String)]) -> Result<()> {
        let mut range = ScanRange::default();
        for (k, v) in pairs {
            self.set_inner(k, v, &mut range)?;
        }
        self.finish_range(range)
    }

    /// Reads a config file on top of the defaults.
    pub fn from_text(source: &str, text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let pairs = parse_pairs(source, text)?;
        let mut range = ScanRange::default();
        for (k, v, line) in pairs {
            cfg.set_inner(&k, &v, &mut range).map_err(|e| match e {
                Error::Config(msg) => Error::Parse {
                    path: source.to_string(),
                    line,
                    msg,
                },
                other => other,
            })?;
        }
        cfg.finish_range(range)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&path.display().to_string(), &text)
    }

    pub fn from_preset(name: &str) -> Result<Self> {
        let text = preset(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
        Self::from_text(&format!("preset:{name}"), text)
    }

    pub fn validate(&self) -> Result<()> {
        self.pulse.validate()?;
        self.grid.build()?;
        self.first_rate.validate()?;
        self.second_rate.validate()?;
        EnergyAxis::new(self.energy_axis.e_max, self.energy_axis.de)?;
        if self.trace_every == 0 {
            return Err(Error::Config("trace_every must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.absorber_fraction) {
            return Err(Error::Config(format!(
                "absorber_fraction must lie in [0, 0.5), got {}",
                self.absorber_fraction
            )));
        }
        if self.scenario == Scenario::Scan && self.scan_intensities.is_empty() {
            return Err(Error::Config("a scan needs scan_intensities_W_cm2 or a scan range".into()));
        }
        for &i in &self.scan_intensities {
            if !(i > 0.0) || !i.is_finite() {
                return Err(Error::Config(format!("scan intensity {i} must be positive")));
            }
        }
        if let Some(d) = &self.dataset {
            if !d.join("manifest.txt").is_file() {
                return Err(Error::Config(format!("dataset directory {} has no manifest.txt", d.display())));
            }
        }
        Ok(())
    }

    /// The effective configuration as `key = value` lines, in a fixed order.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("scenario", self.scenario.label().into());
        kv("wavelength_nm", fmt_f(self.pulse.wavelength_nm));
        kv("intensity_W_cm2", fmt_f(self.pulse.intensity_w_cm2));
        kv("cycles", fmt_f(self.pulse.cycles));
        kv("steps_per_cycle", self.pulse.steps_per_cycle.to_string());
        kv("mode", self.mode.label().into());
        kv("r_min_bohr", fmt_f(self.grid.r_min));
        kv("r_max_bohr", fmt_f(self.grid.r_max));
        kv("grid_points", self.grid.points.to_string());
        kv("h2_z_res", fmt_f(self.first_rate.z_res));
        kv("ion_z_res", fmt_f(self.second_rate.z_res));
        kv("l", self.first_rate.l.to_string());
        kv("m", self.first_rate.m.to_string());
        kv("h2_c2", fmt_structure(self.first_rate.structure));
        kv("ion_c2", fmt_structure(self.second_rate.structure));
        kv("f_floor_au", fmt_f(self.first_rate.f_floor));
        kv("e_max_eV", fmt_f(self.energy_axis.e_max));
        kv("de_eV", fmt_f(self.energy_axis.de));
        kv("trace_every", self.trace_every.to_string());
        kv("absorber_fraction", fmt_f(self.absorber_fraction));
        if !self.scan_intensities.is_empty() {
            let list: Vec<String> = self.scan_intensities.iter().map(|&i| fmt_f(i)).collect();
            kv("scan_intensities_W_cm2", list.join(", "));
        }
        let pairs: Vec<String> = self.dressed_pairs.iter().map(|(g, u)| format!("{g}:{u}")).collect();
        kv("dressed_pairs", pairs.join(", "));
        kv(
            "dataset",
            self.dataset
                .as_ref()
                .map_or_else(|| "bundled".to_string(), |d| d.display().to_string()),
        );
        s
    }
}

fn parse_structure(key: &str, v: &str) -> Result<StructureCoefficient> {
    if v == "hydrogenic" {
        Ok(StructureCoefficient::Hydrogenic)
    } else {
        let c = num(key, v)?;
        if !(c > 0.0) {
            return Err(Error::Config(format!("`{key}` must be positive or `hydrogenic`")));
        }
        Ok(StructureCoefficient::Fixed(c))
    }
}

fn fmt_structure(s: StructureCoefficient) -> String {
    match s {
        StructureCoefficient::Hydrogenic => "hydrogenic".into(),
        StructureCoefficient::Fixed(c) => fmt_f(c),
    }
}

/// Shortest round-trip representation; stable across platforms.
pub fn fmt_f(x: f64) -> String {
    let s = format!("{x:?}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi >= lo) || n == 0 {
        return Err(Error::Config(format!("bad log range {lo} .. {hi} with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let r = (hi / lo).ln();
    Ok((0..n)
        .map(|i| {
            // pin the ends exactly
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                lo * (r * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// Names of the built-in presets, in display order.
pub const PRESETS: &[&str] = &[
    "fig2a", "fig2b", "fig3", "fig3_inset", "fig4a", "fig4b", "fig4c", "fig4d", "fig4_scan", "fig5",
];

/// Built-in preset text.
pub fn preset(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2a" => "# single cycle at 266 nm\nwavelength_nm = 266\nintensity_W_cm2 = 1e15\ncycles = 1\nmode = dynamic\n",
        "fig2b" => "# single cycle at 800 nm\nwavelength_nm = 800\nintensity_W_cm2 = 1e15\ncycles = 1\nmode = dynamic\n",
        "fig3" => "# 12 cycles (32 fs) at 800 nm, intensity scan\nscenario = scan\nwavelength_nm = 800\ncycles = 12\nmode = dynamic\nscan_min_W_cm2 = 5e13\nscan_max_W_cm2 = 5e15\nscan_points = 13\n",
        "fig3_inset" => "# 12 cycles at 800 nm, 6.3e14 W/cm2\nwavelength_nm = 800\nintensity_W_cm2 = 6.3e14\ncycles = 12\nmode = dynamic\ntrace_every = 1\n",
        "fig4a" => "# 36 cycles (32 fs) at 266 nm\nwavelength_nm = 266\nintensity_W_cm2 = 2e14\ncycles = 36\nmode = dynamic\n",
        "fig4b" => "wavelength_nm = 266\nintensity_W_cm2 = 1e15\ncycles = 36\nmode = dynamic\n",
        "fig4c" => "wavelength_nm = 266\nintensity_W_cm2 = 1.2e15\ncycles = 36\nmode = dynamic\n",
        "fig4d" => "wavelength_nm = 266\nintensity_W_cm2 = 1.5e15\ncycles = 36\nmode = dynamic\n",
        "fig4_scan" => "scenario = scan\nwavelength_nm = 266\ncycles = 36\nmode = dynamic\nscan_intensities_W_cm2 = 2e14, 1e15, 1.2e15, 1.5e15\n",
        "fig5" => "# dressed H2+ curves at 266 nm, 1e15 W/cm2\nscenario = dressed\nwavelength_nm = 266\nintensity_W_cm2 = 1e15\ndressed_pairs = 0:1, 0:3, 2:3\n",
        _ => return None,
    })
}

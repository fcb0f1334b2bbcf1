//! Linearly polarized laser pulse with a sin² envelope.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub wavelength_nm: f64,
    pub intensity_w_cm2: f64,
    pub cycles: f64,
    pub steps_per_cycle: usize,
}

impl PulseParams {
    pub const DEFAULT_STEPS_PER_CYCLE: usize = 1000;

    pub fn new(wavelength_nm: f64, intensity_w_cm2: f64, cycles: f64) -> Result<Self> {
        let p = Self {
            wavelength_nm,
            intensity_w_cm2,
            cycles,
            steps_per_cycle: Self::DEFAULT_STEPS_PER_CYCLE,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_steps_per_cycle(mut self, steps: usize) -> Self {
        self.steps_per_cycle = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("wavelength_nm", self.wavelength_nm)?;
        // zero intensity is allowed: it is the field-free reference run
        if !(self.intensity_w_cm2 >= 0.0) || !self.intensity_w_cm2.is_finite() {
            return Err(Error::Config(format!(
                "intensity_W_cm2 must be non-negative, got {}",
                self.intensity_w_cm2
            )));
        }
        positive("cycles", self.cycles)?;
        if self.steps_per_cycle == 0 {
            return Err(Error::Config("steps_per_cycle must be positive".into()));
        }
        Ok(())
    }

    /// Carrier frequency, hartree.
    pub fn omega(&self) -> f64 {
        units::omega_from_wavelength_nm(self.wavelength_nm)
    }

    /// Peak field amplitude, a.u.
    pub fn e0(&self) -> f64 {
        units::field_from_intensity(self.intensity_w_cm2)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }

    /// Total pulse duration, a.u.
    pub fn t_f(&self) -> f64 {
        self.cycles * self.period()
    }

    pub fn dt(&self) -> f64 {
        self.period() / self.steps_per_cycle as f64
    }

    pub fn n_steps(&self) -> usize {
        (self.cycles * self.steps_per_cycle as f64).round() as usize
    }

    /// `E(t) = E0 sin²(πt/t_f) cos(ωt)`, zero outside `[0, t_f]`.
    pub fn field(&self, t: f64) -> f64 {
        let tf = self.t_f();
        if !(0.0..=tf).contains(&t) {
            return 0.0;
        }
        let env = (PI * t / tf).sin();
        self.e0() * env * env * (self.omega() * t).cos()
    }
}

//! Uniform radial grid and nuclear wave packets.
//!
//! Points sit at `R_i = r_min + i * dr` for `i = 0..n`, with `dr = (r_max - r_min) / n`,
//! so `r_max` itself is the first point of the next periodic image. Wavenumbers follow
//! the usual FFT ordering.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    n: usize,
    dr: f64,
    r: Vec<f64>,
    k: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for RadialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialGrid")
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .field("n", &self.n)
            .field("dr", &self.dr)
            .finish()
    }
}

impl PartialEq for RadialGrid {
    fn eq(&self, other: &Self) -> bool {
        self.r_min == other.r_min && self.r_max == other.r_max && self.n == other.n
    }
}

impl RadialGrid {
    pub const DEFAULT_R_MIN: f64 = 0.1;
    pub const DEFAULT_R_MAX: f64 = 40.0;
    pub const DEFAULT_POINTS: usize = 2048;

    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("point count {n} is not a power of two >= 8")));
        }
        if !(r_min > 0.0) || !r_min.is_finite() {
            return Err(Error::Grid(format!("r_min = {r_min} must be positive")));
        }
        if !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::Grid(format!("r_max = {r_max} must exceed r_min = {r_min}")));
        }
        let dr = (r_max - r_min) / n as f64;
        let r = (0..n).map(|i| r_min + i as f64 * dr).collect();
        let dk = 2.0 * PI / (n as f64 * dr);
        let k = (0..n)
            .map(|j| {
                if j < n / 2 {
                    j as f64 * dk
                } else {
                    (j as f64 - n as f64) * dk
                }
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        Ok(Self {
            r_min,
            r_max,
            n,
            dr,
            r,
            k,
            fft,
            ifft,
        })
    }

    /// The default production grid: [0.1, 40] bohr with 2048 points.
    pub fn standard() -> Self {
        Self::new(Self::DEFAULT_R_MIN, Self::DEFAULT_R_MAX, Self::DEFAULT_POINTS)
            .expect("default grid is valid")
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dr)
    }

    /// Grid coordinates in bohr.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Angular wavenumbers in FFT order, bohr⁻¹.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dr
    }

    /// Unnormalized forward FFT, in place.
    pub fn fft_forward(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.fft.process_with_scratch(buf, scratch);
    }

    /// Unnormalized inverse FFT, in place.
    pub fn fft_inverse(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.ifft.process_with_scratch(buf, scratch);
    }

    pub fn scratch_len(&self) -> usize {
        self.fft
            .get_inplace_scratch_len()
            .max(self.ifft.get_inplace_scratch_len())
    }

    /// Index of the grid point closest to `r`, clamped to the grid.
    pub fn index_of(&self, r: f64) -> usize {
        let i = ((r - self.r_min) / self.dr).round();
        (i.max(0.0) as usize).min(self.n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    H2,
    G,
    U,
}

impl Channel {
    pub fn label(self) -> &'static str {
        match self {
            Channel::H2 => "H2",
            Channel::G => "g",
            Channel::U => "u",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Position,
    Momentum,
}

/// Direction argument for [`WavePacket::transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToMomentum,
    ToPosition,
}

/// Complex nuclear amplitudes (bohr^-1/2) of one electronic channel.
#[derive(Debug, Clone)]
pub struct WavePacket {
    grid: Arc<RadialGrid>,
    amp: Vec<Complex64>,
    channel: Channel,
    space: Space,
}

/// Norm and mean internuclear distance of a packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub norm2: f64,
    /// `None` when the packet is empty.
    pub mean_r: Option<f64>,
}

impl WavePacket {
    pub fn zeros(grid: Arc<RadialGrid>, channel: Channel) -> Self {
        let n = grid.len();
        Self {
            grid,
            amp: vec![Complex64::new(0.0, 0.0); n],
            channel,
            space: Space::Position,
        }
    }

    pub fn from_amplitudes(grid: Arc<RadialGrid>, channel: Channel, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != grid.len() {
            return Err(Error::Grid(format!(
                "{} amplitudes for a {}-point grid",
                amp.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            amp,
            channel,
            space: Space::Position,
        })
    }

    pub fn from_real(grid: Arc<RadialGrid>, channel: Channel, values: &[f64]) -> Result<Self> {
        let amp = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_amplitudes(grid, channel, amp)
    }

    /// Build a position-space packet by sampling `f` on the grid.
    pub fn from_fn(grid: Arc<RadialGrid>, channel: Channel, f: impl Fn(f64) -> Complex64) -> Self {
        let amp = grid.r().iter().map(|&r| f(r)).collect();
        Self {
            grid,
            amp,
            channel,
            space: Space::Position,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amp_mut(&mut self) -> &mut [Complex64] {
        &mut self.amp
    }

    /// `Σ|amp|² dr` in position space, `Σ|amp|² dk` in momentum space.
    pub fn norm2(&self) -> f64 {
        let step = match self.space {
            Space::Position => self.grid.dr(),
            Space::Momentum => self.grid.dk(),
        };
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * step
    }

    pub fn observables(&self) -> Observables {
        debug_assert_eq!(self.space, Space::Position);
        let dr = self.grid.dr();
        let (mut n2, mut first) = (0.0, 0.0);
        for (a, r) in self.amp.iter().zip(self.grid.r()) {
            let p = a.norm_sqr();
            n2 += p;
            first += p * r;
        }
        let norm2 = n2 * dr;
        let mean_r = if n2 > 0.0 { Some(first / n2) } else { None };
        Observables { norm2, mean_r }
    }

    pub fn mean_r(&self) -> Result<f64> {
        self.observables()
            .mean_r
            .ok_or(Error::EmptyChannel(self.channel.label()))
    }

    /// `⟨self|other⟩ = Σ conj(self) other dr`.
    pub fn inner(&self, other: &WavePacket) -> Complex64 {
        debug_assert!(Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid);
        self.amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.dr()
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.amp {
            *a *= s;
        }
    }

    /// Unitary Fourier transform between position and momentum amplitudes.
    ///
    /// Momentum amplitudes are `ã_j = dr / √(2π) Σ_i a_i e^{-2πi ij/n}`, which keeps
    /// `Σ|a|² dr = Σ|ã|² dk`.
    pub fn transform(&self, direction: Direction) -> WavePacket {
        let mut out = self.clone();
        let n = self.grid.len();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.grid.scratch_len()];
        match direction {
            Direction::ToMomentum => {
                debug_assert_eq!(self.space, Space::Position);
                self.grid.fft_forward(&mut out.amp, &mut scratch);
                let s = self.grid.dr() / (2.0 * PI).sqrt();
                out.scale(s);
                out.space = Space::Momentum;
            }
            Direction::ToPosition => {
                debug_assert_eq!(self.space, Space::Momentum);
                self.grid.fft_inverse(&mut out.amp, &mut scratch);
                let s = (2.0 * PI).sqrt() / (self.grid.dr() * n as f64);
                out.scale(s);
                out.space = Space::Position;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.amp.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// `cos^{1/8}` ramp over the outer fraction of the grid.
#[derive(Debug, Clone)]
pub struct AbsorbingMask {
    factors: Vec<f64>,
}

impl AbsorbingMask {
    pub fn new(grid: &RadialGrid, fraction: f64) -> Self {
        let start = grid.r_max() - fraction * (grid.r_max() - grid.r_min());
        let width = grid.r_max() - start;
        let factors = grid
            .r()
            .iter()
            .map(|&r| {
                if r <= start {
                    1.0
                } else {
                    (0.5 * PI * (r - start) / width).cos().max(0.0).powf(0.125)
                }
            })
            .collect();
        Self { factors }
    }

    /// Multiplies the mask in and returns the absorbed probability.
    pub fn apply(&self, wp: &mut WavePacket) -> f64 {
        let before = wp.norm2();
        for (a, f) in wp.amp.iter_mut().zip(&self.factors) {
            *a *= *f;
        }
        before - wp.norm2()
    }
}

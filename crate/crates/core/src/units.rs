//! Physical constants and unit conversions. Everything inside the crate is in
//! Hartree atomic units; these are only used at the I/O boundary.

/// Hartree in eV.
pub const HARTREE_EV: f64 = 27.211_386_245_988;

/// Atomic unit of intensity in W/cm², the intensity of a field of amplitude 1 a.u.
pub const AU_INTENSITY_W_CM2: f64 = 3.509_45e16;

/// Atomic unit of time in femtoseconds.
pub const AU_TIME_FS: f64 = 2.418_884_326_585_7e-2;

/// Photon energy times wavelength, hartree · nm.
pub const HARTREE_NM: f64 = 45.563_352_529_1;

/// Proton mass in electron masses.
pub const PROTON_MASS: f64 = 1_836.152_67;

/// Nuclear reduced mass of H2 / H2+ (m_p / 2).
pub const H2_REDUCED_MASS: f64 = 918.0764;

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_EV
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}

/// Carrier frequency (hartree) for a vacuum wavelength in nm.
pub fn omega_from_wavelength_nm(nm: f64) -> f64 {
    HARTREE_NM / nm
}

/// Field amplitude (a.u.) for a peak intensity in W/cm².
pub fn field_from_intensity(w_cm2: f64) -> f64 {
    (w_cm2 / AU_INTENSITY_W_CM2).sqrt()
}

pub fn au_time_to_fs(t: f64) -> f64 {
    t * AU_TIME_FS
}

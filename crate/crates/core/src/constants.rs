//! CODATA 2018 physical constants.

use serde::Serialize;

/// Physical constants in SI units (plus the ħc conversion in eV·m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant [J·s].
    pub hbar: f64,
    /// Boltzmann constant [J/K].
    pub k_b: f64,
    /// Vacuum permeability [T·m/A].
    pub mu_0: f64,
    /// Bohr magneton [J/T].
    pub mu_b: f64,
    /// Electron gyromagnetic ratio magnitude [rad/(s·T)].
    pub gamma_e: f64,
    /// Speed of light [m/s].
    pub c: f64,
    /// ħc [eV·m], for boson mass to range conversion.
    pub hbar_c_ev_m: f64,
    /// Electron mass [kg].
    pub m_e: f64,
}

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
pub const MU_0: f64 = 1.256_637_062_12e-6;
pub const MU_B: f64 = 9.274_010_078_3e-24;
pub const GAMMA_E: f64 = 1.760_859_630_23e11;
pub const C: f64 = 299_792_458.0;
pub const HBAR_C_EV_M: f64 = 1.973_269_804e-7;
pub const M_E: f64 = 9.109_383_701_5e-31;

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    k_b: K_B,
    mu_0: MU_0,
    mu_b: MU_B,
    gamma_e: GAMMA_E,
    c: C,
    hbar_c_ev_m: HBAR_C_EV_M,
    m_e: M_E,
};

impl PhysicalConstants {
    pub fn all(&self) -> [(&'static str, f64); 8] {
        [
            ("hbar", self.hbar),
            ("k_B", self.k_b),
            ("mu_0", self.mu_0),
            ("mu_B", self.mu_b),
            ("gamma_e", self.gamma_e),
            ("c", self.c),
            ("hbar_c_eV_m", self.hbar_c_ev_m),
            ("m_e", self.m_e),
        ]
    }
}

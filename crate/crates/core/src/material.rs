//! Ferromagnet material records.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{GAMMA_E, MU_B};
use crate::error::{Error, Result};

/// Bulk magnetic and mechanical properties of a hard ferromagnet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub name: String,
    /// Mass density [kg/m³].
    #[serde(rename = "density_kg_m3")]
    pub density: f64,
    /// Volume magnetization [A/m].
    #[serde(rename = "magnetization_A_m")]
    pub magnetization: f64,
    /// Gyromagnetic ratio of the carriers of the magnetization [rad/(s·T)].
    #[serde(rename = "gamma0_rad_s_T")]
    pub gamma0: f64,
    /// Magnetic moment carried by one spin [J/T].
    #[serde(rename = "moment_per_spin_J_T", default = "default_moment_per_spin")]
    pub moment_per_spin: f64,
}

fn default_moment_per_spin() -> f64 {
    MU_B
}

/// Sintered NdFeB density [kg/m³].
pub const NDFEB_DENSITY: f64 = 7430.0;
/// Calibration point for NdFeB: f_I = 0.188 Hz at R = 30 µm.
pub const NDFEB_CALIBRATION_RADIUS: f64 = 30e-6;
pub const NDFEB_CALIBRATION_F_I: f64 = 0.188;

type Constructor = fn() -> Material;

const BUILTIN: &[(&str, Constructor)] = &[("NdFeB", ndfeb)];

fn ndfeb() -> Material {
    // ω_I = S/I = M / (γ₀ · (2/5) ρ R²), solved for M.
    let omega_i = 2.0 * PI * NDFEB_CALIBRATION_F_I;
    let r = NDFEB_CALIBRATION_RADIUS;
    Material {
        name: "NdFeB".to_string(),
        density: NDFEB_DENSITY,
        magnetization: omega_i * GAMMA_E * 0.4 * NDFEB_DENSITY * r * r,
        gamma0: GAMMA_E,
        moment_per_spin: MU_B,
    }
}

/// Names accepted by [`builtin_material`].
pub fn builtin_names() -> Vec<String> {
    BUILTIN.iter().map(|(n, _)| n.to_string()).collect()
}

/// Looks up a built-in material by name.
pub fn builtin_material(name: &str) -> Result<Material> {
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make())
        .ok_or_else(|| Error::UnknownMaterial {
            name: name.to_string(),
            available: builtin_names(),
        })
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("material.density_kg_m3", self.density),
            ("material.magnetization_A_m", self.magnetization),
            ("material.gamma0_rad_s_T", self.gamma0),
            ("material.moment_per_spin_J_T", self.moment_per_spin),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(field, format!("must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

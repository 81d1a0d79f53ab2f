//! Projected bounds on pseudoscalar spin-spin couplings.
//!
//! A polarized source sphere sits a distance d below the sensor and rotates
//! its polarization about the separation axis, so the exotic field at the
//! sensor oscillates along y at the modulation frequency. The interaction is
//! the pseudoscalar-exchange dipole-dipole potential between electrons,
//!
//! V = κ g_p² ħ³/(16π m_e² c) · e^{−r/λ} [ σ₁·σ₂ (1/(λr²) + 1/r³)
//!       − (σ₁·r̂)(σ₂·r̂)(1/(λ²r) + 3/(λr²) + 3/r³) ],
//!
//! with λ = ħ/(m_b c) and κ a normalization constant (1 by default). A term
//! σ₁·A in the energy acts on the sensor spins like a field B = 2A/(ħγ₀).
//! The projected bound solves B(g_p²) = sqrt(S_B(f_mod)/t).

mod geometry;
mod overlay;

pub use geometry::{FieldGeometry, GeometryRegistry, PointDipole, VolumeIntegral};
pub use overlay::{parse_reference_bound, reference_bound_overlay, ReferenceCurve};

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, HBAR_C_EV_M, M_E};
use crate::error::{Error, Result};
use crate::format::sci;
use crate::noise::NoiseSource;
use crate::sensor::DerivedSensor;

/// Fully polarized electron spin density used when none is given [1/m³].
pub const DEFAULT_SPIN_DENSITY: f64 = 4e28;

/// Reduced Compton wavelength ħ/(m c) of a boson of mass `mass_ev` [eV], in metres.
pub fn boson_range(mass_ev: f64) -> Result<f64> {
    if !(mass_ev > 0.0 && mass_ev.is_finite()) {
        return Err(Error::invalid("mass_eV", format!("must be positive, got {mass_ev}")));
    }
    Ok(HBAR_C_EV_M / mass_ev)
}

/// Where the signal appears in the sensor spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulation {
    /// f_mod = fraction · f_α.
    FractionOfFAlpha(f64),
    /// Explicit modulation frequency [Hz].
    Explicit(f64),
}

impl Default for Modulation {
    fn default() -> Self {
        Modulation::FractionOfFAlpha(0.1)
    }
}

impl Modulation {
    pub fn frequency(&self, sensor: &DerivedSensor) -> f64 {
        match *self {
            Modulation::FractionOfFAlpha(x) => x * sensor.f_alpha(),
            Modulation::Explicit(f) => f,
        }
    }
}

/// Rotating polarized source sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    /// [m]
    pub radius: f64,
    /// Polarized spins per volume [1/m³].
    pub spin_density: f64,
    /// Centre-to-centre separation along z, source below sensor [m].
    pub distance: f64,
    /// Source rotation, which sets the signal frequency.
    pub modulation: Modulation,
    /// Polarization direction at t = 0; unit length, perpendicular to z.
    pub polarization_axis: [f64; 3],
}

impl SourceConfig {
    /// Source sphere of radius 2 mm at 4 mm, fully polarized.
    pub fn fig3_default() -> Self {
        SourceConfig {
            radius: 2e-3,
            spin_density: DEFAULT_SPIN_DENSITY,
            distance: 4e-3,
            modulation: Modulation::default(),
            polarization_axis: [1.0, 0.0, 0.0],
        }
    }

    pub fn total_spins(&self) -> f64 {
        self.spin_density * 4.0 / 3.0 * PI * self.radius.powi(3)
    }

    pub fn validate(&self, sensor_radius: f64) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::invalid("exclusion.source_radius_m", "must be positive"));
        }
        if !(self.spin_density > 0.0 && self.spin_density.is_finite()) {
            return Err(Error::invalid("exclusion.spin_density_m3", "must be positive"));
        }
        if !(self.distance > self.radius + sensor_radius) {
            return Err(Error::Geometry(format!(
                "source (radius {} m) and sensor (radius {} m) overlap at distance {} m",
                self.radius, sensor_radius, self.distance
            )));
        }
        let [x, y, z] = self.polarization_axis;
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > 1e-9 || z.abs() > 1e-9 {
            return Err(Error::invalid(
                "exclusion.polarization_axis",
                "must be a unit vector perpendicular to the separation (z) axis",
            ));
        }
        match self.modulation {
            Modulation::FractionOfFAlpha(x) if !(x > 0.0 && x.is_finite()) => {
                Err(Error::invalid("exclusion.modulation_over_f_alpha", "must be positive"))
            }
            Modulation::Explicit(f) if !(f > 0.0 && f.is_finite()) => {
                Err(Error::invalid("exclusion.f_mod_Hz", "must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// κ·ħ³/(16π m_e² c) [J·m³], the potential prefactor per unit g_p².
pub fn potential_prefactor(normalization: f64) -> f64 {
    normalization * HBAR.powi(3) / (16.0 * PI * M_E * M_E * C)
}

/// Amplitude [T] of the oscillating y-component of the exotic field at the sensor.
pub fn pseudomagnetic_field(
    source: &SourceConfig,
    sensor: &DerivedSensor,
    lambda: f64,
    g_p2: f64,
    geometry: &dyn FieldGeometry,
    normalization: f64,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    if !(g_p2 > 0.0) {
        return Err(Error::invalid("g_p2", "must be positive"));
    }
    source.validate(sensor.radius())?;
    // mean kernel [1/m³] over the source sphere (and sensor, if resolved)
    let [kyx, kyy] = geometry.mean_kernel(source, sensor.radius(), lambda);
    let a = potential_prefactor(normalization) * g_p2 * source.total_spins() * kyx.hypot(kyy);
    Ok(2.0 * a / (HBAR * sensor.gamma0()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionMetadata {
    pub sensor: DerivedSensor,
    pub source: SourceConfig,
    /// [s]
    pub measurement_time: f64,
    /// [Hz]
    pub modulation_frequency: f64,
    pub geometry: String,
    pub coupling_normalization: f64,
}

/// g_p² bounds per noise model over a boson-mass grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionCurve {
    /// [eV]
    pub boson_masses: Vec<f64>,
    pub bounds: Vec<(String, Vec<f64>)>,
    pub metadata: ExclusionMetadata,
}

impl ExclusionCurve {
    pub fn bound(&self, noise_model: &str) -> Option<&[f64]> {
        self.bounds
            .iter()
            .find(|(n, _)| n == noise_model)
            .map(|(_, v)| v.as_slice())
    }

    /// CSV with one column per noise model, plus the overlay (log-log
    /// interpolated onto the mass grid, empty outside its range).
    pub fn to_csv(&self, overlay: Option<&ReferenceCurve>) -> String {
        let mut out = String::from("mass_eV");
        for (name, _) in &self.bounds {
            out.push_str(",g_p2_");
            out.push_str(name);
        }
        if overlay.is_some() {
            out.push_str(",g_p2_reference");
        }
        out.push('\n');
        for (i, &m) in self.boson_masses.iter().enumerate() {
            out.push_str(&sci(m));
            for (_, v) in &self.bounds {
                out.push(',');
                out.push_str(&sci(v[i]));
            }
            if let Some(c) = overlay {
                out.push(',');
                if let Some(v) = c.interpolate(m) {
                    out.push_str(&sci(v));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Bounds g_p²* = δB / B(g_p² = 1) with δB = sqrt(S_B(f_mod)/t_meas).
pub fn exclusion_curve(
    sensor: &DerivedSensor,
    source: &SourceConfig,
    t_meas: f64,
    masses: &[f64],
    noise_models: &[&dyn NoiseSource],
    geometry: &dyn FieldGeometry,
    normalization: f64,
) -> Result<ExclusionCurve> {
    if !(t_meas > 0.0 && t_meas.is_finite()) {
        return Err(Error::invalid("exclusion.t_meas_s", "must be positive"));
    }
    if masses.is_empty() || masses.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("masses", "grid must be non-empty and strictly increasing"));
    }
    if noise_models.is_empty() {
        return Err(Error::invalid("exclusion.noise_models", "at least one noise model is required"));
    }
    if !(normalization > 0.0 && normalization.is_finite()) {
        return Err(Error::invalid("exclusion.coupling_normalization", "must be positive"));
    }
    source.validate(sensor.radius())?;
    let f_mod = source.modulation.frequency(sensor);

    let resolution = noise_models
        .iter()
        .map(|m| Ok((t_meas.recip() * m.field_psd(sensor, f_mod)?).sqrt()))
        .collect::<Result<Vec<f64>>>()?;

    let unit_fields = masses
        .par_iter()
        .map(|&m| pseudomagnetic_field(source, sensor, boson_range(m)?, 1.0, geometry, normalization))
        .collect::<Result<Vec<f64>>>()?;

    let mut bounds = Vec::with_capacity(noise_models.len());
    for (model, db) in noise_models.iter().zip(&resolution) {
        let column = unit_fields
            .iter()
            .map(|&b| {
                let g = db / b;
                if g.is_finite() && g > 0.0 {
                    Ok(g)
                } else {
                    Err(Error::NonFinite { quantity: "g_p2 bound" })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        bounds.push((model.name().to_string(), column));
    }

    Ok(ExclusionCurve {
        boson_masses: masses.to_vec(),
        bounds,
        metadata: ExclusionMetadata {
            sensor: sensor.clone(),
            source: source.clone(),
            measurement_time: t_meas,
            modulation_frequency: f_mod,
            geometry: geometry.name().to_string(),
            coupling_normalization: normalization,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::builtin_material;
    use crate::sensor::{derive, SensorConfig};

    fn sensor() -> DerivedSensor {
        derive(&SensorConfig::locked(builtin_material("NdFeB").unwrap(), 0.2e-3, 4.2, 1e7, 10.0)).unwrap()
    }

    #[test]
    fn boson_range_values() {
        assert!((boson_range(1.0).unwrap() - 1.973269804e-7).abs() < 1e-16);
        assert!((boson_range(0.5).unwrap() / boson_range(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(boson_range(1e-10).unwrap() > 1e3);
        assert!(boson_range(0.0).is_err());
    }

    #[test]
    fn point_field_is_linear_in_coupling() {
        let s = sensor();
        let src = SourceConfig::fig3_default();
        let a = pseudomagnetic_field(&src, &s, 1e-2, 1.0, &PointDipole, 1.0).unwrap();
        let b = pseudomagnetic_field(&src, &s, 1e-2, 2.0, &PointDipole, 1.0).unwrap();
        assert_eq!(b, 2.0 * a);
    }

    #[test]
    fn point_field_closed_form() {
        let s = sensor();
        let src = SourceConfig::fig3_default();
        let (d, lambda) = (src.distance, 3e-3);
        let kernel = (-d / lambda).exp() * (1.0 / (lambda * d * d) + 1.0 / d.powi(3));
        let want = 2.0 * potential_prefactor(1.0) * src.total_spins() * kernel / (HBAR * s.gamma0());
        let got = pseudomagnetic_field(&src, &s, lambda, 1.0, &PointDipole, 1.0).unwrap();
        assert!((got / want - 1.0).abs() < 1e-14);
    }

    #[test]
    fn overlap_is_a_geometry_error() {
        let s = sensor();
        let mut src = SourceConfig::fig3_default();
        src.distance = 2.1e-3;
        let e = pseudomagnetic_field(&src, &s, 1.0, 1.0, &PointDipole, 1.0).unwrap_err();
        assert!(matches!(e, Error::Geometry(_)));
        src.distance = 4e-3;
        src.polarization_axis = [0.0, 0.0, 1.0];
        assert!(pseudomagnetic_field(&src, &s, 1.0, 1.0, &PointDipole, 1.0).is_err());
    }
}

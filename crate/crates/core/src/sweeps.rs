//! Radius sweeps, the ERL/SQL crossing radius and frame-dragging reference lines.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{csv_row, sci};
use crate::material::Material;
use crate::noise::{erl_field_psd, heuristic_sql_field_psd, GammaRelPolicy, NoiseRegistry};
use crate::rootfind::bisect_log;
use crate::sensor::{derive, SensorConfig};

pub const RADIUS_SWEEP_HEADER: &str =
    "radius_m,f_alpha_Hz,thermal_T_per_sqrtHz,sql_T_per_sqrtHz,erl_T_per_sqrtHz,spin_projection_T_per_sqrtHz";
pub const REFERENCE_LINES_HEADER: &str = "label,omega_rad_s,b_eff_T";

/// Default bracket for the crossing search [m].
pub const CROSSING_BRACKET: (f64, f64) = (1e-10, 1e-2);

/// Subresonant amplitude spectral densities versus radius at fixed f_α/f_I.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusSweepResult {
    pub radii: Vec<f64>,
    pub lock_ratio: f64,
    /// [Hz]
    pub f_alpha: Vec<f64>,
    /// (source name, amplitude [T/√Hz] per radius), in registry order.
    pub amplitudes: Vec<(String, Vec<f64>)>,
}

impl RadiusSweepResult {
    pub fn source(&self, name: &str) -> Option<&[f64]> {
        self.amplitudes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(RADIUS_SWEEP_HEADER);
        out.push('\n');
        for i in 0..self.radii.len() {
            let mut row = vec![self.radii[i], self.f_alpha[i]];
            row.extend(self.amplitudes.iter().map(|(_, v)| v[i]));
            out.push_str(&csv_row(&row));
            out.push('\n');
        }
        out
    }
}

/// Evaluates every standard noise source at ω = 0 for each radius, with
/// f_α = k·f_I.
pub fn radius_sweep(
    material: &Material,
    temperature: f64,
    q: f64,
    k: f64,
    radii: &[f64],
    gamma_rel: GammaRelPolicy,
) -> Result<RadiusSweepResult> {
    if !(k > 0.0) {
        return Err(Error::invalid("k", format!("lock ratio must be positive, got {k}")));
    }
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("radii", "grid must be non-empty and strictly increasing"));
    }
    let registry = NoiseRegistry::standard(gamma_rel);
    let rows = radii
        .par_iter()
        .map(|&r| {
            let d = derive(&SensorConfig::locked(material.clone(), r, temperature, q, k))?;
            let amps = registry
                .iter()
                .map(|s| s.field_psd(&d, 0.0).map(f64::sqrt))
                .collect::<Result<Vec<f64>>>()?;
            Ok((d.f_alpha(), amps))
        })
        .collect::<Result<Vec<_>>>()?;

    let amplitudes = registry
        .names()
        .into_iter()
        .enumerate()
        .map(|(j, name)| (name.to_string(), rows.iter().map(|(_, a)| a[j]).collect()))
        .collect();
    Ok(RadiusSweepResult {
        radii: radii.to_vec(),
        lock_ratio: k,
        f_alpha: rows.iter().map(|(f, _)| *f).collect(),
        amplitudes,
    })
}

/// Radius at which the subresonant SQL field PSD equals the ERL, searched in
/// [`CROSSING_BRACKET`].
pub fn find_erl_sql_crossing(material: &Material, k: f64) -> Result<f64> {
    find_erl_sql_crossing_in(material, k, CROSSING_BRACKET.0, CROSSING_BRACKET.1)
}

pub fn find_erl_sql_crossing_in(material: &Material, k: f64, lo: f64, hi: f64) -> Result<f64> {
    let log_ratio = |r: f64| -> f64 { sql_over_erl(material, k, r).map(f64::ln).unwrap_or(f64::NAN) };
    bisect_log(log_ratio, lo, hi, 1e-6, "ln(SQL/ERL)")
}

/// Subresonant SQL field PSD divided by the ERL PSD at radius `r`.
pub fn sql_over_erl(material: &Material, k: f64, r: f64) -> Result<f64> {
    let d = derive(&SensorConfig::locked(material.clone(), r, 0.0, 1.0, k))?;
    Ok(heuristic_sql_field_psd(&d) / erl_field_psd(&d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceLabel {
    DeSitter,
    LenseThirring,
    Custom(String),
}

impl ReferenceLabel {
    pub fn as_str(&self) -> &str {
        match self {
            ReferenceLabel::DeSitter => "de_sitter",
            ReferenceLabel::LenseThirring => "lense_thirring",
            ReferenceLabel::Custom(s) => s,
        }
    }

    pub fn parse(s: &str) -> Self {
        match s {
            "de_sitter" => ReferenceLabel::DeSitter,
            "lense_thirring" => ReferenceLabel::LenseThirring,
            other => ReferenceLabel::Custom(other.to_string()),
        }
    }
}

/// Effective field B_eff = Ω/γ₀ of a rotating inertial frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceLine {
    pub label: ReferenceLabel,
    /// [rad/s]
    pub omega: f64,
    /// [T]
    pub b_eff: f64,
}

pub fn frame_dragging_line(label: ReferenceLabel, omega: f64, gamma0: f64) -> Result<ReferenceLine> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega_rad_s", format!("must be positive, got {omega}")));
    }
    if !(gamma0 > 0.0) {
        return Err(Error::invalid("gamma0", "must be positive"));
    }
    Ok(ReferenceLine {
        label,
        omega,
        b_eff: omega / gamma0,
    })
}

pub fn reference_lines_csv(lines: &[ReferenceLine]) -> String {
    let mut out = String::from(REFERENCE_LINES_HEADER);
    out.push('\n');
    for l in lines {
        // labels are written verbatim; commas would break the column layout
        out.push_str(&l.label.as_str().replace(',', ";"));
        out.push(',');
        out.push_str(&sci(l.omega));
        out.push(',');
        out.push_str(&sci(l.b_eff));
        out.push('\n');
    }
    out
}

//! Sensor description and derived quantities.
//!
//! A uniform sphere of radius R carries a rigidly locked spin S = μ/γ₀.
//! When a levitation height z₀ above a superconducting plane is given, the
//! Meissner image dipole supplies the β restoring torque with
//! ω_β² = ω_L·ω_I, where ω_L = γ₀·B_i and B_i = μ₀μ/(32π z₀³).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::MU_0;
use crate::error::{finite, Error, Result};
use crate::material::Material;

/// How the α-mode librational frequency is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FAlphaSpec {
    /// Explicit frequency [Hz].
    Explicit(f64),
    /// Ratio k = f_α / f_I, locking the librational frequency to the
    /// Einstein-de Haas frequency.
    RatioToEinsteinDeHaas(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    /// Sphere radius [m].
    pub radius: f64,
    pub material: Material,
    /// Bath temperature [K].
    pub temperature: f64,
    pub q_alpha: f64,
    pub q_beta: f64,
    pub f_alpha: FAlphaSpec,
    /// Levitation height above the superconducting plane [m].
    pub z0: Option<f64>,
    /// Intrinsic rotation rate about the spin axis [rad/s].
    pub gamma_dot: f64,
}

impl SensorConfig {
    /// A sensor with the librational frequency locked at `k`·f_I, no image
    /// field and no intrinsic rotation.
    pub fn locked(material: Material, radius: f64, temperature: f64, q: f64, k: f64) -> Self {
        SensorConfig {
            radius,
            material,
            temperature,
            q_alpha: q,
            q_beta: q,
            f_alpha: FAlphaSpec::RatioToEinsteinDeHaas(k),
            z0: None,
            gamma_dot: 0.0,
        }
    }

    /// Picks the levitation height z₀ that produces the requested β frequency.
    pub fn with_omega_beta(mut self, omega_beta: f64) -> Result<Self> {
        if !(omega_beta > 0.0) {
            return Err(Error::invalid("omega_beta", "must be positive"));
        }
        self.z0 = None;
        let d = derive(&self)?;
        let g0 = self.material.gamma0;
        // ω_β² = γ₀ μ₀ μ ω_I / (32π z₀³)
        let z0 = (g0 * MU_0 * d.mu * d.omega_i / (32.0 * PI * omega_beta * omega_beta)).cbrt();
        self.z0 = Some(finite("z0", z0)?);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::invalid("sensor.radius_m", format!("must be positive, got {}", self.radius)));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::invalid(
                "sensor.temperature_K",
                format!("must be non-negative, got {}", self.temperature),
            ));
        }
        if !(self.q_alpha >= 1.0) {
            return Err(Error::invalid("sensor.q_alpha", format!("must be >= 1, got {}", self.q_alpha)));
        }
        if !(self.q_beta >= 1.0) {
            return Err(Error::invalid("sensor.q_beta", format!("must be >= 1, got {}", self.q_beta)));
        }
        match self.f_alpha {
            FAlphaSpec::Explicit(f) if !(f > 0.0 && f.is_finite()) => {
                return Err(Error::invalid("sensor.f_alpha_Hz", format!("must be positive, got {f}")));
            }
            FAlphaSpec::RatioToEinsteinDeHaas(k) if !(k > 0.0 && k.is_finite()) => {
                return Err(Error::invalid(
                    "sensor.f_alpha_over_f_I",
                    format!("must be positive, got {k}"),
                ));
            }
            _ => {}
        }
        if let Some(z0) = self.z0 {
            if !(z0 > 0.0 && z0.is_finite()) {
                return Err(Error::invalid("sensor.z0_m", format!("must be positive, got {z0}")));
            }
        }
        if !self.gamma_dot.is_finite() {
            return Err(Error::invalid("sensor.gamma_dot_rad_s", "must be finite"));
        }
        Ok(())
    }
}

/// Every quantity derived from a [`SensorConfig`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedSensor {
    pub config: SensorConfig,
    /// [m³]
    pub volume: f64,
    /// [kg]
    pub mass: f64,
    /// Moment of inertia of the uniform sphere [kg·m²].
    pub inertia: f64,
    /// Magnetic moment magnitude [J/T].
    pub mu: f64,
    /// Intrinsic spin magnitude [J·s].
    pub spin: f64,
    /// Einstein-de Haas frequency S/I [rad/s].
    pub omega_i: f64,
    pub n_spins: f64,
    /// Meissner image field magnitude at β = 0 [T].
    pub b_image: Option<f64>,
    /// Larmor frequency in the image field [rad/s].
    pub omega_l: Option<f64>,
    pub omega_beta: Option<f64>,
    pub omega_alpha: f64,
}

/// Derives all sensor quantities.
pub fn derive(config: &SensorConfig) -> Result<DerivedSensor> {
    config.validate()?;
    let m = &config.material;
    let r = config.radius;

    let volume = finite("volume", 4.0 / 3.0 * PI * r.powi(3))?;
    let mass = finite("mass", m.density * volume)?;
    let inertia = finite("inertia", 0.4 * mass * r * r)?;
    let mu = finite("mu", m.magnetization * volume)?;
    let spin = finite("spin", mu / m.gamma0)?;
    let omega_i = finite("omega_I", spin / inertia)?;
    let n_spins = finite("n_spins", mu / m.moment_per_spin)?;

    let omega_alpha = finite(
        "omega_alpha",
        match config.f_alpha {
            FAlphaSpec::Explicit(f) => 2.0 * PI * f,
            FAlphaSpec::RatioToEinsteinDeHaas(k) => k * omega_i,
        },
    )?;

    let (b_image, omega_l, omega_beta) = match config.z0 {
        Some(z0) => {
            let b = finite("b_image", MU_0 * mu / (32.0 * PI * z0.powi(3)))?;
            let wl = finite("omega_L", m.gamma0 * b)?;
            let wb = finite("omega_beta", (wl * omega_i).sqrt())?;
            (Some(b), Some(wl), Some(wb))
        }
        None => (None, None, None),
    };

    Ok(DerivedSensor {
        config: config.clone(),
        volume,
        mass,
        inertia,
        mu,
        spin,
        omega_i,
        n_spins,
        b_image,
        omega_l,
        omega_beta,
        omega_alpha,
    })
}

impl DerivedSensor {
    pub fn f_i(&self) -> f64 {
        self.omega_i / (2.0 * PI)
    }

    pub fn f_alpha(&self) -> f64 {
        self.omega_alpha / (2.0 * PI)
    }

    pub fn f_beta(&self) -> Option<f64> {
        self.omega_beta.map(|w| w / (2.0 * PI))
    }

    pub fn temperature(&self) -> f64 {
        self.config.temperature
    }

    pub fn q_alpha(&self) -> f64 {
        self.config.q_alpha
    }

    pub fn q_beta(&self) -> f64 {
        self.config.q_beta
    }

    pub fn gamma0(&self) -> f64 {
        self.config.material.gamma0
    }

    pub fn radius(&self) -> f64 {
        self.config.radius
    }

    /// Librational dynamics regime.
    pub fn regime(&self) -> Regime {
        regime(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Librational,
    Intermediate,
    Gyroscopic,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Librational => "librational",
            Regime::Intermediate => "intermediate",
            Regime::Gyroscopic => "gyroscopic",
        }
    }
}

/// Classifies the dynamics by comparing ω_I to the slower librational mode.
/// An absent β mode counts as infinitely stiff.
pub fn regime(derived: &DerivedSensor) -> Regime {
    let slow = derived
        .omega_beta
        .unwrap_or(f64::INFINITY)
        .min(derived.omega_alpha);
    regime_from(derived.omega_i, slow)
}

fn regime_from(omega_i: f64, slowest: f64) -> Regime {
    if 10.0 * omega_i < slowest {
        Regime::Librational
    } else if omega_i > 10.0 * slowest {
        Regime::Gyroscopic
    } else {
        Regime::Intermediate
    }
}

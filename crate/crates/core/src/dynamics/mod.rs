//! Librational dynamics.
//!
//! Two integrators share one interface ([`Integrator`]):
//!
//! * `linear` integrates the linearised coupled oscillators
//!   α̈ = −ω_α²α − (ω_α/Q_α)α̇ − (ω_I+γ̇)β̇ + τ_z/I,
//!   β̈ = −ω_β²β − (ω_β/Q_β)β̇ + (ω_I+γ̇)α̇ − τ_y/I.
//! * `nonlinear` integrates J̇ = τ_i + τ with J = IΩ + S and Ṡ = Ω × S for a
//!   spin locked to the body axis, tracking orientation as a unit quaternion.
//!
//! Angles follow the small-angle convention S ≃ S(1, α, β), Ω ≃ (γ̇, −β̇, α̇).
//! For finite rotations the orientation is R = R_z(α)·R_y(−β)·R_x(γ).

mod linear;
mod nonlinear;
mod trajectory;

pub use linear::LinearIntegrator;
pub use nonlinear::NonlinearIntegrator;
pub use trajectory::{DynamicsState, Trajectory, TRAJECTORY_HEADER};

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sensor::DerivedSensor;

/// Librational susceptibility χ(ω) = 1 / (I(−ω² + ω_α² + iωω_α/Q_α)) [rad/(N·m)].
pub fn susceptibility(d: &DerivedSensor, omega: f64) -> Complex64 {
    let wa = d.omega_alpha;
    let denom = Complex64::new(d.inertia * (wa * wa - omega * omega), d.inertia * omega * wa / d.q_alpha());
    denom.inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DriveKind {
    #[default]
    None,
    /// Field B(t) along y; torque μ × B about z.
    SinusoidalField,
    /// Torque τ(t) about z.
    SinusoidalTorque,
}

/// External drive a·sin(2πft + φ), applied as a y field or a z torque.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct TorqueDrive {
    pub kind: DriveKind,
    /// [T] for a field drive, [N·m] for a torque drive.
    pub amplitude: f64,
    /// [Hz]
    pub frequency: f64,
    /// [rad]
    pub phase: f64,
}

impl TorqueDrive {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn torque(amplitude: f64, frequency: f64) -> Self {
        TorqueDrive {
            kind: DriveKind::SinusoidalTorque,
            amplitude,
            frequency,
            phase: 0.0,
        }
    }

    pub fn field(amplitude: f64, frequency: f64) -> Self {
        TorqueDrive {
            kind: DriveKind::SinusoidalField,
            amplitude,
            frequency,
            phase: 0.0,
        }
    }

    /// Drive waveform value at time `t`.
    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            DriveKind::None => 0.0,
            _ => self.amplitude * (2.0 * PI * self.frequency * t + self.phase).sin(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::invalid("drive.amplitude", "must be non-negative"));
        }
        if !(self.frequency >= 0.0 && self.frequency.is_finite()) {
            return Err(Error::invalid("drive.frequency_Hz", "must be non-negative"));
        }
        if !self.phase.is_finite() {
            return Err(Error::invalid("drive.phase_rad", "must be finite"));
        }
        Ok(())
    }
}

/// Parameters of the linearised two-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LibrationModel {
    pub inertia: f64,
    pub omega_alpha: f64,
    /// `None` clamps β (infinitely stiff mode).
    pub omega_beta: Option<f64>,
    pub q_alpha: f64,
    pub q_beta: f64,
    pub gyroscopic: bool,
    /// Einstein-de Haas frequency [rad/s].
    pub omega_i: f64,
    /// Intrinsic rotation rate [rad/s]. The integrators take γ̇ from the
    /// state instead; this value only enters [`LibrationModel::eigenmodes`].
    pub gamma_dot: f64,
    /// Magnetic moment, for field drives [J/T].
    pub mu: f64,
}

impl LibrationModel {
    pub fn from_sensor(d: &DerivedSensor, include_gyroscopic: bool) -> Self {
        LibrationModel {
            inertia: d.inertia,
            omega_alpha: d.omega_alpha,
            omega_beta: d.omega_beta,
            q_alpha: d.q_alpha(),
            q_beta: d.q_beta(),
            gyroscopic: include_gyroscopic,
            omega_i: d.omega_i,
            gamma_dot: d.config.gamma_dot,
            mu: d.mu,
        }
    }

    /// Gyroscopic cross-coupling ω_I + γ̇, or zero when disabled.
    pub fn coupling(&self) -> f64 {
        self.coupling_with(self.gamma_dot)
    }

    pub(crate) fn coupling_with(&self, gamma_dot: f64) -> f64 {
        if self.gyroscopic {
            self.omega_i + gamma_dot
        } else {
            0.0
        }
    }

    /// State matrix of (α, β, α̇, β̇).
    pub fn state_matrix(&self) -> Result<Matrix4<f64>> {
        let wb = self.omega_beta.ok_or(Error::MissingImageField)?;
        let wa = self.omega_alpha;
        let g = self.coupling();
        Ok(Matrix4::new(
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            -wa * wa, 0.0, -wa / self.q_alpha, -g,
            0.0, -wb * wb, g, -wb / self.q_beta,
        ))
    }

    /// Complex eigenfrequencies ω = ω_r + iκ of the two modes, ordered by ω_r.
    /// A mode e^{st} maps to ω = −is, so κ > 0 is the amplitude decay rate.
    pub fn eigenmodes(&self) -> Result<[Complex64; 2]> {
        let eig = self.state_matrix()?.complex_eigenvalues();
        let mut freqs: Vec<Complex64> = eig.iter().map(|s| Complex64::new(s.im, -s.re)).collect();
        // keep the upper half of each conjugate pair (largest real frequency first)
        freqs.sort_by(|a, b| b.re.total_cmp(&a.re));
        let mut modes = [freqs[0], freqs[1]];
        modes.sort_by(|a, b| a.re.total_cmp(&b.re));
        Ok(modes)
    }

    /// Largest frequency [Hz] the integrator must resolve.
    pub(crate) fn max_frequency(&self, drive: &TorqueDrive, gamma_dot: f64) -> f64 {
        let mut w = self.omega_alpha.max(self.omega_beta.unwrap_or(0.0));
        // the upper gyroscopic mode sits near max(ω, |g|)
        w = w.max(self.coupling_with(gamma_dot).abs());
        (w / (2.0 * PI)).max(match drive.kind {
            DriveKind::None => 0.0,
            _ => drive.frequency,
        })
    }
}

/// Eigenfrequencies of the coupled librational modes of a sensor, including
/// gyroscopic coupling and damping.
pub fn eigenmodes(d: &DerivedSensor) -> Result<[Complex64; 2]> {
    LibrationModel::from_sensor(d, true).eigenmodes()
}

pub(crate) fn check_step(dt: f64, duration: f64, max_frequency: f64) -> Result<()> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::invalid("duration", format!("must be positive, got {duration}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    let max = if max_frequency > 0.0 {
        1.0 / (50.0 * max_frequency)
    } else {
        f64::INFINITY
    };
    if dt > max {
        return Err(Error::StepSize { dt, max });
    }
    Ok(())
}

pub(crate) fn check_amplitude(time: f64, alpha: f64, beta: f64) -> Result<()> {
    for (variable, value) in [("alpha", alpha), ("beta", beta)] {
        if !value.is_finite() || value.abs() > 1e3 {
            return Err(Error::Instability { time, variable, value });
        }
    }
    Ok(())
}

/// Classical 4th-order Runge-Kutta step for a fixed-size state.
pub(crate) fn rk4_step<const N: usize>(
    y: &[f64; N],
    t: f64,
    h: f64,
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
) -> [f64; N] {
    let add = |a: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut out = *a;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// A librational-dynamics integrator selectable by name.
pub trait Integrator: Send + Sync {
    fn name(&self) -> &'static str;

    fn integrate(
        &self,
        sensor: &DerivedSensor,
        initial: &DynamicsState,
        drive: &TorqueDrive,
        duration: f64,
        dt: f64,
    ) -> Result<Trajectory>;
}

/// Options consumed by integrator factories.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratorOptions {
    pub include_gyroscopic: bool,
}

type IntegratorFactory = fn(&IntegratorOptions) -> Box<dyn Integrator>;

/// Integrators by name.
pub struct IntegratorRegistry {
    factories: Vec<(&'static str, IntegratorFactory)>,
}

impl Default for IntegratorRegistry {
    fn default() -> Self {
        let mut r = IntegratorRegistry { factories: Vec::new() };
        r.register("linear", |o| {
            Box::new(LinearIntegrator {
                include_gyroscopic: o.include_gyroscopic,
            })
        });
        r.register("nonlinear", |_| Box::new(NonlinearIntegrator));
        r
    }
}

impl IntegratorRegistry {
    pub fn register(&mut self, name: &'static str, factory: IntegratorFactory) {
        self.factories.retain(|(n, _)| *n != name);
        self.factories.push((name, factory));
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.iter().map(|(n, _)| *n).collect()
    }

    pub fn create(&self, name: &str, options: &IntegratorOptions) -> Result<Box<dyn Integrator>> {
        self.factories
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| f(options))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "integrator",
                name: name.to_string(),
                available: self.names().iter().map(|s| s.to_string()).collect(),
            })
    }
}


pub use nonlinear::spin_vector;

/// Integrates the linearised equations; see [`LinearIntegrator`].
pub fn integrate_linear(
    sensor: &DerivedSensor,
    initial: &DynamicsState,
    drive: &TorqueDrive,
    duration: f64,
    dt: f64,
    include_gyroscopic: bool,
) -> Result<Trajectory> {
    LinearIntegrator { include_gyroscopic }.integrate(sensor, initial, drive, duration, dt)
}

/// Integrates the full rigid-body equations; see [`NonlinearIntegrator`].
/// The image field is taken from the sensor's levitation height.
pub fn integrate_nonlinear(
    sensor: &DerivedSensor,
    initial: &DynamicsState,
    drive: &TorqueDrive,
    duration: f64,
    dt: f64,
) -> Result<Trajectory> {
    NonlinearIntegrator.integrate(sensor, initial, drive, duration, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::builtin_material;
    use crate::sensor::{derive, SensorConfig};

    fn fig2a() -> DerivedSensor {
        derive(&SensorConfig::locked(builtin_material("NdFeB").unwrap(), 30e-6, 4.2, 1e7, 10.0)).unwrap()
    }

    fn model(wa: f64, wb: f64, qa: f64, qb: f64, g: f64) -> LibrationModel {
        LibrationModel {
            inertia: 1.0,
            omega_alpha: wa,
            omega_beta: Some(wb),
            q_alpha: qa,
            q_beta: qb,
            gyroscopic: true,
            omega_i: g,
            gamma_dot: 0.0,
            mu: 1.0,
        }
    }

    #[test]
    fn susceptibility_static_and_resonant() {
        let d = fig2a();
        let wa = d.omega_alpha;
        let s = susceptibility(&d, 0.0);
        assert_eq!(s.im, 0.0);
        assert!((s.re * d.inertia * wa * wa - 1.0).abs() < 1e-14);
        let r = susceptibility(&d, wa);
        let want = Complex64::new(0.0, -d.q_alpha() / (d.inertia * wa * wa));
        assert!((r - want).norm() / want.norm() < 1e-12);
        assert!((r.norm() / s.norm() - d.q_alpha()).abs() / d.q_alpha() < 1e-12);
    }

    #[test]
    fn susceptibility_matches_real_arithmetic() {
        // 1/(a + ib) = (a - ib)/(a² + b²), evaluated without complex types
        let d = fig2a();
        let w = 2.0 * PI * 10.0;
        let a = d.inertia * (d.omega_alpha.powi(2) - w * w);
        let b = d.inertia * w * d.omega_alpha / d.q_alpha();
        let n = a * a + b * b;
        let (re, im) = (a / n, -b / n);
        let chi = susceptibility(&d, w);
        assert!((chi.re - re).abs() / re.abs() < 1e-12);
        assert!((chi.im - im).abs() / im.abs() < 1e-12);
    }

    #[test]
    fn eigenmodes_decoupled() {
        let m = model(2.0, 3.0, 1e15, 1e15, 0.0);
        let [a, b] = m.eigenmodes().unwrap();
        assert!((a.re - 2.0).abs() < 1e-12 && (b.re - 3.0).abs() < 1e-12);
        assert!(a.im.abs() < 1e-12 && b.im.abs() < 1e-12);
    }

    #[test]
    fn eigenmodes_symmetric_split() {
        let w0: f64 = 5.0;
        for g in [0.1, 0.5, 2.0] {
            let [lo, hi] = model(w0, w0, 1e15, 1e15, g).eigenmodes().unwrap();
            let x = g / (2.0 * w0);
            let root = (1.0 + x * x).sqrt();
            assert!((lo.re - w0 * (root - x)).abs() < 1e-10, "g={g}");
            assert!((hi.re - w0 * (root + x)).abs() < 1e-10, "g={g}");
        }
    }

    #[test]
    fn eigenmodes_damping() {
        let (wa, wb, q) = (2.0, 3.0, 1e4);
        let [a, b] = model(wa, wb, q, q, 0.0).eigenmodes().unwrap();
        assert!((a.im - wa / (2.0 * q)).abs() / (wa / (2.0 * q)) < 1e-6);
        assert!((b.im - wb / (2.0 * q)).abs() / (wb / (2.0 * q)) < 1e-6);
    }

    #[test]
    fn eigenmodes_need_beta_mode() {
        assert!(matches!(eigenmodes(&fig2a()), Err(Error::MissingImageField)));
    }

    #[test]
    fn step_size_rule() {
        assert!(check_step(0.02, 1.0, 1.0).is_ok());
        assert!(matches!(check_step(0.021, 1.0, 1.0), Err(Error::StepSize { .. })));
        assert!(check_step(0.01, 0.0, 1.0).is_err());
    }

    #[test]
    fn registry_lookup() {
        let r = IntegratorRegistry::default();
        assert_eq!(r.names(), vec!["linear", "nonlinear"]);
        assert_eq!(r.create("nonlinear", &IntegratorOptions::default()).unwrap().name(), "nonlinear");
        assert!(r.create("verlet", &IntegratorOptions::default()).is_err());
    }

    #[test]
    fn drive_waveform() {
        let d = TorqueDrive::torque(2.0, 0.25);
        assert!((d.value(1.0) - 2.0).abs() < 1e-15);
        assert_eq!(TorqueDrive::none().value(1.0), 0.0);
        let mut bad = d;
        bad.amplitude = -1.0;
        assert!(bad.validate().is_err());
    }
}

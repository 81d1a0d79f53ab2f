use std::f64::consts::PI;

use nalgebra::{Matrix3, UnitQuaternion, Vector3};

use super::{check_amplitude, check_step, rk4_step, DriveKind, DynamicsState, Integrator, LibrationModel, TorqueDrive, Trajectory};
use crate::constants::MU_0;
use crate::error::{Error, Result};
use crate::sensor::DerivedSensor;

/// Full rigid-body integration of a hard ferromagnet with locked spin.
///
/// State is the orientation quaternion and the world-frame angular velocity.
/// Torques: the Meissner image dipole (vector field −μ₀/(32πz₀³)(μ_x, μ_y, 2μ_z)),
/// a tilt potential ½Iω_α²e_y² trapping α, body-frame viscous damping of the
/// α and β modes, and the external drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NonlinearIntegrator;

/// Physical parameters the right-hand side needs.
#[derive(Debug, Clone, Copy)]
struct Body {
    inertia: f64,
    spin: f64,
    mu: f64,
    image_coeff: f64,
    omega_alpha: f64,
    damp_alpha: f64,
    damp_beta: f64,
}

/// Unit vector along the spin (body x axis) for orientation `q`.
fn spin_axis(q: &UnitQuaternion<f64>) -> Vector3<f64> {
    q * Vector3::x()
}

/// Converts librational angles and rates to (orientation, world angular velocity).
pub(crate) fn state_to_body(s: &DynamicsState) -> (UnitQuaternion<f64>, Vector3<f64>) {
    let q = UnitQuaternion::from_euler_angles(s.gamma, -s.beta, s.alpha);
    let e = spin_axis(&q);
    let y_prime = Vector3::new(-s.alpha.sin(), s.alpha.cos(), 0.0);
    let omega = Vector3::z() * s.alpha_dot - y_prime * s.beta_dot + e * s.gamma_dot;
    (q, omega)
}

/// Inverse of [`state_to_body`].
pub(crate) fn body_to_state(q: &UnitQuaternion<f64>, omega: &Vector3<f64>, time: f64) -> Result<DynamicsState> {
    let (roll, pitch, yaw) = q.euler_angles();
    let e = spin_axis(q);
    let y_prime = Vector3::new(-yaw.sin(), yaw.cos(), 0.0);
    let basis = Matrix3::from_columns(&[Vector3::z(), y_prime, e]);
    let rates = basis.lu().solve(omega).ok_or(Error::GimbalLock { time })?;
    if !rates.iter().all(|v| v.is_finite()) || pitch.cos().abs() < 1e-12 {
        return Err(Error::GimbalLock { time });
    }
    Ok(DynamicsState {
        alpha: yaw,
        beta: -pitch,
        gamma: roll,
        alpha_dot: rates[0],
        beta_dot: -rates[1],
        gamma_dot: rates[2],
        time,
    })
}

impl Body {
    fn torque(&self, q: &UnitQuaternion<f64>, omega: &Vector3<f64>, drive: &TorqueDrive, t: f64) -> Vector3<f64> {
        let e = spin_axis(q);
        // μ = −γ₀S, S along +e
        let mu = -e * self.mu;
        let b_image = -self.image_coeff * Vector3::new(mu.x, mu.y, 2.0 * mu.z);
        let mut tau = mu.cross(&b_image);

        let k = self.inertia * self.omega_alpha * self.omega_alpha;
        tau += k * e.y * Vector3::new(e.z, 0.0, -e.x);

        let body_y = q * Vector3::y();
        let body_z = q * Vector3::z();
        tau -= body_z * (self.inertia * self.damp_alpha * omega.dot(&body_z));
        tau -= body_y * (self.inertia * self.damp_beta * omega.dot(&body_y));

        match drive.kind {
            DriveKind::None => {}
            DriveKind::SinusoidalTorque => tau.z += drive.value(t),
            DriveKind::SinusoidalField => tau += mu.cross(&Vector3::new(0.0, drive.value(t), 0.0)),
        }
        tau
    }

    /// y = [q_w, q_x, q_y, q_z, Ω_x, Ω_y, Ω_z]
    fn rhs(&self, t: f64, y: &[f64; 7], drive: &TorqueDrive) -> [f64; 7] {
        let raw = nalgebra::Quaternion::new(y[0], y[1], y[2], y[3]);
        let q = UnitQuaternion::from_quaternion(raw);
        let omega = Vector3::new(y[4], y[5], y[6]);
        let s = spin_axis(&q) * self.spin;
        let omega_dot = (self.torque(&q, &omega, drive, t) - omega.cross(&s)) / self.inertia;
        // q̇ = ½ (0, Ω) ⊗ q for a world-frame angular velocity
        let qd = nalgebra::Quaternion::new(0.0, omega.x, omega.y, omega.z) * raw * 0.5;
        [qd.w, qd.i, qd.j, qd.k, omega_dot.x, omega_dot.y, omega_dot.z]
    }
}

impl Integrator for NonlinearIntegrator {
    fn name(&self) -> &'static str {
        "nonlinear"
    }

    fn integrate(
        &self,
        sensor: &DerivedSensor,
        initial: &DynamicsState,
        drive: &TorqueDrive,
        duration: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        drive.validate()?;
        if !initial.is_finite() {
            return Err(Error::invalid("initial", "state must be finite"));
        }
        let z0 = sensor.config.z0.ok_or(Error::MissingImageField)?;
        let model = LibrationModel::from_sensor(sensor, true);
        check_step(dt, duration, model.max_frequency(drive, initial.gamma_dot))?;

        let wb = sensor.omega_beta.ok_or(Error::MissingImageField)?;
        let body = Body {
            inertia: sensor.inertia,
            spin: sensor.spin,
            mu: sensor.mu,
            image_coeff: MU_0 / (32.0 * PI * z0.powi(3)),
            omega_alpha: sensor.omega_alpha,
            damp_alpha: sensor.omega_alpha / sensor.q_alpha(),
            damp_beta: wb / sensor.q_beta(),
        };

        let (q0, w0) = state_to_body(initial);
        let mut y = [q0.w, q0.i, q0.j, q0.k, w0.x, w0.y, w0.z];
        let t0 = initial.time;
        let steps = (duration / dt).round() as usize;
        let mut states = Vec::with_capacity(steps + 1);
        states.push(body_to_state(&q0, &w0, t0)?);
        let rhs = |t: f64, y: &[f64; 7]| body.rhs(t, y, drive);

        for n in 0..steps {
            let t = t0 + n as f64 * dt;
            y = rk4_step(&y, t, dt, &rhs);
            let t_next = t0 + (n + 1) as f64 * dt;
            let norm = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
            let drift = (norm - 1.0).abs();
            if !(drift <= 1e-6) {
                return Err(Error::QuaternionDrift { time: t_next, drift });
            }
            for v in &mut y[..4] {
                *v /= norm;
            }
            let q = UnitQuaternion::new_unchecked(nalgebra::Quaternion::new(y[0], y[1], y[2], y[3]));
            let omega = Vector3::new(y[4], y[5], y[6]);
            let state = body_to_state(&q, &omega, t_next)?;
            check_amplitude(t_next, state.alpha, state.beta)?;
            states.push(state);
        }
        Ok(Trajectory {
            sample_rate: 1.0 / dt,
            states,
        })
    }
}

/// Spin vector S = S·e for a trajectory sample.
pub fn spin_vector(sensor: &DerivedSensor, state: &DynamicsState) -> Vector3<f64> {
    let (q, _) = state_to_body(state);
    spin_axis(&q) * sensor.spin
}

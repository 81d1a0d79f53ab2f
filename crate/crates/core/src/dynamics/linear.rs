use super::{
    check_amplitude, check_step, rk4_step, DriveKind, DynamicsState, Integrator, LibrationModel, TorqueDrive,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::sensor::DerivedSensor;

/// RK4 integration of the linearised coupled librational equations.
///
/// Without an image field (no ω_β) the β mode is clamped at its initial angle
/// and the gyroscopic cross term into α vanishes. The intrinsic rotation γ̇
/// is read from the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinearIntegrator {
    pub include_gyroscopic: bool,
}

impl LinearIntegrator {
    pub fn integrate_model(
        &self,
        model: &LibrationModel,
        initial: &DynamicsState,
        drive: &TorqueDrive,
        duration: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        drive.validate()?;
        if !initial.is_finite() {
            return Err(Error::invalid("initial", "state must be finite"));
        }
        check_step(dt, duration, model.max_frequency(drive, initial.gamma_dot))?;

        let wa = model.omega_alpha;
        let ka = wa / model.q_alpha;
        let beta_free = model.omega_beta.is_some();
        let wb = model.omega_beta.unwrap_or(0.0);
        let kb = if beta_free { wb / model.q_beta } else { 0.0 };
        // γ̈ = 0, so the coupling ω_I + γ̇ is constant along the trajectory
        let g = model.coupling_with(initial.gamma_dot);
        let inertia = model.inertia;
        let mu = model.mu;

        // y = [α, β, γ, α̇, β̇, γ̇]
        let rhs = |t: f64, y: &[f64; 6]| -> [f64; 6] {
            let tau_z = match drive.kind {
                DriveKind::None => 0.0,
                DriveKind::SinusoidalTorque => drive.value(t),
                DriveKind::SinusoidalField => -mu * drive.value(t),
            };
            let tau_y = 0.0;
            let acc_a = -wa * wa * y[0] - ka * y[3] - g * y[4] + tau_z / inertia;
            let acc_b = if beta_free {
                -wb * wb * y[1] - kb * y[4] + g * y[3] - tau_y / inertia
            } else {
                0.0
            };
            [y[3], y[4], y[5], acc_a, acc_b, 0.0]
        };

        let steps = (duration / dt).round() as usize;
        let mut y = [
            initial.alpha,
            initial.beta,
            initial.gamma,
            initial.alpha_dot,
            if beta_free { initial.beta_dot } else { 0.0 },
            initial.gamma_dot,
        ];
        let t0 = initial.time;
        let mut states = Vec::with_capacity(steps + 1);
        states.push(to_state(&y, t0));
        for n in 0..steps {
            let t = t0 + n as f64 * dt;
            y = rk4_step(&y, t, dt, &rhs);
            let t_next = t0 + (n + 1) as f64 * dt;
            check_amplitude(t_next, y[0], y[1])?;
            states.push(to_state(&y, t_next));
        }
        Ok(Trajectory {
            sample_rate: 1.0 / dt,
            states,
        })
    }
}

fn to_state(y: &[f64; 6], time: f64) -> DynamicsState {
    DynamicsState {
        alpha: y[0],
        beta: y[1],
        gamma: y[2],
        alpha_dot: y[3],
        beta_dot: y[4],
        gamma_dot: y[5],
        time,
    }
}

impl Integrator for LinearIntegrator {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn integrate(
        &self,
        sensor: &DerivedSensor,
        initial: &DynamicsState,
        drive: &TorqueDrive,
        duration: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        let model = LibrationModel::from_sensor(sensor, self.include_gyroscopic);
        self.integrate_model(&model, initial, drive, duration, dt)
    }
}

use serde::{Deserialize, Serialize};

use crate::format::csv_row;

pub const TRAJECTORY_HEADER: &str =
    "time_s,alpha_rad,beta_rad,gamma_rad,alpha_dot_rad_s,beta_dot_rad_s,gamma_dot_rad_s";

/// Librational angles and rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DynamicsState {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_dot: f64,
    pub beta_dot: f64,
    pub gamma_dot: f64,
    pub time: f64,
}

impl DynamicsState {
    pub fn at_rest(alpha: f64, beta: f64) -> Self {
        DynamicsState {
            alpha,
            beta,
            ..Default::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.alpha,
            self.beta,
            self.gamma,
            self.alpha_dot,
            self.beta_dot,
            self.gamma_dot,
            self.time,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Uniformly sampled states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// [Hz]
    pub sample_rate: f64,
    pub states: Vec<DynamicsState>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.time).collect()
    }

    pub fn alpha(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.alpha).collect()
    }

    pub fn beta(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.beta).collect()
    }

    /// Keeps every `every`-th sample, starting with the first.
    pub fn decimate(&self, every: usize) -> Trajectory {
        let every = every.max(1);
        Trajectory {
            sample_rate: self.sample_rate / every as f64,
            states: self.states.iter().step_by(every).copied().collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.states.len() * 120);
        out.push_str(TRAJECTORY_HEADER);
        out.push('\n');
        for s in &self.states {
            out.push_str(&csv_row(&[
                s.time,
                s.alpha,
                s.beta,
                s.gamma,
                s.alpha_dot,
                s.beta_dot,
                s.gamma_dot,
            ]));
            out.push('\n');
        }
        out
    }
}

use std::f64::consts::PI;

use super::{
    erl_field_psd, spin_projection_psd, sql_torque_psd, thermal_torque_psd, torque_to_field_psd, GammaRelPolicy,
};
use crate::error::{Error, Result};
use crate::sensor::DerivedSensor;

pub const THERMAL: &str = "thermal";
pub const SQL: &str = "sql";
pub const ERL: &str = "erl";
pub const SPIN_PROJECTION: &str = "spin_projection";

/// A noise floor expressed as a one-sided magnetic-field PSD [T²/Hz].
pub trait NoiseSource: Send + Sync {
    fn name(&self) -> &'static str;

    fn field_psd(&self, sensor: &DerivedSensor, frequency_hz: f64) -> Result<f64>;
}

pub struct Thermal;

impl NoiseSource for Thermal {
    fn name(&self) -> &'static str {
        THERMAL
    }

    fn field_psd(&self, sensor: &DerivedSensor, _frequency_hz: f64) -> Result<f64> {
        Ok(torque_to_field_psd(thermal_torque_psd(sensor), sensor))
    }
}

pub struct StandardQuantumLimit;

impl NoiseSource for StandardQuantumLimit {
    fn name(&self) -> &'static str {
        SQL
    }

    fn field_psd(&self, sensor: &DerivedSensor, frequency_hz: f64) -> Result<f64> {
        if !(frequency_hz >= 0.0) {
            return Err(Error::invalid("frequency", format!("must be non-negative, got {frequency_hz}")));
        }
        Ok(torque_to_field_psd(sql_torque_psd(sensor, 2.0 * PI * frequency_hz), sensor))
    }
}

/// The energy resolution limit evaluated at equality.
pub struct Erl;

impl NoiseSource for Erl {
    fn name(&self) -> &'static str {
        ERL
    }

    fn field_psd(&self, sensor: &DerivedSensor, _frequency_hz: f64) -> Result<f64> {
        Ok(erl_field_psd(sensor))
    }
}

pub struct SpinProjection {
    pub gamma_rel: GammaRelPolicy,
}

impl NoiseSource for SpinProjection {
    fn name(&self) -> &'static str {
        SPIN_PROJECTION
    }

    fn field_psd(&self, sensor: &DerivedSensor, _frequency_hz: f64) -> Result<f64> {
        spin_projection_psd(sensor, self.gamma_rel.resolve(sensor))
    }
}

/// Noise sources looked up by name, kept in registration order.
#[derive(Default)]
pub struct NoiseRegistry {
    sources: Vec<Box<dyn NoiseSource>>,
}

impl NoiseRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Thermal, SQL, ERL and spin-projection, in that order.
    pub fn standard(gamma_rel: GammaRelPolicy) -> Self {
        let mut r = Self::new();
        r.register(Box::new(Thermal));
        r.register(Box::new(StandardQuantumLimit));
        r.register(Box::new(Erl));
        r.register(Box::new(SpinProjection { gamma_rel }));
        r
    }

    /// Adds a source, replacing any existing source of the same name in place.
    pub fn register(&mut self, source: Box<dyn NoiseSource>) {
        match self.sources.iter().position(|s| s.name() == source.name()) {
            Some(i) => self.sources[i] = source,
            None => self.sources.push(source),
        }
    }

    pub fn get(&self, name: &str) -> Result<&dyn NoiseSource> {
        self.sources
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "noise source",
                name: name.to_string(),
                available: self.names().iter().map(|s| s.to_string()).collect(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.sources.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn NoiseSource> {
        self.sources.iter().map(|s| s.as_ref())
    }
}

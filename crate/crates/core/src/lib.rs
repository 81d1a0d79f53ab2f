//! Noise budget and dynamics of a levitated hard-ferromagnet torque magnetometer.
//!
//! The crate is organised bottom-up:
//!
//! * [`constants`] and [`material`] hold physical constants and ferromagnet records.
//! * [`sensor`] turns a sensor description into every derived mechanical and
//!   magnetic quantity (inertia, moment, spin, Einstein-de Haas and librational
//!   frequencies, Meissner image field).
//! * [`dynamics`] integrates the librational equations of motion, both the
//!   linearised coupled-oscillator form and the full rigid-body form.
//! * [`noise`] evaluates the thermal, standard-quantum-limit, energy-resolution
//!   and spin-projection floors as magnetic-field spectral densities.
//! * [`sweeps`] generates radius sweeps, the ERL/SQL crossing radius and
//!   frame-dragging reference lines.
//! * [`exclusion`] projects bounds on pseudoscalar spin-spin couplings.
//!
//! Interchangeable algorithms (noise sources, integrators, source-field
//! geometries) sit behind small traits and are looked up by name in
//! registries, so front ends can select them from configuration.

// negated comparisons are deliberate: they reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod exclusion;
pub mod format;
pub mod material;
pub mod noise;
pub mod quadrature;
pub mod rootfind;
pub mod sensor;
pub mod sweeps;

pub use error::{Error, Result};
pub use material::{builtin_material, Material};
pub use sensor::{derive, DerivedSensor, FAlphaSpec, Regime, SensorConfig};

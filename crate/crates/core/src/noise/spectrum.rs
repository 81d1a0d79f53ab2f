use rayon::prelude::*;
use serde::Serialize;

use super::NoiseRegistry;
use crate::error::{Error, Result};
use crate::sensor::DerivedSensor;

/// Per-source field PSDs over a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSpectrum {
    /// [Hz]
    pub frequencies: Vec<f64>,
    /// (source name, one-sided PSD [T²/Hz] per grid point), in registry order.
    pub psd_per_source: Vec<(String, Vec<f64>)>,
    pub sensor: DerivedSensor,
}

impl NoiseSpectrum {
    pub fn source(&self, name: &str) -> Option<&[f64]> {
        self.psd_per_source
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

/// Evaluates every source in `registry` on the grid.
pub fn spectrum(derived: &DerivedSensor, grid: &[f64], registry: &NoiseRegistry) -> Result<NoiseSpectrum> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "frequency grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|f| !(*f >= 0.0) || !f.is_finite()) {
        return Err(Error::invalid("grid", "frequencies must be finite, non-negative and strictly increasing"));
    }
    let mut psd_per_source = Vec::new();
    for source in registry.iter() {
        let values = grid
            .par_iter()
            .map(|&f| {
                let v = source.field_psd(derived, f)?;
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(Error::NonFinite { quantity: "noise PSD" })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        psd_per_source.push((source.name().to_string(), values));
    }
    Ok(NoiseSpectrum {
        frequencies: grid.to_vec(),
        psd_per_source,
        sensor: derived.clone(),
    })
}

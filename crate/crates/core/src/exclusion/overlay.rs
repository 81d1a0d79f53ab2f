use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Published exclusion curve to plot alongside projected bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceCurve {
    pub label: String,
    /// [eV]
    pub masses: Vec<f64>,
    pub g_p2: Vec<f64>,
    /// Non-fatal findings such as non-increasing masses.
    pub warnings: Vec<String>,
}

/// Parses two-column `mass_eV g_p2` text. Columns may be separated by
/// whitespace or commas; `#` starts a comment.
pub fn parse_reference_bound(text: &str, label: &str) -> Result<ReferenceCurve> {
    let mut masses = Vec::new();
    let mut g_p2 = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 columns (mass_eV, g_p2), found {}", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("{what} `{s}` is not a number"),
            })?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("{what} must be positive, got {v}"),
                });
            }
            Ok(v)
        };
        let m = parse(fields[0], "mass")?;
        let g = parse(fields[1], "g_p2")?;
        if let Some(&prev) = masses.last() {
            if m <= prev {
                warnings.push(format!("line {line_no}: mass {m} does not increase (previous {prev})"));
            }
        }
        masses.push(m);
        g_p2.push(g);
    }
    if masses.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "reference bound file has no data".to_string(),
        });
    }
    Ok(ReferenceCurve {
        label: label.to_string(),
        masses,
        g_p2,
        warnings,
    })
}

/// Reads a reference bound from disk; the label is the file stem.
pub fn reference_bound_overlay(path: &Path) -> Result<ReferenceCurve> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "reference".to_string());
    parse_reference_bound(&text, &label)
}

impl ReferenceCurve {
    /// Log-log interpolation at `mass`; `None` outside the curve's range or
    /// when the masses are not increasing.
    pub fn interpolate(&self, mass: f64) -> Option<f64> {
        if !self.warnings.is_empty() {
            return None;
        }
        let n = self.masses.len();
        if mass < self.masses[0] || mass > self.masses[n - 1] {
            return None;
        }
        if n == 1 {
            return Some(self.g_p2[0]);
        }
        let j = self.masses.partition_point(|&m| m < mass).clamp(1, n - 1);
        let (m0, m1) = (self.masses[j - 1].ln(), self.masses[j].ln());
        let (g0, g1) = (self.g_p2[j - 1].ln(), self.g_p2[j].ln());
        let t = (mass.ln() - m0) / (m1 - m0);
        Some((g0 + t * (g1 - g0)).exp())
    }
}

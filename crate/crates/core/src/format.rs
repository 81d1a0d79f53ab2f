//! Number formatting for data files.

/// Formats `x` in scientific notation with 9 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

/// Joins a row of numbers as a CSV line (no trailing newline).
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| sci(v)).collect::<Vec<_>>().join(",")
}

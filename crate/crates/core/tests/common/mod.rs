#![allow(dead_code)]

use std::f64::consts::PI;

use ferrotorque::{builtin_material, derive, DerivedSensor, SensorConfig};

pub fn ndfeb_sensor(radius: f64, temperature: f64, q: f64, k: f64) -> SensorConfig {
    SensorConfig::locked(builtin_material("NdFeB").unwrap(), radius, temperature, q, k)
}

pub fn fig2a() -> DerivedSensor {
    derive(&ndfeb_sensor(30e-6, 4.2, 1e7, 10.0)).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Frequency [Hz] from upward zero crossings with linear interpolation.
pub fn zero_crossing_frequency(t: &[f64], x: &[f64]) -> f64 {
    let mut crossings = Vec::new();
    for i in 1..x.len() {
        if x[i - 1] < 0.0 && x[i] >= 0.0 {
            let frac = -x[i - 1] / (x[i] - x[i - 1]);
            crossings.push(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
    }
    let n = crossings.len();
    assert!(n >= 2, "not enough zero crossings");
    (n - 1) as f64 / (crossings[n - 1] - crossings[0])
}

/// Amplitude of the component at `freq` by projecting onto sin and cos over
/// the samples (which should span an integer number of periods).
pub fn lockin_amplitude(t: &[f64], x: &[f64], freq: f64) -> f64 {
    let w = 2.0 * PI * freq;
    let n = x.len() as f64;
    let (mut s, mut c) = (0.0, 0.0);
    for (ti, xi) in t.iter().zip(x) {
        s += xi * (w * ti).sin();
        c += xi * (w * ti).cos();
    }
    2.0 * (s * s + c * c).sqrt() / n
}

/// |DTFT| of a Hann-windowed signal at frequency `f`.
pub fn windowed_dtft(t: &[f64], x: &[f64], f: f64) -> f64 {
    let n = x.len();
    let w = 2.0 * PI * f;
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..n {
        let win = 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos();
        re += win * x[i] * (w * t[i]).cos();
        im -= win * x[i] * (w * t[i]).sin();
    }
    (re * re + im * im).sqrt()
}

/// Locates the spectral peak in [lo, hi] by a coarse scan then golden-section refinement.
pub fn spectral_peak(t: &[f64], x: &[f64], lo: f64, hi: f64) -> f64 {
    let scan = 400;
    let mut best = lo;
    let mut best_v = 0.0;
    for i in 0..=scan {
        let f = lo + (hi - lo) * i as f64 / scan as f64;
        let v = windowed_dtft(t, x, f);
        if v > best_v {
            best_v = v;
            best = f;
        }
    }
    let step = (hi - lo) / scan as f64;
    let (mut a, mut b) = (best - step, best + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if windowed_dtft(t, x, c) > windowed_dtft(t, x, d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Least-squares slope of ln|peaks| against time, over successive local maxima of |x|.
pub fn envelope_decay_rate(t: &[f64], x: &[f64]) -> f64 {
    let mut pts = Vec::new();
    for i in 1..x.len() - 1 {
        if x[i] > x[i - 1] && x[i] >= x[i + 1] && x[i] > 0.0 {
            // parabolic refinement of the peak height
            let (y0, y1, y2) = (x[i - 1], x[i], x[i + 1]);
            let denom = y0 - 2.0 * y1 + y2;
            let off = if denom != 0.0 { 0.5 * (y0 - y2) / denom } else { 0.0 };
            let h = y1 - 0.25 * (y0 - y2) * off;
            let dt = t[i + 1] - t[i];
            pts.push((t[i] + off * dt, h.ln()));
        }
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    -sxy / sxx
}

/// Roots of a monic polynomial (coefficients highest degree first, leading 1 omitted)
/// by Durand-Kerner iteration.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64;
    let n = coeffs.len();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let scale = coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..5000 {
        let mut delta = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = f64::max(delta, step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    roots
}

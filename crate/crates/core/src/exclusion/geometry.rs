use std::f64::consts::PI;

use super::SourceConfig;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;

/// How the source and sensor spin distributions are resolved.
pub trait FieldGeometry: Send + Sync {
    fn name(&self) -> &'static str;

    /// Mean interaction kernel components (K_yx, K_yy) [1/m³], averaged over
    /// source spins (and sensor spins when resolved). Multiplying by the
    /// potential prefactor, g_p² and the source spin count gives the energy
    /// vector A whose y-component responds to the rotating polarization.
    fn mean_kernel(&self, source: &SourceConfig, sensor_radius: f64, lambda: f64) -> [f64; 2];
}

/// (K_yx, K_yy) for a single pair separated by r (from source spin to sensor spin):
/// K_ij = e^{−r/λ}[δ_ij (1/(λr²) + 1/r³) − r̂_i r̂_j (1/(λ²r) + 3/(λr²) + 3/r³)].
fn pair_kernel(r: [f64; 3], lambda: f64) -> [f64; 2] {
    let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    let d = r2.sqrt();
    let inv = 1.0 / d;
    let yuk = (-d / lambda).exp();
    let a = 1.0 / (lambda * r2) + inv * inv * inv;
    let b = 1.0 / (lambda * lambda * d) + 3.0 / (lambda * r2) + 3.0 * inv * inv * inv;
    let (ux, uy) = (r[0] * inv, r[1] * inv);
    [-yuk * uy * ux * b, yuk * (a - uy * uy * b)]
}

/// Both spheres collapsed to their centres.
pub struct PointDipole;

impl FieldGeometry for PointDipole {
    fn name(&self) -> &'static str {
        "point_dipole"
    }

    fn mean_kernel(&self, source: &SourceConfig, _sensor_radius: f64, lambda: f64) -> [f64; 2] {
        pair_kernel([0.0, 0.0, source.distance], lambda)
    }
}

/// Double volume average over both uniform spheres by tensor-product
/// Gauss-Legendre quadrature in (r, cos θ) and the periodic trapezoid rule in φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VolumeIntegral {
    pub source_order: usize,
    pub sensor_order: usize,
}

impl Default for VolumeIntegral {
    fn default() -> Self {
        VolumeIntegral {
            source_order: 12,
            sensor_order: 4,
        }
    }
}

/// Quadrature nodes and normalized weights (summing to 1) over a ball.
fn ball_rule(radius: f64, order: usize, center: [f64; 3]) -> Vec<([f64; 3], f64)> {
    let (rs, wr) = gauss_legendre_on(order, 0.0, radius);
    let (cs, wc) = gauss_legendre_on(order, -1.0, 1.0);
    let n_phi = 2 * order;
    let volume = 4.0 / 3.0 * PI * radius.powi(3);
    let mut out = Vec::with_capacity(order * order * n_phi);
    for (r, w_r) in rs.iter().zip(&wr) {
        for (c, w_c) in cs.iter().zip(&wc) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..n_phi {
                let phi = 2.0 * PI * (k as f64 + 0.5) / n_phi as f64;
                let w = w_r * r * r * w_c * (2.0 * PI / n_phi as f64) / volume;
                out.push((
                    [
                        center[0] + r * s * phi.cos(),
                        center[1] + r * s * phi.sin(),
                        center[2] + r * c,
                    ],
                    w,
                ));
            }
        }
    }
    out
}

impl FieldGeometry for VolumeIntegral {
    fn name(&self) -> &'static str {
        "volume_integral"
    }

    fn mean_kernel(&self, source: &SourceConfig, sensor_radius: f64, lambda: f64) -> [f64; 2] {
        let src = ball_rule(source.radius, self.source_order, [0.0, 0.0, -source.distance]);
        let sen = ball_rule(sensor_radius, self.sensor_order, [0.0, 0.0, 0.0]);
        let mut acc = [0.0, 0.0];
        for (xs, ws) in &sen {
            let mut inner = [0.0, 0.0];
            for (xq, wq) in &src {
                let k = pair_kernel([xs[0] - xq[0], xs[1] - xq[1], xs[2] - xq[2]], lambda);
                inner[0] += wq * k[0];
                inner[1] += wq * k[1];
            }
            acc[0] += ws * inner[0];
            acc[1] += ws * inner[1];
        }
        acc
    }
}

type GeometryFactory = fn() -> Box<dyn FieldGeometry>;

/// Source-field geometries by name.
pub struct GeometryRegistry {
    factories: Vec<(&'static str, GeometryFactory)>,
}

impl Default for GeometryRegistry {
    fn default() -> Self {
        GeometryRegistry {
            factories: vec![
                ("point_dipole", || Box::new(PointDipole)),
                ("volume_integral", || Box::new(VolumeIntegral::default())),
            ],
        }
    }
}

impl GeometryRegistry {
    pub fn register(&mut self, name: &'static str, factory: GeometryFactory) {
        self.factories.retain(|(n, _)| *n != name);
        self.factories.push((name, factory));
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.iter().map(|(n, _)| *n).collect()
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn FieldGeometry>> {
        self.factories
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| f())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "geometry",
                name: name.to_string(),
                available: self.names().iter().map(|s| s.to_string()).collect(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_rule_integrates_polynomials() {
        let rule = ball_rule(2.0, 6, [1.0, 0.0, 0.0]);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-13);
        // mean of |x - c|² over a ball is 3R²/5
        let m: f64 = rule
            .iter()
            .map(|(x, w)| w * ((x[0] - 1.0).powi(2) + x[1] * x[1] + x[2] * x[2]))
            .sum();
        assert!((m - 3.0 * 4.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn on_axis_point_kernel_is_transverse() {
        let [kyx, kyy] = pair_kernel([0.0, 0.0, 2.0], 1e30);
        assert_eq!(kyx, 0.0);
        assert!((kyy - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn registry_names() {
        let r = GeometryRegistry::default();
        assert_eq!(r.names(), vec!["point_dipole", "volume_integral"]);
        assert_eq!(r.create("volume_integral").unwrap().name(), "volume_integral");
        assert!(r.create("cube").is_err());
    }
}

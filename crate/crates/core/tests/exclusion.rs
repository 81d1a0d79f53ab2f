mod common;

use common::{ndfeb_sensor, rel};
use ferrotorque::derive;
use ferrotorque::exclusion::{
    boson_range, exclusion_curve, pseudomagnetic_field, FieldGeometry, Modulation, PointDipole, SourceConfig,
    VolumeIntegral,
};
use ferrotorque::noise::{optimal_sql_split, sql_torque_psd, thermal_torque_psd, NoiseSource, StandardQuantumLimit, Thermal};
use ferrotorque::DerivedSensor;
use proptest::prelude::*;

fn sensor() -> DerivedSensor {
    derive(&ndfeb_sensor(0.2e-3, 4.2, 1e7, 10.0)).unwrap()
}

fn masses() -> Vec<f64> {
    (0..20).map(|i| 10f64.powf(-9.0 + 6.0 * i as f64 / 19.0)).collect()
}

/// Field of a uniform Yukawa ball relative to its centre point.
fn form_factor(x: f64) -> f64 {
    if x < 1e-3 {
        1.0 + x * x / 10.0
    } else {
        3.0 * (x * x.cosh() - x.sinh()) / x.powi(3)
    }
}

fn models() -> [&'static dyn NoiseSource; 2] {
    [&Thermal, &StandardQuantumLimit]
}

#[test]
fn bounds_scale_as_inverse_root_time() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let m = masses();
    let a = exclusion_curve(&s, &src, 1e6, &m, &models(), &PointDipole, 1.0).unwrap();
    let b = exclusion_curve(&s, &src, 4e6, &m, &models(), &PointDipole, 1.0).unwrap();
    for name in ["thermal", "sql"] {
        for (x, y) in a.bound(name).unwrap().iter().zip(b.bound(name).unwrap()) {
            assert!(rel(*y, 0.5 * x) < 1e-12);
        }
    }
}

#[test]
fn thermal_to_sql_ratio_is_noise_ratio() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let curve = exclusion_curve(&s, &src, 1e6, &masses(), &models(), &VolumeIntegral::default(), 1.0).unwrap();
    let w = 2.0 * std::f64::consts::PI * curve.metadata.modulation_frequency;
    let want = (thermal_torque_psd(&s) / sql_torque_psd(&s, w)).sqrt();
    let th = curve.bound("thermal").unwrap();
    let sq = curve.bound("sql").unwrap();
    for (a, b) in th.iter().zip(sq) {
        assert!(rel(a / b, want) < 1e-12);
    }
}

#[test]
fn subresonant_gap_is_about_three_orders() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let curve = exclusion_curve(&s, &src, 1e6, &[1e-6], &models(), &PointDipole, 1.0).unwrap();
    let gap = (curve.bound("thermal").unwrap()[0] / curve.bound("sql").unwrap()[0]).log10();
    assert!(gap > 2.5 && gap < 3.2, "{gap}");
    // on resonance the thermal/SQL gap opens to several more orders
    let mut res = src.clone();
    res.modulation = Modulation::FractionOfFAlpha(1.0);
    let curve = exclusion_curve(&s, &res, 1e6, &[1e-6], &models(), &PointDipole, 1.0).unwrap();
    let gap_res = (curve.bound("thermal").unwrap()[0] / curve.bound("sql").unwrap()[0]).log10();
    assert!(gap_res > gap + 3.0, "{gap_res}");
    // SQL split at the modulation frequency stays Heisenberg-limited
    let split = optimal_sql_split(&s, 2.0 * std::f64::consts::PI * 0.1 * s.f_alpha());
    assert!(rel(split.heisenberg_product(), (ferrotorque::constants::HBAR).powi(2)) < 1e-12);
}

#[test]
fn yukawa_plateau_for_long_range() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let d = src.distance;
    let lam0 = 100.0 * d;
    let lam = [lam0, 1e3 * d, 1e5 * d];
    for g in [&PointDipole as &dyn FieldGeometry, &VolumeIntegral::default()] {
        let b: Vec<f64> = lam
            .iter()
            .map(|&l| pseudomagnetic_field(&src, &s, l, 1.0, g, 1.0).unwrap())
            .collect();
        for x in &b[1..] {
            assert!(rel(*x, b[0]) < 0.01, "{}", g.name());
        }
    }
    let m = ferrotorque::constants::HBAR_C_EV_M / lam0;
    let curve = exclusion_curve(&s, &src, 1e6, &[m * 1e-3, m * 1e-2, m], &models(), &PointDipole, 1.0).unwrap();
    let th = curve.bound("thermal").unwrap();
    assert!(rel(th[0], th[2]) < 0.01);
}

#[test]
fn short_range_is_exponentially_suppressed() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let near = pseudomagnetic_field(&src, &s, src.distance, 1.0, &PointDipole, 1.0).unwrap();
    let far = pseudomagnetic_field(&src, &s, src.distance / 10.0, 1.0, &PointDipole, 1.0).unwrap();
    assert!(far < near * 1e-3);
}

#[test]
fn volume_matches_uniform_ball_form_factor() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    for lam in [src.distance * 3.0, src.distance, src.distance / 3.0] {
        let point = pseudomagnetic_field(&src, &s, lam, 1.0, &PointDipole, 1.0).unwrap();
        let want = point * form_factor(src.radius / lam) * form_factor(s.radius() / lam);
        let geometry = VolumeIntegral {
            source_order: 24,
            sensor_order: 8,
        };
        let got = pseudomagnetic_field(&src, &s, lam, 1.0, &geometry, 1.0).unwrap();
        assert!(rel(got, want) < 1e-4, "lambda {lam}: {got} vs {want}");
    }
}

#[test]
fn volume_converges_to_point_for_distant_source() {
    let s = sensor();
    let mut src = SourceConfig::fig3_default();
    src.radius = src.distance / 10.0;
    for lam in [src.distance, 10.0 * src.distance] {
        let point = pseudomagnetic_field(&src, &s, lam, 1.0, &PointDipole, 1.0).unwrap();
        let vol = pseudomagnetic_field(&src, &s, lam, 1.0, &VolumeIntegral::default(), 1.0).unwrap();
        assert!(rel(vol, point) < 0.05);
    }
}

#[test]
fn quadrature_converges_with_order() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let lam = src.distance / 2.0;
    let at = |n: usize| {
        pseudomagnetic_field(
            &src,
            &s,
            lam,
            1.0,
            &VolumeIntegral {
                source_order: n,
                sensor_order: 4,
            },
            1.0,
        )
        .unwrap()
    };
    let (a, b, c) = (at(6), at(12), at(24));
    assert!((c - b).abs() <= (b - a).abs() + 1e-30 * c);
    assert!(rel(b, c) < 1e-4);
}

#[test]
fn amplitude_independent_of_initial_polarization() {
    let s = sensor();
    let mut src = SourceConfig::fig3_default();
    let g = VolumeIntegral::default();
    let a = pseudomagnetic_field(&src, &s, 3e-3, 1.0, &g, 1.0).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    src.polarization_axis = [h, h, 0.0];
    let b = pseudomagnetic_field(&src, &s, 3e-3, 1.0, &g, 1.0).unwrap();
    assert!(rel(a, b) < 1e-12);
}

#[test]
fn overlapping_geometry_rejected() {
    let s = sensor();
    let mut src = SourceConfig::fig3_default();
    src.distance = src.radius;
    assert!(exclusion_curve(&s, &src, 1e6, &masses(), &models(), &PointDipole, 1.0).is_err());
}

#[test]
fn csv_columns() {
    let s = sensor();
    let src = SourceConfig::fig3_default();
    let curve = exclusion_curve(&s, &src, 1e6, &masses(), &models(), &PointDipole, 1.0).unwrap();
    let csv = curve.to_csv(None);
    assert!(csv.starts_with("mass_eV,g_p2_thermal,g_p2_sql\n"));
    assert_eq!(csv.lines().count(), 21);
    let overlay = ferrotorque::exclusion::parse_reference_bound("1e-8 1e-5\n1e-4 1e-1\n", "ref").unwrap();
    let csv = curve.to_csv(Some(&overlay));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].ends_with(",g_p2_reference"));
    assert!(lines[1].ends_with(','));
    assert!(!lines[10].ends_with(','));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_linear_in_coupling_and_source_spins(
        g in 1e-30f64..1e-10,
        scale in 0.1f64..10.0,
        log_mass in -9.0f64..-4.0,
    ) {
        let s = sensor();
        let src = SourceConfig::fig3_default();
        let lam = boson_range(10f64.powf(log_mass)).unwrap();
        let base = pseudomagnetic_field(&src, &s, lam, g, &PointDipole, 1.0).unwrap();
        let doubled = pseudomagnetic_field(&src, &s, lam, 2.0 * g, &PointDipole, 1.0).unwrap();
        prop_assert!(rel(doubled, 2.0 * base) < 1e-14);
        let mut denser = src.clone();
        denser.spin_density *= scale;
        let b = pseudomagnetic_field(&denser, &s, lam, g, &PointDipole, 1.0).unwrap();
        prop_assert!(rel(b, scale * base) < 1e-12);
    }

    #[test]
    fn bounds_positive_and_monotone_in_mass(t in 1e3f64..1e8) {
        let s = sensor();
        let src = SourceConfig::fig3_default();
        let curve = exclusion_curve(&s, &src, t, &masses(), &models(), &PointDipole, 1.0).unwrap();
        for name in ["thermal", "sql"] {
            let b = curve.bound(name).unwrap();
            prop_assert!(b.iter().all(|&x| x > 0.0 && x.is_finite()));
            prop_assert!(b.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        }
    }
}

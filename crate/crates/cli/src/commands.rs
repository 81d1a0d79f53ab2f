use std::f64::consts::PI;

use ferrotorque::dynamics::{
    eigenmodes, DriveKind, DynamicsState, IntegratorOptions, IntegratorRegistry, TorqueDrive,
};
use ferrotorque::exclusion::{
    exclusion_curve, reference_bound_overlay, FieldGeometry, GeometryRegistry, Modulation, SourceConfig,
    VolumeIntegral,
};
use ferrotorque::format::{csv_row, sci};
use ferrotorque::noise::{spectrum, GammaRelPolicy, NoiseRegistry, NoiseSource};
use ferrotorque::sweeps::{
    find_erl_sql_crossing, frame_dragging_line, radius_sweep, reference_lines_csv, ReferenceLabel,
    CROSSING_BRACKET,
};
use ferrotorque::{derive, DerivedSensor, FAlphaSpec};
use serde_json::{json, Map, Value};

use crate::config::{GridKind, RunConfig};
use crate::error::CliError;
use crate::output::{metadata, Writer};

const STEP_RULE: &str = "dt <= 1/(50 f_max), f_max over f_alpha, f_beta, the drive and (with gyroscopic coupling) (omega_I + gamma_dot)/2pi";
const NORMALIZATION_NOTE: &str =
    "absolute g_p2 placement depends on the coupling normalization convention (uncertain by a factor O(1)-O(4pi))";

fn gamma_rel_policy(config: &RunConfig) -> GammaRelPolicy {
    match config.noise.gamma_rel_s {
        Some(g) => GammaRelPolicy::Fixed(g),
        None => GammaRelPolicy::TwoPiFAlpha,
    }
}

fn gamma_rel_decision(config: &RunConfig, d: &DerivedSensor) -> Value {
    let policy = gamma_rel_policy(config);
    json!({
        "policy": match policy {
            GammaRelPolicy::TwoPiFAlpha => "2*pi*f_alpha",
            GammaRelPolicy::Fixed(_) => "fixed",
        },
        "gamma_rel_s": policy.resolve(d),
    })
}

fn sensor_decisions(d: &DerivedSensor) -> Value {
    json!({
        "material": d.config.material,
        "f_alpha_spec": d.config.f_alpha,
        "regime": d.regime().as_str(),
        "psd_convention": "one-sided",
    })
}

fn quantity_rows(d: &DerivedSensor) -> Vec<(&'static str, f64, &'static str)> {
    let mut rows = vec![
        ("radius", d.radius(), "m"),
        ("volume", d.volume, "m^3"),
        ("mass", d.mass, "kg"),
        ("moment_of_inertia", d.inertia, "kg m^2"),
        ("magnetic_moment", d.mu, "J/T"),
        ("intrinsic_spin", d.spin, "J s"),
        ("n_spins", d.n_spins, "1"),
        ("omega_I", d.omega_i, "rad/s"),
        ("f_I", d.f_i(), "Hz"),
        ("omega_alpha", d.omega_alpha, "rad/s"),
        ("f_alpha", d.f_alpha(), "Hz"),
        ("temperature", d.temperature(), "K"),
        ("q_alpha", d.q_alpha(), "1"),
        ("q_beta", d.q_beta(), "1"),
        ("gamma0", d.gamma0(), "rad/(s T)"),
    ];
    if let (Some(z0), Some(b), Some(wl), Some(wb)) = (d.config.z0, d.b_image, d.omega_l, d.omega_beta) {
        rows.extend([
            ("z0", z0, "m"),
            ("b_image", b, "T"),
            ("omega_L", wl, "rad/s"),
            ("omega_beta", wb, "rad/s"),
            ("f_beta", wb / (2.0 * PI), "Hz"),
        ]);
        if let Ok(modes) = eigenmodes(d) {
            rows.extend([
                ("mode_low_frequency", modes[0].re / (2.0 * PI), "Hz"),
                ("mode_low_damping", modes[0].im, "1/s"),
                ("mode_high_frequency", modes[1].re / (2.0 * PI), "Hz"),
                ("mode_high_damping", modes[1].im, "1/s"),
            ]);
        }
    }
    rows
}

pub fn cmd_derive(config: &RunConfig, out: &mut Writer) -> Result<(), CliError> {
    let d = derive(&config.sensor_config()?)?;
    let rows = quantity_rows(&d);

    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    println!("sensor: {} sphere, regime {}", d.config.material.name, d.regime().as_str());
    for (name, value, unit) in &rows {
        println!("  {name:<width$}  {}  {unit}", sci(*value));
    }

    let format = config.output.format;
    if format.csv() {
        let mut csv = String::from("quantity,value,unit\n");
        for (name, value, unit) in &rows {
            csv.push_str(&format!("{name},{},{unit}\n", sci(*value)));
        }
        out.write("derive.csv", &csv)?;
    }
    let mut quantities = Map::new();
    for (name, value, unit) in &rows {
        quantities.insert(name.to_string(), json!({ "value": value, "unit": unit }));
    }
    let report = json!({ "regime": d.regime().as_str(), "quantities": quantities });
    if format.json() {
        out.write_json("derive.json", &report)?;
    }
    let meta = metadata("derive", config, sensor_decisions(&d), report);
    let name = if format.csv() { "derive.csv" } else { "derive.json" };
    out.write_meta(name, &meta)
}

pub fn cmd_spectrum(config: &RunConfig, out: &mut Writer) -> Result<(), CliError> {
    let d = derive(&config.sensor_config()?)?;
    let grid = config.grid(GridKind::Frequency)?;
    let registry = NoiseRegistry::standard(gamma_rel_policy(config));
    let s = spectrum(&d, &grid, &registry)?;

    let amplitudes: Vec<(String, Vec<f64>)> = s
        .psd_per_source
        .iter()
        .map(|(n, v)| (n.clone(), v.iter().map(|p| p.sqrt()).collect()))
        .collect();

    let format = config.output.format;
    if format.csv() {
        let mut csv = String::from("frequency_Hz");
        for (n, _) in &amplitudes {
            csv.push_str(&format!(",{n}_T_per_sqrtHz"));
        }
        csv.push('\n');
        for (i, f) in s.frequencies.iter().enumerate() {
            let mut row = vec![*f];
            row.extend(amplitudes.iter().map(|(_, v)| v[i]));
            csv.push_str(&csv_row(&row));
            csv.push('\n');
        }
        out.write("spectrum.csv", &csv)?;
    }
    if format.json() {
        let mut a = Map::new();
        for (n, v) in &amplitudes {
            a.insert(n.clone(), json!(v));
        }
        out.write_json(
            "spectrum.json",
            &json!({ "frequency_Hz": s.frequencies, "amplitude_T_per_sqrtHz": a }),
        )?;
    }
    let mut decisions = sensor_decisions(&d);
    decisions["gamma_rel"] = gamma_rel_decision(config, &d);
    let results = json!({
        "f_alpha_Hz": d.f_alpha(),
        "f_I_Hz": d.f_i(),
        "points": grid.len(),
        "sources": registry.names(),
    });
    let meta = metadata("spectrum", config, decisions, results);
    out.write_meta(if format.csv() { "spectrum.csv" } else { "spectrum.json" }, &meta)
}

pub fn cmd_radius_sweep(config: &RunConfig, out: &mut Writer) -> Result<(), CliError> {
    let k = match config.sensor_config()?.f_alpha {
        FAlphaSpec::RatioToEinsteinDeHaas(k) => k,
        FAlphaSpec::Explicit(_) => {
            return Err(CliError::Config(
                "sensor: radius-sweep needs f_alpha_over_f_I (f_alpha scales with f_I)".into(),
            ))
        }
    };
    let reference = derive(&config.sensor_config()?)?;
    let material = config.material()?;
    let radii = config.grid(GridKind::Radius)?;
    // Γ_rel is held at the reference sensor's value so the spin-projection
    // floor scales only through N
    let gamma_rel = GammaRelPolicy::Fixed(gamma_rel_policy(config).resolve(&reference));
    let sweep = radius_sweep(&material, reference.temperature(), reference.q_alpha(), k, &radii, gamma_rel)?;

    let crossing = match find_erl_sql_crossing(&material, k) {
        Ok(r) => Some(r),
        Err(e) => {
            eprintln!("warning: {e}");
            None
        }
    };

    let format = config.output.format;
    if format.csv() {
        out.write("radius_sweep.csv", &sweep.to_csv())?;
    }
    if format.json() {
        out.write_json("radius_sweep.json", &sweep)?;
    }

    let mut lines = Vec::new();
    for l in &config.reference_lines {
        lines.push(frame_dragging_line(ReferenceLabel::parse(&l.label), l.omega_rad_s, material.gamma0)?);
    }
    if !lines.is_empty() {
        if format.csv() {
            out.write("reference_lines.csv", &reference_lines_csv(&lines))?;
        }
        if format.json() {
            out.write_json("reference_lines.json", &lines)?;
        }
    }

    let decisions = json!({
        "material": material,
        "lock_ratio_f_alpha_over_f_I": k,
        "evaluation_frequency_Hz": 0.0,
        "gamma_rel": {
            "policy": "fixed at the reference sensor value",
            "reference_radius_m": reference.radius(),
            "gamma_rel_s": gamma_rel.resolve(&reference),
        },
        "crossing_bracket_m": [CROSSING_BRACKET.0, CROSSING_BRACKET.1],
        "psd_convention": "one-sided",
    });
    let results = json!({
        "erl_sql_crossing_radius_m": crossing,
        "points": radii.len(),
        "reference_lines": lines,
    });
    let meta = metadata("radius-sweep", config, decisions, results);
    out.write_meta(if format.csv() { "radius_sweep.csv" } else { "radius_sweep.json" }, &meta)?;
    if !lines.is_empty() {
        let name = if format.csv() { "reference_lines.csv" } else { "reference_lines.json" };
        out.write_meta(name, &meta)?;
    }
    Ok(())
}

pub fn cmd_simulate(config: &RunConfig, out: &mut Writer) -> Result<(), CliError> {
    let sim = config
        .simulate
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [simulate] table".into()))?;
    let d = derive(&config.sensor_config()?)?;

    let drive = {
        let dr = &sim.drive;
        let frequency = match (dr.frequency_hz, dr.frequency_over_f_alpha) {
            (Some(f), _) => f,
            (None, Some(x)) => x * d.f_alpha(),
            (None, None) if dr.kind == DriveKind::None => 0.0,
            (None, None) => {
                return Err(CliError::Config(
                    "simulate.drive: a drive needs frequency_Hz or frequency_over_f_alpha".into(),
                ))
            }
        };
        TorqueDrive {
            kind: dr.kind,
            amplitude: dr.amplitude,
            frequency,
            phase: dr.phase_rad,
        }
    };
    let initial = DynamicsState {
        alpha: sim.alpha0_rad,
        beta: sim.beta0_rad,
        gamma_dot: d.config.gamma_dot,
        ..Default::default()
    };
    let registry = IntegratorRegistry::default();
    let options = IntegratorOptions {
        include_gyroscopic: sim.gyroscopic,
    };
    let integrator = registry.create(&sim.mode, &options)?;
    let traj = integrator.integrate(&d, &initial, &drive, sim.duration_s, sim.dt_s)?;

    let mut results = json!({
        "samples_integrated": traj.states.len(),
        "samples_written": traj.states.len().div_ceil(sim.decimation),
        "drive_frequency_Hz": drive.frequency,
    });
    if sim.compare_linear && integrator.name() != "linear" {
        let linear = registry.create("linear", &options)?;
        let reference = linear.integrate(&d, &initial, &drive, sim.duration_s, sim.dt_s)?;
        let delta = traj
            .states
            .iter()
            .zip(&reference.states)
            .map(|(a, b)| (a.alpha - b.alpha).abs())
            .fold(0.0, f64::max);
        results["max_abs_delta_alpha_vs_linear_rad"] = json!(delta);
    }

    let written = traj.decimate(sim.decimation);
    let format = config.output.format;
    if format.csv() {
        out.write("trajectory.csv", &written.to_csv())?;
    }
    if format.json() {
        out.write_json("trajectory.json", &written)?;
    }
    let mut decisions = sensor_decisions(&d);
    decisions["integrator"] = json!(integrator.name());
    decisions["scheme"] = json!("classical RK4, fixed step");
    decisions["step_rule"] = json!(STEP_RULE);
    decisions["gyroscopic"] = json!(sim.gyroscopic);
    let meta = metadata("simulate", config, decisions, results);
    out.write_meta(if format.csv() { "trajectory.csv" } else { "trajectory.json" }, &meta)
}

pub fn cmd_exclusion(config: &RunConfig, out: &mut Writer) -> Result<(), CliError> {
    let x = config
        .exclusion
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [exclusion] table".into()))?;
    let d = derive(&config.sensor_config()?)?;
    let masses = config.grid(GridKind::Mass)?;

    let modulation = match (x.modulation_over_f_alpha, x.f_mod_hz) {
        (_, Some(f)) => Modulation::Explicit(f),
        (Some(r), None) => Modulation::FractionOfFAlpha(r),
        (None, None) => Modulation::default(),
    };
    let source = SourceConfig {
        radius: x.source_radius_m,
        spin_density: x.spin_density_m3,
        distance: x.distance_m,
        modulation,
        polarization_axis: x.polarization_axis,
    };

    let geometry: Box<dyn FieldGeometry> = match (x.geometry.as_str(), x.source_order, x.sensor_order) {
        (_, None, None) => GeometryRegistry::default().create(&x.geometry)?,
        ("volume_integral", s, t) => {
            let def = VolumeIntegral::default();
            let g = VolumeIntegral {
                source_order: s.unwrap_or(def.source_order),
                sensor_order: t.unwrap_or(def.sensor_order),
            };
            if g.source_order == 0 || g.sensor_order == 0 {
                return Err(CliError::Config("exclusion: quadrature orders must be at least 1".into()));
            }
            Box::new(g)
        }
        (other, _, _) => {
            return Err(CliError::Config(format!(
                "exclusion: source_order/sensor_order apply to volume_integral, not {other}"
            )))
        }
    };

    let registry = NoiseRegistry::standard(gamma_rel_policy(config));
    let models = x
        .noise_models
        .iter()
        .map(|n| registry.get(n))
        .collect::<Result<Vec<&dyn NoiseSource>, _>>()?;

    let overlay = match &x.overlay {
        Some(p) => {
            let c = reference_bound_overlay(p)?;
            for w in &c.warnings {
                eprintln!("warning: {}: {w}", p.display());
            }
            Some(c)
        }
        None => None,
    };

    let curve = exclusion_curve(
        &d,
        &source,
        x.t_meas_s,
        &masses,
        &models,
        geometry.as_ref(),
        x.coupling_normalization,
    )?;

    let format = config.output.format;
    if format.csv() {
        out.write("exclusion.csv", &curve.to_csv(overlay.as_ref()))?;
    }
    if format.json() {
        out.write_json(
            "exclusion.json",
            &json!({
                "mass_eV": curve.boson_masses,
                "g_p2": curve.bounds.iter().map(|(n, v)| (n.clone(), json!(v))).collect::<Map<_, _>>(),
                "reference": overlay,
            }),
        )?;
    }

    let mut decisions = sensor_decisions(&d);
    decisions["gamma_rel"] = gamma_rel_decision(config, &d);
    decisions["source"] = json!(source);
    decisions["modulation_frequency_Hz"] = json!(curve.metadata.modulation_frequency);
    decisions["geometry"] = json!(geometry.name());
    decisions["coupling_normalization"] = json!(x.coupling_normalization);
    decisions["normalization_note"] = json!(NORMALIZATION_NOTE);
    let results = json!({
        "points": masses.len(),
        "noise_models": x.noise_models,
        "overlay_warnings": overlay.as_ref().map(|c| c.warnings.clone()).unwrap_or_default(),
    });
    let meta = metadata("exclusion", config, decisions, results);
    out.write_meta(if format.csv() { "exclusion.csv" } else { "exclusion.json" }, &meta)
}

//! Subcommands. Each writes its CSVs into the output directory and returns
//! diagnostics for the manifest.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hirota_core::scatter::{reflection_from_samples, scattering_samples, uniform_grid};
use hirota_core::simulate::{conserved_quantities, evolve, FieldState, SimConfig, SimDiagnostics};
use hirota_core::soliton::{cone_filter, soliton_field, soliton_q};
use hirota_core::spectrum::find_discrete_spectrum;
use hirota_core::{stationary_points, AsymptoticSolver, Complex64, Cone, DiscreteSpectrum, Params};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ConeSection, ExperimentConfig, SimulationSection};
use crate::fit::{geometric_times, DecayFit};
use crate::io::write_rows;
use crate::profile::{profile_fn, require_profile, scattering_data, scattering_profile, search_box};

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub diagnostics: Value,
    pub warnings: Vec<String>,
}

fn complex_cols(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn section<'a, T>(opt: &'a Option<T>, name: &str) -> anyhow::Result<&'a T> {
    opt.as_ref().with_context(|| format!("config has no `{name}` section"))
}

pub fn write_spectrum(path: &Path, spectrum: &DiscreteSpectrum) -> anyhow::Result<()> {
    write_rows(
        path,
        &["re_z", "im_z", "re_c", "im_c"],
        spectrum.poles().iter().map(|p| vec![p.z.re, p.z.im, p.c.re, p.c.im]),
    )
}

pub fn cmd_scatter(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let profile = scattering_profile(cfg)?;
    let zs = crate::profile::reflection_grid(cfg)?;
    let samples = scattering_samples(&profile, &zs)?;
    let unitarity = samples
        .iter()
        .map(|s| (s.s11.norm_sqr() + s.s21.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    let gamma = reflection_from_samples(&samples)?;
    let spectrum = find_discrete_spectrum(&profile, search_box(cfg)?)?;

    let reflection = out.join("reflection.csv");
    write_rows(
        &reflection,
        &["z", "re_gamma", "im_gamma"],
        gamma.zs().iter().zip(gamma.gamma()).map(|(&z, g)| vec![z, g.re, g.im]),
    )?;
    let spectrum_path = out.join("spectrum.csv");
    write_spectrum(&spectrum_path, &spectrum)?;
    Ok(Outcome {
        files: vec![reflection, spectrum_path],
        diagnostics: json!({
            "unitarity_max": unitarity,
            "eigenvalues": spectrum.len(),
            "max_abs_gamma": gamma.max_abs(),
        }),
        warnings: Vec::new(),
    })
}

pub fn cmd_soliton(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let field = section(&cfg.soliton_field, "soliton_field")?;
    let (_, spectrum) = scattering_data(cfg)?;
    let xs = uniform_grid(field.x_min, field.x_max, field.points);
    let mut rows = Vec::with_capacity(xs.len() * field.times.len());
    for &t in &field.times {
        let q = soliton_field(&spectrum, &xs, t, &p)?;
        rows.extend(xs.iter().zip(&q).map(|(&x, q)| vec![x, t, q.re, q.im]));
    }
    let path = out.join("soliton_field.csv");
    write_rows(&path, &["x", "t", "re_q", "im_q"], rows)?;
    let spectrum_path = out.join("spectrum.csv");
    write_spectrum(&spectrum_path, &spectrum)?;
    Ok(Outcome {
        files: vec![path, spectrum_path],
        diagnostics: json!({ "poles": spectrum.len() }),
        warnings: Vec::new(),
    })
}

fn sim_config(s: &SimulationSection) -> anyhow::Result<SimConfig> {
    Ok(SimConfig::new(s.half_width, s.modes, s.dt, s.t_end)?.with_dealias(s.dealias)?)
}

/// Serializable copy of the integrator diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct RunDiagnostics {
    pub steps: usize,
    pub stability_number: f64,
    pub boundary_ratio: f64,
    pub boundary_flagged: bool,
    /// `max_t |I₁(t) − I₁(0)| / (1 + |I₁(0)|)` over the recorded states.
    pub mass_drift: f64,
}

fn run_diagnostics(d: &SimDiagnostics, mass_drift: f64) -> RunDiagnostics {
    RunDiagnostics {
        steps: d.steps,
        stability_number: d.stability_number,
        boundary_ratio: d.boundary_ratio,
        boundary_flagged: d.boundary_flagged,
        mass_drift,
    }
}

/// A simulation with its recorded states.
pub struct SimulationRun {
    pub initial: FieldState,
    pub snapshots: Vec<FieldState>,
    pub final_state: FieldState,
    pub conserved: Vec<(f64, [Complex64; 3])>,
    pub diagnostics: RunDiagnostics,
}

pub fn simulate(cfg: &ExperimentConfig, extra_times: &[f64]) -> anyhow::Result<SimulationRun> {
    let p = cfg.params()?;
    let s = section(&cfg.simulation, "simulation")?;
    let sim = sim_config(s)?;
    let f = profile_fn(require_profile(cfg)?, &p)?;
    let q0 = FieldState::from_fn(sim.half_width, sim.modes, 0.0, f)?;
    let mut times: Vec<f64> = s.snapshots.iter().chain(extra_times).copied().collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let run = evolve(&q0, &sim, &p, &times)?;
    let mut conserved = vec![(0.0, conserved_quantities(&q0))];
    for st in run.snapshots.iter().chain([&run.final_state]) {
        conserved.push((st.t, conserved_quantities(st)));
    }
    let i0 = conserved[0].1[0];
    let drift = conserved
        .iter()
        .map(|(_, i)| (i[0] - i0).norm() / (1.0 + i0.norm()))
        .fold(0.0, f64::max);
    Ok(SimulationRun {
        initial: q0,
        snapshots: run.snapshots,
        final_state: run.final_state,
        conserved,
        diagnostics: run_diagnostics(&run.diagnostics, drift),
    })
}

pub fn cmd_simulate(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let run = simulate(cfg, &[])?;
    let mut files = Vec::new();
    for (j, st) in run.snapshots.iter().chain([&run.final_state]).enumerate() {
        let path = out.join(format!("snapshot_{j:03}.csv"));
        write_rows(
            &path,
            &["x", "re_q", "im_q"],
            st.xs().into_iter().zip(&st.q).map(|(x, q)| vec![x, q.re, q.im]),
        )?;
        files.push(path);
    }
    let path = out.join("conserved.csv");
    write_rows(
        &path,
        &["t", "re_i1", "im_i1", "re_i2", "im_i2", "re_i3", "im_i3"],
        run.conserved.iter().map(|(t, i)| {
            let mut row = vec![*t];
            for v in i {
                row.extend(complex_cols(*v));
            }
            row
        }),
    )?;
    files.push(path);
    let snapshot_times: Vec<f64> = run.snapshots.iter().chain([&run.final_state]).map(|s| s.t).collect();
    let mut warnings = Vec::new();
    if run.diagnostics.boundary_flagged {
        warnings.push(format!(
            "field reached {:.3e} of its peak near the periodic boundary",
            run.diagnostics.boundary_ratio
        ));
    }
    Ok(Outcome {
        files,
        diagnostics: json!({
            "run": run.diagnostics,
            "snapshot_times": snapshot_times,
            "conserved": run.conserved.iter().map(|(t, i)| json!({
                "t": t,
                "i1": complex_cols(i[0]),
                "i2": complex_cols(i[1]),
                "i3": complex_cols(i[2]),
            })).collect::<Vec<_>>(),
        }),
        warnings,
    })
}

fn solver<'a>(
    p: Params,
    gamma: &'a hirota_core::ReflectionCoefficient,
    spectrum: &'a DiscreteSpectrum,
    cone: Option<Cone>,
    sign: crate::config::SignChoice,
) -> AsymptoticSolver<'a> {
    AsymptoticSolver::new(p, gamma, spectrum)
        .with_cone(cone)
        .with_sign(sign.into())
}

fn configured_cone(cfg: &ExperimentConfig) -> anyhow::Result<Option<Cone>> {
    Ok(match &cfg.cone {
        Some(c) => Some(c.to_cone()?),
        None => None,
    })
}

pub fn cmd_asympt(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let p = cfg.params()?;
    let a = section(&cfg.asymptotics, "asymptotics")?;
    let (gamma, spectrum) = scattering_data(cfg)?;
    let s = solver(p, &gamma, &spectrum, configured_cone(cfg)?, a.antidiagonal_sign);
    let frames = a
        .points
        .par_iter()
        .map(|pt| s.frame(pt.x, pt.t))
        .collect::<hirota_core::Result<Vec<_>>>()?;
    let path = out.join("frames.csv");
    write_rows(
        &path,
        &["x", "t", "z0", "z1", "nu0", "nu1", "re_f", "im_f", "re_qasy", "im_qasy"],
        frames.iter().map(|f| {
            vec![
                f.point.x, f.point.t, f.z0, f.z1, f.nu0, f.nu1, f.f.re, f.f.im, f.q_asy.re, f.q_asy.im,
            ]
        }),
    )?;
    Ok(Outcome {
        files: vec![path],
        diagnostics: json!({ "frames": frames.len(), "poles": spectrum.len(), "max_abs_gamma": gamma.max_abs() }),
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RaySample {
    pub t: f64,
    /// `max |q_num − q_asy|` over the window.
    pub err: f64,
    pub amp_num: f64,
    pub amp_asy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RayReport {
    pub ray: f64,
    pub z0: f64,
    pub z1: f64,
    pub window: f64,
    pub samples: Vec<RaySample>,
    pub probes: Vec<RaySample>,
    pub error_fit: DecayFit,
    pub amplitude_fit: DecayFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rays: Vec<RayReport>,
    pub run: RunDiagnostics,
    pub poles: usize,
}

fn ray_sample(state: &FieldState, ray: f64, window: f64, s: &AsymptoticSolver<'_>) -> anyhow::Result<RaySample> {
    let t = state.t;
    let centre = ray * t;
    let idx: Vec<usize> = (0..state.len())
        .filter(|&j| (state.x(j) - centre).abs() <= window)
        .collect();
    if idx.is_empty() {
        bail!("window around x = {centre} at t = {t} contains no grid points");
    }
    let edge = 0.9 * state.half_width;
    if (centre - window).abs() > edge || (centre + window).abs() > edge {
        bail!("window around x = {centre} at t = {t} reaches the periodic boundary layer");
    }
    let values = idx
        .par_iter()
        .map(|&j| s.frame(state.x(j), t).map(|f| (state.q[j], f.q_asy)))
        .collect::<hirota_core::Result<Vec<_>>>()
        .with_context(|| format!("asymptotics on the ray x/t = {ray} at t = {t}"))?;
    let mut r = RaySample {
        t,
        err: 0.0,
        amp_num: 0.0,
        amp_asy: 0.0,
    };
    for (num, asy) in values {
        r.err = r.err.max((num - asy).norm());
        r.amp_num = r.amp_num.max(num.norm());
        r.amp_asy = r.amp_asy.max(asy.norm());
    }
    Ok(r)
}

/// Simulation against the asymptotic formula along rays `x = vt`.
pub fn run_compare(cfg: &ExperimentConfig) -> anyhow::Result<CompareReport> {
    let p = cfg.params()?;
    let c = section(&cfg.compare, "compare")?;
    let sim = section(&cfg.simulation, "simulation")?;
    if c.t_max > sim.t_end {
        bail!("compare.t_max = {} exceeds simulation.t_end = {}", c.t_max, sim.t_end);
    }
    let fit_times = geometric_times(c.t_min, c.t_max, c.factor);
    let mut all_times = fit_times.clone();
    all_times.extend(&c.probe_times);
    let (gamma, spectrum) = scattering_data(cfg)?;
    let run = simulate(cfg, &all_times)?;
    let s = solver(p, &gamma, &spectrum, configured_cone(cfg)?, c.antidiagonal_sign);
    let state_at = |t: f64| -> anyhow::Result<&FieldState> {
        run.snapshots
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-9 * t.max(1.0))
            .with_context(|| format!("no snapshot at t = {t}"))
    };
    let mut rays = Vec::new();
    for &ray in &c.rays {
        let (z0, z1) = stationary_points(ray, &p).with_context(|| format!("ray x/t = {ray}"))?;
        let window = c.window.unwrap_or(std::f64::consts::PI / (z1 - z0));
        let samples = fit_times
            .iter()
            .map(|&t| ray_sample(state_at(t)?, ray, window, &s))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let probes = c
            .probe_times
            .iter()
            .map(|&t| ray_sample(state_at(t)?, ray, window, &s))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let ts: Vec<f64> = samples.iter().map(|r| r.t).collect();
        let errs: Vec<f64> = samples.iter().map(|r| r.err).collect();
        let amps: Vec<f64> = samples.iter().map(|r| r.amp_num).collect();
        rays.push(RayReport {
            ray,
            z0,
            z1,
            window,
            error_fit: DecayFit::power_law(&ts, &errs)?,
            amplitude_fit: DecayFit::power_law(&ts, &amps)?,
            samples,
            probes,
        });
    }
    Ok(CompareReport {
        rays,
        run: run.diagnostics,
        poles: spectrum.len(),
    })
}

pub fn cmd_compare(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let report = run_compare(cfg)?;
    let path = out.join("compare.csv");
    let mut rows = Vec::new();
    for r in &report.rays {
        for s in r.samples.iter().chain(&r.probes) {
            rows.push(vec![r.ray, s.t, s.err, s.amp_num, s.amp_asy]);
        }
    }
    write_rows(&path, &["ray", "t", "err", "amp_num", "amp_asy"], rows)?;
    let report_path = out.join("compare.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)?)?;
    let mut warnings = Vec::new();
    if report.run.boundary_flagged {
        warnings.push(format!(
            "simulation reached {:.3e} of its peak near the periodic boundary",
            report.run.boundary_ratio
        ));
    }
    let summary: Vec<Value> = report
        .rays
        .iter()
        .map(|r| json!({ "ray": r.ray, "error_slope": r.error_fit.slope, "amplitude_slope": r.amplitude_fit.slope }))
        .collect();
    Ok(Outcome {
        files: vec![path, report_path],
        diagnostics: json!({ "rays": summary, "run": report.run }),
        warnings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    pub cone: ConeSection,
    pub kept: Vec<usize>,
    pub mu: Option<f64>,
    pub ts: Vec<f64>,
    pub diffs: Vec<f64>,
    /// Fitted exponential decay rate of the difference.
    pub rate: Option<f64>,
    /// `8μ`.
    pub predicted: Option<f64>,
}

/// Full N-soliton against its cone-filtered model on cone sections.
pub fn run_resolution(cfg: &ExperimentConfig) -> anyhow::Result<(Vec<ConeReport>, Vec<String>)> {
    let p = cfg.params()?;
    let r = section(&cfg.resolution, "resolution")?;
    let (_, spectrum) = scattering_data(cfg)?;
    let ts = uniform_grid(r.t_min, r.t_max, r.samples);
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for (ci, cs) in r.cones.iter().enumerate() {
        let cone = cs.to_cone()?;
        let data = cone_filter(&spectrum, &cone, &p)?;
        let filtered = data.filtered_spectrum(&spectrum)?;
        let diffs = ts
            .iter()
            .map(|&t| {
                let (lo, hi) = cone.section(t);
                uniform_grid(lo, hi, r.section_points)
                    .par_iter()
                    .map(|&x| Ok((soliton_q(&spectrum, x, t, &p)? - soliton_q(&filtered, x, t, &p)?).norm()))
                    .collect::<hirota_core::Result<Vec<f64>>>()
                    .map(|v| v.into_iter().fold(0.0, f64::max))
            })
            .collect::<hirota_core::Result<Vec<f64>>>()?;
        let mu = data.mu.is_finite().then_some(data.mu);
        let mut rate = None;
        if mu.is_none() {
            warnings.push(format!("cone {ci}: no pole is excluded, μ is undefined"));
        } else {
            // drop samples that already sit at round-off level
            let (ft, fd): (Vec<f64>, Vec<f64>) = ts.iter().zip(&diffs).filter(|(_, &d)| d > 1e-13).unzip();
            match DecayFit::exponential(&ft, &fd) {
                Ok(fit) => rate = Some(-fit.slope),
                Err(e) => warnings.push(format!("cone {ci}: no decay fit ({e})")),
            }
        }
        reports.push(ConeReport {
            cone: *cs,
            kept: data.k_in.clone(),
            mu,
            ts: ts.clone(),
            diffs,
            rate,
            predicted: mu.map(|m| 8.0 * m),
        });
    }
    Ok((reports, warnings))
}

pub fn cmd_resolution(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let (reports, warnings) = run_resolution(cfg)?;
    let path = out.join("resolution.csv");
    let mut rows = Vec::new();
    for (ci, r) in reports.iter().enumerate() {
        rows.extend(r.ts.iter().zip(&r.diffs).map(|(&t, &d)| vec![ci as f64, t, d]));
    }
    write_rows(&path, &["cone", "t", "diff"], rows)?;
    Ok(Outcome {
        files: vec![path],
        diagnostics: json!({ "cones": reports }),
        warnings,
    })
}

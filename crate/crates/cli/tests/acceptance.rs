//! Acceptance suite: one line per criterion, nonzero exit when any fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use hirota_core::asymptotic::{delta_at, nu_of, pc_coeffs};
use hirota_core::scatter::{reflection_coefficient, scattering_samples, uniform_grid};
use hirota_core::simulate::{evolve, pde_residual};
use hirota_core::soliton::soliton_q;
use hirota_core::spectrum::find_discrete_spectrum;
use hirota_core::{
    stationary_points, Complex64, DiscreteSpectrum, FieldState, InitialProfile, Params, Pole, SearchBox, SimConfig,
};
use hirota_harness::commands::{run_compare, run_resolution, simulate, CompareReport};
use hirota_harness::config::ExperimentConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = anyhow::Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Check);
type NamedProfile = (&'static str, Box<dyn Fn(f64) -> Complex64>);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> anyhow::Result<ExperimentConfig> {
    ExperimentConfig::load(&configs_dir().join(name))
}

fn wide_box() -> SearchBox {
    SearchBox::new(-2.0, 2.0, 0.05, 2.0).unwrap()
}

fn spectrum(poles: &[(Complex64, Complex64)]) -> DiscreteSpectrum {
    DiscreteSpectrum::new(poles.iter().map(|&(z, c)| Pole { z, c }).collect()).unwrap()
}

fn sech_profile(amplitude: f64, points: usize) -> InitialProfile {
    InitialProfile::from_fn(-30.0, 30.0, points, |x| c(amplitude / x.cosh(), 0.0)).unwrap()
}

fn unitarity() -> Check {
    let p = Params::new(1.0, 1.0)?;
    let pair = spectrum(&[(c(0.3, 0.7), c(1.0, 2.0)), (c(-0.4, 0.5), c(0.5, 0.0))]);
    let profiles: Vec<NamedProfile> = vec![
        ("zero", Box::new(|_| c(0.0, 0.0))),
        ("sech", Box::new(|x: f64| c(1.0 / x.cosh(), 0.0))),
        ("sech 2.5 shifted", Box::new(|x: f64| c(2.5 / (x - 1.0).cosh(), 0.0))),
        ("gauss", Box::new(|x: f64| c(0.3 * (-(x / 2.0).powi(2)).exp(), 0.0))),
        ("two-soliton", Box::new(move |x| soliton_q(&pair, x, 0.0, &p).unwrap())),
    ];
    let zs = uniform_grid(-4.0, 4.0, 801);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, f) in &profiles {
        let start = Instant::now();
        let profile = InitialProfile::from_fn(-30.0, 30.0, 4096, f)?;
        let worst = scattering_samples(&profile, &zs)?
            .iter()
            .map(|s| (s.s11.norm_sqr() + s.s21.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max);
        let secs = start.elapsed().as_secs_f64();
        ok &= worst < 1e-6 && secs < 60.0;
        parts.push(format!("{name} {worst:.1e} ({secs:.1}s)"));
    }
    Ok((ok, format!("max ||s11|²+|s21|²−1| at M=4096: {}", parts.join(", "))))
}

fn sech_spectrum() -> Check {
    let zs = uniform_grid(-4.0, 4.0, 401);
    let run = |points: usize| -> anyhow::Result<(DiscreteSpectrum, f64)> {
        let profile = sech_profile(1.0, points);
        let s = find_discrete_spectrum(&profile, wide_box())?;
        let gamma = reflection_coefficient(&profile, &zs)?;
        Ok((s, gamma.max_abs()))
    };
    let (base, g_base) = run(4096)?;
    let (fine, g_fine) = run(16384)?;
    let target = c(0.0, 0.5);
    let single = |s: &DiscreteSpectrum| s.len() == 1 && (s.poles()[0].z - target).norm() < 1e-6;
    let ok = single(&base) && single(&fine) && g_base < 1e-6 && g_fine < 1e-6;
    let err = |s: &DiscreteSpectrum| s.poles().first().map_or(f64::NAN, |p| (p.z - target).norm());
    Ok((
        ok,
        format!(
            "eigenvalues {}/{} (M=4096/16384), |z−i/2| {:.1e}/{:.1e}, max|γ| {:.1e}/{:.1e}",
            base.len(),
            fine.len(),
            err(&base),
            err(&fine),
            g_base,
            g_fine
        ),
    ))
}

fn round_trip() -> Check {
    let p = Params::new(1.0, 1.0)?;
    let (z, cn) = (c(0.3, 0.7), c(1.0, 2.0));
    let s = spectrum(&[(z, cn)]);
    let profile = InitialProfile::from_fn(-30.0, 30.0, 4096, |x| soliton_q(&s, x, 0.0, &p).unwrap())?;
    let found = find_discrete_spectrum(&profile, wide_box())?;
    if found.len() != 1 {
        return Ok((false, format!("recovered {} eigenvalues instead of 1", found.len())));
    }
    let pole = found.poles()[0];
    let dz = (pole.z - z).norm();
    let dc = (pole.c - cn).norm() / cn.norm();
    Ok((dz < 1e-5 && dc < 1e-3, format!("|Δz| {dz:.1e}, |Δc|/|c| {dc:.1e}")))
}

/// Travelling wave `a sech(a(x − x0 − vt)) e^{i(kx + Ωt + φ)}` with `a = 2η`, `k = −2ξ`;
/// speed and frequency come from substituting the ansatz into the equation.
fn travelling_wave(z: Complex64, cn: Complex64, x: f64, t: f64, p: &Params) -> Complex64 {
    let (a, k) = (2.0 * z.im, -2.0 * z.re);
    let v = 2.0 * p.alpha * k + p.beta * a * a - 3.0 * p.beta * k * k;
    let omega = p.alpha * (a * a - k * k) + p.beta * (k.powi(3) - 3.0 * k * a * a);
    let x0 = (cn.norm() / a).ln() / a;
    let phase = k * x + omega * t - cn.arg() - PI / 2.0;
    c(0.0, phase).exp() * (a / (a * (x - x0 - v * t)).cosh())
}

fn one_soliton() -> Check {
    let p = Params::new(1.0, 0.5)?;
    let (z, cn) = (c(0.3, 0.7), c(1.0, 2.0));
    let s = spectrum(&[(z, cn)]);
    let t = 0.5;
    let field = |t: f64| FieldState::from_fn(32.0, 2048, t, |x| soliton_q(&s, x, t, &p).unwrap());
    let mid = field(t)?;
    let closed = mid
        .xs()
        .iter()
        .zip(&mid.q)
        .map(|(&x, q)| (q - travelling_wave(z, cn, x, t, &p)).norm())
        .fold(0.0, f64::max);
    let residual = |dt: f64| -> anyhow::Result<f64> { Ok(pde_residual(&field(t - dt)?, &mid, &field(t + dt)?, &p)?) };
    let (coarse, fine) = (residual(1e-3)?, residual(1e-4)?);
    Ok((
        closed < 1e-10 && fine < 1e-6,
        format!("max|solver − closed form| {closed:.1e} on 2048 points; residual {fine:.1e} (dt=1e-4), {coarse:.1e} (dt=1e-3)"),
    ))
}

fn separation() -> Check {
    let cfg = load("soliton_pair.json")?;
    let (reports, warnings) = run_resolution(&cfg)?;
    let r = reports.first().ok_or_else(|| anyhow::anyhow!("no cone configured"))?;
    let (Some(rate), Some(predicted)) = (r.rate, r.predicted) else {
        return Ok((false, format!("no decay rate: {}", warnings.join("; "))));
    };
    Ok((
        rate >= 0.8 * predicted,
        format!(
            "fitted rate {rate:.4} vs 8μ = {predicted:.4} over t∈[{}, {}]",
            r.ts[0],
            r.ts[r.ts.len() - 1]
        ),
    ))
}

fn pc_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut product, mut modulus) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let r = rng.random_range(1e-3..3.0);
        let phase = rng.random_range(-PI..PI);
        let gamma = Complex64::from_polar(r, phase);
        let nu = nu_of(gamma);
        let pc = pc_coeffs(gamma, nu)?;
        product = product.max((pc.beta12 * pc.beta21 - nu).norm());
        modulus = modulus.max((pc.beta12.norm_sqr() + nu).abs());
    }
    Ok((
        product < 1e-12 && modulus < 1e-12,
        format!("100 samples: max|β₁₂β₂₁ − ν| {product:.1e}, max||β₁₂|² + ν| {modulus:.1e}"),
    ))
}

fn delta_jump() -> Check {
    let cfg = load("radiation.json")?;
    let p = cfg.params()?;
    let profile = hirota_harness::profile::scattering_profile(&cfg)?;
    let gamma = reflection_coefficient(&profile, &hirota_harness::profile::reflection_grid(&cfg)?)?;
    let ray = cfg.compare.as_ref().map_or(-1.0, |c| c.rays[0]);
    let (z0, z1) = stationary_points(ray, &p)?;
    let margin = 0.1 * (z1 - z0);
    let us = uniform_grid(z0 + margin, z1 - margin, 20);
    let worst = |eps: f64| -> anyhow::Result<f64> {
        let mut w = 0.0f64;
        for &u in &us {
            let ratio = delta_at(c(u, eps), &gamma, z0, z1)? / delta_at(c(u, -eps), &gamma, z0, z1)?;
            w = w.max((ratio - (1.0 + gamma.value(u).norm_sqr())).norm());
        }
        Ok(w)
    };
    let at_spec = worst(1e-4)?;
    let closer = worst(1e-6)?;
    Ok((
        at_spec < 1e-4,
        format!(
            "20 points in ({z0:.4}, {z1:.4}), max|γ| {:.2}: worst {at_spec:.2e} at ε=1e-4 ({closer:.2e} at ε=1e-6)",
            gamma.max_abs()
        ),
    ))
}

fn compare_report() -> &'static anyhow::Result<CompareReport> {
    static REPORT: OnceLock<anyhow::Result<CompareReport>> = OnceLock::new();
    REPORT.get_or_init(|| run_compare(&load("radiation.json")?))
}

fn shared_report() -> anyhow::Result<&'static CompareReport> {
    compare_report()
        .as_ref()
        .map_err(|e| anyhow::anyhow!("compare run failed: {e:#}"))
}

fn amplitude_law() -> Check {
    let report = shared_report()?;
    let ray = &report.rays[0];
    let slope = ray.amplitude_fit.slope;
    let probe = ray
        .probes
        .iter()
        .find(|s| (s.t - 100.0).abs() < 1e-9)
        .ok_or_else(|| anyhow::anyhow!("no probe at t = 100"))?;
    let ratio = probe.amp_num / probe.amp_asy;
    Ok((
        (slope + 0.5).abs() <= 0.05 && (0.8..=1.25).contains(&ratio),
        format!(
            "ray x/t={}: amplitude slope {slope:.3}, |q_num|/(t^-1/2|f|) at t=100 {ratio:.4}",
            ray.ray
        ),
    ))
}

fn error_order() -> Check {
    let report = shared_report()?;
    let ray = &report.rays[0];
    let slope = ray.error_fit.slope;
    let errs: Vec<String> = ray.samples.iter().map(|s| format!("{:.2e}", s.err)).collect();
    Ok((
        (-1.1..=-0.55).contains(&slope),
        format!(
            "error slope {slope:.3} (r²={:.3}), errors {}",
            ray.error_fit.r2,
            errs.join(" ")
        ),
    ))
}

fn plane_wave_error() -> anyhow::Result<f64> {
    let p = Params::new(1.0, 1.0)?;
    let (amp, k) = (0.5, 1.0);
    let omega = p.alpha * k * k - 2.0 * p.alpha * amp * amp - p.beta * k.powi(3) + 6.0 * p.beta * k * amp * amp;
    let exact = |x: f64, t: f64| c(0.0, k * x - omega * t).exp() * amp;
    let q0 = FieldState::from_fn(16.0 * PI, 256, 0.0, |x| exact(x, 0.0))?;
    let cfg = SimConfig::new(16.0 * PI, 256, 1e-3, 1.0)?;
    let run = evolve(&q0, &cfg, &p, &[])?;
    let st = &run.final_state;
    Ok(st
        .xs()
        .iter()
        .zip(&st.q)
        .map(|(&x, q)| (q - exact(x, st.t)).norm())
        .fold(0.0, f64::max))
}

fn conservation() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut names: Vec<_> = std::fs::read_dir(configs_dir())?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    for name in names {
        let cfg = load(&name)?;
        if cfg.simulation.is_none() {
            continue;
        }
        let drift = if cfg.compare.is_some() {
            shared_report()?.run.mass_drift
        } else {
            simulate(&cfg, &[])?.diagnostics.mass_drift
        };
        ok &= drift < 1e-8;
        parts.push(format!("{name} {drift:.1e}"));
    }
    let wave = plane_wave_error()?;
    ok &= wave < 1e-8 && !parts.is_empty();
    Ok((
        ok,
        format!("I₁ drift: {}; plane wave error at t=1 {wave:.1e}", parts.join(", ")),
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("scattering unitarity", unitarity),
        ("sech spectrum", sech_spectrum),
        ("spectral round trip", round_trip),
        ("one-soliton consistency", one_soliton),
        ("soliton separation", separation),
        ("parabolic-cylinder identities", pc_identities),
        ("conjugation factor jump", delta_jump),
        ("radiation amplitude law", amplitude_law),
        ("radiation error order", error_order),
        ("conservation", conservation),
    ];
    let mut failed = Vec::new();
    for (j, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e:#}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {:>2} [{}] {name}: {detail} [{secs:.1}s]",
            j + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed.push(j + 1);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}

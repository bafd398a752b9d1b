//! Builtin and CSV initial profiles.

use anyhow::Context;
use hirota_core::scatter::{reflection_coefficient, uniform_grid};
use hirota_core::soliton::soliton_q;
use hirota_core::spectrum::find_discrete_spectrum;
use hirota_core::{Complex64, DiscreteSpectrum, InitialProfile, Params, Pole, ReflectionCoefficient, SearchBox};

use crate::config::{ExperimentConfig, ProfileSpec};
use crate::io::read_profile;

pub type ProfileFn = Box<dyn Fn(f64) -> Complex64 + Send + Sync>;

pub fn poles_of(spec: &ProfileSpec) -> anyhow::Result<Option<DiscreteSpectrum>> {
    match spec {
        ProfileSpec::Soliton { poles } => {
            let poles = poles
                .iter()
                .map(|p| Pole {
                    z: Complex64::new(p.z[0], p.z[1]),
                    c: Complex64::new(p.c[0], p.c[1]),
                })
                .collect();
            Ok(Some(DiscreteSpectrum::new(poles)?))
        }
        _ => Ok(None),
    }
}

/// `q(x, 0)` for the configured profile.
pub fn profile_fn(spec: &ProfileSpec, p: &Params) -> anyhow::Result<ProfileFn> {
    Ok(match spec {
        ProfileSpec::Zero => Box::new(|_| Complex64::new(0.0, 0.0)),
        &ProfileSpec::Sech { amplitude, center } => {
            Box::new(move |x| Complex64::new(amplitude / (x - center).cosh(), 0.0))
        }
        &ProfileSpec::Gauss { amplitude, width } => {
            Box::new(move |x| Complex64::new(amplitude * (-(x / width).powi(2)).exp(), 0.0))
        }
        ProfileSpec::Soliton { .. } => {
            let s = poles_of(spec)?.expect("soliton profile");
            let p = *p;
            // the solver only fails for configurations rejected up front
            Box::new(move |x| soliton_q(&s, x, 0.0, &p).unwrap_or(Complex64::new(f64::NAN, f64::NAN)))
        }
        ProfileSpec::Csv { path } => {
            let spline = read_profile(path)?;
            Box::new(move |x| spline.eval(x).unwrap_or(Complex64::new(0.0, 0.0)))
        }
    })
}

pub fn require_profile(cfg: &ExperimentConfig) -> anyhow::Result<&ProfileSpec> {
    cfg.profile.as_ref().context("config has no `profile` section")
}

/// The profile sampled on the scattering grid `[−L, L]`.
pub fn scattering_profile(cfg: &ExperimentConfig) -> anyhow::Result<InitialProfile> {
    let spec = require_profile(cfg)?;
    let grid = cfg.grid.context("config has no `grid` section")?;
    let f = profile_fn(spec, &cfg.params()?)?;
    let profile = InitialProfile::from_fn(-grid.half_width, grid.half_width, grid.points, f)?;
    if let Some(j) = profile
        .samples()
        .iter()
        .position(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        anyhow::bail!("profile sample {j} is not finite");
    }
    Ok(profile)
}

pub fn reflection_grid(cfg: &ExperimentConfig) -> anyhow::Result<Vec<f64>> {
    let r = cfg.reflection.context("config has no `reflection` section")?;
    Ok(uniform_grid(r.z_min, r.z_max, r.points))
}

pub fn search_box(cfg: &ExperimentConfig) -> anyhow::Result<SearchBox> {
    let b = cfg.search_box.context("config has no `search_box` section")?;
    Ok(SearchBox::new(b.re_min, b.re_max, b.im_min, b.im_max)?)
}

/// Reflection coefficient and discrete spectrum. Soliton profiles use their
/// exact data; everything else goes through direct scattering.
pub fn scattering_data(cfg: &ExperimentConfig) -> anyhow::Result<(ReflectionCoefficient, DiscreteSpectrum)> {
    let spec = require_profile(cfg)?;
    if let Some(s) = poles_of(spec)? {
        let (lo, hi) = match cfg.reflection {
            Some(r) => (r.z_min, r.z_max),
            None => (-1.0, 1.0),
        };
        return Ok((ReflectionCoefficient::zero(lo, hi)?, s));
    }
    let profile = scattering_profile(cfg)?;
    let gamma = reflection_coefficient(&profile, &reflection_grid(cfg)?)?;
    let spectrum = find_discrete_spectrum(&profile, search_box(cfg)?)?;
    Ok((gamma, spectrum))
}

//! Experiment configuration (JSON, unknown keys rejected).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hirota_core::{AntidiagonalSign, Cone, Params, SearchBox};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: ParamsSection,
    #[serde(default)]
    pub profile: Option<ProfileSpec>,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub reflection: Option<ReflectionSection>,
    #[serde(default)]
    pub search_box: Option<SearchBoxSection>,
    #[serde(default)]
    pub soliton_field: Option<SolitonFieldSection>,
    #[serde(default)]
    pub simulation: Option<SimulationSection>,
    #[serde(default)]
    pub asymptotics: Option<AsymptoticsSection>,
    #[serde(default)]
    pub compare: Option<CompareSection>,
    #[serde(default)]
    pub cone: Option<ConeSection>,
    #[serde(default)]
    pub resolution: Option<ResolutionSection>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    pub beta: f64,
}

/// `[re, im]`.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSpec {
    pub z: ComplexPair,
    pub c: ComplexPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Zero,
    Sech {
        amplitude: f64,
        #[serde(default)]
        center: f64,
    },
    Gauss {
        amplitude: f64,
        width: f64,
    },
    Soliton {
        poles: Vec<PoleSpec>,
    },
    /// CSV with header `x,re_q,im_q` on a uniform grid.
    Csv {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectionSection {
    pub z_min: f64,
    pub z_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBoxSection {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonFieldSection {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub times: Vec<f64>,
}

fn default_dealias() -> f64 {
    2.0 / 3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub half_width: f64,
    pub modes: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    #[serde(default = "default_dealias")]
    pub dealias: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignChoice {
    #[default]
    Plus,
    Minus,
}

impl From<SignChoice> for AntidiagonalSign {
    fn from(s: SignChoice) -> Self {
        match s {
            SignChoice::Plus => AntidiagonalSign::Plus,
            SignChoice::Minus => AntidiagonalSign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsSection {
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub antidiagonal_sign: SignChoice,
}

fn default_factor() -> f64 {
    1.3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    /// Ray speeds `x/t`.
    pub rays: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    #[serde(default = "default_factor")]
    pub factor: f64,
    #[serde(default)]
    pub probe_times: Vec<f64>,
    /// Half-width of the window around `x = vt`; defaults to `π/(z1 − z0)`.
    #[serde(default)]
    pub window: Option<f64>,
    #[serde(default)]
    pub antidiagonal_sign: SignChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSection {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl ConeSection {
    pub fn to_cone(&self) -> hirota_core::Result<Cone> {
        Cone::new(self.x1, self.x2, self.v1, self.v2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionSection {
    pub cones: Vec<ConeSection>,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub section_points: usize,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("config does not match the schema")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn params(&self) -> hirota_core::Result<Params> {
        Params::new(self.params.alpha, self.params.beta)
    }

    /// Structural checks that do not need any computation.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.params()?;
        if let Some(ProfileSpec::Gauss { width, .. }) = &self.profile {
            if !(*width > 0.0) {
                bail!("profile.width must be positive");
            }
        }
        if let Some(g) = &self.grid {
            if !(g.half_width > 0.0) || g.points < 4 {
                bail!("grid needs half_width > 0 and at least 4 points");
            }
        }
        if let Some(r) = &self.reflection {
            if !(r.z_max > r.z_min) || r.points < 2 {
                bail!("reflection needs z_min < z_max and at least 2 points");
            }
        }
        if let Some(b) = &self.search_box {
            SearchBox::new(b.re_min, b.re_max, b.im_min, b.im_max)?;
        }
        if let Some(s) = &self.soliton_field {
            if !(s.x_max > s.x_min) || s.points < 2 {
                bail!("soliton_field needs x_min < x_max and at least 2 points");
            }
        }
        if let Some(s) = &self.simulation {
            let sim = hirota_core::SimConfig::new(s.half_width, s.modes, s.dt, s.t_end)?.with_dealias(s.dealias)?;
            if let Some(&bad) = s.snapshots.iter().find(|&&t| !(0.0..=sim.t_end).contains(&t)) {
                bail!("simulation snapshot {bad} lies outside [0, t_end]");
            }
        }
        if let Some(c) = &self.compare {
            if c.rays.is_empty() {
                bail!("compare.rays is empty");
            }
            if !(c.t_min > 0.0 && c.t_max > c.t_min && c.factor > 1.0) {
                bail!("compare needs 0 < t_min < t_max and factor > 1");
            }
            if let Some(w) = c.window {
                if !(w > 0.0) {
                    bail!("compare.window must be positive");
                }
            }
        }
        if let Some(c) = &self.cone {
            c.to_cone()?;
        }
        if let Some(r) = &self.resolution {
            for c in &r.cones {
                c.to_cone()?;
            }
            if !(r.t_max > r.t_min) || r.samples < 5 || r.section_points < 2 {
                bail!("resolution needs t_min < t_max, at least 5 samples and 2 section points");
            }
        }
        Ok(())
    }
}

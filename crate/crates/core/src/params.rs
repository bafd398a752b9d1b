//! Equation parameters, the phase function and the quantities derived from it.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dispersion coefficients of the Hirota equation
/// `i q_t + α (q_xx + 2|q|² q) + i β (q_xxx + 6|q|² q_x) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "dispersion coefficients must be finite (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// The long-time analysis needs third-order dispersion.
    pub fn require_positive_beta(&self) -> Result<()> {
        if self.beta > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "beta must be positive for the asymptotic analysis (got {})",
                self.beta
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    pub x: f64,
    pub t: f64,
}

impl SpaceTimePoint {
    pub fn new(x: f64, t: f64) -> Self {
        Self { x, t }
    }

    pub fn ratio(&self) -> Result<f64> {
        if self.t == 0.0 {
            return Err(Error::Domain("x/t is undefined at t = 0".into()));
        }
        Ok(self.x / self.t)
    }
}

/// Space-time region `x1 + v1 t <= x <= x2 + v2 t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl Cone {
    pub fn new(x1: f64, x2: f64, v1: f64, v2: f64) -> Result<Self> {
        if ![x1, x2, v1, v2].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("cone bounds must be finite".into()));
        }
        if x1 > x2 || v1 > v2 {
            return Err(Error::InvalidInput(format!(
                "cone requires x1 <= x2 and v1 <= v2 (got x1={x1}, x2={x2}, v1={v1}, v2={v2})"
            )));
        }
        Ok(Self { x1, x2, v1, v2 })
    }

    /// Cross-section `[x1 + v1 t, x2 + v2 t]` at time `t >= 0`.
    pub fn section(&self, t: f64) -> (f64, f64) {
        (self.x1 + self.v1 * t, self.x2 + self.v2 * t)
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        let (lo, hi) = self.section(t);
        lo <= x && x <= hi
    }

    /// Distance from a velocity to `[v1, v2]`, zero inside.
    pub fn speed_distance(&self, v: f64) -> f64 {
        if v < self.v1 {
            self.v1 - v
        } else if v > self.v2 {
            v - self.v2
        } else {
            0.0
        }
    }
}

/// `θ(z) = z·(x/t) + 2α z² + 4β z³`.
pub fn phase_theta(z: Complex64, point: SpaceTimePoint, p: &Params) -> Result<Complex64> {
    let xi = point.ratio()?;
    Ok(theta_xi(z, xi, p))
}

pub(crate) fn theta_xi(z: Complex64, xi: f64, p: &Params) -> Complex64 {
    z * (xi + z * (2.0 * p.alpha + 4.0 * p.beta * z))
}

/// `t·θ(z) = z x + 2α z² t + 4β z³ t`, well defined at `t = 0`.
pub fn t_theta(z: Complex64, x: f64, t: f64, p: &Params) -> Complex64 {
    z * (x + z * t * (2.0 * p.alpha + 4.0 * p.beta * z))
}

/// Real critical points `z0 < z1` of the phase `θ` at `xi = x/t`.
pub fn stationary_points(xi: f64, p: &Params) -> Result<(f64, f64)> {
    p.require_positive_beta()?;
    if !xi.is_finite() {
        return Err(Error::InvalidInput(format!("x/t must be finite (got {xi})")));
    }
    let disc = p.alpha * p.alpha - 3.0 * p.beta * xi;
    if disc <= 0.0 {
        return Err(Error::NoRealPhasePoints { xi, discriminant: disc });
    }
    let root = disc.sqrt();
    // Pair the larger-magnitude root with the Vieta product to avoid cancellation.
    let (z0, z1) = if p.alpha >= 0.0 {
        let s = p.alpha + root;
        (-s / (6.0 * p.beta), -xi / (2.0 * s))
    } else {
        let s = root - p.alpha;
        (xi / (2.0 * s), s / (6.0 * p.beta))
    };
    Ok((z0, z1))
}

/// `sqrt(α² − 3β x/t)`, equal to `|α + 6β z_e|` at either stationary point.
pub fn discriminant_root(xi: f64, p: &Params) -> Result<f64> {
    p.require_positive_beta()?;
    let disc = p.alpha * p.alpha - 3.0 * p.beta * xi;
    if disc <= 0.0 {
        return Err(Error::NoRealPhasePoints { xi, discriminant: disc });
    }
    Ok(disc.sqrt())
}

/// Velocity `dx/dt` of the envelope of the one-soliton attached to `zk = ξ + iη`.
pub fn soliton_speed(zk: Complex64, p: &Params) -> f64 {
    let (xi, eta) = (zk.re, zk.im);
    -4.0 * p.alpha * xi - 4.0 * p.beta * (3.0 * xi * xi - eta * eta)
}

//! Direct scattering: Jost solutions, scattering coefficients and the reflection coefficient.
//!
//! Jost columns are propagated cell by cell with a fourth-order Magnus
//! integrator of `ψ_x = (−izσ₃ + Q)ψ`, using the exact exponential of the
//! traceless cell generator and re-applying the plane-wave normalisation after
//! every cell.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mat2::{det2, Mat2, Vec2};
use crate::spline::ComplexSpline;

const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;
/// Below this `|s11|` on the real axis a run is treated as hitting a spectral singularity.
pub const SINGULARITY_THRESHOLD: f64 = 1e-6;
const MAX_CELL_PHASE: f64 = 2.0;

/// Initial datum `q0` sampled on a uniform grid `x_j = x0 + j h`.
#[derive(Debug, Clone)]
pub struct InitialProfile {
    x0: f64,
    h: f64,
    q: Vec<Complex64>,
    gauss_lo: Vec<Complex64>,
    gauss_hi: Vec<Complex64>,
    anchor: usize,
}

// Gauss–Legendre nodes on [0, 1].
const GAUSS_LO: f64 = 0.5 - 0.288_675_134_594_812_9;
const GAUSS_HI: f64 = 0.5 + 0.288_675_134_594_812_9;

fn lagrange_weights(s: f64) -> [f64; 4] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

impl InitialProfile {
    pub fn new(x0: f64, h: f64, q: Vec<Complex64>) -> Result<Self> {
        Self::with_tail_tolerance(x0, h, q, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn with_tail_tolerance(x0: f64, h: f64, q: Vec<Complex64>, tail_tolerance: f64) -> Result<Self> {
        if q.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "profile needs at least 4 samples (got {})",
                q.len()
            )));
        }
        if !(h > 0.0 && h.is_finite() && x0.is_finite()) {
            return Err(Error::InvalidInput(format!("invalid grid origin {x0} / spacing {h}")));
        }
        if let Some(j) = q.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput(format!("profile sample {j} is not finite")));
        }
        let last = q.len() - 1;
        let tail = q[0].norm().max(q[last].norm());
        if tail > tail_tolerance {
            return Err(Error::InvalidInput(format!(
                "profile does not decay at the grid ends: |q| = {tail:.3e} exceeds {tail_tolerance:.1e}"
            )));
        }
        let at = |j: isize| -> Complex64 {
            if j < 0 || j as usize > last {
                Complex64::new(0.0, 0.0)
            } else {
                q[j as usize]
            }
        };
        let wl = lagrange_weights(GAUSS_LO);
        let wh = lagrange_weights(GAUSS_HI);
        let mut gauss_lo = Vec::with_capacity(last);
        let mut gauss_hi = Vec::with_capacity(last);
        for j in 0..last as isize {
            let pts = [at(j - 1), at(j), at(j + 1), at(j + 2)];
            gauss_lo.push(pts.iter().zip(wl).map(|(p, w)| p * w).sum());
            gauss_hi.push(pts.iter().zip(wh).map(|(p, w)| p * w).sum());
        }
        let anchor = ((-x0 / h).round().max(0.0) as usize).min(last);
        Ok(Self {
            x0,
            h,
            q,
            gauss_lo,
            gauss_hi,
            anchor,
        })
    }

    /// Samples `f` on `points` uniformly spaced nodes spanning `[x_min, x_max]`.
    pub fn from_fn(x_min: f64, x_max: f64, points: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if points < 4 || !(x_max > x_min) {
            return Err(Error::InvalidInput(format!(
                "bad sampling window [{x_min}, {x_max}] with {points} points"
            )));
        }
        let h = (x_max - x_min) / (points - 1) as f64;
        let q = (0..points).map(|j| f(x_min + j as f64 * h)).collect();
        Self::new(x_min, h, q)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.h
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.q
    }

    /// Half-width of the sampled window; the datum is taken as zero outside it.
    pub fn decay_pad(&self) -> f64 {
        self.x0.abs().max(self.x(self.len() - 1).abs())
    }

    /// Grid node at which Wronskians are evaluated (the node closest to `x = 0`).
    pub fn anchor_x(&self) -> f64 {
        self.x(self.anchor)
    }

    fn max_abs(&self) -> f64 {
        self.q.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_resolution(&self, z: Complex64) -> Result<()> {
        let phase = self.h * (z.norm() + self.max_abs());
        if phase > MAX_CELL_PHASE {
            return Err(Error::accuracy(
                format!("Jost integration at z = {z} (grid too coarse)"),
                phase,
                MAX_CELL_PHASE,
            ));
        }
        Ok(())
    }

    // Propagators across cell j for spectral parameter z: (forward, backward).
    fn cell(&self, j: usize, z: Complex64) -> (Mat2, Mat2) {
        let iz = Complex64::i() * z;
        let (qa, qb) = (self.gauss_lo[j], self.gauss_hi[j]);
        let a1 = Mat2::new(-iz, qa, -qa.conj(), iz);
        let a2 = Mat2::new(-iz, qb, -qb.conj(), iz);
        let h = self.h;
        let comm = a2 * a1 - a1 * a2;
        let omega =
            (a1 + a2).scale(Complex64::new(0.5 * h, 0.0)) + comm.scale(Complex64::new(3f64.sqrt() / 12.0 * h * h, 0.0));
        omega.exp_traceless()
    }

    /// Column of `φ₋` at the anchor, started from `e_col` at the left end.
    fn left_column(&self, z: Complex64, col: usize) -> Vec2 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut v = if col == 0 { [one, zero] } else { [zero, one] };
        let shift = (Complex64::i() * z * self.h * if col == 0 { 1.0 } else { -1.0 }).exp();
        for j in 0..self.anchor {
            let (fwd, _) = self.cell(j, z);
            let w = fwd.apply(v);
            v = [w[0] * shift, w[1] * shift];
        }
        v
    }

    /// Column of `φ₊` at the anchor, started from `e_col` at the right end.
    fn right_column(&self, z: Complex64, col: usize) -> Vec2 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut v = if col == 0 { [one, zero] } else { [zero, one] };
        let shift = (Complex64::i() * z * self.h * if col == 0 { -1.0 } else { 1.0 }).exp();
        for j in (self.anchor..self.len() - 1).rev() {
            let (_, bwd) = self.cell(j, z);
            let w = bwd.apply(v);
            v = [w[0] * shift, w[1] * shift];
        }
        v
    }
}

/// Normalised Jost matrices `φ₋`, `φ₊` at the anchor node, for real `z`.
#[derive(Debug, Clone, Copy)]
pub struct JostPair {
    pub anchor_x: f64,
    pub minus: Mat2,
    pub plus: Mat2,
}

pub fn jost_pair(profile: &InitialProfile, z: f64) -> Result<JostPair> {
    let zc = Complex64::new(z, 0.0);
    profile.check_resolution(zc)?;
    let minus = Mat2::from_columns(profile.left_column(zc, 0), profile.left_column(zc, 1));
    let plus = Mat2::from_columns(profile.right_column(zc, 0), profile.right_column(zc, 1));
    let err = (minus.det() - 1.0).norm().max((plus.det() - 1.0).norm());
    if err > 1e-10 {
        return Err(Error::accuracy(format!("Jost determinant at z = {z}"), err, 1e-10));
    }
    Ok(JostPair {
        anchor_x: profile.anchor_x(),
        minus,
        plus,
    })
}

/// The columns `φ₋,₁` and `φ₊,₂` (analytic in the upper half-plane) at the anchor.
pub fn analytic_columns(profile: &InitialProfile, z: Complex64) -> Result<(Vec2, Vec2)> {
    if z.im < 0.0 {
        return Err(Error::Domain(format!("analytic Jost columns need Im z >= 0 (got {z})")));
    }
    profile.check_resolution(z)?;
    Ok((profile.left_column(z, 0), profile.right_column(z, 1)))
}

/// `s11(z) = det[φ₋,₁, φ₊,₂]` for `Im z >= 0`.
pub fn s11_at(profile: &InitialProfile, z: Complex64) -> Result<Complex64> {
    let (left, right) = analytic_columns(profile, z)?;
    Ok(det2(left, right))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSample {
    pub z: f64,
    pub s11: Complex64,
    pub s21: Complex64,
}

/// `(s11, s21)` on the real axis, from `φ₋ = φ₊ e^{−izxσ₃} S e^{izxσ₃}`.
pub fn scattering_coeffs(profile: &InitialProfile, z: f64) -> Result<ScatteringSample> {
    let pair = jost_pair(profile, z)?;
    Ok(sample_from_pair(&pair, z))
}

fn sample_from_pair(pair: &JostPair, z: f64) -> ScatteringSample {
    let s11 = det2(pair.minus.column(0), pair.plus.column(1));
    let wr = det2(pair.plus.column(0), pair.minus.column(0));
    let s21 = wr * Complex64::new(0.0, -2.0 * z * pair.anchor_x).exp();
    ScatteringSample { z, s11, s21 }
}

/// `s22 = det[φ₊,₁, φ₋,₂]` on the real axis, computed independently of `s11`.
pub fn s22_at(profile: &InitialProfile, z: f64) -> Result<Complex64> {
    let pair = jost_pair(profile, z)?;
    Ok(det2(pair.plus.column(0), pair.minus.column(1)))
}

/// `s12`, read off the same Wronskian relation as `s21`.
pub fn s12_at(profile: &InitialProfile, z: f64) -> Result<Complex64> {
    let pair = jost_pair(profile, z)?;
    let wr = det2(pair.minus.column(1), pair.plus.column(1));
    Ok(wr * Complex64::new(0.0, 2.0 * z * pair.anchor_x).exp())
}

pub fn scattering_samples(profile: &InitialProfile, zs: &[f64]) -> Result<Vec<ScatteringSample>> {
    zs.par_iter().map(|&z| scattering_coeffs(profile, z)).collect()
}

/// `γ(z) = s21(z)/s11(z)` on a real grid, with a cubic interpolant between nodes.
#[derive(Debug, Clone)]
pub struct ReflectionCoefficient {
    spline: ComplexSpline,
}

impl ReflectionCoefficient {
    pub fn new(zs: Vec<f64>, gamma: Vec<Complex64>) -> Result<Self> {
        if let Some(j) = gamma.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput(format!("reflection sample {j} is not finite")));
        }
        Ok(Self {
            spline: ComplexSpline::new(zs, gamma)?,
        })
    }

    /// Identically zero reflection on `[z_min, z_max]`.
    pub fn zero(z_min: f64, z_max: f64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(vec![z_min, z_max], vec![zero, zero])
    }

    pub fn zs(&self) -> &[f64] {
        self.spline.nodes()
    }

    pub fn gamma(&self) -> &[Complex64] {
        self.spline.values()
    }

    pub fn covers(&self, z: f64) -> bool {
        self.spline.contains(z)
    }

    /// Largest sample modulus at either end of the window.
    pub fn edge_magnitude(&self) -> f64 {
        let g = self.gamma();
        g[0].norm().max(g[g.len() - 1].norm())
    }

    /// Interpolated `γ(z)`, taken as zero outside the sampled window.
    pub fn value(&self, z: f64) -> Complex64 {
        self.spline.eval(z).unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub fn reflection_coefficient(profile: &InitialProfile, zs: &[f64]) -> Result<ReflectionCoefficient> {
    let samples = scattering_samples(profile, zs)?;
    reflection_from_samples(&samples)
}

pub fn reflection_from_samples(samples: &[ScatteringSample]) -> Result<ReflectionCoefficient> {
    let mut gamma = Vec::with_capacity(samples.len());
    for s in samples {
        let modulus = s.s11.norm();
        if modulus < SINGULARITY_THRESHOLD {
            return Err(Error::SpectralSingularitySuspected { z: s.z, modulus });
        }
        gamma.push(s.s21 / s.s11);
    }
    ReflectionCoefficient::new(samples.iter().map(|s| s.z).collect(), gamma)
}

/// Uniform grid of `points` nodes on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a];
    }
    let h = (b - a) / (points - 1) as f64;
    (0..points).map(|j| a + j as f64 * h).collect()
}

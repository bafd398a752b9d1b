//! Long-time asymptotics in the region with two real stationary points:
//! conjugation factors, parabolic-cylinder constants and the leading term
//! `q ≈ q_sol + t^{-1/2} f(x, t)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::params::{discriminant_root, stationary_points, t_theta, Cone, Params, SpaceTimePoint};
use crate::quadrature::{integrate, Tolerance};
use crate::scatter::ReflectionCoefficient;
use crate::soliton::{
    cone_filter, modified_constants_with, solve_reflectionless, trace_s11, RadiationFactor, TriangleSplit,
};
use crate::special::log_gamma;
use crate::spectrum::DiscreteSpectrum;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `ν = −log(1 + |γ|²) / 2π`.
pub fn nu_of(gamma: Complex64) -> f64 {
    -gamma.norm_sqr().ln_1p() / (2.0 * PI)
}

fn check_interval(z0: f64, z1: f64) -> Result<()> {
    if !(z0 < z1) || !z0.is_finite() || !z1.is_finite() {
        return Err(Error::InvalidInput(format!("need z0 < z1 (got {z0}, {z1})")));
    }
    Ok(())
}

// i ∫_{z0}^{z1} ν(s)/(s − z) ds, split as ν(u) log((z1−z)/(z0−z)) + ∫ (ν(s) − ν(u))/(s − z) ds.
fn delta_exponent(z: Complex64, gamma: &ReflectionCoefficient, z0: f64, z1: f64, tol: Tolerance) -> Result<Complex64> {
    check_interval(z0, z1)?;
    if z.im.abs() < 1e-12 * (1.0 + z.norm()) && z.re >= z0 && z.re <= z1 {
        return Err(Error::accuracy(
            format!("δ at {z} (on the jump interval)"),
            z.im.abs(),
            1e-12,
        ));
    }
    let u = z.re.clamp(z0, z1);
    let nu_u = nu_of(gamma.value(u));
    let log_ratio = ((z1 - z) / (z0 - z)).ln();
    let f = |s: f64| c(nu_of(gamma.value(s)) - nu_u, 0.0) / (s - z);
    let integral = integrate(f, z0, z1, &[u], tol)?.value;
    Ok(Complex64::i() * (nu_u * log_ratio + integral))
}

/// `δ(z) = exp[(1/2πi) ∫_{z0}^{z1} log(1+|γ(s)|²)/(s − z) ds]`.
pub fn delta_at(z: Complex64, gamma: &ReflectionCoefficient, z0: f64, z1: f64) -> Result<Complex64> {
    delta_at_with(z, gamma, z0, z1, Tolerance::default())
}

pub fn delta_at_with(
    z: Complex64,
    gamma: &ReflectionCoefficient,
    z0: f64,
    z1: f64,
    tol: Tolerance,
) -> Result<Complex64> {
    Ok(delta_exponent(z, gamma, z0, z1, tol)?.exp())
}

/// Poles with `z0 < Re z_k < z1`.
pub fn interval_split(spectrum: &DiscreteSpectrum, z0: f64, z1: f64) -> TriangleSplit {
    let idx: Vec<usize> = spectrum
        .poles()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.z.re > z0 && p.z.re < z1)
        .map(|(k, _)| k)
        .collect();
    TriangleSplit::from_indices(spectrum.len(), &idx).expect("indices are in range")
}

/// `T(z) = Π_{k∈Δ⁻} (z − z̄_k)/(z − z_k) · δ(z)`.
pub fn t_of(
    z: Complex64,
    gamma: &ReflectionCoefficient,
    spectrum: &DiscreteSpectrum,
    split: &TriangleSplit,
    z0: f64,
    z1: f64,
) -> Result<Complex64> {
    let mut blaschke = c(1.0, 0.0);
    for k in split.delta_minus() {
        let zk = spectrum.poles()[k].z;
        if z == zk {
            return Err(Error::Domain(format!("T evaluated at its pole {z}")));
        }
        blaschke *= (z - zk.conj()) / (z - zk);
    }
    Ok(blaschke * delta_at(z, gamma, z0, z1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasePoint {
    Z0,
    Z1,
}

fn check_endpoint_resolution(gamma: &ReflectionCoefficient, z0: f64, z1: f64) -> Result<()> {
    if gamma.max_abs() == 0.0 {
        return Ok(());
    }
    for z in [z0, z1] {
        if !gamma.covers(z) && gamma.edge_magnitude() > 1e-8 {
            return Err(Error::accuracy(
                format!("reflection window does not cover the stationary point {z}"),
                gamma.edge_magnitude(),
                1e-8,
            ));
        }
    }
    let inside = gamma.zs().iter().filter(|&&s| s >= z0 && s <= z1).count();
    let covered = gamma.covers(z0) || gamma.covers(z1);
    if covered && inside < 4 {
        return Err(Error::accuracy(
            format!("reflection grid too coarse on [{z0}, {z1}] ({inside} nodes)"),
            inside as f64,
            4.0,
        ));
    }
    Ok(())
}

/// Finite part of `T` at a stationary point:
/// `lim T(z)/(z − z1)^{iν(z1)}` at `z1` and `lim T(z)(z0 − z)^{iν(z0)}` at `z0`,
/// with principal powers (branch cuts running into the interval).
pub fn t0_at(
    which: PhasePoint,
    gamma: &ReflectionCoefficient,
    spectrum: &DiscreteSpectrum,
    split: &TriangleSplit,
    z0: f64,
    z1: f64,
) -> Result<Complex64> {
    t0_at_with(which, gamma, spectrum, split, z0, z1, Tolerance::default())
}

pub fn t0_at_with(
    which: PhasePoint,
    gamma: &ReflectionCoefficient,
    spectrum: &DiscreteSpectrum,
    split: &TriangleSplit,
    z0: f64,
    z1: f64,
    tol: Tolerance,
) -> Result<Complex64> {
    check_interval(z0, z1)?;
    check_endpoint_resolution(gamma, z0, z1)?;
    let ze = match which {
        PhasePoint::Z0 => z0,
        PhasePoint::Z1 => z1,
    };
    let nu_e = nu_of(gamma.value(ze));
    let f = |s: f64| c((nu_of(gamma.value(s)) - nu_e) / (s - ze), 0.0);
    let integral = integrate(f, z0, z1, &[], tol)?.value;
    let log_len = (z1 - z0).ln();
    let exponent = match which {
        PhasePoint::Z1 => Complex64::i() * (integral - nu_e * log_len),
        PhasePoint::Z0 => Complex64::i() * (integral + nu_e * log_len),
    };
    let delta = split.delta_minus();
    let blaschke = if delta.is_empty() {
        c(1.0, 0.0)
    } else {
        1.0 / trace_s11(c(ze, 0.0), spectrum, &delta)?
    };
    Ok(blaschke * exponent.exp())
}

/// Constants of the parabolic-cylinder model problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcCoeffs {
    pub beta12: Complex64,
    pub beta21: Complex64,
}

/// `β₁₂ = √(2π) e^{iπ/4} e^{−πν/2} / (r Γ(−iν))`, `β₂₁ = ν/β₁₂`.
pub fn pc_coeffs(gamma_eff: Complex64, nu: f64) -> Result<PcCoeffs> {
    let zero = c(0.0, 0.0);
    if gamma_eff == zero {
        if nu != 0.0 {
            return Err(Error::InvalidInput(format!(
                "ν = {nu} is inconsistent with a vanishing coefficient"
            )));
        }
        return Ok(PcCoeffs {
            beta12: zero,
            beta21: zero,
        });
    }
    let r2 = gamma_eff.norm_sqr();
    let expected = (-2.0 * PI * nu).exp();
    if ((1.0 + r2) - expected).abs() > 1e-10 * expected {
        return Err(Error::InvalidInput(format!(
            "1 + |γ|² = {} does not match e^(−2πν) = {expected}",
            1.0 + r2
        )));
    }
    // ν/γ evaluated without cancellation for small |γ|: ν/γ = −(log1p(|γ|²)/|γ|²) γ̄ / 2π
    let nu_over = -(r2.ln_1p() / r2) * gamma_eff.conj() / (2.0 * PI);
    let pref = (2.0 * PI).sqrt() * (-PI * nu / 2.0).exp();
    // 1/Γ(−iν) = −iν / Γ(1 − iν)
    let g_minus = log_gamma(c(1.0, -nu))?.exp();
    let beta12 = pref * c(0.0, PI / 4.0).exp() * c(0.0, -1.0) * nu_over / g_minus;
    let g_plus = log_gamma(c(1.0, nu))?.exp();
    // β₂₁ = −√(2π) e^{−iπ/4} e^{−πν/2} / (γ̄ Γ(iν)), and 1/Γ(iν) = iν/Γ(1+iν)
    let beta21 = -pref * c(0.0, -PI / 4.0).exp() * c(0.0, 1.0) * nu_over.conj() / g_plus;
    Ok(PcCoeffs { beta12, beta21 })
}

/// Rescaled reflection coefficient entering the model problem at `z_e`.
///
/// With `κ = 8 t √(α² − 3βx/t)`:
/// at `z1`, `γ(z1) κ^{iν} T0(z1)^{−2} e^{2itθ(z1)}`;
/// at `z0` (after the reflection `z ↦ −z`), `−conj γ(z0) κ^{iν} T0(z0)^{2} e^{−2itθ(z0)}`.
pub fn gamma0_at(
    which: PhasePoint,
    gamma_value: Complex64,
    t0: Complex64,
    point: SpaceTimePoint,
    p: &Params,
) -> Result<Complex64> {
    if !(point.t > 0.0) {
        return Err(Error::Domain(format!("asymptotics need t > 0 (got {})", point.t)));
    }
    let xi = point.ratio()?;
    let root = discriminant_root(xi, p)?;
    let (z0, z1) = stationary_points(xi, p)?;
    let nu = nu_of(gamma_value);
    let scale = c(0.0, nu * (8.0 * point.t * root).ln()).exp();
    Ok(match which {
        PhasePoint::Z1 => {
            let phase = c(0.0, 2.0 * t_theta(c(z1, 0.0), point.x, point.t, p).re).exp();
            gamma_value * scale * phase / (t0 * t0)
        }
        PhasePoint::Z0 => {
            let phase = c(0.0, -2.0 * t_theta(c(z0, 0.0), point.x, point.t, p).re).exp();
            -gamma_value.conj() * scale * phase * t0 * t0
        }
    })
}

/// Sign attached to the terms weighted by the off-diagonal outer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AntidiagonalSign {
    #[default]
    Plus,
    Minus,
}

impl AntidiagonalSign {
    fn value(self) -> f64 {
        match self {
            AntidiagonalSign::Plus => 1.0,
            AntidiagonalSign::Minus => -1.0,
        }
    }
}

/// Leading radiation coefficient `f`, so that `q − q_sol ≈ t^{-1/2} f`.
///
/// `m_out_*` are the outer model matrices at the stationary points and
/// `root = √(α² − 3βx/t)`.
pub fn leading_f(
    pc_z0: PcCoeffs,
    pc_z1: PcCoeffs,
    m_out_z0: &Mat2,
    m_out_z1: &Mat2,
    root: f64,
    sign: AntidiagonalSign,
) -> Complex64 {
    let s = sign.value();
    let (a1, b1) = (m_out_z1.0[0][0], m_out_z1.0[0][1]);
    let (a0, b0) = (m_out_z0.0[0][0], m_out_z0.0[0][1]);
    let sum = a1 * a1 * pc_z1.beta12 + s * b1 * b1 * pc_z1.beta21 + a0 * a0 * pc_z0.beta21 + s * b0 * b0 * pc_z0.beta12;
    sum / (2.0 * root).sqrt()
}

/// Everything computed at one `(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFrame {
    pub point: SpaceTimePoint,
    pub z0: f64,
    pub z1: f64,
    pub nu0: f64,
    pub nu1: f64,
    pub t0_z0: Complex64,
    pub t0_z1: Complex64,
    pub gamma0_z0: Complex64,
    pub gamma0_z1: Complex64,
    pub pc_z0: PcCoeffs,
    pub pc_z1: PcCoeffs,
    pub f: Complex64,
    pub q_sol_part: Complex64,
    pub radiation_part: Complex64,
    pub q_asy: Complex64,
}

/// Shared inputs for evaluating frames over many `(x, t)`.
#[derive(Debug, Clone)]
pub struct AsymptoticSolver<'a> {
    pub params: Params,
    pub gamma: &'a ReflectionCoefficient,
    pub spectrum: &'a DiscreteSpectrum,
    pub cone: Option<Cone>,
    pub sign: AntidiagonalSign,
    pub tolerance: Tolerance,
}

impl<'a> AsymptoticSolver<'a> {
    pub fn new(params: Params, gamma: &'a ReflectionCoefficient, spectrum: &'a DiscreteSpectrum) -> Self {
        Self {
            params,
            gamma,
            spectrum,
            cone: None,
            sign: AntidiagonalSign::Plus,
            tolerance: Tolerance::default(),
        }
    }

    pub fn with_cone(mut self, cone: Option<Cone>) -> Self {
        self.cone = cone;
        self
    }

    pub fn with_sign(mut self, sign: AntidiagonalSign) -> Self {
        self.sign = sign;
        self
    }

    // Kept poles with `δ^{-2}` and Blaschke-adjusted constants, plus the absorbed indices.
    fn outer_spectrum(&self, z0: f64, z1: f64) -> Result<(DiscreteSpectrum, Vec<usize>)> {
        let p = &self.params;
        let (kept, absorbed) = match &self.cone {
            Some(cone) => {
                let data = cone_filter(self.spectrum, cone, p)?;
                (data.k_in, data.k_plus)
            }
            None => ((0..self.spectrum.len()).collect(), Vec::new()),
        };
        let radiation = RadiationFactor {
            gamma: self.gamma,
            a: z0,
            b: z1,
            sign: -1.0,
        };
        let outer = modified_constants_with(self.spectrum, &kept, &absorbed, Some(radiation), self.tolerance)?;
        Ok((outer, absorbed))
    }

    pub fn frame(&self, x: f64, t: f64) -> Result<AsymptoticFrame> {
        let p = &self.params;
        p.require_positive_beta()?;
        if !(t > 0.0) {
            return Err(Error::Domain(format!("asymptotics need t > 0 (got {t})")));
        }
        let point = SpaceTimePoint::new(x, t);
        let xi = x / t;
        let (z0, z1) = stationary_points(xi, p)?;
        let root = discriminant_root(xi, p)?;
        check_endpoint_resolution(self.gamma, z0, z1)?;

        let (outer, absorbed) = self.outer_spectrum(z0, z1)?;
        let model = solve_reflectionless(&outer, &TriangleSplit::balanced(&outer, x, t, p), x, t, p)?;
        let q_sol_part = model.q_sol();

        // T carries every pole with z0 < Re z_k < z1, filtered or not
        let split = interval_split(self.spectrum, z0, z1);
        let t0_z0 = t0_at_with(
            PhasePoint::Z0,
            self.gamma,
            self.spectrum,
            &split,
            z0,
            z1,
            self.tolerance,
        )?;
        let t0_z1 = t0_at_with(
            PhasePoint::Z1,
            self.gamma,
            self.spectrum,
            &split,
            z0,
            z1,
            self.tolerance,
        )?;
        let (g0, g1) = (self.gamma.value(z0), self.gamma.value(z1));
        let (nu0, nu1) = (nu_of(g0), nu_of(g1));
        let gamma0_z0 = gamma0_at(PhasePoint::Z0, g0, t0_z0, point, p)?;
        let gamma0_z1 = gamma0_at(PhasePoint::Z1, g1, t0_z1, point, p)?;
        let pc_z0 = pc_coeffs(gamma0_z0, nu0)?;
        let pc_z1 = pc_coeffs(gamma0_z1, nu1)?;

        let delta = split.delta_minus();
        // full outer matrix ≈ P_cone B₊^{−σ₃}, then conjugated by s_Δ^{σ₃}
        let outer_at = |ze: f64| -> Result<Mat2> {
            let z = c(ze, 0.0);
            let m = model.evaluate_m(z)?;
            let s = trace_s11(z, self.spectrum, &delta)? / trace_s11(z, self.spectrum, &absorbed)?;
            Ok(Mat2::new(m.0[0][0] * s, m.0[0][1] / s, m.0[1][0] * s, m.0[1][1] / s))
        };
        let f = leading_f(pc_z0, pc_z1, &outer_at(z0)?, &outer_at(z1)?, root, self.sign);
        let radiation_part = f / t.sqrt();
        Ok(AsymptoticFrame {
            point,
            z0,
            z1,
            nu0,
            nu1,
            t0_z0,
            t0_z1,
            gamma0_z0,
            gamma0_z1,
            pc_z0,
            pc_z1,
            f,
            q_sol_part,
            radiation_part,
            q_asy: q_sol_part + radiation_part,
        })
    }
}

/// `(q_asy, q_sol part, t^{-1/2} f part)` at `(x, t)`.
pub fn asymptotic_q(
    x: f64,
    t: f64,
    spectrum: &DiscreteSpectrum,
    gamma: &ReflectionCoefficient,
    cone: Option<Cone>,
    p: &Params,
) -> Result<(Complex64, Complex64, Complex64)> {
    let frame = AsymptoticSolver::new(*p, gamma, spectrum).with_cone(cone).frame(x, t)?;
    Ok((frame.q_asy, frame.q_sol_part, frame.radiation_part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::uniform_grid;
    use crate::spectrum::Pole;
    use proptest::prelude::*;

    fn smooth_gamma() -> ReflectionCoefficient {
        let zs = uniform_grid(-3.0, 3.0, 1201);
        let g = zs
            .iter()
            .map(|&z| c(0.5 * (-z * z).exp(), 0.3 * (z - 0.2) * (-z * z).exp()))
            .collect();
        ReflectionCoefficient::new(zs, g).unwrap()
    }

    fn constant_gamma(v: Complex64) -> ReflectionCoefficient {
        let zs = uniform_grid(-3.0, 3.0, 61);
        let g = vec![v; zs.len()];
        ReflectionCoefficient::new(zs, g).unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu_of(c(0.0, 0.0)), 0.0);
        let g = ((2.0 * PI).exp() - 1.0).sqrt();
        assert!((nu_of(c(0.0, g)) + 1.0).abs() < 1e-14);
        assert!((nu_of(c(1.0, 0.0)) + 2f64.ln() / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn delta_of_zero_reflection() {
        let g = ReflectionCoefficient::zero(-3.0, 3.0).unwrap();
        for z in [c(0.1, 0.2), c(-2.0, -1.0), c(5.0, 0.0)] {
            assert!((delta_at(z, &g, -0.5, 0.5).unwrap() - 1.0).norm() < 1e-15);
        }
        assert!(delta_at(c(0.1, 0.0), &g, -0.5, 0.5).is_err());
    }

    #[test]
    fn delta_for_constant_density() {
        let g = constant_gamma(c(0.6, -0.3));
        let nu = nu_of(c(0.6, -0.3));
        let (z0, z1) = (-0.4, 0.7);
        let mut s = 0.37f64;
        for _ in 0..10 {
            s = (s * 997.0 + 0.123).fract();
            let z = c(4.0 * s - 2.0, 2.0 * (s * 13.0).fract() - 1.0);
            let exact = (c(0.0, nu) * ((z1 - z) / (z0 - z)).ln()).exp();
            assert!((delta_at(z, &g, z0, z1).unwrap() - exact).norm() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn delta_jump_and_decay() {
        let g = smooth_gamma();
        let (z0, z1) = (-0.5, 0.6);
        for u in uniform_grid(-0.4, 0.5, 10) {
            let plus = delta_at(c(u, 1e-4), &g, z0, z1).unwrap();
            let minus = delta_at(c(u, -1e-4), &g, z0, z1).unwrap();
            let expected = 1.0 + g.value(u).norm_sqr();
            assert!((plus / minus - expected).norm() < 1e-4, "u = {u}");
        }
        assert!((delta_at(c(1e6, 0.0), &g, z0, z1).unwrap() - 1.0).norm() < 1e-6);
        assert!((delta_at(c(0.0, 1e6), &g, z0, z1).unwrap() - 1.0).norm() < 1e-6);
    }

    fn two_poles() -> DiscreteSpectrum {
        DiscreteSpectrum::new(vec![
            Pole {
                z: c(0.1, 0.4),
                c: c(1.0, 0.5),
            },
            Pole {
                z: c(1.5, 0.3),
                c: c(-0.2, 1.0),
            },
        ])
        .unwrap()
    }

    #[test]
    fn t_symmetry_zeros_and_expansion() {
        let g = smooth_gamma();
        let s = two_poles();
        let (z0, z1) = (-0.5, 0.6);
        let split = interval_split(&s, z0, z1);
        assert_eq!(split.delta_minus(), vec![0]);
        for z in [c(0.3, 0.8), c(-1.2, 0.1), c(2.0, -0.7)] {
            let a = t_of(z, &g, &s, &split, z0, z1).unwrap();
            let b = t_of(z.conj(), &g, &s, &split, z0, z1).unwrap();
            assert!((a * b.conj() - 1.0).norm() < 1e-10);
        }
        let at_zero = t_of(s.poles()[0].z.conj(), &g, &s, &split, z0, z1).unwrap();
        assert!(at_zero.norm() < 1e-8);
        assert!(t_of(s.poles()[0].z, &g, &s, &split, z0, z1).is_err());

        let nu_int = integrate(|u| c(nu_of(g.value(u)), 0.0), z0, z1, &[], Tolerance::default())
            .unwrap()
            .value
            .re;
        let expected = c(0.0, 2.0 * 0.4 - nu_int);
        let z = c(1e4, 0.0);
        let lhs = z * (t_of(z, &g, &s, &split, z0, z1).unwrap() - 1.0);
        assert!((lhs - expected).norm() < 1e-4);
    }

    #[test]
    fn t0_is_the_finite_part_along_rays() {
        let g = smooth_gamma();
        let s = two_poles();
        let (z0, z1) = (-0.5, 0.6);
        let split = interval_split(&s, z0, z1);
        let t01 = t0_at(PhasePoint::Z1, &g, &s, &split, z0, z1).unwrap();
        let t00 = t0_at(PhasePoint::Z0, &g, &s, &split, z0, z1).unwrap();
        let (nu0, nu1) = (nu_of(g.value(z0)), nu_of(g.value(z1)));
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for eps in [1e-3, 1e-5, 1e-7] {
            let z = z1 + eps * c(0.0, PI / 4.0).exp();
            let lim1 = t_of(z, &g, &s, &split, z0, z1).unwrap() / (z - z1).powc(c(0.0, nu1));
            let z = z0 + eps * c(0.0, 3.0 * PI / 4.0).exp();
            let lim0 = t_of(z, &g, &s, &split, z0, z1).unwrap() * (z0 - z).powc(c(0.0, nu0));
            let d = ((lim1 - t01).norm(), (lim0 - t00).norm());
            assert!(d.0 <= 5.0 * eps.sqrt() && d.1 <= 5.0 * eps.sqrt());
            assert!(d.0 < prev.0 && d.1 < prev.1);
            prev = d;
        }
        // unimodular on the real axis
        assert!((t01.norm() - 1.0).abs() < 1e-12 && (t00.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t0_closed_forms() {
        let zero = ReflectionCoefficient::zero(-3.0, 3.0).unwrap();
        let empty = DiscreteSpectrum::empty();
        let none = TriangleSplit::empty(0);
        assert!((t0_at(PhasePoint::Z1, &zero, &empty, &none, -0.5, 0.5).unwrap() - 1.0).norm() < 1e-15);
        let v = c(0.8, 0.1);
        let g = constant_gamma(v);
        let nu = nu_of(v);
        let (z0, z1) = (-0.3, 0.9);
        let t1 = t0_at(PhasePoint::Z1, &g, &empty, &none, z0, z1).unwrap();
        assert!((t1 - c(0.0, -nu * (z1 - z0).ln()).exp()).norm() < 1e-8);
        let t0 = t0_at(PhasePoint::Z0, &g, &empty, &none, z0, z1).unwrap();
        assert!((t0 - c(0.0, nu * (z1 - z0).ln()).exp()).norm() < 1e-8);
    }

    #[test]
    fn coarse_reflection_grid_is_rejected() {
        let zs = vec![-3.0, -1.0, 1.0, 3.0];
        let g = ReflectionCoefficient::new(zs, vec![c(0.1, 0.0); 4]).unwrap();
        let r = t0_at(
            PhasePoint::Z1,
            &g,
            &DiscreteSpectrum::empty(),
            &TriangleSplit::empty(0),
            -0.5,
            0.5,
        );
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn pc_examples() {
        assert_eq!(
            pc_coeffs(c(0.0, 0.0), 0.0).unwrap(),
            PcCoeffs {
                beta12: c(0.0, 0.0),
                beta21: c(0.0, 0.0)
            }
        );
        let g = c(((2.0 * PI).exp() - 1.0).sqrt(), 0.0);
        let pc = pc_coeffs(g, -1.0).unwrap();
        assert!((pc.beta12.norm() - 1.0).abs() < 1e-12);
        assert!(pc_coeffs(c(0.5, 0.0), -0.5).is_err());
    }

    #[test]
    fn pc_linear_limit() {
        // β₁₂ → −γ̄ e^{−iπ/4}/√(2π) as γ → 0
        let g = c(3e-5, -4e-5);
        let pc = pc_coeffs(g, nu_of(g)).unwrap();
        let lin = -g.conj() * c(0.0, -PI / 4.0).exp() / (2.0 * PI).sqrt();
        assert!((pc.beta12 - lin).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn pc_identities(r in 1e-6f64..5.0, phi in -PI..PI) {
            let g = c(r * phi.cos(), r * phi.sin());
            let nu = nu_of(g);
            let pc = pc_coeffs(g, nu).unwrap();
            prop_assert!((pc.beta12 * pc.beta21 - nu).norm() < 1e-12);
            prop_assert!((pc.beta12.norm_sqr() + nu).abs() < 1e-12);
        }

        #[test]
        fn gamma0_keeps_modulus(x in -30.0f64..-1.0, t in 1.0f64..200.0, phi in -PI..PI) {
            let p = Params::new(1.0, 1.0).unwrap();
            let pt = SpaceTimePoint::new(x, t);
            let g = c(0.4, 0.2);
            let t0 = c(0.0, phi).exp();
            for which in [PhasePoint::Z0, PhasePoint::Z1] {
                let r = gamma0_at(which, g, t0, pt, &p).unwrap();
                prop_assert!((r.norm() - g.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gamma0_errors() {
        let p = Params::new(0.0, 1.0).unwrap();
        let g = c(0.1, 0.0);
        assert!(matches!(
            gamma0_at(PhasePoint::Z1, g, c(1.0, 0.0), SpaceTimePoint::new(1.0, 1.0), &p),
            Err(Error::NoRealPhasePoints { .. })
        ));
        assert!(gamma0_at(PhasePoint::Z1, g, c(1.0, 0.0), SpaceTimePoint::new(-1.0, 0.0), &p).is_err());
        assert_eq!(
            gamma0_at(
                PhasePoint::Z0,
                c(0.0, 0.0),
                c(1.0, 0.0),
                SpaceTimePoint::new(-1.0, 1.0),
                &p
            )
            .unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn radiation_free_frames() {
        let p = Params::new(1.0, 1.0).unwrap();
        let zero = ReflectionCoefficient::zero(-3.0, 3.0).unwrap();
        let empty = DiscreteSpectrum::empty();
        let (q, qs, rad) = asymptotic_q(-20.0, 10.0, &empty, &zero, None, &p).unwrap();
        assert_eq!((q, qs, rad), (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));

        let s = DiscreteSpectrum::new(vec![Pole {
            z: c(-0.2, 0.5),
            c: c(1.0, 0.3),
        }])
        .unwrap();
        for &(x, t) in &[(-3.0, 2.0), (0.0, 1.5), (-40.0, 5.0)] {
            let (q, _, rad) = asymptotic_q(x, t, &s, &zero, None, &p).unwrap();
            let exact = crate::soliton::one_soliton(c(-0.2, 0.5), c(1.0, 0.3), x, t, &p);
            assert_eq!(rad, c(0.0, 0.0));
            assert!((q - exact).norm() < 1e-12);
        }
    }

    #[test]
    fn radiation_only_bound() {
        let p = Params::new(1.0, 1.0).unwrap();
        let g = smooth_gamma();
        let empty = DiscreteSpectrum::empty();
        let frame = AsymptoticSolver::new(p, &g, &empty).frame(-100.0, 100.0).unwrap();
        let root = (1.0f64 + 3.0).sqrt();
        let bound = ((-frame.nu0).sqrt() + (-frame.nu1).sqrt()) / (2.0 * root).sqrt();
        assert!(frame.f.norm() <= bound * (1.0 + 1e-12));
        let expected = (frame.pc_z1.beta12 + frame.pc_z0.beta21) / (2.0 * root).sqrt();
        assert!((frame.f - expected).norm() < 1e-14);
        assert!(matches!(
            AsymptoticSolver::new(p, &g, &empty).frame(100.0, 10.0),
            Err(Error::NoRealPhasePoints { .. })
        ));
    }
}

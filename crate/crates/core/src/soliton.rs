//! Reflectionless Riemann–Hilbert problem: N-soliton construction, Blaschke
//! products, cone filtering and modified norming constants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::params::{soliton_speed, t_theta, Cone, Params};
use crate::quadrature::{integrate, Tolerance};
use crate::scatter::ReflectionCoefficient;
use crate::spectrum::{DiscreteSpectrum, Pole};

const EXP_LIMIT: f64 = 700.0;
const SINGULAR_CONDITION: f64 = 1e13;
const SYSTEM_RESIDUAL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn checked_exp(log: Complex64, what: &str) -> Result<Complex64> {
    if log.re > EXP_LIMIT {
        return Err(Error::Overflow(format!(
            "{what}: exponent {:.3e} exceeds the floating-point range",
            log.re
        )));
    }
    Ok(log.exp())
}

/// `γ_k(x, t) = c_k e^{2itθ(z_k)}` for each pole.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueData {
    pub gamma: Vec<Complex64>,
}

pub fn residue_gamma(spectrum: &DiscreteSpectrum, x: f64, t: f64, p: &Params) -> Result<ResidueData> {
    let gamma = spectrum
        .poles()
        .iter()
        .enumerate()
        .map(|(k, pole)| {
            let log = pole.c.ln() + 2.0 * Complex64::i() * t_theta(pole.z, x, t, p);
            checked_exp(log, &format!("residue weight of pole {k} at x = {x}, t = {t}"))
        })
        .collect::<Result<_>>()?;
    Ok(ResidueData { gamma })
}

/// Which poles have their residue moved to the second column (`Δ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSplit {
    in_delta: Vec<bool>,
}

impl TriangleSplit {
    pub fn empty(n: usize) -> Self {
        Self {
            in_delta: vec![false; n],
        }
    }

    pub fn all(n: usize) -> Self {
        Self {
            in_delta: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut in_delta = vec![false; n];
        for &k in indices {
            if k >= n {
                return Err(Error::InvalidInput(format!(
                    "split index {k} out of range for {n} poles"
                )));
            }
            in_delta[k] = true;
        }
        Ok(Self { in_delta })
    }

    /// Puts each pole whose residue weight exceeds one in `Δ`, which keeps the
    /// linear system well scaled at any `(x, t)`.
    pub fn balanced(spectrum: &DiscreteSpectrum, x: f64, t: f64, p: &Params) -> Self {
        let in_delta = spectrum
            .poles()
            .iter()
            .map(|pole| {
                let log = pole.c.norm().ln() - 2.0 * t_theta(pole.z, x, t, p).im;
                log > 0.0
            })
            .collect();
        Self { in_delta }
    }

    pub fn len(&self) -> usize {
        self.in_delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_delta.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.in_delta[k]
    }

    pub fn delta_minus(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.in_delta[k]).collect()
    }

    pub fn delta_plus(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| !self.in_delta[k]).collect()
    }
}

/// `Π_{k∈subset} (z − z_k)/(z − z̄_k)`.
pub fn trace_s11(z: Complex64, spectrum: &DiscreteSpectrum, subset: &[usize]) -> Result<Complex64> {
    let mut prod = c(1.0, 0.0);
    for &k in subset {
        let zk = spectrum
            .poles()
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("pole index {k} out of range")))?
            .z;
        let den = z - zk.conj();
        if den.norm() == 0.0 {
            return Err(Error::Domain(format!(
                "Blaschke product evaluated at its pole {}",
                zk.conj()
            )));
        }
        prod *= (z - zk) / den;
    }
    Ok(prod)
}

// log of the residue weight of the conjugated problem for pole k.
fn log_split_weight(poles: &[Pole], split: &TriangleSplit, k: usize, x: f64, t: f64, p: &Params) -> Complex64 {
    let zk = poles[k].z;
    let phase = 2.0 * Complex64::i() * t_theta(zk, x, t, p);
    let mut log_s = c(0.0, 0.0);
    for (j, pole) in poles.iter().enumerate() {
        if j != k && split.contains(j) {
            log_s += ((zk - pole.z) / (zk - pole.z.conj())).ln();
        }
    }
    if split.contains(k) {
        // derivative of the Blaschke product at its own zero
        let ds = log_s - (zk - zk.conj()).ln();
        -poles[k].c.ln() - 2.0 * ds - phase
    } else {
        poles[k].c.ln() + 2.0 * log_s + phase
    }
}

/// Solved reflectionless problem at one `(x, t)`.
///
/// The solve is carried out for `m s_Δ^{σ₃}`, whose residues are bounded for
/// a suitable split, and converted back to the coefficients `ζ_k`, `η_k` of
/// `m = I + Σ [ζ_k, 0; η_k, 0]/(z − z_k) + [0, −η̄_k; 0, ζ̄_k]/(z − z̄_k)`.
#[derive(Debug, Clone)]
pub struct SolitonModel {
    spectrum: DiscreteSpectrum,
    split: TriangleSplit,
    x: f64,
    t: f64,
    // residues of the conjugated matrix: at z_k (column col(k)) and at z̄_k (the other column)
    upper: Vec<[Complex64; 2]>,
    lower: Vec<[Complex64; 2]>,
    zeta: Vec<Complex64>,
    eta: Vec<Complex64>,
    residual: f64,
    condition: f64,
}

pub fn solve_reflectionless(
    spectrum: &DiscreteSpectrum,
    split: &TriangleSplit,
    x: f64,
    t: f64,
    p: &Params,
) -> Result<SolitonModel> {
    let n = spectrum.len();
    if split.len() != n {
        return Err(Error::InvalidInput(format!(
            "split covers {} poles but the spectrum has {n}",
            split.len()
        )));
    }
    let poles = spectrum.poles();
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let log = log_split_weight(poles, split, k, x, t, p);
        weights.push(checked_exp(
            log,
            &format!("residue weight of pole {k} at x = {x}, t = {t}"),
        )?);
    }
    let col = |k: usize| usize::from(split.contains(k));
    let z: Vec<Complex64> = poles.iter().map(|p| p.z).collect();

    // Unknowns: upper residues u_k (index k) and lower residues w_k (index n + k).
    let dim = 2 * n;
    let mut a = DMatrix::<Complex64>::identity(dim, dim);
    let mut rhs = DMatrix::<Complex64>::zeros(dim, 2);
    for k in 0..n {
        let g = weights[k];
        // u_k = g_k · column (1 − col k) of the conjugated matrix at z_k
        let other = 1 - col(k);
        for j in 0..n {
            if col(j) == other {
                a[(k, j)] -= g / (z[k] - z[j]);
            } else {
                a[(k, n + j)] -= g / (z[k] - z[j].conj());
            }
        }
        rhs[(k, other)] = g;
        // w_k = −ḡ_k · column (col k) at z̄_k
        let own = col(k);
        let gb = g.conj();
        let zb = z[k].conj();
        for j in 0..n {
            if col(j) == own {
                a[(n + k, j)] += gb / (zb - z[j]);
            } else {
                a[(n + k, n + j)] += gb / (zb - z[j].conj());
            }
        }
        rhs[(n + k, own)] = -gb;
    }

    let (sol, condition, residual) = if n == 0 {
        (DMatrix::zeros(0, 2), 1.0, 0.0)
    } else {
        let lu = a.clone().lu();
        let inv = lu.try_inverse().ok_or(Error::SolitonSystemSingular {
            condition: f64::INFINITY,
        })?;
        let norm1 = |m: &DMatrix<Complex64>| {
            (0..m.ncols())
                .map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let condition = norm1(&a) * norm1(&inv);
        if !condition.is_finite() || condition > SINGULAR_CONDITION {
            return Err(Error::SolitonSystemSingular { condition });
        }
        let sol = a
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::SolitonSystemSingular { condition })?;
        let res = &a * &sol - &rhs;
        let scale = norm1(&a) * norm1(&sol) + norm1(&rhs);
        let residual = norm1(&res) / scale.max(f64::MIN_POSITIVE);
        (sol, condition, residual)
    };
    if residual > SYSTEM_RESIDUAL {
        return Err(Error::accuracy("soliton linear system", residual, SYSTEM_RESIDUAL));
    }
    let upper: Vec<[Complex64; 2]> = (0..n).map(|k| [sol[(k, 0)], sol[(k, 1)]]).collect();
    let lower: Vec<[Complex64; 2]> = (0..n).map(|k| [sol[(n + k, 0)], sol[(n + k, 1)]]).collect();

    let mut model = SolitonModel {
        spectrum: spectrum.clone(),
        split: split.clone(),
        x,
        t,
        upper,
        lower,
        zeta: vec![c(0.0, 0.0); n],
        eta: vec![c(0.0, 0.0); n],
        residual,
        condition,
    };
    let delta = split.delta_minus();
    for (k, &zk) in z.iter().enumerate() {
        let residue = if split.contains(k) {
            // first column is regular at z_k; divide by s_Δ'(z_k)
            let first = model.split_column(zk, 0);
            let others: Vec<usize> = delta.iter().copied().filter(|&j| j != k).collect();
            let ds = trace_s11(zk, spectrum, &others)? / (zk - zk.conj());
            [first[0] / ds, first[1] / ds]
        } else {
            let s = trace_s11(zk, spectrum, &delta)?;
            [model.upper[k][0] / s, model.upper[k][1] / s]
        };
        model.zeta[k] = residue[0];
        model.eta[k] = residue[1];
    }
    Ok(model)
}

impl SolitonModel {
    pub fn spectrum(&self) -> &DiscreteSpectrum {
        &self.spectrum
    }

    pub fn split(&self) -> &TriangleSplit {
        &self.split
    }

    pub fn point(&self) -> (f64, f64) {
        (self.x, self.t)
    }

    pub fn zeta(&self) -> &[Complex64] {
        &self.zeta
    }

    pub fn eta(&self) -> &[Complex64] {
        &self.eta
    }

    /// Relative residual of the solved linear system.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// One-norm condition estimate of the linear system.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    // Column `which` of the conjugated matrix.
    fn split_column(&self, z: Complex64, which: usize) -> [Complex64; 2] {
        let mut v = [c(0.0, 0.0); 2];
        v[which] = c(1.0, 0.0);
        for (k, pole) in self.spectrum.poles().iter().enumerate() {
            let col = usize::from(self.split.contains(k));
            let (r, den) = if col == which {
                (self.upper[k], z - pole.z)
            } else {
                (self.lower[k], z - pole.z.conj())
            };
            v[0] += r[0] / den;
            v[1] += r[1] / den;
        }
        v
    }

    fn check_regular(&self, z: Complex64) -> Result<()> {
        for pole in self.spectrum.poles() {
            let d = (z - pole.z).norm().min((z - pole.z.conj()).norm());
            if d <= 1e-14 * (1.0 + pole.z.norm()) {
                return Err(Error::Domain(format!("m evaluated at the pole {}", pole.z)));
            }
        }
        Ok(())
    }

    /// `m(z)` assembled from `ζ_k`, `η_k`.
    pub fn evaluate_m(&self, z: Complex64) -> Result<Mat2> {
        self.check_regular(z)?;
        let mut m = Mat2::IDENTITY;
        for (k, pole) in self.spectrum.poles().iter().enumerate() {
            let a = z - pole.z;
            let b = z - pole.z.conj();
            m.0[0][0] += self.zeta[k] / a;
            m.0[1][0] += self.eta[k] / a;
            m.0[0][1] -= self.eta[k].conj() / b;
            m.0[1][1] += self.zeta[k].conj() / b;
        }
        Ok(m)
    }

    /// The conjugated matrix `m(z) s_Δ(z)^{σ₃}` that was actually solved for.
    pub fn evaluate_split(&self, z: Complex64) -> Result<Mat2> {
        self.check_regular(z)?;
        Ok(Mat2::from_columns(self.split_column(z, 0), self.split_column(z, 1)))
    }

    /// `q = 2i lim z m₁₂ = −2i Σ η̄_k`.
    pub fn q_sol(&self) -> Complex64 {
        let s: Complex64 = self.eta.iter().map(|e| e.conj()).sum();
        c(0.0, -2.0) * s
    }
}

/// Convenience: `q_sol(x, t)` with a split chosen for conditioning.
pub fn soliton_q(spectrum: &DiscreteSpectrum, x: f64, t: f64, p: &Params) -> Result<Complex64> {
    let split = TriangleSplit::balanced(spectrum, x, t, p);
    Ok(solve_reflectionless(spectrum, &split, x, t, p)?.q_sol())
}

/// `q_sol` at every `x` of a slice at time `t`.
pub fn soliton_field(spectrum: &DiscreteSpectrum, xs: &[f64], t: f64, p: &Params) -> Result<Vec<Complex64>> {
    xs.par_iter().map(|&x| soliton_q(spectrum, x, t, p)).collect()
}

/// Closed-form one-soliton attached to `(z, c)`:
/// `2η sech(2η(x − v t) − log(|c|/2η)) · exp(−i[2ξx + 4α(ξ²−η²)t + 8β(ξ³−3ξη²)t + arg c + π/2])`
/// with `v` from [`soliton_speed`].
pub fn one_soliton(z: Complex64, cnorm: Complex64, x: f64, t: f64, p: &Params) -> Complex64 {
    let (xi, eta) = (z.re, z.im);
    let v = soliton_speed(z, p);
    let arg = 2.0 * eta * (x - v * t) - (cnorm.norm() / (2.0 * eta)).ln();
    let phase = 2.0 * xi * x
        + 4.0 * p.alpha * (xi * xi - eta * eta) * t
        + 8.0 * p.beta * (xi * xi * xi - 3.0 * xi * eta * eta) * t
        + cnorm.arg()
        + std::f64::consts::FRAC_PI_2;
    c(0.0, -phase).exp() * (2.0 * eta / arg.cosh())
}

/// Classification of poles against a cone, with the separation rate `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeData {
    /// Velocity window `[v1, v2]` of the cone.
    pub speed_window: (f64, f64),
    pub speeds: Vec<f64>,
    pub k_in: Vec<usize>,
    /// Faster than the cone (ahead of it for large t).
    pub k_plus: Vec<usize>,
    /// Slower than the cone.
    pub k_minus: Vec<usize>,
    /// `min η_k · dist(v_k, [v1, v2]) / 4` over excluded poles; infinite when none is excluded.
    pub mu: f64,
}

impl ConeData {
    /// Kept poles with constants adjusted for the absorbed faster poles.
    pub fn filtered_spectrum(&self, spectrum: &DiscreteSpectrum) -> Result<DiscreteSpectrum> {
        modified_constants(spectrum, &self.k_in, &self.k_plus, None)
    }

    /// Decay rate `8μ` of the difference between the full and the filtered field.
    pub fn separation_rate(&self) -> f64 {
        8.0 * self.mu
    }
}

pub fn cone_filter(spectrum: &DiscreteSpectrum, cone: &Cone, p: &Params) -> Result<ConeData> {
    p.require_positive_beta()?;
    let speeds: Vec<f64> = spectrum.poles().iter().map(|pole| soliton_speed(pole.z, p)).collect();
    let mut data = ConeData {
        speed_window: (cone.v1, cone.v2),
        speeds: speeds.clone(),
        k_in: Vec::new(),
        k_plus: Vec::new(),
        k_minus: Vec::new(),
        mu: f64::INFINITY,
    };
    for (k, (&v, pole)) in speeds.iter().zip(spectrum.poles()).enumerate() {
        if v < cone.v1 {
            data.k_minus.push(k);
        } else if v > cone.v2 {
            data.k_plus.push(k);
        } else {
            data.k_in.push(k);
            continue;
        }
        data.mu = data.mu.min(pole.z.im * cone.speed_distance(v) / 4.0);
    }
    Ok(data)
}

/// Radiation factor `exp[sign·(1/πi) ∫_a^b log(1+|γ|²)/(s − z) ds]` applied to norming constants.
#[derive(Debug, Clone, Copy)]
pub struct RadiationFactor<'a> {
    pub gamma: &'a ReflectionCoefficient,
    pub a: f64,
    pub b: f64,
    pub sign: f64,
}

impl RadiationFactor<'_> {
    pub fn log_at(&self, z: Complex64, tol: Tolerance) -> Result<Complex64> {
        if z.im.abs() < 1e-8 && z.re >= self.a.min(self.b) && z.re <= self.a.max(self.b) {
            return Err(Error::accuracy(
                format!("radiation factor at {z} (too close to the interval)"),
                z.im.abs(),
                1e-8,
            ));
        }
        let g = self.gamma;
        let f = |s: f64| c(g.value(s).norm_sqr().ln_1p(), 0.0) / (s - z);
        let v = integrate(f, self.a, self.b, &[z.re], tol)?.value;
        Ok(v * self.sign / c(0.0, std::f64::consts::PI))
    }
}

/// Keeps `kept` poles; each gets `Π_{n∈absorbed} ((z_k − z_n)/(z_k − z̄_n))²` and the optional radiation factor.
pub fn modified_constants(
    spectrum: &DiscreteSpectrum,
    kept: &[usize],
    absorbed: &[usize],
    radiation: Option<RadiationFactor<'_>>,
) -> Result<DiscreteSpectrum> {
    modified_constants_with(spectrum, kept, absorbed, radiation, Tolerance::default())
}

pub fn modified_constants_with(
    spectrum: &DiscreteSpectrum,
    kept: &[usize],
    absorbed: &[usize],
    radiation: Option<RadiationFactor<'_>>,
    tol: Tolerance,
) -> Result<DiscreteSpectrum> {
    let poles = spectrum.poles();
    let mut out = Vec::with_capacity(kept.len());
    for &k in kept {
        let pole = poles
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("pole index {k} out of range")))?;
        let b = trace_s11(pole.z, spectrum, absorbed)?;
        let mut cn = pole.c * b * b;
        if let Some(r) = radiation {
            cn *= checked_exp(r.log_at(pole.z, tol)?, "radiation factor")?;
        }
        out.push(Pole { z: pole.z, c: cn });
    }
    DiscreteSpectrum::new(out)
}

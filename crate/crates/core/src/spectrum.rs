//! Discrete spectrum: zeros of `s11` in the upper half-plane and their norming constants.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scatter::{analytic_columns, s11_at, InitialProfile};

/// A simple zero `z` of `s11` with norming constant `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub z: Complex64,
    pub c: Complex64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteSpectrum {
    poles: Vec<Pole>,
}

impl DiscreteSpectrum {
    pub fn new(poles: Vec<Pole>) -> Result<Self> {
        for (k, p) in poles.iter().enumerate() {
            let finite = [p.z.re, p.z.im, p.c.re, p.c.im].iter().all(|v| v.is_finite());
            if !finite || p.z.im <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "pole {k} must be finite with Im z > 0 (got z = {})",
                    p.z
                )));
            }
            if p.c.norm() == 0.0 {
                return Err(Error::InvalidInput(format!("norming constant of pole {k} vanishes")));
            }
            for (j, q) in poles.iter().enumerate().take(k) {
                if (p.z - q.z).norm() <= 1e-10 * (1.0 + p.z.norm()) {
                    return Err(Error::InvalidInput(format!("poles {j} and {k} coincide at {}", p.z)));
                }
            }
        }
        Ok(Self { poles })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            poles: indices.iter().map(|&k| self.poles[k]).collect(),
        }
    }
}

/// Axis-aligned rectangle in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite())
            && re_max > re_min
            && im_max > im_min
            && im_min > 0.0;
        if !ok {
            return Err(Error::InvalidInput(format!(
                "search box [{re_min}, {re_max}] x [{im_min}, {im_max}] must be non-empty and lie strictly above the real axis"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    fn split(&self, fx: f64, fy: f64) -> [SearchBox; 4] {
        let xm = self.re_min + fx * (self.re_max - self.re_min);
        let ym = self.im_min + fy * (self.im_max - self.im_min);
        let b = |a, b, c, d| SearchBox {
            re_min: a,
            re_max: b,
            im_min: c,
            im_max: d,
        };
        [
            b(self.re_min, xm, self.im_min, ym),
            b(xm, self.re_max, self.im_min, ym),
            b(self.re_min, xm, ym, self.im_max),
            b(xm, self.re_max, ym, self.im_max),
        ]
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }
}

/// Knobs of the eigenvalue search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Boundary samples per unit length for the winding count.
    pub samples_per_unit: f64,
    pub max_depth: usize,
    /// Newton stops once `|s11|` falls below this.
    pub residual: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            samples_per_unit: 64.0,
            max_depth: 24,
            residual: 1e-9,
        }
    }
}

const MAX_ARG_STEP: f64 = PI / 3.0;
const MAX_BISECTIONS: usize = 12;

struct BoundaryZero;

fn winding<F>(s11: &F, cell: &SearchBox, opts: &SearchOptions) -> Result<std::result::Result<i64, BoundaryZero>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let corners = cell.corners();
    let mut pts = Vec::new();
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        let n = ((b - a).norm() * opts.samples_per_unit).ceil().max(8.0) as usize;
        pts.extend((0..n).map(|k| a + (b - a) * (k as f64 / n as f64)));
    }
    let vals: Vec<Complex64> = pts.par_iter().map(|&z| s11(z)).collect::<Result<_>>()?;
    let tiny = 1e-13;
    if vals.iter().any(|v| v.norm() < tiny) {
        return Ok(Err(BoundaryZero));
    }
    let mut total = 0.0;
    for k in 0..pts.len() {
        let kn = (k + 1) % pts.len();
        match arg_change(s11, pts[k], pts[kn], vals[k], vals[kn], 0)? {
            Some(d) => total += d,
            None => return Ok(Err(BoundaryZero)),
        }
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.2 {
        return Err(Error::SpectrumResolutionFailure(format!(
            "winding number {turns:.3} is not close to an integer"
        )));
    }
    Ok(Ok(rounded as i64))
}

fn arg_change<F>(
    s11: &F,
    za: Complex64,
    zb: Complex64,
    fa: Complex64,
    fb: Complex64,
    depth: usize,
) -> Result<Option<f64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let d = (fb / fa).arg();
    if d.abs() <= MAX_ARG_STEP {
        return Ok(Some(d));
    }
    if depth >= MAX_BISECTIONS {
        return Ok(None);
    }
    let zm = 0.5 * (za + zb);
    let fm = s11(zm)?;
    if fm.norm() < 1e-13 {
        return Ok(None);
    }
    let left = arg_change(s11, za, zm, fa, fm, depth + 1)?;
    let right = arg_change(s11, zm, zb, fm, fb, depth + 1)?;
    Ok(left.zip(right).map(|(l, r)| l + r))
}

fn derivative<F>(s11: &F, z: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let h = 1e-4 * (1.0 + z.norm());
    Ok((s11(z + h)? - s11(z - h)?) / (2.0 * h))
}

fn newton<F>(s11: &F, start: Complex64, opts: &SearchOptions) -> Result<Option<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut z = start;
    let mut best: Option<(Complex64, f64)> = None;
    for _ in 0..60 {
        if z.im <= 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Ok(None);
        }
        let f = s11(z)?;
        let r = f.norm();
        if best.map_or(true, |(_, b)| r < b) {
            best = Some((z, r));
        }
        if r < 1e-14 {
            break;
        }
        let d = derivative(s11, z)?;
        if d.norm() == 0.0 {
            break;
        }
        let step = f / d;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            if z.im > 0.0 {
                let r = s11(z)?.norm();
                if r < best.map_or(f64::INFINITY, |b| b.1) {
                    best = Some((z, r));
                }
            }
            break;
        }
    }
    Ok(best.filter(|&(_, r)| r < opts.residual).map(|(z, _)| z))
}

/// Locates the zeros of `s11` inside `search_box`, certified by the argument principle.
pub fn find_zeros<F>(s11: F, search_box: SearchBox, opts: SearchOptions) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    // Split slightly off-centre so that symmetric spectra do not land on cell edges.
    let fractions = [(0.4817, 0.5213), (0.5371, 0.4629), (0.4409, 0.4931)];
    let mut region = search_box;
    let mut total = None;
    for shrink in [0.0, 1e-3, 2.7e-3] {
        region.re_min = search_box.re_min - shrink;
        region.im_min = search_box.im_min * (1.0 - shrink);
        if let Ok(n) = winding(&s11, &region, &opts)? {
            total = Some(n);
            break;
        }
    }
    let total =
        total.ok_or_else(|| Error::SpectrumResolutionFailure("zero of s11 on the search-box boundary".into()))?;
    if total < 0 {
        return Err(Error::SpectrumResolutionFailure(format!(
            "negative winding number {total} on the search box"
        )));
    }
    let mut roots = Vec::new();
    let mut stack = vec![(region, total, 0usize)];
    while let Some((cell, count, depth)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            let centre = Complex64::new(0.5 * (cell.re_min + cell.re_max), 0.5 * (cell.im_min + cell.im_max));
            if let Some(z) = newton(&s11, centre, &opts)? {
                if cell.contains(z, 1e-9 * (1.0 + z.norm())) {
                    roots.push(z);
                    continue;
                }
            }
        }
        if depth >= opts.max_depth || cell.diameter() < 1e-10 {
            return Err(Error::SpectrumResolutionFailure(format!(
                "could not isolate {count} zero(s) near {}+{}i",
                cell.re_min, cell.im_min
            )));
        }
        let mut resolved = None;
        for &(fx, fy) in &fractions {
            let children = cell.split(fx, fy);
            let mut counts = Vec::with_capacity(4);
            let mut clean = true;
            for child in &children {
                match winding(&s11, child, &opts)? {
                    Ok(n) if n >= 0 => counts.push(n),
                    _ => {
                        clean = false;
                        break;
                    }
                }
            }
            if clean && counts.iter().sum::<i64>() == count {
                resolved = Some((children, counts));
                break;
            }
        }
        let (children, counts) = resolved.ok_or_else(|| {
            Error::SpectrumResolutionFailure(format!(
                "sub-cell winding numbers do not add up to {count} near {}+{}i",
                cell.re_min, cell.im_min
            ))
        })?;
        for (child, n) in children.into_iter().zip(counts) {
            stack.push((child, n, depth + 1));
        }
    }
    roots.sort_by(|a, b| a.im.total_cmp(&b.im).reverse().then(a.re.total_cmp(&b.re)));
    for i in 1..roots.len() {
        if (roots[i] - roots[i - 1]).norm() < 1e-7 {
            return Err(Error::SpectrumResolutionFailure(format!(
                "zero near {} found twice",
                roots[i]
            )));
        }
    }
    if roots.len() as i64 != total {
        return Err(Error::SpectrumResolutionFailure(format!(
            "argument principle counts {total} zero(s) but {} were located",
            roots.len()
        )));
    }
    Ok(roots)
}

/// Norming constant at a simple zero `zk`: `φ₋,₁ = b φ₊,₂` at the anchor, `c = b / s11'(zk)`.
pub fn norming_constant(profile: &InitialProfile, zk: Complex64) -> Result<Complex64> {
    let (left, right) = analytic_columns(profile, zk)?;
    let den = right[0].conj() * right[0] + right[1].conj() * right[1];
    let ratio = (right[0].conj() * left[0] + right[1].conj() * left[1]) / den;
    let b = ratio * (Complex64::new(0.0, -2.0) * zk * profile.anchor_x()).exp();
    let ds11 = derivative(&|z| s11_at(profile, z), zk)?;
    if ds11.norm() < 1e-12 {
        return Err(Error::Domain(format!("s11'({zk}) vanishes: the zero is not simple")));
    }
    Ok(b / ds11)
}

pub fn find_discrete_spectrum(profile: &InitialProfile, search_box: SearchBox) -> Result<DiscreteSpectrum> {
    find_discrete_spectrum_with(profile, search_box, SearchOptions::default())
}

pub fn find_discrete_spectrum_with(
    profile: &InitialProfile,
    search_box: SearchBox,
    opts: SearchOptions,
) -> Result<DiscreteSpectrum> {
    let zeros = find_zeros(|z| s11_at(profile, z), search_box, opts)?;
    let poles = zeros
        .into_iter()
        .map(|z| norming_constant(profile, z).map(|c| Pole { z, c }))
        .collect::<Result<Vec<_>>>()?;
    DiscreteSpectrum::new(poles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sech(amp: f64) -> InitialProfile {
        InitialProfile::from_fn(-40.0, 40.0, 4096, |x| c(amp / x.cosh(), 0.0)).unwrap()
    }

    #[test]
    fn polynomial_zeros_are_found() {
        let roots = [c(0.3, 0.7), c(-1.1, 0.2), c(0.3, 1.5)];
        let f = move |z: Complex64| Ok(roots.iter().fold(c(1.0, 0.0), |acc, r| acc * (z - r)));
        let found = find_zeros(
            f,
            SearchBox::new(-2.0, 2.0, 0.05, 2.0).unwrap(),
            SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(found.len(), 3);
        for r in roots {
            assert!(found.iter().any(|z| (z - r).norm() < 1e-10));
        }
    }

    #[test]
    fn zero_profile_has_no_spectrum() {
        let p = InitialProfile::from_fn(-10.0, 10.0, 512, |_| c(0.0, 0.0)).unwrap();
        let s = find_discrete_spectrum(&p, SearchBox::new(-3.0, 3.0, 0.05, 3.0).unwrap()).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn sech_has_one_eigenvalue() {
        let s = find_discrete_spectrum(&sech(1.0), SearchBox::new(-3.0, 3.0, 0.05, 3.0).unwrap()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.poles()[0].z - c(0.0, 0.5)).norm() < 1e-6);
    }

    #[test]
    fn sech_ladder_for_amplitude_2_4() {
        let s = find_discrete_spectrum(&sech(2.4), SearchBox::new(-3.0, 3.0, 0.05, 3.0).unwrap()).unwrap();
        assert_eq!(s.len(), 2);
        for (p, expected) in s.poles().iter().zip([1.9, 0.9]) {
            assert!(p.z.re.abs() < 1e-6);
            assert!((p.z.im - expected).abs() < 1e-5, "{}", p.z);
        }
    }

    #[test]
    fn norming_constant_of_sech() {
        // For q = sech x the norming constant at i/2 is c = −i (from the one-soliton form).
        let s = find_discrete_spectrum(&sech(1.0), SearchBox::new(-1.0, 1.0, 0.1, 1.0).unwrap()).unwrap();
        assert!((s.poles()[0].c - c(0.0, -1.0)).norm() < 1e-6, "{}", s.poles()[0].c);
    }

    #[test]
    fn spectrum_validation() {
        let p = |z, c| Pole { z, c };
        assert!(DiscreteSpectrum::new(vec![p(c(0.0, -1.0), c(1.0, 0.0))]).is_err());
        assert!(DiscreteSpectrum::new(vec![p(c(0.0, 1.0), c(0.0, 0.0))]).is_err());
        assert!(DiscreteSpectrum::new(vec![p(c(0.0, 1.0), c(1.0, 0.0)), p(c(0.0, 1.0), c(2.0, 0.0))]).is_err());
    }

    #[test]
    fn bad_box_is_rejected() {
        assert!(SearchBox::new(-1.0, 1.0, 0.0, 1.0).is_err());
        assert!(SearchBox::new(1.0, -1.0, 0.1, 1.0).is_err());
    }
}

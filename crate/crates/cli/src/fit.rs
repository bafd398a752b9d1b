//! Least-squares decay fits.

use anyhow::bail;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub ts: Vec<f64>,
    pub errs: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

fn check(ts: &[f64], errs: &[f64]) -> anyhow::Result<()> {
    if ts.len() != errs.len() {
        bail!("{} times but {} errors", ts.len(), errs.len());
    }
    if ts.len() < 5 {
        bail!("a decay fit needs at least 5 samples (got {})", ts.len());
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        bail!("sample times must be strictly increasing");
    }
    if let Some(e) = errs.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
        bail!("errors must be positive and finite (got {e})");
    }
    Ok(())
}

fn line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

impl DecayFit {
    /// `log e = intercept + slope · log t`.
    pub fn power_law(ts: &[f64], errs: &[f64]) -> anyhow::Result<Self> {
        check(ts, errs)?;
        if ts[0] <= 0.0 {
            bail!("power-law fits need positive times");
        }
        let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let ly: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (slope, intercept, r2) = line(&lx, &ly);
        Ok(Self {
            ts: ts.to_vec(),
            errs: errs.to_vec(),
            slope,
            intercept,
            r2,
        })
    }

    /// `log e = intercept + slope · t`; the decay rate is `−slope`.
    pub fn exponential(ts: &[f64], errs: &[f64]) -> anyhow::Result<Self> {
        check(ts, errs)?;
        let ly: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (slope, intercept, r2) = line(ts, &ly);
        Ok(Self {
            ts: ts.to_vec(),
            errs: errs.to_vec(),
            slope,
            intercept,
            r2,
        })
    }
}

/// `t_min · factor^j` up to `t_max`, with `t_max` appended when missing.
pub fn geometric_times(t_min: f64, t_max: f64, factor: f64) -> Vec<f64> {
    let mut ts = Vec::new();
    let mut t = t_min;
    while t < t_max * (1.0 - 1e-12) {
        ts.push(t);
        t *= factor;
    }
    ts.push(t_max);
    ts
}

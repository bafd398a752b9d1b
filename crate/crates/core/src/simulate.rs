//! Fourier pseudo-spectral integrator for the Hirota equation on a periodic
//! box, with integrating-factor RK4, conserved quantities and a PDE residual.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::params::Params;

const MIN_MODES: usize = 256;
const STABILITY_LIMIT: f64 = 2.5;
/// Fraction of the half-width treated as the boundary layer.
const EDGE_FRACTION: f64 = 0.9;
pub const BOUNDARY_FLAG: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub half_width: f64,
    pub modes: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Kept fraction of the Nyquist band on nonlinear products.
    pub dealias: f64,
}

impl SimConfig {
    pub fn new(half_width: f64, modes: usize, dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            half_width,
            modes,
            dt,
            t_end,
            dealias: 2.0 / 3.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_dealias(mut self, fraction: f64) -> Result<Self> {
        self.dealias = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "half_width must be positive (got {})",
                self.half_width
            )));
        }
        if self.modes < MIN_MODES || !self.modes.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "modes must be a power of two ≥ {MIN_MODES} (got {})",
                self.modes
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("dt must be positive (got {})", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "t_end must be non-negative (got {})",
                self.t_end
            )));
        }
        if !(self.dealias > 0.0 && self.dealias <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "dealias fraction must lie in (0, 1] (got {})",
                self.dealias
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.modes as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.modes).map(|j| -self.half_width + j as f64 * h).collect()
    }
}

/// Field samples at `x_j = −L + j·2L/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub half_width: f64,
    pub q: Vec<Complex64>,
}

impl FieldState {
    pub fn new(t: f64, half_width: f64, q: Vec<Complex64>) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidInput(format!(
                "half_width must be positive (got {half_width})"
            )));
        }
        if q.len() < 2 || !q.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "sample count must be a power of two (got {})",
                q.len()
            )));
        }
        if let Some(j) = q.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput(format!("sample {j} is not finite")));
        }
        Ok(Self { t, half_width, q })
    }

    pub fn from_fn(half_width: f64, modes: usize, t: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let h = 2.0 * half_width / modes as f64;
        let q = (0..modes).map(|j| f(-half_width + j as f64 * h)).collect();
        Self::new(t, half_width, q)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.q.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.q.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(∫|q|² dx)^{1/2}` by the periodic trapezoid rule.
    pub fn l2_norm(&self) -> f64 {
        (self.spacing() * self.q.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }
}

/// FFT plans and wavenumbers for one periodic grid.
struct Spectral {
    n: usize,
    k: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Spectral {
    fn new(n: usize, half_width: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        let dk = PI / half_width;
        let k = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                m * dk
            })
            .collect();
        Self {
            n,
            k,
            forward,
            inverse,
            scratch: vec![c(0.0, 0.0); scratch_len],
        }
    }

    fn fft(&mut self, v: &mut [Complex64]) {
        self.forward.process_with_scratch(v, &mut self.scratch);
    }

    fn ifft(&mut self, v: &mut [Complex64]) {
        self.inverse.process_with_scratch(v, &mut self.scratch);
        let s = 1.0 / self.n as f64;
        for x in v.iter_mut() {
            *x *= s;
        }
    }

    /// `∂ₓ^order q` with the Nyquist mode dropped for odd orders.
    fn derivative(&mut self, q: &[Complex64], order: u32) -> Vec<Complex64> {
        let mut v = q.to_vec();
        self.fft(&mut v);
        for (j, x) in v.iter_mut().enumerate() {
            if order % 2 == 1 && j == self.n / 2 {
                *x = c(0.0, 0.0);
            } else {
                *x *= c(0.0, self.k[j]).powu(order);
            }
        }
        self.ifft(&mut v);
        v
    }
}

/// Run-level diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SimDiagnostics {
    pub steps: usize,
    /// `dt·(2|α| + 6|β| k_cut)·max|q₀|²`, checked against 2.5 at start.
    pub stability_number: f64,
    /// Largest `max_{|x| ≥ 0.9L} |q| / max |q|` seen at any step.
    pub boundary_ratio: f64,
    pub boundary_flagged: bool,
}

/// Integrating-factor RK4 stepper owning its state in Fourier space.
pub struct Simulation {
    params: Params,
    cfg: SimConfig,
    spectral: Spectral,
    mask: Vec<bool>,
    symbol: Vec<Complex64>,
    state: Vec<Complex64>,
    t: f64,
    cached_dt: f64,
    half_step: Vec<Complex64>,
    diagnostics: SimDiagnostics,
}

impl Simulation {
    pub fn new(q0: &FieldState, cfg: &SimConfig, p: &Params) -> Result<Self> {
        cfg.validate()?;
        if q0.len() != cfg.modes || (q0.half_width - cfg.half_width).abs() > 1e-12 * cfg.half_width {
            return Err(Error::InvalidInput(format!(
                "initial field has {} samples on half-width {}, config expects {} on {}",
                q0.len(),
                q0.half_width,
                cfg.modes,
                cfg.half_width
            )));
        }
        let n = cfg.modes;
        let mut spectral = Spectral::new(n, cfg.half_width);
        let k_cut = cfg.dealias * PI / cfg.spacing();
        let mask: Vec<bool> = spectral.k.iter().map(|&k| k.abs() <= k_cut * (1.0 + 1e-12)).collect();
        let amp2 = q0.max_abs().powi(2);
        let stability_number = cfg.dt * (2.0 * p.alpha.abs() + 6.0 * p.beta.abs() * k_cut) * amp2;
        if stability_number >= STABILITY_LIMIT {
            return Err(Error::InvalidInput(format!(
                "dt = {} is unstable for this amplitude and resolution (stability number {stability_number:.3} ≥ {STABILITY_LIMIT})",
                cfg.dt
            )));
        }
        let symbol = spectral
            .k
            .iter()
            .map(|&k| c(0.0, -p.alpha * k * k + p.beta * k * k * k))
            .collect();
        let mut state = q0.q.clone();
        spectral.fft(&mut state);
        for (v, &keep) in state.iter_mut().zip(&mask) {
            if !keep {
                *v = c(0.0, 0.0);
            }
        }
        let mut sim = Self {
            params: *p,
            cfg: *cfg,
            spectral,
            mask,
            symbol,
            state,
            t: q0.t,
            cached_dt: f64::NAN,
            half_step: Vec::new(),
            diagnostics: SimDiagnostics {
                steps: 0,
                stability_number,
                boundary_ratio: 0.0,
                boundary_flagged: false,
            },
        };
        let q = sim.physical(&sim.state.clone());
        sim.record_boundary(&q);
        Ok(sim)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn diagnostics(&self) -> &SimDiagnostics {
        &self.diagnostics
    }

    pub fn state(&mut self) -> FieldState {
        let q = self.physical(&self.state.clone());
        FieldState {
            t: self.t,
            half_width: self.cfg.half_width,
            q,
        }
    }

    fn physical(&mut self, hat: &[Complex64]) -> Vec<Complex64> {
        let mut q = hat.to_vec();
        self.spectral.ifft(&mut q);
        q
    }

    fn record_boundary(&mut self, q: &[Complex64]) {
        let n = q.len();
        let h = self.cfg.spacing();
        let edge = EDGE_FRACTION * self.cfg.half_width;
        let mut peak = 0.0f64;
        let mut rim = 0.0f64;
        for (j, v) in q.iter().enumerate() {
            let a = v.norm();
            peak = peak.max(a);
            let x = -self.cfg.half_width + j as f64 * h;
            if x.abs() >= edge {
                rim = rim.max(a);
            }
        }
        debug_assert_eq!(n, self.cfg.modes);
        if peak > 0.0 {
            let ratio = rim / peak;
            self.diagnostics.boundary_ratio = self.diagnostics.boundary_ratio.max(ratio);
            self.diagnostics.boundary_flagged = self.diagnostics.boundary_ratio > BOUNDARY_FLAG;
        }
    }

    // Dealiased 2iα|q|²q − 6β|q|²q_x in Fourier space; also returns q in physical space.
    fn nonlinear(&mut self, hat: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let q = self.physical(hat);
        let mut qx: Vec<Complex64> = hat.iter().zip(&self.spectral.k).map(|(v, &k)| v * c(0.0, k)).collect();
        self.spectral.ifft(&mut qx);
        let (a, b) = (self.params.alpha, self.params.beta);
        let mut out: Vec<Complex64> = q
            .iter()
            .zip(&qx)
            .map(|(&u, &ux)| {
                let m = u.norm_sqr();
                c(0.0, 2.0 * a * m) * u - 6.0 * b * m * ux
            })
            .collect();
        self.spectral.fft(&mut out);
        for (v, &keep) in out.iter_mut().zip(&self.mask) {
            if !keep {
                *v = c(0.0, 0.0);
            }
        }
        (out, q)
    }

    fn propagators(&mut self, dt: f64) {
        if dt != self.cached_dt {
            self.half_step = self.symbol.iter().map(|&l| (l * (dt / 2.0)).exp()).collect();
            self.cached_dt = dt;
        }
    }

    fn step(&mut self, dt: f64) -> Result<()> {
        self.propagators(dt);
        let e = self.half_step.clone();
        let u = self.state.clone();
        let (k1, q) = self.nonlinear(&u);
        self.record_boundary(&q);
        let arg: Vec<Complex64> = (0..u.len()).map(|j| e[j] * (u[j] + 0.5 * dt * k1[j])).collect();
        let (k2, _) = self.nonlinear(&arg);
        let eu: Vec<Complex64> = (0..u.len()).map(|j| e[j] * u[j]).collect();
        let arg: Vec<Complex64> = (0..u.len()).map(|j| eu[j] + 0.5 * dt * k2[j]).collect();
        let (k3, _) = self.nonlinear(&arg);
        let arg: Vec<Complex64> = (0..u.len()).map(|j| e[j] * (eu[j] + dt * k3[j])).collect();
        let (k4, _) = self.nonlinear(&arg);
        let next: Vec<Complex64> = (0..u.len())
            .map(|j| {
                let e2 = e[j] * e[j];
                e2 * u[j] + dt / 6.0 * (e2 * k1[j] + 2.0 * e[j] * (k2[j] + k3[j]) + k4[j])
            })
            .collect();
        if next
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite() || v.norm() > 1e150)
        {
            return Err(Error::BlowupDetected { last_good_t: self.t });
        }
        self.state = next;
        self.t += dt;
        self.diagnostics.steps += 1;
        Ok(())
    }

    /// Advances to `target` in equal steps no longer than `cfg.dt`.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        let span = target - self.t;
        if span < -1e-12 * (1.0 + target.abs()) {
            return Err(Error::InvalidInput(format!(
                "cannot step back from t = {} to {target}",
                self.t
            )));
        }
        if span <= 1e-12 * (1.0 + target.abs()) {
            return Ok(());
        }
        let steps = (span / self.cfg.dt - 1e-9).ceil().max(1.0) as usize;
        let dt = span / steps as f64;
        let start = self.t;
        for j in 1..=steps {
            self.step(dt)?;
            // avoid accumulated round-off in the clock
            self.t = start + j as f64 * dt;
        }
        let q = self.physical(&self.state.clone());
        self.record_boundary(&q);
        Ok(())
    }
}

/// Result of [`evolve`].
#[derive(Debug, Clone)]
pub struct Evolution {
    pub final_state: FieldState,
    pub snapshots: Vec<FieldState>,
    pub diagnostics: SimDiagnostics,
}

/// Evolves `q0` to `cfg.t_end`, recording the field at each of `snapshot_times`
/// (which must lie in `[q0.t, t_end]`).
pub fn evolve(q0: &FieldState, cfg: &SimConfig, p: &Params, snapshot_times: &[f64]) -> Result<Evolution> {
    let mut times = snapshot_times.to_vec();
    times.sort_by(f64::total_cmp);
    if let Some(&bad) = times.iter().find(|&&s| s < q0.t || s > cfg.t_end || !s.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "snapshot time {bad} lies outside [{}, {}]",
            q0.t, cfg.t_end
        )));
    }
    let mut sim = Simulation::new(q0, cfg, p)?;
    let mut snapshots = Vec::with_capacity(times.len());
    for s in times {
        sim.advance_to(s)?;
        snapshots.push(sim.state());
    }
    sim.advance_to(cfg.t_end)?;
    Ok(Evolution {
        final_state: sim.state(),
        snapshots,
        diagnostics: sim.diagnostics().clone(),
    })
}

/// `(I₁, I₂, I₃)` with spectral derivatives and the periodic trapezoid rule:
/// `I₁ = −(i/2)∫|q|²`, `I₂ = −(1/4)∫ q q̄ₓ`, `I₃ = (i/8)∫ (|q|⁴ + q q̄ₓₓ)`.
pub fn conserved_quantities(state: &FieldState) -> [Complex64; 3] {
    let n = state.len();
    let h = state.spacing();
    let mut spectral = Spectral::new(n, state.half_width);
    let qx = spectral.derivative(&state.q, 1);
    let qxx = spectral.derivative(&state.q, 2);
    let mut sums = [c(0.0, 0.0); 3];
    for j in 0..n {
        let q = state.q[j];
        sums[0] += q.norm_sqr();
        sums[1] += q * qx[j].conj();
        sums[2] += q.norm_sqr().powi(2) + q * qxx[j].conj();
    }
    [
        c(0.0, -0.5) * sums[0] * h,
        -0.25 * sums[1] * h,
        c(0.0, 0.125) * sums[2] * h,
    ]
}

/// L² norm of `i q_t + α(q_xx + 2|q|²q) + iβ(q_xxx + 6|q|²q_x)` at the middle
/// snapshot, with a centred time difference.
pub fn pde_residual(before: &FieldState, middle: &FieldState, after: &FieldState, p: &Params) -> Result<f64> {
    let n = middle.len();
    if before.len() != n || after.len() != n {
        return Err(Error::InvalidInput("snapshots have different sizes".into()));
    }
    let (d1, d2) = (middle.t - before.t, after.t - middle.t);
    if !(d1 > 0.0) || (d1 - d2).abs() > 1e-9 * d1 {
        return Err(Error::InvalidInput(format!(
            "snapshots must be equally spaced in time (got steps {d1} and {d2})"
        )));
    }
    let mut spectral = Spectral::new(n, middle.half_width);
    let q = &middle.q;
    let qx = spectral.derivative(q, 1);
    let qxx = spectral.derivative(q, 2);
    let qxxx = spectral.derivative(q, 3);
    let i = Complex64::i();
    let mut sum = 0.0;
    for j in 0..n {
        let m = q[j].norm_sqr();
        let qt = (after.q[j] - before.q[j]) / (2.0 * d1);
        let r = i * qt + p.alpha * (qxx[j] + 2.0 * m * q[j]) + i * p.beta * (qxxx[j] + 6.0 * m * qx[j]);
        sum += r.norm_sqr();
    }
    Ok((sum * middle.spacing()).sqrt())
}

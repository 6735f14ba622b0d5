//! Fields on the temporal lattice `t_n = t0 + 2 z n` with continuous space.
//!
//! The equation of motion is `∂x^2 φ = (m/z)(1 - St^-1) φ`, so one step
//! solves `(1 - (z/m)∂x^2) φ_{n+1} = φ_n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::SolutionField;
use crate::error::{Error, Result};
use crate::op::OpElement;

/// Per-step amplification of the Fourier mode `e^{iκx}`.
pub fn step_multiplier(kappa: f64, z: f64, m: f64) -> f64 {
    1.0 / (1.0 + (z / m) * kappa * kappa)
}

/// A periodic field on `[0, period)` stored as Fourier amplitudes, keyed by
/// the integer wavenumber `k` with `κ = 2πk / period`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    pub period: f64,
    pub z: f64,
    pub mass: f64,
    pub a: f64,
    pub time: f64,
    pub modes: BTreeMap<i64, Complex64>,
    /// The level one step earlier, once a step has been taken.
    pub previous: Option<BTreeMap<i64, Complex64>>,
}

impl SpectralField {
    pub fn new(modes: BTreeMap<i64, Complex64>, period: f64, z: f64, m: f64, a: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::InvalidStep(format!("z must be positive, got {z}")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
        }
        Ok(Self { period, z, mass: m, a, time: 0.0, modes, previous: None })
    }

    /// Transforms `count` equally spaced samples over one period.
    pub fn from_samples(samples: &[Complex64], period: f64, z: f64, m: f64, a: f64) -> Result<Self> {
        let n = samples.len();
        if n < 4 {
            return Err(Error::InvalidParameter(format!("need at least 4 samples, got {n}")));
        }
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let modes = buf
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                let signed = if k <= n / 2 { k as i64 } else { k as i64 - n as i64 };
                (signed, c / n as f64)
            })
            .filter(|(_, c)| c.norm() > 0.0)
            .collect();
        Self::new(modes, period, z, m, a)
    }

    pub fn kappa(&self, k: i64) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.period
    }

    /// Samples on `count` points `x_j = j period / count`.
    pub fn samples(&self, count: usize) -> Vec<(f64, Complex64)> {
        (0..count)
            .map(|j| {
                let x = self.period * j as f64 / count as f64;
                let v = self.modes.iter().map(|(&k, &c)| c * Complex64::from_polar(1.0, self.kappa(k) * x)).sum();
                (x, v)
            })
            .collect()
    }

    /// Exact solution of the continuum heat equation `∂t φ = ∂x^2 φ / (2m)`
    /// from the same initial amplitudes, evaluated at `time`.
    pub fn heat_kernel(&self, initial: &BTreeMap<i64, Complex64>, time: f64) -> BTreeMap<i64, Complex64> {
        initial.iter().map(|(&k, &c)| (k, c * (-self.kappa(k).powi(2) * time / (2.0 * self.mass)).exp())).collect()
    }

    fn multiply(&self, modes: &BTreeMap<i64, Complex64>, f: impl Fn(f64) -> Complex64) -> BTreeMap<i64, Complex64> {
        modes.iter().map(|(&k, &c)| (k, c * f(self.kappa(k)))).collect()
    }
}

/// Advances the field by one lattice step `2z`.
pub fn time_step(field: &SpectralField) -> SpectralField {
    let (z, m) = (field.z, field.mass);
    SpectralField {
        modes: field.multiply(&field.modes, |kappa| Complex64::new(step_multiplier(kappa, z, m), 0.0)),
        previous: Some(field.modes.clone()),
        time: field.time + 2.0 * z,
        ..field.clone()
    }
}

fn max_norm(modes: &BTreeMap<i64, Complex64>) -> f64 {
    modes.values().map(|c| c.norm()).fold(0.0, f64::max)
}

impl SolutionField for SpectralField {
    /// Needs a previous level; a fresh field is a solution vacuously.
    fn residual(&self) -> f64 {
        let Some(prev) = &self.previous else { return 0.0 };
        let ratio = self.mass / self.z;
        let r = self
            .modes
            .keys()
            .chain(prev.keys())
            .map(|k| {
                let now = self.modes.get(k).copied().unwrap_or_default();
                let before = prev.get(k).copied().unwrap_or_default();
                (-self.kappa(*k).powi(2) * now - ratio * (now - before)).norm()
            })
            .fold(0.0, f64::max);
        let scale = max_norm(&self.modes).max(max_norm(prev));
        if scale > 0.0 {
            r / scale
        } else {
            r
        }
    }

    fn is_zero(&self) -> bool {
        self.modes.values().all(|c| *c == Complex64::default())
    }

    /// Supports operators built from `dx`, time shifts and constants; a time
    /// shift by `k` steps multiplies each mode by the `k`-th power of its
    /// step multiplier.
    fn apply(&self, op: &OpElement) -> Result<Self> {
        let mut out: BTreeMap<i64, Complex64> = BTreeMap::new();
        let mut prev_out: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (mono, coeff) in op.terms() {
            let [e] = mono.0.as_slice() else {
                return Err(Error::UnsupportedOperator("spectral fields take single-copy operators".into()));
            };
            if e.x > 0 || e.t > 0 || e.dt > 0 || e.sx != 0 {
                return Err(Error::UnsupportedOperator(
                    "spectral fields support only dx, time shifts and constants".into(),
                ));
            }
            if e.st_half % 2 != 0 {
                return Err(Error::UnsupportedOperator("half-step time shifts are off the lattice".into()));
            }
            let c = coeff.eval_f64(self.z, self.mass, self.a);
            let steps = e.st_half / 2;
            let f = |kappa: f64| {
                c * Complex64::new(0.0, kappa).powu(e.dx) * step_multiplier(kappa, self.z, self.mass).powi(steps)
            };
            for (k, v) in self.multiply(&self.modes, f) {
                *out.entry(k).or_default() += v;
            }
            if let Some(prev) = &self.previous {
                for (k, v) in self.multiply(prev, f) {
                    *prev_out.entry(k).or_default() += v;
                }
            }
        }
        Ok(Self { modes: out, previous: self.previous.as_ref().map(|_| prev_out), ..self.clone() })
    }
}

/// A trajectory of polynomials in `x` on the levels `t0 + 2 z n`.
///
/// Generators with explicit `x` and `t` act here: `St^k` reads level `n+k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTrajectory {
    pub t0: f64,
    pub z: f64,
    pub mass: f64,
    pub a: f64,
    /// `levels[n][p]` is the coefficient of `x^p` at level `n`.
    pub levels: Vec<Vec<f64>>,
}

fn poly_trim(mut p: Vec<f64>) -> Vec<f64> {
    while p.last() == Some(&0.0) {
        p.pop();
    }
    p
}

fn poly_deriv(p: &[f64], order: u32) -> Vec<f64> {
    let mut q = p.to_vec();
    for _ in 0..order {
        q = q.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    }
    q
}

impl PolyTrajectory {
    /// The constant solution `φ = value` over `levels` levels.
    pub fn constant(value: f64, levels: usize, t0: f64, z: f64, m: f64, a: f64) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParameter("a trajectory needs at least 2 levels".into()));
        }
        if !(z.is_finite() && z > 0.0) || !(m.is_finite() && m != 0.0) {
            return Err(Error::InvalidParameter(format!("need z > 0 and m != 0, got z = {z}, m = {m}")));
        }
        Ok(Self { t0, z, mass: m, a, levels: vec![poly_trim(vec![value]); levels] })
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + 2.0 * self.z * n as f64
    }

    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.levels[n].iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn scale(&self) -> f64 {
        self.levels.iter().flatten().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

impl SolutionField for PolyTrajectory {
    /// Coefficientwise max of `φ_n'' - (m/z)(φ_n - φ_{n-1})` over `n >= 1`.
    fn residual(&self) -> f64 {
        let ratio = self.mass / self.z;
        let mut r: f64 = 0.0;
        for n in 1..self.levels.len() {
            let d2 = poly_deriv(&self.levels[n], 2);
            let len = self.levels[n].len().max(self.levels[n - 1].len());
            for p in 0..len {
                let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
                let v = get(&d2, p) - ratio * (get(&self.levels[n], p) - get(&self.levels[n - 1], p));
                r = r.max(v.abs());
            }
        }
        let scale = self.scale();
        if scale > 0.0 {
            r / scale
        } else {
            r
        }
    }

    fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.is_empty())
    }

    fn apply(&self, op: &OpElement) -> Result<Self> {
        struct Term {
            c: f64,
            x: u32,
            t: u32,
            dx: u32,
            shift: i64,
        }
        let mut terms = Vec::new();
        for (mono, coeff) in op.terms() {
            let [e] = mono.0.as_slice() else {
                return Err(Error::UnsupportedOperator("trajectories take single-copy operators".into()));
            };
            if e.dt > 0 {
                return Err(Error::UnsupportedOperator(
                    "a continuous time derivative has no meaning on a time-lattice trajectory".into(),
                ));
            }
            if e.sx != 0 {
                return Err(Error::UnsupportedOperator("space shifts are not defined on this model".into()));
            }
            if e.st_half % 2 != 0 {
                return Err(Error::UnsupportedOperator("half-step time shifts are off the lattice".into()));
            }
            let c = coeff.eval_f64(self.z, self.mass, self.a);
            terms.push(Term { c, x: e.x, t: e.t, dx: e.dx, shift: (e.st_half / 2) as i64 });
        }
        let len = self.levels.len() as i64;
        let lo = terms.iter().map(|t| -t.shift).fold(0, i64::max);
        let hi = terms.iter().map(|t| len - 1 - t.shift).fold(len - 1, i64::min);
        if hi - lo + 1 < 2 {
            return Err(Error::UnsupportedOperator("trajectory too short for this operator".into()));
        }
        let mut levels = Vec::new();
        for n in lo..=hi {
            let tn = self.time(n as usize);
            let mut acc: Vec<f64> = Vec::new();
            for term in &terms {
                let src = poly_deriv(&self.levels[(n + term.shift) as usize], term.dx);
                let f = term.c * tn.powi(term.t as i32);
                for (p, c) in src.iter().enumerate() {
                    let q = p + term.x as usize;
                    if acc.len() <= q {
                        acc.resize(q + 1, 0.0);
                    }
                    acc[q] += f * c;
                }
            }
            levels.push(poly_trim(acc));
        }
        Ok(Self { t0: self.time(lo as usize), levels, ..self.clone() })
    }
}

/// Error of `steps` lattice steps against the heat kernel at `T = 2 z steps`,
/// relative to the initial max amplitude.
pub fn heat_kernel_error(initial: &SpectralField, steps: usize) -> f64 {
    let mut f = initial.clone();
    for _ in 0..steps {
        f = time_step(&f);
    }
    let exact = initial.heat_kernel(&initial.modes, f.time - initial.time);
    let err = f.modes.iter().map(|(k, c)| (c - exact[k]).norm()).fold(0.0, f64::max);
    err / max_norm(&initial.modes)
}

/// Least-squares slope of `log(error)` against `log(z)` over a sequence of
/// halvings of `z` at fixed final time.
pub fn convergence_slope(
    modes: &BTreeMap<i64, Complex64>,
    period: f64,
    m: f64,
    final_time: f64,
    halvings: u32,
) -> Result<f64> {
    let mut pts = Vec::new();
    let mut steps = 4usize;
    for _ in 0..=halvings {
        let z = final_time / (2.0 * steps as f64);
        let f = SpectralField::new(modes.clone(), period, z, m, 0.0)?;
        pts.push((z.ln(), heat_kernel_error(&f, steps).ln()));
        steps *= 2;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

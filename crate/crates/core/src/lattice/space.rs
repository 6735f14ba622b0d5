//! Fields on the spatial lattice `x_j = x0 + j z` with continuous time.
//!
//! The equation of motion is `(1/z^2)(1 - Sx^-1)^2 φ = 2m ∂t φ`, that is
//! `∂t φ_j = (φ_j - 2φ_{j-1} + φ_{j-2}) / (2 m z^2)`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::SolutionField;
use crate::error::{Error, Result};
use crate::op::{OpElement, OpMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Indices wrap modulo the point count.
    Periodic,
    /// A finite window; the two leftmost points act as ghost cells for the
    /// residual, and every shift narrows the window.
    Open,
}

/// A snapshot `φ(x_j, t)` together with its time derivative `∂t φ(x_j, t)`.
///
/// Carrying the rates makes the residual a genuine check: a field produced
/// by a generator gets its rates from the algebra, not from the equation.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceGridField {
    pub origin: f64,
    pub spacing: f64,
    pub time: f64,
    pub mass: f64,
    pub a: f64,
    pub boundary: Boundary,
    pub values: Vec<Complex64>,
    pub rates: Vec<Complex64>,
}

/// `λ(θ) = (1 - e^{-iθ})^2 / (2 m z^2)`, the rate of the lattice mode `e^{iθj}`.
pub fn mode_rate(theta: f64, z: f64, m: f64) -> Complex64 {
    let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -theta);
    w * w / (2.0 * m * z * z)
}

fn check_grid(count: usize, z: f64, m: f64) -> Result<()> {
    if count < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 lattice points, got {count}")));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::InvalidParameter(format!("lattice spacing must be positive, got {z}")));
    }
    if !(m.is_finite() && m != 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be nonzero, got {m}")));
    }
    Ok(())
}

impl SpaceGridField {
    /// Builds a field from samples and fills the rates from the equation of
    /// motion, so the result is a solution snapshot by construction.
    pub fn from_values(
        values: Vec<Complex64>,
        origin: f64,
        z: f64,
        m: f64,
        a: f64,
        time: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        check_grid(values.len(), z, m)?;
        let mut f = Self { origin, spacing: z, time, mass: m, a, boundary, rates: Vec::new(), values };
        f.rates = f.equation_rates();
        Ok(f)
    }

    /// Samples `init` on `count` points starting at `origin`.
    #[allow(clippy::too_many_arguments)]
    pub fn sample(
        init: impl Fn(f64) -> Complex64,
        count: usize,
        origin: f64,
        z: f64,
        m: f64,
        a: f64,
        time: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        let values = (0..count).map(|j| init(origin + j as f64 * z)).collect();
        Self::from_values(values, origin, z, m, a, time, boundary)
    }

    /// The periodic lattice mode `e^{2πi k j / N}`.
    pub fn mode(k: i64, count: usize, z: f64, m: f64, a: f64) -> Result<Self> {
        check_grid(count, z, m)?;
        let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
        let values = (0..count).map(|j| Complex64::from_polar(1.0, theta * j as f64)).collect();
        Self::from_values(values, 0.0, z, m, a, 0.0, Boundary::Periodic)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    fn at(&self, v: &[Complex64], j: i64) -> Complex64 {
        let n = v.len() as i64;
        v[j.rem_euclid(n) as usize]
    }

    /// First index at which the lattice equation can be evaluated.
    fn first_checked(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => 0,
            Boundary::Open => 2,
        }
    }

    fn second_difference(&self, j: usize) -> Complex64 {
        let j = j as i64;
        let v = &self.values;
        (self.at(v, j) - 2.0 * self.at(v, j - 1) + self.at(v, j - 2)) / (self.spacing * self.spacing)
    }

    /// Rates implied by the equation of motion. For an open window the two
    /// ghost cells get the rate of the nearest evaluable point.
    pub fn equation_rates(&self) -> Vec<Complex64> {
        let first = self.first_checked();
        let mut r: Vec<Complex64> = (0..self.len())
            .map(|j| if j >= first { self.second_difference(j) / (2.0 * self.mass) } else { Complex64::default() })
            .collect();
        if first > 0 && self.len() > first {
            for j in 0..first {
                r[j] = r[first];
            }
        }
        r
    }

    /// Applies the shift polynomial `Σ w_o Sx^o` at every index of `window`.
    fn stencil(&self, weights: &[(i64, f64)], window: std::ops::RangeInclusive<usize>) -> Vec<Complex64> {
        window.map(|j| weights.iter().map(|&(o, w)| w * self.at(&self.values, j as i64 + o)).sum()).collect()
    }

    /// `(iκ)^order` applied spectrally on the periodic lattice.
    fn spectral_derivative(&self, v: &mut [Complex64], order: u32) {
        if order == 0 {
            return;
        }
        let n = v.len();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n).process(v);
        for (k, c) in v.iter_mut().enumerate() {
            let signed = if k <= n / 2 { k as i64 } else { k as i64 - n as i64 };
            if n.is_multiple_of(2) && k == n / 2 && !order.is_multiple_of(2) {
                *c = Complex64::default();
                continue;
            }
            let kappa = 2.0 * std::f64::consts::PI * signed as f64 / (n as f64 * self.spacing);
            *c *= Complex64::new(0.0, kappa).powu(order);
        }
        planner.plan_fft_inverse(n).process(v);
        let scale = 1.0 / n as f64;
        v.iter_mut().for_each(|c| *c *= scale);
    }

    /// Evaluates `op` on the solution, replacing `dt^δ` by `L^δ` with
    /// `L = (1/(2 m z^2))(1 - Sx^-1)^2`. Returns the output window (in input
    /// indices) and the values on it.
    fn evaluate(&self, op: &OpElement) -> Result<(usize, Vec<Complex64>)> {
        struct Term {
            c: f64,
            x: u32,
            t: u32,
            dx: u32,
            weights: Vec<(i64, f64)>,
        }
        let z = self.spacing;
        let n = self.len();
        let mut terms = Vec::new();
        for (mono, coeff) in op.terms() {
            let e = single(mono)?;
            if e.st_half != 0 {
                return Err(Error::UnsupportedOperator(
                    "time shifts act on time-discrete trajectories, not on space-lattice fields".into(),
                ));
            }
            match self.boundary {
                Boundary::Periodic if e.x > 0 => {
                    return Err(Error::UnsupportedOperator(
                        "multiplication by x breaks periodicity; use an open window".into(),
                    ))
                }
                Boundary::Open if e.dx > 0 => {
                    return Err(Error::UnsupportedOperator("continuous x-derivatives need a periodic field".into()))
                }
                _ => {}
            }
            // (1 - Sx^-1)^{2δ} / (2 m z^2)^δ, then Sx^s
            let d = 2 * e.dt as i64;
            let norm = (2.0 * self.mass * z * z).powi(e.dt as i32);
            let mut binom = 1.0;
            let mut weights = Vec::new();
            for i in 0..=d {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                weights.push((e.sx as i64 - i, sign * binom / norm));
                binom = binom * (d - i) as f64 / (i + 1) as f64;
            }
            let c = coeff.eval_f64(z, self.mass, self.a);
            terms.push(Term { c, x: e.x, t: e.t, dx: e.dx, weights });
        }
        let (lo, hi) = match self.boundary {
            Boundary::Periodic => (0, n as i64 - 1),
            Boundary::Open => {
                let mut lo = 0i64;
                let mut hi = n as i64 - 1;
                for term in &terms {
                    for &(o, _) in &term.weights {
                        lo = lo.max(-o);
                        hi = hi.min(n as i64 - 1 - o);
                    }
                }
                (lo, hi)
            }
        };
        if lo > hi {
            return Err(Error::UnsupportedOperator(format!(
                "open window of {n} points is too narrow for this operator"
            )));
        }
        let (lo, hi) = (lo as usize, hi as usize);
        let mut out = vec![Complex64::default(); hi - lo + 1];
        for term in &terms {
            let mut v = self.stencil(&term.weights, lo..=hi);
            self.spectral_derivative(&mut v, term.dx);
            let tt = self.time.powi(term.t as i32);
            for (k, slot) in out.iter_mut().enumerate() {
                *slot += v[k] * term.c * tt * self.x(lo + k).powi(term.x as i32);
            }
        }
        Ok((lo, out))
    }
}

fn single(mono: &OpMonomial) -> Result<crate::op::CopyExponents> {
    match mono.0.as_slice() {
        [e] => Ok(*e),
        _ => Err(Error::UnsupportedOperator("lattice fields take single-copy operators".into())),
    }
}

impl SolutionField for SpaceGridField {
    fn residual(&self) -> f64 {
        let first = self.first_checked();
        let r = (first..self.len())
            .map(|j| (self.second_difference(j) - 2.0 * self.mass * self.rates[j]).norm())
            .fold(0.0, f64::max);
        let scale = self.values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            r / scale
        } else {
            r
        }
    }

    fn is_zero(&self) -> bool {
        self.values.iter().all(|c| *c == Complex64::default())
    }

    fn apply(&self, op: &OpElement) -> Result<Self> {
        let (lo_v, vals) = self.evaluate(op)?;
        let (lo_r, rates) = self.evaluate(&(&OpElement::dt() * op))?;
        let lo = lo_v.max(lo_r);
        let hi = (lo_v + vals.len()).min(lo_r + rates.len());
        if hi < lo + 4 {
            return Err(Error::UnsupportedOperator("open window exhausted".into()));
        }
        Ok(Self {
            origin: self.x(lo),
            values: vals[lo - lo_v..hi - lo_v].to_vec(),
            rates: rates[lo - lo_r..hi - lo_r].to_vec(),
            ..self.clone()
        })
    }
}

/// Evolves a periodic field exactly by `dt`, mode by mode.
pub fn space_evolve(field: &SpaceGridField, dt: f64) -> Result<SpaceGridField> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::InvalidStep(format!("time step must be finite and non-negative, got {dt}")));
    }
    if field.boundary != Boundary::Periodic {
        return Err(Error::UnsupportedOperator("exact evolution needs a periodic field".into()));
    }
    let n = field.len();
    let mut planner = FftPlanner::new();
    let mut modes = field.values.clone();
    planner.plan_fft_forward(n).process(&mut modes);
    let mut rates = modes.clone();
    for (k, (c, r)) in modes.iter_mut().zip(rates.iter_mut()).enumerate() {
        let lambda = mode_rate(2.0 * std::f64::consts::PI * k as f64 / n as f64, field.spacing, field.mass);
        *c *= (lambda * dt).exp();
        *r = *c * lambda;
    }
    let inverse = planner.plan_fft_inverse(n);
    inverse.process(&mut modes);
    inverse.process(&mut rates);
    let scale = 1.0 / n as f64;
    Ok(SpaceGridField {
        values: modes.into_iter().map(|c| c * scale).collect(),
        rates: rates.into_iter().map(|c| c * scale).collect(),
        time: field.time + dt,
        ..field.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_is_a_solution() {
        let f = SpaceGridField::mode(3, 32, 0.2, 1.5, 0.0).unwrap();
        assert!(f.residual() < 1e-13);
    }

    #[test]
    fn evolution_multiplies_mode() {
        let f = SpaceGridField::mode(5, 32, 0.25, 1.0, 0.0).unwrap();
        let g = space_evolve(&f, 0.01).unwrap();
        let mult = (mode_rate(2.0 * std::f64::consts::PI * 5.0 / 32.0, 0.25, 1.0) * 0.01).exp();
        for (u, v) in f.values.iter().zip(&g.values) {
            assert!((v - u * mult).norm() < 1e-12 * mult.norm());
        }
        assert!(g.residual() < 1e-12);
    }

    #[test]
    fn negative_step_is_rejected() {
        let f = SpaceGridField::mode(1, 8, 0.5, 1.0, 0.0).unwrap();
        assert!(matches!(space_evolve(&f, -1.0), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn open_shift_narrows_window() {
        let f = SpaceGridField::sample(|x| Complex64::new(x * x, 0.0), 10, 0.0, 0.5, 1.0, 0.0, 0.0, Boundary::Open)
            .unwrap();
        let g = f.apply(&OpElement::sx(1)).unwrap();
        assert!(g.len() < f.len());
        assert!((g.values[0].re - (g.origin + 0.5).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn boundary_restrictions() {
        let p = SpaceGridField::mode(1, 8, 0.5, 1.0, 0.0).unwrap();
        assert!(matches!(p.apply(&OpElement::x()), Err(Error::UnsupportedOperator(_))));
        let o = SpaceGridField { boundary: Boundary::Open, ..p };
        assert!(matches!(o.apply(&OpElement::dx()), Err(Error::UnsupportedOperator(_))));
    }
}

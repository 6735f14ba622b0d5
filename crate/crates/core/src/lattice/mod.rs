//! Numerical solutions of the discretized equations and the action of
//! symmetry generators on them.

pub mod io;
pub mod space;
pub mod time;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Gen, Model, ModelKind};
use crate::op::OpElement;

pub use space::{mode_rate, space_evolve, Boundary, SpaceGridField};
pub use time::{convergence_slope, heat_kernel_error, step_multiplier, time_step, PolyTrajectory, SpectralField};

/// Relative max-norm residual accepted as "solves the equation".
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A sampled solution of one of the discretized equations.
pub trait SolutionField: Sized + Clone {
    /// Relative max-norm residual of the equation of motion.
    fn residual(&self) -> f64;
    /// True when every stored value is exactly zero.
    fn is_zero(&self) -> bool;
    /// Applies a single-copy operator, with parameters evaluated at the
    /// field's own `z`, `m` and `a`.
    fn apply(&self, op: &OpElement) -> Result<Self>;
}

fn expected_kind<F: 'static>() -> Option<ModelKind> {
    use std::any::TypeId;
    let id = TypeId::of::<F>();
    if id == TypeId::of::<SpaceGridField>() {
        Some(ModelKind::Space)
    } else if id == TypeId::of::<SpectralField>() || id == TypeId::of::<PolyTrajectory>() {
        Some(ModelKind::Time)
    } else {
        None
    }
}

/// Applies the image of `gen` to a solution. Fails with
/// [`Error::NotASolution`] if `field` is not one to begin with.
pub fn apply_generator<F: SolutionField + 'static>(field: &F, gen: Gen, model: &Model) -> Result<F> {
    apply_generator_with(field, gen, model, DEFAULT_TOLERANCE)
}

pub fn apply_generator_with<F: SolutionField + 'static>(field: &F, gen: Gen, model: &Model, tol: f64) -> Result<F> {
    if let Some(kind) = expected_kind::<F>() {
        if kind != model.kind {
            return Err(Error::InvalidParameter(format!("this field belongs to the {kind} model, not {}", model.kind)));
        }
    }
    let r = field.residual();
    if r.is_nan() || r > tol {
        return Err(Error::NotASolution(r));
    }
    field.apply(&model.image(gen))
}

/// Successive generator images of a seed solution.
#[derive(Clone, Debug)]
pub struct SolutionHierarchy<F> {
    pub generators: Vec<Gen>,
    /// `members[0]` is the seed; `members[i]` follows `generators[i - 1]`.
    pub members: Vec<F>,
    pub residuals: Vec<f64>,
    /// Set when a generator annihilated the previous member.
    pub stopped_at_zero: bool,
}

/// Applies `gens` in order (the first element acts first). A member that
/// is identically zero ends the hierarchy.
pub fn hierarchy_generate<F: SolutionField + 'static>(
    seed: &F,
    gens: &[Gen],
    model: &Model,
    tol: f64,
) -> Result<SolutionHierarchy<F>> {
    let r0 = seed.residual();
    if r0.is_nan() || r0 > tol {
        return Err(Error::NotASolution(r0));
    }
    let mut h = SolutionHierarchy {
        generators: Vec::new(),
        members: vec![seed.clone()],
        residuals: vec![r0],
        stopped_at_zero: false,
    };
    for &g in gens {
        let next = apply_generator_with(h.members.last().expect("seed"), g, model, tol)?;
        let r = next.residual();
        h.generators.push(g);
        h.members.push(next);
        h.residuals.push(r);
        if r.is_nan() || r > tol {
            return Err(Error::NotASolution(r));
        }
        if h.members.last().is_some_and(|m| m.is_zero()) {
            h.stopped_at_zero = true;
            break;
        }
    }
    Ok(h)
}

/// How a wavenumber is specified.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Wavenumber {
    /// A real exponent `φ ∝ e^{kx}`; in the time model, the spatial `κ`.
    Real(f64),
    /// A lattice phase `θ`, `φ_j ∝ e^{iθj}`.
    Phase(f64),
}

/// Dispersion relation of the model.
///
/// * space: the growth rate `ω` with `∂t φ = ω φ`;
/// * time: the per-step multiplier `1 / (1 + (z/m) κ^2)`;
/// * classical: `ω = k^2 / (2m)` for real `k`, `-θ^2/(2m)` for `e^{iθx}`.
pub fn dispersion_omega(kind: ModelKind, k: Wavenumber, z: f64, m: f64) -> Result<Complex64> {
    if m == 0.0 || !m.is_finite() {
        return Err(Error::InvalidParameter(format!("mass must be nonzero, got {m}")));
    }
    if kind != ModelKind::Classical && !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidParameter(format!("z must be positive, got {z}")));
    }
    Ok(match (kind, k) {
        (ModelKind::Classical, Wavenumber::Real(k)) => Complex64::new(k * k / (2.0 * m), 0.0),
        (ModelKind::Classical, Wavenumber::Phase(th)) => Complex64::new(-th * th / (2.0 * m), 0.0),
        (ModelKind::Space, Wavenumber::Real(k)) => {
            Complex64::new((1.0 - (-k * z).exp()).powi(2) / (2.0 * m * z * z), 0.0)
        }
        (ModelKind::Space, Wavenumber::Phase(th)) => mode_rate(th, z, m),
        (ModelKind::Time, Wavenumber::Real(kappa) | Wavenumber::Phase(kappa)) => {
            Complex64::new(step_multiplier(kappa, z, m), 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_model;

    #[test]
    fn space_dispersion_tends_to_classical() {
        let d = dispersion_omega(ModelKind::Space, Wavenumber::Real(1.3), 1e-5, 2.0).unwrap();
        let c = dispersion_omega(ModelKind::Classical, Wavenumber::Real(1.3), 0.0, 2.0).unwrap();
        assert!((d - c).norm() < 1e-4);
    }

    #[test]
    fn non_solution_is_rejected() {
        let model = build_model(ModelKind::Space, None);
        let mut f = SpaceGridField::mode(1, 16, 0.3, 1.0, 0.0).unwrap();
        f.rates[3] += 1.0;
        assert!(matches!(apply_generator(&f, Gen::P, &model), Err(Error::NotASolution(_))));
    }

    #[test]
    fn wrong_model_is_rejected() {
        let model = build_model(ModelKind::Time, None);
        let f = SpaceGridField::mode(1, 16, 0.3, 1.0, 0.0).unwrap();
        assert!(matches!(apply_generator(&f, Gen::P, &model), Err(Error::InvalidParameter(_))));
    }
}

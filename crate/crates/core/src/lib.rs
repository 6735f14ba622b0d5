//! Exact verification engine for the quantum-deformed (1+1)-dimensional
//! Schrödinger algebra, together with lattice and spectral solvers for the
//! space- and time-discretized heat/Schrödinger equations it induces.

pub mod coeff;
pub mod error;
pub mod lattice;
pub mod model;
pub mod op;
pub mod parse;
pub mod series;
pub mod suite;

pub use coeff::{Bindings, Coefficient, ParamMonomial, Rational};
pub use error::{Error, Result};
pub use op::{CopyExponents, OpElement, OpMonomial, Var};

//! The classical, space-deformed and time-deformed Schrödinger models:
//! generator realizations, commutator tables, coproducts and Casimirs, plus
//! the verification suites run against them.

mod expr;
mod tables;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coeff::{Bindings, Rational};
use crate::error::{Error, Result};
use crate::op::OpElement;

pub use expr::{bracket, exp, frac, g, num, op, tensor, zp, Expr, Realizer};
pub use verify::{CheckKind, CheckRecord, Status, SymmetryCertificate, SymmetryClaim};

/// Generator names. `Dprime` is always `D + M/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    H,
    P,
    K,
    D,
    C,
    M,
    Dprime,
}

impl Gen {
    /// The six basis generators, in table order.
    pub const BASIS: [Gen; 6] = [Gen::H, Gen::P, Gen::K, Gen::D, Gen::C, Gen::M];
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gen::H => "H",
            Gen::P => "P",
            Gen::K => "K",
            Gen::D => "D",
            Gen::C => "C",
            Gen::M => "M",
            Gen::Dprime => "D'",
        };
        f.write_str(s)
    }
}

impl FromStr for Gen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => Gen::H,
            "P" => Gen::P,
            "K" => Gen::K,
            "D" => Gen::D,
            "C" => Gen::C,
            "M" => Gen::M,
            "D'" | "Dprime" => Gen::Dprime,
            other => return Err(Error::InvalidParameter(format!("unknown generator `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Classical,
    Space,
    Time,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Classical, ModelKind::Space, ModelKind::Time];
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Classical => "classical",
            ModelKind::Space => "space",
            ModelKind::Time => "time",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(ModelKind::Classical),
            "space" => Ok(ModelKind::Space),
            "time" => Ok(ModelKind::Time),
            other => Err(Error::InvalidParameter(format!("unknown model `{other}`"))),
        }
    }
}

/// Expected value of one commutator `[lhs, rhs]`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: Gen,
    pub rhs: Gen,
    pub expected: Expr,
}

/// A realized model. With `a` unbound the realization constant stays
/// symbolic.
#[derive(Debug)]
pub struct Model {
    pub kind: ModelKind,
    pub a: Option<Rational>,
    images: BTreeMap<Gen, OpElement>,
    relations: Vec<Relation>,
    coproducts: Option<BTreeMap<Gen, Expr>>,
    casimir: Expr,
    coproducts_realized: OnceLock<Result<BTreeMap<Gen, OpElement>>>,
}

impl Model {
    pub fn build(kind: ModelKind, a: Option<Rational>) -> Self {
        let bindings = Bindings { a: a.clone(), ..Bindings::default() };
        let images = tables::realization(kind)
            .into_iter()
            .map(|(gen, e)| {
                let e = e.eval_params(&bindings).expect("binding a cannot divide by zero");
                (gen, e)
            })
            .collect();
        Model {
            kind,
            a,
            images,
            relations: tables::relations(kind),
            coproducts: tables::coproducts(kind),
            casimir: tables::casimir(kind),
            coproducts_realized: OnceLock::new(),
        }
    }

    /// Single-copy operator realizing `gen`.
    pub fn image(&self, gen: Gen) -> OpElement {
        match gen {
            Gen::Dprime => {
                let half = crate::coeff::Coefficient::constant(crate::coeff::rat(1, 2));
                &self.images[&Gen::D] + &self.images[&Gen::M].scale(&half)
            }
            g => self.images[&g].clone(),
        }
    }

    /// Swaps in a different image for `gen`, e.g. to confirm that a
    /// perturbed realization is caught by the checks. `D'` follows `D`.
    pub fn replace_image(&mut self, gen: Gen, e: OpElement) -> Result<()> {
        if gen == Gen::Dprime {
            return Err(Error::InvalidParameter("D' is derived from D and M".into()));
        }
        if e.copies() != 1 {
            return Err(Error::CopyMismatch(1, e.copies()));
        }
        self.images.insert(gen, e);
        self.coproducts_realized = OnceLock::new();
        Ok(())
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn coproduct(&self, gen: Gen) -> Option<&Expr> {
        self.coproducts.as_ref().and_then(|c| c.get(&gen))
    }

    pub fn has_coproduct(&self) -> bool {
        self.coproducts.is_some()
    }

    /// The generator whose exponentials appear in the model's formulas.
    pub fn primitive(&self) -> Option<Gen> {
        match self.kind {
            ModelKind::Classical => None,
            ModelKind::Space => Some(Gen::P),
            ModelKind::Time => Some(Gen::H),
        }
    }

    pub fn casimir_expr(&self) -> &Expr {
        &self.casimir
    }

    /// Realized Casimir of the Galilei sector, i.e. the operator of the
    /// (discrete) Schrödinger equation.
    pub fn casimir(&self) -> OpElement {
        self.realize(&self.casimir).expect("casimir uses only resolvable tokens")
    }

    pub fn realize(&self, e: &Expr) -> Result<OpElement> {
        Realizer::single(self).eval(e)
    }

    /// `Δ(gen)` realized in the two-copy algebra.
    pub fn coproduct_realized(&self, gen: Gen) -> Result<OpElement> {
        let all = self.coproducts_realized.get_or_init(|| {
            let Some(table) = &self.coproducts else {
                return Err(Error::InvalidParameter(format!("the {} model has no coproduct", self.kind)));
            };
            let r = Realizer { model: self, copies: 2, slots: &[&[0], &[1]] };
            table.iter().map(|(g, e)| Ok((*g, r.eval(e)?))).collect()
        });
        let all = all.as_ref().map_err(Clone::clone)?;
        match gen {
            Gen::Dprime => {
                let half = crate::coeff::Coefficient::constant(crate::coeff::rat(1, 2));
                Ok(&all[&Gen::D] + &all[&Gen::M].scale(&half))
            }
            g => Ok(all[&g].clone()),
        }
    }
}

pub fn build_model(kind: ModelKind, a: Option<Rational>) -> Model {
    Model::build(kind, a)
}

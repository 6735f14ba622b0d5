//! Generator-level expressions and their realization as operators.

use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{rat, Coefficient};
use crate::error::{Error, Result};
use crate::op::{OpElement, Var};

use super::{Gen, Model, ModelKind};

/// An expression over generator names, scalars and exponentials of the
/// primitive generator.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Gen(Gen),
    Scalar(Coefficient),
    /// `e^{steps * z * gen}`
    Exp {
        gen: Gen,
        steps: i32,
    },
    /// A realized single-copy operator, e.g. the `t` in `2 t E`.
    Op(OpElement),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    /// `a ⊗ b ⊗ ...`; each factor is realized in its own tensor slot.
    Tensor(Vec<Expr>),
}

pub fn g(gen: Gen) -> Expr {
    Expr::Gen(gen)
}

pub fn exp(gen: Gen, steps: i32) -> Expr {
    Expr::Exp { gen, steps }
}

pub fn num(n: i64) -> Expr {
    Expr::Scalar(Coefficient::integer(n))
}

pub fn frac(n: i64, d: i64) -> Expr {
    Expr::Scalar(Coefficient::constant(rat(n, d)))
}

/// `z^k`
pub fn zp(k: i32) -> Expr {
    Expr::Scalar(Coefficient::z_pow(k))
}

pub fn bracket(a: Expr, b: Expr) -> Expr {
    Expr::Bracket(Box::new(a), Box::new(b))
}

pub fn tensor(a: Expr, b: Expr) -> Expr {
    Expr::Tensor(vec![a, b])
}

pub fn op(e: OpElement) -> Expr {
    Expr::Op(e)
}

impl Expr {
    pub fn pow(self, n: u32) -> Expr {
        Expr::Product(vec![self; n as usize])
    }
}

impl From<Coefficient> for Expr {
    fn from(c: Coefficient) -> Self {
        Expr::Scalar(c)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Sum(mut v) => {
                v.push(rhs);
                Expr::Sum(v)
            }
            lhs => Expr::Sum(vec![lhs, rhs]),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Product(vec![num(-1), self])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Product(mut v) => {
                v.push(rhs);
                Expr::Product(v)
            }
            lhs => Expr::Product(vec![lhs, rhs]),
        }
    }
}

/// Realizes expressions in a `copies`-copy algebra. Tensor slot `s` maps to
/// the copies `slots[s]`; a slot covering two copies realizes each leaf
/// through its coproduct, and exponentials of the primitive generator
/// group-likely.
#[derive(Clone, Copy, Debug)]
pub struct Realizer<'a> {
    pub model: &'a Model,
    pub copies: usize,
    pub slots: &'a [&'a [usize]],
}

impl<'a> Realizer<'a> {
    pub fn single(model: &'a Model) -> Self {
        Realizer { model, copies: 1, slots: &[&[0]] }
    }

    pub fn eval(&self, expr: &Expr) -> Result<OpElement> {
        self.eval_in(expr, 0)
    }

    fn eval_in(&self, expr: &Expr, slot: usize) -> Result<OpElement> {
        match expr {
            Expr::Gen(gen) => self.leaf(slot, *gen),
            Expr::Scalar(c) => Ok(OpElement::scalar(c.clone(), self.copies)),
            Expr::Exp { gen, steps } => self.exponential(slot, *gen, *steps),
            Expr::Op(e) => {
                let targets = self.targets(slot)?;
                if targets.len() != e.copies() {
                    return Err(Error::CopyMismatch(e.copies(), targets.len()));
                }
                e.embed(self.copies, targets)
            }
            Expr::Sum(parts) => {
                let mut out = OpElement::zero(self.copies);
                for p in parts {
                    out += &self.eval_in(p, slot)?;
                }
                Ok(out)
            }
            Expr::Product(parts) => {
                let mut out = OpElement::one(self.copies);
                for p in parts {
                    out = &out * &self.eval_in(p, slot)?;
                }
                Ok(out)
            }
            Expr::Bracket(a, b) => Ok(self.eval_in(a, slot)?.commutator(&self.eval_in(b, slot)?)),
            Expr::Tensor(parts) => {
                if parts.len() != self.slots.len() {
                    return Err(Error::CopyMismatch(parts.len(), self.slots.len()));
                }
                let mut out = OpElement::one(self.copies);
                for (i, p) in parts.iter().enumerate() {
                    if matches!(p, Expr::Tensor(_)) {
                        return Err(Error::InvalidParameter("nested tensor product".into()));
                    }
                    out = &out * &self.eval_in(p, i)?;
                }
                Ok(out)
            }
        }
    }

    fn targets(&self, slot: usize) -> Result<&'a [usize]> {
        self.slots.get(slot).copied().ok_or(Error::IndexOutOfRange { index: slot, copies: self.slots.len() })
    }

    fn leaf(&self, slot: usize, gen: Gen) -> Result<OpElement> {
        if gen == Gen::Dprime {
            let d = self.leaf(slot, Gen::D)?;
            let m = self.leaf(slot, Gen::M)?;
            return Ok(&d + &m.scale(&Coefficient::constant(rat(1, 2))));
        }
        let targets = self.targets(slot)?;
        match targets.len() {
            1 => self.model.image(gen).embed(self.copies, targets),
            2 => self.model.coproduct_realized(gen)?.embed(self.copies, targets),
            n => Err(Error::InvalidParameter(format!("slot spanning {n} copies"))),
        }
    }

    fn exponential(&self, slot: usize, gen: Gen, steps: i32) -> Result<OpElement> {
        let var = match (self.model.kind, gen) {
            (ModelKind::Space, Gen::P) => Var::Sx,
            (ModelKind::Time, Gen::H) => Var::StHalf,
            _ => return Err(Error::UnresolvableToken(gen.to_string())),
        };
        let mut out = OpElement::one(self.copies);
        for &c in self.targets(slot)? {
            out = &out * &OpElement::var(self.copies, c, var, steps);
        }
        Ok(out)
    }
}

//! Truncated power-series view in `z`.
//!
//! Shift generators are expanded as exponential series over the pure Weyl
//! algebra (`x`, `t`, `dx`, `dt`), `Sx^s -> Σ (s z dx)^j / j!`, so every
//! identity checked exactly in shift mode can be re-checked order by order
//! with independent arithmetic. The classical limit `z -> 0` is the order-0
//! term of this expansion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::{Coefficient, ParamMonomial, Rational};
use crate::error::{Error, Result};
use crate::op::{OpElement, OpMonomial};

/// Default truncation order for cross-checks.
pub const DEFAULT_ORDER: u32 = 6;

/// `Σ_{k=0}^{order} z^k A_k` with shift-free, `z`-free `A_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesElement {
    order: u32,
    copies: usize,
    terms: BTreeMap<u32, OpElement>,
}

impl SeriesElement {
    pub fn zero(copies: usize, order: u32) -> Self {
        Self { order, copies, terms: BTreeMap::new() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// The coefficient of `z^k`.
    pub fn coefficient(&self, k: u32) -> OpElement {
        self.terms.get(&k).cloned().unwrap_or_else(|| OpElement::zero(self.copies))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &OpElement)> {
        self.terms.iter()
    }

    fn insert(&mut self, k: u32, e: OpElement) {
        if k > self.order || e.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(|| OpElement::zero(e.copies()));
        *slot += &e;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.copies, self.order.min(rhs.order));
        for (k, e) in self.terms.iter().chain(rhs.terms.iter()) {
            out.insert(*k, e.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { order: self.order, copies: self.copies, terms: self.terms.iter().map(|(k, e)| (*k, -e)).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Truncated product; the order is the smaller of the two.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut out = Self::zero(self.copies, order);
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                if p + q <= order {
                    out.insert(p + q, a * b);
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Shift exponents of a monomial as `(copy, is_time, power in z-steps)`.
fn shifts_of(mono: &OpMonomial) -> Vec<(usize, bool, i32)> {
    let mut out = Vec::new();
    for (c, e) in mono.0.iter().enumerate() {
        if e.sx != 0 {
            out.push((c, false, e.sx));
        }
        if e.st_half != 0 {
            out.push((c, true, e.st_half));
        }
    }
    out
}

/// All ways to distribute at most `budget` extra derivative powers over the
/// shifts, as exponent vectors.
fn multi_indices(len: usize, budget: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in 0..=budget {
        for mut rest in multi_indices(len - 1, budget - j) {
            rest.insert(0, j);
            out.push(rest);
        }
    }
    out
}

/// Expands `e` to order `z^order`. Fails when a negative power of `z`
/// survives the expansion.
pub fn series_expand(e: &OpElement, order: u32) -> Result<SeriesElement> {
    let mut buckets: BTreeMap<i32, OpElement> = BTreeMap::new();
    for (mono, coeff) in e.terms() {
        let shifts = shifts_of(mono);
        let mut base = mono.clone();
        for c in base.0.iter_mut() {
            c.sx = 0;
            c.st_half = 0;
        }
        for (pm, r) in coeff.terms() {
            let k = pm.z_exp;
            let budget = order as i32 - k;
            if budget < 0 {
                continue;
            }
            let rest = Coefficient::term(r.clone(), ParamMonomial { z_exp: 0, ..*pm });
            for js in multi_indices(shifts.len(), budget as u32) {
                let mut m = base.clone();
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for (&(c, is_time, s), &j) in shifts.iter().zip(&js) {
                    if is_time {
                        m.0[c].dt += j;
                    } else {
                        m.0[c].dx += j;
                    }
                    num *= num_traits::pow(BigInt::from(s), j as usize);
                    den *= factorial(j);
                }
                let power = k + js.iter().sum::<u32>() as i32;
                let c = rest.scale(&Rational::new(num, den));
                let slot = buckets.entry(power).or_insert_with(|| OpElement::zero(e.copies()));
                slot.add_term(m, c);
            }
        }
    }
    if let Some((k, _)) = buckets.iter().find(|(k, v)| **k < 0 && !v.is_zero()) {
        return Err(Error::NegativeOrderResidual(*k));
    }
    let mut out = SeriesElement::zero(e.copies(), order);
    for (k, v) in buckets {
        if k >= 0 {
            out.insert(k as u32, v);
        }
    }
    Ok(out)
}

/// The `z -> 0` limit: the order-0 term of the expansion.
pub fn series_classical_limit(e: &OpElement) -> Result<OpElement> {
    Ok(series_expand(e, 0)?.coefficient(0))
}

/// Compares the shift-mode commutator of `a`, `b` with the commutator
/// computed entirely in series mode, up to `z^order`.
pub fn series_consistency_check(a: &OpElement, b: &OpElement, order: u32) -> Result<bool> {
    let shift_mode = series_expand(&a.commutator(b), order)?;
    let series_mode = series_expand(a, order)?.commutator(&series_expand(b, order)?);
    Ok(shift_mode == series_mode)
}

impl std::fmt::Display for SeriesElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(z^{})", self.order + 1);
        }
        for (i, (k, e)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "[{e}]")?,
                1 => write!(f, "z*[{e}]")?,
                _ => write!(f, "z^{k}*[{e}]")?,
            }
        }
        write!(f, " + O(z^{})", self.order + 1)
    }
}

/// True when `e` lies in the pure Weyl algebra: no shifts, no `z`.
pub fn is_weyl(e: &OpElement) -> bool {
    e.terms().all(|(m, c)| !m.has_shift() && c.terms().all(|(pm, _)| pm.z_exp == 0))
}

//! Exact scalars: Laurent polynomials in the deformation parameter `z` with
//! polynomial dependence on the mass `m` and the realization constant `a`,
//! over arbitrary-precision rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator; zero is `0/1`.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `z^z_exp * m^m_exp * a^a_exp`. Only `z` may carry a negative power.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMonomial {
    pub z_exp: i32,
    pub m_exp: u32,
    pub a_exp: u32,
}

impl ParamMonomial {
    pub const ONE: ParamMonomial = ParamMonomial { z_exp: 0, m_exp: 0, a_exp: 0 };

    pub fn new(z_exp: i32, m_exp: u32, a_exp: u32) -> Self {
        Self { z_exp, m_exp, a_exp }
    }

    fn mul(self, rhs: Self) -> Self {
        Self { z_exp: self.z_exp + rhs.z_exp, m_exp: self.m_exp + rhs.m_exp, a_exp: self.a_exp + rhs.a_exp }
    }

    fn is_one(&self) -> bool {
        *self == Self::ONE
    }
}

/// Partial assignment of the symbolic parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bindings {
    pub z: Option<Rational>,
    pub m: Option<Rational>,
    pub a: Option<Rational>,
}

impl Bindings {
    pub fn a(a: Rational) -> Self {
        Self { a: Some(a), ..Self::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_none() && self.m.is_none() && self.a.is_none()
    }
}

/// Finite sum of rational multiples of [`ParamMonomial`]s, kept canonical:
/// no zero entries, iteration in monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coefficient {
    terms: BTreeMap<ParamMonomial, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::term(r, ParamMonomial::ONE)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn term(r: Rational, mono: ParamMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(mono, r);
        }
        Self { terms }
    }

    /// `z^k`
    pub fn z_pow(k: i32) -> Self {
        Self::term(Rational::one(), ParamMonomial::new(k, 0, 0))
    }

    pub fn z() -> Self {
        Self::z_pow(1)
    }

    pub fn m() -> Self {
        Self::term(Rational::one(), ParamMonomial::new(0, 1, 0))
    }

    pub fn a() -> Self {
        Self::term(Rational::one(), ParamMonomial::new(0, 0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&ParamMonomial::ONE).is_some_and(|r| r.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when the coefficient is a pure constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&ParamMonomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn min_z_exp(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.z_exp).min()
    }

    fn add_term(&mut self, mono: ParamMonomial, r: Rational) {
        if r.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(r);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += r;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * r)).collect() }
    }

    /// Multiplies by `n * z^k` for an integer `n`.
    pub fn scale_int_z(&self, n: &BigInt, k: i32) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let r = Rational::from_integer(n.clone());
        Self {
            terms: self
                .terms
                .iter()
                .map(|(mono, v)| (ParamMonomial { z_exp: mono.z_exp + k, ..*mono }, v * &r))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Splits by power of `z`: `Σ_k z^k c_k(m, a)`.
    pub fn by_z_power(&self) -> BTreeMap<i32, Coefficient> {
        let mut out: BTreeMap<i32, Coefficient> = BTreeMap::new();
        for (mono, r) in &self.terms {
            out.entry(mono.z_exp).or_default().add_term(ParamMonomial { z_exp: 0, ..*mono }, r.clone());
        }
        out
    }

    /// Substitutes the bound parameters; unbound ones stay symbolic.
    pub fn eval(&self, bindings: &Bindings) -> Result<Self> {
        let mut out = Self::zero();
        for (mono, r) in &self.terms {
            let mut value = r.clone();
            let mut rest = *mono;
            if let Some(z) = &bindings.z {
                if z.is_zero() && mono.z_exp < 0 {
                    return Err(Error::DivisionByZero);
                }
                value *= rat_pow(z, mono.z_exp);
                rest.z_exp = 0;
            }
            if let Some(m) = &bindings.m {
                value *= rat_pow(m, mono.m_exp as i32);
                rest.m_exp = 0;
            }
            if let Some(a) = &bindings.a {
                value *= rat_pow(a, mono.a_exp as i32);
                rest.a_exp = 0;
            }
            out.add_term(rest, value);
        }
        Ok(out)
    }

    /// Floating-point value at numeric parameters.
    pub fn eval_f64(&self, z: f64, m: f64, a: f64) -> f64 {
        self.terms
            .iter()
            .map(|(mono, r)| {
                r.to_f64().unwrap_or(f64::NAN)
                    * z.powi(mono.z_exp)
                    * m.powi(mono.m_exp as i32)
                    * a.powi(mono.a_exp as i32)
            })
            .sum()
    }

    /// Highest power of `a` present.
    pub fn a_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.a_exp).max().unwrap_or(0)
    }

    /// Coefficient of `a^k`, as a polynomial in `z`, `m`.
    pub fn a_coefficient(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for (mono, r) in &self.terms {
            if mono.a_exp == k {
                out.add_term(ParamMonomial { a_exp: 0, ..*mono }, r.clone());
            }
        }
        out
    }

    /// `self / other` when the quotient is a rational constant.
    pub fn constant_ratio(&self, other: &Self) -> Option<Rational> {
        let (mono, r0) = other.terms.iter().next()?;
        let ratio = self.terms.get(mono)? / r0;
        (other.scale(&ratio) == *self).then_some(ratio)
    }
}

fn rat_pow(r: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Self::constant(r)
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (mono, r) in &rhs.terms {
            self.add_term(*mono, r.clone());
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(mut self, rhs: Coefficient) -> Coefficient {
        self += &rhs;
        self
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        &self - &rhs
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (ma, ra) in &self.terms {
            for (mb, rb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ra * rb);
            }
        }
        out
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        &self * &rhs
    }
}

fn fmt_param_monomial(mono: &ParamMonomial, out: &mut Vec<String>) {
    let mut push = |name: &str, e: i64| match e {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{e}")),
    };
    push("z", mono.z_exp as i64);
    push("m", mono.m_exp as i64);
    push("a", mono.a_exp as i64);
}

/// Renders a single signed term without the sign, e.g. `1/2*z^-2*m`.
fn fmt_unsigned_term(mono: &ParamMonomial, r: &Rational) -> String {
    let mut parts = Vec::new();
    let mag = r.abs();
    if !mag.is_one() || mono.is_one() {
        parts.push(mag.to_string());
    }
    fmt_param_monomial(mono, &mut parts);
    parts.join("*")
}

impl fmt::Display for Coefficient {
    /// Canonical text form, e.g. `m + 2*m*a` or `-1/2*z^-2`. Parses back
    /// through the operator grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, r)) in self.terms.iter().enumerate() {
            let body = fmt_unsigned_term(mono, r);
            match (i, r.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_inverse_cancels() {
        let c = Coefficient::z_pow(-2);
        assert!((&c + &(-&c)).is_zero());
    }

    #[test]
    fn add_mass_and_constant() {
        let sum = Coefficient::m() + Coefficient::integer(2);
        assert_eq!(sum.to_string(), "2 + m");
    }

    #[test]
    fn doubling_half_zm() {
        let half = Coefficient::z() * Coefficient::m() * Coefficient::constant(rat(1, 2));
        assert_eq!(&half + &half, Coefficient::z() * Coefficient::m());
    }

    #[test]
    fn laurent_exponents_add() {
        let inv = Coefficient::z_pow(-1);
        assert_eq!(&inv * &inv, Coefficient::z_pow(-2));
        assert!((Coefficient::z_pow(-2) * Coefficient::z_pow(2)).is_one());
    }

    #[test]
    fn conformal_remainder_product() {
        let m = Coefficient::m();
        let one_plus_2a = Coefficient::one() + Coefficient::a().scale(&int(2));
        let prod = &m * &one_plus_2a;
        assert_eq!(prod.to_string(), "m + 2*m*a");
        let at_half = prod.eval(&Bindings::a(rat(-1, 2))).unwrap();
        assert!(at_half.is_zero());
    }

    #[test]
    fn eval_z_half() {
        let b = Bindings { z: Some(rat(1, 2)), ..Bindings::default() };
        assert_eq!(Coefficient::z_pow(-2).eval(&b).unwrap(), Coefficient::integer(4));
    }

    #[test]
    fn eval_pole_at_zero_fails() {
        let b = Bindings { z: Some(int(0)), ..Bindings::default() };
        assert!(matches!(Coefficient::z_pow(-1).eval(&b), Err(Error::DivisionByZero)));
        // a z-free coefficient evaluates fine at z = 0
        assert!(Coefficient::m().eval(&b).is_ok());
    }

    #[test]
    fn partial_eval_leaves_unbound_symbolic() {
        let c = Coefficient::z() * Coefficient::m() + Coefficient::a();
        let b = Bindings { m: Some(int(3)), ..Bindings::default() };
        assert_eq!(c.eval(&b).unwrap().to_string(), "a + 3*z");
    }

    #[test]
    fn rendering_is_canonical() {
        let c = Coefficient::term(rat(1, 2), ParamMonomial::new(-2, 1, 0));
        assert_eq!(c.to_string(), "1/2*z^-2*m");
        assert_eq!((-c).to_string(), "-1/2*z^-2*m");
        assert_eq!(Coefficient::zero().to_string(), "0");
    }

    #[test]
    fn constant_ratio_detects_scalar_multiples() {
        let m = Coefficient::m();
        let two_m = m.scale(&int(2));
        assert_eq!(m.constant_ratio(&two_m), Some(rat(1, 2)));
        assert_eq!(Coefficient::a().constant_ratio(&m), None);
    }
}

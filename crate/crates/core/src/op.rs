//! Normal-ordered operator algebra.
//!
//! Each tensor copy is generated by `x`, `t`, `dx`, `dt` and the shift
//! operators `Sx = e^{z dx}` and `St = e^{2z dt}`. Monomials are stored as
//! exponent records in the fixed order
//!
//! ```text
//! x^i t^j dx^k dt^l Sx^s St^u
//! ```
//!
//! so a monomial is canonical by construction. Products are reduced with
//! the relations
//!
//! ```text
//! dx x = x dx + 1          Sx^s x = (x + s z) Sx^s
//! dt t = t dt + 1          e^{h z dt} t = (t + h z) e^{h z dt}
//! ```
//!
//! everything else commuting. Time shifts are stored in half-steps of `St`
//! (powers of `e^{z dt}`), since the time-deformed coproduct uses
//! `e^{±z H}`. Generators in distinct copies commute.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::{Bindings, Coefficient};
use crate::error::{Error, Result};

/// Exponents of the six generators in one tensor copy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CopyExponents {
    pub x: u32,
    pub t: u32,
    pub dx: u32,
    pub dt: u32,
    /// Power of `e^{z dx}`.
    pub sx: i32,
    /// Power of `e^{z dt}`; `St` is two units.
    pub st_half: i32,
}

impl CopyExponents {
    pub fn is_identity(&self) -> bool {
        *self == Self::default()
    }

    pub fn degree(&self) -> u32 {
        self.x + self.t + self.dx + self.dt
    }

    pub fn has_shift(&self) -> bool {
        self.sx != 0 || self.st_half != 0
    }
}

/// A normal-ordered monomial over `n` copies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpMonomial(pub Vec<CopyExponents>);

impl OpMonomial {
    pub fn identity(copies: usize) -> Self {
        Self(vec![CopyExponents::default(); copies])
    }

    pub fn copies(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(CopyExponents::is_identity)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(CopyExponents::degree).sum()
    }

    pub fn has_shift(&self) -> bool {
        self.0.iter().any(CopyExponents::has_shift)
    }
}

/// The generators of one copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    T,
    Dx,
    Dt,
    /// `e^{z dx}`
    Sx,
    /// `e^{z dt}`, i.e. `St^{1/2}`
    StHalf,
}

/// Element of the operator algebra: a finite map from normal-ordered
/// monomials to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpElement {
    copies: usize,
    terms: BTreeMap<OpMonomial, Coefficient>,
}

impl OpElement {
    pub fn zero(copies: usize) -> Self {
        Self { copies, terms: BTreeMap::new() }
    }

    pub fn scalar(c: Coefficient, copies: usize) -> Self {
        Self::monomial(OpMonomial::identity(copies), c)
    }

    pub fn one(copies: usize) -> Self {
        Self::scalar(Coefficient::one(), copies)
    }

    pub fn monomial(mono: OpMonomial, c: Coefficient) -> Self {
        let copies = mono.copies();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Self { copies, terms }
    }

    /// `v^exp` in copy `copy` of an `copies`-copy algebra. Negative
    /// exponents are only meaningful for the shifts.
    pub fn var(copies: usize, copy: usize, v: Var, exp: i32) -> Self {
        assert!(copy < copies, "copy {copy} out of range for {copies} copies");
        let mut mono = OpMonomial::identity(copies);
        let e = &mut mono.0[copy];
        let non_negative = || u32::try_from(exp).expect("negative power of a non-invertible generator");
        match v {
            Var::X => e.x = non_negative(),
            Var::T => e.t = non_negative(),
            Var::Dx => e.dx = non_negative(),
            Var::Dt => e.dt = non_negative(),
            Var::Sx => e.sx = exp,
            Var::StHalf => e.st_half = exp,
        }
        Self::monomial(mono, Coefficient::one())
    }

    pub fn x() -> Self {
        Self::var(1, 0, Var::X, 1)
    }

    pub fn t() -> Self {
        Self::var(1, 0, Var::T, 1)
    }

    pub fn dx() -> Self {
        Self::var(1, 0, Var::Dx, 1)
    }

    pub fn dt() -> Self {
        Self::var(1, 0, Var::Dt, 1)
    }

    /// `Sx^k = e^{k z dx}`
    pub fn sx(k: i32) -> Self {
        Self::var(1, 0, Var::Sx, k)
    }

    /// `St^k = e^{2 k z dt}`
    pub fn st(k: i32) -> Self {
        Self::var(1, 0, Var::StHalf, 2 * k)
    }

    /// `e^{h z dt}`
    pub fn st_half(h: i32) -> Self {
        Self::var(1, 0, Var::StHalf, h)
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpMonomial, &Coefficient)> {
        self.terms.iter()
    }

    /// Coefficient of the identity monomial.
    pub fn scalar_part(&self) -> Coefficient {
        self.terms.get(&OpMonomial::identity(self.copies)).cloned().unwrap_or_default()
    }

    /// True when the element is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(OpMonomial::is_identity)
    }

    pub fn add_term(&mut self, mono: OpMonomial, c: Coefficient) {
        debug_assert_eq!(mono.copies(), self.copies);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero(self.copies);
        for (mono, k) in &self.terms {
            out.add_term(mono.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.copies);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `self * rhs - rhs * self`
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.copies != rhs.copies {
            return Err(Error::CopyMismatch(self.copies, rhs.copies));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.copies);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                for (mono, n, k) in monomial_product(ma, mb) {
                    out.add_term(mono, c.scale_int_z(&n, k));
                }
            }
        }
        out
    }

    /// Relabels copy `i` of `self` as copy `targets[i]` of a `copies`-copy
    /// algebra.
    pub fn embed(&self, copies: usize, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.copies {
            return Err(Error::CopyMismatch(self.copies, targets.len()));
        }
        for (i, &tgt) in targets.iter().enumerate() {
            if tgt >= copies {
                return Err(Error::IndexOutOfRange { index: tgt, copies });
            }
            if targets[..i].contains(&tgt) {
                return Err(Error::InvalidParameter(format!("copy {tgt} targeted twice")));
            }
        }
        let mut out = Self::zero(copies);
        for (mono, c) in &self.terms {
            let mut m = OpMonomial::identity(copies);
            for (src, &tgt) in targets.iter().enumerate() {
                m.0[tgt] = mono.0[src];
            }
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// Termwise parameter substitution.
    pub fn eval_params(&self, bindings: &Bindings) -> Result<Self> {
        let mut out = Self::zero(self.copies);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c.eval(bindings)?);
        }
        Ok(out)
    }

    /// Largest total degree over the stored monomials.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(OpMonomial::degree).max().unwrap_or(0)
    }
}

/// `dx^d x^e = Σ n x^i dx^j`, built by moving one derivative at a time
/// across the `x`-powers: `dx x^i dx^j = x^i dx^{j+1} + i x^{i-1} dx^j`.
fn weyl_reorder(d: u32, e: u32) -> Vec<(u32, u32, BigInt)> {
    let mut state: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    state.insert((e, 0), BigInt::one());
    for _ in 0..d {
        let mut next: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for ((i, j), n) in state {
            if i > 0 {
                *next.entry((i - 1, j)).or_default() += &n * BigInt::from(i);
            }
            *next.entry((i, j + 1)).or_default() += n;
        }
        state = next;
    }
    state.into_iter().map(|((i, j), n)| (i, j, n)).collect()
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `D^d S^s V^e` for one commuting sector (`V` = x or t, `D` its derivative,
/// `S` its shift by one `z`-step), returned as `Σ n z^k V^i D^j` with the
/// shift `S^s` left implicit on the right.
fn sector_product(d: u32, s: i32, e: u32) -> Vec<(u32, u32, BigInt, i32)> {
    if e == 0 || (d == 0 && s == 0) {
        return vec![(e, d, BigInt::one(), 0)];
    }
    let mut out = Vec::new();
    // S^s V^e = Σ_k C(e,k) (s z)^k V^{e-k} S^s
    let kmax = if s == 0 { 0 } else { e };
    for k in 0..=kmax {
        let scale = binomial(e, k) * num_traits::pow(BigInt::from(s), k as usize);
        for (i, j, n) in weyl_reorder(d, e - k) {
            out.push((i, j, &n * &scale, k as i32));
        }
    }
    out
}

fn copy_product(a: &CopyExponents, b: &CopyExponents) -> Vec<(CopyExponents, BigInt, i32)> {
    let xs = sector_product(a.dx, a.sx, b.x);
    let ts = sector_product(a.dt, a.st_half, b.t);
    let mut out = Vec::with_capacity(xs.len() * ts.len());
    for (xi, dxj, nx, kx) in &xs {
        for (ti, dtj, nt, kt) in &ts {
            let e = CopyExponents {
                x: a.x + xi,
                t: a.t + ti,
                dx: dxj + b.dx,
                dt: dtj + b.dt,
                sx: a.sx + b.sx,
                st_half: a.st_half + b.st_half,
            };
            out.push((e, nx * nt, kx + kt));
        }
    }
    out
}

/// Normal form of `a * b` as `Σ n z^k mono`.
fn monomial_product(a: &OpMonomial, b: &OpMonomial) -> Vec<(OpMonomial, BigInt, i32)> {
    let mut acc: Vec<(Vec<CopyExponents>, BigInt, i32)> = vec![(Vec::with_capacity(a.copies()), BigInt::one(), 0)];
    for (ea, eb) in a.0.iter().zip(&b.0) {
        let per_copy = copy_product(ea, eb);
        if per_copy.len() == 1 {
            let (e, n, k) = &per_copy[0];
            for (mono, acc_n, acc_k) in acc.iter_mut() {
                mono.push(*e);
                *acc_n *= n;
                *acc_k += k;
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * per_copy.len());
        for (mono, n0, k0) in &acc {
            for (e, n, k) in &per_copy {
                let mut m = mono.clone();
                m.push(*e);
                next.push((m, n0 * n, k0 + k));
            }
        }
        acc = next;
    }
    acc.into_iter().filter(|(_, n, _)| !n.is_zero()).map(|(m, n, k)| (OpMonomial(m), n, k)).collect()
}

impl From<Coefficient> for OpElement {
    fn from(c: Coefficient) -> Self {
        Self::scalar(c, 1)
    }
}

impl AddAssign<&OpElement> for OpElement {
    fn add_assign(&mut self, rhs: &OpElement) {
        assert_eq!(self.copies, rhs.copies, "copy count mismatch");
        for (mono, c) in &rhs.terms {
            self.add_term(mono.clone(), c.clone());
        }
    }
}

impl Add for &OpElement {
    type Output = OpElement;
    fn add(self, rhs: &OpElement) -> OpElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for OpElement {
    type Output = OpElement;
    fn add(mut self, rhs: OpElement) -> OpElement {
        self += &rhs;
        self
    }
}

impl Neg for &OpElement {
    type Output = OpElement;
    fn neg(self) -> OpElement {
        OpElement { copies: self.copies, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for OpElement {
    type Output = OpElement;
    fn neg(self) -> OpElement {
        -&self
    }
}

impl Sub for &OpElement {
    type Output = OpElement;
    fn sub(self, rhs: &OpElement) -> OpElement {
        self + &(-rhs)
    }
}

impl Sub for OpElement {
    type Output = OpElement;
    fn sub(self, rhs: OpElement) -> OpElement {
        &self - &rhs
    }
}

impl Mul for &OpElement {
    type Output = OpElement;
    fn mul(self, rhs: &OpElement) -> OpElement {
        assert_eq!(self.copies, rhs.copies, "copy count mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Mul for OpElement {
    type Output = OpElement;
    fn mul(self, rhs: OpElement) -> OpElement {
        &self * &rhs
    }
}

impl Mul<&OpElement> for &Coefficient {
    type Output = OpElement;
    fn mul(self, rhs: &OpElement) -> OpElement {
        rhs.scale(self)
    }
}

fn fmt_copy(e: &CopyExponents, suffix: &str, out: &mut Vec<String>) {
    let mut push = |name: &str, p: String| {
        if p == "1" {
            out.push(format!("{name}{suffix}"));
        } else {
            out.push(format!("{name}{suffix}^{p}"));
        }
    };
    for (name, p) in [("x", e.x), ("t", e.t), ("dx", e.dx), ("dt", e.dt)] {
        if p != 0 {
            push(name, p.to_string());
        }
    }
    if e.sx != 0 {
        push("Sx", e.sx.to_string());
    }
    if e.st_half != 0 {
        let p = if e.st_half % 2 == 0 { (e.st_half / 2).to_string() } else { format!("({}/2)", e.st_half) };
        push("St", p);
    }
}

impl fmt::Display for OpMonomial {
    /// `x^2*t*dx*Sx^-1`; copies beyond a single one carry a 1-based suffix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, e) in self.0.iter().enumerate() {
            let suffix = if self.copies() > 1 { (i + 1).to_string() } else { String::new() };
            fmt_copy(e, &suffix, &mut parts);
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Display for OpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            let mono_str = (!mono.is_identity()).then(|| mono.to_string());
            let (negative, body) = render_term(c, mono_str.as_deref());
            match (i, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Renders `c * mono` as (sign, unsigned body).
fn render_term(c: &Coefficient, mono: Option<&str>) -> (bool, String) {
    if c.len() == 1 {
        let (pm, r) = c.terms().next().expect("nonempty");
        let negative = num_traits::Signed::is_negative(r);
        let single = Coefficient::term(num_traits::Signed::abs(r), *pm);
        let head = single.to_string();
        let body = match (head.as_str(), mono) {
            (_, None) => head,
            ("1", Some(m)) => m.to_string(),
            (h, Some(m)) => format!("{h}*{m}"),
        };
        (negative, body)
    } else {
        let body = match mono {
            None => format!("({c})"),
            Some(m) => format!("({c})*{m}"),
        };
        (false, body)
    }
}

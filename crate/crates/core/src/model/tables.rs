//! Generator realizations, commutator tables, coproducts and Casimirs of
//! the three models.

use std::collections::BTreeMap;

use crate::coeff::{rat, Coefficient};
use crate::op::OpElement;

use super::expr::{exp, frac, g, num, tensor, zp, Expr};
use super::{Gen, ModelKind, Relation};

fn s(c: Coefficient) -> OpElement {
    OpElement::from(c)
}

fn q(n: i64, d: i64) -> Coefficient {
    Coefficient::constant(rat(n, d))
}

fn zc() -> Coefficient {
    Coefficient::z()
}

fn mc() -> Coefficient {
    Coefficient::m()
}

fn ac() -> Coefficient {
    Coefficient::a()
}

/// Leaves for H, P, K, D, C, M, D'.
fn gens() -> [Expr; 7] {
    [g(Gen::H), g(Gen::P), g(Gen::K), g(Gen::D), g(Gen::C), g(Gen::M), g(Gen::Dprime)]
}

pub(super) fn realization(kind: ModelKind) -> BTreeMap<Gen, OpElement> {
    let x = OpElement::x();
    let t = OpElement::t();
    let dx = OpElement::dx();
    let dt = OpElement::dt();
    let one = OpElement::one(1);
    let m = s(mc());
    let a = s(ac());

    let mut out = BTreeMap::new();
    out.insert(Gen::H, dt.clone());
    out.insert(Gen::P, dx.clone());
    out.insert(Gen::M, m.clone());

    match kind {
        ModelKind::Classical => {
            // K = -t dx - m x
            out.insert(Gen::K, -(&(&t * &dx) + &(&m * &x)));
            // D = 2 t dt + x dx - a
            out.insert(Gen::D, &(&(&t * &dt).scale(&Coefficient::integer(2)) + &(&x * &dx)) - &a);
            // C = t^2 dt + t x dx - a t + m/2 x^2
            let c = &(&(&t.pow(2) * &dt) + &(&(&t * &x) * &dx)) - &(&a * &t);
            out.insert(Gen::C, &c + &x.pow(2).scale(&(mc() * q(1, 2))));
        }
        ModelKind::Space => {
            let sx = OpElement::sx(1);
            let sx_inv = OpElement::sx(-1);
            let zi = Coefficient::z_pow(-1);
            // K = -t (1/z)(1 - Sx^-1) - m x Sx
            let k = &(&t * &(&one - &sx_inv)).scale(&(-&zi)) - &(&(&m * &x) * &sx);
            out.insert(Gen::K, k);
            // D = 2 t dt + x (1/z)(Sx - 1) - a
            let d = &(&(&t * &dt).scale(&Coefficient::integer(2)) + &(&x * &(&sx - &one)).scale(&zi)) - &a;
            out.insert(Gen::D, d);
            // C = t^2 dt Sx^-1 + t x ( sinh(z dx)/z - z m dt Sx ) + m/2 x^2 Sx
            //     - t/2 { a (1 + Sx^-1) + (1 + m/2)(1 - Sx^-1) }
            //     + z m/2 (1 + a - m/2) x Sx
            let sinh_over_z = (&sx - &sx_inv).scale(&(zi.clone() * q(1, 2)));
            let inner = &sinh_over_z - &(&dt * &sx).scale(&(zc() * mc()));
            let brace = &(&a * &(&one + &sx_inv)) + &(&s(Coefficient::one() + mc() * q(1, 2)) * &(&one - &sx_inv));
            let c = &(&(&(&(&t.pow(2) * &dt) * &sx_inv) + &(&(&t * &x) * &inner))
                + &(&x.pow(2) * &sx).scale(&(mc() * q(1, 2))))
                - &(&t * &brace).scale(&q(1, 2));
            let tail_coeff = zc() * mc() * q(1, 2) * (Coefficient::one() + ac() - mc() * q(1, 2));
            out.insert(Gen::C, &c + &(&x * &sx).scale(&tail_coeff));
        }
        ModelKind::Time => {
            let st = OpElement::st(1);
            let zi = Coefficient::z_pow(-1);
            // b = m/2 - 2
            let b = mc() * q(1, 2) - Coefficient::integer(2);
            let t_2z = &t + &s(zc() * Coefficient::integer(2));
            // K = -(t + 2z) St dx - m x
            out.insert(Gen::K, -(&(&(&t_2z * &st) * &dx) + &(&m * &x)));
            // D = (t + 2z)(1/z)(St - 1) + x dx - a
            let d = &(&(&t_2z * &(&st - &one)).scale(&zi) + &(&x * &dx)) - &a;
            out.insert(Gen::D, d);
            // C = (t^2 - 2 z b t)(1/2z)(St - 1) + t x dx - a t + m/2 x^2
            //     - 2 z (b + 1) St - z/2 x^2 dx^2 - z (b - a + 1/2) x dx
            //     - z/2 (b - a)^2
            let quad = &t.pow(2) - &t.scale(&(zc() * b.clone() * Coefficient::integer(2)));
            let mut c = (&quad * &(&st - &one)).scale(&(zi * q(1, 2)));
            c += &(&(&t * &x) * &dx);
            c += &-(&a * &t);
            c += &x.pow(2).scale(&(mc() * q(1, 2)));
            c += &st.scale(&-(zc() * Coefficient::integer(2) * (b.clone() + Coefficient::one())));
            c += &(&x.pow(2) * &dx.pow(2)).scale(&-(zc() * q(1, 2)));
            c += &(&x * &dx).scale(&-(zc() * (b.clone() - ac() + q(1, 2))));
            let bma = b - ac();
            c += &s(-(zc() * q(1, 2) * bma.clone() * bma));
            out.insert(Gen::C, c);
        }
    }
    out
}

fn rel(lhs: Gen, rhs: Gen, expected: Expr) -> Relation {
    Relation { lhs, rhs, expected }
}

pub(super) fn relations(kind: ModelKind) -> Vec<Relation> {
    use Gen::{C as Cn, D as Dn, H as Hn, K as Kn, M as Mn, P as Pn};
    let [h, p, k, d, c, m, dp] = gens();
    let zero = num(0);
    let mut table = match kind {
        ModelKind::Classical => vec![
            rel(Dn, Pn, -p.clone()),
            rel(Dn, Kn, k.clone()),
            rel(Kn, Pn, m.clone()),
            rel(Kn, Hn, p.clone()),
            rel(Dn, Hn, num(-2) * h.clone()),
            rel(Dn, Cn, num(2) * c.clone()),
            rel(Hn, Cn, d.clone()),
            rel(Pn, Cn, -k.clone()),
            rel(Hn, Pn, zero.clone()),
            rel(Kn, Cn, zero.clone()),
        ],
        ModelKind::Space => vec![
            // [D,P] = (1 - e^{zP})/z
            rel(Dn, Pn, zp(-1) * (num(1) - exp(Pn, 1))),
            rel(Dn, Kn, k.clone()),
            rel(Kn, Pn, m.clone() * exp(Pn, 1)),
            rel(Dn, Hn, num(-2) * h.clone()),
            // [D,C] = 2C - z/2 K D'
            rel(Dn, Cn, num(2) * c.clone() - zp(1) * frac(1, 2) * k.clone() * dp.clone()),
            rel(Hn, Pn, zero.clone()),
            // [H,C] = (1 + e^{-zP}) D'/2 - M/2 + z K H
            rel(
                Hn,
                Cn,
                frac(1, 2) * (num(1) + exp(Pn, -1)) * dp.clone() - frac(1, 2) * m.clone()
                    + zp(1) * k.clone() * h.clone(),
            ),
            // [K,C] = -z/2 K^2
            rel(Kn, Cn, frac(-1, 2) * zp(1) * k.clone().pow(2)),
            // [P,C] = -(1 + e^{zP}) K/2 - z/2 e^{zP} M D'
            rel(
                Pn,
                Cn,
                frac(-1, 2) * (num(1) + exp(Pn, 1)) * k.clone()
                    - frac(1, 2) * zp(1) * exp(Pn, 1) * m.clone() * dp.clone(),
            ),
            // [K,H] = (1 - e^{-zP})/z
            rel(Kn, Hn, zp(-1) * (num(1) - exp(Pn, -1))),
        ],
        ModelKind::Time => vec![
            rel(Dn, Pn, -p.clone()),
            rel(Dn, Kn, k.clone()),
            rel(Kn, Pn, m.clone()),
            // [D,H] = (1 - e^{2zH})/z
            rel(Dn, Hn, zp(-1) * (num(1) - exp(Hn, 2))),
            // [D,C] = 2C + z D'^2
            rel(Dn, Cn, num(2) * c.clone() + zp(1) * dp.clone().pow(2)),
            rel(Hn, Pn, zero.clone()),
            // [H,C] = D + M/2 (1 - e^{2zH})
            rel(Hn, Cn, d.clone() + frac(1, 2) * m.clone() * (num(1) - exp(Hn, 2))),
            // [K,C] = z/2 (DK + KD + KM)
            rel(Kn, Cn, frac(1, 2) * zp(1) * (d.clone() * k.clone() + k.clone() * d.clone() + k.clone() * m.clone())),
            // [P,C] = -K - z/2 (DP + PD + PM)
            rel(
                Pn,
                Cn,
                -k.clone()
                    - frac(1, 2) * zp(1) * (d.clone() * p.clone() + p.clone() * d.clone() + p.clone() * m.clone()),
            ),
            // [K,H] = e^{2zH} P
            rel(Kn, Hn, exp(Hn, 2) * p.clone()),
        ],
    };
    // M is central
    for other in [Hn, Pn, Kn, Dn, Cn] {
        table.push(rel(Mn, other, zero.clone()));
    }
    table
}

pub(super) fn casimir(kind: ModelKind) -> Expr {
    let [h, p, _, _, _, m, _] = gens();
    match kind {
        // E = P^2 - 2 M H
        ModelKind::Classical => p.clone().pow(2) - num(2) * m * h,
        // E_z = (1 - e^{-zP})^2 / z^2 - 2 M H
        ModelKind::Space => zp(-2) * (num(1) - exp(Gen::P, -1)).pow(2) - num(2) * m * h,
        // E_z = P^2 - M (1 - e^{-2zH}) / z
        ModelKind::Time => p.pow(2) - m * zp(-1) * (num(1) - exp(Gen::H, -2)),
    }
}

pub(super) fn coproducts(kind: ModelKind) -> Option<BTreeMap<Gen, Expr>> {
    let [h, p, k, d, c, m, dp] = gens();
    let one = || num(1);
    let prim = |x: &Expr| tensor(one(), x.clone()) + tensor(x.clone(), one());
    let mut out = BTreeMap::new();
    match kind {
        ModelKind::Classical => return None,
        ModelKind::Space => {
            let e = |n: i32| exp(Gen::P, n);
            out.insert(Gen::P, prim(&p));
            out.insert(Gen::M, prim(&m));
            // Δ(H) = 1⊗H + H⊗e^{-2zP}
            out.insert(Gen::H, tensor(one(), h.clone()) + tensor(h.clone(), e(-2)));
            // Δ(K) = 1⊗K + K⊗e^{zP} - z D'⊗e^{zP} M
            out.insert(
                Gen::K,
                tensor(one(), k.clone()) + tensor(k.clone(), e(1)) - zp(1) * tensor(dp.clone(), e(1) * m.clone()),
            );
            // Δ(D) = 1⊗D + D⊗e^{zP} + 1/2 M⊗(e^{zP} - 1)
            out.insert(
                Gen::D,
                tensor(one(), d.clone()) + tensor(d.clone(), e(1)) + frac(1, 2) * tensor(m.clone(), e(1) - one()),
            );
            // Δ(C) = 1⊗C + C⊗e^{2zP} + z/2 K⊗e^{zP} D' - z/2 D'⊗e^{zP}(K + z D' M)
            out.insert(
                Gen::C,
                tensor(one(), c.clone())
                    + tensor(c.clone(), e(2))
                    + frac(1, 2) * zp(1) * tensor(k.clone(), e(1) * dp.clone())
                    - frac(1, 2) * zp(1) * tensor(dp.clone(), e(1) * (k.clone() + zp(1) * dp.clone() * m.clone())),
            );
        }
        ModelKind::Time => {
            // e^{n z H}
            let e = |n: i32| exp(Gen::H, n);
            out.insert(Gen::H, prim(&h));
            out.insert(Gen::M, prim(&m));
            // Δ(P) = 1⊗P + P⊗e^{-zH}
            out.insert(Gen::P, tensor(one(), p.clone()) + tensor(p.clone(), e(-1)));
            // Δ(K) = 1⊗K + K⊗e^{zH} - z D'⊗e^{2zH} P
            out.insert(
                Gen::K,
                tensor(one(), k.clone()) + tensor(k.clone(), e(1)) - zp(1) * tensor(dp.clone(), e(2) * p.clone()),
            );
            // Δ(D) = 1⊗D + D⊗e^{2zH} + 1/2 M⊗(e^{2zH} - 1)
            out.insert(
                Gen::D,
                tensor(one(), d.clone()) + tensor(d.clone(), e(2)) + frac(1, 2) * tensor(m.clone(), e(2) - one()),
            );
            // Δ(C) = 1⊗C + C⊗e^{2zH} - z/2 D'⊗e^{2zH} M
            out.insert(
                Gen::C,
                tensor(one(), c.clone()) + tensor(c.clone(), e(2))
                    - frac(1, 2) * zp(1) * tensor(dp.clone(), e(2) * m.clone()),
            );
        }
    }
    Some(out)
}

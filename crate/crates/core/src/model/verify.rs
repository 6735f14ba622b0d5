use serde::Serialize;

use crate::coeff::{int, rat, Bindings, Coefficient, Rational};
use crate::error::{Error, Result};
use crate::op::OpElement;

use super::expr::{bracket, exp, g, num, op, zp, Expr, Realizer};
use super::{Gen, Model, ModelKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Relation,
    Centrality,
    Symmetry,
    AbstractBracket,
    Homomorphism,
    Coassociativity,
    SeriesConsistency,
    ClassicalLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub model: ModelKind,
    pub check_kind: CheckKind,
    pub subject: String,
    pub status: Status,
    /// Rendered residual; `"0"` on success.
    pub residual_rendering: String,
    pub a_binding: Option<String>,
    /// Symmetry checks only: the factor `Λ` in `[E, S] = Λ·E + R`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// Symmetry checks only: the remainder `R`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder: Option<String>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Outcome of checking `[E, S] = Λ·E + remainder`.
#[derive(Clone, Debug)]
pub struct SymmetryCertificate {
    pub casimir: OpElement,
    pub generator: Gen,
    pub lambda: OpElement,
    pub remainder: OpElement,
    /// Value of `a` at which a nonzero remainder vanishes, if one exists.
    pub passes_at: Option<Rational>,
}

impl SymmetryCertificate {
    /// True when `S` is a symmetry for every value of `a`.
    pub fn unconditional(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// A stated factorization `[E, generator] = lambda·E + remainder`, checked
/// at the given value of `a` (or symbolically).
#[derive(Clone, Debug)]
pub struct SymmetryClaim {
    pub generator: Gen,
    pub lambda: OpElement,
    pub remainder: OpElement,
    pub a: Option<Rational>,
}

fn scalar(c: Coefficient) -> OpElement {
    OpElement::from(c)
}

fn anomaly() -> Coefficient {
    // m (1 + 2a)
    Coefficient::m() * (Coefficient::one() + Coefficient::a().scale(&int(2)))
}

/// The value of `a` killing every coefficient of `e`, when `e` is affine in
/// `a` with a single common root.
fn root_in_a(e: &OpElement) -> Option<Rational> {
    let (_, first) = e.terms().find(|(_, c)| c.a_degree() == 1)?;
    let ratio = first.a_coefficient(0).constant_ratio(&first.a_coefficient(1))?;
    let root = -ratio;
    e.eval_params(&Bindings::a(root.clone())).ok()?.is_zero().then_some(root)
}

fn render_a(a: &Option<Rational>) -> Option<String> {
    a.as_ref().map(|r| r.to_string())
}

impl Model {
    fn record(&self, kind: CheckKind, subject: String, residual: &OpElement, a: &Option<Rational>) -> CheckRecord {
        CheckRecord {
            model: self.kind,
            check_kind: kind,
            subject,
            status: if residual.is_zero() { Status::Pass } else { Status::Fail },
            residual_rendering: residual.to_string(),
            a_binding: render_a(a),
            lambda: None,
            remainder: None,
        }
    }

    fn bind_a(&self, e: &OpElement, a: &Option<Rational>) -> Result<OpElement> {
        match a.as_ref().or(self.a.as_ref()) {
            Some(a) => e.eval_params(&Bindings::a(a.clone())),
            None => Ok(e.clone()),
        }
    }

    /// Residual `[A, B] - expected` for one relation-table entry.
    pub fn relation_residual(&self, index: usize) -> Result<OpElement> {
        let r = &self.relations()[index];
        let lhs = self.image(r.lhs).commutator(&self.image(r.rhs));
        Ok(&lhs - &self.realize(&r.expected)?)
    }

    /// Checks every commutator of the relation table under the realization.
    pub fn verify_relations(&self) -> Vec<CheckRecord> {
        (0..self.relations().len())
            .map(|i| {
                let r = &self.relations()[i];
                let residual = self.relation_residual(i).expect("relation tables resolve");
                self.record(CheckKind::Relation, format!("[{},{}]", r.lhs, r.rhs), &residual, &self.a)
            })
            .collect()
    }

    /// `[E, G] = 0` for the Galilei generators.
    pub fn verify_centrality(&self) -> Vec<CheckRecord> {
        let e = self.casimir();
        [Gen::K, Gen::H, Gen::P, Gen::M]
            .into_iter()
            .map(|gen| {
                let residual = e.commutator(&self.image(gen));
                self.record(CheckKind::Centrality, format!("[E,{gen}]"), &residual, &self.a)
            })
            .collect()
    }

    /// Computes `[E, S] - Λ·E` and compares it with the expected remainder.
    pub fn verify_symmetry_factorization(
        &self,
        generator: Gen,
        lambda: &OpElement,
        expected_remainder: &OpElement,
    ) -> Result<SymmetryCertificate> {
        self.factorization_at(generator, lambda, expected_remainder, &None)
    }

    fn factorization_at(
        &self,
        generator: Gen,
        lambda: &OpElement,
        expected_remainder: &OpElement,
        a: &Option<Rational>,
    ) -> Result<SymmetryCertificate> {
        let casimir = self.bind_a(&self.casimir(), a)?;
        let lambda = self.bind_a(lambda, a)?;
        let expected = self.bind_a(expected_remainder, a)?;
        let s = self.bind_a(&self.image(generator), a)?;
        let remainder = &casimir.commutator(&s) - &(&lambda * &casimir);
        if remainder != expected {
            return Err(Error::FactorizationMismatch {
                generator: generator.to_string(),
                residual: (&remainder - &expected).to_string(),
            });
        }
        let passes_at = if remainder.is_zero() { None } else { root_in_a(&remainder) };
        Ok(SymmetryCertificate { casimir, generator, lambda, remainder, passes_at })
    }

    /// The factorizations stated for this model.
    pub fn symmetry_claims(&self) -> Vec<SymmetryClaim> {
        let x = OpElement::x();
        let t = OpElement::t();
        let dx = OpElement::dx();
        let one = OpElement::one(1);
        let zero = OpElement::zero(1);
        let minus_half = Some(rat(-1, 2));
        let dilation = SymmetryClaim {
            generator: Gen::D,
            lambda: scalar(Coefficient::integer(2)),
            remainder: zero.clone(),
            a: None,
        };
        let conformal = |lambda: OpElement, remainder: OpElement, a: Option<Rational>| SymmetryClaim {
            generator: Gen::C,
            lambda,
            remainder,
            a,
        };
        match self.kind {
            ModelKind::Classical => {
                let lambda = t.scale(&Coefficient::integer(2));
                vec![dilation, conformal(lambda.clone(), scalar(anomaly()), None), conformal(lambda, zero, minus_half)]
            }
            ModelKind::Space => {
                // Λ = t (e^{-z dx} + 1) - z m x e^{z dx}
                let lambda = &(&t * &(&OpElement::sx(-1) + &one))
                    - &(&x * &OpElement::sx(1)).scale(&(Coefficient::z() * Coefficient::m()));
                vec![dilation, conformal(lambda.clone(), scalar(anomaly()), None), conformal(lambda, zero, minus_half)]
            }
            ModelKind::Time => {
                let z = Coefficient::z();
                let m = Coefficient::m();
                let st_inv = OpElement::st(-1);
                // Λ = 2 (t + 2z - z x dx)
                let lambda =
                    (&(&t + &scalar(z.scale(&int(2)))) - &(&x * &dx).scale(&z)).scale(&Coefficient::integer(2));
                // -z (m + 2(1 - a)) dx^2 + m (1 + 2a e^{-2z dt}) + m (m + 2)(1 - e^{-2z dt})
                let two_minus_2a = Coefficient::integer(2) - Coefficient::a().scale(&int(2));
                let remainder = &(&dx.pow(2).scale(&-(z.clone() * (m.clone() + two_minus_2a)))
                    + &(&one + &st_inv.scale(&Coefficient::a().scale(&int(2)))).scale(&m))
                    + &(&one - &st_inv).scale(&(m.clone() * (m.clone() + Coefficient::integer(2))));
                // at a = -1/2: Λ = 2 {t + z/2 (1 - m - 2 x dx)}
                let lambda_half = (&(&t + &scalar((Coefficient::one() - m).scale(&rat(1, 2)) * z.clone()))
                    - &(&x * &dx).scale(&z))
                    .scale(&Coefficient::integer(2));
                vec![dilation, conformal(lambda, remainder, None), conformal(lambda_half, zero, minus_half)]
            }
        }
    }

    /// Runs [`Model::symmetry_claims`], skipping claims pinned to a value of
    /// `a` other than the model's own binding.
    pub fn verify_symmetries(&self) -> Vec<(SymmetryClaim, Result<SymmetryCertificate>)> {
        self.symmetry_claims()
            .into_iter()
            .filter(|c| match (&self.a, &c.a) {
                (Some(bound), Some(wanted)) => bound == wanted,
                _ => true,
            })
            .map(|c| {
                let cert = self.factorization_at(c.generator, &c.lambda, &c.remainder, &c.a);
                (c, cert)
            })
            .collect()
    }

    pub fn symmetry_records(&self) -> Vec<CheckRecord> {
        self.verify_symmetries()
            .into_iter()
            .map(|(claim, cert)| {
                let a = claim.a.clone().or_else(|| self.a.clone());
                let subject = format!("[E,{}] = Λ·E + R", claim.generator);
                match cert {
                    Ok(cert) => CheckRecord {
                        model: self.kind,
                        check_kind: CheckKind::Symmetry,
                        subject,
                        status: Status::Pass,
                        residual_rendering: "0".into(),
                        a_binding: render_a(&a),
                        lambda: Some(cert.lambda.to_string()),
                        remainder: Some(cert.remainder.to_string()),
                    },
                    Err(e) => CheckRecord {
                        model: self.kind,
                        check_kind: CheckKind::Symmetry,
                        subject,
                        status: Status::Fail,
                        residual_rendering: e.to_string(),
                        a_binding: render_a(&a),
                        lambda: None,
                        remainder: None,
                    },
                }
            })
            .collect()
    }

    /// True iff both generator-level expressions realize to the same
    /// operator.
    pub fn verify_abstract_bracket(&self, lhs: &Expr, rhs: &Expr) -> Result<bool> {
        Ok(self.realize(lhs)? == self.realize(rhs)?)
    }

    /// Generator-level identities stated before substituting the
    /// realization, with the value of `a` they are claimed at.
    pub fn abstract_identities(&self) -> Vec<(String, Expr, Expr, Option<Rational>)> {
        let e = self.casimir_expr().clone();
        let [h, p, k, d, c, m] = Gen::BASIS.map(g);
        let ec = bracket(e.clone(), c.clone());
        let ed = bracket(e.clone(), d.clone());
        match self.kind {
            ModelKind::Classical => vec![
                (
                    "[E,C] = -(KP + PK + 2MD)".into(),
                    ec.clone(),
                    -(k.clone() * p.clone() + p.clone() * k.clone() + num(2) * m.clone() * d.clone()),
                    None,
                ),
                (
                    "[E,C] = 2tE".into(),
                    ec,
                    op(OpElement::t().scale(&Coefficient::integer(2))) * e.clone(),
                    Some(rat(-1, 2)),
                ),
                ("[E,D] = 2E".into(), ed, num(2) * e, None),
            ],
            ModelKind::Space => vec![
                (
                    "[E,C] = -K(1 - e^{-2zP})/z + M - 2MD - 2zMKH".into(),
                    ec,
                    -(k.clone() * (num(1) - exp(Gen::P, -2)) * zp(-1)) + m.clone()
                        - num(2) * m.clone() * d.clone()
                        - num(2) * zp(1) * m.clone() * k.clone() * h.clone(),
                    None,
                ),
                ("[E,D] = 2E".into(), ed, num(2) * e, None),
            ],
            ModelKind::Time => {
                let e2 = || exp(Gen::H, -2);
                vec![
                    (
                        "[E,C] = -(KP + PK + 2MDe^{-2zH}) + M(M+2)(1 - e^{-2zH}) - z(DP^2 + 2PDP + P^2D + 2P^2M)/2"
                            .into(),
                        ec,
                        -(k.clone() * p.clone() + p.clone() * k.clone() + num(2) * m.clone() * d.clone() * e2())
                            + m.clone() * (m.clone() + num(2)) * (num(1) - e2())
                            - zp(1)
                                * super::expr::frac(1, 2)
                                * (d.clone() * p.clone().pow(2)
                                    + num(2) * p.clone() * d.clone() * p.clone()
                                    + p.clone().pow(2) * d.clone()
                                    + num(2) * p.clone().pow(2) * m.clone()),
                        None,
                    ),
                    ("[E,D] = 2E".into(), ed, num(2) * e, None),
                ]
            }
        }
    }

    pub fn abstract_records(&self) -> Vec<CheckRecord> {
        self.abstract_identities()
            .into_iter()
            .filter(|(_, _, _, a)| match (&self.a, a) {
                (Some(bound), Some(wanted)) => bound == wanted,
                _ => true,
            })
            .map(|(name, lhs, rhs, a)| {
                let residual = self
                    .realize(&lhs)
                    .and_then(|l| Ok(&l - &self.realize(&rhs)?))
                    .and_then(|r| self.bind_a(&r, &a))
                    .expect("abstract identities resolve");
                self.record(CheckKind::AbstractBracket, name, &residual, &a.or_else(|| self.a.clone()))
            })
            .collect()
    }

    /// `[Δ(A), Δ(B)] = Δ([A, B])` for every relation, in the two-copy
    /// realization.
    pub fn verify_coproduct_homomorphism(&self) -> Result<Vec<CheckRecord>> {
        let through_delta = Realizer { model: self, copies: 2, slots: &[&[0, 1]] };
        self.relations()
            .iter()
            .map(|r| {
                let lhs = self.coproduct_realized(r.lhs)?.commutator(&self.coproduct_realized(r.rhs)?);
                let rhs = through_delta.eval(&r.expected)?;
                Ok(self.record(CheckKind::Homomorphism, format!("[Δ{},Δ{}]", r.lhs, r.rhs), &(&lhs - &rhs), &self.a))
            })
            .collect()
    }

    /// `(Δ⊗id)Δ(G) = (id⊗Δ)Δ(G)` in the three-copy realization.
    pub fn verify_coassociativity(&self) -> Result<Vec<CheckRecord>> {
        let left = Realizer { model: self, copies: 3, slots: &[&[0, 1], &[2]] };
        let right = Realizer { model: self, copies: 3, slots: &[&[0], &[1, 2]] };
        Gen::BASIS
            .into_iter()
            .map(|gen| {
                let delta = self
                    .coproduct(gen)
                    .ok_or_else(|| Error::InvalidParameter(format!("the {} model has no coproduct", self.kind)))?;
                let residual = &left.eval(delta)? - &right.eval(delta)?;
                Ok(self.record(CheckKind::Coassociativity, format!("Δ({gen})"), &residual, &self.a))
            })
            .collect()
    }
}

//! Verification suites and the versioned JSON report they produce.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::model::{build_model, CheckKind, CheckRecord, Gen, Model, ModelKind, Status};
use crate::series::{series_classical_limit, series_consistency_check, series_expand};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Relations,
    Centrality,
    Symmetry,
    Hopf,
    Coassoc,
    ClassicalLimit,
    Series,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "relations" => Suite::Relations,
            "centrality" => Suite::Centrality,
            "symmetry" => Suite::Symmetry,
            "hopf" => Suite::Hopf,
            "coassoc" => Suite::Coassoc,
            "classical-limit" => Suite::ClassicalLimit,
            "series" => Suite::Series,
            "all" => Suite::All,
            other => return Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Relations => "relations",
            Suite::Centrality => "centrality",
            Suite::Symmetry => "symmetry",
            Suite::Hopf => "hopf",
            Suite::Coassoc => "coassoc",
            Suite::ClassicalLimit => "classical-limit",
            Suite::Series => "series",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub model: ModelKind,
    pub suite: Suite,
    pub a: Option<String>,
    pub series_order: u32,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn record(model: &Model, kind: CheckKind, subject: String, ok: bool, residual: String) -> CheckRecord {
    CheckRecord {
        model: model.kind,
        check_kind: kind,
        subject,
        status: if ok { Status::Pass } else { Status::Fail },
        residual_rendering: residual,
        a_binding: model.a.as_ref().map(ToString::to_string),
        lambda: None,
        remainder: None,
    }
}

/// Shift mode against series mode for every bracket of the relation table.
pub fn series_records(model: &Model, order: u32) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for r in model.relations() {
        let a = model.image(r.lhs);
        let b = model.image(r.rhs);
        let ok = series_consistency_check(&a, &b, order)?;
        // the expected right-hand side must also agree termwise
        let series_comm = series_expand(&a, order)?.commutator(&series_expand(&b, order)?);
        let expected = series_expand(&model.realize(&r.expected)?, order)?;
        let residual = series_comm.sub(&expected);
        let rhs_ok = residual.terms().next().is_none();
        out.push(record(
            model,
            CheckKind::SeriesConsistency,
            format!("[{},{}] to z^{order}", r.lhs, r.rhs),
            ok && rhs_ok,
            if rhs_ok { "0".into() } else { residual.to_string() },
        ));
    }
    Ok(out)
}

/// `z -> 0` limits of the deformed generators, Casimir and bracket
/// right-hand sides against the classical model.
pub fn classical_limit_records(model: &Model) -> Result<Vec<CheckRecord>> {
    if model.kind == ModelKind::Classical {
        return Ok(Vec::new());
    }
    let classical = build_model(ModelKind::Classical, model.a.clone());
    let mut out = Vec::new();
    let mut push = |subject: String, deformed: crate::op::OpElement, target: crate::op::OpElement| -> Result<()> {
        let residual = &series_classical_limit(&deformed)? - &target;
        out.push(record(model, CheckKind::ClassicalLimit, subject, residual.is_zero(), residual.to_string()));
        Ok(())
    };
    for gen in Gen::BASIS {
        push(format!("lim {gen}"), model.image(gen), classical.image(gen))?;
    }
    push("lim E".into(), model.casimir(), classical.casimir())?;
    for r in model.relations() {
        let target = classical
            .relations()
            .iter()
            .find_map(|c| {
                if (c.lhs, c.rhs) == (r.lhs, r.rhs) {
                    Some(classical.realize(&c.expected))
                } else if (c.lhs, c.rhs) == (r.rhs, r.lhs) {
                    Some(classical.realize(&c.expected).map(|e| -e))
                } else {
                    None
                }
            })
            .ok_or_else(|| Error::InvalidParameter(format!("no classical entry for [{},{}]", r.lhs, r.rhs)))??;
        push(format!("lim [{},{}]", r.lhs, r.rhs), model.realize(&r.expected)?, target)?;
    }
    Ok(out)
}

/// Runs one suite (or all of them) on the given model.
pub fn run_suite(kind: ModelKind, suite: Suite, a: Option<Rational>, order: u32) -> Result<Report> {
    let model = build_model(kind, a.clone());
    let deformed = model.has_coproduct();
    if !deformed && matches!(suite, Suite::Hopf | Suite::Coassoc) {
        return Err(Error::InvalidParameter(format!(
            "the {kind} model has no coproduct; suite `{suite}` does not apply"
        )));
    }
    let mut checks = Vec::new();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Relations) {
        checks.extend(model.verify_relations());
    }
    if wants(Suite::Centrality) {
        checks.extend(model.verify_centrality());
    }
    if wants(Suite::Symmetry) {
        checks.extend(model.symmetry_records());
        checks.extend(model.abstract_records());
    }
    if wants(Suite::Hopf) && deformed {
        checks.extend(model.verify_coproduct_homomorphism()?);
    }
    if wants(Suite::Coassoc) && deformed {
        checks.extend(model.verify_coassociativity()?);
    }
    if wants(Suite::ClassicalLimit) {
        checks.extend(classical_limit_records(&model)?);
    }
    if wants(Suite::Series) {
        checks.extend(series_records(&model, order)?);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    Ok(Report {
        schema: REPORT_SCHEMA,
        model: kind,
        suite,
        a: a.map(|r| r.to_string()),
        series_order: order,
        passed: checks.len() - failed,
        failed,
        checks,
    })
}

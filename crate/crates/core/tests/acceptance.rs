//! Acceptance criteria. Run with `cargo test -p qsym --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits nonzero on failure.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use qsym::coeff::rat;
use qsym::lattice::{
    convergence_slope, hierarchy_generate, mode_rate, space_evolve, Boundary, PolyTrajectory, SpaceGridField,
};
use qsym::model::{build_model, CheckKind, CheckRecord, Gen, ModelKind};
use qsym::parse::parse_operator;
use qsym::suite::{classical_limit_records, series_records};

const CLASSICAL_LIMIT: Duration = Duration::from_secs(1);
const DEFORMED_LIMIT: Duration = Duration::from_secs(10);
const HOPF_LIMIT: Duration = Duration::from_secs(60);
const SERIES_ORDER: u32 = 6;
const HIERARCHY_TOL: f64 = 1e-12;
const MODE_TOL: f64 = 1e-12;
const SLOPE_TARGET: f64 = 1.0;
const SLOPE_TOL: f64 = 0.15;
const HALVINGS: u32 = 5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn failures(records: &[CheckRecord]) -> Vec<String> {
    records.iter().filter(|r| !r.passed()).map(|r| format!("{}: {}", r.subject, r.residual_rendering)).collect()
}

fn relation_suite(kind: ModelKind, limit: Duration, required: &[&str]) -> Outcome {
    let start = Instant::now();
    let model = build_model(kind, None);
    let records = model.verify_relations();
    let elapsed = start.elapsed();
    let bad = failures(&records);
    let missing: Vec<_> = required.iter().filter(|s| !records.iter().any(|r| r.subject == **s)).collect();
    outcome(
        records.len() == 15 && bad.is_empty() && missing.is_empty() && elapsed < limit,
        format!(
            "{}/15 exact, {elapsed:.2?} (limit {limit:?}), failures {bad:?}, missing {missing:?}",
            records.len() - bad.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for kind in [ModelKind::Space, ModelKind::Time] {
        let recs = build_model(kind, None).verify_centrality();
        n += recs.len();
        bad.extend(failures(&recs));
    }
    let space = build_model(ModelKind::Space, None);
    let e = space.casimir();
    let ed = e.commutator(&space.image(Gen::D));
    let two_e = e.scale(&qsym::Coefficient::integer(2));
    let ok_d = ed == two_e;
    outcome(
        n == 8 && bad.is_empty() && ok_d,
        format!("{n} centrality checks, failures {bad:?}, [E,D] = 2E in space: {ok_d}"),
    )
}

fn criterion_5() -> Outcome {
    // space conformal remainder with symbolic a, then at a = -1/2
    let space = build_model(ModelKind::Space, None);
    let lambda = parse_operator("t*Sx^-1 + t - z*m*x*Sx").unwrap();
    let anomaly = parse_operator("m*(1 + 2*a)").unwrap();
    let general = space.verify_symmetry_factorization(Gen::C, &lambda, &anomaly);
    let ok_general = general.as_ref().is_ok_and(|c| c.remainder == anomaly && c.passes_at == Some(rat(-1, 2)));
    let space_half = build_model(ModelKind::Space, Some(rat(-1, 2)));
    let at_half = space_half.verify_symmetry_factorization(Gen::C, &lambda, &qsym::OpElement::zero(1));
    let ok_half = at_half.is_ok_and(|c| c.remainder.is_zero());

    // time factorization at a = -1/2
    let time_half = build_model(ModelKind::Time, Some(rat(-1, 2)));
    let lambda_t = parse_operator("2*(t + z/2*(1 - m - 2*x*dx))").unwrap();
    let time_fact = time_half.verify_symmetry_factorization(Gen::C, &lambda_t, &qsym::OpElement::zero(1));
    let ok_time = time_fact.is_ok_and(|c| c.remainder.is_zero());

    // abstract identities of both deformed models
    let mut bad = Vec::new();
    let mut n = 0;
    for kind in [ModelKind::Space, ModelKind::Time] {
        let recs = build_model(kind, None).abstract_records();
        n += recs.len();
        bad.extend(failures(&recs));
    }
    outcome(
        ok_general && ok_half && ok_time && bad.is_empty() && n > 0,
        format!(
            "space R = m(1+2a): {ok_general}, zero at a=-1/2: {ok_half}, time factorization at a=-1/2: {ok_time}, {n} abstract identities, failures {bad:?}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    let mut ok = true;
    for kind in [ModelKind::Space, ModelKind::Time] {
        let model = build_model(kind, None);
        let hom = model.verify_coproduct_homomorphism().unwrap();
        let co = model.verify_coassociativity().unwrap();
        let bad: Vec<_> = failures(&hom).into_iter().chain(failures(&co)).collect();
        ok &= hom.len() == 15 && co.len() == 6 && bad.is_empty();
        summary.push(format!("{kind}: {} homomorphism, {} coassociativity, failures {bad:?}", hom.len(), co.len()));
    }
    let elapsed = start.elapsed();
    outcome(ok && elapsed < HOPF_LIMIT, format!("{}; {elapsed:.2?} (limit {HOPF_LIMIT:?})", summary.join("; ")))
}

fn criterion_7() -> Outcome {
    let mut series_n = 0;
    let mut bad = Vec::new();
    for kind in ModelKind::ALL {
        let recs = series_records(&build_model(kind, None), SERIES_ORDER).unwrap();
        series_n += recs.len();
        bad.extend(failures(&recs));
    }
    let mut limit_n = 0;
    for kind in [ModelKind::Space, ModelKind::Time] {
        let recs: Vec<_> = classical_limit_records(&build_model(kind, None))
            .unwrap()
            .into_iter()
            .filter(|r| r.check_kind == CheckKind::ClassicalLimit && r.subject.starts_with("lim ["))
            .collect();
        limit_n += recs.len();
        bad.extend(failures(&recs));
    }
    outcome(
        series_n == 45 && limit_n == 30 && bad.is_empty(),
        format!("{series_n} series brackets at order {SERIES_ORDER}, {limit_n} classical limits, failures {bad:?}"),
    )
}

fn sequences(max_len: usize) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for g in [Gen::K, Gen::C] {
                let mut t: Vec<Gen> = s.clone();
                t.push(g);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn criterion_8() -> Outcome {
    // hierarchies from φ ≡ 1 (a = -1/2, where C is a symmetry)
    let (z, m, a, t0) = (0.125, 1.5, -0.5, 0.3);
    let space = build_model(ModelKind::Space, None);
    let time = build_model(ModelKind::Time, None);
    let seed_space =
        SpaceGridField::from_values(vec![Complex64::new(1.0, 0.0); 64], -4.0, z, m, a, t0, Boundary::Open).unwrap();
    let seed_time = PolyTrajectory::constant(1.0, 12, t0, z, m, a).unwrap();
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    let seqs = sequences(3);
    for s in &seqs {
        match hierarchy_generate(&seed_space, s, &space, HIERARCHY_TOL) {
            Ok(h) => worst = h.residuals.iter().copied().fold(worst, f64::max),
            Err(e) => errors.push(format!("space {s:?}: {e}")),
        }
        match hierarchy_generate(&seed_time, s, &time, HIERARCHY_TOL) {
            Ok(h) => worst = h.residuals.iter().copied().fold(worst, f64::max),
            Err(e) => errors.push(format!("time {s:?}: {e}")),
        }
    }
    let ok_h = errors.is_empty() && worst <= HIERARCHY_TOL;

    // single-mode evolution against the analytic multiplier
    let (n, zs, ms, dt) = (32, 0.25, 1.0, 0.01);
    let mut mode_err: f64 = 0.0;
    for k in 0..n as i64 {
        let f = SpaceGridField::mode(k, n, zs, ms, 0.0).unwrap();
        let g = space_evolve(&f, dt).unwrap();
        let theta = TAU * k as f64 / n as f64;
        let project = |v: &[Complex64]| {
            v.iter().enumerate().map(|(j, c)| c * Complex64::from_polar(1.0, -theta * j as f64)).sum::<Complex64>()
                / n as f64
        };
        let want = (mode_rate(theta, zs, ms) * dt).exp();
        let got = project(&g.values) / project(&f.values);
        mode_err = mode_err.max((got - want).norm() / want.norm());
    }
    let ok_mode = mode_err <= MODE_TOL;

    // time model against the continuum heat kernel
    let modes: BTreeMap<i64, Complex64> =
        [(1, 1.0), (-1, 1.0), (3, 0.5), (-3, 0.5)].into_iter().map(|(k, c)| (k, Complex64::new(c, 0.0))).collect();
    let slope = convergence_slope(&modes, TAU, 1.0, 1.0, HALVINGS).unwrap_or(f64::NAN);
    let ok_slope = (slope - SLOPE_TARGET).abs() <= SLOPE_TOL;
    outcome(
        ok_h && ok_mode && ok_slope,
        format!(
            "{} hierarchies per model, worst residual {worst:.2e} (tol {HIERARCHY_TOL:e}), errors {errors:?}; \
             mode multiplier error {mode_err:.2e} (tol {MODE_TOL:e}); \
             convergence slope {slope:.3} over {HALVINGS} halvings (target {SLOPE_TARGET} ± {SLOPE_TOL})",
            seqs.len()
        ),
    )
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("classical relations", Box::new(|| relation_suite(ModelKind::Classical, CLASSICAL_LIMIT, &[]))),
        ("space relations", Box::new(|| relation_suite(ModelKind::Space, DEFORMED_LIMIT, &["[K,P]", "[H,C]"]))),
        ("time relations", Box::new(|| relation_suite(ModelKind::Time, DEFORMED_LIMIT, &["[D,C]"]))),
        ("centrality", Box::new(criterion_4)),
        ("anomaly cancellation", Box::new(criterion_5)),
        ("hopf structure", Box::new(criterion_6)),
        ("oracle equivalence", Box::new(criterion_7)),
        ("numerics", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.ok {
            failed += 1;
        }
        println!("criterion {} [{}] {}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, name, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

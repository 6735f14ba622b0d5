use qsym::coeff::{rat, Coefficient};
use qsym::model::{build_model, CheckRecord, Gen, ModelKind};
use qsym::op::OpElement;
use qsym::parse::parse_operator;
use qsym::series::series_classical_limit;
use qsym::suite::{run_suite, Suite};

fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(CheckRecord::passed)
}

#[test]
fn every_suite_passes_for_every_model() {
    for kind in ModelKind::ALL {
        let r = run_suite(kind, Suite::All, None, 6).unwrap();
        assert!(r.all_passed(), "{kind}: {:?}", r.checks.iter().find(|c| !c.passed()));
    }
}

#[test]
fn classical_conformal_remainder_is_the_anomaly() {
    let model = build_model(ModelKind::Classical, None);
    let certs = model.verify_symmetries();
    let (_, cert) = certs.iter().find(|(c, _)| c.generator == Gen::C && c.a.is_none()).unwrap();
    let cert = cert.as_ref().unwrap();
    assert_eq!(cert.remainder, parse_operator("m + 2*m*a").unwrap());
    assert_eq!(cert.passes_at, Some(rat(-1, 2)));
}

#[test]
fn space_galilei_generators_are_unconditional() {
    let model = build_model(ModelKind::Space, None);
    for rec in model.verify_centrality() {
        assert!(rec.passed(), "{}", rec.subject);
    }
}

#[test]
fn time_galilei_relation_k_h() {
    // [K,H] = e^{2zH} P, checked against the hand-typed realization
    let model = build_model(ModelKind::Time, None);
    let lhs = model.image(Gen::K).commutator(&model.image(Gen::H));
    assert_eq!(lhs, parse_operator("St*dx").unwrap());
}

#[test]
fn perturbed_time_conformal_generator_is_caught() {
    // replacing b = m/2 - 2 by m/2 - 1 in the St coefficient of C
    let mut model = build_model(ModelKind::Time, None);
    let shift = OpElement::st(1).scale(&Coefficient::z().scale(&rat(-2, 1)));
    let c = &model.image(Gen::C) + &shift;
    model.replace_image(Gen::C, c).unwrap();
    assert!(!all_pass(&model.verify_relations()));
    assert!(!all_pass(&model.verify_coproduct_homomorphism().unwrap()));
}

#[test]
fn perturbed_space_boost_is_caught() {
    let mut model = build_model(ModelKind::Space, None);
    // forward instead of backward difference in K
    model.replace_image(Gen::K, parse_operator("-t*(Sx - 1)/z - m*x*Sx").unwrap()).unwrap();
    assert!(!all_pass(&model.verify_relations()));
    assert!(!all_pass(&model.verify_centrality()));
}

#[test]
fn perturbed_space_dilation_is_caught() {
    let mut model = build_model(ModelKind::Space, None);
    let d = &model.image(Gen::D) + &parse_operator("z*x*dx").unwrap();
    model.replace_image(Gen::D, d).unwrap();
    assert!(!all_pass(&model.verify_relations()));
}

#[test]
fn replace_image_rejects_derived_generator() {
    let mut model = build_model(ModelKind::Space, None);
    assert!(model.replace_image(Gen::Dprime, OpElement::one(1)).is_err());
    assert!(model.replace_image(Gen::K, OpElement::one(2)).is_err());
}

#[test]
fn deformed_casimirs_tend_to_the_classical_one() {
    let classical = build_model(ModelKind::Classical, None).casimir();
    for kind in [ModelKind::Space, ModelKind::Time] {
        let e = build_model(kind, None).casimir();
        assert_eq!(series_classical_limit(&e).unwrap(), classical, "{kind}");
    }
}

#[test]
fn hopf_suite_rejected_for_classical() {
    assert!(run_suite(ModelKind::Classical, Suite::Hopf, None, 6).is_err());
}

#[test]
fn report_serializes_with_schema() {
    let r = run_suite(ModelKind::Time, Suite::Centrality, Some(rat(-1, 2)), 6).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["a"], "-1/2");
    assert_eq!(v["checks"][0]["check_kind"], "centrality");
}

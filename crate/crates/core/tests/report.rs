use fpode::expr::{parse_expression, Chart, FunctionRegistry};
use fpode::report::{
    analyze, emit_report, AnalysisReport, AnalysisRequest, ErrorKind, OutputFormat, Stage,
};

const FAMILY: &str = "3/2*q^2/p + A*p^3 + C*p^2 + B*p";

fn reparses_to_zero(text: &str) -> bool {
    let reg = FunctionRegistry::with_family_functions();
    [Chart::P, Chart::MAdapted, Chart::J2]
        .iter()
        .find_map(|c| parse_expression(text, *c, &reg).ok())
        .map(|e| e.is_zero())
        .unwrap_or(false)
}

/// Every residual attached to a true verdict must re-parse to zero.
fn assert_auditable(rep: &AnalysisReport) {
    let mut seen = 0;
    if let Some(v) = &rep.conditions {
        for c in v.conditions.iter().filter(|c| c.holds) {
            assert!(reparses_to_zero(&c.residual), "{}", c.name);
            seen += 1;
        }
    }
    if let Some(e) = &rep.einstein_residual_zero {
        if e.verdict {
            for s in e.residual.iter().flatten() {
                assert!(reparses_to_zero(s), "{s}");
                seen += 1;
            }
        }
    }
    let checks = rep
        .connection
        .iter()
        .flat_map(|c| c.on_p.iter().chain(&c.cartan))
        .chain(rep.metric.iter().map(|m| &m.projectability))
        .chain(
            rep.einstein_residual_zero
                .iter()
                .flat_map(|e| &e.identities),
        );
    for c in checks.filter(|c| c.holds) {
        for r in &c.residuals {
            assert!(reparses_to_zero(&r.value), "{}: {}", c.name, r.label);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn flat_model_report_is_all_green() {
    let rep = analyze(&AnalysisRequest::new("3/2*q^2/p"));
    assert!(rep.errors.is_empty(), "{:?}", rep.errors);
    assert!(rep
        .structure_functions
        .as_ref()
        .unwrap()
        .values()
        .all(|v| v == "0"));
    assert!(rep.invariants_kne.as_ref().unwrap().all_zero);
    assert!(rep.einstein_residual_zero.as_ref().unwrap().verdict);
    let petrov = rep.petrov.as_ref().unwrap();
    assert_eq!(petrov.labels, Some(("D".into(), "D".into())));
    assert_eq!(petrov.points.len(), 5);
    let conn = rep.connection.as_ref().unwrap();
    assert!(conn.cartan_flat && conn.kne_zero);
    assert!(rep.appendix_residuals.as_ref().unwrap().verdict);
    assert_eq!(rep.exit_code(), 0);
    assert_auditable(&rep);
}

#[test]
fn q_squared_is_admissible_but_not_einstein() {
    let rep = analyze(&AnalysisRequest::new("q^2").with_stages([Stage::Invariants]));
    assert!(rep.errors.is_empty());
    assert!(rep.fqq_nonzero.as_ref().unwrap().verdict);
    assert_eq!(rep.structure_functions.as_ref().unwrap().len(), 13);
    assert!(!rep.conditions.as_ref().unwrap().verdict);
    assert!(!rep.family.as_ref().unwrap().member);
    assert!(rep.metric.is_none());
    assert_eq!(rep.exit_code(), 1);
}

#[test]
fn family_only_stage_on_non_member_is_an_input_error() {
    let rep = analyze(&AnalysisRequest::new("q^2").with_stages([Stage::Metric]));
    assert_eq!(rep.errors.len(), 1);
    assert_eq!(rep.errors[0].code, "not_in_family");
    assert_eq!(rep.exit_code(), 2);
}

#[test]
fn degenerate_and_malformed_inputs() {
    let rep = analyze(&AnalysisRequest::new("y").with_stages([Stage::Invariants]));
    assert_eq!(rep.errors[0].code, "degenerate_fqq");
    assert_eq!(rep.errors[0].kind, ErrorKind::Input);
    assert!(!rep.fqq_nonzero.as_ref().unwrap().verdict);
    assert_eq!(rep.exit_code(), 2);

    let rep = analyze(&AnalysisRequest::new("q^2 +* p"));
    assert_eq!(rep.errors[0].code, "parse_error");
    let rep = analyze(&AnalysisRequest::new("q^2").with_opaque("A", &["w"]));
    assert_eq!(rep.errors[0].code, "invalid_opaque");
}

#[test]
fn opaque_family_renders_k_canonically() {
    let req = AnalysisRequest::new(FAMILY)
        .with_family_functions()
        .with_stages([
            Stage::Invariants,
            Stage::Conditions,
            Stage::Metric,
            Stage::Einstein,
            Stage::Connection,
        ]);
    let rep = analyze(&req);
    assert!(rep.errors.is_empty(), "{:?}", rep.errors);
    assert_eq!(rep.invariants_kne.as_ref().unwrap().k, "-C/(4*alpha^2*p)");
    let json = emit_report(&rep, OutputFormat::Json);
    assert!(json.contains(r#""k": "-C/(4*alpha^2*p)""#));
    assert_eq!(rep.exit_code(), 0);
    assert_auditable(&rep);
}

#[test]
fn petrov_needs_specialized_functions() {
    let req = AnalysisRequest::new(FAMILY)
        .with_family_functions()
        .with_stages([Stage::Petrov]);
    let rep = analyze(&req);
    assert_eq!(rep.errors[0].code, "unspecialized_function");
    assert_eq!(rep.exit_code(), 2);

    let rep = analyze(
        &req.with_specialization("A", "x*y")
            .with_specialization("B", "x+y"),
    );
    assert!(rep.errors.is_empty(), "{:?}", rep.errors);
    let p = rep.petrov.unwrap();
    assert!(p.stable);
    let (sd, asd) = p.labels.unwrap();
    let mut pair = [sd, asd];
    pair.sort();
    assert_eq!(pair, ["D".to_string(), "II".to_string()]);
}

#[test]
fn json_round_trip_and_schema_keys() {
    let rep = analyze(&AnalysisRequest::new("3/2*q^2/p"));
    let json = emit_report(&rep, OutputFormat::Json);
    let back: AnalysisReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rep);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in [
        "input",
        "fqq_nonzero",
        "structure_functions",
        "conditions",
        "family",
        "invariants_kne",
        "metric",
        "einstein_residual_zero",
        "petrov",
        "connection",
        "appendix_residuals",
        "timings",
        "conventions",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reports_are_deterministic_and_stages_isolated() {
    let req = AnalysisRequest::new(FAMILY)
        .with_family_functions()
        .with_specialization("A", "y^2")
        .with_specialization("B", "x^2")
        .with_points(4, 17);
    let a = emit_report(&analyze(&req), OutputFormat::Json);
    let b = emit_report(&analyze(&req), OutputFormat::Json);
    assert_eq!(a, b);

    let full = analyze(&req);
    let only = analyze(&req.clone().with_stages([Stage::Metric]));
    assert_eq!(full.metric, only.metric);
    assert!(only.petrov.is_none() && only.einstein_residual_zero.is_none());
}

#[test]
fn text_rendering_mentions_each_section() {
    let rep = analyze(&AnalysisRequest::new("3/2*q^2/p"));
    let text = emit_report(&rep, OutputFormat::Text);
    for needle in [
        "structure functions",
        "Einstein conditions",
        "metric in",
        "(SD, ASD) = (D, D)",
        "connection",
    ] {
        assert!(text.contains(needle), "{needle}");
    }
}

#[test]
fn timings_only_when_requested() {
    let mut req = AnalysisRequest::new("q^2").with_stages([Stage::Invariants]);
    assert!(analyze(&req).timings.is_empty());
    req.timings = true;
    assert!(analyze(&req).timings.contains_key("invariants"));
}

use fpode::cartan::*;
use fpode::expr::{coord, int, parse_expression, Chart, Coord, FunctionRegistry};
use fpode::forms::{ChartMap, DifferentialForm};

fn problem(text: &str) -> OdeProblem {
    OdeProblem::parse(text, FunctionRegistry::with_family_functions()).unwrap()
}

#[test]
fn flat_model_has_vanishing_invariants() {
    let sf = structure_functions(&OdeProblem::flat_model()).unwrap();
    assert!(sf.all_zero(), "{sf}");
    assert!(check_einstein_conditions(&sf).all_hold());
}

#[test]
fn family_satisfies_all_conditions() {
    let prob = OdeProblem::family();
    let sf = structure_functions(&prob).unwrap();
    let report = check_einstein_conditions(&sf);
    for c in &report.conditions {
        assert!(c.holds(), "{} fails: {}", c.name, c.residual);
    }
    let inv = family_invariants(&FamilyData::opaque());
    let on_m = sf.pull_back(&ChartMap::p_to_adapted()).unwrap();
    assert_eq!(on_m.k(), &inv.k);
    assert_eq!(on_m.n(), &inv.n);
    assert_eq!(on_m.e(), &inv.e);
}

#[test]
fn generic_equations_fail_some_condition() {
    let sf = structure_functions(&problem("q^3 + y*p")).unwrap();
    assert!(!check_einstein_conditions(&sf).all_hold());
    let al = coord(Coord::Alpha);
    let q = coord(Coord::Q);
    assert_eq!(sf.a(), &(al / q.pow(3)));

    let sf = structure_functions(&problem("q^2")).unwrap();
    assert_eq!(sf.c(), &int(2));
    assert_eq!(sf.h(), &int(2));
    assert!(!check_einstein_conditions(&sf).all_hold());
}

#[test]
fn only_the_grouped_theta3_reading_closes() {
    for prob in [
        OdeProblem::flat_model(),
        OdeProblem::family(),
        problem("q^3 + y*p"),
    ] {
        let grouped = invariant_coframe_with(&prob, CoframeVariant::CORRECTED).unwrap();
        assert!(extract_structure_functions(&grouped).is_ok());
        let mut other = CoframeVariant::CORRECTED;
        other.theta3_reading = Theta3Reading::GammaMinusThirdTimesFq;
        let cf = invariant_coframe_with(&prob, other).unwrap();
        let err = extract_structure_functions(&cf).unwrap_err();
        assert!(
            matches!(err, CartanError::InconsistentStructure { .. }),
            "{err}"
        );
        // d∘d = 0 holds for either reading, so it cannot discriminate
        for w in cf.forms() {
            assert!(w.d().d().is_zero());
        }
    }
}

#[test]
fn literal_coframe_does_not_close() {
    for prob in [OdeProblem::flat_model(), problem("q^3 + y*p")] {
        let mut v = CoframeVariant::CORRECTED;
        v.literal_omega1 = true;
        let cf = invariant_coframe_with(&prob, v).unwrap();
        assert!(extract_structure_functions(&cf).is_err());
        let mut v = CoframeVariant::CORRECTED;
        v.literal_theta3_scale = true;
        let cf = invariant_coframe_with(&prob, v).unwrap();
        assert!(extract_structure_functions(&cf).is_err());
        let cf = invariant_coframe_with(&prob, CoframeVariant::LITERAL).unwrap();
        assert!(extract_structure_functions(&cf).is_err());
    }
}

#[test]
fn invariant_coframe_is_integrable_and_nondegenerate() {
    for prob in [
        OdeProblem::flat_model(),
        OdeProblem::family(),
        problem("q^3 + y*p"),
        problem("x*q^3 + y^2*q^2 + p^2*q^2*x + x*p*q + y"),
    ] {
        let cf = invariant_coframe(&prob).unwrap();
        assert!(!cf.determinant().is_zero());
        assert!(cf.pairing().unwrap().is_identity());
        for w in cf.forms() {
            assert!(w.d().d().is_zero());
        }
        extract_structure_functions(&cf).unwrap();
    }
}

#[test]
fn appendix_holds_for_admissible_equations() {
    for prob in [
        OdeProblem::flat_model(),
        OdeProblem::family(),
        problem("q^3 + y*p"),
    ] {
        let cf = invariant_coframe(&prob).unwrap();
        let sf = extract_structure_functions(&cf).unwrap();
        let basis = tau_basis(&cf).unwrap();
        let r = verify_appendix(&sf, &basis).unwrap();
        assert!(r.all_zero(), "{r:?}");
    }
}

#[test]
fn literal_appendix_sign_fails_when_l_is_nonzero() {
    let prob = problem("q^3 + y*p");
    let cf = invariant_coframe(&prob).unwrap();
    let sf = extract_structure_functions(&cf).unwrap();
    assert!(!sf.l().is_zero());
    let basis = tau_basis(&cf).unwrap();
    let r = verify_appendix_with(&sf, &basis, AppendixVariant::Literal).unwrap();
    let bad: Vec<_> = r.equations.iter().filter(|(_, v)| !v.is_empty()).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].0, "tau3");
    assert_eq!(bad[0].1.len(), 1);
    assert_eq!(bad[0].1[0].0, ("tau1", "Gamma2"));
}

#[test]
fn flat_model_tau_relations() {
    let cf = invariant_coframe(&OdeProblem::flat_model()).unwrap();
    let basis = tau_basis(&cf).unwrap();
    let direct = basis.expand_differentials().unwrap();
    assert!(TableResiduals::compare(&direct, &flat_tables()).all_zero());
}

#[test]
fn family_tau_relations_reduce() {
    let cf = invariant_coframe(&OdeProblem::family()).unwrap();
    let sf = extract_structure_functions(&cf).unwrap();
    let basis = tau_basis(&cf).unwrap();
    let direct = basis.expand_differentials().unwrap();
    let r = TableResiduals::compare(&direct, &reduced_tables(sf.k(), sf.n(), sf.e()));
    assert!(r.all_zero(), "{r:?}");
}

#[test]
fn tau_round_trip() {
    let cf = invariant_coframe(&problem("q^3 + y*p")).unwrap();
    let basis = tau_basis(&cf).unwrap();
    let back = basis.theta_coframe().unwrap();
    assert_eq!(back.forms(), cf.forms());
}

#[test]
fn null_coframe_of_the_family() {
    let cf = invariant_coframe(&OdeProblem::family()).unwrap();
    let basis = tau_basis(&cf)
        .unwrap()
        .pull_back(&ChartMap::p_to_adapted())
        .unwrap();
    let reg = FunctionRegistry::with_family_functions();
    let m = |s: &str| parse_expression(s, Chart::MAdapted, &reg).unwrap();
    let one = |pairs: &[(Coord, &str)]| {
        DifferentialForm::one_form(Chart::MAdapted, pairs.iter().map(|(c, s)| (*c, m(s)))).unwrap()
    };
    assert_eq!(basis.tau(1), &one(&[(Coord::Y, "2*alpha")]));
    assert_eq!(
        basis.tau(2),
        &one(&[
            (Coord::X, "C/(4*alpha)"),
            (Coord::Y, "(2*A - z^2)/(4*alpha)"),
            (Coord::Z, "1/(2*alpha)")
        ])
    );
    assert_eq!(
        basis.tau(3),
        &one(&[
            (Coord::X, "-(t^2 + 2*B)/(4*alpha*p)"),
            (Coord::Y, "-C/(4*alpha*p)"),
            (Coord::T, "1/(2*alpha*p)")
        ])
    );
    assert_eq!(basis.tau(4), &one(&[(Coord::X, "2*alpha*p")]));
    assert_eq!(
        basis.gamma(1),
        &one(&[(Coord::Y, "-z"), (Coord::Alpha, "1/alpha")])
    );
    assert_eq!(
        basis.gamma(2),
        &one(&[
            (Coord::X, "-t"),
            (Coord::Alpha, "1/alpha"),
            (Coord::P, "1/p")
        ])
    );
}

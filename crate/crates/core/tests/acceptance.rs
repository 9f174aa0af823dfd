//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails or overruns its time limit.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fpode::cartan::{
    check_einstein_conditions, extract_structure_functions, invariant_coframe, structure_functions,
    tau_basis, verify_appendix, FamilyData, OdeProblem, TauBasis,
};
use fpode::curvature::{
    cartan_connection_so22, connection_and_curvature_on_p, curvature_tensors, einstein_residual,
    family_frame, metric_from_family,
};
use fpode::expr::{frac, int, parse_expression, BigRational, Chart, Expression, FunctionRegistry};
use fpode::forms::{ChartMap, DifferentialForm};
use fpode::report::{analyze, AnalysisRequest, Stage};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const FAMILY: &str = "3/2*q^2/p + A*p^3 + C*p^2 + B*p";

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn on_m(s: &str) -> Expression {
    parse_expression(
        s,
        Chart::MAdapted,
        &FunctionRegistry::with_family_functions(),
    )
    .unwrap()
}

fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> DifferentialForm {
    a.wedge(b).unwrap()
}

fn add(a: &DifferentialForm, b: &DifferentialForm) -> DifferentialForm {
    a.try_add(b).unwrap()
}

fn zero1() -> DifferentialForm {
    DifferentialForm::zero(Chart::MAdapted, 1)
}

fn zero2() -> DifferentialForm {
    DifferentialForm::zero(Chart::MAdapted, 2)
}

/// k, n, e as displayed for the family, on the adapted chart.
fn displayed_kne() -> (Expression, Expression, Expression) {
    let k = on_m("-C/(4*alpha^2*p)");
    let n = on_m("(C_y - z*C - 2*A_x)/(8*alpha^3*p)");
    let e = &(&frac(1, 2) * &n) + &on_m("(t*C + 2*B_y - C_x)/(16*alpha^3*p^2)");
    (k, n, e)
}

fn tau(b: &TauBasis, i: usize) -> DifferentialForm {
    b.tau(i).clone()
}

fn gam(b: &TauBasis, a: usize) -> DifferentialForm {
    b.gamma(a).clone()
}

fn flat_model() -> Outcome {
    let prob =
        OdeProblem::parse("3/2*q^2/p", FunctionRegistry::new()).map_err(|e| e.to_string())?;
    let sf = structure_functions(&prob).map_err(|e| e.to_string())?;
    ensure(sf.iter().count() == 13, || {
        "expected thirteen structure functions".into()
    })?;
    for (name, v) in sf.iter() {
        ensure(v.is_zero(), || format!("{name} = {v}"))?;
    }
    let b = tau_basis(&invariant_coframe(&prob).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let (t1, t2, t3, t4) = (tau(&b, 1), tau(&b, 2), tau(&b, 3), tau(&b, 4));
    let (g1, g2) = (gam(&b, 1), gam(&b, 2));
    let expected = [
        ("dtau1", t1.d(), wedge(&g1, &t1)),
        ("dtau2", t2.d(), -wedge(&g1, &t2)),
        ("dtau3", t3.d(), -wedge(&g2, &t3)),
        ("dtau4", t4.d(), wedge(&g2, &t4)),
        ("dGamma1", g1.d(), wedge(&t1, &t2)),
        ("dGamma2", g2.d(), wedge(&t4, &t3)),
    ];
    for (name, got, want) in expected {
        ensure(got == want, || {
            format!("{name} differs from the so(2,2) relation")
        })?;
    }
    Ok(())
}

fn family_conditions() -> Outcome {
    let prob = OdeProblem::parse(FAMILY, FunctionRegistry::with_family_functions())
        .map_err(|e| e.to_string())?;
    let sf = structure_functions(&prob).map_err(|e| e.to_string())?;
    let report = check_einstein_conditions(&sf);
    ensure(report.conditions.len() == 10, || {
        format!("{} conditions", report.conditions.len())
    })?;
    for c in &report.conditions {
        ensure(c.holds(), || {
            format!("{} has residual {}", c.name, c.residual)
        })?;
    }
    let m = sf
        .pull_back(&ChartMap::p_to_adapted())
        .map_err(|e| e.to_string())?;
    let (k, n, e) = displayed_kne();
    ensure(m.k() == &k, || format!("k = {}", m.k()))?;
    ensure(m.n() == &n, || format!("n = {}", m.n()))?;
    ensure(m.e() == &e, || format!("e = {}", m.e()))?;
    Ok(())
}

fn einstein_identity() -> Outcome {
    let g = metric_from_family(&FamilyData::opaque())
        .map_err(|e| e.to_string())?
        .metric;
    let ct = curvature_tensors(&g);
    let lambda = BigRational::from_integer((-1).into());
    let res = einstein_residual(&g, &ct, &lambda);
    let mut checked = 0;
    for i in 0..4 {
        for j in i..4 {
            ensure(res.get(i, j).is_zero(), || {
                format!("Ric + G at ({i},{j}) = {}", res.get(i, j))
            })?;
            checked += 1;
        }
    }
    ensure(checked == 10, || {
        "expected ten independent components".into()
    })?;
    ensure(ct.scalar() == &int(-4), || {
        format!("scalar curvature {}", ct.scalar())
    })
}

/// Labels at each sample point, as (SD, ASD) strings.
fn petrov_labels(a: &str, b: &str) -> Result<Vec<(String, String)>, String> {
    let req = AnalysisRequest::new(FAMILY)
        .with_family_functions()
        .with_stages([Stage::Petrov])
        .with_specialization("A", a)
        .with_specialization("B", b)
        .with_points(6, 2026);
    let rep = analyze(&req);
    ensure(rep.errors.is_empty(), || format!("{:?}", rep.errors))?;
    let p = rep.petrov.ok_or("no petrov section")?;
    ensure(p.points.len() >= 5, || {
        format!("only {} classified points", p.points.len())
    })?;
    Ok(p.points.into_iter().map(|pt| (pt.sd, pt.asd)).collect())
}

fn petrov_dichotomy() -> Outcome {
    let per_case = Duration::from_secs(60);
    let start = Instant::now();
    let generic = petrov_labels("x*y", "x+y")?;
    let d_side: Vec<bool> = generic
        .iter()
        .map(|(sd, asd)| match (sd.as_str(), asd.as_str()) {
            ("D", "II") => Ok(true),
            ("II", "D") => Ok(false),
            other => Err(format!("generic member gave {other:?}")),
        })
        .collect::<Result<_, _>>()?;
    ensure(d_side.iter().all(|s| *s == d_side[0]), || {
        "D factor changes eigenspace between points".into()
    })?;
    ensure(start.elapsed() < per_case, || {
        "generic case over time".into()
    })?;
    for (a, b) in [("y^2", "x^2"), ("0", "0")] {
        let start = Instant::now();
        let labels = petrov_labels(a, b)?;
        ensure(labels.iter().all(|(s, t)| s == "D" && t == "D"), || {
            format!("({a}, {b}) gave {labels:?}")
        })?;
        ensure(start.elapsed() < per_case, || {
            format!("({a}, {b}) over time")
        })?;
    }
    Ok(())
}

/// Lowered-index components `R_{kj}` of a 2-form expanded in the tau coframe.
fn coefficient(b: &TauBasis, form: &DifferentialForm, k: usize, j: usize) -> Expression {
    b.coframe().expand_two_form(form).unwrap().get(k, j)
}

fn connection_on_p() -> Outcome {
    let frame = family_frame(&FamilyData::opaque()).map_err(|e| e.to_string())?;
    let b = &frame.basis;
    let (k, n, e) = displayed_kne();
    let t: Vec<DifferentialForm> = (1..=4).map(|i| tau(b, i)).collect();
    let (g1, g2) = (gam(b, 1), gam(b, 2));
    let half = frac(1, 2);
    let mut gamma: Vec<Vec<DifferentialForm>> = vec![vec![zero1(); 4]; 4];
    let off = add(
        &t[0].scale(&-(&half * &n)),
        &t[3].scale(&(&e - &(&half * &n))),
    );
    gamma[0][0] = -g1.clone();
    gamma[1][1] = g1.clone();
    gamma[1][3] = off.clone();
    gamma[2][0] = -off;
    gamma[2][2] = g2.clone();
    gamma[3][3] = -g2.clone();

    for i in 0..4 {
        let torsion = (0..4).fold(t[i].d(), |acc, j| add(&acc, &wedge(&gamma[i][j], &t[j])));
        ensure(torsion.is_zero(), || {
            format!("dtau{} + Gamma^tau does not vanish", i + 1)
        })?;
    }
    // Gtilde pairs 1 with 2 and 3 with 4
    let partner = [1usize, 0, 3, 2];
    for i in 0..4 {
        for j in 0..4 {
            let s = add(&gamma[partner[i]][j], &gamma[partner[j]][i]);
            ensure(s.is_zero(), || {
                format!("Gamma_({i}{j}) is not antisymmetric")
            })?;
        }
    }

    let x = |f: &Expression, i: usize| b.coframe().frame_derivative(f, i).unwrap();
    let mixed = &(&(&half * &x(&n, 3)) + &x(&e, 0)) - &(&half * &x(&n, 0));
    let hk = &half * &k;
    let (w12, w14, w34) = (
        wedge(&t[0], &t[1]),
        wedge(&t[0], &t[3]),
        wedge(&t[2], &t[3]),
    );
    let mut expected: Vec<Vec<DifferentialForm>> = vec![vec![zero2(); 4]; 4];
    expected[0][0] = add(&-w12.clone(), &w14.scale(&-hk.clone()));
    expected[1][1] = add(&w12, &w14.scale(&hk));
    expected[1][3] = add(
        &add(&w12.scale(&hk), &w14.scale(&mixed)),
        &w34.scale(&-hk.clone()),
    );
    expected[2][0] = -expected[1][3].clone();
    expected[2][2] = add(&w14.scale(&hk), &-w34.clone());
    expected[3][3] = add(&w14.scale(&-hk.clone()), &w34);

    let mut curvature: Vec<Vec<DifferentialForm>> = vec![vec![zero2(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let r = (0..4).fold(gamma[i][j].d(), |acc, m| {
                add(&acc, &wedge(&gamma[i][m], &gamma[m][j]))
            });
            ensure(r == expected[i][j], || {
                format!("R^{}_{} differs from the displayed list", i + 1, j + 1)
            })?;
            curvature[i][j] = r;
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            let ric: Expression = (0..4).map(|m| coefficient(b, &curvature[m][i], m, j)).sum();
            let g = if partner[i] == j { int(1) } else { int(0) };
            ensure(&ric + &g == int(0), || {
                format!("Ric_{}{} = {ric}", i + 1, j + 1)
            })?;
        }
    }
    let lib = connection_and_curvature_on_p(&FamilyData::opaque()).map_err(|e| e.to_string())?;
    ensure(lib.all_hold(), || {
        "library connection checks disagree".into()
    })
}

/// The so(2,2) connection matrix as displayed, in the tau/Gamma basis of `b`.
fn displayed_omega(b: &TauBasis) -> Vec<Vec<DifferentialForm>> {
    let (t1, t2, t3, t4) = (tau(b, 1), tau(b, 2), tau(b, 3), tau(b, 4));
    let (g1, g2) = (gam(b, 1), gam(b, 2));
    let h = frac(1, 2);
    let s = |f: &DifferentialForm, c: &Expression| f.scale(c);
    let sum = |fs: &[DifferentialForm]| fs.iter().fold(zero1(), |acc, f| add(&acc, f));
    let a = sum(&[g1.clone(), g2.clone(), t4.clone()]);
    let lower = sum(&[g2.clone(), -t3.clone(), s(&t4, &h)]);
    vec![
        vec![s(&a, &-h.clone()), zero1(), t1.clone(), s(&t4, &-h.clone())],
        vec![zero1(), s(&a, &h), -lower.clone(), s(&t2, &-h.clone())],
        vec![
            s(&t2, &h),
            s(&t4, &h),
            s(&sum(&[g1.clone(), -g2.clone(), -t4.clone()]), &h),
            zero1(),
        ],
        vec![lower, -t1, zero1(), s(&sum(&[-g1, g2, t4]), &h)],
    ]
}

fn omega_curvature(omega: &[Vec<DifferentialForm>]) -> Vec<Vec<DifferentialForm>> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    (0..4).fold(omega[i][j].d(), |acc, m| {
                        add(&acc, &wedge(&omega[i][m], &omega[m][j]))
                    })
                })
                .collect()
        })
        .collect()
}

fn cartan_connection() -> Outcome {
    let g = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    let frame = family_frame(&FamilyData::opaque()).map_err(|e| e.to_string())?;
    let b = &frame.basis;
    let omega = displayed_omega(b);
    for i in 0..4 {
        for k in 0..4 {
            let lowered = |i: usize, k: usize| {
                (0..4)
                    .filter(|j| g[i][*j] == 1)
                    .fold(zero1(), |acc, j| add(&acc, &omega[j][k]))
            };
            ensure(add(&lowered(i, k), &lowered(k, i)).is_zero(), || {
                format!("omega not so(2,2) at ({i},{k})")
            })?;
        }
    }
    let (k, n, e) = displayed_kne();
    let h = frac(1, 2);
    let q = frac(1, 4);
    let w14 = wedge(&tau(b, 1), &tau(b, 4));
    let mixed = &(&n - &k) - &(&int(2) * &e);
    let mut entries = vec![vec![int(0); 4]; 4];
    entries[0][0] = -(&h * &k);
    entries[1][1] = &h * &k;
    entries[1][2] = &h * &mixed;
    entries[1][3] = -(&q * &n);
    entries[2][0] = &q * &n;
    entries[3][0] = -(&h * &mixed);
    let big_omega = omega_curvature(&omega);
    for i in 0..4 {
        for j in 0..4 {
            ensure(big_omega[i][j] == w14.scale(&entries[i][j]), || {
                format!("Omega^{}_{} mismatch", i + 1, j + 1)
            })?;
        }
    }
    let zero = FamilyData::new(int(0), int(0), int(0)).map_err(|e| e.to_string())?;
    let flat = family_frame(&zero).map_err(|e| e.to_string())?;
    let flat_omega = omega_curvature(&displayed_omega(&flat.basis));
    ensure(
        flat_omega.iter().flatten().all(DifferentialForm::is_zero),
        || "Omega nonzero for A=B=C=0".into(),
    )?;
    let lib = cartan_connection_so22(&FamilyData::opaque()).map_err(|e| e.to_string())?;
    ensure(lib.all_hold(), || {
        "library Cartan connection checks disagree".into()
    })
}

fn appendix() -> Outcome {
    for text in ["3/2*q^2/p", FAMILY, "q^3 + y*p"] {
        let prob = OdeProblem::parse(text, FunctionRegistry::with_family_functions())
            .map_err(|e| e.to_string())?;
        let cf = invariant_coframe(&prob).map_err(|e| e.to_string())?;
        let sf = extract_structure_functions(&cf).map_err(|e| e.to_string())?;
        let r = verify_appendix(&sf, &tau_basis(&cf).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(r.all_zero(), || format!("{text}: {:?}", r.equations))?;
    }
    Ok(())
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    use common::*;
    run_property("d∘d = 0", 256, any_form(), |w| d_squared_vanishes(&w))?;
    run_property("Leibniz rule", 100, form_pair(), |(a, b)| {
        leibniz_rule(&a, &b)
    })?;
    run_property("pull-back commutes with d", 64, form_on(Chart::P, 2), |w| {
        pull_back_commutes_with_d(&w)
    })?;
    run_property(
        "expansion round trip",
        64,
        (coframe(), form(1), form(2)),
        |(cf, w, v)| coframe_expansion_round_trips(&cf, &w, &v),
    )?;
    run_property("frame/coframe duality", 64, coframe(), |cf| {
        frame_and_coframe_are_dual(&cf)
    })?;
    run_property(
        "mixed partials",
        64,
        (expr(), 0usize..4, 0usize..4),
        |(a, i, j)| mixed_partials_commute(&a, i, j),
    )?;
    run_property(
        "derivation rules",
        64,
        (expr(), expr(), 0usize..4),
        |(a, b, i)| derivation_rules(&a, &b, i),
    )?;
    run_property(
        "canonical arithmetic",
        64,
        (expr(), expr(), expr()),
        |(a, b, c)| arithmetic_is_canonical(&a, &b, &c),
    )?;
    Ok(())
}

fn criterion(n: u32, title: &str, limit: Duration, body: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|()| {
        ensure(elapsed <= limit, || {
            format!(
                "took {:.1}s, limit {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )
        })
    });
    match &outcome {
        Ok(()) => println!(
            "criterion {n}: PASS  {title} ({:.2}s)",
            elapsed.as_secs_f64()
        ),
        Err(why) => println!(
            "criterion {n}: FAIL  {title} ({:.2}s): {why}",
            elapsed.as_secs_f64()
        ),
    }
    outcome.is_ok()
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let results = [
        criterion(
            1,
            "flat model invariants and so(2,2) relations",
            secs(10),
            flat_model,
        ),
        criterion(
            2,
            "family conditions and k, n, e",
            secs(60),
            family_conditions,
        ),
        criterion(
            3,
            "Einstein identity Ric = -G, scalar -4",
            secs(120),
            einstein_identity,
        ),
        criterion(4, "Petrov D+II versus D+D", secs(180), petrov_dichotomy),
        criterion(
            5,
            "connection and curvature on P",
            secs(120),
            connection_on_p,
        ),
        criterion(6, "so(2,2) Cartan connection", secs(60), cartan_connection),
        criterion(7, "appendix structure equations", secs(120), appendix),
        criterion(8, "property suites", secs(300), property_suites),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

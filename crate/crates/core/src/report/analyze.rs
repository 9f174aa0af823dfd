use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{
    check_einstein_conditions, extract_structure_functions, family_detect, family_invariants,
    invariant_coframe, tau_basis, verify_appendix, CartanError, FamilyData, OdeProblem,
    StructureFunctions, STRUCTURE_NAMES,
};
use crate::curvature::{
    cartan_connection_so22, connection_and_curvature_on_p, curvature_tensors, einstein_residual,
    metric_from_family, petrov_classification, CurvatureError, M_COORDS,
};
use crate::expr::{
    parse_expression, Chart, Coord, ExprError, Expression, FnName, FunctionRegistry, Symbol,
};
use crate::forms::Matrix;

use super::{
    AnalysisReport, AnalysisRequest, AppendixOut, CheckOut, ConditionOut, ConditionsOut,
    ConnectionOut, EinsteinOut, EquationResidual, ErrorKind, FamilyOut, KneOut, MetricOut,
    PetrovOut, PetrovPoint, ResidualOut, SkippedPoint, Stage, StageError, Verdict,
};

/// Height bound for sample-point numerators and denominators.
const SAMPLE_HEIGHT: i64 = 100;

struct Run<'a> {
    req: &'a AnalysisRequest,
    rep: AnalysisReport,
}

impl Run<'_> {
    fn error(&mut self, stage: &str, kind: ErrorKind, code: &str, message: impl ToString) {
        self.rep.errors.push(StageError {
            stage: stage.to_string(),
            kind,
            code: code.to_string(),
            message: message.to_string(),
        });
    }

    fn timed<T>(&mut self, stage: Stage, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        if self.req.timings {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            self.rep.timings.insert(stage.name().to_string(), ms);
        }
        out
    }

    fn wants(&self, s: Stage) -> bool {
        self.req.stages.contains(&s)
    }
}

fn cartan_code(e: &CartanError) -> (ErrorKind, &'static str) {
    match e {
        CartanError::DegenerateFqq => (ErrorKind::Input, "degenerate_fqq"),
        CartanError::NotOnJetSpace(_) => (ErrorKind::Input, "not_on_jet_space"),
        CartanError::NotInFamily(_) => (ErrorKind::Input, "not_in_family"),
        CartanError::InconsistentStructure { .. } => {
            (ErrorKind::Pipeline, "inconsistent_structure")
        }
        CartanError::Expr(_) => (ErrorKind::Pipeline, "expression"),
        CartanError::Form(_) => (ErrorKind::Pipeline, "form"),
    }
}

fn curvature_code(e: &CurvatureError) -> (ErrorKind, &'static str) {
    match e {
        CurvatureError::Cartan(c) => cartan_code(c),
        CurvatureError::Expr(ExprError::Unassigned(_)) => {
            (ErrorKind::Input, "unspecialized_function")
        }
        _ => (ErrorKind::Pipeline, "curvature"),
    }
}

fn render_matrix(m: &Matrix<Expression>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.to_string()).collect())
        .collect()
}

fn render_rational_matrix(m: &Matrix<BigRational>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.to_string()).collect())
        .collect()
}

fn build_registry(req: &AnalysisRequest) -> Result<FunctionRegistry, String> {
    let mut reg = FunctionRegistry::new();
    for d in &req.opaque {
        let args = d
            .args
            .iter()
            .map(|a| Coord::from_name(a).ok_or_else(|| format!("`{a}` is not a coordinate")))
            .collect::<Result<Vec<_>, _>>()?;
        reg.declare(&d.name, &args).map_err(|e| e.to_string())?;
    }
    Ok(reg)
}

/// Run the requested stages in dependency order. Failures are recorded in
/// `errors` and leave the affected sections empty; the rest still runs.
pub fn analyze(req: &AnalysisRequest) -> AnalysisReport {
    let mut run = Run {
        req,
        rep: AnalysisReport::empty(req),
    };
    let registry = match build_registry(req) {
        Ok(r) => r,
        Err(e) => {
            run.error("input", ErrorKind::Input, "invalid_opaque", e);
            return run.rep;
        }
    };
    let f = match parse_expression(&req.ode, Chart::J2, &registry) {
        Ok(f) => f,
        Err(e) => {
            run.error("input", ErrorKind::Input, "parse_error", e);
            return run.rep;
        }
    };
    let fqq = f.diff(Coord::Q).diff(Coord::Q);
    run.rep.fqq_nonzero = Some(Verdict {
        verdict: !fqq.is_zero(),
        residual: fqq.to_string(),
    });
    let prob = match OdeProblem::new(f.clone(), registry.clone()) {
        Ok(p) => p,
        Err(e) => {
            let (kind, code) = cartan_code(&e);
            run.error("input", kind, code, e);
            return run.rep;
        }
    };

    let family = family_detect(&f);
    run.rep.family = Some(match &family {
        Ok(fd) => FamilyOut {
            member: true,
            a: Some(fd.a.to_string()),
            b: Some(fd.b.to_string()),
            c: Some(fd.c.to_string()),
            rejection: None,
        },
        Err(r) => FamilyOut {
            member: false,
            a: None,
            b: None,
            c: None,
            rejection: Some(r.to_string()),
        },
    });

    let needs_sf = [Stage::Invariants, Stage::Conditions, Stage::Appendix]
        .iter()
        .any(|s| run.wants(*s));
    let mut frame = None;
    if needs_sf {
        let built = run.timed(Stage::Invariants, |_| -> Result<_, CartanError> {
            let cf = invariant_coframe(&prob)?;
            let sf = extract_structure_functions(&cf)?;
            Ok((cf, sf))
        });
        match built {
            Ok(v) => frame = Some(v),
            Err(e) => {
                let (kind, code) = cartan_code(&e);
                run.error(Stage::Invariants.name(), kind, code, e);
            }
        }
    }

    if run.wants(Stage::Invariants) {
        if let Some((_, sf)) = &frame {
            run.rep.structure_functions = Some(render_structure(sf));
        }
        if let Ok(fd) = &family {
            let inv = family_invariants(fd);
            run.rep.invariants_kne = Some(KneOut {
                chart: Chart::MAdapted
                    .coords()
                    .iter()
                    .map(|c| c.name().to_string())
                    .collect(),
                k: inv.k.to_string(),
                n: inv.n.to_string(),
                e: inv.e.to_string(),
                all_zero: inv.all_zero(),
            });
        }
    }

    // the condition report is part of the invariants view as well
    if run.wants(Stage::Conditions) || run.wants(Stage::Invariants) {
        if let Some((_, sf)) = &frame {
            let report = run.timed(Stage::Conditions, |_| check_einstein_conditions(sf));
            run.rep.conditions = Some(ConditionsOut {
                verdict: report.all_hold(),
                conditions: report
                    .conditions
                    .iter()
                    .map(|c| ConditionOut {
                        name: c.name.to_string(),
                        group: c.group,
                        holds: c.holds(),
                        residual: c.residual.to_string(),
                    })
                    .collect(),
            });
        }
    }

    if run.wants(Stage::Appendix) {
        if let Some((cf, sf)) = &frame {
            let out = run.timed(Stage::Appendix, |_| verify_appendix(sf, &tau_basis(cf)?));
            match out {
                Ok(t) => {
                    run.rep.appendix_residuals = Some(AppendixOut {
                        verdict: t.all_zero(),
                        equations: t
                            .equations
                            .iter()
                            .map(|(eq, slots)| EquationResidual {
                                equation: format!("d{eq}"),
                                residuals: slots
                                    .iter()
                                    .map(|((a, b), v)| ResidualOut {
                                        label: format!("{a}^{b}"),
                                        value: v.to_string(),
                                    })
                                    .collect(),
                            })
                            .collect(),
                    })
                }
                Err(e) => {
                    let (kind, code) = cartan_code(&e);
                    run.error(Stage::Appendix.name(), kind, code, e);
                }
            }
        }
    }

    let family_stages: Vec<Stage> = req
        .stages
        .iter()
        .copied()
        .filter(|s| s.needs_family())
        .collect();
    let fd = match (&family, family_stages.is_empty()) {
        (_, true) => return run.rep,
        (Ok(fd), false) => fd.clone(),
        (Err(r), false) => {
            for s in family_stages {
                run.error(s.name(), ErrorKind::Input, "not_in_family", r);
            }
            return run.rep;
        }
    };

    if run.wants(Stage::Metric) {
        match run.timed(Stage::Metric, |_| metric_from_family(&fd)) {
            Ok(fm) => {
                run.rep.metric = Some(MetricOut {
                    coordinates: M_COORDS.iter().map(|c| c.name().to_string()).collect(),
                    components: render_matrix(fm.metric.components()),
                    determinant: fm.metric.determinant().to_string(),
                    projectability: CheckOut::from(&fm.projectability),
                })
            }
            Err(e) => record_curvature(&mut run, Stage::Metric, &e),
        }
    }

    if run.wants(Stage::Einstein) {
        let out = run.timed(
            Stage::Einstein,
            |_| -> Result<EinsteinOut, CurvatureError> {
                let g = metric_from_family(&fd)?.metric;
                let ct = curvature_tensors(&g);
                let lambda = BigRational::from_integer((-1).into());
                let res = einstein_residual(&g, &ct, &lambda);
                let identities = [
                    ct.riemann_antisymmetry(),
                    ct.first_bianchi(),
                    ct.ricci_symmetry(),
                    ct.weyl_traces(&g),
                ];
                Ok(EinsteinOut {
                    verdict: res.is_zero(),
                    lambda: lambda.to_string(),
                    residual: render_matrix(&res),
                    scalar_curvature: ct.scalar().to_string(),
                    identities: identities.iter().map(CheckOut::from).collect(),
                })
            },
        );
        match out {
            Ok(e) => run.rep.einstein_residual_zero = Some(e),
            Err(e) => record_curvature(&mut run, Stage::Einstein, &e),
        }
    }

    if run.wants(Stage::Petrov) {
        match run.timed(Stage::Petrov, |run| petrov_stage(run.req, &registry, &fd)) {
            Ok(p) => run.rep.petrov = Some(p),
            Err((kind, code, msg)) => run.error(Stage::Petrov.name(), kind, code, msg),
        }
    }

    if run.wants(Stage::Connection) {
        let out = run.timed(
            Stage::Connection,
            |_| -> Result<ConnectionOut, CurvatureError> {
                let on_p = connection_and_curvature_on_p(&fd)?;
                let cc = cartan_connection_so22(&fd)?;
                Ok(ConnectionOut {
                    verdict: on_p.all_hold() && cc.all_hold(),
                    on_p: on_p.checks().iter().map(|c| CheckOut::from(*c)).collect(),
                    cartan: [&cc.so22, &cc.curvature_form, &cc.horizontal]
                        .into_iter()
                        .map(CheckOut::from)
                        .collect(),
                    cartan_flat: cc.flat,
                    kne_zero: cc.kne_zero,
                })
            },
        );
        match out {
            Ok(c) => run.rep.connection = Some(c),
            Err(e) => record_curvature(&mut run, Stage::Connection, &e),
        }
    }

    run.rep
}

fn record_curvature(run: &mut Run<'_>, stage: Stage, e: &CurvatureError) {
    let (kind, code) = curvature_code(e);
    run.error(stage.name(), kind, code, e);
}

fn render_structure(sf: &StructureFunctions) -> BTreeMap<String, String> {
    STRUCTURE_NAMES
        .iter()
        .map(|n| (n.to_string(), sf.get(n).expect("known name").to_string()))
        .collect()
}

fn sample(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.gen_range(-SAMPLE_HEIGHT..=SAMPLE_HEIGHT);
    let d: i64 = rng.gen_range(1..=SAMPLE_HEIGHT);
    BigRational::new(n.into(), d.into())
}

type StageFailure = (ErrorKind, &'static str, String);

fn petrov_stage(
    req: &AnalysisRequest,
    registry: &FunctionRegistry,
    fd: &FamilyData,
) -> Result<PetrovOut, StageFailure> {
    let input = |msg: String| (ErrorKind::Input, "invalid_specialization", msg);
    let mut fd = fd.clone();
    for (name, text) in &req.specialize {
        let fname = FnName::new(name).map_err(|e| input(e.to_string()))?;
        let value = parse_expression(text, Chart::J2, registry)
            .map_err(|e| input(format!("{name}: {e}")))?;
        fd = fd
            .specialize(fname, &value)
            .map_err(|e| input(e.to_string()))?;
    }
    let curvature = |e: CurvatureError| {
        let (kind, code) = curvature_code(&e);
        (kind, code, e.to_string())
    };
    let g = metric_from_family(&fd).map_err(curvature)?.metric;
    let opaque: Vec<String> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .flat_map(|(i, j)| g.get(i, j).symbols())
        .filter(|s| s.as_coord().is_none())
        .map(|s| s.to_string())
        .collect();
    if !opaque.is_empty() {
        return Err((
            ErrorKind::Input,
            "unspecialized_function",
            format!(
                "metric still involves {}; pass --specialize for it",
                opaque.join(", ")
            ),
        ));
    }
    let ct = curvature_tensors(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let max_attempts = 20 * req.points.max(1);
    for _ in 0..max_attempts {
        if points.len() >= req.points {
            break;
        }
        let pt: BTreeMap<Symbol, BigRational> = M_COORDS
            .iter()
            .map(|c| (Symbol::Coord(*c), sample(&mut rng)))
            .collect();
        let shown: BTreeMap<String, String> = pt
            .iter()
            .map(|(s, v)| (s.to_string(), v.to_string()))
            .collect();
        match petrov_classification(&g, &ct, &pt) {
            Ok(w) => points.push(PetrovPoint {
                point: shown,
                sd: w.plus_type.to_string(),
                asd: w.minus_type.to_string(),
                sd_block: render_rational_matrix(&w.plus),
                asd_block: render_rational_matrix(&w.minus),
            }),
            Err(
                e @ (CurvatureError::SingularAtPoint
                | CurvatureError::IrrationalVolume
                | CurvatureError::Expr(ExprError::SingularPoint)),
            ) => skipped.push(SkippedPoint {
                point: shown,
                reason: e.to_string(),
            }),
            Err(e) => return Err(curvature(e)),
        }
    }
    let first = points.first().map(|p| (p.sd.clone(), p.asd.clone()));
    let stable = first.is_some()
        && points
            .iter()
            .all(|p| Some((p.sd.clone(), p.asd.clone())) == first);
    Ok(PetrovOut {
        a: fd.a.to_string(),
        b: fd.b.to_string(),
        labels: if stable { first } else { None },
        stable,
        points,
        skipped,
    })
}

use std::fmt::Write;

use super::{AnalysisReport, CheckOut};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_lines(out: &mut String, c: &CheckOut) {
    let _ = writeln!(
        out,
        "  {}: {}",
        c.name,
        if c.holds { "holds" } else { "FAILS" }
    );
    for r in c.residuals.iter().filter(|r| r.value != "0") {
        let _ = writeln!(out, "    {} = {}", r.label, r.value);
    }
}

pub(super) fn render(rep: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "equation: y''' = {}", rep.input.ode);
    if let Some(v) = &rep.fqq_nonzero {
        let _ = writeln!(
            out,
            "F_qq nonzero: {} (F_qq = {})",
            yes_no(v.verdict),
            v.residual
        );
    }
    if let Some(f) = &rep.family {
        match (&f.a, &f.b, &f.c) {
            (Some(a), Some(b), Some(c)) => {
                let _ = writeln!(out, "family member: yes (A = {a}, B = {b}, C = {c})");
            }
            _ => {
                let reason = f.rejection.as_deref().unwrap_or("");
                let _ = writeln!(out, "family member: no ({reason})");
            }
        }
    }
    if let Some(sf) = &rep.structure_functions {
        let _ = writeln!(out, "\nstructure functions:");
        for (k, v) in sf {
            let _ = writeln!(out, "  {k} = {v}");
        }
    }
    if let Some(kne) = &rep.invariants_kne {
        let _ = writeln!(out, "\ninvariants on ({}):", kne.chart.join(", "));
        let _ = writeln!(out, "  k = {}\n  n = {}\n  e = {}", kne.k, kne.n, kne.e);
    }
    if let Some(c) = &rep.conditions {
        let _ = writeln!(
            out,
            "\nEinstein conditions: {}",
            if c.verdict { "all hold" } else { "FAIL" }
        );
        for cond in &c.conditions {
            let mark = if cond.holds { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  [{mark}] ({}) {}, residual {}",
                cond.group, cond.name, cond.residual
            );
        }
    }
    if let Some(m) = &rep.metric {
        let _ = writeln!(out, "\nmetric in ({}):", m.coordinates.join(", "));
        for (i, row) in m.components.iter().enumerate() {
            for (j, v) in row.iter().enumerate().skip(i) {
                if v != "0" {
                    let _ = writeln!(out, "  G[{}][{}] = {v}", m.coordinates[i], m.coordinates[j]);
                }
            }
        }
        let _ = writeln!(out, "  det = {}", m.determinant);
        check_lines(&mut out, &m.projectability);
    }
    if let Some(e) = &rep.einstein_residual_zero {
        let _ = writeln!(
            out,
            "\nEinstein with Lambda = {}: {}",
            e.lambda,
            yes_no(e.verdict)
        );
        let _ = writeln!(out, "  scalar curvature = {}", e.scalar_curvature);
        for c in &e.identities {
            check_lines(&mut out, c);
        }
    }
    if let Some(p) = &rep.petrov {
        let _ = writeln!(out, "\nPetrov type for A = {}, B = {}:", p.a, p.b);
        match &p.labels {
            Some((sd, asd)) => {
                let _ = writeln!(
                    out,
                    "  (SD, ASD) = ({sd}, {asd}) at {} points",
                    p.points.len()
                );
            }
            None => {
                let _ = writeln!(out, "  unstable across sample points");
                for pt in &p.points {
                    let _ = writeln!(out, "    {:?}: ({}, {})", pt.point, pt.sd, pt.asd);
                }
            }
        }
        if !p.skipped.is_empty() {
            let _ = writeln!(out, "  skipped {} degenerate points", p.skipped.len());
        }
    }
    if let Some(c) = &rep.connection {
        let _ = writeln!(
            out,
            "\nconnection: {}",
            if c.verdict { "all checks hold" } else { "FAIL" }
        );
        for ch in c.on_p.iter().chain(&c.cartan) {
            check_lines(&mut out, ch);
        }
        let _ = writeln!(
            out,
            "  Cartan connection flat: {}; k = n = e = 0: {}",
            yes_no(c.cartan_flat),
            yes_no(c.kne_zero)
        );
    }
    if let Some(a) = &rep.appendix_residuals {
        let _ = writeln!(
            out,
            "\nstructure equations: {}",
            if a.verdict {
                "all verified"
            } else {
                "MISMATCH"
            }
        );
        for eq in &a.equations {
            for r in &eq.residuals {
                let _ = writeln!(out, "  {} [{}] = {}", eq.equation, r.label, r.value);
            }
        }
    }
    if !rep.timings.is_empty() {
        let _ = writeln!(out, "\ntimings (ms):");
        for (k, v) in &rep.timings {
            let _ = writeln!(out, "  {k}: {v:.1}");
        }
    }
    if !rep.errors.is_empty() {
        let _ = writeln!(out, "\nerrors:");
        for e in &rep.errors {
            let _ = writeln!(out, "  {} [{}]: {}", e.stage, e.code, e.message);
        }
    }
    out
}

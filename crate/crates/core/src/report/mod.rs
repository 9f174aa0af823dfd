//! End-to-end analysis of one equation and the serializable report it produces.

mod analyze;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curvature::Check;

pub use analyze::analyze;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Invariants,
    Conditions,
    Metric,
    Einstein,
    Petrov,
    Connection,
    Appendix,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Invariants,
        Stage::Conditions,
        Stage::Metric,
        Stage::Einstein,
        Stage::Petrov,
        Stage::Connection,
        Stage::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Invariants => "invariants",
            Stage::Conditions => "conditions",
            Stage::Metric => "metric",
            Stage::Einstein => "einstein",
            Stage::Petrov => "petrov",
            Stage::Connection => "connection",
            Stage::Appendix => "appendix",
        }
    }

    /// Stages that only make sense for members of the distinguished family.
    pub fn needs_family(self) -> bool {
        matches!(
            self,
            Stage::Metric | Stage::Einstein | Stage::Petrov | Stage::Connection
        )
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "inv" | "invariants" => Stage::Invariants,
            "cond" | "conditions" => Stage::Conditions,
            "metric" => Stage::Metric,
            "einstein" => Stage::Einstein,
            "petrov" => Stage::Petrov,
            "conn" | "connection" => Stage::Connection,
            "appendix" => Stage::Appendix,
            other => return Err(format!("unknown stage `{other}`")),
        })
    }
}

/// `NAME:arg,arg` on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpaqueDecl {
    pub name: String,
    pub args: Vec<String>,
}

impl FromStr for OpaqueDecl {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| format!("expected NAME:arg,arg in `{s}`"))?;
        Ok(OpaqueDecl {
            name: name.trim().to_string(),
            args: args
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRequest {
    /// Right-hand side `F(x, y, p, q)`.
    pub ode: String,
    pub opaque: Vec<OpaqueDecl>,
    pub stages: BTreeSet<Stage>,
    /// Rational functions substituted for opaque functions before Petrov classification.
    pub specialize: BTreeMap<String, String>,
    /// Number of sample points for Petrov classification.
    pub points: usize,
    pub seed: u64,
    /// Record wall-clock time per stage; off by default so reports are reproducible.
    pub timings: bool,
}

impl AnalysisRequest {
    pub fn new(ode: impl Into<String>) -> Self {
        AnalysisRequest {
            ode: ode.into(),
            opaque: Vec::new(),
            stages: Stage::ALL.into_iter().collect(),
            specialize: BTreeMap::new(),
            points: 5,
            seed: 0,
            timings: false,
        }
    }

    pub fn with_opaque(mut self, name: &str, args: &[&str]) -> Self {
        self.opaque.push(OpaqueDecl {
            name: name.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        });
        self
    }

    /// Declare `A, B, C` as functions of `(x, y)`.
    pub fn with_family_functions(self) -> Self {
        self.with_opaque("A", &["x", "y"])
            .with_opaque("B", &["x", "y"])
            .with_opaque("C", &["x", "y"])
    }

    pub fn with_stages(mut self, stages: impl IntoIterator<Item = Stage>) -> Self {
        self.stages = stages.into_iter().collect();
        self
    }

    pub fn with_specialization(mut self, name: &str, value: &str) -> Self {
        self.specialize.insert(name.to_string(), value.to_string());
        self
    }

    pub fn with_points(mut self, points: usize, seed: u64) -> Self {
        self.points = points;
        self.seed = seed;
        self
    }
}

/// A boolean outcome and the expression that decides it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualOut {
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOut {
    pub name: String,
    pub holds: bool,
    pub residuals: Vec<ResidualOut>,
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        CheckOut {
            name: c.name.clone(),
            holds: c.holds(),
            residuals: c
                .residuals
                .iter()
                .map(|(l, v)| ResidualOut {
                    label: l.clone(),
                    value: v.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOut {
    pub name: String,
    pub group: u8,
    pub holds: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionsOut {
    pub verdict: bool,
    pub conditions: Vec<ConditionOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyOut {
    pub member: bool,
    #[serde(rename = "A")]
    pub a: Option<String>,
    #[serde(rename = "B")]
    pub b: Option<String>,
    #[serde(rename = "C")]
    pub c: Option<String>,
    pub rejection: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KneOut {
    /// Coordinates the expressions are written in.
    pub chart: Vec<String>,
    pub k: String,
    pub n: String,
    pub e: String,
    pub all_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricOut {
    pub coordinates: Vec<String>,
    pub components: Vec<Vec<String>>,
    pub determinant: String,
    pub projectability: CheckOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EinsteinOut {
    pub verdict: bool,
    pub lambda: String,
    /// `Ric_ij − Λ G_ij`.
    pub residual: Vec<Vec<String>>,
    pub scalar_curvature: String,
    pub identities: Vec<CheckOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetrovPoint {
    pub point: BTreeMap<String, String>,
    pub sd: String,
    pub asd: String,
    pub sd_block: Vec<Vec<String>>,
    pub asd_block: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub point: BTreeMap<String, String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetrovOut {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    /// `(SD, ASD)` when every classified point agrees.
    pub labels: Option<(String, String)>,
    pub stable: bool,
    pub points: Vec<PetrovPoint>,
    pub skipped: Vec<SkippedPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionOut {
    pub verdict: bool,
    pub on_p: Vec<CheckOut>,
    pub cartan: Vec<CheckOut>,
    pub cartan_flat: bool,
    pub kne_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationResidual {
    pub equation: String,
    pub residuals: Vec<ResidualOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixOut {
    pub verdict: bool,
    /// Only slots where the direct expansion differs from the tabulated formula.
    pub equations: Vec<EquationResidual>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub riemann: String,
    pub ricci: String,
    pub orientation: String,
    pub sd_label: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            riemann: "R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj".into(),
            ricci: "Ric_ij = R^k_ikj; Einstein residual Ric_ij - Lambda*G_ij with Lambda = -1".into(),
            orientation: "dx^dy^dz^dt".into(),
            sd_label: "SD = +1 eigenspace of the Hodge star; type D of the generic family member lies there".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    /// Bad input or unmet precondition.
    Input,
    /// The pipeline itself failed on admissible input.
    Pipeline,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub kind: ErrorKind,
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: AnalysisRequest,
    pub fqq_nonzero: Option<Verdict>,
    pub structure_functions: Option<BTreeMap<String, String>>,
    pub conditions: Option<ConditionsOut>,
    pub family: Option<FamilyOut>,
    pub invariants_kne: Option<KneOut>,
    pub metric: Option<MetricOut>,
    pub einstein_residual_zero: Option<EinsteinOut>,
    pub petrov: Option<PetrovOut>,
    pub connection: Option<ConnectionOut>,
    pub appendix_residuals: Option<AppendixOut>,
    /// Milliseconds per stage; empty unless requested.
    pub timings: BTreeMap<String, f64>,
    pub conventions: Conventions,
    pub errors: Vec<StageError>,
}

impl AnalysisReport {
    fn empty(req: &AnalysisRequest) -> Self {
        AnalysisReport {
            input: req.clone(),
            fqq_nonzero: None,
            structure_functions: None,
            conditions: None,
            family: None,
            invariants_kne: None,
            metric: None,
            einstein_residual_zero: None,
            petrov: None,
            connection: None,
            appendix_residuals: None,
            timings: BTreeMap::new(),
            conventions: Conventions::default(),
            errors: Vec::new(),
        }
    }

    /// Every boolean outcome in the report, by name.
    pub fn verdicts(&self) -> Vec<(&'static str, bool)> {
        let mut out = Vec::new();
        if let Some(v) = &self.fqq_nonzero {
            out.push(("fqq_nonzero", v.verdict));
        }
        if let Some(c) = &self.conditions {
            out.push(("conditions", c.verdict));
        }
        if let Some(m) = &self.metric {
            out.push(("metric_projectable", m.projectability.holds));
        }
        if let Some(e) = &self.einstein_residual_zero {
            out.push(("einstein_residual_zero", e.verdict));
        }
        if let Some(p) = &self.petrov {
            out.push(("petrov_stable", p.stable));
        }
        if let Some(c) = &self.connection {
            out.push(("connection", c.verdict));
        }
        if let Some(a) = &self.appendix_residuals {
            out.push(("appendix", a.verdict));
        }
        out
    }

    /// 0: every verdict true; 1: some verdict false or a pipeline failure;
    /// 2: input or precondition error.
    pub fn exit_code(&self) -> i32 {
        if self.errors.iter().any(|e| e.kind == ErrorKind::Input) {
            2
        } else if !self.errors.is_empty() || self.verdicts().iter().any(|(_, v)| !v) {
            1
        } else {
            0
        }
    }
}

pub fn emit_report(rep: &AnalysisReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rep).expect("report is serializable");
            s.push('\n');
            s
        }
        OutputFormat::Text => text::render(rep),
    }
}

//! Machine-readable reports (`ndefect-report/1`) and their text rendering.

use std::fmt::Write as _;

use ndefect::complex::Gate;
use ndefect::{Tolerance, C64};
use serde::Serialize;

pub const REPORT_FORMAT: &str = "ndefect-report/1";

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

pub fn pair(z: C64) -> Pair {
    [z.re + 0.0, z.im + 0.0]
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub residual_tol: f64,
}

impl From<&Tolerance> for Tolerances {
    fn from(t: &Tolerance) -> Self {
        Tolerances { rank_tol: t.rank_tol, residual_tol: t.residual_tol }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GateReport {
    RankCondition { plus: usize, minus: usize, zero: usize },
    FullRankTableau,
    NoPositiveDirection { max_eigenvalue: f64 },
}

impl From<&Gate> for GateReport {
    fn from(g: &Gate) -> Self {
        match g {
            Gate::RankCondition(i) => GateReport::RankCondition { plus: i.plus, minus: i.minus, zero: i.zero },
            Gate::FullRankTableau => GateReport::FullRankTableau,
            Gate::NoPositiveDirection { max_eigenvalue } => {
                GateReport::NoPositiveDirection { max_eigenvalue: *max_eigenvalue }
            }
        }
    }
}

impl GateReport {
    fn describe(&self) -> String {
        match self {
            GateReport::RankCondition { plus, minus, zero } => {
                format!("commutator inertia (+{plus}, -{minus}, 0:{zero}) is not (1, 1, n-2)")
            }
            GateReport::FullRankTableau => "the tableau has full column rank".into(),
            GateReport::NoPositiveDirection { max_eigenvalue } => {
                format!("K has no positive direction (largest eigenvalue {max_eigenvalue:.3e})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RealCases {
    pub m1: usize,
    pub m2: usize,
    pub codes: String,
}

/// One emitted completion (single matrix or commuting pair).
#[derive(Debug, Clone, Default, Serialize)]
pub struct CompletionEntry {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x2: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normality_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparabilitySection {
    pub peres_ok: bool,
    pub rank_m: usize,
    pub rank_mt: usize,
    pub dependent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_normality_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_factor_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_file: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorSection {
    pub t: f64,
    pub mu: Pair,
    pub file: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub command: &'static str,
    pub verdict: String,
    pub exit_code: i32,
    pub inputs: Vec<String>,
    pub n: usize,
    pub field: &'static str,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tableau: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_cases: Option<RealCases>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary_defect: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normality_residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub completions: Vec<CompletionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separability: Option<SeparabilitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSection>,
}

impl Report {
    pub fn new(command: &'static str, inputs: Vec<String>, n: usize, real: bool, tol: &Tolerance) -> Self {
        Report {
            format: REPORT_FORMAT,
            command,
            verdict: String::new(),
            exit_code: 0,
            inputs,
            n,
            field: if real { "real" } else { "complex" },
            tolerances: tol.into(),
            seed: None,
            pair_kind: None,
            d: None,
            m: None,
            tableau: None,
            k_eigenvalues: None,
            gate: None,
            real_cases: None,
            lower_bound: None,
            unitary_defect: None,
            normality_residual: None,
            completions: Vec::new(),
            separability: None,
            generator: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.command, self.verdict);
        if !self.inputs.is_empty() {
            let _ = writeln!(s, "  input: {}", self.inputs.join(", "));
        }
        let _ = writeln!(s, "  n = {} ({})", self.n, self.field);
        if let Some(k) = self.pair_kind {
            let _ = writeln!(s, "  pair kind: {k}");
        }
        if let Some(d) = self.d {
            let _ = writeln!(s, "  d = {d:.6}");
        }
        if let Some(m) = self.m {
            let _ = writeln!(s, "  m = {m} ({} tableau)", self.tableau.unwrap_or("standard"));
        }
        if let Some(k) = &self.k_eigenvalues {
            let vals: Vec<String> = k.iter().map(|v| format!("{v:.6}")).collect();
            let _ = writeln!(s, "  K eigenvalues: [{}]", vals.join(", "));
        }
        if let Some(rc) = &self.real_cases {
            let _ = writeln!(s, "  real cases: {} (m1 = {}, m2 = {})", rc.codes, rc.m1, rc.m2);
        }
        if let Some(g) = &self.gate {
            let _ = writeln!(s, "  certificate: {}", g.describe());
        }
        if let (Some(lb), Some(ud)) = (self.lower_bound, self.unitary_defect) {
            let _ = writeln!(s, "  lower bound = {lb}, unitary defect = {ud}");
        }
        if let Some(r) = self.normality_residual {
            let _ = writeln!(s, "  normality residual = {r:.3e}");
        }
        if let Some(g) = &self.generator {
            let _ = writeln!(s, "  t = {:.6}, mu = {:.6}{:+.6}i, written to {}", g.t, g.mu[0], g.mu[1], g.file);
        }
        if let Some(sep) = &self.separability {
            let _ = writeln!(s, "  Peres test: {}", if sep.peres_ok { "passed" } else { "failed" });
            let _ = writeln!(s, "  rank M = {}, rank of partial transpose = {}", sep.rank_m, sep.rank_mt);
            if let Some(k) = sep.min_states {
                let _ = writeln!(s, "  minimal number of product states: {k}");
            }
            if let Some(r) = sep.witness_normality_residual {
                let _ = writeln!(s, "  witness normality residual = {r:.3e}");
            }
            if let Some(r) = sep.witness_factor_residual {
                let _ = writeln!(s, "  witness factor residual = {r:.3e}");
            }
            if let Some(f) = &sep.witness_file {
                let _ = writeln!(s, "  witness written to {f}");
            }
        }
        for c in &self.completions {
            let mut parts = vec![format!("#{}", c.index)];
            if let Some(case) = c.case {
                parts.push(format!("case {case}"));
            }
            for (name, v) in [("x1", c.x1), ("x2", c.x2), ("t1", c.t1), ("t2", c.t2), ("z", c.z)] {
                if let Some([re, im]) = v {
                    parts.push(format!("{name} = {re:.6}{im:+.6}i"));
                }
            }
            for (name, v) in [
                ("normality", c.normality_residual),
                ("commutator", c.commutator_residual),
                ("structure", c.structure_residual),
            ] {
                if let Some(r) = v {
                    parts.push(format!("{name} residual {r:.2e}"));
                }
            }
            if !c.files.is_empty() {
                parts.push(format!("-> {}", c.files.join(", ")));
            }
            let _ = writeln!(s, "  {}", parts.join("  "));
        }
        s
    }
}

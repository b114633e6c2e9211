//! Subcommand implementations. Each returns a [`Report`] whose `exit_code`
//! encodes the verdict.

use std::path::{Path, PathBuf};

use ndefect::commutator::{commutator_inertia, nd_lower_bound, profile, unitary_defect};
use ndefect::commuting::{chd_solve, csd_solve, sym_antisym_solve, CommuteStatus, PairKind};
use ndefect::complex::{nd_status_with, verify_normal, Gate, NdStatus, TableauMode};
use ndefect::generators::{sample_nd1_complex, sample_rnd1_real_even};
use ndefect::real::{rnd_status, RealCase, RealCaseReport, RndStatus};
use ndefect::separability::{reduce_general_a, sep_check, witness_factor_residual, Separability};
use ndefect::{Error, Matrix, Tolerance, C64};

use crate::error::CliError;
use crate::matrix_io::{self, Kind};
use crate::report::{pair, CompletionEntry, GateReport, GeneratorSection, RealCases, Report, SeparabilitySection};

pub const EXIT_ONE: i32 = 0;
pub const EXIT_NORMAL: i32 = 1;
pub const EXIT_MORE: i32 = 2;
pub const EXIT_SEPARABLE: i32 = 0;
pub const EXIT_ENTANGLED: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

fn shown(p: &Path) -> String {
    p.display().to_string()
}

fn load_square(path: &Path, tol: &Tolerance) -> Result<(Matrix, Option<Kind>), CliError> {
    let loaded = matrix_io::load(path, tol)?;
    if !loaded.matrix.is_square() {
        let (r, c) = loaded.matrix.shape();
        return Err(CliError::Input(format!("{}: expected a square matrix, got {r}×{c}", path.display())));
    }
    Ok((loaded.matrix, loaded.kind))
}

fn real_cases(rep: &RealCaseReport) -> RealCases {
    RealCases { m1: rep.m1(), m2: rep.m2(), codes: rep.label() }
}

fn rank_gate(a: &Matrix, tol: &Tolerance) -> Result<GateReport, CliError> {
    Ok((&Gate::RankCondition(commutator_inertia(a, tol)?)).into())
}

/// Shared part of `check` and `complete`: fills the verdict fields and
/// returns the status.
enum Status {
    Complex(NdStatus),
    Real(RndStatus),
}

fn decide(a: &Matrix, real: bool, mode: TableauMode, tol: &Tolerance, r: &mut Report) -> Result<Status, CliError> {
    r.lower_bound = Some(nd_lower_bound(a, tol)?);
    r.unitary_defect = match unitary_defect(a, tol) {
        Ok(u) => Some(u),
        Err(Error::ZeroMatrix) => Some(0),
        Err(e) => return Err(e.into()),
    };
    if real {
        if !a.is_real() {
            return Err(CliError::Input("--real requires a matrix with zero imaginary parts".into()));
        }
        let status = rnd_status(a, tol)?;
        match &status {
            RndStatus::Normal => r.exit_code = EXIT_NORMAL,
            RndStatus::One(f) => {
                r.exit_code = EXIT_ONE;
                r.d = Some(f.d());
                r.real_cases = Some(real_cases(&f.report));
            }
            RndStatus::MoreThanOne(rep) => {
                r.exit_code = EXIT_MORE;
                match rep {
                    Some(rep) => {
                        r.real_cases = Some(real_cases(rep));
                        r.d = profile(a, tol).ok().map(|p| p.d);
                    }
                    None => r.gate = Some(rank_gate(a, tol)?),
                }
            }
        }
        r.verdict = status.label().into();
        Ok(Status::Real(status))
    } else {
        let status = nd_status_with(a, tol, mode)?;
        match &status {
            NdStatus::Normal => r.exit_code = EXIT_NORMAL,
            NdStatus::One(f) => {
                r.exit_code = EXIT_ONE;
                r.d = Some(f.d());
                r.m = Some(f.tableau.m);
                r.tableau = Some(if f.tableau.refined { "refined" } else { "standard" });
                r.k_eigenvalues = Some(f.solutions.k_eig.values.clone());
            }
            NdStatus::MoreThanOne(g) => {
                r.exit_code = EXIT_MORE;
                r.gate = Some(g.into());
                if !matches!(g, Gate::RankCondition(_)) {
                    r.d = profile(a, tol).ok().map(|p| p.d);
                }
            }
        }
        r.verdict = status.label().into();
        Ok(Status::Complex(status))
    }
}

pub fn check(input: &Path, real: bool, mode: TableauMode, tol: &Tolerance) -> Result<Report, CliError> {
    let (a, _) = load_square(input, tol)?;
    let mut r = Report::new("check", vec![shown(input)], a.rows(), real, tol);
    decide(&a, real, mode, tol, &mut r)?;
    Ok(r)
}

pub struct CompleteOptions<'a> {
    pub real: bool,
    pub mode: TableauMode,
    pub count: usize,
    pub seed: u64,
    pub phase: f64,
    pub out: Option<&'a Path>,
}

fn output_file(out: Option<&Path>, name: String) -> Option<PathBuf> {
    out.map(|d| d.join(name))
}

pub fn complete(input: &Path, opts: &CompleteOptions, tol: &Tolerance) -> Result<Report, CliError> {
    let (a, _) = load_square(input, tol)?;
    let n = a.rows();
    let mut r = Report::new("complete", vec![shown(input)], n, opts.real, tol);
    r.seed = Some(opts.seed);
    let status = decide(&a, opts.real, opts.mode, tol, &mut r)?;
    let emit = |index: usize, b: &Matrix, mut entry: CompletionEntry| -> Result<CompletionEntry, CliError> {
        let check = verify_normal(b, tol)?;
        if !check.normal {
            return Err(CliError::Failed(format!(
                "completion #{index} fails the normality check ({:.3e})",
                check.residual
            )));
        }
        entry.index = index;
        entry.z = Some(pair(b[(n, n)]));
        entry.normality_residual = Some(check.residual);
        if let Some(path) = output_file(opts.out, format!("completion_{index:03}.json")) {
            matrix_io::save(&path, b, None)?;
            entry.files.push(shown(&path));
        }
        Ok(entry)
    };
    match status {
        Status::Complex(NdStatus::One(f)) => {
            let mu = C64::from_polar(1.0, opts.phase);
            for (i, p) in f.sample(opts.count, opts.seed).iter().enumerate() {
                let b = f.completion(p, mu, tol)?;
                let entry = CompletionEntry {
                    x1: Some(pair(p.x1)),
                    x2: Some(pair(p.x2)),
                    mu: Some(pair(mu)),
                    ..Default::default()
                };
                r.completions.push(emit(i, &b, entry)?);
            }
        }
        Status::Real(RndStatus::One(f)) => {
            for (i, s) in f.solutions.iter().take(opts.count).enumerate() {
                let b = f.completion(s, tol)?;
                let entry = CompletionEntry {
                    case: Some(if s.case == RealCase::Case1 { 1 } else { 2 }),
                    x1: Some([s.x1 + 0.0, 0.0]),
                    x2: Some([s.x2 + 0.0, 0.0]),
                    ..Default::default()
                };
                r.completions.push(emit(i, &b, entry)?);
            }
        }
        _ => {}
    }
    Ok(r)
}

pub fn generate(n: usize, real: bool, seed: u64, out: &Path, tol: &Tolerance) -> Result<Report, CliError> {
    if n < 2 {
        return Err(CliError::Input(format!("--n must be at least 2, got {n}")));
    }
    let (spec, a) = if real { sample_rnd1_real_even(n, seed, tol)? } else { sample_nd1_complex(n, seed, tol)? };
    let mut r = Report::new("generate", Vec::new(), n, real, tol);
    r.seed = Some(seed);
    let status = decide(&a, real, TableauMode::Auto, tol, &mut r)?;
    let certified = match &status {
        Status::Complex(s) => s.is_one(),
        Status::Real(s) => s.is_one(),
    };
    if !certified {
        return Err(CliError::Failed(format!("generated matrix was classified {:?}, not one", r.verdict)));
    }
    matrix_io::save(out, &a, None)?;
    r.generator = Some(GeneratorSection { t: spec.t, mu: pair(spec.mu), file: shown(out) });
    Ok(r)
}

pub struct CommuteOptions<'a> {
    pub kind: PairKind,
    pub count: usize,
    pub seed: u64,
    pub out: Option<&'a Path>,
}

pub fn commute(first: &Path, second: &Path, opts: &CommuteOptions, tol: &Tolerance) -> Result<Report, CliError> {
    let (a1, _) = load_square(first, tol)?;
    let (a2, _) = load_square(second, tol)?;
    if a1.shape() != a2.shape() {
        return Err(CliError::Input("the two matrices must have the same size".into()));
    }
    let n = a1.rows();
    let real = opts.kind != PairKind::Hermitian;
    let mut r = Report::new("commute", vec![shown(first), shown(second)], n, real, tol);
    r.seed = Some(opts.seed);
    r.pair_kind = Some(opts.kind.label());
    let status = match opts.kind {
        PairKind::Hermitian => chd_solve(&a1, &a2, tol)?,
        PairKind::Symmetric => csd_solve(&a1, &a2, tol)?,
        PairKind::SymAntisym => sym_antisym_solve(&a1, &a2, tol)?,
    };
    r.verdict = status.label().into();
    let (k1, k2) = match opts.kind {
        PairKind::Hermitian => (Kind::Hermitian, Kind::Hermitian),
        PairKind::Symmetric => (Kind::Symmetric, Kind::Symmetric),
        PairKind::SymAntisym => (Kind::Symmetric, Kind::Antisymmetric),
    };
    match status {
        CommuteStatus::Zero => r.exit_code = EXIT_NORMAL,
        CommuteStatus::MoreThanOne { gate, report } => {
            r.exit_code = EXIT_MORE;
            r.gate = gate.as_ref().map(GateReport::from);
            r.real_cases = report.as_ref().map(real_cases);
        }
        CommuteStatus::One(f) => {
            r.exit_code = EXIT_ONE;
            r.d = Some(f.d());
            if let Some(rf) = f.real_family() {
                r.real_cases = Some(real_cases(&rf.report));
            }
            for (i, pc) in f.sample(opts.count, opts.seed, tol)?.into_iter().take(opts.count).enumerate() {
                let scale = (pc.b1.frobenius_norm() * pc.b2.frobenius_norm()).max(1.0);
                let mut entry = CompletionEntry {
                    index: i,
                    z: Some([pc.z1 + 0.0, pc.z2 + 0.0]),
                    commutator_residual: Some(pc.commutator_residual()),
                    structure_residual: Some(pc.structure_residual()),
                    ..Default::default()
                };
                if f.complex_family().is_some() {
                    entry.t1 = Some(pair(pc.t1));
                    entry.t2 = Some(pair(pc.t2));
                }
                if pc.commutator_residual() > tol.residual_tol * scale || pc.structure_residual() > tol.residual_tol {
                    return Err(CliError::Failed(format!("pair #{i} fails its residual checks")));
                }
                if let Some(dir) = opts.out {
                    for (b, k, tag) in [(&pc.b1, k1, "b1"), (&pc.b2, k2, "b2")] {
                        let path = dir.join(format!("pair_{i:03}_{tag}.json"));
                        matrix_io::save(&path, b, Some(k))?;
                        entry.files.push(shown(&path));
                    }
                }
                r.completions.push(entry);
            }
        }
    }
    Ok(r)
}

pub enum SepInput<'a> {
    State(&'a Path),
    Blocks(&'a Path, &'a Path),
}

pub fn separability(input: SepInput, out: Option<&Path>, tol: &Tolerance) -> Result<Report, CliError> {
    let (b, c, inputs) = match input {
        SepInput::State(p) => {
            let (m, _) = load_square(p, tol)?;
            let (b, c) = reduce_general_a(&m, tol)?;
            (b, c, vec![shown(p)])
        }
        SepInput::Blocks(pb, pc) => {
            let (b, _) = load_square(pb, tol)?;
            let (c, _) = load_square(pc, tol)?;
            if b.shape() != c.shape() {
                return Err(CliError::Input("B and C must have the same size".into()));
            }
            (b, c, vec![shown(pb), shown(pc)])
        }
    };
    let n = b.rows();
    let mut r = Report::new("separability", inputs, n, false, tol);
    let v = sep_check(&b, &c, tol)?;
    r.verdict = v.verdict.label().into();
    let mut sec = SeparabilitySection {
        peres_ok: v.peres_ok,
        rank_m: v.ranks.0,
        rank_mt: v.ranks.1,
        dependent: v.dependent,
        min_states: None,
        nu: None,
        witness_normality_residual: None,
        witness_factor_residual: None,
        witness_file: None,
    };
    r.exit_code = match &v.verdict {
        Separability::Separable { witness, nu, min_states } => {
            sec.min_states = *min_states;
            sec.nu = nu.map(pair);
            if let Some(w) = witness {
                sec.witness_normality_residual = Some(verify_normal(w, tol)?.residual);
                sec.witness_factor_residual = witness_factor_residual(&b, &c, &v);
                if let Some(dir) = out {
                    let path = dir.join("witness.json");
                    matrix_io::save(&path, w, None)?;
                    sec.witness_file = Some(shown(&path));
                }
            }
            EXIT_SEPARABLE
        }
        Separability::Entangled => EXIT_ENTANGLED,
        Separability::Inconclusive(_) => EXIT_INCONCLUSIVE,
    };
    r.separability = Some(sec);
    Ok(r)
}

pub fn verify(input: &Path, tol: &Tolerance) -> Result<Report, CliError> {
    let (b, _) = load_square(input, tol)?;
    let mut r = Report::new("verify", vec![shown(input)], b.rows(), b.is_real(), tol);
    let check = verify_normal(&b, tol)?;
    r.normality_residual = Some(check.residual);
    r.verdict = if check.normal { "normal" } else { "not-normal" }.into();
    r.exit_code = if check.normal { 0 } else { 1 };
    Ok(r)
}

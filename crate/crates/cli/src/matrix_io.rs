//! Reading and writing matrix files.
//!
//! The JSON layout is
//!
//! ```json
//! { "format": "ndefect-matrix/1", "rows": 2, "cols": 2, "kind": "real",
//!   "entries": [[1.0, 0.0], [0.0, 1.0]] }
//! ```
//!
//! where each entry is either a bare real or an `[re, im]` pair. Files
//! that do not start with `{` are read as a whitespace grid of reals, one
//! row per line, with `#` comments.

use std::fmt::Write as _;
use std::path::Path;

use ndefect::numerics::hermitian_eig;
use ndefect::{Matrix, Tolerance, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MATRIX_FORMAT: &str = "ndefect-matrix/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Complex,
    Real,
    Hermitian,
    Symmetric,
    Antisymmetric,
    Psd,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::Real => "real",
            Kind::Hermitian => "hermitian",
            Kind::Symmetric => "symmetric",
            Kind::Antisymmetric => "antisymmetric",
            Kind::Psd => "psd",
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format: String,
    rows: usize,
    cols: usize,
    #[serde(default)]
    kind: Option<Kind>,
    entries: Vec<Vec<Entry>>,
}

/// A loaded matrix together with its declared kind.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub matrix: Matrix,
    pub kind: Option<Kind>,
}

pub fn load(path: &Path, tol: &Tolerance) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse(&text, tol).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str, tol: &Tolerance) -> Result<Loaded, CliError> {
    if text.trim_start().starts_with('{') {
        parse_json(text, tol)
    } else {
        Ok(Loaded { matrix: parse_grid(text)?, kind: None })
    }
}

fn parse_json(text: &str, tol: &Tolerance) -> Result<Loaded, CliError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    if raw.format != MATRIX_FORMAT {
        return Err(CliError::Input(format!("unsupported format {:?}, expected {MATRIX_FORMAT:?}", raw.format)));
    }
    if raw.entries.len() != raw.rows {
        return Err(CliError::Input(format!("declared {} rows but found {}", raw.rows, raw.entries.len())));
    }
    let mut data = Vec::with_capacity(raw.rows * raw.cols);
    for (i, row) in raw.entries.iter().enumerate() {
        if row.len() != raw.cols {
            return Err(CliError::Input(format!("row {} has {} entries, expected {}", i + 1, row.len(), raw.cols)));
        }
        data.extend(row.iter().map(|e| match e {
            Entry::Real(x) => C64::new(*x, 0.0),
            Entry::Complex([re, im]) => C64::new(*re, *im),
        }));
    }
    if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::Input("entries must be finite".into()));
    }
    let matrix = Matrix::from_row_major(raw.rows, raw.cols, data).map_err(CliError::from)?;
    let matrix = match raw.kind {
        Some(kind) => verify_kind(matrix, kind, tol)?,
        None => matrix,
    };
    Ok(Loaded { matrix, kind: raw.kind })
}

fn parse_grid(text: &str) -> Result<Matrix, CliError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| {
                    CliError::Input(format!("line {}: cannot read {tok:?} as a real number", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::Input(format!(
                    "line {}: {} values, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input("empty matrix".into()));
    }
    Ok(Matrix::from_real_rows(&rows))
}

/// Checks the declared kind within `residual_tol` and returns the matrix
/// with the structure imposed exactly (e.g. imaginary parts cleared for
/// real kinds).
pub fn verify_kind(m: Matrix, kind: Kind, tol: &Tolerance) -> Result<Matrix, CliError> {
    let scale = m.frobenius_norm().max(1.0);
    let limit = tol.residual_tol * scale;
    let max_im = m.entries().iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    let fail = |what: &str, r: f64| CliError::Input(format!("declared kind {:?} but {what} is {r:.3e}", kind.name()));
    let square = |m: &Matrix| {
        if m.is_square() {
            Ok(())
        } else {
            Err(CliError::Input(format!("kind {:?} requires a square matrix", kind.name())))
        }
    };
    match kind {
        Kind::Complex => Ok(m),
        Kind::Real | Kind::Symmetric | Kind::Antisymmetric => {
            if max_im > limit {
                return Err(fail("the largest imaginary part", max_im));
            }
            let re = m.re();
            if kind == Kind::Symmetric {
                square(&re)?;
                let r = re.symmetric_residual();
                if r > limit {
                    return Err(fail("the symmetry residual", r));
                }
            }
            if kind == Kind::Antisymmetric {
                square(&re)?;
                let r = re.antisymmetric_residual();
                if r > limit {
                    return Err(fail("the antisymmetry residual", r));
                }
            }
            Ok(re)
        }
        Kind::Hermitian | Kind::Psd => {
            square(&m)?;
            let r = m.hermitian_residual();
            if r > limit {
                return Err(fail("the Hermitian residual", r));
            }
            if kind == Kind::Psd {
                let eig = hermitian_eig(&m, tol).map_err(CliError::from)?;
                let min = eig.values.last().copied().unwrap_or(0.0);
                if min < -limit {
                    return Err(fail("the smallest eigenvalue", min));
                }
            }
            Ok(m)
        }
    }
}

/// Serializes a matrix with one row per line. Real matrices are written
/// with bare reals.
pub fn to_json(m: &Matrix, kind: Option<Kind>) -> String {
    let real = m.is_real();
    let kind = kind.or(if real { Some(Kind::Real) } else { None });
    let num = |x: f64| serde_json::to_string(&(x + 0.0)).expect("finite float");
    let mut s = String::new();
    let _ = writeln!(s, "{{\n  \"format\": \"{MATRIX_FORMAT}\",");
    let _ = writeln!(s, "  \"rows\": {},\n  \"cols\": {},", m.rows(), m.cols());
    if let Some(k) = kind {
        let _ = writeln!(s, "  \"kind\": \"{}\",", k.name());
    }
    s.push_str("  \"entries\": [\n");
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                if real {
                    num(z.re)
                } else {
                    format!("[{}, {}]", num(z.re), num(z.im))
                }
            })
            .collect();
        let sep = if i + 1 < m.rows() { "," } else { "" };
        let _ = writeln!(s, "    [{}]{sep}", row.join(", "));
    }
    s.push_str("  ]\n}\n");
    s
}

pub fn save(path: &Path, m: &Matrix, kind: Option<Kind>) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, to_json(m, kind)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = Matrix::from_rows(&[
            vec![C64::new(0.1, -2.5), C64::new(1e-300, 0.0)],
            vec![C64::new(-0.0, 3.0), C64::new(std::f64::consts::PI, 1.0 / 3.0)],
        ]);
        let back = parse(&to_json(&m, None), &tol()).unwrap().matrix;
        assert_eq!(back, m.map(|z| z + C64::new(0.0, 0.0)));
    }

    #[test]
    fn real_matrices_use_bare_numbers() {
        let m = Matrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.5]]);
        let text = to_json(&m, None);
        assert!(text.contains("[1.0, 2.0]"));
        assert!(text.contains("\"kind\": \"real\""));
        assert_eq!(parse(&text, &tol()).unwrap().matrix, m);
    }

    #[test]
    fn grid_errors_name_the_line() {
        let err = parse("1 2\n# comment\n3 x\n", &tol()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse("1 2\n3\n", &tol()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn declared_kind_is_checked() {
        let text = r#"{"format": "ndefect-matrix/1", "rows": 2, "cols": 2, "kind": "hermitian",
            "entries": [[1, [0, 1]], [[0, 1], 2]]}"#;
        assert!(matches!(parse(text, &tol()), Err(CliError::Input(_))));
        let text = text.replace("[[0, 1], 2]", "[[0, -1], 2]");
        assert!(parse(&text, &tol()).is_ok());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let text = r#"{"format": "ndefect-matrix/1", "rows": 2, "cols": 2, "entries": [[1, 2]]}"#;
        assert!(parse(text, &tol()).unwrap_err().to_string().contains("rows"));
        let text = r#"{"format": "ndefect-matrix/2", "rows": 1, "cols": 1, "entries": [[1]]}"#;
        assert!(parse(text, &tol()).unwrap_err().to_string().contains("format"));
    }
}

//! Plain-text unitary matrices.
//!
//! ```text
//! # comment lines start with '#'
//! dim 4
//! 1,0 0,0 0,0 0,0
//! 0,0 0.5,-0.5 0.5,0.5 0,0
//! 0,0 0.5,0.5 0.5,-0.5 0,0
//! 0,0 0,0 0,0 1,0
//! ```
//!
//! The first non-comment line is `dim N`; the next `N` lines each hold `N`
//! whitespace-separated `re,im` tokens.

use std::path::Path;

use qlgas::{Complex64, ComplexMatrix, Tolerance, UnitaryOperator};
use thiserror::Error;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitaryFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: matrix row {row} has {found} entries, expected {expected} for a square matrix")]
    NotSquare { line: usize, row: usize, found: usize, expected: usize },

    #[error("found {found} matrix rows, expected {expected} for a square matrix")]
    RowCount { found: usize, expected: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error(
        "not unitary within {tol:e}: max |U^dagger U - I| = {residual:.3e} at entry ({row}, {col}) \
         (rows and columns counted from 1)"
    )]
    NotUnitary { residual: f64, row: usize, col: usize, tol: f64 },

    #[error(transparent)]
    Invalid(qlgas::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> UnitaryFileError {
    UnitaryFileError::Parse { line, message: message.into() }
}

fn parse_entry(token: &str, line: usize) -> std::result::Result<Complex64, UnitaryFileError> {
    let bad = || parse_err(line, format!("cannot parse `{token}` as re,im"));
    let (re, im) = token.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(parse_err(line, format!("non-finite entry `{token}`")));
    }
    Ok(Complex64::new(re, im))
}

/// Parses and validates a unitary from file contents.
pub fn parse_unitary(text: &str) -> std::result::Result<UnitaryOperator, UnitaryFileError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing `dim N` header"))?;
    let dim = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", n] => n.parse::<usize>().map_err(|_| parse_err(line, format!("bad dimension `{n}`")))?,
        _ => return Err(parse_err(line, format!("expected `dim N`, found `{header}`"))),
    };
    if dim < 2 || !dim.is_power_of_two() {
        return Err(UnitaryFileError::NotPowerOfTwo(dim));
    }

    let mut data = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    for (line, text) in lines {
        rows += 1;
        if rows > dim {
            return Err(UnitaryFileError::RowCount { found: rows, expected: dim });
        }
        let entries =
            text.split_whitespace().map(|t| parse_entry(t, line)).collect::<std::result::Result<Vec<_>, _>>()?;
        if entries.len() != dim {
            return Err(UnitaryFileError::NotSquare { line, row: rows, found: entries.len(), expected: dim });
        }
        data.extend(entries);
    }
    if rows != dim {
        return Err(UnitaryFileError::RowCount { found: rows, expected: dim });
    }

    let m = ComplexMatrix::from_vec(dim, dim, data).map_err(UnitaryFileError::Invalid)?;
    UnitaryOperator::new(m).map_err(|e| match e {
        qlgas::Error::NotUnitary { residual, row, col } => {
            UnitaryFileError::NotUnitary { residual, row: row + 1, col: col + 1, tol: Tolerance::DEFAULT.eps() }
        }
        other => UnitaryFileError::Invalid(other),
    })
}

pub fn load_unitary(path: &Path) -> Result<UnitaryOperator> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_unitary(&text).map_err(|source| CliError::UnitaryFile { path: path.to_owned(), source })
}

/// Serializes `u` in the format read by [`parse_unitary`].
pub fn format_unitary(u: &UnitaryOperator) -> String {
    let m = u.matrix();
    let mut out = format!("dim {}\n", m.rows());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|z| format!("{:?},{:?}", z.re, z.im)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A unitary named on the command line or in a config file.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySource {
    Diffusion,
    Violating,
    Identity(usize),
    File(std::path::PathBuf),
}

impl UnitarySource {
    /// `builtin:diffusion`, `builtin:violating`, `builtin:identity[:b]`, or a
    /// file path.
    pub fn parse(s: &str) -> Result<Self> {
        let Some(name) = s.strip_prefix("builtin:") else {
            return Ok(UnitarySource::File(s.into()));
        };
        match name.split_once(':') {
            None if name == "diffusion" => Ok(UnitarySource::Diffusion),
            None if name == "violating" => Ok(UnitarySource::Violating),
            None if name == "identity" => Ok(UnitarySource::Identity(2)),
            Some(("identity", b)) => {
                b.parse().map(UnitarySource::Identity).map_err(|_| CliError::Input(format!("bad qubit count in `{s}`")))
            }
            _ => Err(CliError::Input(format!(
                "unknown builtin unitary `{s}` (expected builtin:diffusion, builtin:violating or builtin:identity)"
            ))),
        }
    }

    pub fn load(&self) -> Result<UnitaryOperator> {
        match self {
            UnitarySource::Diffusion => Ok(qlgas::node::builtin_diffusion_unitary()),
            UnitarySource::Violating => Ok(qlgas::node::builtin_violating_unitary()),
            UnitarySource::Identity(b) => Ok(UnitaryOperator::identity(*b)?),
            UnitarySource::File(p) => load_unitary(p),
        }
    }
}

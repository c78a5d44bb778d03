//! Matrix text files: one row per line, whitespace-separated integers or
//! `p/q` rationals, `#` to end of line is a comment.

use std::path::Path;
use std::sync::Arc;

use kgraph_core::exactalg::{build_row_system, Rational, RationalMatrix, RowSystem, SystemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum MatrixMode {
    /// Each line is one row of a k x n matrix whose columns are the edge vectors.
    #[default]
    RowMatrix,
    /// Each line is one edge vector (k entries); there are n lines.
    EdgeVectors,
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    #[error("line {line}: cannot parse {token:?} as a rational")]
    BadEntry { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },
    #[error("no matrix rows found")]
    Empty,
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Degenerate(#[from] SystemError),
}

impl MatrixError {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, MatrixError::Degenerate(_))
    }
}

fn parse_entry(token: &str, line: usize) -> Result<Rational, MatrixError> {
    token.parse::<Rational>().map_err(|_| MatrixError::BadEntry {
        line,
        token: token.to_string(),
    })
}

pub fn parse_matrix(text: &str, mode: MatrixMode) -> Result<RationalMatrix, MatrixError> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let entries = line
            .split_whitespace()
            .map(|t| parse_entry(t, i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.is_empty() {
            continue;
        }
        if let Some(first) = rows.first() {
            if first.len() != entries.len() {
                return Err(MatrixError::Ragged {
                    line: i + 1,
                    expected: first.len(),
                    found: entries.len(),
                });
            }
        }
        rows.push(entries);
    }
    if rows.is_empty() {
        return Err(MatrixError::Empty);
    }
    if mode == MatrixMode::EdgeVectors {
        let cols = rows[0].len();
        rows = (0..cols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
    }
    RationalMatrix::from_rows(rows).ok_or(MatrixError::Empty)
}

pub fn parse_system(text: &str, mode: MatrixMode) -> Result<Arc<RowSystem>, MatrixError> {
    let m = parse_matrix(text, mode)?;
    Ok(Arc::new(build_row_system(&m)?))
}

pub fn load_system(path: &Path, mode: MatrixMode) -> Result<Arc<RowSystem>, MatrixError> {
    parse_system(&std::fs::read_to_string(path)?, mode)
}

//! JSON and CSV encodings of vectors and matrices.
//!
//! CSV vectors are `index,re,im` rows and matrices `row,col,re,im` rows, with
//! no header. Numbers use Rust's shortest round-trip formatting (exponent
//! form for very small or large magnitudes), so parsing
//! a file back gives the same bits.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(FockError::Parse(format!(
                "unknown format '{other}' (expected json or csv)"
            ))),
        }
    }
}

/// Shortest round-trip text, switching to exponent form outside [1e-5, 1e16).
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn vector_to_csv(coeffs: &[Complex64]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", num(c.re), num(c.im));
    }
    out
}

pub fn matrix_to_csv(m: &DMatrix<Complex64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let c = m[(i, j)];
            let _ = writeln!(out, "{i},{j},{},{}", num(c.re), num(c.im));
        }
    }
    out
}

fn fields(line: &str, lineno: usize, want: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = line.split(',').map(str::trim).collect();
    if parts.len() != want {
        return Err(FockError::Parse(format!(
            "line {lineno}: expected {want} fields, found {}",
            parts.len()
        )));
    }
    Ok(parts)
}

fn parse_num<T: FromStr>(s: &str, lineno: usize) -> Result<T> {
    s.parse()
        .map_err(|_| FockError::Parse(format!("line {lineno}: cannot parse '{s}'")))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses `index,re,im` rows. Indices must run `0, 1, 2, ...`.
pub fn vector_from_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (lineno, line) in data_lines(text) {
        let p = fields(line, lineno, 3)?;
        let idx: usize = parse_num(p[0], lineno)?;
        if idx != out.len() {
            return Err(FockError::Parse(format!(
                "line {lineno}: expected index {}, found {idx}",
                out.len()
            )));
        }
        out.push(Complex64::new(parse_num(p[1], lineno)?, parse_num(p[2], lineno)?));
    }
    if out.is_empty() {
        return Err(FockError::Parse("empty vector".into()));
    }
    Ok(out)
}

/// Parses `row,col,re,im` rows of a square matrix; missing entries are zero.
pub fn matrix_from_csv(text: &str) -> Result<DMatrix<Complex64>> {
    let mut entries = Vec::new();
    let mut dim = 0;
    for (lineno, line) in data_lines(text) {
        let p = fields(line, lineno, 4)?;
        let i: usize = parse_num(p[0], lineno)?;
        let j: usize = parse_num(p[1], lineno)?;
        let c = Complex64::new(parse_num(p[2], lineno)?, parse_num(p[3], lineno)?);
        dim = dim.max(i + 1).max(j + 1);
        entries.push((i, j, c));
    }
    if dim == 0 {
        return Err(FockError::Parse("empty matrix".into()));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, j, c) in entries {
        m[(i, j)] = c;
    }
    Ok(m)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| FockError::Parse(e.to_string()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| FockError::Parse(e.to_string()))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| FockError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| FockError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a JSON file into `T`, reporting the path on failure.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read_file(path)?;
    from_json(&text).map_err(|e| FockError::Parse(format!("{}: {e}", path.display())))
}

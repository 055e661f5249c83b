//! Plain-text matrix serialization.
//!
//! Format: an optional run of `#`-prefixed comment lines, a header line
//! `rows cols`, then rows x cols lines of `re im` in row-major order. Values
//! are written with 17 significant digits so that a write/read cycle
//! reproduces every f64 bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Renders `m` in the matrix text format.
pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::with_capacity(40 * m.rows() * m.cols() + 16);
    writeln!(out, "{} {}", m.rows(), m.cols()).expect("string writes cannot fail");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            writeln!(out, "{:.16e} {:.16e}", z.re, z.im).expect("string writes cannot fail");
        }
    }
    out
}

/// Writes `m` to a file in the matrix text format.
pub fn write_matrix_to(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, write_matrix(m))?;
    Ok(())
}

/// Parses the matrix text format; errors carry 1-based line numbers.
pub fn read_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate();

    // Header: first line that is neither blank nor a comment.
    let (header_line, header) = loop {
        match lines.next() {
            None => {
                return Err(Error::Parse {
                    line: text.lines().count().max(1),
                    msg: "missing header line 'rows cols'".into(),
                })
            }
            Some((idx, raw)) => {
                let trimmed = raw.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                break (idx + 1, trimmed);
            }
        }
    };

    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("header must be 'rows cols', got '{header}'"),
        });
    }
    let rows: usize = parse_dim(dims[0], header_line)?;
    let cols: usize = parse_dim(dims[1], header_line)?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("matrix dimensions must be positive, got {rows}x{cols}"),
        });
    }

    let expected = rows * cols;
    let mut entries = Vec::with_capacity(expected);
    let mut last_line = header_line;
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        last_line = line;
        if entries.len() == expected {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected extra content after {expected} entries"),
            });
        }
        entries.push(parse_entry(trimmed, line)?);
    }
    if entries.len() != expected {
        return Err(Error::Parse {
            line: last_line,
            msg: format!(
                "expected {expected} entry lines for a {rows}x{cols} matrix, found {}",
                entries.len()
            ),
        });
    }
    ComplexMatrix::new(rows, cols, entries)
}

/// Reads a matrix file in the matrix text format.
pub fn read_matrix_from(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    read_matrix(&text)
}

fn parse_dim(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("dimension '{token}' is not a nonnegative integer"),
    })
}

fn parse_entry(text: &str, line: usize) -> Result<Complex64> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("entry line must be 're im', got '{text}'"),
        });
    }
    let re = parse_float(tokens[0], line)?;
    let im = parse_float(tokens[1], line)?;
    Ok(Complex64::new(re, im))
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("'{token}' is not a decimal number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("entry '{token}' is not finite"),
        });
    }
    Ok(value)
}

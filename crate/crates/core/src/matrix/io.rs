//! Matrix file format.
//!
//! Dense: line 1 holds the vertex count n, lines 2..n+1 hold n
//! whitespace-separated reals each. Sparse: line 1 is `sparse n`, each
//! following nonempty line is `i j value` with 0-based indices, mirrored to
//! (j, i); listing a cell twice is an error. Dense input must be symmetric to
//! within 1e-12 entrywise and is symmetrized exactly by averaging.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::{CouplingMatrix, ScalingTag};

const SYMMETRY_TOL: f64 = 1e-12;

pub fn read_matrix(path: &Path) -> Result<CouplingMatrix> {
    let text = fs::read_to_string(path)?;
    read_matrix_str(&text)
}

pub fn read_matrix_str(text: &str) -> Result<CouplingMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header.trim();
    if let Some(rest) = header.strip_prefix("sparse") {
        let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            msg: format!("expected `sparse n`, got `{header}`"),
        })?;
        read_sparse(n, lines)
    } else {
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            msg: format!("expected a vertex count, got `{header}`"),
        })?;
        read_dense(n, lines)
    }
}

fn read_dense<'a>(
    n: usize,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<CouplingMatrix> {
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "vertex count must be positive".into(),
        });
    }
    let mut raw = vec![0.0f64; n * n];
    let mut row = 0usize;
    for (line_no, line) in lines {
        if row >= n {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!("expected {n} rows, found more"),
            });
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    msg: format!("bad number `{tok}`"),
                })
            })
            .collect::<Result<_>>()?;
        if values.len() != n {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!("expected {n} entries, found {}", values.len()),
            });
        }
        raw[row * n..(row + 1) * n].copy_from_slice(&values);
        row += 1;
    }
    if row != n {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {n} rows, found {row}"),
        });
    }
    let mut a = CouplingMatrix::zeros(n, ScalingTag::Custom)?;
    for i in 0..n {
        for j in i..n {
            let x = raw[i * n + j];
            let y = raw[j * n + i];
            let delta = (x - y).abs();
            if delta > SYMMETRY_TOL {
                return Err(Error::AsymmetricInput { i, j, delta });
            }
            a.set_sym(i, j, 0.5 * (x + y));
        }
    }
    Ok(a)
}

fn read_sparse<'a>(
    n: usize,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<CouplingMatrix> {
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "vertex count must be positive".into(),
        });
    }
    let mut a = CouplingMatrix::zeros(n, ScalingTag::Custom)?;
    let mut seen = vec![false; n * n];
    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!("expected `i j value`, got `{line}`"),
            });
        }
        let i: usize = toks[0].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            msg: format!("bad index `{}`", toks[0]),
        })?;
        let j: usize = toks[1].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            msg: format!("bad index `{}`", toks[1]),
        })?;
        let value: f64 = toks[2].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            msg: format!("bad number `{}`", toks[2]),
        })?;
        if i >= n || j >= n {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!("index ({i},{j}) out of range for n={n}"),
            });
        }
        if seen[i * n + j] || seen[j * n + i] {
            return Err(Error::DuplicateEntry { i, j });
        }
        seen[i * n + j] = true;
        seen[j * n + i] = true;
        a.set_sym(i, j, value);
    }
    Ok(a)
}

pub fn write_matrix_string(a: &CouplingMatrix) -> String {
    let n = a.n();
    let mut out = String::new();
    out.push_str(&n.to_string());
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = a.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, a: &CouplingMatrix) -> Result<()> {
    fs::write(path, write_matrix_string(a))?;
    Ok(())
}

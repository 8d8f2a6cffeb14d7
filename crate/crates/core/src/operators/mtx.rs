use super::{OperatorMatrix, SparseMatrix, Storage};
use crate::error::{Error, Result};
use std::fmt::Write;

/// Matrix Market coordinate text. Integer operators are written as
/// `integer`, transition matrices as `real` with exact `p/q` entries
/// rendered in decimal, everything else as `real` with 17 significant digits.
pub fn write_matrix_market(op: &OperatorMatrix) -> String {
    let mut out = String::new();
    let field = match op.storage {
        Storage::Integer(_) => "integer",
        _ => "real",
    };
    writeln!(out, "%%MatrixMarket matrix coordinate {field} general").unwrap();
    writeln!(out, "% {}", op.tag()).unwrap();
    let entries: Vec<(usize, usize, String)> = match &op.storage {
        Storage::Integer(m) => m
            .triplets()
            .map(|(r, c, v)| (r, c, v.to_string()))
            .collect(),
        Storage::Rational(m) => m
            .triplets()
            .map(|(r, c, v)| {
                (
                    r,
                    c,
                    format!("{:.16e}", *v.numer() as f64 / *v.denom() as f64),
                )
            })
            .collect(),
        Storage::Real(m) => m
            .triplets()
            .map(|(r, c, v)| (r, c, format!("{v:.16e}")))
            .collect(),
    };
    writeln!(out, "{} {} {}", op.rows(), op.cols(), entries.len()).unwrap();
    for (r, c, v) in entries {
        writeln!(out, "{} {} {}", r + 1, c + 1, v).unwrap();
    }
    out
}

/// Parsed Matrix Market content.
#[derive(Clone, Debug, PartialEq)]
pub enum MarketMatrix {
    Integer(SparseMatrix<i64>),
    Real(SparseMatrix<f64>),
}

pub fn read_matrix_market(text: &str) -> Result<MarketMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let h: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if h.len() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" || h[2] != "coordinate" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported header `{header}`"),
        });
    }
    let integer = match h[3].as_str() {
        "integer" => true,
        "real" => false,
        f => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported field `{f}`"),
            })
        }
    };
    let symmetric = match h[4].as_str() {
        "general" => false,
        "symmetric" => true,
        s => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry `{s}`"),
            })
        }
    };
    let mut size = None;
    let mut int_t = Vec::new();
    let mut real_t = Vec::new();
    for (ln, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: ln + 1, msg };
        let f: Vec<&str> = line.split_whitespace().collect();
        let idx = |s: &str| s.parse::<usize>().map_err(|e| bad(format!("{e}: `{s}`")));
        match size {
            None => {
                if f.len() != 3 {
                    return Err(bad("expected `rows cols nnz`".into()));
                }
                size = Some((idx(f[0])?, idx(f[1])?, idx(f[2])?));
            }
            Some((rows, cols, _)) => {
                if f.len() != 3 {
                    return Err(bad("expected `row col value`".into()));
                }
                let (r, c) = (idx(f[0])?, idx(f[1])?);
                if r == 0 || c == 0 || r > rows || c > cols {
                    return Err(bad(format!("entry ({r}, {c}) out of range")));
                }
                if integer {
                    let v: i64 = f[2].parse().map_err(|e| bad(format!("{e}")))?;
                    int_t.push((r - 1, c - 1, v));
                    if symmetric && r != c {
                        int_t.push((c - 1, r - 1, v));
                    }
                } else {
                    let v: f64 = f[2].parse().map_err(|e| bad(format!("{e}")))?;
                    real_t.push((r - 1, c - 1, v));
                    if symmetric && r != c {
                        real_t.push((c - 1, r - 1, v));
                    }
                }
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or(Error::Parse {
        line: text.lines().count(),
        msg: "missing size line".into(),
    })?;
    let got = int_t.len().max(real_t.len());
    if !symmetric && got != nnz {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {nnz} entries, found {got}"),
        });
    }
    Ok(if integer {
        MarketMatrix::Integer(SparseMatrix::from_triplets(rows, cols, int_t))
    } else {
        MarketMatrix::Real(SparseMatrix::from_triplets(rows, cols, real_t))
    })
}

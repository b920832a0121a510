//! The filtered-complex file format.
//!
//! UTF-8 lines; `#` starts a comment. Each record is `f v0 v1 ... vk` where
//! `f` is a decimal filtration value and the `v*` are vertex ids. Levels are
//! assigned by the rank of the distinct `f` values in increasing order,
//! starting at 1; ties are decided by exact rational comparison of the
//! decimals. Duplicate simplices are rejected. Implicit faces are not
//! inserted unless face completion is requested, in which case each missing
//! face enters at the smallest `f` among the records containing it.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::field::decimal_to_rational;

use super::{Cell, ComplexError, FilteredComplex, Simplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate simplex {simplex}")]
    Duplicate { line: usize, simplex: Simplex },
    #[error("line {line}: face completion is limited to records with at most {max} vertices")]
    RecordTooLargeToClose { line: usize, max: usize },
    #[error("{0}")]
    Complex(#[from] ComplexError),
}

/// Face completion enumerates all subsets of a record, so cap its size.
const CLOSE_VERTEX_LIMIT: usize = 20;

/// Parse the file format into a [`FilteredComplex`]. With `close` set,
/// missing faces are inserted at the smallest compatible filtration value;
/// the caller still validates the result.
pub fn parse_filtered_complex(
    text: &str,
    close: bool,
) -> Result<FilteredComplex, ComplexParseError> {
    let mut records: Vec<(BigRational, Simplex)> = Vec::new();
    let mut seen: BTreeMap<Simplex, usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| ComplexParseError::Syntax { line: line_no, message };
        let mut tokens = line.split_whitespace();
        let f_tok = tokens.next().expect("nonempty line");
        let f = decimal_to_rational(f_tok)
            .map_err(|e| syntax(format!("bad filtration value `{f_tok}`: {e}")))?;
        let vertices: Vec<u32> = tokens
            .map(|t| t.parse::<u32>().map_err(|_| syntax(format!("bad vertex id `{t}`"))))
            .collect::<Result<_, _>>()?;
        if vertices.is_empty() {
            return Err(syntax("record has no vertices".into()));
        }
        let simplex = Simplex::from_unsorted(vertices)
            .map_err(|e| syntax(format!("bad simplex: {e}")))?;
        if seen.insert(simplex.clone(), line_no).is_some() {
            return Err(ComplexParseError::Duplicate { line: line_no, simplex });
        }
        records.push((f, simplex));
    }
    if close {
        if let Some((_, big)) = records
            .iter()
            .find(|(_, s)| s.vertices().len() > CLOSE_VERTEX_LIMIT)
        {
            let line = seen[big];
            return Err(ComplexParseError::RecordTooLargeToClose {
                line,
                max: CLOSE_VERTEX_LIMIT,
            });
        }
        let mut completed: BTreeMap<Simplex, BigRational> = BTreeMap::new();
        for (f, simplex) in &records {
            for face in simplex.proper_faces() {
                if seen.contains_key(&face) {
                    continue;
                }
                completed
                    .entry(face)
                    .and_modify(|best| {
                        if f < best {
                            *best = f.clone();
                        }
                    })
                    .or_insert_with(|| f.clone());
            }
        }
        records.extend(completed.into_iter().map(|(s, f)| (f, s)));
    }
    Ok(build_complex(records))
}

/// Assign contiguous levels (from 1) by rank of the distinct filtration
/// values, then order cells by (level, degree, vertices).
pub(crate) fn build_complex(records: Vec<(BigRational, Simplex)>) -> FilteredComplex {
    let mut distinct: Vec<BigRational> = records.iter().map(|(f, _)| f.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let level_of = |f: &BigRational| -> i64 {
        (distinct.binary_search(f).expect("value present") + 1) as i64
    };
    let mut cells: Vec<Cell> = records
        .into_iter()
        .map(|(f, simplex)| {
            let level = level_of(&f);
            let birth = f.to_f64();
            Cell { simplex, level, birth }
        })
        .collect();
    cells.sort_by(|a, b| {
        (a.level, a.simplex.degree())
            .cmp(&(b.level, b.simplex.degree()))
            .then_with(|| a.simplex.vertices().cmp(b.simplex.vertices()))
    });
    FilteredComplex::new(cells)
}

/// Write a complex in the file format: one record per cell, using the birth
/// value when present and the integer level otherwise.
pub fn write_filtered_complex(fc: &FilteredComplex) -> String {
    let mut out = String::new();
    for cell in fc.cells() {
        let f = match cell.birth {
            Some(b) => format_f64(b),
            None => cell.level.to_string(),
        };
        let verts: Vec<String> = cell.simplex.vertices().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{f} {}\n", verts.join(" ")));
    }
    out
}

fn format_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

//! Line-oriented matrix interchange format.
//!
//! ```text
//! matrix <rows> <cols> <field>
//! degrees n1:size1 n2:size2 ...   (optional)
//! r c value                       (one line per nonzero entry, 1-based)
//! ```
//!
//! Field tokens are `q` for the rationals and `z<p>` for Z/p. Rational
//! values are written `num/den` (plain integers when the denominator is 1).
//! `#` starts a comment; blank lines are ignored; a stream may hold several
//! matrices, each introduced by its own `matrix` header.

use thiserror::Error;

use crate::field::FieldSpec;

use super::{ColumnMatrix, DegreePartition, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Matrix { line: usize, source: MatrixError },
}

/// A matrix as read from the interchange format, with its optional degree
/// partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterchangeMatrix {
    pub matrix: ColumnMatrix,
    pub partition: Option<DegreePartition>,
}

/// Declared dimensions allocate storage up front, so bound them.
const DIMENSION_LIMIT: usize = 1_000_000;

struct PendingMatrix {
    header_line: usize,
    rows: usize,
    cols: usize,
    field: FieldSpec,
    partition: Option<DegreePartition>,
    entries: Vec<(usize, usize, crate::field::Scalar)>,
}

impl PendingMatrix {
    fn finish(self) -> Result<InterchangeMatrix, MatrixParseError> {
        let matrix =
            ColumnMatrix::from_entries(self.rows, self.cols, self.field, self.entries)
                .map_err(|source| MatrixParseError::Matrix { line: self.header_line, source })?;
        if let Some(partition) = &self.partition {
            if partition.total() != matrix.rows() {
                return Err(MatrixParseError::Matrix {
                    line: self.header_line,
                    source: MatrixError::PartitionSizeMismatch {
                        partition: partition.total(),
                        dim: matrix.rows(),
                    },
                });
            }
        }
        Ok(InterchangeMatrix { matrix, partition: self.partition })
    }
}

/// Parse every matrix in the stream.
pub fn parse_matrices(text: &str) -> Result<Vec<InterchangeMatrix>, MatrixParseError> {
    let mut out = Vec::new();
    let mut pending: Option<PendingMatrix> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| MatrixParseError::Syntax { line: line_no, message };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "matrix" {
            if let Some(p) = pending.take() {
                out.push(p.finish()?);
            }
            if tokens.len() != 4 {
                return Err(syntax("expected `matrix <rows> <cols> <field>`".into()));
            }
            let rows: usize = tokens[1].parse().map_err(|_| syntax("bad row count".into()))?;
            let cols: usize = tokens[2].parse().map_err(|_| syntax("bad column count".into()))?;
            if rows > DIMENSION_LIMIT || cols > DIMENSION_LIMIT {
                return Err(syntax(format!("dimensions are limited to {DIMENSION_LIMIT}")));
            }
            let field: FieldSpec = tokens[3]
                .parse()
                .map_err(|e| syntax(format!("bad field token `{}`: {e}", tokens[3])))?;
            pending = Some(PendingMatrix {
                header_line: line_no,
                rows,
                cols,
                field,
                partition: None,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(current) = pending.as_mut() else {
            return Err(syntax("expected a `matrix` header before data".into()));
        };
        if tokens[0] == "degrees" {
            let mut blocks = Vec::new();
            for tok in &tokens[1..] {
                let (deg, size) = tok
                    .split_once(':')
                    .ok_or_else(|| syntax(format!("bad degree block `{tok}`")))?;
                let deg: i64 =
                    deg.parse().map_err(|_| syntax(format!("bad degree in `{tok}`")))?;
                let size: usize =
                    size.parse().map_err(|_| syntax(format!("bad block size in `{tok}`")))?;
                blocks.push((deg, size));
            }
            let partition = DegreePartition::new(blocks)
                .map_err(|source| MatrixParseError::Matrix { line: line_no, source })?;
            current.partition = Some(partition);
            continue;
        }
        if tokens.len() != 3 {
            return Err(syntax("expected `r c value`".into()));
        }
        let r: usize = tokens[0].parse().map_err(|_| syntax("bad row index".into()))?;
        let c: usize = tokens[1].parse().map_err(|_| syntax("bad column index".into()))?;
        if r == 0 || c == 0 {
            return Err(syntax("indices are 1-based".into()));
        }
        let value = current
            .field
            .parse_scalar(tokens[2])
            .map_err(|e| syntax(format!("bad value `{}`: {e}", tokens[2])))?;
        current.entries.push((r - 1, c - 1, value));
    }
    if let Some(p) = pending.take() {
        out.push(p.finish()?);
    }
    Ok(out)
}

/// Write one matrix in the interchange format. Entries come out in
/// column-major order, so identical matrices serialize identically.
pub fn write_matrix(m: &ColumnMatrix, partition: Option<&DegreePartition>) -> String {
    let mut out = format!("matrix {} {} {}\n", m.rows(), m.cols(), m.field());
    if let Some(p) = partition {
        out.push_str(&format!("degrees {p}\n"));
    }
    for (r, c, v) in m.entries() {
        out.push_str(&format!("{} {} {}\n", r + 1, c + 1, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_a_rational_matrix() {
        let m = ColumnMatrix::from_dense_i64(
            FieldSpec::Rationals,
            &[vec![1, 0, -8], vec![0, 3, 2]],
        );
        let text = write_matrix(&m, None);
        let parsed = parse_matrices(&text).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].matrix, m);
        assert_eq!(parsed[0].partition, None);
    }

    #[test]
    fn parses_degrees_and_comments() {
        let text = "# boundary matrix\nmatrix 3 3 q\ndegrees 0:2 1:1\n1 3 -1\n2 3 1/1\n\n";
        let parsed = parse_matrices(text).unwrap();
        let p = parsed[0].partition.as_ref().unwrap();
        assert_eq!(p.blocks(), &[(0, 2), (1, 1)]);
        assert_eq!(parsed[0].matrix.get(0, 2), FieldSpec::Rationals.from_integer(-1));
    }

    #[test]
    fn parses_prime_field_values() {
        let text = "matrix 2 2 z5\n1 1 7\n2 2 -1\n";
        let parsed = parse_matrices(text).unwrap();
        let f5 = FieldSpec::prime_field(5).unwrap();
        assert_eq!(parsed[0].matrix.get(0, 0), f5.from_integer(2));
        assert_eq!(parsed[0].matrix.get(1, 1), f5.from_integer(4));
    }

    #[test]
    fn reports_offending_line() {
        let err = parse_matrices("matrix 2 2 q\n1 1 oops\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Syntax { line: 2, .. }));
        let err = parse_matrices("1 1 1\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Syntax { line: 1, .. }));
        let err = parse_matrices("matrix 2 2 z6\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Syntax { line: 1, .. }));
        let err = parse_matrices("matrix 2 2 q\n0 1 1\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Syntax { line: 2, .. }));
        let err = parse_matrices("matrix 2 2 q\n3 1 1\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Matrix { line: 1, .. }));
    }

    #[test]
    fn rejects_oversized_dimensions() {
        let err = parse_matrices("matrix 99999999999 2 q\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Syntax { line: 1, .. }));
        let err = parse_matrices("matrix 2 2000000 q\n").unwrap_err();
        assert!(matches!(err, MatrixParseError::Syntax { line: 1, .. }));
    }

    #[test]
    fn multiple_matrices_in_one_stream() {
        let text = "matrix 1 1 q\n1 1 2\n# next\nmatrix 2 2 z2\n1 2 1\n";
        let parsed = parse_matrices(text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].matrix.field(), FieldSpec::prime_field(2).unwrap());
    }
}

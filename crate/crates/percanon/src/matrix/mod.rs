//! Column-oriented exact matrices and the structural factorization
//! `D = B D̲ B⁻¹` of a differential matrix.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};

mod io;
mod reduction;

pub use io::{parse_matrices, write_matrix, InterchangeMatrix, MatrixParseError};
pub use reduction::{
    column_reduce, jordan_permutation, normalization_diagonal, normalize, pivot_matrix,
    reduce_differential, standard_reduction, ReductionResult,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("field error: {0}")]
    Field(#[from] FieldError),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("column index {col} outside a matrix with {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not a differential: D^2 != 0")]
    NotDifferential,
    #[error("matrix is not column-reduced")]
    NotColumnReduced,
    #[error("matrix is not Boolean quasi-monomial")]
    NotQuasiMonomial,
    #[error("matrix is not triangular invertible")]
    NotTriangularInvertible,
    #[error("degree partition sizes sum to {partition} but the matrix has dimension {dim}")]
    PartitionSizeMismatch { partition: usize, dim: usize },
    #[error("degrees in a partition must be strictly increasing")]
    PartitionNotIncreasing,
    #[error("entry ({row}, {col}) violates the block-superdiagonal structure")]
    NotBlockSuperdiagonal { row: usize, col: usize },
    #[error("upper-left size {p} outside 0..={dim}")]
    UpperLeftOutOfRange { p: usize, dim: usize },
    #[error("permutation image is not a bijection")]
    NotAPermutation,
    #[error("internal verification failure: {0}")]
    InternalVerification(String),
}

/// A sparse matrix stored column-major: each column is a list of
/// `(row, scalar)` pairs with strictly increasing rows and nonzero scalars,
/// all sharing the matrix's field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMatrix {
    rows: usize,
    field: FieldSpec,
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl ColumnMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        ColumnMatrix { rows, field, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Self::zero(n, n, field);
        for k in 0..n {
            m.columns[k].push((k, field.one()));
        }
        m
    }

    /// Build from a list of `(row, col, scalar)` entries; zero scalars are
    /// dropped, duplicate positions are rejected.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, MatrixError> {
        let mut m = Self::zero(rows, cols, field);
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(MatrixError::IndexOutOfRange { row: r, col: c, rows, cols });
            }
            if v.spec() != field {
                return Err(FieldError::FieldMismatch(v.spec(), field).into());
            }
            if v.is_zero() {
                continue;
            }
            let col = &mut m.columns[c];
            match col.binary_search_by_key(&r, |(row, _)| *row) {
                Ok(_) => {
                    return Err(MatrixError::DimensionMismatch(format!(
                        "duplicate entry at ({}, {})",
                        r + 1,
                        c + 1
                    )))
                }
                Err(pos) => col.insert(pos, (r, v)),
            }
        }
        Ok(m)
    }

    /// Build from dense rows of small integers; handy for fixtures.
    pub fn from_dense_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(nrows, ncols, field);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense rows");
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[c].push((r, field.from_integer(v)));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn column(&self, k: usize) -> &[(usize, Scalar)] {
        &self.columns[k]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.columns[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(pos) => self.columns[c][pos].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Row of the bottommost nonzero entry of column `k`, or `None` for a
    /// zero column.
    pub fn column_pivot(&self, k: usize) -> Result<Option<usize>, MatrixError> {
        if k >= self.cols() {
            return Err(MatrixError::ColumnOutOfRange { col: k, cols: self.cols() });
        }
        Ok(self.columns[k].last().map(|(r, _)| *r))
    }

    /// dst += coef * src, keeping the sparse column canonical.
    pub fn col_axpy(&mut self, coef: &Scalar, src: usize, dst: usize) -> Result<(), MatrixError> {
        if coef.spec() != self.field {
            return Err(FieldError::FieldMismatch(coef.spec(), self.field).into());
        }
        if src == dst {
            return Err(MatrixError::DimensionMismatch("axpy with src == dst".into()));
        }
        if coef.is_zero() {
            return Ok(());
        }
        let src_col = std::mem::take(&mut self.columns[src]);
        let dst_col = std::mem::take(&mut self.columns[dst]);
        let mut merged = Vec::with_capacity(src_col.len() + dst_col.len());
        let (mut i, mut j) = (0, 0);
        while i < src_col.len() || j < dst_col.len() {
            let take_src = match (src_col.get(i), dst_col.get(j)) {
                (Some((rs, _)), Some((rd, _))) => {
                    if rs == rd {
                        let sum = dst_col[j].1.add(&coef.mul(&src_col[i].1)?)?;
                        if !sum.is_zero() {
                            merged.push((*rs, sum));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    rs < rd
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if take_src {
                let (r, v) = &src_col[i];
                merged.push((*r, coef.mul(v)?));
                i += 1;
            } else {
                merged.push(dst_col[j].clone());
                j += 1;
            }
        }
        self.columns[src] = src_col;
        self.columns[dst] = merged;
        Ok(())
    }

    /// Scale column `k` by a nonzero scalar.
    pub fn col_scale(&mut self, coef: &Scalar, k: usize) -> Result<(), MatrixError> {
        if coef.is_zero() {
            return Err(MatrixError::DimensionMismatch("scaling a column by zero".into()));
        }
        for (_, v) in &mut self.columns[k] {
            *v = v.mul(coef)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &ColumnMatrix) -> Result<ColumnMatrix, MatrixError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field, other.field).into());
        }
        if self.cols() != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let mut out = ColumnMatrix::zero(self.rows, other.cols(), self.field);
        for k in 0..other.cols() {
            let mut acc: Vec<(usize, Scalar)> = Vec::new();
            for (j, coef) in other.column(k) {
                for (r, v) in self.column(*j) {
                    let term = coef.mul(v)?;
                    match acc.binary_search_by_key(r, |(row, _)| *row) {
                        Ok(pos) => acc[pos].1 = acc[pos].1.add(&term)?,
                        Err(pos) => acc.insert(pos, (*r, term)),
                    }
                }
            }
            acc.retain(|(_, v)| !v.is_zero());
            out.columns[k] = acc;
        }
        Ok(out)
    }

    /// Inverse of an upper-triangular invertible matrix, by back substitution
    /// one column at a time.
    pub fn triangular_inverse(&self) -> Result<ColumnMatrix, MatrixError> {
        if !is_triangular_invertible(self) {
            return Err(MatrixError::NotTriangularInvertible);
        }
        let n = self.rows;
        let mut inv = ColumnMatrix::zero(n, n, self.field);
        for k in 0..n {
            // solve self * x = e_k from the bottom row up
            let mut x = vec![self.field.zero(); n];
            x[k] = self.field.one();
            for j in (0..n).rev() {
                if x[j].is_zero() {
                    continue;
                }
                let diag = &self.column(j).last().expect("nonzero diagonal").1;
                x[j] = x[j].div(diag)?;
                for (i, v) in self.column(j) {
                    if *i < j {
                        x[*i] = x[*i].sub(&v.mul(&x[j])?)?;
                    }
                }
            }
            inv.columns[k] = x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(inv)
    }

    /// The `p x p` upper-left submatrix.
    pub fn upper_left_block(&self, p: usize) -> ColumnMatrix {
        let mut out = ColumnMatrix::zero(p, p, self.field);
        for k in 0..p.min(self.cols()) {
            out.columns[k] = self.columns[k].iter().filter(|(r, _)| *r < p).cloned().collect();
        }
        out
    }

    /// Conjugation by a permutation: `out[i][j] = self[perm(i)][perm(j)]`.
    pub fn permute_conjugate(&self, perm: &Permutation) -> Result<ColumnMatrix, MatrixError> {
        if !self.is_square() || self.rows != perm.len() {
            return Err(MatrixError::DimensionMismatch(
                "permutation conjugation needs a square matrix of matching size".into(),
            ));
        }
        let inv = perm.inverse();
        let mut entries = Vec::new();
        for (r, c, v) in self.entries() {
            entries.push((inv.image()[r], inv.image()[c], v.clone()));
        }
        ColumnMatrix::from_entries(self.rows, self.rows, self.field, entries)
    }
}

impl fmt::Display for ColumnMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols()).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// true iff no two columns share a pivot row.
pub fn is_column_reduced(m: &ColumnMatrix) -> bool {
    let mut seen = vec![false; m.rows()];
    for k in 0..m.cols() {
        if let Some((r, _)) = m.column(k).last() {
            if seen[*r] {
                return false;
            }
            seen[*r] = true;
        }
    }
    true
}

/// true iff every nonzero entry is 1.
pub fn is_boolean(m: &ColumnMatrix) -> bool {
    m.entries().all(|(_, _, v)| v.is_one())
}

/// true iff each row and each column holds at most one nonzero entry.
pub fn is_quasi_monomial(m: &ColumnMatrix) -> bool {
    let mut row_used = vec![false; m.rows()];
    for k in 0..m.cols() {
        let col = m.column(k);
        if col.len() > 1 {
            return false;
        }
        if let Some((r, _)) = col.first() {
            if row_used[*r] {
                return false;
            }
            row_used[*r] = true;
        }
    }
    true
}

/// true iff square, upper-triangular, and every diagonal entry is nonzero.
pub fn is_triangular_invertible(m: &ColumnMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    for k in 0..m.cols() {
        match m.column(k).last() {
            Some((r, _)) if *r == k => {}
            _ => return false,
        }
    }
    true
}

/// true iff triangular with unit diagonal.
pub fn is_unitriangular(m: &ColumnMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    for k in 0..m.cols() {
        match m.column(k).last() {
            Some((r, v)) if *r == k && v.is_one() => {}
            _ => return false,
        }
    }
    true
}

/// true iff square with `M^2 = 0`.
pub fn is_differential(m: &ColumnMatrix) -> bool {
    m.is_square() && m.mul(m).map(|sq| sq.is_zero()).unwrap_or(false)
}

/// true iff the matrix is a block-diagonal assembly of the 1x1 zero block
/// and the 2x2 block with a single 1 in the upper right corner.
pub fn is_jordan(m: &ColumnMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let mut super_one = vec![false; m.cols()];
    for (r, c, v) in m.entries() {
        if c != r + 1 || !v.is_one() {
            return false;
        }
        super_one[r] = true;
    }
    !(0..m.cols().saturating_sub(1)).any(|i| super_one[i] && super_one[i + 1])
}

/// true iff some permutation conjugation of the matrix is Jordan; decided by
/// attempting to construct the permutation.
pub fn is_almost_jordan(m: &ColumnMatrix) -> bool {
    reduction::jordan_permutation(m).is_ok()
}

/// Ordered `(degree, block size)` list describing how matrix indices split
/// into pure-degree blocks. Degrees are strictly increasing; sizes sum to the
/// matrix dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePartition {
    blocks: Vec<(i64, usize)>,
}

impl DegreePartition {
    pub fn new(blocks: Vec<(i64, usize)>) -> Result<Self, MatrixError> {
        if blocks.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(MatrixError::PartitionNotIncreasing);
        }
        Ok(DegreePartition { blocks })
    }

    pub fn blocks(&self) -> &[(i64, usize)] {
        &self.blocks
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().map(|(_, s)| s).sum()
    }

    pub fn degree_of_index(&self, i: usize) -> Option<i64> {
        let mut offset = 0;
        for (deg, size) in &self.blocks {
            if i < offset + size {
                return Some(*deg);
            }
            offset += size;
        }
        None
    }

    /// The partition induced on the first `p` indices.
    pub fn truncate(&self, p: usize) -> DegreePartition {
        let mut remaining = p;
        let mut blocks = Vec::new();
        for (deg, size) in &self.blocks {
            if remaining == 0 {
                break;
            }
            let take = remaining.min(*size);
            blocks.push((*deg, take));
            remaining -= take;
        }
        DegreePartition { blocks }
    }
}

impl fmt::Display for DegreePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.blocks.iter().map(|(d, s)| format!("{d}:{s}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A square differential matrix together with a degree partition making it
/// block-superdiagonal: nonzero entries only map degree-(n+1) columns to
/// degree-n rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDifferential {
    matrix: ColumnMatrix,
    partition: DegreePartition,
}

impl GradedDifferential {
    pub fn new(matrix: ColumnMatrix, partition: DegreePartition) -> Result<Self, MatrixError> {
        if !matrix.is_square() {
            return Err(MatrixError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        if partition.total() != matrix.rows() {
            return Err(MatrixError::PartitionSizeMismatch {
                partition: partition.total(),
                dim: matrix.rows(),
            });
        }
        for (r, c, _) in matrix.entries() {
            let dr = partition.degree_of_index(r).expect("index covered");
            let dc = partition.degree_of_index(c).expect("index covered");
            if dr + 1 != dc {
                return Err(MatrixError::NotBlockSuperdiagonal { row: r, col: c });
            }
        }
        if !is_differential(&matrix) {
            return Err(MatrixError::NotDifferential);
        }
        Ok(GradedDifferential { matrix, partition })
    }

    pub fn matrix(&self) -> &ColumnMatrix {
        &self.matrix
    }

    pub fn partition(&self) -> &DegreePartition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    /// The `p x p` upper-left submatrix with the induced partition. The block
    /// structure guarantees the result is again a graded differential.
    pub fn upper_left(&self, p: usize) -> Result<GradedDifferential, MatrixError> {
        if p > self.dim() {
            return Err(MatrixError::UpperLeftOutOfRange { p, dim: self.dim() });
        }
        GradedDifferential::new(self.matrix.upper_left_block(p), self.partition.truncate(p))
    }

    /// Checks a square matrix of matching dimension for block-diagonality
    /// with respect to this grading.
    pub fn is_block_diagonal(&self, m: &ColumnMatrix) -> bool {
        m.is_square()
            && m.rows() == self.dim()
            && m.entries().all(|(r, c, _)| {
                self.partition.degree_of_index(r) == self.partition.degree_of_index(c)
            })
    }
}

/// A bijection on `{0..len}`; `image[new] = old`, so as a matrix
/// `P[old][new] = 1` and conjugation `P⁻¹ M P` reindexes by `image`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn new(image: Vec<usize>) -> Result<Self, MatrixError> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || seen[i] {
                return Err(MatrixError::NotAPermutation);
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// 1-based image, as printed in external formats.
    pub fn image_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|i| i + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (new, &old) in self.image.iter().enumerate() {
            inv[old] = new;
        }
        Permutation { image: inv }
    }

    pub fn to_matrix(&self, field: FieldSpec) -> ColumnMatrix {
        let n = self.image.len();
        let mut m = ColumnMatrix::zero(n, n, field);
        for (new, &old) in self.image.iter().enumerate() {
            m.columns[new].push((old, field.one()));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq() -> FieldSpec {
        FieldSpec::Rationals
    }

    /// The 3x4 rational matrix used throughout the column-reduction tests.
    pub(crate) fn sample_3x4() -> ColumnMatrix {
        ColumnMatrix::from_dense_i64(
            fq(),
            &[vec![1, -2, 0, -8], vec![2, -4, 6, 2], vec![1, -2, 2, -2]],
        )
    }

    #[test]
    fn column_pivot_is_bottommost_nonzero() {
        let m = sample_3x4();
        assert_eq!(m.column_pivot(0).unwrap(), Some(2));
        let z = ColumnMatrix::zero(4, 2, fq());
        assert_eq!(z.column_pivot(1).unwrap(), None);
        let single = ColumnMatrix::from_entries(6, 1, fq(), [(4, 0, fq().one())]).unwrap();
        assert_eq!(single.column_pivot(0).unwrap(), Some(4));
        assert!(m.column_pivot(4).is_err());
    }

    #[test]
    fn column_reduced_predicate() {
        assert!(is_column_reduced(&ColumnMatrix::identity(5, fq())));
        let twin = ColumnMatrix::from_dense_i64(fq(), &[vec![1, 1], vec![2, 2]]);
        assert!(!is_column_reduced(&twin));
        assert!(is_column_reduced(&ColumnMatrix::zero(3, 3, fq())));
    }

    #[test]
    fn axpy_cancels_exactly() {
        let mut m = sample_3x4();
        let two = fq().from_integer(2);
        m.col_axpy(&two, 0, 1).unwrap();
        assert!(m.column(1).is_empty());
    }

    #[test]
    fn multiplication_matches_dense() {
        let a = sample_3x4();
        let b = ColumnMatrix::from_dense_i64(
            fq(),
            &[vec![1, 0], vec![0, 1], vec![1, 1], vec![0, -1]],
        );
        let ab = a.mul(&b).unwrap();
        let expect =
            ColumnMatrix::from_dense_i64(fq(), &[vec![1, 6], vec![8, 0], vec![3, 2]]);
        assert_eq!(ab, expect);
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn triangular_inverse_round_trips() {
        let t = ColumnMatrix::from_dense_i64(
            fq(),
            &[vec![1, -1, 3], vec![0, 2, 5], vec![0, 0, -1]],
        );
        let inv = t.triangular_inverse().unwrap();
        assert_eq!(t.mul(&inv).unwrap(), ColumnMatrix::identity(3, fq()));
        assert_eq!(inv.mul(&t).unwrap(), ColumnMatrix::identity(3, fq()));
        let sing = ColumnMatrix::from_dense_i64(fq(), &[vec![1, 1], vec![0, 0]]);
        assert!(sing.triangular_inverse().is_err());
    }

    #[test]
    fn structural_predicates() {
        let k = ColumnMatrix::from_dense_i64(fq(), &[vec![0, 1], vec![0, 0]]);
        assert!(is_jordan(&k));
        assert!(is_boolean(&k));
        assert!(is_quasi_monomial(&k));
        assert!(is_differential(&k));

        let chain = ColumnMatrix::from_dense_i64(
            fq(),
            &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        );
        assert!(!is_jordan(&chain)); // adjacent superdiagonal ones
        assert!(!is_differential(&chain));

        let tri = ColumnMatrix::from_dense_i64(fq(), &[vec![2, 1], vec![0, 1]]);
        assert!(is_triangular_invertible(&tri));
        assert!(!is_unitriangular(&tri));
        assert!(is_unitriangular(&ColumnMatrix::identity(4, fq())));
        assert!(!is_triangular_invertible(&ColumnMatrix::zero(2, 2, fq())));

        let below = ColumnMatrix::from_dense_i64(fq(), &[vec![0, 0], vec![1, 0]]);
        assert!(!is_jordan(&below));
        assert!(is_almost_jordan(&below));
    }

    #[test]
    fn partition_lookup_and_truncation() {
        let p = DegreePartition::new(vec![(0, 3), (1, 3), (2, 1)]).unwrap();
        assert_eq!(p.total(), 7);
        assert_eq!(p.degree_of_index(0), Some(0));
        assert_eq!(p.degree_of_index(3), Some(1));
        assert_eq!(p.degree_of_index(6), Some(2));
        assert_eq!(p.degree_of_index(7), None);
        let t = p.truncate(4);
        assert_eq!(t.blocks(), &[(0, 3), (1, 1)]);
        assert!(DegreePartition::new(vec![(1, 2), (0, 1)]).is_err());
    }

    #[test]
    fn graded_differential_rejects_bad_block_structure() {
        // a differential with an entry inside a single degree block
        let m = ColumnMatrix::from_dense_i64(fq(), &[vec![0, 1], vec![0, 0]]);
        let single = DegreePartition::new(vec![(0, 2)]).unwrap();
        assert!(matches!(
            GradedDifferential::new(m.clone(), single),
            Err(MatrixError::NotBlockSuperdiagonal { .. })
        ));
        let good = DegreePartition::new(vec![(0, 1), (1, 1)]).unwrap();
        assert!(GradedDifferential::new(m, good).is_ok());
    }

    #[test]
    fn nonadjacent_degree_blocks_admit_no_entries() {
        // degrees 0 and 2: no block maps degree 3 columns to degree 2 rows,
        // so only the zero matrix is graded
        let p = DegreePartition::new(vec![(0, 1), (2, 1)]).unwrap();
        assert!(GradedDifferential::new(ColumnMatrix::zero(2, 2, fq()), p.clone()).is_ok());
        let m = ColumnMatrix::from_dense_i64(fq(), &[vec![0, 1], vec![0, 0]]);
        assert!(matches!(
            GradedDifferential::new(m, p),
            Err(MatrixError::NotBlockSuperdiagonal { .. })
        ));
    }

    #[test]
    fn graded_differential_rejects_non_differential() {
        let m = ColumnMatrix::from_dense_i64(
            fq(),
            &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        );
        let p = DegreePartition::new(vec![(0, 1), (1, 1), (2, 1)]).unwrap();
        assert!(matches!(GradedDifferential::new(m, p), Err(MatrixError::NotDifferential)));
    }

    #[test]
    fn permutation_conjugation_reindexes() {
        let m = ColumnMatrix::from_dense_i64(fq(), &[vec![0, 0], vec![1, 0]]);
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let conj = m.permute_conjugate(&swap).unwrap();
        assert!(is_jordan(&conj));
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert_eq!(swap.inverse(), swap);
    }

    #[test]
    fn permutation_matrix_matches_conjugation() {
        let f = fq();
        let m = ColumnMatrix::from_dense_i64(
            f,
            &[vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]],
        );
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let pm = p.to_matrix(f);
        let lhs = p.inverse().to_matrix(f).mul(&m).unwrap().mul(&pm).unwrap();
        assert_eq!(lhs, m.permute_conjugate(&p).unwrap());
        assert_eq!(pm.mul(&p.inverse().to_matrix(f)).unwrap(), ColumnMatrix::identity(3, f));
    }
}

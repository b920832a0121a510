//! The column-reduction algorithm and the construction of the persistence
//! canonical form `D̲` with its normalized basis change `B`.

use crate::field::Scalar;

use super::{
    is_column_reduced, is_differential, is_jordan, is_quasi_monomial, is_triangular_invertible,
    is_unitriangular, ColumnMatrix, GradedDifferential, MatrixError, Permutation,
};

/// The bundle certifying the factorization of a differential matrix `D`:
/// `R = D V = D V̂`, `V̂ D̲ = R`, `D B = B D̲`, and `P⁻¹ D̲ P` Jordan.
/// All identities are verified by exact multiplication before a value of
/// this type is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub r: ColumnMatrix,
    pub v: ColumnMatrix,
    pub vhat: ColumnMatrix,
    pub dcanon: ColumnMatrix,
    pub b: ColumnMatrix,
    pub p: Permutation,
}

/// Deterministic left-to-right column reduction: returns `(R, V)` with
/// `R = M V` column-reduced and `V` unipotent triangular. Each nonzero
/// column clears, to its right, the entries in its pivot row.
pub fn column_reduce(m: &ColumnMatrix) -> Result<(ColumnMatrix, ColumnMatrix), MatrixError> {
    let mut r = m.clone();
    let mut v = ColumnMatrix::identity(m.cols(), m.field());
    for k in 0..r.cols() {
        let Some((pivot_row, pivot_val)) = r.column(k).last().cloned() else {
            continue;
        };
        for j in (k + 1)..r.cols() {
            let entry = r.get(pivot_row, j);
            if entry.is_zero() {
                continue;
            }
            let coef = entry.neg().div(&pivot_val)?;
            r.col_axpy(&coef, k, j)?;
            v.col_axpy(&coef, k, j)?;
        }
    }
    Ok((r, v))
}

/// Replace every column-pivot of a column-reduced matrix with 1 and every
/// other entry with 0, giving a Boolean quasi-monomial matrix.
pub fn pivot_matrix(r: &ColumnMatrix) -> Result<ColumnMatrix, MatrixError> {
    if !is_column_reduced(r) {
        return Err(MatrixError::NotColumnReduced);
    }
    let one = r.field().one();
    let entries = (0..r.cols())
        .filter_map(|k| r.column(k).last().map(|(row, _)| (*row, k, one.clone())));
    ColumnMatrix::from_entries(r.rows(), r.cols(), r.field(), entries)
}

/// Column `k` of `V̂` is the column of `R` whose pivot sits in row `k` when
/// one exists, and column `k` of `V` otherwise.
fn vhat_matrix(
    r: &ColumnMatrix,
    v: &ColumnMatrix,
) -> Result<ColumnMatrix, MatrixError> {
    let m = v.cols();
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; r.rows()];
    for k in 0..r.cols() {
        if let Some((row, _)) = r.column(k).last() {
            pivot_col_of_row[*row] = Some(k);
        }
    }
    let mut entries = Vec::new();
    for k in 0..m {
        let source = match pivot_col_of_row.get(k).copied().flatten() {
            Some(c) => r.column(c),
            None => v.column(k),
        };
        for (row, val) in source {
            entries.push((*row, k, val.clone()));
        }
    }
    ColumnMatrix::from_entries(m, m, v.field(), entries)
}

/// The diagonal of the normalization matrix `T`: the inverse of `V̂`'s
/// diagonal on every zero column of `D̲`, copied onto the paired column for
/// every pivot of `D̲` so that conjugation by `V̂ T` preserves `D̲` exactly.
pub fn normalization_diagonal(
    vhat: &ColumnMatrix,
    dcanon: &ColumnMatrix,
) -> Result<Vec<Scalar>, MatrixError> {
    if !is_triangular_invertible(vhat) {
        return Err(MatrixError::InternalVerification(
            "normalization requires a triangular invertible matrix".into(),
        ));
    }
    let field = vhat.field();
    let m = vhat.cols();
    let mut diag = vec![field.one(); m];
    for (k, slot) in diag.iter_mut().enumerate() {
        if dcanon.column(k).is_empty() {
            let d = vhat.get(k, k);
            if d.is_zero() {
                return Err(MatrixError::InternalVerification(
                    "zero diagonal entry in a triangular invertible matrix".into(),
                ));
            }
            *slot = d.inv()?;
        }
    }
    for k in 0..m {
        if let Some((row, _)) = dcanon.column(k).first() {
            diag[k] = diag[*row].clone();
        }
    }
    Ok(diag)
}

/// `V̂ T` for the diagonal `T` of [`normalization_diagonal`]; the result has
/// diagonal entry 1 on every kernel column of `D̲`.
pub fn normalize(vhat: &ColumnMatrix, dcanon: &ColumnMatrix) -> Result<ColumnMatrix, MatrixError> {
    let diag = normalization_diagonal(vhat, dcanon)?;
    let mut b = vhat.clone();
    for (k, t) in diag.iter().enumerate() {
        if !t.is_one() {
            b.col_scale(t, k)?;
        }
    }
    Ok(b)
}

/// Scan original indices in ascending order: an index whose row holds a pivot
/// emits itself followed by the pivot's column; an index with zero row and
/// zero column emits itself as a singleton; remaining indices are emitted as
/// the paired partner of an earlier creator. The conjugation by the result is
/// verified Jordan before returning.
pub fn jordan_permutation(dcanon: &ColumnMatrix) -> Result<Permutation, MatrixError> {
    if !dcanon.is_square() {
        return Err(MatrixError::NotSquare { rows: dcanon.rows(), cols: dcanon.cols() });
    }
    if !super::is_boolean(dcanon) || !is_quasi_monomial(dcanon) || !is_differential(dcanon) {
        return Err(MatrixError::NotQuasiMonomial);
    }
    let m = dcanon.rows();
    let mut pivot_in_row: Vec<Option<usize>> = vec![None; m];
    let mut col_nonzero = vec![false; m];
    for (r, c, _) in dcanon.entries() {
        pivot_in_row[r] = Some(c);
        col_nonzero[c] = true;
    }
    let mut image = Vec::with_capacity(m);
    let mut consumed = vec![false; m];
    for j in 0..m {
        if consumed[j] {
            continue;
        }
        if let Some(k) = pivot_in_row[j] {
            image.push(j);
            image.push(k);
            consumed[j] = true;
            consumed[k] = true;
        } else if !col_nonzero[j] {
            image.push(j);
            consumed[j] = true;
        }
    }
    let perm = Permutation::new(image)?;
    let conj = dcanon.permute_conjugate(&perm)?;
    if !is_jordan(&conj) {
        return Err(MatrixError::InternalVerification(
            "permutation conjugate is not Jordan".into(),
        ));
    }
    Ok(perm)
}

/// Run the full factorization on any differential matrix (the ungraded
/// setting; no block structure is assumed or checked).
pub fn reduce_differential(d: &ColumnMatrix) -> Result<ReductionResult, MatrixError> {
    if !d.is_square() {
        return Err(MatrixError::NotSquare { rows: d.rows(), cols: d.cols() });
    }
    if !is_differential(d) {
        return Err(MatrixError::NotDifferential);
    }
    let (r, v) = column_reduce(d)?;
    let dcanon = pivot_matrix(&r)?;
    let vhat = vhat_matrix(&r, &v)?;
    let b = normalize(&vhat, &dcanon)?;
    let p = jordan_permutation(&dcanon)?;
    let result = ReductionResult { r, v, vhat, dcanon, b, p };
    verify_reduction(d, &result)?;
    Ok(result)
}

/// Run the full factorization on a graded differential and verify the block
/// structure of every output on top of the ungraded identities.
pub fn standard_reduction(d: &GradedDifferential) -> Result<ReductionResult, MatrixError> {
    let result = reduce_differential(d.matrix())?;
    for (name, m) in [("V", &result.v), ("Vhat", &result.vhat), ("B", &result.b)] {
        if !d.is_block_diagonal(m) {
            return Err(MatrixError::InternalVerification(format!(
                "{name} is not block-diagonal for the degree partition"
            )));
        }
    }
    // Dcanon stays block-superdiagonal: rebuilding the graded wrapper checks it.
    GradedDifferential::new(result.dcanon.clone(), d.partition().clone()).map_err(|e| {
        MatrixError::InternalVerification(format!("canonical form lost the grading: {e}"))
    })?;
    Ok(result)
}

/// Exact verification of every `ReductionResult` invariant. A failure here is
/// an implementation bug, never a property of valid input.
fn verify_reduction(d: &ColumnMatrix, out: &ReductionResult) -> Result<(), MatrixError> {
    let fail = |what: &str| Err(MatrixError::InternalVerification(what.into()));
    if !is_unitriangular(&out.v) {
        return fail("V is not unipotent triangular");
    }
    if !is_triangular_invertible(&out.vhat) || !is_triangular_invertible(&out.b) {
        return fail("Vhat or B is not triangular invertible");
    }
    if !is_column_reduced(&out.r) {
        return fail("R is not column-reduced");
    }
    if d.mul(&out.v)? != out.r {
        return fail("D V != R");
    }
    if d.mul(&out.vhat)? != out.r {
        return fail("D Vhat != R");
    }
    if out.vhat.mul(&out.dcanon)? != out.r {
        return fail("Vhat Dcanon != R");
    }
    if d.mul(&out.b)? != out.b.mul(&out.dcanon)? {
        return fail("D B != B Dcanon");
    }
    if !is_jordan(&out.dcanon.permute_conjugate(&out.p)?) {
        return fail("P^-1 Dcanon P is not Jordan");
    }
    // diagonal entry 1 on every kernel column of Dcanon
    for k in 0..out.dcanon.cols() {
        if out.dcanon.column(k).is_empty() && !out.b.get(k, k).is_one() {
            return fail("B is not normalized on a kernel column");
        }
    }
    Ok(())
}

//! Independent verification machinery: Gaussian-elimination ranks, levelwise
//! homology dimensions, and exhaustive brute-force confirmation of the
//! canonical form on small matrices over Z/2. Nothing here shares a code
//! path with the column-reduction pipeline.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{ComplexError, FilteredComplex, Simplex};
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::matrix::{is_almost_jordan, ColumnMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("brute force is limited to matrices of size at most {max}, got {got}")]
    TooLarge { max: usize, got: usize },
    #[error("brute force requires the field Z/2")]
    NotModTwo,
    #[error("input is not a differential matrix")]
    NotDifferential,
    #[error("no triangular conjugation yields an almost-Jordan form")]
    NoWitness,
    #[error("two triangular conjugations yield different canonical forms")]
    NotUnique,
    #[error("{0}")]
    Complex(#[from] ComplexError),
    #[error("{0}")]
    Matrix(#[from] MatrixError),
    #[error("{0}")]
    Field(#[from] FieldError),
}

/// Matrix rank by row-echelon Gaussian elimination on a dense copy;
/// deliberately a different algorithm from column reduction.
pub fn rank_gauss(m: &ColumnMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut dense: Vec<Vec<Scalar>> = vec![vec![m.field().zero(); cols]; rows];
    for (r, c, v) in m.entries() {
        dense[r][c] = v.clone();
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !dense[r][col].is_zero()) else {
            continue;
        };
        dense.swap(rank, pivot);
        let inv = dense[rank][col].inv().expect("pivot nonzero");
        let (upper, lower) = dense.split_at_mut(rank + 1);
        let pivot_row = &upper[rank];
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].mul(&inv).expect("same field");
            for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                let term = factor.mul(p).expect("same field");
                *entry = entry.sub(&term).expect("same field");
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Per-(degree, level) dimension, boundary rank, kernel dimension, and
/// homology dimension of a filtered complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    levels: Vec<i64>,
    max_degree: i64,
    entries: BTreeMap<(i64, i64), RankEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RankEntry {
    /// number of degree-n cells present at the level
    pub dim: usize,
    /// rank of the degree-n boundary restricted to the level
    pub rank: usize,
    /// dim - rank
    pub nullity: usize,
    /// nullity minus the rank of the degree-(n+1) boundary
    pub homology: usize,
}

impl RankProfile {
    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    /// The entry for degree `n` at level `p`, clamped to the last level for
    /// `p` beyond the filtration (the complex has stabilized there).
    pub fn entry(&self, n: i64, p: i64) -> RankEntry {
        let clamped = match self.levels.iter().rev().find(|&&l| l <= p) {
            Some(&l) => l,
            None => return RankEntry::default(),
        };
        self.entries.get(&(n, clamped)).copied().unwrap_or_default()
    }

    pub fn homology(&self, n: i64, p: i64) -> usize {
        self.entry(n, p).homology
    }
}

/// Homology dimensions per degree and level, computed from the level
/// restrictions with [`rank_gauss`]: `dim H_n(p) = dim ker ∂_n(p) − rank
/// ∂_{n+1}(p)`.
pub fn homology_dims(fc: &FilteredComplex, field: FieldSpec) -> Result<RankProfile, OracleError> {
    let violations = crate::complex::validate(fc);
    if let Some(first) = violations.first() {
        return Err(ComplexError::Invalid(violations.len(), first.clone()).into());
    }
    let levels = fc.levels();
    let max_degree = fc.max_degree();
    let mut entries = BTreeMap::new();
    for &p in &levels {
        let stage = fc.at_level(p);
        let mut rank_of_degree: BTreeMap<i64, usize> = BTreeMap::new();
        let mut dim_of_degree: BTreeMap<i64, usize> = BTreeMap::new();
        for n in 0..=max_degree {
            let d = incidence_matrix(&stage, n, field)?;
            dim_of_degree.insert(n, d.cols());
            rank_of_degree.insert(n, rank_gauss(&d));
        }
        for n in 0..=max_degree {
            let dim = dim_of_degree[&n];
            let rank = rank_of_degree[&n];
            let nullity = dim - rank;
            let next_rank = rank_of_degree.get(&(n + 1)).copied().unwrap_or(0);
            assert!(nullity >= next_rank, "boundary image must lie in the kernel");
            entries.insert(
                (n, p),
                RankEntry { dim, rank, nullity, homology: nullity - next_rank },
            );
        }
    }
    Ok(RankProfile { levels, max_degree, entries })
}

/// The plain incidence matrix from degree-`n` cells to degree-`(n-1)` cells
/// of a complex, assembled directly from facet enumeration.
fn incidence_matrix(
    fc: &FilteredComplex,
    n: i64,
    field: FieldSpec,
) -> Result<ColumnMatrix, OracleError> {
    let mut row_of: BTreeMap<&Simplex, usize> = BTreeMap::new();
    for cell in fc.cells().iter().filter(|c| c.simplex.degree() == n - 1) {
        let next = row_of.len();
        row_of.insert(&cell.simplex, next);
    }
    let columns: Vec<&Simplex> = fc
        .cells()
        .iter()
        .filter(|c| c.simplex.degree() == n)
        .map(|c| &c.simplex)
        .collect();
    let mut entries = Vec::new();
    for (col, simplex) in columns.iter().enumerate() {
        let mut sign = field.one();
        for face in simplex.facets() {
            let row = *row_of.get(&face).ok_or(ComplexError::ForeignBasis)?;
            entries.push((row, col, sign.clone()));
            sign = sign.neg();
        }
    }
    Ok(ColumnMatrix::from_entries(row_of.len(), columns.len(), field, entries)?)
}

pub const BRUTE_FORCE_MAX_DIM: usize = 4;

/// Exhaustively enumerate every invertible triangular matrix over Z/2 (the
/// diagonal is forced to 1, leaving `2^(m(m-1)/2)` candidates), collect each
/// conjugate `B⁻¹ D B` that is almost-Jordan, and demand the collection is
/// nonempty and constant. Returns the common canonical form.
pub fn brute_force_canonical(d: &ColumnMatrix) -> Result<ColumnMatrix, OracleError> {
    if d.field() != FieldSpec::PrimeField(2) {
        return Err(OracleError::NotModTwo);
    }
    let m = d.rows();
    if m > BRUTE_FORCE_MAX_DIM {
        return Err(OracleError::TooLarge { max: BRUTE_FORCE_MAX_DIM, got: m });
    }
    if !crate::matrix::is_differential(d) {
        return Err(OracleError::NotDifferential);
    }
    let field = d.field();
    let positions: Vec<(usize, usize)> =
        (0..m).flat_map(|r| ((r + 1)..m).map(move |c| (r, c))).collect();
    let mut witness: Option<ColumnMatrix> = None;
    for bits in 0u32..(1 << positions.len()) {
        let entries = (0..m)
            .map(|k| (k, k, field.one()))
            .chain(
                positions
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits & (1 << i) != 0)
                    .map(|(_, &(r, c))| (r, c, field.one())),
            );
        let b = ColumnMatrix::from_entries(m, m, field, entries)?;
        let conj = b.triangular_inverse()?.mul(d)?.mul(&b)?;
        if is_almost_jordan(&conj) {
            match &witness {
                None => witness = Some(conj),
                Some(prev) if *prev != conj => return Err(OracleError::NotUnique),
                _ => {}
            }
        }
    }
    witness.ok_or(OracleError::NoWitness)
}

/// Every differential matrix of the given size over Z/2, by filtering all
/// bit patterns; sized for the exhaustive uniqueness suite.
pub fn all_differentials_mod2(m: usize) -> Vec<ColumnMatrix> {
    assert!(m <= BRUTE_FORCE_MAX_DIM, "enumeration is sized for small m");
    let field = FieldSpec::PrimeField(2);
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << (m * m)) {
        let entries = (0..m * m)
            .filter(|i| bits & (1 << i) != 0)
            .map(|i| (i / m, i % m, field.one()));
        let d = ColumnMatrix::from_entries(m, m, field, entries).expect("in range");
        if d.mul(&d).expect("square").is_zero() {
            out.push(d);
        }
    }
    out
}

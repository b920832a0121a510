//! Filtered simplicial and chain complexes, adapted bases in both orderings,
//! and boundary-matrix assembly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{ColumnMatrix, DegreePartition, GradedDifferential, MatrixError};

mod io;

pub use io::{parse_filtered_complex, write_filtered_complex, ComplexParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertices must be strictly increasing, got {0:?}")]
    UnsortedVertices(Vec<u32>),
    #[error("duplicate vertex in {0:?}")]
    DuplicateVertex(Vec<u32>),
    #[error("invalid complex: {0} violation(s), first: {1}")]
    Invalid(usize, Violation),
    #[error("basis does not belong to this complex")]
    ForeignBasis,
    #[error("a degree-major basis is required")]
    NotDegreeMajor,
    #[error("matrix error: {0}")]
    Matrix(#[from] MatrixError),
}

/// A simplex, stored as a strictly increasing list of vertex ids. Its degree
/// is the vertex count minus one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<u32>,
}

impl Simplex {
    pub fn new(vertices: Vec<u32>) -> Result<Self, ComplexError> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplexError::UnsortedVertices(vertices));
        }
        Ok(Simplex { vertices })
    }

    /// Sorts the vertex list; duplicate ids are rejected.
    pub fn from_unsorted(mut vertices: Vec<u32>) -> Result<Self, ComplexError> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(vertices));
        }
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn degree(&self) -> i64 {
        self.vertices.len() as i64 - 1
    }

    /// The codimension-one faces, in the order used by the boundary operator
    /// (face `m` omits vertex `m`).
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.vertices.len()).filter(|_| self.vertices.len() > 1).map(move |m| {
            let mut v = self.vertices.clone();
            v.remove(m);
            Simplex { vertices: v }
        })
    }

    /// Every proper nonempty face. Enumeration is exponential in the vertex
    /// count, so callers gate the input size.
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let n = self.vertices.len();
        assert!(n < 64, "face enumeration is limited to small simplices");
        let mut out = Vec::new();
        for mask in 1u64..(1 << n) - 1 {
            let v: Vec<u32> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i])
                .collect();
            out.push(Simplex { vertices: v });
        }
        out
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// One cell of a filtered complex: a simplex, its integer filtration level,
/// and an optional real birth threshold carried for display only.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub simplex: Simplex,
    pub level: i64,
    pub birth: Option<f64>,
}

/// A filtered simplicial complex: cells with integer levels, closed under
/// faces, with levels monotone along face inclusions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilteredComplex {
    cells: Vec<Cell>,
}

/// A named violation of the filtered-complex invariants; violations are data
/// returned by [`validate`], not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingFace { cell: Simplex, face: Simplex },
    NonmonotoneLevel { face: Simplex, coface: Simplex },
    DuplicateCell { simplex: Simplex },
    BirthLevelMismatch { a: Simplex, b: Simplex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingFace { cell, face } => {
                write!(f, "cell {cell} is missing its face {face}")
            }
            Violation::NonmonotoneLevel { face, coface } => {
                write!(f, "face {face} enters after its coface {coface}")
            }
            Violation::DuplicateCell { simplex } => write!(f, "duplicate cell {simplex}"),
            Violation::BirthLevelMismatch { a, b } => {
                write!(f, "levels of {a} and {b} disagree with their birth order")
            }
        }
    }
}

impl FilteredComplex {
    pub fn new(cells: Vec<Cell>) -> Self {
        FilteredComplex { cells }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// The distinct levels, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let mut ls: Vec<i64> = self.cells.iter().map(|c| c.level).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    pub fn max_degree(&self) -> i64 {
        self.cells.iter().map(|c| c.simplex.degree()).max().unwrap_or(-1)
    }

    /// The sub-complex of cells with level at most `p`.
    pub fn at_level(&self, p: i64) -> FilteredComplex {
        FilteredComplex { cells: self.cells.iter().filter(|c| c.level <= p).cloned().collect() }
    }
}

/// All invariant violations of the complex; an empty list means valid.
pub fn validate(fc: &FilteredComplex) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut index: HashMap<&Simplex, usize> = HashMap::new();
    for (i, cell) in fc.cells().iter().enumerate() {
        if index.insert(&cell.simplex, i).is_some() {
            violations.push(Violation::DuplicateCell { simplex: cell.simplex.clone() });
        }
    }
    for cell in fc.cells() {
        for face in cell.simplex.facets() {
            match index.get(&face) {
                None => violations.push(Violation::MissingFace {
                    cell: cell.simplex.clone(),
                    face,
                }),
                Some(&i) => {
                    if fc.cells[i].level > cell.level {
                        violations.push(Violation::NonmonotoneLevel {
                            face: face.clone(),
                            coface: cell.simplex.clone(),
                        });
                    }
                }
            }
        }
    }
    // level order must refine birth order when births are present
    let with_births: Vec<&Cell> = fc.cells().iter().filter(|c| c.birth.is_some()).collect();
    for (i, a) in with_births.iter().enumerate() {
        for b in &with_births[i + 1..] {
            let (ba, bb) = (a.birth.unwrap(), b.birth.unwrap());
            let bad = (ba == bb && a.level != b.level)
                || (ba < bb && a.level > b.level)
                || (ba > bb && a.level < b.level);
            if bad {
                violations.push(Violation::BirthLevelMismatch {
                    a: a.simplex.clone(),
                    b: b.simplex.clone(),
                });
            }
        }
    }
    violations
}

fn ensure_valid(fc: &FilteredComplex) -> Result<(), ComplexError> {
    let violations = validate(fc);
    match violations.first() {
        None => Ok(()),
        Some(first) => Err(ComplexError::Invalid(violations.len(), first.clone())),
    }
}

/// true iff no two cells share both degree and level.
pub fn is_nondegenerate(fc: &FilteredComplex) -> bool {
    let mut seen = std::collections::HashSet::new();
    fc.cells().iter().all(|c| seen.insert((c.simplex.degree(), c.level)))
}

/// Which of the two adapted-basis orderings to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingMode {
    /// Degree nondecreasing, level nondecreasing within a degree.
    DegreeMajor,
    /// Level nondecreasing, degree nondecreasing within a level.
    LevelMajor,
}

/// One element of an adapted basis: its position, pure degree, filtration
/// level, display label, and optional birth threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub index: usize,
    pub degree: i64,
    pub level: i64,
    pub birth: Option<f64>,
    pub label: String,
}

/// An ordered pure-degree basis spanning every filtration stage; produced by
/// [`adapted_basis`] from a valid complex, or synthetically by
/// [`MatrixComplex`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedBasis {
    mode: OrderingMode,
    elements: Vec<BasisElement>,
    /// position -> index into the owning complex's cell list
    cell_order: Vec<usize>,
    partition: Option<DegreePartition>,
}

impl AdaptedBasis {
    pub fn mode(&self) -> OrderingMode {
        self.mode
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The induced degree partition; present in degree-major mode only.
    pub fn partition(&self) -> Option<&DegreePartition> {
        self.partition.as_ref()
    }
}

/// Deterministic adapted ordering of a valid complex, with lexicographic
/// tie-break on vertex lists.
pub fn adapted_basis(fc: &FilteredComplex, mode: OrderingMode) -> Result<AdaptedBasis, ComplexError> {
    ensure_valid(fc)?;
    let mut order: Vec<usize> = (0..fc.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&fc.cells[a], &fc.cells[b]);
        let key_a = (ca.simplex.degree(), ca.level);
        let key_b = (cb.simplex.degree(), cb.level);
        let primary = match mode {
            OrderingMode::DegreeMajor => key_a.cmp(&key_b),
            OrderingMode::LevelMajor => (ca.level, ca.simplex.degree()).cmp(&(cb.level, cb.simplex.degree())),
        };
        primary.then_with(|| ca.simplex.vertices().cmp(cb.simplex.vertices()))
    });
    let elements: Vec<BasisElement> = order
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let cell = &fc.cells[i];
            BasisElement {
                index: pos,
                degree: cell.simplex.degree(),
                level: cell.level,
                birth: cell.birth,
                label: cell.simplex.to_string(),
            }
        })
        .collect();
    let partition = match mode {
        OrderingMode::DegreeMajor => {
            let mut blocks: BTreeMap<i64, usize> = BTreeMap::new();
            for e in &elements {
                *blocks.entry(e.degree).or_insert(0) += 1;
            }
            Some(DegreePartition::new(blocks.into_iter().collect())?)
        }
        OrderingMode::LevelMajor => None,
    };
    Ok(AdaptedBasis { mode, elements, cell_order: order, partition })
}

/// The signed incidence matrix of the boundary operator relative to an
/// adapted basis: entry `(i, j)` is the coefficient of element `i` in the
/// alternating-sign simplicial boundary of element `j`. The result is
/// verified to square to zero.
pub fn boundary_matrix(
    fc: &FilteredComplex,
    basis: &AdaptedBasis,
    field: FieldSpec,
) -> Result<ColumnMatrix, ComplexError> {
    if basis.cell_order.len() != fc.len() {
        return Err(ComplexError::ForeignBasis);
    }
    let mut position: HashMap<&Simplex, usize> = HashMap::new();
    for (pos, &i) in basis.cell_order.iter().enumerate() {
        let cell = &fc.cells[i];
        let element = &basis.elements[pos];
        if element.label != cell.simplex.to_string() || element.level != cell.level {
            return Err(ComplexError::ForeignBasis);
        }
        position.insert(&cell.simplex, pos);
    }
    let n = fc.len();
    let mut entries = Vec::new();
    for (col, &i) in basis.cell_order.iter().enumerate() {
        let simplex = &fc.cells[i].simplex;
        let mut sign = field.one();
        for face in simplex.facets() {
            let &row = position.get(&face).ok_or(ComplexError::ForeignBasis)?;
            entries.push((row, col, sign.clone()));
            sign = sign.neg();
        }
    }
    let d = ColumnMatrix::from_entries(n, n, field, entries)?;
    let square = d.mul(&d)?;
    if !square.is_zero() {
        return Err(MatrixError::NotDifferential.into());
    }
    Ok(d)
}

/// Degree-major boundary matrix wrapped with its degree partition; the
/// block-superdiagonal structure is verified on construction.
pub fn graded_boundary_matrix(
    fc: &FilteredComplex,
    basis: &AdaptedBasis,
    field: FieldSpec,
) -> Result<GradedDifferential, ComplexError> {
    let partition = basis.partition().cloned().ok_or(ComplexError::NotDegreeMajor)?;
    let d = boundary_matrix(fc, basis, field)?;
    Ok(GradedDifferential::new(d, partition)?)
}

/// An abstract filtered chain complex represented by a graded differential:
/// generator `i` (1-based label `g<i>`) has the degree of index `i` in the
/// partition and level `i`, so each level adds exactly one generator and the
/// complex is nondegenerate. The level-`p` stage is the upper-left `p x p`
/// submatrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixComplex {
    differential: GradedDifferential,
    elements: Vec<BasisElement>,
}

/// Realize a graded differential as the colimit boundary of a nondegenerate
/// filtered chain complex with synthetic generators.
pub fn complex_from_matrix(d: &GradedDifferential) -> MatrixComplex {
    let elements = (0..d.dim())
        .map(|i| BasisElement {
            index: i,
            degree: d.partition().degree_of_index(i).expect("index covered"),
            level: (i + 1) as i64,
            birth: None,
            label: format!("g{}", i + 1),
        })
        .collect();
    MatrixComplex { differential: d.clone(), elements }
}

impl MatrixComplex {
    /// The colimit boundary matrix; `complex_from_matrix` followed by
    /// `boundary` is the identity.
    pub fn boundary(&self) -> &GradedDifferential {
        &self.differential
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<i64> {
        1..=(self.dim() as i64)
    }

    /// The complex at level `p`: the upper-left `clamp(p, 0, m)` block.
    pub fn level_complex(&self, p: i64) -> GradedDifferential {
        let clamped = p.clamp(0, self.dim() as i64) as usize;
        self.differential.upper_left(clamped).expect("clamped in range")
    }

    /// One new generator per level makes degree/level pairs unique.
    pub fn is_nondegenerate(&self) -> bool {
        true
    }
}

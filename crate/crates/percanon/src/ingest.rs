//! Point-cloud parsing and the Vietoris-Rips filtration.
//!
//! Coordinates are parsed as exact rationals so that squared distances, and
//! therefore level assignment, compare exactly; the real birth values carried
//! for display are derived afterwards.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::complex::{FilteredComplex, Simplex};
use crate::field::{decimal_to_rational, FieldError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("line {line}: row has {got} coordinates, expected {expected}")]
    RaggedRow { line: usize, got: usize, expected: usize },
    #[error("line {line}: bad coordinate `{token}`")]
    BadCoordinate { line: usize, token: String },
    #[error("negative radius")]
    NegativeRadius,
    #[error("{0}")]
    Field(#[from] FieldError),
}

/// A finite set of points with a common coordinate dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Vec<BigRational>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<BigRational>>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> BigRational {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }
}

/// Parse whitespace- or comma-separated rows of equal arity; `#` starts a
/// comment.
pub fn parse_points(text: &str) -> Result<PointCloud, IngestError> {
    let mut points: Vec<Vec<BigRational>> = Vec::new();
    let mut expected: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<BigRational> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                decimal_to_rational(t)
                    .map_err(|_| IngestError::BadCoordinate { line: line_no, token: t.into() })
            })
            .collect::<Result<_, _>>()?;
        if row.is_empty() {
            continue;
        }
        match expected {
            None => expected = Some(row.len()),
            Some(e) if e != row.len() => {
                return Err(IngestError::RaggedRow { line: line_no, got: row.len(), expected: e })
            }
            _ => {}
        }
        points.push(row);
    }
    Ok(PointCloud::new(points))
}

/// Build the Vietoris-Rips filtration: a simplex on up to `max_dim + 1`
/// vertices enters when every pairwise distance is at most `2 * max_radius`,
/// with birth value half its diameter (vertices at 0). Distinct births map to
/// contiguous integer levels starting at 1; equal births share a level.
pub fn vietoris_rips(
    pc: &PointCloud,
    max_dim: usize,
    max_radius: &BigRational,
) -> Result<FilteredComplex, IngestError> {
    if max_radius < &BigRational::zero() {
        return Err(IngestError::NegativeRadius);
    }
    let n = pc.len();
    // squared diameter threshold for (2 * max_radius)
    let two_r = max_radius + max_radius;
    let sq_bound = &two_r * &two_r;

    let mut sq = vec![vec![BigRational::zero(); n]; n];
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in (i + 1)..n {
            let d = pc.squared_distance(i, j);
            if d <= sq_bound {
                neighbors[i].push(j);
            }
            sq[j][i] = d.clone();
            sq[i][j] = d;
        }
    }

    // grow cliques vertex by vertex; candidates stay sorted ascending
    let mut found: Vec<(Vec<usize>, BigRational)> = Vec::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>, BigRational)> = (0..n)
        .rev()
        .map(|v| (vec![v], neighbors[v].clone(), BigRational::zero()))
        .collect();
    while let Some((verts, cands, diam)) = stack.pop() {
        found.push((verts.clone(), diam.clone()));
        if verts.len() == max_dim + 1 {
            continue;
        }
        for (pos, &c) in cands.iter().enumerate() {
            let mut new_diam = diam.clone();
            for &v in &verts {
                if sq[v][c] > new_diam {
                    new_diam = sq[v][c].clone();
                }
            }
            let new_cands: Vec<usize> =
                cands[pos + 1..].iter().copied().filter(|&x| neighbors[c].contains(&x)).collect();
            let mut new_verts = verts.clone();
            new_verts.push(c);
            stack.push((new_verts, new_cands, new_diam));
        }
    }

    // rank distinct squared diameters -> levels from 1
    let mut distinct: Vec<BigRational> = found.iter().map(|(_, d)| d.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let level_of: BTreeMap<&BigRational, i64> =
        distinct.iter().enumerate().map(|(i, d)| (d, (i + 1) as i64)).collect();

    let mut cells = Vec::new();
    for (verts, diam) in &found {
        let simplex = Simplex::from_unsorted(verts.iter().map(|&v| v as u32).collect())
            .expect("vertex ids are distinct");
        let birth = diam.to_f64().map(|d| d.sqrt() / 2.0);
        cells.push(crate::complex::Cell { simplex, level: level_of[diam], birth });
    }
    cells.sort_by(|a, b| {
        (a.level, a.simplex.degree())
            .cmp(&(b.level, b.simplex.degree()))
            .then_with(|| a.simplex.vertices().cmp(b.simplex.vertices()))
    });
    Ok(FilteredComplex::new(cells))
}

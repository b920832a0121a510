//! Shared fixtures and random generators for the integration suites.
#![allow(dead_code)]

use std::path::PathBuf;

use num_rational::BigRational;
use rand::Rng;

use percanon::complex::FilteredComplex;
use percanon::field::FieldSpec;
use percanon::ingest::{vietoris_rips, PointCloud};
use percanon::matrix::{ColumnMatrix, DegreePartition, GradedDifferential};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
}

pub fn fq() -> FieldSpec {
    FieldSpec::Rationals
}

pub fn f2() -> FieldSpec {
    FieldSpec::prime_field(2).unwrap()
}

pub fn f5() -> FieldSpec {
    FieldSpec::prime_field(5).unwrap()
}

pub fn dense(field: FieldSpec, rows: &[Vec<i64>]) -> ColumnMatrix {
    ColumnMatrix::from_dense_i64(field, rows)
}

/// The 7x7 degree-major boundary matrix of the triangle filtration.
pub fn triangle_degree_major(field: FieldSpec) -> GradedDifferential {
    let d = dense(
        field,
        &[
            vec![0, 0, 0, -1, 0, -1, 0],
            vec![0, 0, 0, 1, -1, 0, 0],
            vec![0, 0, 0, 0, 1, 1, 0],
            vec![0, 0, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 0, 0, 0, -1],
            vec![0, 0, 0, 0, 0, 0, 0],
        ],
    );
    let p = DegreePartition::new(vec![(0, 3), (1, 3), (2, 1)]).unwrap();
    GradedDifferential::new(d, p).unwrap()
}

fn random_nonzero(rng: &mut impl Rng, field: FieldSpec) -> percanon::field::Scalar {
    match field {
        FieldSpec::Rationals => {
            let choices = [-3i64, -2, -1, 1, 2, 3];
            field.from_integer(choices[rng.gen_range(0..choices.len())])
        }
        FieldSpec::PrimeField(p) => field.from_integer(rng.gen_range(1..p as i64)),
    }
}

fn random_scalar(rng: &mut impl Rng, field: FieldSpec) -> percanon::field::Scalar {
    match field {
        FieldSpec::Rationals => field.from_integer(rng.gen_range(-2..=2)),
        FieldSpec::PrimeField(p) => field.from_integer(rng.gen_range(0..p as i64)),
    }
}

/// A random degree partition with contiguous degrees starting at 0 and total
/// size between 1 and `max_total`.
pub fn random_partition(rng: &mut impl Rng, max_total: usize) -> DegreePartition {
    loop {
        let nblocks = rng.gen_range(1..=4usize);
        let mut blocks = Vec::new();
        let mut total = 0;
        for deg in 0..nblocks {
            let remaining = max_total.saturating_sub(total);
            let size = rng.gen_range(0..=remaining.min(5));
            blocks.push((deg as i64, size));
            total += size;
        }
        if total > 0 {
            return DegreePartition::new(blocks).unwrap();
        }
    }
}

/// A random Boolean quasi-monomial block-superdiagonal differential for the
/// partition: a partial matching between each degree block and the next.
pub fn random_graded_almost_jordan(
    rng: &mut impl Rng,
    partition: &DegreePartition,
    field: FieldSpec,
) -> ColumnMatrix {
    let total = partition.total();
    let blocks = partition.blocks();
    let mut offsets = Vec::new();
    let mut acc = 0;
    for (_, size) in blocks {
        offsets.push(acc);
        acc += size;
    }
    let mut entries = Vec::new();
    // an index may serve as a creator or a destroyer but never both,
    // otherwise the square of the matrix picks up a chain
    let mut used = std::collections::HashSet::new();
    for w in 0..blocks.len().saturating_sub(1) {
        if blocks[w].0 + 1 != blocks[w + 1].0 {
            continue;
        }
        let mut rows: Vec<usize> = (0..blocks[w].1)
            .map(|i| offsets[w] + i)
            .filter(|i| !used.contains(i))
            .collect();
        let mut cols: Vec<usize> = (0..blocks[w + 1].1).map(|i| offsets[w + 1] + i).collect();
        use rand::seq::SliceRandom;
        rows.shuffle(rng);
        cols.shuffle(rng);
        let k = rng.gen_range(0..=rows.len().min(cols.len()));
        for i in 0..k {
            entries.push((rows[i], cols[i], field.one()));
            used.insert(rows[i]);
            used.insert(cols[i]);
        }
    }
    ColumnMatrix::from_entries(total, total, field, entries).unwrap()
}

/// A random block-diagonal upper-triangular invertible matrix for the
/// partition; unit diagonal when `unipotent`.
pub fn random_block_triangular(
    rng: &mut impl Rng,
    partition: &DegreePartition,
    field: FieldSpec,
    unipotent: bool,
) -> ColumnMatrix {
    let total = partition.total();
    let mut entries = Vec::new();
    let mut offset = 0;
    for (_, size) in partition.blocks() {
        for c in offset..offset + size {
            let diag = if unipotent { field.one() } else { random_nonzero(rng, field) };
            entries.push((c, c, diag));
            for r in offset..c {
                let v = random_scalar(rng, field);
                if !v.is_zero() {
                    entries.push((r, c, v));
                }
            }
        }
        offset += size;
    }
    ColumnMatrix::from_entries(total, total, field, entries).unwrap()
}

/// A random graded differential built as `B C B^-1` from a random canonical
/// form `C` and a random block triangular `B`; returns the pair so tests can
/// assert the reduction recovers exactly `C`.
pub fn random_graded_differential(
    rng: &mut impl Rng,
    field: FieldSpec,
    max_size: usize,
) -> (GradedDifferential, ColumnMatrix) {
    let partition = random_partition(rng, max_size);
    let canon = random_graded_almost_jordan(rng, &partition, field);
    let b = random_block_triangular(rng, &partition, field, false);
    let d = b
        .mul(&canon)
        .unwrap()
        .mul(&b.triangular_inverse().unwrap())
        .unwrap();
    (GradedDifferential::new(d, partition).unwrap(), canon)
}

/// A random point cloud on a small integer grid (ties in distances are
/// frequent on purpose).
pub fn random_point_cloud(rng: &mut impl Rng, max_points: usize) -> PointCloud {
    let n = rng.gen_range(1..=max_points);
    let points = (0..n)
        .map(|_| {
            (0..2)
                .map(|_| BigRational::from_integer(rng.gen_range(0..5).into()))
                .collect()
        })
        .collect();
    PointCloud::new(points)
}

/// A random Rips filtration of at most `max_points` grid points.
pub fn random_rips_complex(rng: &mut impl Rng, max_points: usize) -> FilteredComplex {
    let pc = random_point_cloud(rng, max_points);
    let radius = BigRational::new(rng.gen_range(1..8).into(), 2.into());
    vietoris_rips(&pc, 2, &radius).unwrap()
}

/// Run the CLI in-process, capturing stdout and stderr.
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["percanon".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = percanon::cli::run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

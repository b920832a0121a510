//! Creator/destroyer pairing, barcodes, Betti numbers, and the full
//! Krull-Schmidt summand listing, all read off a persistence canonical form.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::complex::BasisElement;
use crate::matrix::ColumnMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarcodeError {
    #[error("canonical form is not a Boolean quasi-monomial differential")]
    MalformedCanonicalForm,
    #[error("basis metadata covers {basis} indices but the matrix has {dim}")]
    BasisMismatch { basis: usize, dim: usize },
    #[error("pair ({creator}, {destroyer}) violates level or degree ordering")]
    BadPair { creator: usize, destroyer: usize },
}

/// The combinatorial content of a canonical form: creator/destroyer index
/// pairs (0-based) plus unpaired singleton indices; together they partition
/// the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub singletons: Vec<usize>,
}

/// A degree-labelled half-open interval `[birth, death)` of levels, with
/// `None` standing for an infinite death. Optional real thresholds are
/// carried for display only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bar {
    pub degree: i64,
    pub birth_level: i64,
    pub death_level: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birth_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub death_value: Option<f64>,
}

impl Bar {
    pub fn contains(&self, p: i64) -> bool {
        self.birth_level <= p && self.death_level.is_none_or(|d| p < d)
    }

    pub fn interval_label(&self) -> String {
        match self.death_level {
            Some(d) => format!("[{},{})", self.birth_level, d),
            None => format!("[{},∞)", self.birth_level),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummandKind {
    /// A singleton generator; its interval is infinite.
    J,
    /// A creator/destroyer pair; its interval is finite (possibly empty).
    K,
}

/// One indecomposable summand of the Krull-Schmidt decomposition, labelled
/// `[birth,death)_degree` with its member basis elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Summand {
    pub kind: SummandKind,
    pub degree: i64,
    pub birth_level: i64,
    pub death_level: Option<i64>,
    pub members: Vec<usize>,
    pub label: String,
}

/// Read the pairing off a Boolean quasi-monomial differential: one pair per
/// nonzero entry `(creator row, destroyer column)`, every other index a
/// singleton. Level and degree consistency against the basis metadata is
/// verified.
pub fn extract_pairing(
    dcanon: &ColumnMatrix,
    basis: &[BasisElement],
) -> Result<Pairing, BarcodeError> {
    if !crate::matrix::is_almost_jordan(dcanon) {
        return Err(BarcodeError::MalformedCanonicalForm);
    }
    if basis.len() != dcanon.rows() {
        return Err(BarcodeError::BasisMismatch { basis: basis.len(), dim: dcanon.rows() });
    }
    let mut paired = vec![false; basis.len()];
    let mut pairs = Vec::new();
    for (creator, destroyer, _) in dcanon.entries() {
        pairs.push((creator, destroyer));
        paired[creator] = true;
        paired[destroyer] = true;
    }
    pairs.sort_unstable();
    for &(j, k) in &pairs {
        let good = basis[j].level <= basis[k].level && basis[k].degree == basis[j].degree + 1;
        if !good {
            return Err(BarcodeError::BadPair { creator: j, destroyer: k });
        }
    }
    let singletons = (0..basis.len()).filter(|&i| !paired[i]).collect();
    Ok(Pairing { pairs, singletons })
}

/// Interval rule: a pair `(j, k)` gives `[level(j), level(k))` in the degree
/// of `j`; a singleton `s` gives `[level(s), ∞)` in its own degree. Pairs
/// born and dying at one level are dropped unless `drop_empty` is false.
/// Bars sort by `(degree, birth, death)` with infinite deaths first.
pub fn barcodes(pairing: &Pairing, basis: &[BasisElement], drop_empty: bool) -> Vec<Bar> {
    let mut bars = Vec::new();
    for &(j, k) in &pairing.pairs {
        let (creator, destroyer) = (&basis[j], &basis[k]);
        if drop_empty && creator.level == destroyer.level {
            continue;
        }
        bars.push(Bar {
            degree: creator.degree,
            birth_level: creator.level,
            death_level: Some(destroyer.level),
            birth_value: creator.birth,
            death_value: destroyer.birth,
        });
    }
    for &s in &pairing.singletons {
        bars.push(Bar {
            degree: basis[s].degree,
            birth_level: basis[s].level,
            death_level: None,
            birth_value: basis[s].birth,
            death_value: None,
        });
    }
    bars.sort_by_key(|b| (b.degree, b.birth_level, b.death_level));
    bars
}

/// Number of degree-`n` bars whose interval contains level `p`.
pub fn betti(bars: &[Bar], n: i64, p: i64) -> usize {
    bars.iter().filter(|b| b.degree == n && b.contains(p)).count()
}

/// The full summand listing: every pair and singleton, including pairs with
/// empty intervals, labelled and carrying its member elements. Covers every
/// basis index exactly once.
pub fn summands(pairing: &Pairing, basis: &[BasisElement]) -> Vec<Summand> {
    let mut out = Vec::new();
    for &(j, k) in &pairing.pairs {
        let (birth, death) = (basis[j].level, basis[k].level);
        out.push(Summand {
            kind: SummandKind::K,
            degree: basis[j].degree,
            birth_level: birth,
            death_level: Some(death),
            members: vec![j, k],
            label: format!("[{},{})_{}", birth, death, basis[j].degree),
        });
    }
    for &s in &pairing.singletons {
        out.push(Summand {
            kind: SummandKind::J,
            degree: basis[s].degree,
            birth_level: basis[s].level,
            death_level: None,
            members: vec![s],
            label: format!("[{},∞)_{}", basis[s].level, basis[s].degree),
        });
    }
    out.sort_by_key(|s| (s.degree, s.birth_level, s.death_level, s.members.clone()));
    out
}

/// JSON form of a barcode list: an array of records with `degree`,
/// `birth_level`, `death_level` (null when infinite), and the optional real
/// thresholds.
pub fn bars_to_json(bars: &[Bar]) -> String {
    serde_json::to_string_pretty(bars).expect("bars serialize")
}

/// JSON form of a summand listing; members render as `label@level`.
pub fn summands_to_json(listing: &[Summand], basis: &[BasisElement]) -> String {
    let items: Vec<serde_json::Value> = listing
        .iter()
        .map(|sm| {
            let members: Vec<String> = sm
                .members
                .iter()
                .map(|&i| format!("{}@{}", basis[i].label, basis[i].level))
                .collect();
            serde_json::json!({
                "label": sm.label,
                "kind": match sm.kind {
                    SummandKind::J => "J",
                    SummandKind::K => "K",
                },
                "degree": sm.degree,
                "birth_level": sm.birth_level,
                "death_level": sm.death_level,
                "members": members,
            })
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("summands serialize")
}

/// ASCII barcode diagram: one row per bar, a `-` per level the bar covers,
/// `>` marking an infinite bar, grouped by degree. When birth values are
/// present a legend maps levels back to thresholds.
pub fn render_text(bars: &[Bar], basis: &[BasisElement]) -> String {
    let mut out = String::new();
    if bars.is_empty() {
        out.push_str("(no bars)\n");
        return out;
    }
    let min_level = bars.iter().map(|b| b.birth_level).min().unwrap();
    let max_level = basis
        .iter()
        .map(|e| e.level)
        .chain(bars.iter().filter_map(|b| b.death_level))
        .chain(bars.iter().map(|b| b.birth_level))
        .max()
        .unwrap();
    let width = (max_level - min_level + 1) as usize;
    let label_width =
        bars.iter().map(|b| b.interval_label().chars().count()).max().unwrap();
    let mut degree = None;
    for bar in bars {
        if degree != Some(bar.degree) {
            degree = Some(bar.degree);
            let _ = writeln!(out, "degree {}", bar.degree);
        }
        let mut row = vec![b' '; width];
        let from = (bar.birth_level - min_level) as usize;
        let to = match bar.death_level {
            Some(d) => (d - min_level) as usize,
            None => width,
        };
        for slot in row.iter_mut().take(to).skip(from) {
            *slot = b'-';
        }
        let mut line = String::from_utf8(row).expect("ascii");
        if bar.death_level.is_none() {
            line.push('>');
        }
        let _ = writeln!(
            out,
            "  {:label_width$}  {}",
            bar.interval_label(),
            line.trim_end()
        );
    }
    let _ = writeln!(out, "levels {min_level}..{max_level}");
    let mut legend: Vec<(i64, f64)> = basis
        .iter()
        .filter_map(|e| e.birth.map(|b| (e.level, b)))
        .collect();
    legend.sort_by(|a, b| a.partial_cmp(b).expect("finite births"));
    legend.dedup();
    for (level, birth) in legend {
        let _ = writeln!(out, "  level {level}: r = {birth}");
    }
    out
}

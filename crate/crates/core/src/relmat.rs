//! Relation matrices for the three five- and six-letter classes, exact ranks
//! and pivot complements.
//!
//! Rows are built from the class relations after Tier-1 reduction; nothing is
//! transcribed except the reference matrices kept as diff targets.

use std::io::Write;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::reducer::{class_rules, rref, GeneratorInstance, GeneratorType, ReduceError};
use crate::trpoly::{Monomial, TracePolynomial, Q};
use crate::word::CyclicKey;

#[derive(Debug, Error)]
pub enum RelmatError {
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("construction of {family} failed: {detail}")]
    Construction { family: &'static str, detail: String },
    #[error("{0} is not a column label")]
    UnknownLabel(String),
    #[error("unknown family {0:?} (expected five5, six5 or six6)")]
    UnknownFamily(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    FiveInFive,
    SixInFive,
    SixInSix,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::FiveInFive, Family::SixInFive, Family::SixInSix];

    pub fn name(self) -> &'static str {
        match self {
            Family::FiveInFive => "five5",
            Family::SixInFive => "six5",
            Family::SixInSix => "six6",
        }
    }

    pub fn from_name(s: &str) -> Result<Family, RelmatError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| RelmatError::UnknownFamily(s.to_string()))
    }

    pub fn shape(self) -> (usize, usize) {
        match self {
            Family::FiveInFive => (12, 24),
            Family::SixInFive => (5, 12),
            Family::SixInSix => (120, 120),
        }
    }

    pub fn expected_rank(self) -> usize {
        match self {
            Family::FiveInFive => 12,
            Family::SixInFive => 5,
            Family::SixInSix => 105,
        }
    }

    fn pattern(self) -> Vec<u32> {
        match self {
            Family::FiveInFive => vec![1; 5],
            Family::SixInFive => vec![1, 1, 1, 1, 2],
            Family::SixInSix => vec![1; 6],
        }
    }
}

/// Integer matrix with one relation per row. Row i reads
/// Σ_j entries[i][j]·t(column j) = rhs[i], where rhs has lower weight.
#[derive(Debug, Clone)]
pub struct RelationMatrix {
    pub family: Family,
    pub entries: Vec<Vec<BigInt>>,
    pub row_provenance: Vec<String>,
    pub column_labels: Vec<GeneratorInstance>,
    pub rhs: Vec<TracePolynomial>,
}

impl RelationMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.column_labels.len()
    }

    pub fn column_keys(&self) -> Vec<CyclicKey> {
        self.column_labels.iter().map(|g| g.key.clone()).collect()
    }

    /// Linear side of row i as a polynomial in the column symbols.
    pub fn row_polynomial(&self, i: usize) -> TracePolynomial {
        TracePolynomial::from_terms(self.entries[i].iter().zip(&self.column_labels).filter_map(
            |(e, g)| {
                if e.is_zero() {
                    return None;
                }
                Some((Monomial::from_keys(vec![g.key.clone()]), Q::from_integer(e.clone())))
            },
        ))
    }

    pub fn entries_in_unit_range(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.abs() <= BigInt::one())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), RelmatError> {
        let header: Vec<String> = self.column_labels.iter().map(|g| format!("\"{}\"", g.key)).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Reference orders of the column lists.
fn five5_columns() -> Vec<CyclicKey> {
    // the 24 words t(1, σ) with σ a permutation of 2..5, lexicographic
    let mut out = Vec::new();
    for p in crate::generators::permutations(&[2, 3, 4, 5]) {
        let mut u = vec![1];
        u.extend(p.iter().map(|&x| x as i32));
        out.push(CyclicKey::from_units(&u));
    }
    out
}

pub const FIXED12: [[i32; 5]; 12] = [
    [1, 2, 4, 3, -5],
    [1, 2, 3, 4, -5],
    [1, 3, 4, 2, -5],
    [2, 1, 4, 3, -5],
    [2, 1, 3, 4, -5],
    [2, 3, 4, 1, -5],
    [4, 1, 3, 2, -5],
    [4, 2, 3, 1, -5],
    [4, 1, 2, 3, -5],
    [3, 1, 2, 4, -5],
    [3, 1, 4, 2, -5],
    [3, 2, 4, 1, -5],
];

fn six5_columns() -> Vec<CyclicKey> {
    FIXED12.iter().map(|u| CyclicKey::from_units(u)).collect()
}

fn six6_columns() -> Vec<CyclicKey> {
    crate::generators::permutations(&[1, 2, 3, 4, 5])
        .into_iter()
        .map(|p| {
            let mut u: Vec<i32> = p.iter().map(|&x| x as i32).collect();
            u.push(6);
            CyclicKey::from_units(&u)
        })
        .collect()
}

fn family_columns(f: Family) -> Vec<CyclicKey> {
    match f {
        Family::FiveInFive => five5_columns(),
        Family::SixInFive => six5_columns(),
        Family::SixInSix => six6_columns(),
    }
}

/// Scale a rational row to coprime integers, keeping its sign.
fn integer_content(row: &[Q]) -> Q {
    let mut den = BigInt::one();
    for v in row {
        den = den.lcm(v.denom());
    }
    let mut g = BigInt::zero();
    for v in row {
        let n = v.numer() * (&den / v.denom());
        g = g.gcd(&n);
    }
    if g.is_zero() {
        Q::one()
    } else {
        Q::new(g, den)
    }
}

/// Row and rest over arbitrary class columns, reordered to `cols`.
fn reorder(row: &[Q], from: &[CyclicKey], cols: &[CyclicKey]) -> Option<Vec<Q>> {
    let mut out = vec![Q::zero(); cols.len()];
    for (v, k) in row.iter().zip(from) {
        if v.is_zero() {
            continue;
        }
        let j = cols.iter().position(|c| c == k)?;
        out[j] = v.clone();
    }
    Some(out)
}

fn build(f: Family) -> Result<RelationMatrix, RelmatError> {
    let fail = |detail: String| RelmatError::Construction {
        family: f.name(),
        detail,
    };
    let class = class_rules(&f.pattern())?;
    let cols = family_columns(f);
    let mut raw: Vec<(String, Vec<Q>, TracePolynomial)> = Vec::new();
    match f {
        Family::FiveInFive | Family::SixInSix => {
            for rel in &class.relations {
                let row = reorder(&rel.row, &class.columns, &cols)
                    .ok_or_else(|| fail(format!("{} leaves the column set", rel.label)))?;
                raw.push((rel.label.clone(), row, rel.rest.clone()));
            }
        }
        Family::SixInFive => {
            // order relations eliminate the twelve columns outside the fixed list
            let (order, rs): (Vec<_>, Vec<_>) =
                class.relations.iter().partition(|r| r.label.starts_with("order"));
            let outside: Vec<usize> = (0..class.columns.len())
                .filter(|&j| !cols.contains(&class.columns[j]))
                .collect();
            let inside: Vec<usize> = cols
                .iter()
                .map(|c| class.columns.iter().position(|k| k == c).unwrap())
                .collect();
            let perm: Vec<usize> = outside.iter().chain(&inside).copied().collect();
            let no = order.len();
            let mut m: Vec<Vec<Q>> = order
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut v: Vec<Q> = perm.iter().map(|&j| r.row[j].clone()).collect();
                    v.extend((0..no).map(|k| if k == i { Q::one() } else { Q::zero() }));
                    v
                })
                .collect();
            let pivots = rref(&mut m, perm.len());
            if pivots != (0..outside.len()).collect::<Vec<_>>() {
                return Err(fail("order relations do not cover the non-fixed columns".into()));
            }
            for r in rs {
                let mut row: Vec<Q> = perm.iter().map(|&j| r.row[j].clone()).collect();
                let mut rest = r.rest.clone();
                for (p, prow) in m.iter().enumerate().take(outside.len()) {
                    let c = row[p].clone();
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in row.iter_mut().zip(prow) {
                        *x -= &c * y;
                    }
                    for (k, rel) in order.iter().enumerate() {
                        let w = &prow[perm.len() + k];
                        if !w.is_zero() {
                            rest.add_scaled(&rel.rest, &-(&c * w));
                        }
                    }
                }
                raw.push((r.label.clone(), row[outside.len()..perm.len()].to_vec(), rest));
            }
        }
    }
    let (nr, nc) = f.shape();
    if raw.len() != nr || cols.len() != nc {
        return Err(fail(format!("built {}x{}", raw.len(), cols.len())));
    }
    let mut entries = Vec::with_capacity(nr);
    let mut rhs = Vec::with_capacity(nr);
    let mut prov = Vec::with_capacity(nr);
    for (label, row, rest) in raw {
        let c = integer_content(&row);
        let ints: Vec<BigInt> = row
            .iter()
            .map(|v| {
                let s = v / &c;
                debug_assert!(s.is_integer());
                s.to_integer()
            })
            .collect();
        entries.push(ints);
        rhs.push(rest.scale(&-(Q::one() / c)));
        prov.push(label);
    }
    let ty = class.ty;
    Ok(RelationMatrix {
        family: f,
        entries,
        row_provenance: prov,
        column_labels: cols.into_iter().map(|key| GeneratorInstance { ty, key }).collect(),
        rhs,
    })
}

/// The relation matrix of a family, built once.
pub fn build_relation_matrix(f: Family) -> Result<Arc<RelationMatrix>, RelmatError> {
    static CELLS: [OnceLock<Arc<RelationMatrix>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let cell = &CELLS[f as usize];
    if let Some(m) = cell.get() {
        return Ok(m.clone());
    }
    let m = Arc::new(build(f)?);
    Ok(cell.get_or_init(|| m).clone())
}

/// Fraction-free elimination; returns pivot columns (leftmost nonzero, topmost row).
pub fn bareiss_pivots(rows: &[Vec<BigInt>]) -> Vec<usize> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nc = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..nc {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let piv = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..nc {
                let v = &piv[c] * &row[j] - &row[c] * &piv[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_of(rows: &[Vec<BigInt>]) -> usize {
    bareiss_pivots(rows).len()
}

pub fn exact_rank(m: &RelationMatrix) -> usize {
    rank_of(&m.entries)
}

fn label_positions(m: &RelationMatrix, keep: &[CyclicKey]) -> Result<Vec<usize>, RelmatError> {
    keep.iter()
        .map(|k| {
            m.column_labels
                .iter()
                .position(|g| &g.key == k)
                .ok_or_else(|| RelmatError::UnknownLabel(k.to_string()))
        })
        .collect()
}

/// True iff the removed columns (the complement of `keep`) carry the full rank.
pub fn validate_complement(m: &RelationMatrix, keep: &[CyclicKey]) -> Result<bool, RelmatError> {
    let kept = label_positions(m, keep)?;
    let sub: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| !kept.contains(j))
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    Ok(rank_of(&sub) == exact_rank(m))
}

/// Columns left after removing the pivots.
pub fn pivot_complement(m: &RelationMatrix) -> Vec<CyclicKey> {
    let piv = bareiss_pivots(&m.entries);
    (0..m.cols())
        .filter(|j| !piv.contains(j))
        .map(|j| m.column_labels[j].key.clone())
        .collect()
}

fn keys<const N: usize>(rows: &[[i32; N]]) -> Vec<CyclicKey> {
    rows.iter().map(|u| CyclicKey::from_units(u)).collect()
}

/// The reference kept sets, in the column notation of each family. For six5
/// the set for the negative letter 5; the others come from transpositions (k 5).
pub fn reference_kept(f: Family) -> Vec<CyclicKey> {
    match f {
        Family::FiveInFive => keys(&[
            [1, 3, 2, 5, 4],
            [1, 3, 5, 4, 2],
            [1, 4, 2, 5, 3],
            [1, 4, 3, 2, 5],
            [1, 4, 3, 5, 2],
            [1, 4, 5, 2, 3],
            [1, 4, 5, 3, 2],
            [1, 5, 2, 4, 3],
            [1, 5, 3, 2, 4],
            [1, 5, 3, 4, 2],
            [1, 5, 4, 2, 3],
            [1, 5, 4, 3, 2],
        ]),
        Family::SixInFive => keys(&[
            [2, 3, 4, 1, -5],
            [3, 1, 2, 4, -5],
            [3, 1, 4, 2, -5],
            [3, 2, 4, 1, -5],
            [4, 1, 2, 3, -5],
            [4, 1, 3, 2, -5],
            [4, 2, 3, 1, -5],
        ]),
        Family::SixInSix => keys(&[
            [4, 3, 1, 5, 2, 6],
            [4, 3, 2, 5, 1, 6],
            [4, 3, 5, 2, 1, 6],
            [5, 2, 1, 4, 3, 6],
            [5, 2, 4, 3, 1, 6],
            [5, 3, 1, 4, 2, 6],
            [5, 3, 2, 1, 4, 6],
            [5, 3, 2, 4, 1, 6],
            [5, 3, 4, 1, 2, 6],
            [5, 3, 4, 2, 1, 6],
            [5, 4, 1, 3, 2, 6],
            [5, 4, 2, 1, 3, 6],
            [5, 4, 2, 3, 1, 6],
            [5, 4, 3, 1, 2, 6],
            [5, 4, 3, 2, 1, 6],
        ]),
    }
}

/// Reference six5 kept set with letters k and 5 exchanged, as keys over the
/// VWXYZ⁻¹ class whose negative letter is k.
pub fn six5_kept_for(k: u32) -> Vec<CyclicKey> {
    let swap = |i: u32| if i == k { 5 } else if i == 5 { k } else { i };
    reference_kept(Family::SixInFive)
        .iter()
        .map(|key| {
            let u: Vec<i32> = key
                .units()
                .iter()
                .map(|&x| swap(x.unsigned_abs()) as i32 * x.signum())
                .collect();
            CyclicKey::from_units(&u)
        })
        .collect()
}

const REFERENCE_FIVE5: [[i8; 24]; 12] = [
    [1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1],
    [0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
];

const REFERENCE_SIX5: [[i8; 12]; 5] = [
    [1, 1, 0, 1, 1, 0, -1, -1, 0, 0, -1, -1],
    [-1, 0, -1, 0, -1, 1, 1, 0, 1, -1, 0, 1],
    [-1, 1, 0, 0, -1, 1, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, -1, -1, -1, 0, -1],
    [1, 0, -1, 1, 0, -1, -1, -1, 0, 0, 0, 0],
];

/// Reference matrix of a family, where transcribed.
pub fn reference_matrix(f: Family) -> Option<Vec<Vec<BigInt>>> {
    let conv = |r: &[i8]| r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    match f {
        Family::FiveInFive => Some(REFERENCE_FIVE5.iter().map(|r| conv(r)).collect()),
        Family::SixInFive => Some(REFERENCE_SIX5.iter().map(|r| conv(r)).collect()),
        Family::SixInSix => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceDiff {
    pub family: &'static str,
    /// Built rows equal (up to sign) to some reference row.
    pub matched_rows: usize,
    pub rows: usize,
    pub reference_rank: usize,
    /// The reference rows span the same space as the built rows.
    pub same_row_space: bool,
}

/// Compare with the reference matrix up to row order and row sign. Non-fatal.
pub fn diff_reference(m: &RelationMatrix) -> Option<ReferenceDiff> {
    let reference = reference_matrix(m.family)?;
    let neg = |r: &Vec<BigInt>| r.iter().map(|x| -x).collect::<Vec<_>>();
    let matched_rows = m
        .entries
        .iter()
        .filter(|r| reference.iter().any(|p| p == *r || *p == neg(r)))
        .count();
    let reference_rank = rank_of(&reference);
    let mut both = m.entries.clone();
    both.extend(reference.iter().cloned());
    let joint = rank_of(&both);
    Some(ReferenceDiff {
        family: m.family.name(),
        matched_rows,
        rows: m.rows(),
        reference_rank,
        same_row_space: joint == exact_rank(m) && joint == reference_rank,
    })
}

/// Linear side and lower-weight side of the relations r1..r5 among the fixed
/// twelve. Both sides agree on SL(3).
pub fn six5_relation_identity(idx: usize) -> (TracePolynomial, TracePolynomial) {
    let m = build_relation_matrix(Family::SixInFive).expect("six5 relation matrix builds");
    (m.row_polynomial(idx), m.rhs[idx].clone())
}

/// Rows from the U = x_a x_b x_c source and from the X = x_a x_b, Y = x_c x_d source.
pub fn six6_source_counts(m: &RelationMatrix) -> (usize, usize) {
    let a = m
        .row_provenance
        .iter()
        .filter(|l| l.split(';').next().is_some_and(|h| h.matches('x').count() == 3))
        .count();
    (a, m.rows() - a)
}

/// Rank certificate for one family.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub family: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub expected: usize,
    pub reference_kept_valid: bool,
    pub passed: bool,
}

pub fn rank_report(f: Family) -> Result<RankReport, RelmatError> {
    let m = build_relation_matrix(f)?;
    let rank = exact_rank(&m);
    let reference_kept_valid = validate_complement(&m, &reference_kept(f))?;
    Ok(RankReport {
        family: f.name(),
        rows: m.rows(),
        cols: m.cols(),
        rank,
        expected: f.expected_rank(),
        reference_kept_valid,
        passed: rank == f.expected_rank() && reference_kept_valid,
    })
}

pub fn generator_type(f: Family) -> GeneratorType {
    match f {
        Family::FiveInFive => GeneratorType::UVWXY,
        Family::SixInFive => GeneratorType::VWXYZInv,
        Family::SixInSix => GeneratorType::UVWXYZ,
    }
}

//! The minimal generating set W_r, its size, and a representation-theoretic
//! cross-check of the count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::reducer::{kept_forms, GeneratorInstance, GeneratorType, ReduceError};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("partition {0:?} is not weakly decreasing")]
    BadPartition(Vec<u32>),
    #[error("dimension product for {0:?} is not an integer")]
    NonIntegral(Vec<u32>),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// N_r = r(396 + 65r² − 5r³ + 19r⁴ + 5r⁵)/240.
pub fn count_formula(r: u64) -> u128 {
    let r = r as i128;
    let n = r * (396 + 65 * r.pow(2) - 5 * r.pow(3) + 19 * r.pow(4) + 5 * r.pow(5));
    debug_assert_eq!(n % 240, 0);
    (n / 240) as u128
}

/// Σ over shapes of multiplier·C(r, letters).
pub fn binomial_sum(r: u64) -> u128 {
    type_counts(r).total()
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeCountRow {
    pub ty: GeneratorType,
    pub pattern: &'static str,
    pub multiplier: u64,
    pub letters: u32,
    pub count: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeCountTable {
    pub r: u64,
    pub rows: Vec<TypeCountRow>,
}

impl TypeCountTable {
    pub fn total(&self) -> u128 {
        self.rows.iter().map(|r| r.count).sum()
    }
}

pub fn type_counts(r: u64) -> TypeCountTable {
    let rows = GeneratorType::ALL
        .iter()
        .map(|&ty| TypeCountRow {
            ty,
            pattern: ty.pattern(),
            multiplier: ty.multiplier(),
            letters: ty.letters(),
            count: ty.multiplier() as u128 * binomial(r, ty.letters() as u64),
        })
        .collect();
    TypeCountTable { r, rows }
}

/// All y-element subsets of 1..r, in lexicographic order.
pub fn subsets(r: u32, y: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(y);
    fn go(start: u32, r: u32, y: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == y {
            out.push(cur.clone());
            return;
        }
        for i in start..=r {
            cur.push(i);
            go(i + 1, r, y, cur, out);
            cur.pop();
        }
    }
    go(1, r, y, &mut cur, &mut out);
    out
}

/// W_r ordered by weighted length, letter count, shape row, letter tuple and
/// then key order within the shape.
pub fn enumerate_minimal_set(r: usize) -> Result<Vec<GeneratorInstance>, GenError> {
    if r == 0 {
        return Err(GenError::ZeroRank);
    }
    let mut tagged = Vec::new();
    for ty in GeneratorType::ALL {
        let y = ty.letters() as usize;
        if y > r {
            continue;
        }
        let forms = kept_forms(ty)?;
        for subset in subsets(r as u32, y) {
            let f = |j: u32| subset[j as usize - 1];
            for (i, k) in forms.iter().enumerate() {
                let sort = (ty.weight(), y, ty.row(), subset.clone(), i);
                tagged.push((
                    sort,
                    GeneratorInstance {
                        ty,
                        key: k.relabel_monotone(&f),
                    },
                ));
            }
        }
    }
    tagged.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(tagged.into_iter().map(|(_, g)| g).collect())
}

/// The eleven highest weights carrying the generators.
pub const WEIGHTS: [&[u32]; 11] = [
    &[1],
    &[2],
    &[1, 1, 1],
    &[3],
    &[2, 2],
    &[2, 1, 1],
    &[1, 1, 1, 1, 1],
    &[3, 1, 1],
    &[2, 2, 1],
    &[3, 3],
    &[3, 1, 1, 1],
];

/// Dimension of the GL(r) irreducible with highest weight λ, or 0 when λ has
/// more than r parts.
pub fn irrep_dimension(lambda: &[u32], r: usize) -> Result<u128, GenError> {
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(GenError::BadPartition(lambda.to_vec()));
    }
    let nonzero = lambda.iter().filter(|&&p| p > 0).count();
    if nonzero > r {
        return Ok(0);
    }
    let mut l: Vec<i64> = lambda.iter().map(|&p| p as i64).collect();
    l.resize(r, 0);
    let mut acc = BigRational::one();
    for i in 0..r {
        for j in i + 1..r {
            let num = l[i] - l[j] + (j - i) as i64;
            acc *= BigRational::new(BigInt::from(num), BigInt::from((j - i) as i64));
        }
    }
    if !acc.is_integer() {
        return Err(GenError::NonIntegral(lambda.to_vec()));
    }
    acc.to_integer()
        .to_u128()
        .ok_or_else(|| GenError::NonIntegral(lambda.to_vec()))
}

#[derive(Debug, Clone, Serialize)]
pub struct DimReport {
    pub r: usize,
    pub dims: Vec<u128>,
    pub total: u128,
    pub expected: u128,
    pub passed: bool,
}

/// Σ dims over the eleven weights, minus r, against N_r.
pub fn dimension_crosscheck(r: usize) -> Result<DimReport, GenError> {
    if r == 0 {
        return Err(GenError::ZeroRank);
    }
    let dims = WEIGHTS
        .iter()
        .map(|l| irrep_dimension(l, r))
        .collect::<Result<Vec<_>, _>>()?;
    let total: u128 = dims.iter().sum();
    let expected = count_formula(r as u64);
    Ok(DimReport {
        r,
        passed: total - r as u128 == expected,
        dims,
        total,
        expected,
    })
}

/// All orderings of `items`, lexicographic when `items` is sorted.
pub fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

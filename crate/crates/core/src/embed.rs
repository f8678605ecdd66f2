//! The minimal affine embedding: traces of the W_r words on a representation,
//! plus conjugation-invariance and reduction-consistency checks.

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::generators::{enumerate_minimal_set, GenError};
use crate::identities::trial_seed;
use crate::mat3::{
    p_poly, rat, residual, sl3_exact_from_rng, sl3_numeric_from_rng,
    trace_of_word, AnyRep, MatError, Matrix3, Representation, Scalar, IDENTITY_TOL,
};
use crate::reducer::{reduce_word_to_minimal, GeneratorInstance, ReduceError};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("conjugator is singular")]
    SingularConjugator,
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone)]
pub struct EmbeddingVector<S> {
    pub coordinates: Vec<(GeneratorInstance, S)>,
}

impl<S: Scalar> EmbeddingVector<S> {
    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }

    pub fn values(&self) -> Vec<S> {
        self.coordinates.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Largest coordinate residual against another vector of the same labels.
    pub fn residual(&self, o: &Self) -> f64 {
        self.coordinates
            .iter()
            .zip(&o.coordinates)
            .map(|((_, a), (_, b))| residual(a, b))
            .fold(0.0, f64::max)
    }
}

/// Coordinate functional on a word matrix; the real one is the trace.
pub type Functional<S> = fn(&Matrix3<S>) -> S;

fn trace<S: Scalar>(m: &Matrix3<S>) -> S {
    m.trace()
}

/// Word matrices of all keys, sharing prefix products.
fn word_matrices<S: Scalar>(
    rep: &Representation<S>,
    gens: &[GeneratorInstance],
) -> Result<Vec<Matrix3<S>>, EmbedError> {
    let mut memo: HashMap<Vec<i32>, Matrix3<S>> = HashMap::new();
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let u = g.key.units();
        let mut acc = Matrix3::identity();
        for i in 1..=u.len() {
            if let Some(m) = memo.get(&u[..i]) {
                acc = m.clone();
                continue;
            }
            acc = acc.mul(&rep.units_matrix(&u[i - 1..i])?);
            memo.insert(u[..i].to_vec(), acc.clone());
        }
        out.push(acc);
    }
    Ok(out)
}

pub fn embed_with<S: Scalar>(
    rep: &Representation<S>,
    f: Functional<S>,
) -> Result<EmbeddingVector<S>, EmbedError> {
    let gens = enumerate_minimal_set(rep.rank())?;
    let ms = word_matrices(rep, &gens)?;
    let coordinates = gens.into_iter().zip(&ms).map(|(g, m)| (g, f(m))).collect();
    Ok(EmbeddingVector { coordinates })
}

pub fn embed<S: Scalar>(rep: &Representation<S>) -> Result<EmbeddingVector<S>, EmbedError> {
    embed_with(rep, trace)
}

/// g·ρ·g⁻¹ entrywise. det g need not be 1.
pub fn conjugate<S: Scalar>(
    rep: &Representation<S>,
    g: &Matrix3<S>,
) -> Result<Representation<S>, EmbedError> {
    rep.conjugate(g).map_err(|e| match e {
        MatError::Singular(_) => EmbedError::SingularConjugator,
        e => EmbedError::Mat(e),
    })
}

/// Shear product, multiplied by a diagonal of determinant ≠ 1 on odd trials.
pub fn random_conjugator_exact<R: Rng>(rng: &mut R, unimodular: bool) -> Matrix3<BigRational> {
    let steps = rng.random_range(2..=6);
    let g = sl3_exact_from_rng(rng, steps);
    if unimodular {
        return g;
    }
    const SCALES: [(i64, i64); 6] = [(2, 1), (3, 1), (-1, 1), (1, 2), (-2, 3), (5, 1)];
    let (a, b) = SCALES[rng.random_range(0..SCALES.len())];
    let (c, d) = SCALES[rng.random_range(0..SCALES.len())];
    g.mul(&Matrix3::diag(rat(a, b), rat(1, 1), rat(c, d)))
}

/// Normalized SL(3,C) sample, scaled by a random nonzero complex on odd trials.
pub fn random_conjugator_numeric<R: Rng>(rng: &mut R, unimodular: bool) -> Matrix3<Complex64> {
    let g = sl3_numeric_from_rng(rng);
    if unimodular {
        return g;
    }
    let s = Complex64::new(rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0));
    g.scale(&s)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub r: usize,
    pub coordinates: usize,
    pub trials: usize,
    pub non_unimodular_trials: usize,
    pub exact: bool,
    pub max_residual: f64,
    pub passed: bool,
}

fn invariance_generic<S: Scalar>(
    rep: &Representation<S>,
    trials: usize,
    seed: u64,
    exact: bool,
    f: Functional<S>,
    conj: fn(&mut ChaCha8Rng, bool) -> Matrix3<S>,
) -> Result<InvarianceReport, EmbedError> {
    if trials == 0 {
        return Err(EmbedError::NoTrials);
    }
    let base = embed_with(rep, f)?;
    let mut worst = 0.0f64;
    let mut passed = true;
    let mut odd = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        let unimodular = t % 2 == 0;
        odd += usize::from(!unimodular);
        let g = conj(&mut rng, unimodular);
        let e = embed_with(&conjugate(rep, &g)?, f)?;
        let res = base.residual(&e);
        worst = worst.max(res);
        let ok = if exact {
            e.values() == base.values()
        } else {
            res <= IDENTITY_TOL
        };
        passed &= ok;
    }
    Ok(InvarianceReport {
        r: rep.rank(),
        coordinates: base.len(),
        trials,
        non_unimodular_trials: odd,
        exact,
        max_residual: worst,
        passed,
    })
}

/// embed(g·ρ) = embed(ρ) for `trials` random g, half of them with det g ≠ 1.
pub fn invariance_report(
    rep: &AnyRep,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport, EmbedError> {
    match rep {
        AnyRep::Exact(r) => {
            invariance_generic(r, trials, seed, true, trace, random_conjugator_exact)
        }
        AnyRep::Numeric(r) => {
            invariance_generic(r, trials, seed, false, trace, random_conjugator_numeric)
        }
    }
}

/// Same check with a caller-chosen functional; used to show the check can fail.
pub fn invariance_report_exact_with(
    rep: &Representation<BigRational>,
    trials: usize,
    seed: u64,
    f: Functional<BigRational>,
) -> Result<InvarianceReport, EmbedError> {
    invariance_generic(rep, trials, seed, true, f, random_conjugator_exact)
}

/// The reduction polynomial of w, evaluated on ρ, against tr ρ(w).
pub fn reduction_consistent(
    w: &Word,
    rep: &Representation<BigRational>,
) -> Result<bool, EmbedError> {
    let p = reduce_word_to_minimal(w, rep.rank())?;
    Ok(p.evaluate(rep)? == trace_of_word(rep, w)?)
}

/// tr ρ(x_i)³ against the P formula in tr x_i and tr x_i², per letter.
pub fn p_consistent(rep: &Representation<BigRational>) -> bool {
    rep.matrices.iter().all(|m| m.pow(3).trace() == p_poly(m))
}

fn scalar_json_exact(v: &BigRational) -> Value {
    Value::String(v.to_string())
}

fn scalar_json_numeric(v: &Complex64) -> Value {
    json!([v.re, v.im])
}

fn scalar_text_numeric(v: &Complex64) -> String {
    format!("{:e}{:+e}i", v.re, v.im)
}

/// Labelled coordinates as JSON.
pub fn embedding_json(rep: &AnyRep) -> Result<Value, EmbedError> {
    fn rows<S: Scalar>(e: &EmbeddingVector<S>, f: fn(&S) -> Value) -> Vec<Value> {
        e.coordinates
            .iter()
            .enumerate()
            .map(|(i, (g, v))| {
                json!({"index": i + 1, "type": g.ty.pattern(), "label": g.key.to_string(), "value": f(v)})
            })
            .collect()
    }
    let (field, coords) = match rep {
        AnyRep::Exact(r) => ("rational", rows(&embed(r)?, scalar_json_exact)),
        AnyRep::Numeric(r) => ("complex", rows(&embed(r)?, scalar_json_numeric)),
    };
    Ok(json!({"r": rep.rank(), "field": field, "count": coords.len(), "coordinates": coords}))
}

/// Labelled coordinates as CSV lines, header first.
pub fn embedding_csv(rep: &AnyRep) -> Result<Vec<String>, EmbedError> {
    fn rows<S: Scalar>(e: &EmbeddingVector<S>, f: &dyn Fn(&S) -> String) -> Vec<String> {
        let mut out = vec!["index,type,label,value".to_string()];
        for (i, (g, v)) in e.coordinates.iter().enumerate() {
            out.push(format!("{},{},\"{}\",{}", i + 1, g.ty.pattern(), g.key, f(v)));
        }
        out
    }
    Ok(match rep {
        AnyRep::Exact(r) => rows(&embed(r)?, &|v: &BigRational| v.to_string()),
        AnyRep::Numeric(r) => rows(&embed(r)?, &scalar_text_numeric),
    })
}

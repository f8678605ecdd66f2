//! Verification suites shared by the CLI and the integration tests.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::embed::{invariance_report, EmbedError};
use crate::generators::{
    binomial_sum, count_formula, dimension_crosscheck, enumerate_minimal_set, GenError,
};
use crate::identities::{
    random_syllable_word, trial_seed, verify_identity, IdentityCase, IdentityError, Mode,
};
use crate::mat3::{random_exact_rep, random_numeric_rep, residual, trace_of_word, AnyRep, MatError};
use crate::reducer::{reduce_word_to_minimal, ReduceError};
use crate::relmat::{
    build_relation_matrix, exact_rank, reference_kept, six5_kept_for, validate_complement, Family,
    RelmatError,
};
use crate::reducer::class_rules;
use crate::word::{CyclicKey, Word};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Relmat(#[from] RelmatError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub const SUITES: [&str; 5] = ["identities", "ranks", "reduction", "embedding", "counts"];

/// One verified case.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: String) -> Check {
        Check {
            suite,
            name: name.into(),
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}/{} {}", self.suite, self.name, self.detail)
    }
}

pub fn run_suite(suite: &str, mode: Mode, trials: usize, seed: u64) -> Result<Vec<Check>, VerifyError> {
    match suite {
        "identities" => identities(mode, trials, seed),
        "ranks" => ranks(),
        "reduction" => reduction(mode, trials, seed),
        "embedding" => embedding(mode, trials, seed),
        "counts" => counts(),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, mode, trials, seed)?);
            }
            Ok(out)
        }
        s => Err(VerifyError::UnknownSuite(s.to_string())),
    }
}

pub fn counts() -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    for r in 1..=10u64 {
        let (a, b) = (count_formula(r), binomial_sum(r));
        out.push(Check::new("counts", format!("formula r={r}"), a == b, format!("N={a} sum={b}")));
    }
    for r in 1..=6usize {
        let d = dimension_crosscheck(r)?;
        out.push(Check::new(
            "counts",
            format!("dimensions r={r}"),
            d.passed,
            format!("total={} N={}", d.total, d.expected),
        ));
    }
    for r in 1..=6usize {
        let w = enumerate_minimal_set(r)?;
        let distinct: HashSet<&CyclicKey> = w.iter().map(|g| &g.key).collect();
        let n = count_formula(r as u64) as usize;
        out.push(Check::new(
            "counts",
            format!("enumeration r={r}"),
            w.len() == n && distinct.len() == n,
            format!("|W|={} distinct={} N={n}", w.len(), distinct.len()),
        ));
    }
    Ok(out)
}

pub fn identities(mode: Mode, trials: usize, seed: u64) -> Result<Vec<Check>, VerifyError> {
    IdentityCase::ALL
        .iter()
        .map(|&c| {
            let r = verify_identity(c, mode, trials, seed)?;
            Ok(Check::new(
                "identities",
                c.name(),
                r.passed,
                format!("trials={} max_residual={:e}", r.trials, r.max_residual),
            ))
        })
        .collect()
}

pub fn ranks() -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    for f in Family::ALL {
        let m = build_relation_matrix(f)?;
        let rank = exact_rank(&m);
        out.push(Check::new(
            "ranks",
            format!("{} rank", f.name()),
            rank == f.expected_rank() && (m.rows(), m.cols()) == f.shape(),
            format!("{}x{} rank={rank} expected={}", m.rows(), m.cols(), f.expected_rank()),
        ));
        let ok = validate_complement(&m, &reference_kept(f))?;
        out.push(Check::new(
            "ranks",
            format!("{} reference kept set", f.name()),
            ok,
            format!("kept={}", reference_kept(f).len()),
        ));
    }
    for k in 1..=5u32 {
        let mut pattern = vec![1; 5];
        pattern[k as usize - 1] = 2;
        let class = class_rules(&pattern)?;
        let mut want = six5_kept_for(k);
        want.sort();
        out.push(Check::new(
            "ranks",
            format!("six5 kept set under (k 5), k={k}"),
            class.rank == 17 && class.kept == want,
            format!("rank={} kept={}", class.rank, class.kept.len()),
        ));
    }
    Ok(out)
}

/// Outcome of reducing one word and evaluating both sides.
#[derive(Debug, Clone, Serialize)]
pub struct RoundTrip {
    pub word: String,
    pub r: usize,
    pub terms: usize,
    pub max_residual: f64,
    pub symbols_in_basis: bool,
    pub passed: bool,
}

/// Reduce `w` to the minimal basis over r letters and compare on `reps` representations.
pub fn round_trip(
    w: &Word,
    r: usize,
    reps: usize,
    seed: u64,
    mode: Mode,
    basis: &HashSet<CyclicKey>,
) -> Result<RoundTrip, VerifyError> {
    let p = reduce_word_to_minimal(w, r)?;
    let symbols_in_basis = p.symbols().iter().all(|k| basis.contains(k));
    let mut worst = 0.0f64;
    let mut exact_ok = true;
    for i in 0..reps {
        let s = trial_seed(seed, i);
        match mode {
            Mode::Exact => {
                let rep = random_exact_rep(s, r);
                let (a, b) = (p.evaluate(&rep)?, trace_of_word(&rep, w)?);
                worst = worst.max(residual(&a, &b));
                exact_ok &= a == b;
            }
            Mode::Numeric => {
                let rep = random_numeric_rep(s, r);
                worst = worst.max(residual(&p.evaluate(&rep)?, &trace_of_word(&rep, w)?));
            }
        }
    }
    let close = match mode {
        Mode::Exact => exact_ok,
        Mode::Numeric => worst <= 1e-8,
    };
    Ok(RoundTrip {
        word: w.to_string(),
        r,
        terms: p.len(),
        max_residual: worst,
        symbols_in_basis,
        passed: close && symbols_in_basis,
    })
}

/// Random words for the reduction suite: r in 1..=6, Σ|e| ≤ 10.
pub fn reduction_sample(seed: u64, i: usize) -> (Word, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed ^ 0x5eed, i));
    let r = rng.random_range(1..=6usize);
    (random_syllable_word(&mut rng, r as u32, 10), r)
}

pub fn basis_set(r: usize) -> Result<HashSet<CyclicKey>, VerifyError> {
    Ok(enumerate_minimal_set(r)?.into_iter().map(|g| g.key).collect())
}

pub fn reduction(mode: Mode, trials: usize, seed: u64) -> Result<Vec<Check>, VerifyError> {
    let bases: Vec<HashSet<CyclicKey>> = (1..=6).map(basis_set).collect::<Result<_, _>>()?;
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..trials {
        let (w, r) = reduction_sample(seed, i);
        let t = round_trip(&w, r, 10, trial_seed(seed, i), mode, &bases[r - 1])?;
        worst = worst.max(t.max_residual);
        if !t.passed {
            failed.push(format!("{} (r={r})", t.word));
        }
    }
    Ok(vec![Check::new(
        "reduction",
        "random words",
        failed.is_empty(),
        format!(
            "words={trials} reps=10 max_residual={worst:e} failures=[{}]",
            failed.join("; ")
        ),
    )])
}

pub fn embedding(mode: Mode, trials: usize, seed: u64) -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    for r in 1..=4usize {
        let mut ok = true;
        let mut worst = 0.0f64;
        for i in 0..trials {
            let s = trial_seed(seed.wrapping_add(r as u64 * 7919), i);
            let rep = match mode {
                Mode::Exact => AnyRep::Exact(random_exact_rep(s, r)),
                Mode::Numeric => AnyRep::Numeric(random_numeric_rep(s, r)),
            };
            let rep = invariance_report(&rep, 20, s)?;
            ok &= rep.passed;
            worst = worst.max(rep.max_residual);
        }
        out.push(Check::new(
            "embedding",
            format!("invariance r={r}"),
            ok,
            format!("reps={trials} conjugators=20 max_residual={worst:e}"),
        ));
    }
    Ok(out)
}

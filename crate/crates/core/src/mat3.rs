//! 3x3 matrices over exact rationals or complex floats, representation
//! sampling, word evaluation and characteristic coefficients.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};
use thiserror::Error;

use crate::word::Word;

pub const IDENTITY_TOL: f64 = 1e-8;
pub const DET_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("letter x{index} exceeds representation rank {rank}")]
    IndexOutOfRange { index: u32, rank: usize },
    #[error("matrix is singular (|det| = {0:e})")]
    Singular(f64),
    #[error("representation file: {0}")]
    Format(String),
}

/// Scalars usable for evaluation.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &BigRational) -> Self;
    fn inv(&self) -> Result<Self, MatError>;
    fn magnitude(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Result<Self, MatError> {
        if self.is_zero() {
            Err(MatError::Singular(0.0))
        } else {
            Ok(self.recip())
        }
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Complex64 {
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn inv(&self) -> Result<Self, MatError> {
        if self.norm() < SINGULAR_TOL {
            Err(MatError::Singular(self.norm()))
        } else {
            Ok(self.inv())
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix3<S> {
    pub m: [[S; 3]; 3],
}

impl<S: Scalar> Matrix3<S> {
    pub fn zero() -> Self {
        Matrix3 {
            m: std::array::from_fn(|_| std::array::from_fn(|_| S::zero())),
        }
    }

    pub fn identity() -> Self {
        Self::scalar(S::one())
    }

    pub fn scalar(s: S) -> Self {
        let mut z = Self::zero();
        for i in 0..3 {
            z.m[i][i] = s.clone();
        }
        z
    }

    pub fn diag(a: S, b: S, c: S) -> Self {
        let mut z = Self::zero();
        z.m[0][0] = a;
        z.m[1][1] = b;
        z.m[2][2] = c;
        z
    }

    pub fn from_rows(rows: [[S; 3]; 3]) -> Self {
        Matrix3 { m: rows }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut z = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = S::zero();
                for k in 0..3 {
                    s = s + self.m[i][k].clone() * o.m[k][j].clone();
                }
                z.m[i][j] = s;
            }
        }
        z
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut z = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                z.m[i][j] = z.m[i][j].clone() + o.m[i][j].clone();
            }
        }
        z
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut z = self.clone();
        for row in z.m.iter_mut() {
            for e in row.iter_mut() {
                *e = e.clone() * s.clone();
            }
        }
        z
    }

    pub fn trace(&self) -> S {
        self.m[0][0].clone() + self.m[1][1].clone() + self.m[2][2].clone()
    }

    pub fn det(&self) -> S {
        let m = &self.m;
        let c = |i: usize, j: usize| m[i][j].clone();
        c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1))
            - c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0))
            + c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0))
    }

    pub fn adjugate(&self) -> Self {
        let m = &self.m;
        let c = |i: usize, j: usize| m[i][j].clone();
        let cof = |i: usize, j: usize| {
            let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let k: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let minor = c(r[0], k[0]) * c(r[1], k[1]) - c(r[0], k[1]) * c(r[1], k[0]);
            if (i + j).is_multiple_of(2) {
                minor
            } else {
                -minor
            }
        };
        let mut z = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                z.m[j][i] = cof(i, j);
            }
        }
        z
    }

    pub fn inverse(&self) -> Result<Self, MatError> {
        let d = self.det();
        Ok(self.adjugate().scale(&d.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|e| e.magnitude())
            .fold(0.0, f64::max)
    }
}

/// Residual |l - r| / max(1, |l|, |r|).
pub fn residual<S: Scalar>(l: &S, r: &S) -> f64 {
    let d = (l.clone() - r.clone()).magnitude();
    d / 1f64.max(l.magnitude()).max(r.magnitude())
}

/// Elementary shear: identity plus k at (i, j).
pub fn shear(i: usize, j: usize, k: i64) -> Matrix3<BigRational> {
    let mut z = Matrix3::identity();
    z.m[i][j] = rat(k, 1);
    z
}

/// Product of `steps` random shears E_ij(k), k in [-3,3] \ {0}.
pub fn random_sl3_exact(seed: u64, steps: usize) -> Matrix3<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sl3_exact_from_rng(&mut rng, steps)
}

pub fn sl3_exact_from_rng<R: Rng>(rng: &mut R, steps: usize) -> Matrix3<BigRational> {
    let mut acc = Matrix3::identity();
    for _ in 0..steps {
        let i = rng.random_range(0..3);
        let mut j = rng.random_range(0..2);
        if j >= i {
            j += 1;
        }
        let mut k = rng.random_range(-3..3i64);
        if k >= 0 {
            k += 1;
        }
        acc = acc.mul(&shear(i, j, k));
    }
    acc
}

/// Default step count in [6, 12].
pub fn default_steps<R: Rng>(rng: &mut R) -> usize {
    rng.random_range(6..=12)
}

/// Complex Gaussian matrix scaled into SL(3,C) by a cube root of its determinant.
pub fn random_sl3_numeric(seed: u64) -> Matrix3<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sl3_numeric_from_rng(&mut rng)
}

pub fn sl3_numeric_from_rng<R: Rng>(rng: &mut R) -> Matrix3<Complex64> {
    loop {
        let mut z = Matrix3::<Complex64>::zero();
        for row in z.m.iter_mut() {
            for e in row.iter_mut() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *e = Complex64::new(re, im);
            }
        }
        let d = z.det();
        if d.norm() < SINGULAR_TOL {
            continue;
        }
        let s = d.powf(-1.0 / 3.0);
        let y = z.scale(&s);
        if (y.det() - Complex64::one()).norm() < DET_TOL {
            return y;
        }
    }
}

/// Characteristic coefficients C^0..C^n from power traces tr(X^k), k = 1..n.
pub fn char_coefficients_from_traces<S: Scalar>(power_traces: &[S]) -> Vec<S> {
    let n = power_traces.len();
    let mut c = vec![S::one()];
    for m in 1..=n {
        let mut s = S::zero();
        for k in 1..=m {
            let term = c[m - k].clone() * power_traces[k - 1].clone();
            if k % 2 == 1 {
                s = s + term;
            } else {
                s = s - term;
            }
        }
        let inv_m = S::from_rational(&rat(1, m as i64));
        c.push(s * inv_m);
    }
    c
}

pub fn char_coefficients<S: Scalar>(x: &Matrix3<S>) -> Vec<S> {
    let x2 = x.mul(x);
    let x3 = x2.mul(x);
    char_coefficients_from_traces(&[x.trace(), x2.trace(), x3.trace()])
}

/// P(X) = 3 + (3 tr X tr X^2 - (tr X)^3) / 2, which is tr X^3 on SL(3).
pub fn p_poly<S: Scalar>(x: &Matrix3<S>) -> S {
    let t1 = x.trace();
    let t2 = x.mul(x).trace();
    let three = S::from_rational(&rat(3, 1));
    let half = S::from_rational(&rat(1, 2));
    three.clone() + (three * t1.clone() * t2 - t1.clone() * t1.clone() * t1) * half
}

/// A tuple of SL(3) matrices, one per free generator.
#[derive(Debug, Clone)]
pub struct Representation<S> {
    pub matrices: Vec<Matrix3<S>>,
    inverses: Vec<Matrix3<S>>,
}

pub type ExactRep = Representation<BigRational>;
pub type NumericRep = Representation<Complex64>;

impl<S: Scalar> Representation<S> {
    pub fn new(matrices: Vec<Matrix3<S>>) -> Result<Self, MatError> {
        let inverses = matrices
            .iter()
            .map(|m| m.inverse())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation {
            matrices,
            inverses,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrices.len()
    }

    pub fn identity(r: usize) -> Self {
        Representation::new(vec![Matrix3::identity(); r]).expect("identity is invertible")
    }

    pub fn letter_power(&self, index: u32, exp: i32) -> Result<Matrix3<S>, MatError> {
        let i = index as usize;
        if i == 0 || i > self.rank() {
            return Err(MatError::IndexOutOfRange {
                index,
                rank: self.rank(),
            });
        }
        let base = if exp > 0 {
            &self.matrices[i - 1]
        } else {
            &self.inverses[i - 1]
        };
        Ok(base.pow(exp.unsigned_abs()))
    }

    /// Matrix of a word given as signed unit steps.
    pub fn units_matrix(&self, units: &[i32]) -> Result<Matrix3<S>, MatError> {
        let mut acc: Option<Matrix3<S>> = None;
        for &u in units {
            let i = u.unsigned_abs() as usize;
            if i == 0 || i > self.rank() {
                return Err(MatError::IndexOutOfRange {
                    index: i as u32,
                    rank: self.rank(),
                });
            }
            let m = if u > 0 {
                &self.matrices[i - 1]
            } else {
                &self.inverses[i - 1]
            };
            acc = Some(match acc {
                None => m.clone(),
                Some(a) => a.mul(m),
            });
        }
        Ok(acc.unwrap_or_else(Matrix3::identity))
    }

    /// Conjugate every matrix by g: g M g^-1.
    pub fn conjugate(&self, g: &Matrix3<S>) -> Result<Self, MatError> {
        let gi = g.inverse()?;
        Representation::new(self.matrices.iter().map(|m| g.mul(m).mul(&gi)).collect())
    }
}

pub fn word_matrix<S: Scalar>(rep: &Representation<S>, w: &Word) -> Result<Matrix3<S>, MatError> {
    let mut acc = Matrix3::identity();
    for l in w.letters() {
        acc = acc.mul(&rep.letter_power(l.index, l.exp)?);
    }
    Ok(acc)
}

pub fn trace_of_word<S: Scalar>(rep: &Representation<S>, w: &Word) -> Result<S, MatError> {
    Ok(word_matrix(rep, w)?.trace())
}

pub fn random_exact_rep(seed: u64, r: usize) -> ExactRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ms = (0..r)
        .map(|_| {
            let steps = default_steps(&mut rng);
            sl3_exact_from_rng(&mut rng, steps)
        })
        .collect();
    Representation::new(ms).expect("shear products are unimodular")
}

pub fn random_numeric_rep(seed: u64, r: usize) -> NumericRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ms = (0..r).map(|_| sl3_numeric_from_rng(&mut rng)).collect();
    Representation::new(ms).expect("normalized matrices are invertible")
}

/// Either field, as read from a representation file.
#[derive(Debug, Clone)]
pub enum AnyRep {
    Exact(ExactRep),
    Numeric(NumericRep),
}

impl AnyRep {
    pub fn rank(&self) -> usize {
        match self {
            AnyRep::Exact(r) => r.rank(),
            AnyRep::Numeric(r) => r.rank(),
        }
    }
}

fn parse_rational(v: &Value) -> Result<BigRational, MatError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| rat(i, 1))
            .ok_or_else(|| MatError::Format(format!("non-integer rational entry {n}"))),
        Value::String(s) => {
            let s = s.trim();
            let (p, q) = match s.split_once('/') {
                Some((p, q)) => (p.trim(), q.trim()),
                None => (s, "1"),
            };
            let p: BigInt = p
                .parse()
                .map_err(|_| MatError::Format(format!("bad rational '{s}'")))?;
            let q: BigInt = q
                .parse()
                .map_err(|_| MatError::Format(format!("bad rational '{s}'")))?;
            if q.is_zero() {
                return Err(MatError::Format(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(p, q))
        }
        other => Err(MatError::Format(format!("bad rational entry {other}"))),
    }
}

fn parse_complex(v: &Value) -> Result<Complex64, MatError> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64();
            let im = a[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(MatError::Format(format!("bad complex entry {v}"))),
            }
        }
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        other => Err(MatError::Format(format!("bad complex entry {other}"))),
    }
}

fn parse_matrix<S: Scalar>(
    v: &Value,
    entry: &dyn Fn(&Value) -> Result<S, MatError>,
) -> Result<Matrix3<S>, MatError> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == 3)
        .ok_or_else(|| MatError::Format("matrix must have 3 rows".into()))?;
    let mut z = Matrix3::zero();
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .filter(|c| c.len() == 3)
            .ok_or_else(|| MatError::Format("matrix rows must have 3 entries".into()))?;
        for (j, e) in cols.iter().enumerate() {
            z.m[i][j] = entry(e)?;
        }
    }
    Ok(z)
}

pub fn rep_from_json(text: &str) -> Result<AnyRep, MatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| MatError::Format(e.to_string()))?;
    let r = v
        .get("r")
        .and_then(Value::as_u64)
        .ok_or_else(|| MatError::Format("missing integer field 'r'".into()))? as usize;
    let field = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| MatError::Format("missing field 'field'".into()))?;
    let mats = v
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| MatError::Format("missing array 'matrices'".into()))?;
    if mats.len() != r {
        return Err(MatError::Format(format!(
            "r = {r} but {} matrices given",
            mats.len()
        )));
    }
    match field {
        "rational" => {
            let ms = mats
                .iter()
                .map(|m| parse_matrix(m, &parse_rational))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyRep::Exact(Representation::new(ms)?))
        }
        "complex" => {
            let ms = mats
                .iter()
                .map(|m| parse_matrix(m, &parse_complex))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyRep::Numeric(Representation::new(ms)?))
        }
        f => Err(MatError::Format(format!("unknown field '{f}'"))),
    }
}

pub fn rep_to_json(rep: &AnyRep) -> Value {
    match rep {
        AnyRep::Exact(r) => json!({
            "r": r.rank(),
            "field": "rational",
            "matrices": r.matrices.iter().map(|m| {
                m.m.iter().map(|row| row.iter().map(|e| Value::String(e.to_string())).collect::<Vec<_>>()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        }),
        AnyRep::Numeric(r) => json!({
            "r": r.rank(),
            "field": "complex",
            "matrices": r.matrices.iter().map(|m| {
                m.m.iter().map(|row| row.iter().map(|e| json!([e.re, e.im])).collect::<Vec<_>>()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        }),
    }
}

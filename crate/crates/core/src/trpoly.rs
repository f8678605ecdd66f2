//! Trace polynomials and matrix expressions with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mat3::{MatError, Matrix3, Representation, Scalar};
use crate::word::{cmp_units, CyclicKey, Word};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weighted_length()
            .cmp(&other.weighted_length())
            .then_with(|| cmp_units(&self.units(), &other.units()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sorted multiset of trace symbols. The empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<CyclicKey>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_keys(mut keys: Vec<CyclicKey>) -> Self {
        debug_assert!(keys.iter().all(|k| !k.is_empty()));
        keys.sort();
        Monomial(keys)
    }

    pub fn factors(&self) -> &[CyclicKey] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(CyclicKey::weighted_length).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            if self.0[i] <= o.0[j] {
                v.push(self.0[i].clone());
                i += 1;
            } else {
                v.push(o.0[j].clone());
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&o.0[j..]);
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.len().cmp(&self.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in trace symbols t(w), with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TracePolynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl TracePolynomial {
    pub fn zero() -> Self {
        TracePolynomial::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = TracePolynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    /// t(key); the empty key is the constant 3.
    pub fn symbol(key: CyclicKey) -> Self {
        if key.is_empty() {
            TracePolynomial::constant(q(3))
        } else {
            let mut p = TracePolynomial::zero();
            p.add_term(Monomial(vec![key]), q(1));
            p
        }
    }

    pub fn trace_of(w: &Word) -> Self {
        TracePolynomial::symbol(CyclicKey::of(w))
    }

    /// t of a unit sequence, e.g. [1, 2, -1].
    pub fn t(units: &[i32]) -> Self {
        TracePolynomial::symbol(CyclicKey::from_units(units))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = TracePolynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coefficient(&Monomial::one())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &Self, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_scaled(o, &q(-1));
        p
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return TracePolynomial::zero();
        }
        TracePolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = TracePolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = TracePolynomial::constant(q(1));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Rebuilds the map; a no-op for values built through the public API.
    pub fn normalize(&self) -> Self {
        TracePolynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// All distinct symbols, sorted.
    pub fn symbols(&self) -> Vec<CyclicKey> {
        let mut v: Vec<CyclicKey> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn max_symbol_weight(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .map(CyclicKey::weighted_length)
            .max()
            .unwrap_or(0)
    }

    pub fn max_index(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .map(CyclicKey::max_index)
            .max()
            .unwrap_or(0)
    }

    /// Replace every symbol by a polynomial.
    pub fn map_symbols<F: FnMut(&CyclicKey) -> TracePolynomial>(&self, mut f: F) -> Self {
        let mut cache: HashMap<CyclicKey, TracePolynomial> = HashMap::new();
        let mut out = TracePolynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = TracePolynomial::constant(c.clone());
            for k in &m.0 {
                let img = cache.entry(k.clone()).or_insert_with(|| f(k)).clone();
                acc = acc.mul(&img);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Rename letters by a strictly increasing map.
    pub fn relabel_monotone(&self, f: &dyn Fn(u32) -> u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let keys = m.0.iter().map(|k| k.relabel_monotone(f)).collect();
                (Monomial(keys), c.clone())
            })
            .collect();
        TracePolynomial { terms }
    }

    /// Substitute letters by words: letter i (positive placeholder) becomes subs(i).
    pub fn substitute(&self, subs: &dyn Fn(u32) -> Option<Word>) -> Self {
        self.map_symbols(|k| TracePolynomial::symbol(substitute_key(k, subs)))
    }

    pub fn evaluate<S: Scalar>(&self, rep: &Representation<S>) -> Result<S, MatError> {
        let mut cache: HashMap<&CyclicKey, S> = HashMap::new();
        let mut total = S::zero();
        for (m, c) in &self.terms {
            let mut acc = S::from_rational(c);
            for k in &m.0 {
                let v = match cache.get(k) {
                    Some(v) => v.clone(),
                    None => {
                        let v = rep.units_matrix(k.units())?.trace();
                        cache.insert(k, v.clone());
                        v
                    }
                };
                acc = acc * v;
            }
            total = total + acc;
        }
        Ok(total)
    }
}

/// Substitute placeholder letters inside one cyclic key.
pub fn substitute_key(k: &CyclicKey, subs: &dyn Fn(u32) -> Option<Word>) -> CyclicKey {
    let mut units = Vec::new();
    for &u in k.units() {
        match subs(u.unsigned_abs()) {
            Some(w) => {
                let wu = w.units();
                if u > 0 {
                    units.extend(wu);
                } else {
                    units.extend(wu.iter().rev().map(|x| -x));
                }
            }
            None => units.push(u),
        }
    }
    CyclicKey::from_units(&units)
}

pub fn substitute_word(w: &Word, subs: &dyn Fn(u32) -> Option<Word>) -> Word {
    let mut out = Word::empty();
    for l in w.letters() {
        let piece = match subs(l.index) {
            Some(s) => s.pow(l.exp),
            None => Word::letter(l.index, l.exp),
        };
        out = out.mul(&piece);
    }
    out
}

fn fmt_coeff(c: &Q) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.0.len() {
        let mut j = i;
        while j < m.0.len() && m.0[j] == m.0[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(m.0[i].to_string());
        } else {
            parts.push(format!("{}^{}", m.0[i], j - i));
        }
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.0.is_empty() {
                write!(f, "{}", fmt_coeff(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&a), fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Sum of words with trace-polynomial coefficients; the empty word is I.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatrixExpression {
    terms: BTreeMap<Word, TracePolynomial>,
}

impl MatrixExpression {
    pub fn zero() -> Self {
        MatrixExpression::default()
    }

    pub fn identity() -> Self {
        MatrixExpression::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        let mut e = MatrixExpression::zero();
        e.add_term(w, TracePolynomial::constant(q(1)));
        e
    }

    pub fn letter(i: u32) -> Self {
        MatrixExpression::word(Word::letter(i, 1))
    }

    pub fn scalar(p: TracePolynomial) -> Self {
        let mut e = MatrixExpression::zero();
        e.add_term(Word::empty(), p);
        e
    }

    pub fn add_term(&mut self, w: Word, p: TracePolynomial) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&p);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &TracePolynomial)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (w, p) in &o.terms {
            e.add_term(w.clone(), p.clone());
        }
        e
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale_q(&q(-1)))
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        let mut e = MatrixExpression::zero();
        for (w, p) in &self.terms {
            e.add_term(w.clone(), p.scale(s));
        }
        e
    }

    pub fn scale(&self, s: &TracePolynomial) -> Self {
        let mut e = MatrixExpression::zero();
        for (w, p) in &self.terms {
            e.add_term(w.clone(), p.mul(s));
        }
        e
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut e = MatrixExpression::zero();
        for (w1, p1) in &self.terms {
            for (w2, p2) in &o.terms {
                e.add_term(w1.mul(w2), p1.mul(p2));
            }
        }
        e
    }

    pub fn mul_word_left(&self, w: &Word) -> Self {
        let mut e = MatrixExpression::zero();
        for (v, p) in &self.terms {
            e.add_term(w.mul(v), p.clone());
        }
        e
    }

    pub fn mul_word_right(&self, w: &Word) -> Self {
        let mut e = MatrixExpression::zero();
        for (v, p) in &self.terms {
            e.add_term(v.mul(w), p.clone());
        }
        e
    }

    pub fn trace(&self) -> TracePolynomial {
        let mut out = TracePolynomial::zero();
        for (w, p) in &self.terms {
            out.add_assign(&p.mul(&TracePolynomial::trace_of(w)));
        }
        out
    }

    pub fn substitute(&self, subs: &dyn Fn(u32) -> Option<Word>) -> Self {
        let mut e = MatrixExpression::zero();
        for (w, p) in &self.terms {
            e.add_term(substitute_word(w, subs), p.substitute(subs));
        }
        e
    }

    pub fn evaluate<S: Scalar>(&self, rep: &Representation<S>) -> Result<Matrix3<S>, MatError> {
        let mut acc = Matrix3::zero();
        for (w, p) in &self.terms {
            let c = p.evaluate(rep)?;
            let m = rep.units_matrix(&w.units())?;
            acc = acc.add(&m.scale(&c));
        }
        Ok(acc)
    }

    /// Largest weighted length among the words (not the trace arguments).
    pub fn max_word_weight(&self) -> u32 {
        self.terms
            .keys()
            .map(Word::weighted_length)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for MatrixExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, p)| {
                let ws = if w.is_empty() {
                    "I".to_string()
                } else {
                    w.to_string()
                };
                format!("({p})*[{ws}]")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

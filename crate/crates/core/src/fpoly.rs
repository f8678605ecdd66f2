//! Working representation for the rewrite engine: symbols interned to ids,
//! hashed monomials, and rationals that stay machine-sized until they can't.

use std::ops::{Add, Mul, Neg};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::trpoly::{Monomial, TracePolynomial, Q};
use crate::word::CyclicKey;

pub type Id = u32;

#[derive(Default)]
struct Interner {
    ids: FxHashMap<CyclicKey, Id>,
    keys: Vec<CyclicKey>,
}

fn interner() -> &'static RwLock<Interner> {
    static I: OnceLock<RwLock<Interner>> = OnceLock::new();
    I.get_or_init(Default::default)
}

pub fn intern(k: &CyclicKey) -> Id {
    if let Some(&id) = interner().read().unwrap().ids.get(k) {
        return id;
    }
    let mut g = interner().write().unwrap();
    if let Some(&id) = g.ids.get(k) {
        return id;
    }
    let id = g.keys.len() as Id;
    g.keys.push(k.clone());
    g.ids.insert(k.clone(), id);
    id
}

pub fn key(id: Id) -> CyclicKey {
    interner().read().unwrap().keys[id as usize].clone()
}

/// Rational coefficient; small values avoid heap arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Coef {
    Small(i64, i64),
    Big(Q),
}

impl Coef {
    pub fn int(n: i64) -> Coef {
        Coef::Small(n, 1)
    }

    fn small(n: i128, d: i128) -> Coef {
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Coef::Small(n, d),
            _ => Coef::Big(Q::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn from_q(q: &Q) -> Coef {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Coef::Small(n, d),
            _ => Coef::Big(q.clone()),
        }
    }

    pub fn to_q(&self) -> Q {
        match self {
            Coef::Small(n, d) => Q::new(BigInt::from(*n), BigInt::from(*d)),
            Coef::Big(q) => q.clone(),
        }
    }

    fn norm(q: Q) -> Coef {
        Coef::from_q(&q)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Small(n, _) => *n == 0,
            Coef::Big(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Small(n, d) => *n == 1 && *d == 1,
            Coef::Big(q) => q.is_one(),
        }
    }
}

impl Add for &Coef {
    type Output = Coef;
    fn add(self, o: &Coef) -> Coef {
        if let (Coef::Small(a, b), Coef::Small(c, d)) = (self, o) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == 1 && d == 1 {
                if let Ok(n) = i64::try_from(a + c) {
                    return Coef::Small(n, 1);
                }
            }
            if b == d {
                return Coef::small(a + c, b);
            }
            // |values| < 2^63, so these products fit in i128
            return Coef::small(a * d + c * b, b * d);
        }
        Coef::norm(self.to_q() + o.to_q())
    }
}

impl Mul for &Coef {
    type Output = Coef;
    fn mul(self, o: &Coef) -> Coef {
        if let (Coef::Small(a, b), Coef::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(n) = a.checked_mul(*c) {
                    return Coef::Small(n, 1);
                }
            }
            return Coef::small(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Coef::norm(self.to_q() * o.to_q())
    }
}

impl Neg for &Coef {
    type Output = Coef;
    fn neg(self) -> Coef {
        match self {
            Coef::Small(n, d) if *n != i64::MIN => Coef::Small(-n, *d),
            _ => Coef::norm(-self.to_q()),
        }
    }
}

pub type Mono = SmallVec<[Id; 6]>;

fn merge(a: &[Id], b: &[Id]) -> Mono {
    let mut v = Mono::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            v.push(a[i]);
            i += 1;
        } else {
            v.push(b[j]);
            j += 1;
        }
    }
    v.extend_from_slice(&a[i..]);
    v.extend_from_slice(&b[j..]);
    v
}

/// Polynomial over interned symbols. Monomials are sorted id lists; the
/// empty key t() = 3 never appears as an id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FPoly {
    pub terms: FxHashMap<Mono, Coef>,
}

impl FPoly {
    pub fn zero() -> Self {
        FPoly::default()
    }

    pub fn constant(c: Coef) -> Self {
        let mut p = FPoly::zero();
        p.add_term(Mono::new(), c);
        p
    }

    pub fn symbol(id: Id) -> Self {
        let mut p = FPoly::zero();
        let mut m = Mono::new();
        m.push(id);
        p.add_term(m, Coef::int(1));
        p
    }

    pub fn of_key(k: &CyclicKey) -> Self {
        if k.is_empty() {
            FPoly::constant(Coef::int(3))
        } else {
            FPoly::symbol(intern(k))
        }
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

    pub fn add_term(&mut self, m: Mono, c: Coef) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &FPoly, s: &Coef) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            let v = if s.is_one() { c.clone() } else { c * s };
            self.add_term(m.clone(), v);
        }
    }

    /// self += s · a · b
    pub fn add_product(&mut self, a: &FPoly, b: &FPoly, s: &Coef) {
        for (m1, c1) in &a.terms {
            let c1s = c1 * s;
            for (m2, c2) in &b.terms {
                self.add_term(merge(m1, m2), &c1s * c2);
            }
        }
    }

    pub fn mul(&self, o: &FPoly) -> FPoly {
        let mut p = FPoly::zero();
        p.terms.reserve(self.len() * o.len());
        p.add_product(self, o, &Coef::int(1));
        p
    }

    pub fn ids(&self) -> Vec<Id> {
        let mut v: Vec<Id> = self.terms.keys().flat_map(|m| m.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn from_tp(p: &TracePolynomial) -> FPoly {
        let mut out = FPoly::zero();
        out.terms.reserve(p.len());
        for (m, c) in p.terms() {
            let mut mono: Mono = m.factors().iter().map(intern).collect();
            mono.sort_unstable();
            out.add_term(mono, Coef::from_q(c));
        }
        out
    }

    pub fn to_tp(&self) -> TracePolynomial {
        let g = interner().read().unwrap();
        TracePolynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let keys = m.iter().map(|&i| g.keys[i as usize].clone()).collect();
            (Monomial::from_keys(keys), c.to_q())
        }))
    }

    /// Replace each symbol id by its image; images must not be empty keys.
    pub fn map_ids<E>(
        &self,
        mut f: impl FnMut(Id) -> Result<std::sync::Arc<FPoly>, E>,
    ) -> Result<FPoly, E> {
        let mut cache: FxHashMap<Id, std::sync::Arc<FPoly>> = FxHashMap::default();
        let mut out = FPoly::zero();
        for (m, c) in &self.terms {
            for &id in m.iter() {
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(id) {
                    e.insert(f(id)?);
                }
            }
            match m.len() {
                0 => out.add_term(Mono::new(), c.clone()),
                1 => out.add_scaled(&cache[&m[0]], c),
                _ => {
                    let mut acc = (*cache[&m[0]]).clone();
                    for id in &m[1..m.len() - 1] {
                        acc = acc.mul(&cache[id]);
                    }
                    out.add_product(&acc, &cache[&m[m.len() - 1]], c);
                }
            }
        }
        Ok(out)
    }

    /// Rename ids by a map on keys.
    pub fn map_keys(&self, f: &dyn Fn(&CyclicKey) -> CyclicKey) -> FPoly {
        let mut memo: FxHashMap<Id, Id> = FxHashMap::default();
        let mut out = FPoly::zero();
        out.terms.reserve(self.len());
        for (m, c) in &self.terms {
            let mut mono: Mono = m
                .iter()
                .map(|&i| *memo.entry(i).or_insert_with(|| intern(&f(&key(i)))))
                .collect();
            mono.sort_unstable();
            out.add_term(mono, c.clone());
        }
        out
    }
}

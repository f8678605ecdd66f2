//! Two-tier rewriting of trace polynomials.
//!
//! Tier 1 rewrites every symbol into generator forms: words of weighted length
//! at most 6 with exponents ±1, no letter repeated with the same sign, and a
//! fixed orientation for conjugation patterns. Each step strictly lowers
//! `Measure`, which is checked at runtime.
//!
//! Tier 2 eliminates the redundant generator forms of each multidegree class
//! by solving the class relations exactly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::identities::{
    cyclic_sum, eq2_rewrite, eq3_swap, flatten_exponents, flatten_step, fundamental_lhs,
    fundamental_relation, rank2sum, seven_template,
};
use crate::fpoly::{self, Coef, FPoly, Id};
use crate::trpoly::{q, qf, Monomial, TracePolynomial, Q};
use crate::word::{CyclicKey, Word};

#[derive(Debug, Error, Clone)]
pub enum ReduceError {
    #[error("letter x{index} exceeds rank {r}")]
    IndexOutOfRange { index: u32, r: usize },
    #[error("rewriting {input} produced {output}, which is not lower")]
    NotLower { input: String, output: String },
    #[error("class {class}: {detail}")]
    Class { class: String, detail: String },
}

/// The nineteen generator shapes, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GeneratorType {
    X,
    XInv,
    XY,
    XYInv,
    XInvYInv,
    Commutator,
    XYZ,
    XYZInv,
    XYZYInv,
    XYInvZInv,
    XYZInvYInv,
    XInvYInvZInv,
    WXYZ,
    WXYZInv,
    WXYInvZInv,
    WXYZYInv,
    UVWXY,
    VWXYZInv,
    UVWXYZ,
}

impl GeneratorType {
    pub const ALL: [GeneratorType; 19] = [
        GeneratorType::X,
        GeneratorType::XInv,
        GeneratorType::XY,
        GeneratorType::XYInv,
        GeneratorType::XInvYInv,
        GeneratorType::Commutator,
        GeneratorType::XYZ,
        GeneratorType::XYZInv,
        GeneratorType::XYZYInv,
        GeneratorType::XYInvZInv,
        GeneratorType::XYZInvYInv,
        GeneratorType::XInvYInvZInv,
        GeneratorType::WXYZ,
        GeneratorType::WXYZInv,
        GeneratorType::WXYInvZInv,
        GeneratorType::WXYZYInv,
        GeneratorType::UVWXY,
        GeneratorType::VWXYZInv,
        GeneratorType::UVWXYZ,
    ];

    /// 1-based table row.
    pub fn row(self) -> usize {
        GeneratorType::ALL.iter().position(|&t| t == self).unwrap() + 1
    }

    pub fn pattern(self) -> &'static str {
        use GeneratorType::*;
        match self {
            X => "X",
            XInv => "X^-1",
            XY => "XY",
            XYInv => "XY^-1",
            XInvYInv => "X^-1Y^-1",
            Commutator => "XYX^-1Y^-1",
            XYZ => "XYZ",
            XYZInv => "XYZ^-1",
            XYZYInv => "XYZY^-1",
            XYInvZInv => "XY^-1Z^-1",
            XYZInvYInv => "XYZ^-1Y^-1",
            XInvYInvZInv => "X^-1Y^-1Z^-1",
            WXYZ => "WXYZ",
            WXYZInv => "WXYZ^-1",
            WXYInvZInv => "WXY^-1Z^-1",
            WXYZYInv => "WXYZY^-1",
            UVWXY => "UVWXY",
            VWXYZInv => "VWXYZ^-1",
            UVWXYZ => "UVWXYZ",
        }
    }

    pub fn from_pattern(s: &str) -> Option<GeneratorType> {
        GeneratorType::ALL.iter().copied().find(|t| t.pattern() == s)
    }

    /// Distinct letters y.
    pub fn letters(self) -> u32 {
        let (p, m, b) = self.shape();
        p + m + b
    }

    /// Counts of positive-only, negative-only and two-signed letters.
    pub fn shape(self) -> (u32, u32, u32) {
        use GeneratorType::*;
        match self {
            X => (1, 0, 0),
            XInv => (0, 1, 0),
            XY => (2, 0, 0),
            XYInv => (1, 1, 0),
            XInvYInv => (0, 2, 0),
            Commutator => (0, 0, 2),
            XYZ => (3, 0, 0),
            XYZInv => (2, 1, 0),
            XYZYInv => (2, 0, 1),
            XYInvZInv => (1, 2, 0),
            XYZInvYInv => (1, 1, 1),
            XInvYInvZInv => (0, 3, 0),
            WXYZ => (4, 0, 0),
            WXYZInv => (3, 1, 0),
            WXYInvZInv => (2, 2, 0),
            WXYZYInv => (3, 0, 1),
            UVWXY => (5, 0, 0),
            VWXYZInv => (4, 1, 0),
            UVWXYZ => (6, 0, 0),
        }
    }

    pub fn from_shape(p: u32, m: u32, b: u32) -> Option<GeneratorType> {
        GeneratorType::ALL
            .iter()
            .copied()
            .find(|t| t.shape() == (p, m, b))
    }

    pub fn weight(self) -> u32 {
        let (p, m, b) = self.shape();
        p + 2 * m + 3 * b
    }

    /// Number of generators of this shape on a fixed set of letters.
    pub fn multiplier(self) -> u64 {
        use GeneratorType::*;
        match self {
            X | XInv | XY | XInvYInv | Commutator | XInvYInvZInv => 1,
            XYInv | XYZ => 2,
            XYZInv | XYInvZInv | XYZInvYInv => 6,
            XYZYInv => 3,
            WXYZ => 5,
            WXYZInv => 20,
            WXYInvZInv => 18,
            WXYZYInv => 8,
            UVWXY => 12,
            VWXYZInv => 35,
            UVWXYZ => 15,
        }
    }

    /// Shapes whose generator forms are further cut down by class relations.
    pub fn is_tier2(self) -> bool {
        use GeneratorType::*;
        matches!(
            self,
            Commutator
                | XInvYInvZInv
                | WXYZ
                | WXYZInv
                | WXYInvZInv
                | WXYZYInv
                | UVWXY
                | VWXYZInv
                | UVWXYZ
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorInstance {
    pub ty: GeneratorType,
    pub key: CyclicKey,
}

/// A removed generator and its replacement over kept generators and lower terms.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub removed: GeneratorInstance,
    pub replacement: TracePolynomial,
}

/// Lexicographic descent measure for tier 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub length: u32,
    pub excess: u32,
    pub repeats: u32,
    pub orient: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Basis(GeneratorType),
    Flatten,
    Repeat(usize, usize),
    Long,
    HardCore(usize),
    Orient(usize, usize),
}

fn letter_signs(u: &[i32]) -> Vec<(u32, u32, u32)> {
    let mut v: Vec<(u32, u32, u32)> = Vec::new();
    for &x in u {
        let i = x.unsigned_abs();
        let e = match v.iter_mut().find(|e| e.0 == i) {
            Some(e) => e,
            None => {
                v.push((i, 0, 0));
                v.last_mut().unwrap()
            }
        };
        if x > 0 {
            e.1 += 1;
        } else {
            e.2 += 1;
        }
    }
    v
}

fn rotated(u: &[i32], s: usize) -> Vec<i32> {
    u[s..].iter().chain(&u[..s]).copied().collect()
}

fn analyze(k: &CyclicKey) -> Action {
    let u = k.units();
    let n = u.len();
    if n >= 2 && (0..n).any(|i| u[i] == u[(i + 1) % n]) {
        return Action::Flatten;
    }
    for i in 0..n {
        if let Some(j) = (i + 1..n).find(|&j| u[j] == u[i]) {
            return Action::Repeat(i, j);
        }
    }
    if k.weighted_length() >= 7 {
        return Action::Long;
    }
    let signs = letter_signs(u);
    let p = signs.iter().filter(|s| s.2 == 0).count() as u32;
    let m = signs.iter().filter(|s| s.1 == 0).count() as u32;
    let b = signs.len() as u32 - p - m;
    let ty = GeneratorType::from_shape(p, m, b)
        .unwrap_or_else(|| panic!("no generator shape for {k}"));
    match b {
        0 if p == 2 && m == 2 => {
            let s = (0..n).find(|&i| u[i] < 0).unwrap();
            if u[(s + 2) % n] < 0 {
                Action::HardCore(s)
            } else {
                Action::Basis(ty)
            }
        }
        1 => {
            let x = signs.iter().find(|s| s.1 > 0 && s.2 > 0).unwrap().0 as i32;
            let s = u.iter().position(|&v| v == x).unwrap();
            let t = u.iter().position(|&v| v == -x).unwrap();
            let rot = rotated(u, s);
            let tt = (t + n - s) % n;
            let a = &rot[1..tt];
            let bb = &rot[tt + 1..];
            let canonical = match (p, m) {
                (2, 0) => {
                    let mut sw = vec![x];
                    sw.extend_from_slice(bb);
                    sw.push(-x);
                    sw.extend_from_slice(a);
                    *k <= CyclicKey::from_units(&sw)
                }
                (3, 0) => a.len() == 1,
                (1, 1) => a.len() == 1 && a[0] < 0,
                _ => unreachable!("b = 1 with shape ({p}, {m})"),
            };
            if canonical {
                Action::Basis(ty)
            } else {
                Action::Orient(s, t)
            }
        }
        _ => Action::Basis(ty),
    }
}

pub fn measure(k: &CyclicKey) -> Measure {
    let u = k.units();
    let n = u.len();
    let mut excess = (0..n).filter(|&i| n >= 2 && u[i] == u[(i + 1) % n]).count() as u32;
    if n >= 2 && u.iter().all(|&x| x == u[0]) {
        excess -= 1;
    }
    let repeats = letter_signs(u)
        .iter()
        .map(|&(_, pos, neg)| 2 * pos.saturating_sub(1) + neg.saturating_sub(1))
        .sum();
    let orient = matches!(analyze(k), Action::Orient(..)) as u32;
    Measure {
        length: k.weighted_length(),
        excess,
        repeats,
        orient,
    }
}

/// Generator shape of a tier-1 basis form, or None if the symbol rewrites.
pub fn classify(k: &CyclicKey) -> Option<GeneratorType> {
    if k.is_empty() {
        return None;
    }
    match analyze(k) {
        Action::Basis(t) => Some(t),
        _ => None,
    }
}

pub fn is_basis_form(k: &CyclicKey) -> bool {
    classify(k).is_some()
}

fn wu(units: &[i32]) -> Word {
    Word::from_units(units)
}

fn ts(units: &[i32]) -> TracePolynomial {
    TracePolynomial::t(units)
}

/// One rewriting step for a non-basis symbol.
fn step(k: &CyclicKey, action: Action) -> TracePolynomial {
    let u = k.units();
    let n = u.len();
    match action {
        Action::Basis(_) => TracePolynomial::symbol(k.clone()),
        Action::Flatten => flatten_step(k).expect("flatten step"),
        Action::Repeat(i, j) => {
            let rot = rotated(u, i);
            let jj = j - i;
            eq2_rewrite(
                &Word::empty(),
                &wu(&rot[1..jj]),
                &wu(&rot[jj + 1..]),
                &wu(&rot[..1]),
            )
        }
        Action::Long => long_step(u),
        Action::HardCore(s) => {
            let rot = rotated(u, s);
            let (c, a, d, b) = (-rot[0], rot[1], -rot[2], rot[3]);
            let l = |i: i32| wu(&[i]);
            let f = fundamental_relation(&l(c), &l(c), &l(a), &l(d), &l(d), &l(b));
            let e = flatten_exponents(&ts(&[c, c, a, d, d, b]));
            let main = Monomial::from_keys(vec![k.clone()]);
            assert!(e.coefficient(&main).is_one(), "unexpected main term in {k}");
            f.scale(&qf(1, 12))
                .sub(&e)
                .add(&TracePolynomial::symbol(k.clone()))
        }
        Action::Orient(s, t) => {
            let rot = rotated(u, s);
            let tt = (t + n - s) % n;
            let x = rot[0];
            let a = &rot[1..tt];
            let b = &rot[tt + 1..];
            let mut sw = vec![x];
            sw.extend_from_slice(b);
            sw.push(-x);
            sw.extend_from_slice(a);
            eq3_swap(&wu(b), &wu(a), &wu(&[x])).sub(&ts(&sw))
        }
    }
}

/// Seven-slot reduction of a long word with no same-sign repeats.
fn long_step(u: &[i32]) -> TracePolynomial {
    let t7 = seven_template();
    let n = u.len();
    if n >= 7 {
        let mut slots: Vec<Word> = u[..6].iter().map(|&x| wu(&[x])).collect();
        slots.push(wu(&u[6..]));
        return t7.substitute(&|i| slots.get(i as usize - 1).cloned());
    }
    // x⁻¹ = x·x − t(x)x + t(x⁻¹)I on the first few inverse units
    let c = 7 - n;
    let negs: Vec<usize> = (0..n).filter(|&i| u[i] < 0).take(c).collect();
    assert_eq!(negs.len(), c, "too few inverse units");
    let mut out = TracePolynomial::zero();
    for code in 0..3usize.pow(c as u32) {
        let mut coef = TracePolynomial::constant(q(1));
        let mut units = Vec::with_capacity(7);
        let mut all_split = true;
        for (i, &x) in u.iter().enumerate() {
            if let Some(ni) = negs.iter().position(|&p| p == i) {
                let choice = (code / 3usize.pow(ni as u32)) % 3;
                let y = -x;
                match choice {
                    0 => units.extend([y, y]),
                    1 => {
                        units.push(y);
                        coef = coef.mul(&ts(&[y]).neg());
                        all_split = false;
                    }
                    _ => {
                        coef = coef.mul(&ts(&[x]));
                        all_split = false;
                    }
                }
            } else {
                units.push(x);
            }
        }
        if all_split {
            debug_assert_eq!(units.len(), 7);
            let slots: Vec<Word> = units.iter().map(|&x| wu(&[x])).collect();
            out.add_assign(&t7.substitute(&|i| slots.get(i as usize - 1).cloned()));
        } else {
            out.add_assign(&coef.mul(&ts(&units)));
        }
    }
    out
}

type Cache = Mutex<FxHashMap<Id, Arc<FPoly>>>;

fn tier1_cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn minimal_cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn class_cache() -> &'static Mutex<HashMap<Vec<u32>, Arc<ClassRules>>> {
    static C: OnceLock<Mutex<HashMap<Vec<u32>, Arc<ClassRules>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Letters of a key, sorted, and the key with letters renamed to 1..y.
fn abstract_key(k: &CyclicKey) -> (CyclicKey, Vec<u32>) {
    let mut letters: Vec<u32> = k.units().iter().map(|u| u.unsigned_abs()).collect();
    letters.sort_unstable();
    letters.dedup();
    let idx = |i: u32| letters.binary_search(&i).unwrap() as u32 + 1;
    (k.relabel_monotone(&idx), letters)
}

/// Memoized per symbol. Work is done once per letter pattern on letters 1..y
/// and renamed for other letter sets; every rule here commutes with
/// order-preserving renaming.
fn cached(
    cache: &'static Cache,
    id: Id,
    compute: fn(&CyclicKey) -> Result<FPoly, ReduceError>,
) -> Result<Arc<FPoly>, ReduceError> {
    if let Some(p) = cache.lock().unwrap().get(&id) {
        return Ok(p.clone());
    }
    let k = fpoly::key(id);
    let (abs, letters) = abstract_key(&k);
    let p = if abs == k {
        Arc::new(compute(&k)?)
    } else {
        let a = cached(cache, fpoly::intern(&abs), compute)?;
        Arc::new(a.map_keys(&|s| s.relabel_monotone(&|j| letters[j as usize - 1])))
    };
    cache.lock().unwrap().insert(id, p.clone());
    Ok(p)
}

fn tier1_id(id: Id) -> Result<Arc<FPoly>, ReduceError> {
    cached(tier1_cache(), id, tier1_compute)
}

fn tier1_compute(k: &CyclicKey) -> Result<FPoly, ReduceError> {
    let action = analyze(k);
    if let Action::Basis(_) = action {
        return Ok(FPoly::of_key(k));
    }
    let p = step(k, action);
    let m = measure(k);
    for s in p.symbols() {
        if measure(&s) >= m {
            return Err(ReduceError::NotLower {
                input: k.to_string(),
                output: s.to_string(),
            });
        }
    }
    FPoly::from_tp(&p).map_ids(tier1_id)
}

pub(crate) fn basis_fpoly(p: &FPoly) -> Result<FPoly, ReduceError> {
    p.map_ids(tier1_id)
}

/// Rewrite into generator forms.
pub fn reduce_to_basis(p: &TracePolynomial) -> Result<TracePolynomial, ReduceError> {
    Ok(basis_fpoly(&FPoly::from_tp(p))?.to_tp())
}

pub fn reduce_word_to_basis(w: &Word) -> Result<TracePolynomial, ReduceError> {
    reduce_to_basis(&TracePolynomial::trace_of(w))
}

fn minimal_id(id: Id) -> Result<Arc<FPoly>, ReduceError> {
    cached(minimal_cache(), id, minimal_compute)
}

fn minimal_compute(k: &CyclicKey) -> Result<FPoly, ReduceError> {
    let ty = match analyze(k) {
        Action::Basis(t) => t,
        _ => return tier1_id(fpoly::intern(k))?.map_ids(minimal_id),
    };
    if !ty.is_tier2() {
        return Ok(FPoly::of_key(k));
    }
    let y = k.letter_count();
    let class = class_rules(&k.multidegree(y).expect("abstract letters"))?;
    match class.rule(k) {
        None => Ok(FPoly::of_key(k)),
        Some((kept, rest)) => {
            let mut out = FPoly::from_tp(&kept);
            let lower = FPoly::from_tp(&rest).map_ids(minimal_id)?;
            out.add_scaled(&lower, &Coef::int(1));
            Ok(out)
        }
    }
}

pub(crate) fn minimal_fpoly(p: &FPoly) -> Result<FPoly, ReduceError> {
    p.map_ids(minimal_id)
}

/// Rewrite into the minimal generating set for rank r.
pub fn reduce_to_minimal(p: &TracePolynomial, r: usize) -> Result<TracePolynomial, ReduceError> {
    let top = p.max_index();
    if top as usize > r {
        return Err(ReduceError::IndexOutOfRange { index: top, r });
    }
    Ok(minimal_fpoly(&FPoly::from_tp(p))?.to_tp())
}

pub fn reduce_word_to_minimal(w: &Word, r: usize) -> Result<TracePolynomial, ReduceError> {
    reduce_to_minimal(&TracePolynomial::trace_of(w), r)
}

/// A relation of a class: row over the class columns plus everything else.
#[derive(Debug, Clone)]
pub struct ClassRelation {
    pub label: String,
    pub row: Vec<Q>,
    pub rest: TracePolynomial,
}

#[derive(Debug, Clone)]
struct Removal {
    kept: Vec<(usize, Q)>,
    combo: Vec<(usize, Q)>,
}

/// Solved relations of one multidegree class over letters 1..y.
#[derive(Debug)]
pub struct ClassRules {
    pub ty: GeneratorType,
    pub pattern: Vec<u32>,
    pub columns: Vec<CyclicKey>,
    pub kept: Vec<CyclicKey>,
    pub relations: Vec<ClassRelation>,
    pub rank: usize,
    removed: HashMap<CyclicKey, Removal>,
}

impl ClassRules {
    pub fn name(&self) -> String {
        let d: Vec<String> = self.pattern.iter().map(|d| d.to_string()).collect();
        format!("{}[{}]", self.ty.pattern(), d.join(","))
    }

    pub fn removed(&self) -> Vec<CyclicKey> {
        let mut v: Vec<CyclicKey> = self.removed.keys().cloned().collect();
        v.sort();
        v
    }

    /// Kept part and unreduced remainder for a removed column.
    fn rule(&self, k: &CyclicKey) -> Option<(TracePolynomial, TracePolynomial)> {
        let r = self.removed.get(k)?;
        let mut kept = TracePolynomial::zero();
        for (i, c) in &r.kept {
            kept.add_scaled(&TracePolynomial::symbol(self.kept[*i].clone()), &-c.clone());
        }
        let mut rest = TracePolynomial::zero();
        for (i, c) in &r.combo {
            rest.add_scaled(&self.relations[*i].rest, &-c.clone());
        }
        Some((kept, rest))
    }

    /// Replacement of a removed column, before lower terms are reduced.
    pub fn replacement(&self, k: &CyclicKey) -> Option<TracePolynomial> {
        self.rule(k).map(|(a, b)| a.add(&b))
    }
}

/// Shape of a multidegree pattern over letters 1..y.
pub fn pattern_type(pattern: &[u32]) -> Option<GeneratorType> {
    let c = |d| pattern.iter().filter(|&&x| x == d).count() as u32;
    if pattern.iter().any(|&d| d == 0 || d > 3) {
        return None;
    }
    GeneratorType::from_shape(c(1), c(2), c(3))
}

/// Generator forms on letters 1..y with the given multidegree, sorted.
pub fn class_columns(pattern: &[u32]) -> Vec<CyclicKey> {
    let Some(ty) = pattern_type(pattern) else {
        return Vec::new();
    };
    let mut units = Vec::new();
    for (i, &d) in pattern.iter().enumerate() {
        let l = i as i32 + 1;
        match d {
            1 => units.push(l),
            2 => units.push(-l),
            _ => units.extend([l, -l]),
        }
    }
    // fix the first unit; the key is cyclic
    let first = units[0];
    let mut rest: Vec<i32> = units[1..].to_vec();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut |perm| {
        let mut w = vec![first];
        w.extend_from_slice(perm);
        let k = CyclicKey::from_units(&w);
        if k.weighted_length() == ty.weight() && classify(&k) == Some(ty) {
            out.push(k);
        }
    });
    out.sort();
    out.dedup();
    out
}

fn permute(v: &mut Vec<i32>, i: usize, f: &mut dyn FnMut(&[i32])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, f);
        v.swap(i, j);
    }
}

fn l(i: u32) -> Word {
    Word::letter(i, 1)
}

fn cat(ws: &[Word]) -> Word {
    ws.iter().fold(Word::empty(), |a, b| a.mul(b))
}

fn fund(s: [&Word; 6]) -> TracePolynomial {
    fundamental_lhs(s[0], s[1], s[2], s[3], s[4], s[5])
        .sub(&fundamental_relation(s[0], s[1], s[2], s[3], s[4], s[5]))
}

fn cyc(w: &Word, x: &Word, y: &Word, z: &Word) -> TracePolynomial {
    let (a, b) = cyclic_sum(w, x, y, z);
    a.sub(&b)
}

fn perms(items: &[u32]) -> Vec<Vec<u32>> {
    let mut v: Vec<i32> = items.iter().map(|&x| x as i32).collect();
    let mut out = Vec::new();
    permute(&mut v, 0, &mut |p| out.push(p.iter().map(|&x| x as u32).collect()));
    out.sort();
    out
}

/// Reference kept sets, in the notation t(letters).
const UVWXY_KEPT: [[i32; 5]; 12] = [
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
];

const VWXYZINV_KEPT: [[i32; 5]; 7] = [
    [2, 3, 4, 1, -5],
    [3, 1, 2, 4, -5],
    [3, 1, 4, 2, -5],
    [3, 2, 4, 1, -5],
    [4, 1, 2, 3, -5],
    [4, 1, 3, 2, -5],
    [4, 2, 3, 1, -5],
];

const UVWXYZ_KEPT: [[i32; 6]; 15] = [
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
];

const WXYZ_KEPT: [[i32; 4]; 5] = [[1, 2, 3, 4], [1, 2, 4, 3], [1, 3, 2, 4], [1, 3, 4, 2], [1, 4, 2, 3]];

/// Substitutions x_i → x_σ(i) applied to the five-letter fundamental relation.
pub const FIVE_PERMS: [[u32; 5]; 8] = [
    [1, 2, 3, 4, 5],
    [1, 2, 4, 3, 5],
    [1, 3, 2, 4, 5],
    [1, 4, 3, 2, 5],
    [1, 2, 3, 5, 4],
    [1, 3, 4, 2, 5],
    [1, 4, 2, 3, 5],
    [1, 2, 4, 5, 3],
];

fn swap_letter(a: u32, b: u32) -> impl Fn(u32) -> u32 {
    move |i| {
        if i == a {
            b
        } else if i == b {
            a
        } else {
            i
        }
    }
}

fn keys_of<const N: usize>(rows: &[[i32; N]], f: &dyn Fn(u32) -> u32) -> Vec<CyclicKey> {
    rows.iter()
        .map(|r| {
            let u: Vec<i32> = r.iter().map(|&x| f(x.unsigned_abs()) as i32 * x.signum()).collect();
            CyclicKey::from_units(&u)
        })
        .collect()
}

/// Order relations t(W X Y Z n⁻¹) + t(W Y X Z n⁻¹) ≡ 0 for the negative letter n.
pub fn order_relations(n: u32, positives: &[u32]) -> Vec<(String, TracePolynomial)> {
    let mut out = Vec::new();
    for &w in positives {
        for &z in positives {
            if z == w {
                continue;
            }
            let mid: Vec<u32> = positives.iter().copied().filter(|&x| x != w && x != z).collect();
            let (x, y) = (mid[0], mid[1]);
            out.push((
                format!("order(x{n}; x{w}, x{x}x{y}, x{z})"),
                fund([&l(n), &l(n), &l(w), &l(x), &l(y), &l(z)]),
            ));
        }
    }
    out
}

/// The five relations r1..r5 among VWXYZ⁻¹ forms with negative letter 5,
/// with letters renamed by `f`.
pub fn six5_relations(f: &dyn Fn(u32) -> u32) -> Vec<(String, TracePolynomial)> {
    let x = |i: u32| l(f(i));
    let r1 = |a: u32, b: u32, c: u32, d: u32| fund([&x(a), &x(b), &x(5), &x(c), &x(d), &x(5)]);
    let r3 = |a: u32, b: u32, c: u32, d: u32| cyc(&cat(&[x(a), x(5), x(b)]), &x(5), &x(c), &x(d));
    vec![
        ("r1".into(), r1(1, 2, 3, 4)),
        ("r2".into(), r1(3, 2, 1, 4)),
        ("r3".into(), r3(2, 3, 4, 1)),
        ("r4".into(), r3(2, 1, 4, 3)),
        ("r5".into(), r3(4, 3, 2, 1)),
    ]
}

/// The generating relations of a class, as polynomials equal to zero.
fn class_relations(ty: GeneratorType, pattern: &[u32]) -> Vec<(String, TracePolynomial)> {
    use GeneratorType::*;
    let with = |d: u32| -> Vec<u32> {
        (1..=pattern.len() as u32)
            .filter(|&i| pattern[i as usize - 1] == d)
            .collect()
    };
    let li = |i: u32| Word::letter(i, -1);
    match ty {
        Commutator => {
            let (a, b) = rank2sum();
            vec![("rank2sum".into(), a.sub(&b))]
        }
        XInvYInvZInv => vec![(
            "fundamental(x1,x1,x2,x2,x3,x3)".into(),
            fund([&l(1), &l(1), &l(2), &l(2), &l(3), &l(3)]),
        )],
        WXYZ => vec![("cyclic(x1; x2,x3,x4)".into(), cyc(&l(1), &l(2), &l(3), &l(4)))],
        WXYZInv => {
            let d = with(2)[0];
            let o = with(1);
            vec![(
                format!("cyclic(x{d}^-1; rest)"),
                cyc(&li(d), &l(o[0]), &l(o[1]), &l(o[2])),
            )]
        }
        WXYInvZInv => {
            let (p, n) = (with(1), with(2));
            vec![(
                "fundamental(a,b,c,d,d,c)".into(),
                fund([&l(p[0]), &l(p[1]), &l(n[0]), &l(n[1]), &l(n[1]), &l(n[0])]),
            )]
        }
        WXYZYInv => {
            // slots (c,c,a,c,b,d) over the orders of the other three letters
            let c = with(3)[0];
            perms(&with(1))
                .into_iter()
                .map(|o| {
                    (
                        format!("fundamental(x{c},x{c},x{},x{c},x{},x{})", o[0], o[1], o[2]),
                        fund([&l(c), &l(c), &l(o[0]), &l(c), &l(o[1]), &l(o[2])]),
                    )
                })
                .collect()
        }
        UVWXY => {
            let mut out = Vec::new();
            for s in FIVE_PERMS {
                out.push((
                    format!("fundfive{s:?}"),
                    fund([&l(s[0]), &l(s[1]), &l(s[2]), &l(s[3]), &l(s[4]), &Word::empty()]),
                ));
            }
            for j in 2..=5u32 {
                let o: Vec<u32> = (2..=5).filter(|&i| i != j).collect();
                out.push((
                    format!("cyclic(x1x{j}; rest)"),
                    cyc(&cat(&[l(1), l(j)]), &l(o[0]), &l(o[1]), &l(o[2])),
                ));
            }
            out
        }
        VWXYZInv => {
            let n = with(2)[0];
            let tau = swap_letter(n, 5);
            let mut out = order_relations(n, &with(1));
            out.extend(six5_relations(&tau));
            out
        }
        UVWXYZ => six6_relations(),
        _ => Vec::new(),
    }
}

/// The 120 relations among six-letter forms: images of two cyclic sums under
/// permutations of x1..x5, deduplicated.
pub fn six6_relations() -> Vec<(String, TracePolynomial)> {
    let mut seen = std::collections::HashSet::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for s in perms(&[1, 2, 3, 4, 5]) {
        let mut ka = [s[3], s[4]];
        ka.sort();
        if seen.insert((0, vec![s[0], s[1], s[2], ka[0], ka[1]])) {
            a.push((
                format!("cyclic(x{}x{}x{}; x{}, x{}, x6)", s[0], s[1], s[2], s[3], s[4]),
                cyc(&cat(&[l(s[0]), l(s[1]), l(s[2])]), &l(s[3]), &l(s[4]), &l(6)),
            ));
        }
        let mut kb = [(s[1], s[2]), (s[3], s[4])];
        kb.sort();
        if seen.insert((1, vec![s[0], kb[0].0, kb[0].1, kb[1].0, kb[1].1])) {
            b.push((
                format!("cyclic(x{}; x{}x{}, x{}x{}, x6)", s[0], s[1], s[2], s[3], s[4]),
                cyc(&l(s[0]), &cat(&[l(s[1]), l(s[2])]), &cat(&[l(s[3]), l(s[4])]), &l(6)),
            ));
        }
    }
    a.extend(b);
    a
}

fn prescribed_kept(ty: GeneratorType, pattern: &[u32]) -> Option<Vec<CyclicKey>> {
    use GeneratorType::*;
    let id = |i: u32| i;
    match ty {
        Commutator => Some(vec![CyclicKey::from_units(&[1, 2, -1, -2])]),
        WXYZ => Some(keys_of(&WXYZ_KEPT, &id)),
        UVWXY => Some(keys_of(&UVWXY_KEPT, &id)),
        VWXYZInv => {
            let n = pattern.iter().position(|&d| d == 2).unwrap() as u32 + 1;
            Some(keys_of(&VWXYZINV_KEPT, &swap_letter(n, 5)))
        }
        UVWXYZ => Some(keys_of(&UVWXYZ_KEPT, &id)),
        _ => None,
    }
}

/// Split a reduced relation into its row over `columns` and the rest.
pub fn split_relation(p: &TracePolynomial, columns: &[CyclicKey]) -> (Vec<Q>, TracePolynomial) {
    let mut row = vec![Q::zero(); columns.len()];
    let mut rest = p.clone();
    for (j, c) in columns.iter().enumerate() {
        let m = Monomial::from_keys(vec![c.clone()]);
        let v = p.coefficient(&m);
        if !v.is_zero() {
            rest.add_term(m, -v.clone());
            row[j] = v;
        }
    }
    (row, rest)
}

/// Reduced row echelon form in place; returns pivot columns among the first `ncols`.
pub fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn build_class(pattern: &[u32]) -> Result<ClassRules, ReduceError> {
    let ty = pattern_type(pattern)
        .filter(|t| t.is_tier2())
        .ok_or_else(|| ReduceError::Class {
            class: format!("{pattern:?}"),
            detail: "not a reducible class".into(),
        })?;
    let name = format!("{}{:?}", ty.pattern(), pattern);
    let err = |detail: String| ReduceError::Class {
        class: name.clone(),
        detail,
    };
    let columns = class_columns(pattern);
    let mut relations = Vec::new();
    for (label, raw) in class_relations(ty, pattern) {
        let p = reduce_to_basis(&raw)?;
        let (row, rest) = split_relation(&p, &columns);
        if rest.max_symbol_weight() >= ty.weight() {
            return Err(err(format!("{label} leaves a same-weight term outside the class")));
        }
        relations.push(ClassRelation { label, row, rest });
    }
    let prescribed = prescribed_kept(ty, pattern);
    // column order for elimination: removed first when the kept set is given
    let order: Vec<usize> = match &prescribed {
        Some(kept) => {
            for k in kept {
                if !columns.contains(k) {
                    return Err(err(format!("kept {k} is not a column")));
                }
            }
            let (mut a, b): (Vec<usize>, Vec<usize>) =
                (0..columns.len()).partition(|&j| !kept.contains(&columns[j]));
            a.extend(b);
            a
        }
        None => (0..columns.len()).collect(),
    };
    let nr = relations.len();
    let nc = columns.len();
    let mut m: Vec<Vec<Q>> = relations
        .iter()
        .enumerate()
        .map(|(i, rel)| {
            let mut v: Vec<Q> = order.iter().map(|&j| rel.row[j].clone()).collect();
            v.extend((0..nr).map(|k| if k == i { Q::one() } else { Q::zero() }));
            v
        })
        .collect();
    let pivots = rref(&mut m, nc);
    let rank = pivots.len();
    if let Some(kept) = &prescribed {
        let nrem = nc - kept.len();
        if pivots != (0..nrem).collect::<Vec<_>>() {
            return Err(err(format!(
                "relations have rank {rank} on the {nrem} removed columns"
            )));
        }
    }
    let removed_cols: Vec<usize> = pivots.iter().map(|&p| order[p]).collect();
    let kept_pos: Vec<usize> = (0..nc).filter(|p| !pivots.contains(p)).collect();
    let kept: Vec<CyclicKey> = kept_pos.iter().map(|&p| columns[order[p]].clone()).collect();
    let mut removed = HashMap::new();
    for (row, &col) in removed_cols.iter().enumerate() {
        let kc = kept_pos
            .iter()
            .enumerate()
            .filter(|(_, &p)| !m[row][p].is_zero())
            .map(|(i, &p)| (i, m[row][p].clone()))
            .collect();
        let combo = (0..nr)
            .filter(|&i| !m[row][nc + i].is_zero())
            .map(|i| (i, m[row][nc + i].clone()))
            .collect();
        removed.insert(columns[col].clone(), Removal { kept: kc, combo });
    }
    let mut kept_sorted = kept;
    kept_sorted.sort();
    // kept indices refer to the pivot-order list; rebuild against the sorted list
    let kept_unsorted: Vec<CyclicKey> = kept_pos.iter().map(|&p| columns[order[p]].clone()).collect();
    for r in removed.values_mut() {
        for (i, _) in r.kept.iter_mut() {
            *i = kept_sorted.binary_search(&kept_unsorted[*i]).unwrap();
        }
    }
    Ok(ClassRules {
        ty,
        pattern: pattern.to_vec(),
        columns,
        kept: kept_sorted,
        relations,
        rank,
        removed,
    })
}

/// Solved rules for a class over letters 1..y, built once and shared.
pub fn class_rules(pattern: &[u32]) -> Result<Arc<ClassRules>, ReduceError> {
    if let Some(c) = class_cache().lock().unwrap().get(pattern) {
        return Ok(c.clone());
    }
    let c = Arc::new(build_class(pattern)?);
    Ok(class_cache()
        .lock()
        .unwrap()
        .entry(pattern.to_vec())
        .or_insert(c)
        .clone())
}

/// All multidegree patterns of a reducible shape over letters 1..y.
pub fn type_patterns(ty: GeneratorType) -> Vec<Vec<u32>> {
    let y = ty.letters() as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; y];
    fn go(i: usize, cur: &mut Vec<u32>, ty: GeneratorType, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            if pattern_type(cur) == Some(ty) {
                out.push(cur.clone());
            }
            return;
        }
        for d in 1..=3 {
            cur[i] = d;
            go(i + 1, cur, ty, out);
        }
    }
    go(0, &mut cur, ty, &mut out);
    out
}

/// Kept generators of a shape on letters 1..y, in key order.
pub fn kept_forms(ty: GeneratorType) -> Result<Vec<CyclicKey>, ReduceError> {
    let mut out = Vec::new();
    for p in type_patterns(ty) {
        if ty.is_tier2() {
            out.extend(class_rules(&p)?.kept.iter().cloned());
        } else {
            out.extend(class_columns(&p));
        }
    }
    out.sort();
    Ok(out)
}

/// Every tier-2 rule on letters 1..r.
pub fn tier2_rules(r: usize) -> Result<Vec<RewriteRule>, ReduceError> {
    let mut out = Vec::new();
    for ty in GeneratorType::ALL.into_iter().filter(|t| t.is_tier2()) {
        let y = ty.letters() as usize;
        if y > r {
            continue;
        }
        for p in type_patterns(ty) {
            let class = class_rules(&p)?;
            for k in class.removed() {
                let rep = class.replacement(&k).unwrap();
                for subset in crate::generators::subsets(r as u32, y) {
                    let f = |j: u32| subset[j as usize - 1];
                    out.push(RewriteRule {
                        removed: GeneratorInstance {
                            ty,
                            key: k.relabel_monotone(&f),
                        },
                        replacement: rep.relabel_monotone(&f),
                    });
                }
            }
        }
    }
    Ok(out)
}

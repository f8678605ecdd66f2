//! Free-group words, cyclic keys, weighted length and multidegree.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("letter index must be at least 1 (at byte {pos})")]
    ZeroIndex { pos: usize },
    #[error("exponent must be nonzero (at byte {pos})")]
    ZeroExponent { pos: usize },
    #[error("letter x{index} is out of range for r = {r}")]
    IndexOutOfRange { index: u32, r: usize },
}

/// A generator raised to a nonzero power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: u32,
    pub exp: i32,
}

impl Letter {
    pub fn new(index: u32, exp: i32) -> Self {
        assert!(index >= 1, "letter index must be positive");
        assert!(exp != 0, "letter exponent must be nonzero");
        Letter { index, exp }
    }

    pub fn weight(&self) -> u32 {
        if self.exp > 0 {
            self.exp as u32
        } else {
            2 * self.exp.unsigned_abs()
        }
    }
}

/// Sort code of a unit step: index ascending, then +1 before -1.
#[inline]
pub fn unit_code(u: i32) -> u32 {
    (u.unsigned_abs() << 1) | (u < 0) as u32
}

#[inline]
pub fn unit_weight(u: i32) -> u32 {
    if u > 0 {
        1
    } else {
        2
    }
}

/// Compare unit sequences lexicographically under the letter order.
pub fn cmp_units(a: &[i32], b: &[i32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match unit_code(*x).cmp(&unit_code(*y)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// A freely reduced word. Adjacent letters never share an index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<(u32, i32)>", from = "Vec<(u32, i32)>")]
pub struct Word {
    letters: Vec<Letter>,
}

impl From<Word> for Vec<(u32, i32)> {
    fn from(w: Word) -> Self {
        w.letters.iter().map(|l| (l.index, l.exp)).collect()
    }
}

impl From<Vec<(u32, i32)>> for Word {
    fn from(v: Vec<(u32, i32)>) -> Self {
        Word::from_pairs(&v)
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letter(index: u32, exp: i32) -> Self {
        Word {
            letters: vec![Letter::new(index, exp)],
        }
    }

    /// Builds a word from (index, exponent) pairs, merging and cancelling eagerly.
    /// Zero exponents are dropped.
    pub fn from_pairs(pairs: &[(u32, i32)]) -> Self {
        let mut w = Word::empty();
        for &(i, e) in pairs {
            w.push(i, e);
        }
        w
    }

    /// Builds a word from signed unit steps (+i for x_i, -i for x_i^-1).
    pub fn from_units(units: &[i32]) -> Self {
        let mut w = Word::empty();
        for &u in units {
            w.push(u.unsigned_abs(), u.signum());
        }
        w
    }

    fn push(&mut self, index: u32, exp: i32) {
        if exp == 0 {
            return;
        }
        assert!(index >= 1, "letter index must be positive");
        if let Some(last) = self.letters.last_mut() {
            if last.index == index {
                last.exp += exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { index, exp });
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.index, l.exp);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    index: l.index,
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// Signed unit steps, e.g. x1^2 x2^-1 gives [1, 1, -2].
    pub fn units(&self) -> Vec<i32> {
        let mut out = Vec::new();
        for l in &self.letters {
            let s = l.index as i32 * l.exp.signum();
            for _ in 0..l.exp.unsigned_abs() {
                out.push(s);
            }
        }
        out
    }

    pub fn weighted_length(&self) -> u32 {
        self.letters.iter().map(Letter::weight).sum()
    }

    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn multidegree(&self, r: usize) -> Result<Vec<u32>, WordError> {
        let mut d = vec![0u32; r];
        for l in &self.letters {
            let i = l.index as usize;
            if i > r {
                return Err(WordError::IndexOutOfRange { index: l.index, r });
            }
            d[i - 1] += l.weight();
        }
        Ok(d)
    }

    /// Rotation by k letters to the left.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut pairs: Vec<(u32, i32)> = Vec::with_capacity(self.letters.len());
        for l in self.letters[k..].iter().chain(self.letters[..k].iter()) {
            pairs.push((l.index, l.exp));
        }
        Word::from_pairs(&pairs)
    }

    pub fn cyclically_reduce(&self) -> Word {
        let mut l = self.letters.clone();
        loop {
            if l.len() < 2 {
                break;
            }
            let (a, b) = (l[0], l[l.len() - 1]);
            if a.index != b.index {
                break;
            }
            let e = a.exp + b.exp;
            l.pop();
            if e == 0 {
                l.remove(0);
            } else {
                l[0].exp = e;
            }
        }
        Word { letters: l }
    }

    /// Machine-readable text in the t(...) unit notation, e.g. "1,2,-1".
    pub fn unit_text(&self) -> String {
        self.units()
            .iter()
            .map(|u| u.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.exp == 1 {
                    format!("x{}", l.index)
                } else {
                    format!("x{}^{}", l.index, l.exp)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Minimal rotation start of a cyclic unit sequence.
pub fn min_rotation(units: &[i32]) -> usize {
    let n = units.len();
    let mut best = 0;
    for s in 1..n {
        let mut ord = Ordering::Equal;
        for k in 0..n {
            let a = unit_code(units[(s + k) % n]);
            let b = unit_code(units[(best + k) % n]);
            if a != b {
                ord = a.cmp(&b);
                break;
            }
        }
        if ord == Ordering::Less {
            best = s;
        }
    }
    best
}

/// Cyclically reduces a unit sequence in place (free reduction included).
pub fn reduce_cyclic_units(units: &[i32]) -> Vec<i32> {
    let mut st: Vec<i32> = Vec::with_capacity(units.len());
    for &u in units {
        if st.last() == Some(&-u) {
            st.pop();
        } else {
            st.push(u);
        }
    }
    let (mut a, mut b) = (0usize, st.len());
    while b - a >= 2 && st[a] == -st[b - 1] {
        a += 1;
        b -= 1;
    }
    st[a..b].to_vec()
}

/// Canonical representative of a conjugacy class: the minimal rotation of the
/// cyclic reduction, stored as signed unit steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CyclicKey {
    units: Vec<i32>,
}

impl CyclicKey {
    pub fn empty() -> Self {
        CyclicKey { units: Vec::new() }
    }

    pub fn of(w: &Word) -> Self {
        CyclicKey::from_units(&w.units())
    }

    pub fn from_units(units: &[i32]) -> Self {
        let red = reduce_cyclic_units(units);
        let s = min_rotation(&red);
        let mut units = Vec::with_capacity(red.len());
        units.extend_from_slice(&red[s..]);
        units.extend_from_slice(&red[..s]);
        CyclicKey { units }
    }

    /// Wraps units already known to be canonical.
    pub fn from_canonical_units(units: Vec<i32>) -> Self {
        debug_assert_eq!(CyclicKey::from_units(&units).units, units);
        CyclicKey { units }
    }

    pub fn units(&self) -> &[i32] {
        &self.units
    }

    pub fn word(&self) -> Word {
        Word::from_units(&self.units)
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn weighted_length(&self) -> u32 {
        self.units.iter().map(|&u| unit_weight(u)).sum()
    }

    pub fn max_index(&self) -> u32 {
        self.units.iter().map(|u| u.unsigned_abs()).max().unwrap_or(0)
    }

    /// Number of distinct letters.
    pub fn letter_count(&self) -> usize {
        let mut v: Vec<u32> = self.units.iter().map(|u| u.unsigned_abs()).collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    pub fn multidegree(&self, r: usize) -> Result<Vec<u32>, WordError> {
        let mut d = vec![0u32; r];
        for &u in &self.units {
            let i = u.unsigned_abs() as usize;
            if i > r {
                return Err(WordError::IndexOutOfRange {
                    index: i as u32,
                    r,
                });
            }
            d[i - 1] += unit_weight(u);
        }
        Ok(d)
    }

    pub fn inverse(&self) -> CyclicKey {
        let inv: Vec<i32> = self.units.iter().rev().map(|u| -u).collect();
        CyclicKey::from_units(&inv)
    }

    /// Rename letters by a strictly increasing map; the rotation stays minimal.
    pub fn relabel_monotone(&self, f: &dyn Fn(u32) -> u32) -> CyclicKey {
        let units = self
            .units
            .iter()
            .map(|&u| f(u.unsigned_abs()) as i32 * u.signum())
            .collect();
        CyclicKey { units }
    }

    /// Text inside t(...): comma-separated signed letter indices.
    pub fn text(&self) -> String {
        self.units
            .iter()
            .map(|u| u.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Ord for CyclicKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weighted_length()
            .cmp(&other.weighted_length())
            .then_with(|| cmp_units(&self.units, &other.units))
    }
}

impl PartialOrd for CyclicKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CyclicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t({})", self.text())
    }
}

impl serde::Serialize for CyclicKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn canonical_cyclic_key(w: &Word) -> CyclicKey {
    CyclicKey::of(w)
}

pub fn weighted_length(w: &Word) -> u32 {
    w.weighted_length()
}

pub fn multidegree(w: &Word, r: usize) -> Result<Vec<u32>, WordError> {
    w.multidegree(r)
}

/// Parses whitespace-separated tokens `x<i>` or `x<i>^<e>`; a lone `e` is
/// the empty word.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    if text.trim() == "e" {
        return Ok(Word::empty());
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut pairs = Vec::new();
    let skip_ws = |p: &mut usize| {
        while *p < bytes.len() && bytes[*p].is_ascii_whitespace() {
            *p += 1;
        }
    };
    skip_ws(&mut pos);
    while pos < bytes.len() {
        let start = pos;
        if bytes[pos] != b'x' {
            return Err(WordError::Syntax {
                pos,
                msg: format!("expected 'x', found '{}'", bytes[pos] as char),
            });
        }
        pos += 1;
        let ds = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if ds == pos {
            return Err(WordError::Syntax {
                pos,
                msg: "expected letter index".into(),
            });
        }
        let index: u32 = text[ds..pos].parse().map_err(|_| WordError::Syntax {
            pos: ds,
            msg: "letter index too large".into(),
        })?;
        if index == 0 {
            return Err(WordError::ZeroIndex { pos: ds });
        }
        let mut exp = 1i32;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let es = pos;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                pos += 1;
            }
            let dstart = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if dstart == pos {
                return Err(WordError::Syntax {
                    pos,
                    msg: "expected exponent".into(),
                });
            }
            exp = text[es..pos].parse().map_err(|_| WordError::Syntax {
                pos: es,
                msg: "exponent too large".into(),
            })?;
            if exp == 0 {
                return Err(WordError::ZeroExponent { pos: es });
            }
        }
        if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            return Err(WordError::Syntax {
                pos,
                msg: format!("unexpected '{}' after token at {}", bytes[pos] as char, start),
            });
        }
        pairs.push((index, exp));
        skip_ws(&mut pos);
    }
    Ok(Word::from_pairs(&pairs))
}

/// Parses the machine form: a JSON array of [index, exponent] pairs.
pub fn parse_word_json(text: &str) -> Result<Word, WordError> {
    let v: Vec<(i64, i64)> = serde_json::from_str(text).map_err(|e| WordError::Syntax {
        pos: e.column().saturating_sub(1),
        msg: e.to_string(),
    })?;
    let mut pairs = Vec::with_capacity(v.len());
    for (k, (i, e)) in v.into_iter().enumerate() {
        if i <= 0 {
            return Err(WordError::ZeroIndex { pos: k });
        }
        if e == 0 {
            return Err(WordError::ZeroExponent { pos: k });
        }
        pairs.push((i as u32, e as i32));
    }
    Ok(Word::from_pairs(&pairs))
}

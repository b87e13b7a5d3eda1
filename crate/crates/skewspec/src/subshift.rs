//! Subshifts of finite type over {1, ..., n}: words, eventually periodic
//! base sequences, the product-topology metric, primitivity exponents and
//! constructive specification witnesses in the base.
//!
//! Base points are restricted to eventually periodic sequences: every
//! object the constructions manipulate (periodic anchors, periodic
//! witnesses, finite-horizon segments) is determined by finitely many
//! symbols, and any sequence can be padded periodically beyond the
//! horizon without changing a finite-horizon check.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Symbols are 1-based, matching the digit strings "1".."9" used in
/// configs and reports.
pub type Symbol = usize;

/// Finite word over {1, ..., n}. May be empty (empty connectors are
/// legitimate in the full shift); period words of base points are
/// required nonempty at that boundary.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// The word repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * times);
        for _ in 0..times {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s <= 9) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Digit string over "1".."9"; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c.to_digit(10) {
                Some(d) if d >= 1 => out.push(d as usize),
                _ => {
                    return Err(Error::InvalidWord(format!(
                        "'{s}': symbols must be digits 1..9"
                    )))
                }
            }
        }
        Ok(Word(out))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(de::Error::custom)
    }
}

/// Subshift of finite type: alphabet {1, ..., n} and an n-by-n transition
/// matrix (`allowed[a-1][b-1]` iff the word "ab" is permitted). Every
/// symbol must have at least one allowed successor and predecessor.
#[derive(Clone, PartialEq, Eq)]
pub struct Sft {
    n: usize,
    allowed: Vec<Vec<bool>>,
}

impl Sft {
    pub fn new(n: usize, allowed: Vec<Vec<bool>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSft("alphabet must be nonempty".into()));
        }
        if allowed.len() != n || allowed.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSft(format!(
                "transition matrix must be {n}x{n}"
            )));
        }
        for (a, row) in allowed.iter().enumerate() {
            if !row.iter().any(|&x| x) {
                return Err(Error::InvalidSft(format!(
                    "symbol {} has no allowed successor",
                    a + 1
                )));
            }
            if !allowed.iter().any(|r| r[a]) {
                return Err(Error::InvalidSft(format!(
                    "symbol {} has no allowed predecessor",
                    a + 1
                )));
            }
        }
        Ok(Sft { n, allowed })
    }

    /// The full shift on n symbols (all transitions allowed).
    pub fn full_shift(n: usize) -> Result<Self> {
        Sft::new(n, vec![vec![true; n]; n])
    }

    /// All transitions allowed except the listed ordered pairs.
    pub fn from_forbidden_pairs(n: usize, pairs: &[(Symbol, Symbol)]) -> Result<Self> {
        let mut allowed = vec![vec![true; n]; n];
        for &(a, b) in pairs {
            if a == 0 || a > n || b == 0 || b > n {
                return Err(Error::SymbolOutOfRange {
                    symbol: if a == 0 || a > n { a } else { b },
                    alphabet: n,
                });
            }
            allowed[a - 1][b - 1] = false;
        }
        Sft::new(n, allowed)
    }

    /// The golden-mean shift: two symbols, "22" forbidden.
    pub fn golden_mean() -> Self {
        Sft::from_forbidden_pairs(2, &[(2, 2)]).unwrap()
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn allowed_matrix(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s == 0 || s > self.n {
            Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_allowed(&self, a: Symbol, b: Symbol) -> bool {
        a >= 1 && a <= self.n && b >= 1 && b <= self.n && self.allowed[a - 1][b - 1]
    }

    /// True iff every adjacent pair of `w` is allowed (and all symbols
    /// are in range). The empty word and single symbols are words.
    pub fn is_word(&self, w: &Word) -> bool {
        if w.symbols().iter().any(|&s| s == 0 || s > self.n) {
            return false;
        }
        w.symbols().windows(2).all(|p| self.is_allowed(p[0], p[1]))
    }

    /// True iff the eventually periodic sequence lies in the subshift:
    /// all adjacencies hold, including the preperiod-to-period seam and
    /// the periodic wrap.
    pub fn contains(&self, x: &BasePoint) -> bool {
        let pre = x.preperiod().symbols();
        let per = x.period().symbols();
        if !self.is_word(x.preperiod()) || !self.is_word(x.period()) {
            return false;
        }
        if let Some(&last) = pre.last() {
            if !self.is_allowed(last, per[0]) {
                return false;
            }
        }
        self.is_allowed(per[per.len() - 1], per[0])
    }

    /// The minimal P >= 0 such that every ordered symbol pair is joined
    /// by an allowed path of every length t >= P. P = 0 iff all pairs
    /// are directly adjacent (the full shift); otherwise P is the least
    /// t with A^t all-positive, found by boolean matrix powers up to the
    /// Wielandt bound (n-1)^2 + 1.
    pub fn primitivity_exponent(&self) -> Result<usize> {
        let all_positive = |m: &[Vec<bool>]| m.iter().all(|row| row.iter().all(|&x| x));
        if all_positive(&self.allowed) {
            return Ok(0);
        }
        let bound = (self.n - 1) * (self.n - 1) + 1;
        let mut power = self.allowed.clone();
        for t in 2..=bound {
            power = self.bool_mul(&power);
            if all_positive(&power) {
                return Ok(t);
            }
        }
        Err(Error::NotPrimitive)
    }

    fn bool_mul(&self, m: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let n = self.n;
        let mut out = vec![vec![false; n]; n];
        for (row, m_row) in out.iter_mut().zip(m) {
            for (c, &via) in m_row.iter().enumerate() {
                if via {
                    for (cell, &step) in row.iter_mut().zip(&self.allowed[c]) {
                        *cell |= step;
                    }
                }
            }
        }
        out
    }

    /// The lexicographically smallest word w of length t with a.w.b a
    /// valid word; for t = 0 the empty word (a.b must then be allowed).
    /// Exists for every pair whenever t >= the primitivity exponent.
    pub fn connecting_word(&self, a: Symbol, b: Symbol, t: usize) -> Result<Word> {
        self.check_symbol(a)?;
        self.check_symbol(b)?;
        let no_path = || Error::NoPath {
            from: a,
            to: b,
            len: t,
        };
        if t == 0 {
            return if self.is_allowed(a, b) {
                Ok(Word::empty())
            } else {
                Err(no_path())
            };
        }
        // reach[i][s]: from s there is a path of i further symbols whose
        // last symbol is adjacent to b
        let mut reach = vec![vec![false; self.n + 1]; t];
        for (s, cell) in reach[0].iter_mut().enumerate().skip(1) {
            *cell = self.is_allowed(s, b);
        }
        for i in 1..t {
            for s in 1..=self.n {
                reach[i][s] = (1..=self.n).any(|nx| self.is_allowed(s, nx) && reach[i - 1][nx]);
            }
        }
        let mut prev = a;
        let mut out = Vec::with_capacity(t);
        for pos in 1..=t {
            let need = t - pos;
            let next = (1..=self.n)
                .find(|&s| self.is_allowed(prev, s) && reach[need][s])
                .ok_or_else(no_path)?;
            out.push(next);
            prev = next;
        }
        Ok(Word(out))
    }

    /// A valid specification gap length for the subshift at tolerance
    /// eps: K = h(eps) + P, where h is the agreement depth (rho <= eps
    /// iff the first h symbols agree) and P the primitivity exponent.
    pub fn base_gap_length(&self, eps: &Rational) -> Result<usize> {
        check_eps(eps)?;
        Ok(agreement_depth(eps) + self.primitivity_exponent()?)
    }
}

impl fmt::Debug for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sft(n={}, allowed={:?})", self.n, self.allowed)
    }
}

pub(crate) fn check_eps(eps: &Rational) -> Result<()> {
    if eps.is_positive() && *eps < Rational::one() {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps.to_string()))
    }
}

/// Minimal h >= 0 with 2^-h <= eps: agreement of the first h symbols
/// forces rho <= eps, and no shorter agreement does.
pub fn agreement_depth(eps: &Rational) -> usize {
    assert!(eps.is_positive(), "agreement depth needs eps > 0");
    let mut h = 0usize;
    let mut pow = Rational::one();
    while &pow * eps < Rational::one() {
        pow = pow * Rational::from_int(2);
        h += 1;
    }
    h
}

/// Eventually periodic base sequence preperiod . period^infinity. A
/// periodic point has an empty preperiod. Structural equality compares
/// representations; [`BasePoint::seq_eq`] compares the sequences.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasePoint {
    preperiod: Word,
    period: Word,
}

impl BasePoint {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidWord("period word must be nonempty".into()));
        }
        Ok(BasePoint { preperiod, period })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        BasePoint::new(Word::empty(), period)
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The i-th symbol of the represented infinite sequence.
    pub fn symbol_at(&self, i: usize) -> Symbol {
        let pre = self.preperiod.symbols();
        if i < pre.len() {
            pre[i]
        } else {
            let per = self.period.symbols();
            per[(i - pre.len()) % per.len()]
        }
    }

    /// Drops the first symbol; on a purely periodic point this rotates
    /// the period word.
    pub fn shift(&self) -> BasePoint {
        self.shift_by(1)
    }

    /// k-fold shift, computed by index arithmetic.
    pub fn shift_by(&self, k: usize) -> BasePoint {
        let pre = self.preperiod.symbols();
        let per = self.period.symbols();
        if k < pre.len() {
            BasePoint {
                preperiod: Word(pre[k..].to_vec()),
                period: self.period.clone(),
            }
        } else {
            let r = (k - pre.len()) % per.len();
            let mut rotated = per[r..].to_vec();
            rotated.extend_from_slice(&per[..r]);
            BasePoint {
                preperiod: Word::empty(),
                period: Word(rotated),
            }
        }
    }

    /// Canonical representation: primitive period root, then the
    /// shortest preperiod (trailing preperiod symbols that replicate the
    /// period tail are absorbed by rotating the period).
    pub fn canonical(&self) -> BasePoint {
        let per = self.period.symbols();
        let p = per.len();
        let mut root = p;
        for d in 1..p {
            if p.is_multiple_of(d) && (d..p).all(|i| per[i] == per[i % d]) {
                root = d;
                break;
            }
        }
        let mut period = per[..root].to_vec();
        let mut pre = self.preperiod.symbols().to_vec();
        while let Some(&last) = pre.last() {
            if last == *period.last().unwrap() {
                pre.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        BasePoint {
            preperiod: Word(pre),
            period: Word(period),
        }
    }

    /// True iff the two represented sequences are equal (decided exactly
    /// by canonical alignment, never by truncation).
    pub fn seq_eq(&self, other: &BasePoint) -> bool {
        self.canonical() == other.canonical()
    }

    /// The sequence metric: 2^-j for the first disagreement index j, and
    /// exactly 0 for equal sequences. rho < 1 iff the first symbols
    /// agree, which is the only property the constructions rely on
    /// beyond the agreement depth h(eps).
    pub fn rho(&self, other: &BasePoint) -> Rational {
        let scan = self.preperiod.len().max(other.preperiod.len())
            + self.period.len().lcm(&other.period.len());
        for i in 0..scan {
            if self.symbol_at(i) != other.symbol_at(i) {
                return Rational::pow2_neg(i);
            }
        }
        Rational::zero()
    }
}

impl fmt::Display for BasePoint {
    /// "preperiod|period", e.g. "12|3"; purely periodic points render
    /// with an empty preperiod, e.g. "|12".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.preperiod, self.period)
    }
}

impl fmt::Debug for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BasePoint {
    type Err = Error;

    /// "pre|per", "|per", or a bare period word "per".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pre, per) = match s.split_once('|') {
            Some((pre, per)) => (pre.parse()?, per.parse()?),
            None => (Word::empty(), s.parse()?),
        };
        BasePoint::new(pre, per)
    }
}

impl Serialize for BasePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BasePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(de::Error::custom)
    }
}

/// One requested orbit segment in the base, plus an optional block to
/// splice into the gap that follows it (the anchor blocks of the skew
/// pipeline). The block must close periodically (its wrap adjacency is
/// validated) because it is carried with an h-symbol periodic extension.
#[derive(Clone, Debug)]
pub struct BaseSegment {
    pub point: BasePoint,
    pub len: usize,
    pub insert_after: Option<Word>,
}

/// Constructs a purely periodic base witness that traces each segment
/// at tolerance eps with gap budget K per joint.
///
/// Layout per segment j (gap = K without a block, 2K + |block| with):
/// n_j + h segment symbols, a length K-h connector, then when a block is
/// present the block itself starting exactly at offset n_j + K, its
/// h-symbol periodic extension, and a final length K-h connector. The
/// last connector closes the period. Deterministic: connectors are
/// lexicographically smallest.
pub fn construct_base_witness(
    sft: &Sft,
    segments: &[BaseSegment],
    eps: &Rational,
    k_gap: usize,
) -> Result<BasePoint> {
    check_eps(eps)?;
    if segments.is_empty() {
        return Err(Error::InvalidWord("need at least one segment".into()));
    }
    let h = agreement_depth(eps);
    let p = sft.primitivity_exponent()?;
    if k_gap < h + p {
        return Err(Error::BudgetTooSmall { k: k_gap, h, p });
    }
    let conn_len = k_gap - h;
    for seg in segments {
        if seg.len == 0 {
            return Err(Error::InvalidWord("segment length must be >= 1".into()));
        }
        if !sft.contains(&seg.point) {
            return Err(Error::InvalidWord(format!(
                "segment point {} not in the subshift",
                seg.point
            )));
        }
        if let Some(block) = &seg.insert_after {
            if block.is_empty() || !sft.is_word(block) {
                return Err(Error::InvalidWord(format!("insert block {block} invalid")));
            }
            let syms = block.symbols();
            if !sft.is_allowed(syms[syms.len() - 1], syms[0]) {
                return Err(Error::InvalidWord(format!(
                    "insert block {block} does not close periodically"
                )));
            }
        }
    }

    let mut word: Vec<Symbol> = Vec::new();
    let k = segments.len();
    for (j, seg) in segments.iter().enumerate() {
        for i in 0..seg.len + h {
            word.push(seg.point.symbol_at(i));
        }
        let next_anchor = segments[(j + 1) % k].point.symbol_at(0);
        if let Some(block) = &seg.insert_after {
            let conn = sft.connecting_word(*word.last().unwrap(), block.symbols()[0], conn_len)?;
            word.extend_from_slice(conn.symbols());
            word.extend_from_slice(block.symbols());
            for i in 0..h {
                word.push(block.symbols()[i % block.len()]);
            }
            let conn = sft.connecting_word(*word.last().unwrap(), next_anchor, conn_len)?;
            word.extend_from_slice(conn.symbols());
        } else {
            let conn = sft.connecting_word(*word.last().unwrap(), next_anchor, conn_len)?;
            word.extend_from_slice(conn.symbols());
        }
    }

    let expected: usize = segments
        .iter()
        .map(|s| {
            s.len
                + k_gap
                + s.insert_after
                    .as_ref()
                    .map_or(0, |b| b.len() + h + conn_len)
        })
        .sum();
    if word.len() != expected {
        return Err(Error::InternalContradiction(format!(
            "witness period length {} differs from budget {expected}",
            word.len()
        )));
    }
    let eta = BasePoint::periodic(Word(word))?;
    if !sft.contains(&eta) {
        return Err(Error::InternalContradiction(
            "constructed base witness leaves the subshift".into(),
        ));
    }
    Ok(eta)
}

/// Result of auditing a base witness against base segments.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseTracingAudit {
    pub r: Vec<usize>,
    pub periodic: bool,
    pub worst_defect: Rational,
}

impl BaseTracingAudit {
    pub fn passes_at(&self, eps: &Rational) -> bool {
        self.periodic && self.worst_defect <= *eps
    }
}

/// Independent audit: gap lengths all equal to `gap`, r_j = sum n_i +
/// j*gap; checks S^{r_k}(eta) = eta exactly and reports the worst
/// rho-defect over all segment positions.
pub fn verify_base_tracing(
    segments: &[(BasePoint, usize)],
    gap: usize,
    eta: &BasePoint,
) -> BaseTracingAudit {
    let mut r = vec![0usize];
    for (_, n) in segments {
        r.push(r.last().unwrap() + n + gap);
    }
    let r_k = *r.last().unwrap();
    let periodic = eta.shift_by(r_k).seq_eq(eta);
    let mut worst = Rational::zero();
    for (j, (omega, n)) in segments.iter().enumerate() {
        for i in 0..*n {
            let d = omega.shift_by(i).rho(&eta.shift_by(r[j] + i));
            if d > worst {
                worst = d;
            }
        }
    }
    BaseTracingAudit {
        r,
        periodic,
        worst_defect: worst,
    }
}

//! Group orders, the M_G table, the order-estimate check, and an exact
//! certifier for inequalities in q = 2^f and f.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::gf2k::log2_exact;
use crate::scalar::{big, gl_order, gu_order, odd_part, pow, Exact};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("unsupported group kind {0:?}")]
    UnsupportedKind(String),
    #[error("q = {0} is not a power of two")]
    BadQ(u64),
    #[error("degree must be at least 1")]
    BadDegree,
    #[error("group outside the M_G table: {0}")]
    OutsideTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad range {0:?}")]
    Range(String),
    #[error("unknown registry id {0:?}")]
    UnknownId(String),
    #[error("duplicate registry id {0:?}")]
    DuplicateId(String),
}

// ---------------------------------------------------------------------------
// Group orders

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    GL,
    GU,
    SL,
    SU,
    PGL,
    PGU,
}

impl GroupKind {
    pub fn epsilon(self) -> i8 {
        match self {
            GroupKind::GL | GroupKind::SL | GroupKind::PGL => 1,
            _ => -1,
        }
    }

    pub fn is_projective(self) -> bool {
        matches!(self, GroupKind::PGL | GroupKind::PGU)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupKind::GL => "GL",
            GroupKind::GU => "GU",
            GroupKind::SL => "SL",
            GroupKind::SU => "SU",
            GroupKind::PGL => "PGL",
            GroupKind::PGU => "PGU",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupKind {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "GL" => Ok(GroupKind::GL),
            "GU" => Ok(GroupKind::GU),
            "SL" => Ok(GroupKind::SL),
            "SU" => Ok(GroupKind::SU),
            "PGL" => Ok(GroupKind::PGL),
            "PGU" => Ok(GroupKind::PGU),
            _ => Err(BoundsError::UnsupportedKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupOrder {
    pub kind: GroupKind,
    pub d: u32,
    pub q: u64,
    pub value: BigUint,
    pub odd_part: BigUint,
}

pub fn group_order(kind: GroupKind, d: u32, q: u64) -> Result<GroupOrder, BoundsError> {
    if d == 0 {
        return Err(BoundsError::BadDegree);
    }
    if q < 2 || log2_exact(q).is_none() {
        return Err(BoundsError::BadQ(q));
    }
    let bq = big(q);
    let full: BigUint = if kind.epsilon() > 0 {
        gl_order(d, &bq)
    } else {
        gu_order(d, &bq)
    };
    let value = match kind {
        GroupKind::GL | GroupKind::GU => full,
        GroupKind::SL | GroupKind::PGL => full / big(q - 1),
        GroupKind::SU | GroupKind::PGU => full / big(q + 1),
    };
    let odd = odd_part(&value);
    Ok(GroupOrder {
        kind,
        d,
        q,
        value,
        odd_part: odd,
    })
}

/// The order estimate at (a, m): with N = m(m+1)/2 and c = 1 − a⁻¹ − a⁻²,
/// `a^N·c ≤ ∏(a^i − 1) ≤ a^N` and `a^N·c ≤ ∏(a^i − (−1)^i) ≤ a^N/c`.
///
/// Evaluated without division, so any `Exact` type works. Returns false
/// outside the domain a ≥ 2, m ≥ 2.
pub fn order_estimate_check<T: Exact>(a: &T, m: u32) -> bool {
    let one = T::one();
    if m < 2 || *a < one.clone() + one.clone() {
        return false;
    }
    let n = m as u64 * (m as u64 + 1) / 2;
    let a2 = a.clone() * a.clone();
    let c_num = a2.clone() - a.clone() - one.clone();
    let top = pow(a, n);
    let low = pow(a, n - 2) * c_num.clone();
    let mut plain = T::one();
    let mut twisted = T::one();
    let mut ai = T::one();
    for i in 1..=m {
        ai = ai * a.clone();
        plain = plain * (ai.clone() - one.clone());
        twisted = if i % 2 == 1 {
            twisted * (ai.clone() + one.clone())
        } else {
            twisted * (ai.clone() - one.clone())
        };
    }
    let part_a = low <= plain && plain <= top;
    let part_b = low <= twisted && twisted.clone() * c_num <= top * a2;
    part_a && part_b
}

/// |GL_d(q)| ≤ q^{d²}, |GU_d(q)|·(1 − q⁻¹ − q⁻²) ≤ q^{d²}, and the sharper
/// |GU_d(q)| ≤ q^{d²+1/2} for q ≥ 4, |GU_d(q)| ≤ q^{d²+2} for q = 2.
pub fn gl_gu_bounds_hold(d: u32, q: u64) -> bool {
    let bq = big(q);
    let d2 = d as u64 * d as u64;
    let gl: BigUint = gl_order(d, &bq);
    let gu: BigUint = gu_order(d, &bq);
    let mut ok = gl <= pow(&bq, d2);
    ok &= gu.clone() * (big(q * q) - big(q) - big(1)) <= pow(&bq, d2 + 2);
    if q >= 4 {
        ok &= gu.clone() * gu.clone() <= pow(&bq, 2 * d2 + 1);
    } else {
        ok &= gu <= pow(&bq, d2 + 2);
    }
    ok
}

// ---------------------------------------------------------------------------
// M_G

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgGroup {
    E6 { epsilon: i8, q: u64 },
    Psl { epsilon: i8, d: u32, q: u64 },
    POmega8Plus { q: u64 },
}

impl fmt::Display for MgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MgGroup::E6 { epsilon, q } if epsilon > 0 => write!(f, "E6({q})"),
            MgGroup::E6 { q, .. } => write!(f, "2E6({q})"),
            MgGroup::Psl { epsilon, d, q } if epsilon > 0 => write!(f, "PSL_{d}({q})"),
            MgGroup::Psl { d, q, .. } => write!(f, "PSU_{d}({q})"),
            MgGroup::POmega8Plus { q } => write!(f, "POmega8+({q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgValue {
    pub group: MgGroup,
    pub value: BigUint,
}

pub fn mg(group: MgGroup) -> Result<MgValue, BoundsError> {
    let q = match group {
        MgGroup::E6 { q, .. } | MgGroup::Psl { q, .. } | MgGroup::POmega8Plus { q } => q,
    };
    if q < 2 || log2_exact(q).is_none() {
        return Err(BoundsError::BadQ(q));
    }
    let bq = big(q);
    let value = match group {
        MgGroup::E6 { .. } => pow(&bq, 48),
        MgGroup::Psl { d, .. } if d >= 5 => pow(&bq, d as u64 * (d as u64 + 1) / 2),
        MgGroup::Psl { epsilon, d: 3, q } => {
            if epsilon < 0 {
                pow(&bq, 4) + pow(&bq, 3)
            } else if q == 16 {
                big(62_401)
            } else {
                pow(&bq, 4)
            }
        }
        MgGroup::Psl { .. } => return Err(BoundsError::OutsideTable(group.to_string())),
        MgGroup::POmega8Plus { .. } => pow(&bq, 14) + pow(&bq, 12),
    };
    Ok(MgValue { group, value })
}

// ---------------------------------------------------------------------------
// Expressions in q = 2^f and f

/// Σ c · q^e · f^j with rational c and integer e (possibly negative).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QfPoly {
    terms: BTreeMap<(i64, u32), BigRational>,
}

impl QfPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: BigRational, q_exp: i64, f_exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((q_exp, f_exp), c);
        }
        QfPoly { terms }
    }

    pub fn q() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn f() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32, &BigRational)> {
        self.terms.iter().map(|(&(e, j), c)| (e, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn as_monomial(&self) -> Option<(i64, u32, BigRational)> {
        if self.terms.len() == 1 {
            let (&(e, j), c) = self.terms.iter().next().unwrap();
            Some((e, j, c.clone()))
        } else if self.terms.is_empty() {
            Some((0, 0, BigRational::zero()))
        } else {
            None
        }
    }

    fn add_term(&mut self, key: (i64, u32), c: BigRational) {
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QfPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = QfPoly::zero();
        for (&(e1, j1), c1) in &self.terms {
            for (&(e2, j2), c2) in &other.terms {
                out.add_term((e1 + e2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    /// Integer power; negative exponents only for monomials without f.
    pub fn pow(&self, n: i64) -> Result<Self, BoundsError> {
        if n < 0 {
            match self.as_monomial() {
                Some((e, 0, c)) if !c.is_zero() => {
                    let k = (-n) as u64;
                    let c = pow(&c.recip(), k);
                    return Ok(Self::monomial(c, e * n, 0));
                }
                _ => {
                    return Err(BoundsError::Parse(
                        "negative power of a non-monomial".into(),
                    ))
                }
            }
        }
        let mut acc = QfPoly::constant(BigRational::one());
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn div(&self, other: &Self) -> Result<Self, BoundsError> {
        match other.as_monomial() {
            Some((e, 0, c)) if !c.is_zero() => Ok(self.mul(&Self::monomial(c.recip(), -e, 0))),
            _ => Err(BoundsError::Parse(
                "division only by nonzero constants or powers of q".into(),
            )),
        }
    }

    pub fn eval(&self, f: u64) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(e, j), c) in &self.terms {
            acc += c
                * pow2_rational(e * f as i64)
                * BigRational::from_integer(pow(&BigInt::from(f), j as u64));
        }
        acc
    }
}

fn pow2_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

impl fmt::Display for QfPoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return fm.write_str("0");
        }
        let mut first = true;
        for (&(e, j), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    fm.write_str("-")?;
                }
            } else {
                fm.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || (e == 0 && j == 0) {
                parts.push(a.to_string());
            }
            match e {
                0 => {}
                1 => parts.push("q".to_string()),
                _ => parts.push(format!("q^{e}")),
            }
            match j {
                0 => {}
                1 => parts.push("f".to_string()),
                _ => parts.push(format!("f^{j}")),
            }
            fm.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Q,
    F,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, BoundsError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '_')
                {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().filter(|c| **c != '_').collect();
                out.push(Tok::Num(
                    digits
                        .parse()
                        .map_err(|_| BoundsError::Parse(digits.clone()))?,
                ));
            }
            'q' => out.push(Tok::Q),
            'f' => out.push(Tok::F),
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' | '·' | '×' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' | '{' => out.push(Tok::Open),
            ')' | '}' => out.push(Tok::Close),
            _ => {
                return Err(BoundsError::Parse(format!(
                    "unexpected character {c:?} in {s:?}"
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), BoundsError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(BoundsError::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<QfPoly, BoundsError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QfPoly, BoundsError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.power()?)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Q) | Some(Tok::F) | Some(Tok::Open) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QfPoly, BoundsError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<QfPoly, BoundsError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let braced = self.peek() == Some(&Tok::Open);
        if braced {
            self.pos += 1;
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.pos += 1;
        }
        let n = match self.next() {
            Some(Tok::Num(n)) => n
                .to_i64()
                .ok_or_else(|| BoundsError::Parse("exponent too large".into()))?,
            t => {
                return Err(BoundsError::Parse(format!(
                    "expected integer exponent, found {t:?}"
                )))
            }
        };
        if braced {
            self.expect(Tok::Close)?;
        }
        base.pow(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<QfPoly, BoundsError> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(QfPoly::constant(BigRational::from_integer(n))),
            Some(Tok::Q) => Ok(QfPoly::q()),
            Some(Tok::F) => Ok(QfPoly::f()),
            Some(Tok::Open) => {
                let e = self.expr()?;
                self.expect(Tok::Close)?;
                Ok(e)
            }
            t => Err(BoundsError::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

impl FromStr for QfPoly {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            toks: tokenize(s)?,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(BoundsError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    fn symbols() -> [(&'static str, Relation); 7] {
        [
            (">=", Relation::Ge),
            ("≥", Relation::Ge),
            ("<=", Relation::Le),
            ("≤", Relation::Le),
            (">", Relation::Gt),
            ("<", Relation::Lt),
            ("=", Relation::Eq),
        ]
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

impl FromStr for Relation {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Relation::symbols()
            .iter()
            .find(|(sym, _)| *sym == s)
            .map(|(_, r)| *r)
            .ok_or_else(|| BoundsError::Parse(format!("unknown relation {s:?}")))
    }
}

/// Inclusive range of f; `end == None` is a tail f ≥ start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FRange {
    pub start: u64,
    pub end: Option<u64>,
}

impl FRange {
    pub fn finite(start: u64, end: u64) -> Self {
        FRange {
            start,
            end: Some(end),
        }
    }

    pub fn tail(start: u64) -> Self {
        FRange { start, end: None }
    }

    pub fn is_tail(&self) -> bool {
        self.end.is_none()
    }
}

impl fmt::Display for FRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            Some(e) if e == self.start => write!(f, "f={}", self.start),
            Some(e) => write!(f, "f={}..{}", self.start, e),
            None => write!(f, "f={}..", self.start),
        }
    }
}

impl FromStr for FRange {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BoundsError::Range(s.to_string());
        let body = s.trim();
        let body = body
            .strip_prefix("f")
            .map(|b| b.trim_start())
            .unwrap_or(body);
        if let Some(rest) = body.strip_prefix(">=").or_else(|| body.strip_prefix('≥')) {
            return Ok(FRange::tail(rest.trim().parse().map_err(|_| bad())?));
        }
        let body = body.strip_prefix('=').unwrap_or(body).trim();
        if let Some((a, b)) = body.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().trim_start_matches('=');
            if b.is_empty() {
                return Ok(FRange::tail(a));
            }
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if b < a {
                return Err(bad());
            }
            return Ok(FRange::finite(a, b));
        }
        let a: u64 = body.parse().map_err(|_| bad())?;
        Ok(FRange::finite(a, a))
    }
}

// ---------------------------------------------------------------------------
// Certificates

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertStatus {
    Verified,
    Failed { at_f: u64 },
    TailUnproved,
}

impl CertStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CertStatus::Verified => "verified",
            CertStatus::Failed { .. } => "failed",
            CertStatus::TailUnproved => "tail-unproved",
        }
    }
}

/// One exhaustively checked point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub f: u64,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

/// Leading-term dominance for the difference D of the two sides:
/// for f ≥ f0, every non-leading term divided by the leading monomial is
/// nonincreasing and their absolute sum at f0 is below the leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailWitness {
    pub leading_q_exp: i64,
    pub leading_f_exp: u32,
    pub leading_coeff: BigRational,
    pub f0: u64,
    pub remainder_at_f0: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityCert {
    pub id: String,
    pub lhs: String,
    pub rel: Relation,
    pub rhs: String,
    pub range: FRange,
    pub clear: u32,
    pub anchor: String,
    pub status: CertStatus,
    pub evaluations: Vec<Evaluation>,
    pub witness: Option<TailWitness>,
}

impl InequalityCert {
    pub fn verified(&self) -> bool {
        self.status == CertStatus::Verified
    }

    /// Re-derive the verdict from the stored data: re-parse both sides,
    /// re-evaluate every recorded point and re-check the tail witness.
    pub fn replay(&self) -> Result<(), String> {
        let lhs: QfPoly = self.lhs.parse().map_err(|e: BoundsError| e.to_string())?;
        let rhs: QfPoly = self.rhs.parse().map_err(|e: BoundsError| e.to_string())?;
        for ev in &self.evaluations {
            if lhs.eval(ev.f) != ev.lhs || rhs.eval(ev.f) != ev.rhs {
                return Err(format!("{}: recorded values differ at f={}", self.id, ev.f));
            }
            let expect = !matches!(self.status, CertStatus::Failed { at_f } if at_f == ev.f);
            if self.rel.holds(&ev.lhs, &ev.rhs) != expect {
                return Err(format!(
                    "{}: verdict at f={} does not replay",
                    self.id, ev.f
                ));
            }
        }
        if self.status != CertStatus::Verified {
            return Ok(());
        }
        let diff = oriented_difference(&lhs, &rhs, self.rel);
        let last = match (self.range.end, &self.witness) {
            (Some(end), None) => end,
            (None, None) if diff.is_zero() && !matches!(self.rel, Relation::Gt | Relation::Lt) => {
                return if self.evaluations.is_empty() {
                    Ok(())
                } else {
                    Err(format!("{}: unexpected evaluations", self.id))
                };
            }
            (None, Some(w)) => {
                let check = check_dominance(&diff, w.f0)
                    .ok_or_else(|| format!("{}: dominance fails at f0={}", self.id, w.f0))?;
                if check != *w {
                    return Err(format!("{}: tail witness does not match", self.id));
                }
                w.f0
            }
            _ => {
                return Err(format!(
                    "{}: witness shape does not match the range",
                    self.id
                ))
            }
        };
        let covered: Vec<u64> = self.evaluations.iter().map(|e| e.f).collect();
        let expected: Vec<u64> = (self.range.start..=last).collect();
        if covered != expected {
            return Err(format!(
                "{}: evaluations do not cover {}..{}",
                self.id, self.range.start, last
            ));
        }
        Ok(())
    }
}

impl fmt::Display for InequalityCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}] {}",
            self.id,
            self.lhs,
            self.rel,
            self.rhs,
            self.range,
            self.status.label()
        )
    }
}

const TAIL_SEARCH_LIMIT: u64 = 4096;

/// D with the convention that the relation holds iff D > 0 (or ≥ 0).
fn oriented_difference(lhs: &QfPoly, rhs: &QfPoly, rel: Relation) -> QfPoly {
    match rel {
        Relation::Lt | Relation::Le => rhs.sub(lhs),
        _ => lhs.sub(rhs),
    }
}

fn check_dominance(diff: &QfPoly, f0: u64) -> Option<TailWitness> {
    if f0 == 0 {
        return None;
    }
    let (&(e0, j0), c0) = diff.terms.iter().next_back()?;
    if !c0.is_positive() {
        return None;
    }
    let fr = BigInt::from(f0);
    let mut sum = BigRational::zero();
    for (&(e, j), c) in diff.terms.iter().rev().skip(1) {
        let a = e0 - e;
        let k = j as i64 - j0 as i64;
        if a > 0 && k > 0 {
            let lhs = pow(&(fr.clone() + 1), k as u64);
            let rhs = (BigInt::one() << a as usize) * pow(&fr, k as u64);
            if lhs > rhs {
                return None;
            }
        }
        let fk = if k >= 0 {
            BigRational::from_integer(pow(&fr, k as u64))
        } else {
            BigRational::new(BigInt::one(), pow(&fr, (-k) as u64))
        };
        sum += c.abs() * pow2_rational(-a * f0 as i64) * fk;
    }
    if sum < *c0 {
        Some(TailWitness {
            leading_q_exp: e0,
            leading_f_exp: j0,
            leading_coeff: c0.clone(),
            f0,
            remainder_at_f0: sum,
        })
    } else {
        None
    }
}

/// Certify `lhs rel rhs` over `range`.
pub fn certify_parts(
    id: &str,
    lhs_src: &str,
    rel: Relation,
    rhs_src: &str,
    range: FRange,
    clear: u32,
    anchor: &str,
) -> Result<InequalityCert, BoundsError> {
    let lhs: QfPoly = lhs_src.parse()?;
    let rhs: QfPoly = rhs_src.parse()?;
    let mut cert = InequalityCert {
        id: id.to_string(),
        lhs: lhs_src.trim().to_string(),
        rel,
        rhs: rhs_src.trim().to_string(),
        range,
        clear,
        anchor: anchor.to_string(),
        status: CertStatus::Verified,
        evaluations: Vec::new(),
        witness: None,
    };
    let last = match range.end {
        Some(end) => end,
        None => {
            let diff = oriented_difference(&lhs, &rhs, rel);
            if diff.is_zero() {
                cert.status = match rel {
                    Relation::Gt | Relation::Lt => CertStatus::Failed { at_f: range.start },
                    _ => CertStatus::Verified,
                };
                return Ok(cert);
            }
            if rel == Relation::Eq {
                cert.status = CertStatus::TailUnproved;
                return Ok(cert);
            }
            match (range.start.max(1)..=TAIL_SEARCH_LIMIT).find_map(|f0| check_dominance(&diff, f0))
            {
                Some(w) => {
                    let f0 = w.f0;
                    cert.witness = Some(w);
                    f0
                }
                None => {
                    cert.status = CertStatus::TailUnproved;
                    return Ok(cert);
                }
            }
        }
    };
    for f in range.start..=last {
        let ev = Evaluation {
            f,
            lhs: lhs.eval(f),
            rhs: rhs.eval(f),
        };
        let ok = rel.holds(&ev.lhs, &ev.rhs);
        cert.evaluations.push(ev);
        if !ok {
            cert.status = CertStatus::Failed { at_f: f };
            cert.witness = None;
            break;
        }
    }
    Ok(cert)
}

/// Certify a full inequality text such as `"(q^3-2q^2)^2 > 9(6f-1)^2(q^4+q^3)"`.
pub fn certify(text: &str, range: FRange) -> Result<InequalityCert, BoundsError> {
    let (lhs, rel, rhs) = split_relation(text)?;
    certify_parts("adhoc", lhs, rel, rhs, range, 1, "")
}

pub fn split_relation(text: &str) -> Result<(&str, Relation, &str), BoundsError> {
    for (sym, rel) in Relation::symbols() {
        if let Some(i) = text.find(sym) {
            let (l, r) = text.split_at(i);
            return Ok((l.trim(), rel, r[sym.len()..].trim()));
        }
    }
    Err(BoundsError::Parse(format!("no relation in {text:?}")))
}

// ---------------------------------------------------------------------------
// Registry

/// A parsed registry line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub id: String,
    pub lhs: String,
    pub rel: Relation,
    pub rhs: String,
    pub range: FRange,
    pub anchor: String,
    pub clear: u32,
}

impl RegistryEntry {
    pub fn certify(&self) -> Result<InequalityCert, BoundsError> {
        certify_parts(
            &self.id,
            &self.lhs,
            self.rel,
            &self.rhs,
            self.range,
            self.clear,
            &self.anchor,
        )
    }
}

/// Immutable list of inequality entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

pub const BUILTIN_REGISTRY: &str = include_str!("../registry/inequalities.txt");

impl Registry {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_REGISTRY).expect("builtin registry parses")
    }

    /// Lines: `id | lhs | rel | rhs | f-range | anchor [| clear=N]`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut entries: Vec<RegistryEntry> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if fields.len() != 6 && fields.len() != 7 {
                return Err(BoundsError::Parse(format!(
                    "line {}: expected 6 or 7 fields",
                    lineno + 1
                )));
            }
            let clear = match fields.get(6) {
                Some(c) => c
                    .strip_prefix("clear=")
                    .and_then(|n| n.trim().parse().ok())
                    .filter(|n: &u32| *n >= 1)
                    .ok_or_else(|| {
                        BoundsError::Parse(format!("line {}: bad clear field", lineno + 1))
                    })?,
                None => 1,
            };
            let entry = RegistryEntry {
                id: fields[0].to_string(),
                lhs: fields[1].to_string(),
                rel: fields[2].parse()?,
                rhs: fields[3].to_string(),
                range: fields[4].parse()?,
                anchor: fields[5].to_string(),
                clear,
            };
            entry.lhs.parse::<QfPoly>()?;
            entry.rhs.parse::<QfPoly>()?;
            if entries.iter().any(|e| e.id == entry.id) {
                return Err(BoundsError::DuplicateId(entry.id));
            }
            entries.push(entry);
        }
        Ok(Registry { entries })
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn certify(&self, id: &str) -> Result<InequalityCert, BoundsError> {
        self.get(id)
            .ok_or_else(|| BoundsError::UnknownId(id.to_string()))?
            .certify()
    }

    /// Certify every entry concurrently; results keep registry order.
    pub fn certify_all(&self) -> Vec<InequalityCert> {
        self.entries
            .par_iter()
            .map(|e| e.certify().expect("entries were validated on parse"))
            .collect()
    }
}

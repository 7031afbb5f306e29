//! Monic polynomials over GF(q^δ): factorization, the star and dagger
//! dualities, and the realness/unitarity predicates on characteristic polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2k::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomial has zero constant term")]
    ZeroConstant,
    #[error("dagger needs a polynomial over GF(q^2); got {field} with q = {q}")]
    WrongDelta { field: String, q: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial fields differ")]
    FieldMismatch,
    #[error("enumeration of {count} candidates exceeds budget {budget}")]
    Budget { count: u128, budget: u64 },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

type Dense = Vec<FieldElement>;

fn trim(mut a: Dense) -> Dense {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn dense_add(a: &[FieldElement], b: &[FieldElement]) -> Dense {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut r = long.to_vec();
    for (x, y) in r.iter_mut().zip(short) {
        *x = *x + *y;
    }
    trim(r)
}

fn dense_mul(a: &[FieldElement], b: &[FieldElement]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![FieldElement::zero(a[0].degree()); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = r[i + j] + x * y;
        }
    }
    trim(r)
}

fn dense_divrem(a: &[FieldElement], b: &[FieldElement]) -> (Dense, Dense) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let lead_inv = b.last().unwrap().inv().unwrap();
    let n = b.len() - 1;
    let mut quo = vec![FieldElement::zero(b[0].degree()); r.len() - n];
    for i in (n..r.len()).rev() {
        let c = r[i] * lead_inv;
        if c.is_zero() {
            continue;
        }
        quo[i - n] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i - n + j] = r[i - n + j] + c * bj;
        }
    }
    r.truncate(n);
    (trim(quo), trim(r))
}

fn dense_rem(a: &[FieldElement], b: &[FieldElement]) -> Dense {
    dense_divrem(a, b).1
}

fn make_monic(a: Dense) -> Dense {
    match a.last() {
        None => a,
        Some(l) => {
            let inv = l.inv().unwrap();
            a.into_iter().map(|c| c * inv).collect()
        }
    }
}

fn dense_gcd(a: &[FieldElement], b: &[FieldElement]) -> Dense {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = dense_rem(&a, &b);
        a = b;
        b = r;
    }
    make_monic(a)
}

fn derivative(a: &[FieldElement]) -> Dense {
    let zero = FieldElement::zero(a[0].degree());
    trim(
        (1..a.len())
            .map(|i| if i % 2 == 1 { a[i] } else { zero })
            .collect(),
    )
}

/// Square root of a polynomial whose odd coefficients vanish.
fn dense_sqrt(a: &[FieldElement]) -> Dense {
    a.iter().step_by(2).map(|c| c.sqrt()).collect()
}

fn square_mod(a: &[FieldElement], m: &[FieldElement]) -> Dense {
    dense_rem(&dense_mul(a, a), m)
}

fn is_one(a: &[FieldElement]) -> bool {
    a.len() == 1 && a[0].is_one()
}

/// A monic polynomial; `coeffs` holds the non-leading coefficients, constant first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl MonicPoly {
    pub fn new(field: FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        if coeffs.iter().any(|c| c.degree() != field.degree()) {
            return Err(PolyError::FieldMismatch);
        }
        Ok(Self { field, coeffs })
    }

    /// From coefficient encodings, constant first, leading 1 omitted.
    pub fn from_bits(field: FieldSpec, coeffs: &[u64]) -> Result<Self, PolyError> {
        let c = coeffs
            .iter()
            .map(|&b| field.elem(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { field, coeffs: c })
    }

    /// From a full coefficient list ending in 1.
    pub fn from_full(field: FieldSpec, full: Vec<FieldElement>) -> Result<Self, PolyError> {
        let mut full = full;
        match full.pop() {
            Some(l) if l.is_one() => Self::new(field, full),
            _ => Err(PolyError::NotMonic),
        }
    }

    fn from_dense(field: FieldSpec, mut dense: Dense) -> Self {
        let l = dense.pop().expect("empty polynomial");
        debug_assert!(l.is_one());
        Self {
            field,
            coeffs: dense,
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn x(field: FieldSpec) -> Self {
        Self {
            field,
            coeffs: vec![field.zero()],
        }
    }

    /// x + a.
    pub fn linear(a: FieldElement, field: FieldSpec) -> Self {
        Self {
            field,
            coeffs: vec![a],
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The same polynomial viewed over another spec of the same field.
    pub fn rebase(&self, field: FieldSpec) -> Result<Self, PolyError> {
        if field.degree() != self.field.degree() {
            return Err(PolyError::FieldMismatch);
        }
        Ok(Self {
            field,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// All coefficients including the leading 1, constant first.
    pub fn full(&self) -> Vec<FieldElement> {
        let mut v = self.coeffs.clone();
        v.push(self.field.one());
        v
    }

    pub fn constant(&self) -> FieldElement {
        self.coeffs.first().copied().unwrap_or(self.field.one())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, a: FieldElement) -> FieldElement {
        self.full()
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * a + c)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.field.degree() != other.field.degree() {
            return Err(PolyError::FieldMismatch);
        }
        Ok(Self::from_dense(
            self.field,
            dense_mul(&self.full(), &other.full()),
        ))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("field mismatch")
    }

    pub fn pow(&self, m: u32) -> Self {
        (0..m).fold(Self::one(self.field), |acc, _| acc.mul(self))
    }

    /// Exact quotient by a monic divisor, if it divides.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = dense_divrem(&self.full(), &other.full());
        r.is_empty().then(|| Self::from_dense(self.field, q))
    }

    /// Applies `a ↦ a^(2^power)` to every coefficient.
    pub fn frobenius_twist(&self, power: u32) -> Self {
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c.frobenius(power)).collect(),
        }
    }

    /// Encodings of the non-leading coefficients.
    pub fn bits(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.bits()).collect()
    }
}

impl Ord for MonicPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.bits().cmp(&other.bits()))
            .then_with(|| {
                (self.field.f(), self.field.delta()).cmp(&(other.field.f(), other.field.delta()))
            })
    }
}

impl PartialOrd for MonicPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poly(GF(2^{}))[", self.field.degree())?;
        for c in &self.coeffs {
            write!(f, "{},", c.bits())?;
        }
        write!(f, "1]")
    }
}

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `poly(GF(2^k))[c0,c1,...,1]`. The field is returned with δ = 1; use
/// [`MonicPoly::rebase`] to view it over a δ = 2 spec.
impl FromStr for MonicPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || PolyError::Parse(s.clone());
        let rest = s.strip_prefix("poly(GF(2^").ok_or_else(bad)?;
        let (k, rest) = rest.split_once("))[").ok_or_else(bad)?;
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        let field = FieldSpec::new(k, 1)?;
        let vals = body
            .split(',')
            .map(|t| t.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let full = vals
            .into_iter()
            .map(|b| field.elem(b))
            .collect::<Result<Vec<_>, _>>()?;
        MonicPoly::from_full(field, full)
    }
}

/// Multiset of irreducible factors, canonically sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    field: FieldSpec,
    factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    /// Canonicalizes a list of (irreducible, multiplicity) pairs. Irreducibility is the caller's claim.
    pub fn from_irreducibles(field: FieldSpec, mut factors: Vec<(MonicPoly, u32)>) -> Self {
        factors.retain(|(p, m)| *m > 0 && !p.is_one());
        factors.sort();
        let mut merged: Vec<(MonicPoly, u32)> = Vec::with_capacity(factors.len());
        for (p, m) in factors {
            match merged.last_mut() {
                Some((q, n)) if *q == p => *n += m,
                _ => merged.push((p, m)),
            }
        }
        Self {
            field,
            factors: merged,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn factors(&self) -> &[(MonicPoly, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(p, m)| p.degree() * *m as usize)
            .sum()
    }

    pub fn multiplicity(&self, p: &MonicPoly) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, m)| *m)
    }

    pub fn expand(&self) -> MonicPoly {
        self.factors
            .iter()
            .fold(MonicPoly::one(self.field), |acc, (p, m)| {
                acc.mul(&p.pow(*m))
            })
    }

    pub fn rebase(&self, field: FieldSpec) -> Result<Self, PolyError> {
        let factors = self
            .factors
            .iter()
            .map(|(p, m)| Ok((p.rebase(field)?, *m)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(Self { field, factors })
    }

    pub fn map_factors(
        &self,
        f: impl Fn(&MonicPoly) -> Result<MonicPoly, PolyError>,
    ) -> Result<Self, PolyError> {
        let factors = self
            .factors
            .iter()
            .map(|(p, m)| Ok((f(p)?, *m)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(Self::from_irreducibles(self.field, factors))
    }

    /// Factor-wise star; the star of an irreducible is irreducible.
    pub fn star(&self) -> Result<Self, PolyError> {
        self.map_factors(poly_star)
    }

    pub fn dagger(&self, q: u64) -> Result<Self, PolyError> {
        self.map_factors(|p| poly_dagger(p, q))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{p}")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The monic polynomial whose roots are the inverses of the roots of `p`.
pub fn poly_star(p: &MonicPoly) -> Result<MonicPoly, PolyError> {
    let c0 = p.constant();
    if c0.is_zero() {
        return Err(PolyError::ZeroConstant);
    }
    let inv = c0.inv()?;
    let mut full = p.full();
    full.reverse();
    Ok(MonicPoly::from_dense(
        p.field,
        full.into_iter().map(|c| c * inv).collect(),
    ))
}

/// The monic polynomial whose roots are ζ^{−q} for the roots ζ of `p` (over GF(q^2)).
pub fn poly_dagger(p: &MonicPoly, q: u64) -> Result<MonicPoly, PolyError> {
    if p.field.delta() != 2 || p.field.q() != q {
        return Err(PolyError::WrongDelta {
            field: p.field.to_string(),
            q,
        });
    }
    poly_star(&p.frobenius_twist(p.field.f()))
}

/// Ξ = Ξ*.
pub fn is_real_charpoly(xi: &MonicPoly) -> Result<bool, PolyError> {
    Ok(poly_star(xi)? == *xi)
}

/// Ξ = Ξ†.
pub fn is_unitary_compatible(xi: &MonicPoly, q: u64) -> Result<bool, PolyError> {
    Ok(poly_dagger(xi, q)? == *xi)
}

/// Squarefree decomposition: pairwise coprime squarefree parts with multiplicities.
fn squarefree(f: &[FieldElement]) -> Vec<(Dense, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let fp = derivative(f);
    if fp.is_empty() {
        for (g, m) in squarefree(&dense_sqrt(f)) {
            out.push((g, 2 * m));
        }
        return out;
    }
    let mut c = dense_gcd(f, &fp);
    let mut w = dense_divrem(f, &c).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = dense_gcd(&w, &c);
        let fac = dense_divrem(&w, &y).0;
        if !is_one(&fac) {
            out.push((fac, i));
        }
        w = y;
        c = dense_divrem(&c, &w).0;
        i += 1;
    }
    if !is_one(&c) {
        for (g, m) in squarefree(&dense_sqrt(&c)) {
            out.push((g, 2 * m));
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: (product of all degree-i factors, i).
fn distinct_degree(f: &[FieldElement], k: u32) -> Vec<(Dense, usize)> {
    let zero = FieldElement::zero(k);
    let one = FieldElement::one(k);
    let x = vec![zero, one];
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let mut h = x.clone();
    let mut i = 1;
    while f.len() > 2 * i {
        for _ in 0..k {
            h = square_mod(&h, &f);
        }
        let g = dense_gcd(&f, &dense_add(&h, &x));
        if !is_one(&g) {
            f = dense_divrem(&f, &g).0;
            h = dense_rem(&h, &f);
            out.push((g, i));
        }
        i += 1;
    }
    if f.len() > 1 {
        let n = f.len() - 1;
        out.push((f, n));
    }
    out
}

/// Equal-degree splitting in characteristic 2 via the absolute trace map.
fn equal_degree(f: Dense, i: usize, k: u32, rng: &mut ChaCha8Rng, out: &mut Vec<Dense>) {
    let n = f.len() - 1;
    if n == i {
        out.push(f);
        return;
    }
    loop {
        let a = trim(
            (0..n)
                .map(|_| FieldElement::new(rng.gen_range(0..1u64 << k), k).unwrap())
                .collect(),
        );
        if a.len() < 2 {
            continue;
        }
        let mut t = a.clone();
        let mut s = a;
        for _ in 1..(k as usize * i) {
            s = square_mod(&s, &f);
            t = dense_add(&t, &s);
        }
        let g = dense_gcd(&f, &t);
        if g.len() > 1 && g.len() < f.len() {
            let h = make_monic(dense_divrem(&f, &g).0);
            equal_degree(g, i, k, rng, out);
            equal_degree(h, i, k, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles, canonically ordered.
pub fn poly_factor(p: &MonicPoly) -> Factorization {
    let k = p.field.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut factors = Vec::new();
    for (sq, m) in squarefree(&p.full()) {
        for (g, i) in distinct_degree(&sq, k) {
            let mut parts = Vec::new();
            equal_degree(g, i, k, &mut rng, &mut parts);
            for part in parts {
                factors.push((MonicPoly::from_dense(p.field, part), m));
            }
        }
    }
    Factorization::from_irreducibles(p.field, factors)
}

pub fn is_irreducible(p: &MonicPoly) -> bool {
    let f = poly_factor(p);
    p.degree() > 0 && f.factors.len() == 1 && f.factors[0].1 == 1
}

/// Restrictions for [`enumerate_charpolys`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CharpolyFilter {
    pub real: bool,
    /// Require Ξ = Ξ† for this q (field must be GF(q^2)).
    pub unitary: Option<u64>,
    pub exclude_identity: bool,
}

/// The indexable space of candidate characteristic polynomials.
///
/// Real polynomials are exactly the palindromes with constant term 1, and
/// real unitary ones additionally have coefficients in GF(q); candidates are
/// drawn from those smaller spaces when the filter allows it. Index order is
/// the canonical enumeration order.
#[derive(Debug, Clone)]
pub struct CharpolySpace {
    d: usize,
    field: FieldSpec,
    filter: CharpolyFilter,
    alphabet: Vec<FieldElement>,
    free: usize,
    palindromic: bool,
    count: u64,
}

pub fn enumerate_charpolys(
    d: usize,
    field: FieldSpec,
    filter: CharpolyFilter,
    budget: u64,
) -> Result<CharpolySpace, PolyError> {
    if let Some(q) = filter.unitary {
        if field.delta() != 2 || field.q() != q {
            return Err(PolyError::WrongDelta {
                field: field.to_string(),
                q,
            });
        }
    }
    let (alphabet, free, palindromic) = if filter.real {
        let alphabet: Vec<_> = match filter.unitary {
            Some(_) => {
                let sub = FieldSpec::new(field.f(), 1)?;
                sub.elements().map(|a| field.embed(a).unwrap()).collect()
            }
            None => field.elements().collect(),
        };
        (alphabet, d / 2, true)
    } else {
        (field.elements().collect(), d, false)
    };
    let count = (alphabet.len() as u128)
        .checked_pow(free as u32)
        .unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(PolyError::Budget { count, budget });
    }
    Ok(CharpolySpace {
        d,
        field,
        filter,
        alphabet,
        free,
        palindromic,
        count: count as u64,
    })
}

impl CharpolySpace {
    /// Number of candidate indices (not all of which pass the filter).
    pub fn candidates(&self) -> u64 {
        self.count
    }

    fn candidate(&self, mut index: u64) -> MonicPoly {
        let s = self.alphabet.len() as u64;
        let mut digits = Vec::with_capacity(self.free);
        for _ in 0..self.free {
            digits.push(self.alphabet[(index % s) as usize]);
            index /= s;
        }
        if !self.palindromic {
            return MonicPoly {
                field: self.field,
                coeffs: digits,
            };
        }
        // a_0 = 1, a_j = a_{d-j}; free digits fill a_1..a_{d/2}
        let mut c = vec![self.field.one(); self.d];
        for j in 1..=self.d / 2 {
            c[j] = digits[j - 1];
            c[self.d - j] = digits[j - 1];
        }
        if self.d > 0 {
            c[0] = self.field.one();
        }
        MonicPoly {
            field: self.field,
            coeffs: c,
        }
    }

    /// The candidate at `index`, if it passes the filter.
    pub fn poly_at(&self, index: u64) -> Option<MonicPoly> {
        let p = self.candidate(index);
        if p.constant().is_zero() {
            return None;
        }
        if self.filter.real && !self.palindromic && !is_real_charpoly(&p).ok()? {
            return None;
        }
        if let Some(q) = self.filter.unitary {
            if !is_unitary_compatible(&p, q).ok()? {
                return None;
            }
        }
        if self.filter.exclude_identity && p.coeffs.iter().all(|c| c.is_zero() || c.is_one()) {
            let one = MonicPoly::linear(self.field.one(), self.field);
            if p == one.pow(self.d as u32) {
                return None;
            }
        }
        Some(p)
    }

    pub fn factorization_at(&self, index: u64) -> Option<Factorization> {
        self.poly_at(index).map(|p| poly_factor(&p))
    }

    pub fn polys(&self) -> impl Iterator<Item = MonicPoly> + '_ {
        (0..self.count).filter_map(|i| self.poly_at(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = Factorization> + '_ {
        self.polys().map(|p| poly_factor(&p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::make_field;

    fn gf4() -> FieldSpec {
        make_field(2, 1).unwrap()
    }

    fn p(field: FieldSpec, c: &[u64]) -> MonicPoly {
        MonicPoly::from_bits(field, c).unwrap()
    }

    #[test]
    fn star_examples() {
        let f = gf4();
        assert_eq!(poly_star(&p(f, &[1])).unwrap(), p(f, &[1]));
        assert_eq!(poly_star(&p(f, &[2])).unwrap(), p(f, &[3]));
        let g2 = make_field(1, 1).unwrap();
        assert_eq!(poly_star(&p(g2, &[1, 1])).unwrap(), p(g2, &[1, 1]));
        assert_eq!(poly_star(&p(f, &[0, 1])), Err(PolyError::ZeroConstant));
    }

    #[test]
    fn dagger_examples() {
        let f = make_field(1, 2).unwrap();
        assert_eq!(poly_dagger(&p(f, &[1]), 2).unwrap(), p(f, &[1]));
        assert_eq!(poly_dagger(&p(f, &[2]), 2).unwrap(), p(f, &[2]));
        let prod = p(f, &[2]).mul(&p(f, &[3]));
        assert_eq!(poly_dagger(&prod, 2).unwrap(), prod);
        assert!(matches!(
            poly_dagger(&p(gf4(), &[2]), 2),
            Err(PolyError::WrongDelta { .. })
        ));
    }

    #[test]
    fn factor_examples() {
        let g2 = make_field(1, 1).unwrap();
        let f = poly_factor(&p(g2, &[1, 1]));
        assert_eq!(f.factors(), &[(p(g2, &[1, 1]), 1)]);
        let f = poly_factor(&p(gf4(), &[1, 1]));
        assert_eq!(f.factors(), &[(p(gf4(), &[2]), 1), (p(gf4(), &[3]), 1)]);
        let x1 = p(g2, &[1]);
        let prod = x1.pow(2).mul(&p(g2, &[1, 1]));
        let f = poly_factor(&prod);
        assert_eq!(f.factors(), &[(x1, 2), (p(g2, &[1, 1]), 1)]);
        assert_eq!(f.expand(), prod);
    }

    #[test]
    fn realness_examples() {
        let f = gf4();
        assert!(is_real_charpoly(&p(f, &[1]).pow(3)).unwrap());
        assert!(!is_real_charpoly(&p(f, &[2])).unwrap());
        assert!(is_real_charpoly(&p(f, &[2]).mul(&p(f, &[3]))).unwrap());
    }

    #[test]
    fn unitary_examples() {
        let f4 = make_field(1, 2).unwrap();
        for d in 1..5 {
            assert!(is_unitary_compatible(&p(f4, &[1]).pow(d), 2).unwrap());
        }
        assert!(is_unitary_compatible(&p(f4, &[2]).mul(&p(f4, &[3])), 2).unwrap());
        let f16 = make_field(2, 2).unwrap();
        let z = f16.cyclic_generator(5).unwrap();
        assert!(is_unitary_compatible(&MonicPoly::linear(z, f16), 4).unwrap());
        let g = f16.primitive();
        assert!(!is_unitary_compatible(&MonicPoly::linear(g, f16), 4).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        let reals: Vec<_> = enumerate_charpolys(
            2,
            gf4(),
            CharpolyFilter {
                real: true,
                ..Default::default()
            },
            1000,
        )
        .unwrap()
        .polys()
        .collect();
        assert_eq!(reals.len(), 4);
        let brute = (0..16u64)
            .map(|i| p(gf4(), &[i % 4, i / 4]))
            .filter(|q| !q.constant().is_zero() && is_real_charpoly(q).unwrap())
            .count();
        assert_eq!(brute, 4);
        let g2 = make_field(1, 1).unwrap();
        let one: Vec<_> = enumerate_charpolys(
            1,
            g2,
            CharpolyFilter {
                real: true,
                ..Default::default()
            },
            10,
        )
        .unwrap()
        .iter()
        .collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].factors(), &[(p(g2, &[1]), 1)]);
        let f4 = make_field(1, 2).unwrap();
        let ru = enumerate_charpolys(
            2,
            f4,
            CharpolyFilter {
                real: true,
                unitary: Some(2),
                ..Default::default()
            },
            100,
        )
        .unwrap()
        .polys()
        .count();
        let brute = (0..16u64)
            .map(|i| p(f4, &[i % 4, i / 4]))
            .filter(|q| {
                !q.constant().is_zero()
                    && is_real_charpoly(q).unwrap()
                    && is_unitary_compatible(q, 2).unwrap()
            })
            .count();
        assert_eq!(ru, brute);
        assert_eq!(ru, 2);
        assert!(matches!(
            enumerate_charpolys(
                9,
                make_field(4, 1).unwrap(),
                CharpolyFilter::default(),
                1000
            ),
            Err(PolyError::Budget { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let q = p(make_field(4, 1).unwrap(), &[3, 0, 7]);
        let s = q.to_string();
        assert_eq!(s, "poly(GF(2^4))[3,0,7,1]");
        assert_eq!(s.parse::<MonicPoly>().unwrap(), q);
        assert!("poly(GF(2^4))[3,0,7,2]".parse::<MonicPoly>().is_err());
        assert!("poly(GF(2^2))[4,1]".parse::<MonicPoly>().is_err());
        assert!("GF(4)[1,1]".parse::<MonicPoly>().is_err());
    }

    #[test]
    fn factor_handles_squares_and_high_powers() {
        let f16 = make_field(4, 1).unwrap();
        let a = p(f16, &[5]);
        let b = p(f16, &[1, 1, 1]);
        for (m, n) in [(1, 2), (2, 2), (4, 1), (3, 5), (8, 0)] {
            let prod = a.pow(m).mul(&b.pow(n));
            let f = poly_factor(&prod);
            assert_eq!(f.expand(), prod);
            assert_eq!(f.multiplicity(&a), m);
        }
    }
}

//! Semisimple classes of GL^ε_d(q): centralizer shapes and orders, realness,
//! the large-index case classifier, and explicit diagonal/involution constructions.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf2k::{log2_exact, FieldElement, FieldError, FieldSpec};
use crate::polyfield::{
    is_unitary_compatible, poly_dagger, poly_factor, poly_star, Factorization, MonicPoly, PolyError,
};
use crate::scalar::{gl_eps_order, gl_order, gu_order, odd_part, pow};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("q = {0} is not a power of 2 with supported degree")]
    BadQ(u64),
    #[error("characteristic polynomial has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("x divides the characteristic polynomial")]
    NotInvertible,
    #[error("characteristic polynomial is not dagger-invariant")]
    NotUnitary,
    #[error("factor {0} has no dagger partner of equal multiplicity")]
    Pairing(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn from_sign(s: i64) -> Option<Self> {
        match s {
            1 => Some(Epsilon::Plus),
            -1 => Some(Epsilon::Minus),
            _ => None,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }

    pub fn delta(self) -> u32 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => 2,
        }
    }

    /// q − ε.
    pub fn q_minus_eps(self, q: u64) -> u64 {
        match self {
            Epsilon::Plus => q - 1,
            Epsilon::Minus => q + 1,
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Epsilon::Plus => "+1",
            Epsilon::Minus => "-1",
        })
    }
}

/// The field GF(q^δ) carrying the eigenvalues of GL^ε_d(q).
pub fn group_field(epsilon: Epsilon, q: u64) -> Result<FieldSpec, ClassError> {
    let f = log2_exact(q).ok_or(ClassError::BadQ(q))?;
    FieldSpec::new(f, epsilon.delta()).map_err(|_| ClassError::BadQ(q))
}

/// |GL^ε_d(q)| exactly.
pub fn gl_eps(epsilon: Epsilon, d: u32, q: u64) -> Nat {
    gl_eps_order(epsilon.sign(), d, &Nat::from(q))
}

/// A semisimple class of GL^ε_d(q), identified by its factored characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemisimpleClass {
    epsilon: Epsilon,
    d: usize,
    q: u64,
    xi: Factorization,
    d1: u32,
}

impl SemisimpleClass {
    pub fn new(epsilon: Epsilon, d: usize, q: u64, xi: Factorization) -> Result<Self, ClassError> {
        let field = group_field(epsilon, q)?;
        let xi = xi.rebase(field)?;
        if xi.degree() != d {
            return Err(ClassError::DegreeMismatch {
                expected: d,
                got: xi.degree(),
            });
        }
        if xi.factors().iter().any(|(p, _)| p.constant().is_zero()) {
            return Err(ClassError::NotInvertible);
        }
        if epsilon == Epsilon::Minus && xi.dagger(q)? != xi {
            return Err(ClassError::NotUnitary);
        }
        let d1 = xi.multiplicity(&MonicPoly::linear(field.one(), field));
        Ok(Self {
            epsilon,
            d,
            q,
            xi,
            d1,
        })
    }

    pub fn from_poly(epsilon: Epsilon, q: u64, xi: &MonicPoly) -> Result<Self, ClassError> {
        let field = group_field(epsilon, q)?;
        let xi = xi.rebase(field)?;
        Self::new(epsilon, xi.degree(), q, poly_factor(&xi))
    }

    /// The class of the identity, Ξ = (x+1)^d.
    pub fn identity(epsilon: Epsilon, d: usize, q: u64) -> Result<Self, ClassError> {
        let field = group_field(epsilon, q)?;
        let x1 = MonicPoly::linear(field.one(), field);
        Self::new(
            epsilon,
            d,
            q,
            Factorization::from_irreducibles(field, vec![(x1, d as u32)]),
        )
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn f(&self) -> u32 {
        self.q.trailing_zeros()
    }

    pub fn xi(&self) -> &Factorization {
        &self.xi
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn field(&self) -> FieldSpec {
        self.xi.field()
    }

    pub fn is_identity(&self) -> bool {
        self.d1 as usize == self.d
    }

    /// e = gcd(d, q − ε).
    pub fn e(&self) -> u64 {
        (self.d as u64).gcd(&self.epsilon.q_minus_eps(self.q))
    }

    pub fn group_order(&self) -> Nat {
        gl_eps(self.epsilon, self.d as u32, self.q)
    }

    fn delta1(&self) -> MonicPoly {
        MonicPoly::linear(self.field().one(), self.field())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    GL,
    GU,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::GL => "GL",
            GroupKind::GU => "GU",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeFactor {
    pub kind: GroupKind,
    pub m: u32,
    pub big_q: Nat,
}

impl ShapeFactor {
    pub fn order(&self) -> Nat {
        match self.kind {
            GroupKind::GL => gl_order(self.m, &self.big_q),
            GroupKind::GU => gu_order(self.m, &self.big_q),
        }
    }
}

impl fmt::Display for ShapeFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.kind, self.m, self.big_q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerShape {
    pub factors: Vec<ShapeFactor>,
    pub order: Nat,
    pub odd_part: Nat,
}

impl fmt::Display for CentralizerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<_> = self.factors.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// The direct-product decomposition of the centralizer read off the factorization of Ξ.
pub fn centralizer_shape(c: &SemisimpleClass) -> Result<CentralizerShape, ClassError> {
    let q = Nat::from(c.q);
    let mut factors = Vec::new();
    match c.epsilon {
        Epsilon::Plus => {
            for (p, m) in c.xi.factors() {
                factors.push(ShapeFactor {
                    kind: GroupKind::GL,
                    m: *m,
                    big_q: pow(&q, p.degree() as u64),
                });
            }
        }
        Epsilon::Minus => {
            let mut used = vec![false; c.xi.factors().len()];
            for (i, (p, m)) in c.xi.factors().iter().enumerate() {
                if used[i] {
                    continue;
                }
                used[i] = true;
                let k = p.degree() as u64;
                let dag = poly_dagger(p, c.q)?;
                if dag == *p {
                    factors.push(ShapeFactor {
                        kind: GroupKind::GU,
                        m: *m,
                        big_q: pow(&q, k),
                    });
                    continue;
                }
                let j =
                    c.xi.factors()
                        .iter()
                        .position(|(r, n)| *r == dag && n == m)
                        .filter(|&j| !used[j])
                        .ok_or_else(|| ClassError::Pairing(p.to_string()))?;
                used[j] = true;
                factors.push(ShapeFactor {
                    kind: GroupKind::GL,
                    m: *m,
                    big_q: pow(&q, 2 * k),
                });
            }
        }
    }
    let order = factors.iter().fold(Nat::one(), |acc, x| acc * x.order());
    let odd = odd_part(&order);
    Ok(CentralizerShape {
        factors,
        order,
        odd_part: odd,
    })
}

/// [Ĝ : Ĉ]_{2'}, the odd part of the class size.
pub fn index_odd_part(c: &SemisimpleClass) -> Result<Nat, ClassError> {
    let shape = centralizer_shape(c)?;
    let g = odd_part(&c.group_order());
    let (quo, rem) = g.div_rem(&shape.odd_part);
    debug_assert!(
        rem.is_zero(),
        "centralizer odd part does not divide group odd part"
    );
    Ok(quo)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealnessStructure {
    pub real: bool,
    /// Star-pairs (Δ, Δ*) among the non-(x+1) factors, each unordered pair once.
    pub pairs: Vec<(MonicPoly, MonicPoly)>,
    /// For ε = −1: each factor with whether it is self-dagger.
    pub self_dagger: Vec<(MonicPoly, bool)>,
}

pub fn realness_structure(c: &SemisimpleClass) -> Result<RealnessStructure, ClassError> {
    let real = c.xi.star()? == c.xi;
    let one = c.delta1();
    let mut pairs = Vec::new();
    if real {
        for (p, _) in c.xi.factors() {
            if *p == one {
                continue;
            }
            let s = poly_star(p)?;
            if *p <= s {
                pairs.push((p.clone(), s));
            }
        }
    }
    let mut self_dagger = Vec::new();
    if c.epsilon == Epsilon::Minus {
        for (p, _) in c.xi.factors() {
            self_dagger.push((p.clone(), poly_dagger(p, c.q)? == *p));
        }
    }
    Ok(RealnessStructure {
        real,
        pairs,
        self_dagger,
    })
}

pub fn is_real(c: &SemisimpleClass) -> Result<bool, ClassError> {
    Ok(c.xi.star()? == c.xi)
}

/// The data (l, d', Δ') behind the D-statistic estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorStats {
    /// 1 + number of distinct irreducible factors other than x+1.
    pub l: u32,
    /// Greatest multiplicity, counting the multiplicity of x+1.
    pub d_prime: u32,
    /// A factor attaining d', of largest degree among those (None if only x+1 attains it).
    pub d_prime_factor: Option<MonicPoly>,
}

pub fn factor_stats(c: &SemisimpleClass) -> FactorStats {
    let one = c.delta1();
    let others: Vec<_> = c.xi.factors().iter().filter(|(p, _)| *p != one).collect();
    let d_prime = others
        .iter()
        .map(|(_, m)| *m)
        .chain([c.d1])
        .max()
        .unwrap_or(0);
    let d_prime_factor = others
        .iter()
        .filter(|(_, m)| *m == d_prime)
        .max_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.cmp(&a.0)))
        .map(|(p, _)| p.clone());
    FactorStats {
        l: 1 + others.len() as u32,
        d_prime,
        d_prime_factor,
    }
}

/// A bound of the form `coefficient · q^{quarter_exponent / 4}` for the D-statistic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DBound {
    pub coefficient: BigRational,
    pub quarter_exponent: i64,
}

impl DBound {
    pub fn zero() -> Self {
        Self {
            coefficient: BigRational::zero(),
            quarter_exponent: 0,
        }
    }
}

fn q_power(q: u64, e: i64) -> BigRational {
    let p = BigRational::from_integer(pow(&Nat::from(q), e.unsigned_abs()).into());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// (1 − q^{−1} − q^{−2})^{l'+1} q^{d(d−2d'−1)/4}, with l' = 0 for ε = +1 and l' = l for ε = −1.
pub fn gleps_bound(c: &SemisimpleClass) -> DBound {
    let s = factor_stats(c);
    let q = c.q as i64;
    let lp = if c.epsilon == Epsilon::Plus { 0 } else { s.l };
    let base = BigRational::new((q * q - q - 1).into(), (q * q).into());
    let coefficient = pow(&base, lp as u64 + 1);
    let d = c.d as i64;
    DBound {
        coefficient,
        quarter_exponent: d * (d - 2 * s.d_prime as i64 - 1),
    }
}

/// Compares D = [Ĝ:Ĉ]_{2'} q^{−d(d+1)/4} with `bound`, exactly, via fourth powers.
pub fn d_statistic_cmp(c: &SemisimpleClass, bound: &DBound) -> Result<Ordering, ClassError> {
    if bound.coefficient <= BigRational::zero() {
        return Ok(Ordering::Greater);
    }
    let i = BigRational::from_integer(index_odd_part(c)?.into());
    let d = c.d as i64;
    let lhs = pow(&i, 4) * q_power(c.q, -d * (d + 1));
    let rhs = pow(&bound.coefficient, 4) * q_power(c.q, bound.quarter_exponent);
    Ok(lhs.cmp(&rhs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseWitness {
    /// 3·d1 ≥ d.
    ManyOnes { d1: u32, d: usize },
    /// Ξ = (x+1)^{d1} Δ^{⌊d/2⌋} with deg Δ = 2 and Δ = Δ*.
    SquareForm {
        delta: MonicPoly,
        d1: u32,
        reducible: bool,
        flagged: bool,
    },
    /// index^4 compared with constant^4 · q^{d(d+1)}.
    IndexBound {
        constant: u64,
        strict: bool,
        index_fourth: Nat,
        bound_fourth: Nat,
    },
    /// The listed exceptional (ε, d, q).
    Exceptional { d: usize, q: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GUdPrepCase {
    pub cases: Vec<(char, CaseWitness)>,
}

impl GUdPrepCase {
    pub fn labels(&self) -> String {
        self.cases.iter().map(|(c, _)| *c).collect()
    }

    pub fn contains(&self, label: char) -> bool {
        self.cases.iter().any(|(c, _)| *c == label)
    }
}

fn square_form(c: &SemisimpleClass) -> Result<Option<CaseWitness>, ClassError> {
    let half = (c.d / 2) as u32;
    if c.d1 as usize != c.d - 2 * half as usize {
        return Ok(None);
    }
    let one = c.delta1();
    let mut delta = MonicPoly::one(c.field());
    for (p, m) in c.xi.factors() {
        if *p == one {
            continue;
        }
        if m % half != 0 {
            return Ok(None);
        }
        delta = delta.mul(&p.pow(m / half));
    }
    if delta.degree() != 2 || poly_star(&delta)? != delta {
        return Ok(None);
    }
    let reducible = poly_factor(&delta)
        .factors()
        .iter()
        .map(|(_, m)| *m as usize)
        .sum::<usize>()
        > 1;
    let flagged = c.epsilon == Epsilon::Minus && !reducible;
    Ok(Some(CaseWitness::SquareForm {
        delta,
        d1: c.d1,
        reducible,
        flagged,
    }))
}

/// Every case of the large-index classification that holds for `c`, each with a witness.
pub fn classify_gudprep(c: &SemisimpleClass) -> Result<GUdPrepCase, ClassError> {
    if c.d < 5 {
        return Err(ClassError::Precondition(format!("d = {} < 5", c.d)));
    }
    let e = c.e();
    if e <= 1 {
        return Err(ClassError::Precondition("gcd(d, q - eps) = 1".into()));
    }
    if !is_real(c)? {
        return Err(ClassError::Precondition("class is not real".into()));
    }
    if c.is_identity() {
        return Err(ClassError::Precondition("identity class".into()));
    }
    let mut cases = Vec::new();
    if 3 * c.d1 as usize >= c.d {
        cases.push(('a', CaseWitness::ManyOnes { d1: c.d1, d: c.d }));
    }
    if let Some(w) = square_form(c)? {
        cases.push(('b', w));
    }
    let index = index_odd_part(c)?;
    let index_fourth = pow(&index, 4);
    let qdd = pow(&Nat::from(c.q), (c.d * (c.d + 1)) as u64);
    let minus = c.epsilon == Epsilon::Minus;
    let delta = c.epsilon.delta() as u64;
    let mut bound = |label: char, constant: u64, strict: bool| {
        let bound_fourth = pow(&Nat::from(constant), 4) * &qdd;
        let holds = if strict {
            index_fourth > bound_fourth
        } else {
            index_fourth >= bound_fourth
        };
        if holds {
            cases.push((
                label,
                CaseWitness::IndexBound {
                    constant,
                    strict,
                    index_fourth: index_fourth.clone(),
                    bound_fourth,
                },
            ));
        }
    };
    bound(
        'c',
        delta * e * c.f() as u64 * c.epsilon.q_minus_eps(c.q),
        false,
    );
    if minus && c.q == 4 {
        bound('d', 45, false);
    }
    if minus && c.q == 2 {
        bound('e', 15, false);
    }
    if minus && (c.d, c.q) == (5, 4) {
        bound('f', 12, true);
    }
    if minus && (c.d, c.q) == (6, 8) {
        bound('g', 51, true);
    }
    if minus && (c.d, c.q) == (6, 2) {
        cases.push(('h', CaseWitness::Exceptional { d: 6, q: 2 }));
    }
    Ok(GUdPrepCase { cases })
}

/// Characteristic polynomial of κ·s: roots scaled by κ.
pub fn scale_charpoly(xi: &MonicPoly, kappa: FieldElement) -> Result<MonicPoly, ClassError> {
    if kappa.is_zero() {
        return Err(FieldError::Zero.into());
    }
    let n = xi.degree() as u64;
    let coeffs = xi
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| *a * kappa.pow(n - j as u64))
        .collect();
    Ok(MonicPoly::new(xi.field(), coeffs)?)
}

/// The unique ξ with ξ^{−2} = ζ.
pub fn real_lift_scalar(zeta: FieldElement) -> Result<FieldElement, ClassError> {
    Ok(zeta.inv()?.sqrt())
}

/// ⌈[Ĝ:Ĉ]_{2'} / e⌉, a lower bound for degrees of characters of SL^ε_d(q) in the series of `c`.
pub fn min_character_degree(c: &SemisimpleClass) -> Result<Nat, ClassError> {
    let i = index_odd_part(c)?;
    Ok(i.div_ceil(&Nat::from(c.e())))
}

/// Palindromic diagonal element of GL^ε_d(q) with prescribed determinant.
pub fn palindromic_element(
    d: usize,
    q: u64,
    epsilon: Epsilon,
    det_target: FieldElement,
) -> Result<Vec<FieldElement>, ClassError> {
    let field = group_field(epsilon, q)?;
    if det_target.degree() != field.degree() {
        return Err(FieldError::Mismatch {
            left: field.degree(),
            right: det_target.degree(),
        }
        .into());
    }
    let n = epsilon.q_minus_eps(q);
    if det_target.is_zero() || !det_target.pow(n).is_one() {
        return Err(ClassError::Precondition(
            "determinant outside the order-(q - eps) subgroup".into(),
        ));
    }
    let one = field.one();
    let root = |a: FieldElement, k: u32| (0..k).fold(a, |x, _| x.sqrt());
    let t = match d {
        3 | 5 => {
            let z = root(det_target, 1);
            let mut t = vec![one; d];
            t[0] = z;
            t[d - 1] = z;
            t
        }
        6 | 7 => {
            let z = root(det_target, 2);
            let mut t = vec![one; d];
            for i in [0, 1, d - 2, d - 1] {
                t[i] = z;
            }
            t
        }
        d if d >= 9 => {
            let dbar = if d % 2 == 1 { 1 } else { 2 };
            let dp = (d - dbar) / 4;
            let z = field.epsilon_subgroup_generator();
            let zi = z.inv()?;
            let mut t = Vec::with_capacity(d);
            t.extend(std::iter::repeat(z).take(dp));
            t.extend(std::iter::repeat(one).take(dp));
            let mut fixed = z.pow(2 * dp as u64);
            let mid = t.len();
            if d - dbar == 4 * dp {
                t.extend(std::iter::repeat(one).take(dbar));
            } else {
                t.push(zi);
                t.extend(std::iter::repeat(one).take(dbar));
                t.push(zi);
                fixed = fixed * zi * zi;
            }
            t.extend(std::iter::repeat(one).take(dp));
            t.extend(std::iter::repeat(z).take(dp));
            let xi = root(det_target / fixed, if dbar == 1 { 0 } else { 1 });
            let start = if d - dbar == 4 * dp { mid } else { mid + 1 };
            for x in &mut t[start..start + dbar] {
                *x = xi;
            }
            t
        }
        _ => {
            return Err(ClassError::Precondition(format!(
                "no palindromic construction for d = {d}"
            )))
        }
    };
    debug_assert_eq!(t.iter().fold(one, |a, &b| a * b), det_target);
    Ok(t)
}

/// The involution u′ = [[I_l,0,I_l],[0,I_{d−2l},0],[0,0,I_l]] and its predicted centralizer order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionBlocks {
    pub d: usize,
    pub l: usize,
    /// 0/1 entries, row-major.
    pub entries: Vec<Vec<u8>>,
    pub predicted_centralizer: Nat,
}

pub fn involution_with_blocks(
    d: usize,
    l: usize,
    q: u64,
    epsilon: Epsilon,
) -> Result<InvolutionBlocks, ClassError> {
    if 2 * l > d {
        return Err(ClassError::Precondition(format!(
            "2l = {} exceeds d = {d}",
            2 * l
        )));
    }
    log2_exact(q).ok_or(ClassError::BadQ(q))?;
    let mut entries = vec![vec![0u8; d]; d];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = 1;
    }
    for i in 0..l {
        entries[i][d - l + i] = 1;
    }
    let exp = (2 * l * d) as u64 - (3 * l * l) as u64;
    let predicted = pow(&Nat::from(q), exp)
        * gl_eps(epsilon, l as u32, q)
        * gl_eps(epsilon, (d - 2 * l) as u32, q);
    Ok(InvolutionBlocks {
        d,
        l,
        entries,
        predicted_centralizer: predicted,
    })
}

/// The subgroup Z of scalars of GL^ε_d(q), of order q − ε.
pub fn center_scalars(epsilon: Epsilon, q: u64) -> Result<Vec<FieldElement>, ClassError> {
    let field = group_field(epsilon, q)?;
    let z = field.epsilon_subgroup_generator();
    let n = epsilon.q_minus_eps(q);
    Ok((0..n).map(|i| z.pow(i)).collect())
}

/// |C_{PGL^ε}(t)| for the image t of an element of class `c`.
pub fn pgl_centralizer_order(c: &SemisimpleClass) -> Result<Nat, ClassError> {
    let xi = c.xi.expand();
    let scalars = center_scalars(c.epsilon, c.q)?;
    let mut stab = 0u64;
    for &l in &scalars {
        if scale_charpoly(&xi, l)? == xi {
            stab += 1;
        }
    }
    let order = centralizer_shape(c)?.order * Nat::from(stab);
    let (quo, rem) = order.div_rem(&Nat::from(scalars.len() as u64));
    debug_assert!(rem.is_zero());
    Ok(quo)
}

/// Whether the image of `c` in PGL^ε_d(q) is conjugate to its inverse there.
pub fn pgl_is_real(c: &SemisimpleClass) -> Result<bool, ClassError> {
    let xi = c.xi.expand();
    let star = poly_star(&xi)?;
    for l in center_scalars(c.epsilon, c.q)? {
        if scale_charpoly(&star, l)? == xi {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether Ξ could come from GU_d(q): the dagger-invariance test, exposed for callers with a raw polynomial.
pub fn unitary_ok(xi: &MonicPoly, q: u64) -> Result<bool, ClassError> {
    Ok(is_unitary_compatible(xi, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::make_field;

    fn class(eps: Epsilon, q: u64, coeffs: &[&[u64]]) -> SemisimpleClass {
        let field = group_field(eps, q).unwrap();
        let p = coeffs
            .iter()
            .map(|c| MonicPoly::from_bits(field, c).unwrap())
            .fold(MonicPoly::one(field), |a, b| a.mul(&b));
        SemisimpleClass::from_poly(eps, q, &p).unwrap()
    }

    #[test]
    fn shape_examples() {
        let c = class(Epsilon::Plus, 4, &[&[2], &[3]]);
        let s = centralizer_shape(&c).unwrap();
        assert_eq!(s.order, Nat::from(9u32));
        assert_eq!(s.to_string(), "GL_1(4) x GL_1(4)");
        let c = class(Epsilon::Minus, 2, &[&[2], &[3]]);
        let s = centralizer_shape(&c).unwrap();
        assert_eq!(s.order, Nat::from(9u32));
        assert_eq!(s.to_string(), "GU_1(2) x GU_1(2)");
        let c = SemisimpleClass::identity(Epsilon::Plus, 3, 4).unwrap();
        assert_eq!(centralizer_shape(&c).unwrap().order, Nat::from(181_440u32));
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            index_odd_part(&SemisimpleClass::identity(Epsilon::Minus, 4, 2).unwrap()).unwrap(),
            Nat::one()
        );
        let c = class(Epsilon::Plus, 4, &[&[2], &[3]]);
        assert_eq!(index_odd_part(&c).unwrap(), Nat::from(5u32));
        let c = class(Epsilon::Minus, 2, &[&[1], &[2], &[3]]);
        assert_eq!(index_odd_part(&c).unwrap(), Nat::from(3u32));
    }

    #[test]
    fn realness_examples() {
        let r =
            realness_structure(&SemisimpleClass::identity(Epsilon::Plus, 3, 2).unwrap()).unwrap();
        assert!(r.real && r.pairs.is_empty());
        let r = realness_structure(&class(Epsilon::Minus, 2, &[&[2], &[3]])).unwrap();
        assert!(r.real);
        assert_eq!(r.pairs.len(), 1);
        assert!(r.self_dagger.iter().all(|(_, b)| *b));
        let r = realness_structure(&class(Epsilon::Plus, 4, &[&[2], &[2], &[3]])).unwrap();
        assert!(!r.real);
    }

    #[test]
    fn gudprep_examples() {
        let c = class(Epsilon::Minus, 2, &[&[1], &[1], &[2], &[2], &[3], &[3]]);
        let k = classify_gudprep(&c).unwrap();
        assert!(k.contains('a') && k.contains('h'));
        let c = class(Epsilon::Plus, 4, &[&[1, 1], &[1, 1], &[1, 1]]);
        let k = classify_gudprep(&c).unwrap();
        assert!(k.contains('b'));
        match &k.cases.iter().find(|(l, _)| *l == 'b').unwrap().1 {
            CaseWitness::SquareForm {
                reducible, flagged, ..
            } => assert!(*reducible && !*flagged),
            w => panic!("{w:?}"),
        }
        let f16 = make_field(4, 1).unwrap();
        let z = f16.cyclic_generator(5).unwrap();
        let xi = [z, z.inv().unwrap(), z.pow(3), z.pow(3).inv().unwrap()]
            .into_iter()
            .fold(MonicPoly::linear(f16.one(), f16), |a, r| {
                a.mul(&MonicPoly::linear(r, f16))
            });
        let c = SemisimpleClass::from_poly(Epsilon::Plus, 16, &xi).unwrap();
        assert!(classify_gudprep(&c).unwrap().contains('c'));
        assert!(
            classify_gudprep(&SemisimpleClass::identity(Epsilon::Plus, 5, 16).unwrap()).is_err()
        );
    }

    #[test]
    fn d_statistic_examples() {
        let id = SemisimpleClass::identity(Epsilon::Plus, 5, 16).unwrap();
        assert_eq!(
            d_statistic_cmp(&id, &DBound::zero()).unwrap(),
            Ordering::Greater
        );
        let f16 = make_field(4, 1).unwrap();
        let z = f16.cyclic_generator(5).unwrap();
        let xi = [z, z.inv().unwrap(), z.pow(3), z.pow(3).inv().unwrap()]
            .into_iter()
            .fold(MonicPoly::linear(f16.one(), f16), |a, r| {
                a.mul(&MonicPoly::linear(r, f16))
            });
        let c = SemisimpleClass::from_poly(Epsilon::Plus, 16, &xi).unwrap();
        let s = factor_stats(&c);
        assert_eq!((s.l, s.d_prime), (5, 1));
        assert_ne!(
            d_statistic_cmp(&c, &gleps_bound(&c)).unwrap(),
            Ordering::Less
        );
        let f16u = make_field(2, 2).unwrap();
        let z = f16u.cyclic_generator(5).unwrap();
        let xi = MonicPoly::linear(f16u.one(), f16u)
            .pow(3)
            .mul(&MonicPoly::linear(z, f16u))
            .mul(&MonicPoly::linear(z.inv().unwrap(), f16u));
        let c = SemisimpleClass::from_poly(Epsilon::Minus, 4, &xi).unwrap();
        assert_eq!(factor_stats(&c).d_prime, 3);
        assert_ne!(
            d_statistic_cmp(&c, &gleps_bound(&c)).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn scale_examples() {
        let f = make_field(2, 1).unwrap();
        let w = f.elem(2).unwrap();
        let p = MonicPoly::linear(w, f);
        assert_eq!(scale_charpoly(&p, f.one()).unwrap(), p);
        assert_eq!(
            scale_charpoly(&p, w).unwrap(),
            MonicPoly::linear(f.elem(3).unwrap(), f)
        );
        assert!(scale_charpoly(&p, f.zero()).is_err());
    }

    #[test]
    fn scalar_multiples_of_real_classes() {
        // Ξ = (x+1)^{d1} ((x+ζ)(x+ζ^{-1}))^{d2}, d1 ≠ d2: only κ = 1 keeps κŝ real.
        let f = make_field(4, 1).unwrap();
        let z = f.cyclic_generator(5).unwrap();
        let pair = MonicPoly::linear(z, f).mul(&MonicPoly::linear(z.inv().unwrap(), f));
        for (d1, d2) in [(1, 2), (2, 1), (0, 1), (3, 1)] {
            let xi = MonicPoly::linear(f.one(), f).pow(d1).mul(&pair.pow(d2));
            let ks: Vec<_> = f
                .nonzero()
                .filter(|&k| {
                    let s = scale_charpoly(&xi, k).unwrap();
                    poly_star(&s).unwrap() == s
                })
                .collect();
            assert_eq!(ks, vec![f.one()], "d1={d1} d2={d2}");
        }
    }

    #[test]
    fn real_lift_examples() {
        let f4 = make_field(2, 1).unwrap();
        assert!(real_lift_scalar(f4.one()).unwrap().is_one());
        let w = f4.elem(2).unwrap();
        assert_eq!(real_lift_scalar(w).unwrap(), w);
        let x = make_field(4, 1).unwrap().elem(2).unwrap();
        let xi = real_lift_scalar(x).unwrap();
        assert_eq!(xi.inv().unwrap().pow(2), x);
    }

    #[test]
    fn palindromic_examples() {
        let f4 = make_field(2, 1).unwrap();
        let w = f4.elem(2).unwrap();
        let t = palindromic_element(3, 4, Epsilon::Plus, f4.one()).unwrap();
        assert!(t.iter().all(|a| a.is_one()));
        let t = palindromic_element(3, 4, Epsilon::Plus, w * w).unwrap();
        assert_eq!(t, vec![w, f4.one(), w]);
        let t = palindromic_element(9, 4, Epsilon::Plus, w).unwrap();
        let one = f4.one();
        assert_eq!(&t[..4], &[w, w, one, one]);
        assert_eq!(&t[5..], &[one, one, w, w]);
        assert_eq!(t.iter().fold(one, |a, &b| a * b), w);
        for d in [3, 5, 6, 7, 9, 10, 11, 12, 13, 14] {
            for eps in [Epsilon::Plus, Epsilon::Minus] {
                for q in [4u64, 8, 16] {
                    let field = group_field(eps, q).unwrap();
                    let g = field.epsilon_subgroup_generator();
                    for k in 0..eps.q_minus_eps(q) {
                        let t = palindromic_element(d, q, eps, g.pow(k)).unwrap();
                        let rev: Vec<_> = t.iter().rev().copied().collect();
                        assert_eq!(t, rev);
                        assert_eq!(t.iter().fold(field.one(), |a, &b| a * b), g.pow(k));
                        assert!(t.iter().all(|a| a.pow(eps.q_minus_eps(q)).is_one()));
                    }
                }
            }
        }
        assert!(palindromic_element(4, 4, Epsilon::Plus, f4.one()).is_err());
        assert!(palindromic_element(8, 4, Epsilon::Plus, f4.one()).is_err());
    }

    #[test]
    fn involution_examples() {
        let i = involution_with_blocks(3, 0, 4, Epsilon::Plus).unwrap();
        assert_eq!(i.predicted_centralizer, Nat::from(181_440u32));
        assert_eq!(
            involution_with_blocks(3, 1, 2, Epsilon::Plus)
                .unwrap()
                .predicted_centralizer,
            Nat::from(8u32)
        );
        assert_eq!(
            involution_with_blocks(3, 1, 4, Epsilon::Plus)
                .unwrap()
                .predicted_centralizer,
            Nat::from(576u32)
        );
        let u = involution_with_blocks(3, 1, 2, Epsilon::Minus).unwrap();
        assert_eq!(u.predicted_centralizer, Nat::from(72u32));
        assert_eq!(u.entries, vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(involution_with_blocks(3, 2, 2, Epsilon::Plus).is_err());
    }

    #[test]
    fn min_degree_examples() {
        let id = SemisimpleClass::identity(Epsilon::Minus, 5, 4).unwrap();
        assert_eq!(min_character_degree(&id).unwrap(), Nat::one());
        let c = class(Epsilon::Minus, 2, &[&[2], &[3]]);
        assert_eq!(index_odd_part(&c).unwrap(), Nat::one());
        assert_eq!(min_character_degree(&c).unwrap(), Nat::one());
    }

    #[test]
    fn pgl_formula_small() {
        // diag(ω, ω²) in PGL_2(4) ≅ A_5 is an element of order 3.
        let c = class(Epsilon::Plus, 4, &[&[2], &[3]]);
        assert_eq!(pgl_centralizer_order(&c).unwrap(), Nat::from(3u32));
        assert!(pgl_is_real(&c).unwrap());
    }
}

//! Brute-force matrix groups: GL_d(q), GU_d(q) and their central quotients,
//! enumerated element by element, with direct centralizer, realness and
//! conjugacy scans used to cross-check the closed formulas.
//!
//! Matrices are at most 4×4 over fields of at most 256 elements, so an
//! element packs into a `u128` key (one byte per entry, row-major).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{group_order, BoundsError, GroupKind};
use crate::gf2k::{FieldElement, FieldError, FieldSpec};
use crate::polyfield::{MonicPoly, PolyError};
use crate::scalar::{big, odd_part};
use crate::semisimple::{
    centralizer_shape, group_field, involution_with_blocks, pgl_centralizer_order, pgl_is_real,
    realness_structure, ClassError, Epsilon, SemisimpleClass,
};

pub const MAX_DIM: usize = 4;
pub const MAX_FIELD_DEGREE: u32 = 8;
/// Groups up to this order also get a direct centralizer scan for every element.
pub const FULL_SCAN_LIMIT: u64 = 1000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("group order {order} exceeds the budget {budget}")]
    Budget { order: BigUint, budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("matrix is not an element of {0}")]
    NotMember(String),
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error("closure failed: {0}")]
    Closure(String),
}

type Raw = [u8; 16];

fn key(r: &Raw) -> u128 {
    u128::from_le_bytes(*r)
}

fn raw(k: u128) -> Raw {
    k.to_le_bytes()
}

/// Lookup tables for a field with at most 256 elements.
#[derive(Clone)]
struct Arith {
    k: u32,
    n: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
    conj: Vec<u8>,
}

impl Arith {
    fn new(field: FieldSpec) -> Result<Self, OracleError> {
        let k = field.degree();
        if k > MAX_FIELD_DEGREE {
            return Err(OracleError::Unsupported(format!(
                "field GF(2^{k}) is too large for the oracle"
            )));
        }
        let n = 1usize << k;
        let el = |b: usize| FieldElement::new(b as u64, k).expect("in range");
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[(a << k) | b] = (el(a) * el(b)).bits() as u8;
            }
        }
        let mut inv = vec![0u8; n];
        let mut conj = vec![0u8; n];
        for a in 0..n {
            if a != 0 {
                inv[a] = el(a).inv()?.bits() as u8;
            }
            conj[a] = if field.delta() == 2 {
                el(a).frobenius(field.f()).bits() as u8
            } else {
                a as u8
            };
        }
        Ok(Arith {
            k,
            n,
            mul,
            inv,
            conj,
        })
    }

    #[inline]
    fn m(&self, a: u8, b: u8) -> u8 {
        self.mul[((a as usize) << self.k) | b as usize]
    }

    fn identity(d: usize) -> Raw {
        let mut r = [0u8; 16];
        for i in 0..d {
            r[i * d + i] = 1;
        }
        r
    }

    fn mat_mul(&self, a: &Raw, b: &Raw, d: usize) -> Raw {
        let mut r = [0u8; 16];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u8;
                for l in 0..d {
                    acc ^= self.m(a[i * d + l], b[l * d + j]);
                }
                r[i * d + j] = acc;
            }
        }
        r
    }

    fn mat_pow(&self, a: &Raw, d: usize, mut e: u64, projective: bool) -> Raw {
        let mut acc = Self::identity(d);
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &b, d);
                if projective {
                    acc = self.normalize(&acc, d);
                }
            }
            e >>= 1;
            if e > 0 {
                b = self.mat_mul(&b, &b, d);
                if projective {
                    b = self.normalize(&b, d);
                }
            }
        }
        acc
    }

    fn inverse(&self, a: &Raw, d: usize) -> Option<Raw> {
        let mut m = *a;
        let mut r = Self::identity(d);
        for c in 0..d {
            let p = (c..d).find(|&i| m[i * d + c] != 0)?;
            if p != c {
                for j in 0..d {
                    m.swap(p * d + j, c * d + j);
                    r.swap(p * d + j, c * d + j);
                }
            }
            let iv = self.inv[m[c * d + c] as usize];
            for j in 0..d {
                m[c * d + j] = self.m(m[c * d + j], iv);
                r[c * d + j] = self.m(r[c * d + j], iv);
            }
            for i in 0..d {
                let factor = m[i * d + c];
                if i != c && factor != 0 {
                    for j in 0..d {
                        m[i * d + j] ^= self.m(factor, m[c * d + j]);
                        r[i * d + j] ^= self.m(factor, r[c * d + j]);
                    }
                }
            }
        }
        Some(r)
    }

    /// Scale so that the first nonzero entry of the first nonzero column is 1.
    fn normalize(&self, a: &Raw, d: usize) -> Raw {
        let lead = (0..d)
            .flat_map(|j| (0..d).map(move |i| i * d + j))
            .map(|idx| a[idx])
            .find(|&v| v != 0);
        match lead {
            Some(v) if v != 1 => {
                let iv = self.inv[v as usize];
                let mut r = [0u8; 16];
                for idx in 0..d * d {
                    r[idx] = self.m(a[idx], iv);
                }
                r
            }
            _ => *a,
        }
    }

    /// M† J M = J for the anti-diagonal J, with † the conjugate transpose.
    fn preserves_form(&self, a: &Raw, d: usize) -> bool {
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u8;
                for l in 0..d {
                    acc ^= self.m(self.conj[a[l * d + i] as usize], a[(d - 1 - l) * d + j]);
                }
                if acc != u8::from(i + j == d - 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Characteristic polynomial det(x·I − A), constant term first, leading 1 omitted.
    fn charpoly(&self, a: &Raw, d: usize) -> Vec<u8> {
        let mut h = *a;
        let idx = |i: usize, j: usize| i * d + j;
        for m in 1..d.saturating_sub(1) {
            let Some(p) = (m..d).find(|&i| h[idx(i, m - 1)] != 0) else {
                continue;
            };
            if p != m {
                for j in 0..d {
                    h.swap(idx(p, j), idx(m, j));
                }
                for i in 0..d {
                    h.swap(idx(i, p), idx(i, m));
                }
            }
            let iv = self.inv[h[idx(m, m - 1)] as usize];
            for i in m + 1..d {
                let u = self.m(h[idx(i, m - 1)], iv);
                if u == 0 {
                    continue;
                }
                for j in 0..d {
                    h[idx(i, j)] ^= self.m(u, h[idx(m, j)]);
                }
                for r in 0..d {
                    h[idx(r, m)] ^= self.m(u, h[idx(r, i)]);
                }
            }
        }
        // p_0 = 1; p_m = (x + h_mm) p_{m−1} + Σ_{i<m} h_im (∏_{j=i+1}^{m} h_{j,j−1}) p_{i−1}
        let mut ps: Vec<Vec<u8>> = vec![vec![1]];
        for m in 0..d {
            let prev = &ps[m];
            let mut next = vec![0u8; m + 2];
            for (e, &c) in prev.iter().enumerate() {
                next[e + 1] ^= c;
                next[e] ^= self.m(h[idx(m, m)], c);
            }
            let mut prod = 1u8;
            for i in (0..m).rev() {
                prod = self.m(prod, h[idx(i + 1, i)]);
                let coef = self.m(h[idx(i, m)], prod);
                if coef != 0 {
                    for (e, &c) in ps[i].iter().enumerate() {
                        next[e] ^= self.m(coef, c);
                    }
                }
            }
            ps.push(next);
        }
        let mut out = ps.pop().expect("nonempty");
        out.pop();
        out
    }
}

/// A square matrix over a finite field of characteristic 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    d: usize,
    entries: Vec<FieldElement>,
}

impl Matrix {
    pub fn new(
        field: FieldSpec,
        d: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, OracleError> {
        if d == 0 || d > MAX_DIM || entries.len() != d * d {
            return Err(OracleError::Shape(format!(
                "need {d}×{d} entries with 1 ≤ d ≤ {MAX_DIM}"
            )));
        }
        let k = field.degree();
        if let Some(e) = entries.iter().find(|e| e.degree() != k) {
            return Err(FieldError::Mismatch {
                left: k,
                right: e.degree(),
            }
            .into());
        }
        Ok(Matrix { field, d, entries })
    }

    pub fn from_bits(field: FieldSpec, d: usize, bits: &[u64]) -> Result<Self, OracleError> {
        let entries = bits
            .iter()
            .map(|&b| field.elem(b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, d, entries)
    }

    pub fn identity(field: FieldSpec, d: usize) -> Result<Self, OracleError> {
        Self::diagonal(field, &vec![field.one(); d])
    }

    pub fn diagonal(field: FieldSpec, diag: &[FieldElement]) -> Result<Self, OracleError> {
        let d = diag.len();
        let mut entries = vec![field.zero(); d * d];
        for (i, &a) in diag.iter().enumerate() {
            entries[i * d + i] = a;
        }
        Self::new(field, d, entries)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.d + j]
    }

    fn to_raw(&self) -> Result<Raw, OracleError> {
        if self.field.degree() > MAX_FIELD_DEGREE {
            return Err(OracleError::Unsupported("field too large".into()));
        }
        let mut r = [0u8; 16];
        for (i, e) in self.entries.iter().enumerate() {
            r[i] = e.bits() as u8;
        }
        Ok(r)
    }

    fn from_raw(field: FieldSpec, d: usize, r: &Raw) -> Self {
        let k = field.degree();
        let entries = r[..d * d]
            .iter()
            .map(|&b| FieldElement::new(b as u64, k).expect("in range"))
            .collect();
        Matrix { field, d, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, OracleError> {
        if self.field != other.field || self.d != other.d {
            return Err(OracleError::Shape(
                "operands differ in field or size".into(),
            ));
        }
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = self.field.zero();
                for l in 0..d {
                    acc = acc + self.entry(i, l) * other.entry(l, j);
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            field: self.field,
            d,
            entries,
        })
    }

    pub fn inverse(&self) -> Result<Option<Self>, OracleError> {
        let a = Arith::new(self.field)?;
        Ok(a.inverse(&self.to_raw()?, self.d)
            .map(|r| Self::from_raw(self.field, self.d, &r)))
    }

    pub fn charpoly(&self) -> Result<MonicPoly, OracleError> {
        let a = Arith::new(self.field)?;
        let c = a.charpoly(&self.to_raw()?, self.d);
        Ok(MonicPoly::from_bits(
            self.field,
            &c.iter().map(|&b| b as u64).collect::<Vec<_>>(),
        )?)
    }

    /// Multiplicative order, or `None` when singular.
    pub fn order(&self) -> Result<Option<u64>, OracleError> {
        let a = Arith::new(self.field)?;
        let r = self.to_raw()?;
        if a.inverse(&r, self.d).is_none() {
            return Ok(None);
        }
        let id = Arith::identity(self.d);
        let mut x = r;
        let mut n = 1u64;
        while x != id {
            x = a.mat_mul(&x, &r, self.d);
            n += 1;
        }
        Ok(Some(n))
    }

    /// Whether the matrix preserves Σ x_i y_{d+1−i}^q, with q = 2^f for the field's f.
    pub fn preserves_hermitian_form(&self) -> Result<bool, OracleError> {
        if self.field.delta() != 2 {
            return Err(OracleError::Unsupported(
                "the Hermitian form needs a quadratic extension".into(),
            ));
        }
        Ok(Arith::new(self.field)?.preserves_form(&self.to_raw()?, self.d))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.d {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = (0..self.d)
                .map(|j| self.entry(i, j).bits().to_string())
                .collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub kind: GroupKind,
    pub d: usize,
    pub q: u64,
}

impl GroupDescriptor {
    pub fn new(kind: GroupKind, d: usize, q: u64) -> Self {
        GroupDescriptor { kind, d, q }
    }

    pub fn epsilon(&self) -> Epsilon {
        if self.kind.epsilon() > 0 {
            Epsilon::Plus
        } else {
            Epsilon::Minus
        }
    }

    /// The linear group this one is a quotient of (or itself).
    pub fn linear(&self) -> Self {
        let kind = if self.kind.epsilon() > 0 {
            GroupKind::GL
        } else {
            GroupKind::GU
        };
        GroupDescriptor { kind, ..*self }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.kind, self.d, self.q)
    }
}

/// A fully enumerated group, stored as a sorted list of packed elements.
pub struct GroupEnum {
    descriptor: GroupDescriptor,
    field: FieldSpec,
    arith: Arith,
    keys: Vec<u128>,
    projective: bool,
    lifts: HashMap<u128, Vec<u128>>,
}

impl fmt::Debug for GroupEnum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupEnum")
            .field("descriptor", &self.descriptor)
            .field("order", &self.keys.len())
            .finish()
    }
}

impl GroupEnum {
    fn from_keys(
        descriptor: GroupDescriptor,
        field: FieldSpec,
        arith: Arith,
        mut keys: Vec<u128>,
    ) -> Self {
        keys.sort_unstable();
        keys.dedup();
        GroupEnum {
            descriptor,
            field,
            arith,
            keys,
            projective: false,
            lifts: HashMap::new(),
        }
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        self.descriptor
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn d(&self) -> usize {
        self.descriptor.d
    }

    pub fn order(&self) -> BigUint {
        big(self.keys.len() as u64)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn elements(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.keys
            .iter()
            .map(move |&k| Matrix::from_raw(self.field, self.d(), &raw(k)))
    }

    fn canon(&self, r: &Raw) -> Raw {
        if self.projective {
            self.arith.normalize(r, self.d())
        } else {
            *r
        }
    }

    fn mul(&self, a: &Raw, b: &Raw) -> Raw {
        self.canon(&self.arith.mat_mul(a, b, self.d()))
    }

    fn inv(&self, a: &Raw) -> Raw {
        self.canon(
            &self
                .arith
                .inverse(a, self.d())
                .expect("group elements are invertible"),
        )
    }

    fn contains_key(&self, k: u128) -> bool {
        self.keys.binary_search(&k).is_ok()
    }

    /// Canonical key of a matrix if it lies in the group.
    fn member(&self, m: &Matrix) -> Result<Raw, OracleError> {
        if m.field != self.field || m.d != self.d() {
            return Err(OracleError::NotMember(self.descriptor.to_string()));
        }
        let r = self.canon(&m.to_raw()?);
        if self.contains_key(key(&r)) {
            Ok(r)
        } else {
            Err(OracleError::NotMember(self.descriptor.to_string()))
        }
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.member(m).is_ok()
    }

    fn is_identity(&self, r: &Raw) -> bool {
        *r == Arith::identity(self.d())
    }

    fn odd_exponent(&self) -> u64 {
        odd_part(&self.order()).to_u64().expect("order fits in u64")
    }

    fn is_odd_order(&self, r: &Raw, odd: u64) -> bool {
        self.is_identity(&self.arith.mat_pow(r, self.d(), odd, self.projective))
    }

    /// Conjugacy class of `s` under the whole group, sorted.
    fn orbit(&self, s: &Raw) -> Vec<u128> {
        let mut out: Vec<u128> = self
            .keys
            .par_iter()
            .map(|&k| {
                let x = raw(k);
                key(&self.mul(&self.mul(&x, s), &self.inv(&x)))
            })
            .collect();
        out.par_sort_unstable();
        out.dedup();
        out
    }

    fn centralizer_count(&self, s: &Raw) -> u64 {
        self.keys
            .par_iter()
            .filter(|&&k| {
                let x = raw(k);
                self.mul(&x, s) == self.mul(s, &x)
            })
            .count() as u64
    }

    /// Certify closure: every inverse lies in the set, and products of
    /// `samples` seeded random pairs do too. Full inverse closure plus closure
    /// under a generating set is checked by `closure_by_generators`.
    pub fn spot_check_closure(&self, samples: usize, seed: u64) -> bool {
        if !self
            .keys
            .par_iter()
            .all(|&k| self.contains_key(key(&self.inv(&raw(k)))))
        {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let a = raw(*self.keys.choose(&mut rng).expect("nonempty"));
            let b = raw(*self.keys.choose(&mut rng).expect("nonempty"));
            self.contains_key(key(&self.mul(&a, &b)))
        })
    }
}

fn check_budget(order: &BigUint, budget: u64) -> Result<(), OracleError> {
    if *order > big(budget) {
        Err(OracleError::Budget {
            order: order.clone(),
            budget,
        })
    } else {
        Ok(())
    }
}

fn check_dim(d: usize) -> Result<(), OracleError> {
    if d == 0 || d > MAX_DIM {
        Err(OracleError::Unsupported(format!(
            "dimension {d} outside 1..={MAX_DIM}"
        )))
    } else {
        Ok(())
    }
}

/// All invertible d×d matrices over `field`, built row by row: each new row
/// ranges over the vectors outside the span of the rows already chosen.
fn all_invertible(field: FieldSpec, d: usize) -> Result<(Arith, Vec<u128>), OracleError> {
    let arith = Arith::new(field)?;
    let n = arith.n;
    let vectors: Vec<[u8; 4]> = (0..n.pow(d as u32))
        .map(|mut i| {
            let mut v = [0u8; 4];
            for slot in v.iter_mut().take(d) {
                *slot = (i % n) as u8;
                i /= n;
            }
            v
        })
        .collect();
    let pack = |v: &[u8; 4]| u32::from_le_bytes(*v);
    let mut out = Vec::new();
    let mut rows: Vec<[u8; 4]> = Vec::with_capacity(d);
    fn rec(
        arith: &Arith,
        d: usize,
        vectors: &[[u8; 4]],
        pack: &dyn Fn(&[u8; 4]) -> u32,
        rows: &mut Vec<[u8; 4]>,
        span: &HashSet<u32>,
        out: &mut Vec<u128>,
    ) {
        if rows.len() == d {
            let mut r = [0u8; 16];
            for (i, row) in rows.iter().enumerate() {
                r[i * d..i * d + d].copy_from_slice(&row[..d]);
            }
            out.push(key(&r));
            return;
        }
        for v in vectors {
            if span.contains(&pack(v)) {
                continue;
            }
            let mut next = HashSet::with_capacity(span.len() * arith.n);
            for &s in span {
                for c in 0..arith.n as u8 {
                    let mut w = [0u8; 4];
                    for (i, slot) in w.iter_mut().enumerate().take(d) {
                        *slot = arith.m(c, v[i]);
                    }
                    next.insert(s ^ pack(&w));
                }
            }
            rows.push(*v);
            rec(arith, d, vectors, pack, rows, &next, out);
            rows.pop();
        }
    }
    let span: HashSet<u32> = [0u32].into_iter().collect();
    rec(&arith, d, &vectors, &pack, &mut rows, &span, &mut out);
    Ok((arith, out))
}

/// GL_d(q) by direct scan.
pub fn enumerate_gl(d: usize, q: u64, budget: u64) -> Result<GroupEnum, OracleError> {
    check_dim(d)?;
    let order = group_order(GroupKind::GL, d as u32, q)?.value;
    check_budget(&order, budget)?;
    let field = group_field(Epsilon::Plus, q)?;
    let (arith, keys) = all_invertible(field, d)?;
    Ok(GroupEnum::from_keys(
        GroupDescriptor::new(GroupKind::GL, d, q),
        field,
        arith,
        keys,
    ))
}

/// GU_d(q) as the stabilizer of the anti-diagonal Hermitian form. Uses the
/// filter over GL_d(q^2) when that fits the budget, generator closure otherwise.
pub fn enumerate_gu(d: usize, q: u64, budget: u64, seed: u64) -> Result<GroupEnum, OracleError> {
    check_dim(d)?;
    let big_gl = group_order(GroupKind::GL, d as u32, q * q)?.value;
    if big_gl <= big(budget) {
        enumerate_gu_filter(d, q, budget)
    } else {
        enumerate_gu_closure(d, q, budget, seed)
    }
}

pub fn enumerate_gu_filter(d: usize, q: u64, budget: u64) -> Result<GroupEnum, OracleError> {
    check_dim(d)?;
    check_budget(&group_order(GroupKind::GL, d as u32, q * q)?.value, budget)?;
    let field = group_field(Epsilon::Minus, q)?;
    let (arith, all) = all_invertible(field, d)?;
    let keys: Vec<u128> = all
        .into_par_iter()
        .filter(|&k| arith.preserves_form(&raw(k), d))
        .collect();
    Ok(GroupEnum::from_keys(
        GroupDescriptor::new(GroupKind::GU, d, q),
        field,
        arith,
        keys,
    ))
}

/// Candidate generators of GU_d(q): a diagonal torus basis, the reversal
/// permutation, and form-preserving unitriangular elements supported on the
/// first row and last column.
fn gu_generator_pool(arith: &Arith, field: FieldSpec, d: usize, q: u64) -> (Vec<Raw>, Vec<Raw>) {
    let mut fixed = Vec::new();
    let gamma = field.primitive();
    for i in 0..d / 2 {
        let mut r = Arith::identity(d);
        r[i * d + i] = gamma.bits() as u8;
        let j = d - 1 - i;
        r[j * d + j] = gamma.pow_neg(q).bits() as u8;
        fixed.push(r);
    }
    if d % 2 == 1 {
        let mut r = Arith::identity(d);
        let m = d / 2;
        r[m * d + m] = field
            .cyclic_generator(q + 1)
            .expect("q+1 divides q^2-1")
            .bits() as u8;
        fixed.push(r);
    }
    let mut rev = [0u8; 16];
    for i in 0..d {
        rev[i * d + (d - 1 - i)] = 1;
    }
    fixed.push(rev);
    let mut slots: Vec<usize> = (1..d).collect();
    slots.extend((1..d.saturating_sub(1)).map(|i| i * d + d - 1));
    let n = arith.n;
    let total = n.saturating_pow(slots.len() as u32);
    let mut pool = Vec::new();
    for mut code in 1..total {
        let mut r = Arith::identity(d);
        for &s in &slots {
            r[s] = (code % n) as u8;
            code /= n;
        }
        if arith.preserves_form(&r, d) {
            pool.push(r);
        }
    }
    (fixed, pool)
}

fn closure_from(
    arith: &Arith,
    d: usize,
    gens: &[Raw],
    limit: usize,
) -> Result<Vec<u128>, OracleError> {
    let id = Arith::identity(d);
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(key(&id));
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = arith.mat_mul(&x, g, d);
            if seen.insert(key(&y)) {
                if seen.len() > limit {
                    return Err(OracleError::Closure(format!("more than {limit} elements")));
                }
                stack.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// GU_d(q) by breadth-first closure from a seeded choice of generators,
/// accepted once the closure order matches the order formula.
pub fn enumerate_gu_closure(
    d: usize,
    q: u64,
    budget: u64,
    seed: u64,
) -> Result<GroupEnum, OracleError> {
    check_dim(d)?;
    let target = group_order(GroupKind::GU, d as u32, q)?.value;
    check_budget(&target, budget)?;
    let target = target.to_usize().expect("within budget");
    let field = group_field(Epsilon::Minus, q)?;
    let arith = Arith::new(field)?;
    let (fixed, mut pool) = gu_generator_pool(&arith, field, d, q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    let mut take = pool.len().min(2);
    loop {
        let gens: Vec<Raw> = fixed
            .iter()
            .chain(pool.iter().take(take))
            .copied()
            .collect();
        let keys = closure_from(&arith, d, &gens, target)?;
        if keys.len() == target {
            return Ok(GroupEnum::from_keys(
                GroupDescriptor::new(GroupKind::GU, d, q),
                field,
                arith,
                keys,
            ));
        }
        if take >= pool.len() {
            return Err(OracleError::Closure(format!(
                "generators reach only {} of {target} elements",
                keys.len()
            )));
        }
        take = (take * 2).min(pool.len());
    }
}

/// GL^ε_d(q) or its central quotient, per the descriptor kind.
pub fn enumerate(desc: GroupDescriptor, budget: u64, seed: u64) -> Result<GroupEnum, OracleError> {
    let linear = match desc.linear().kind {
        GroupKind::GL => enumerate_gl(desc.d, desc.q, budget)?,
        _ => enumerate_gu(desc.d, desc.q, budget, seed)?,
    };
    match desc.kind {
        GroupKind::GL | GroupKind::GU => Ok(linear),
        GroupKind::PGL | GroupKind::PGU => Ok(quotient_pgl(&linear)),
        other => Err(OracleError::Unsupported(format!(
            "{other} is not enumerated"
        ))),
    }
}

/// The quotient by scalars, with canonical representatives.
pub fn quotient_pgl(g: &GroupEnum) -> GroupEnum {
    let d = g.d();
    let mut lifts: HashMap<u128, Vec<u128>> = HashMap::new();
    for &k in &g.keys {
        let n = key(&g.arith.normalize(&raw(k), d));
        lifts.entry(n).or_default().push(k);
    }
    let kind = if g.descriptor.kind.epsilon() > 0 {
        GroupKind::PGL
    } else {
        GroupKind::PGU
    };
    let mut keys: Vec<u128> = lifts.keys().copied().collect();
    keys.sort_unstable();
    GroupEnum {
        descriptor: GroupDescriptor {
            kind,
            ..g.descriptor
        },
        field: g.field,
        arith: g.arith.clone(),
        keys,
        projective: true,
        lifts,
    }
}

/// |{x ∈ g : xs = sx}|.
pub fn brute_centralizer(g: &GroupEnum, s: &Matrix) -> Result<BigUint, OracleError> {
    let r = g.member(s)?;
    Ok(big(g.centralizer_count(&r)))
}

/// Whether some x ∈ g has x s x⁻¹ = s⁻¹.
pub fn brute_is_real(g: &GroupEnum, s: &Matrix) -> Result<bool, OracleError> {
    let r = g.member(s)?;
    let target = key(&g.inv(&r));
    Ok(g.orbit(&r).binary_search(&target).is_ok())
}

/// Whether s and t are conjugate in g.
pub fn brute_conjugate(g: &GroupEnum, s: &Matrix, t: &Matrix) -> Result<bool, OracleError> {
    let rs = g.member(s)?;
    let rt = g.member(t)?;
    Ok(g.orbit(&rs).binary_search(&key(&rt)).is_ok())
}

/// Tally for one family of checks in a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub lemma: String,
    pub tested: u64,
    pub passed: u64,
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(lemma: &str) -> Self {
        CheckResult {
            lemma: lemma.to_string(),
            tested: 0,
            passed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.tested += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 16 {
            self.failures.push(detail());
        }
    }

    pub fn ok(&self) -> bool {
        self.tested == self.passed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub group: GroupDescriptor,
    pub order: BigUint,
    pub odd_elements: u64,
    pub odd_classes: u64,
    pub checks: Vec<CheckResult>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }

    pub fn check(&self, lemma: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.lemma == lemma)
    }
}

fn poly_of(g: &GroupEnum, r: &Raw) -> Result<MonicPoly, OracleError> {
    let c = g.arith.charpoly(r, g.d());
    Ok(MonicPoly::from_bits(
        g.field,
        &c.iter().map(|&b| b as u64).collect::<Vec<_>>(),
    )?)
}

struct LinearData {
    /// charpoly → brute centralizer order, over odd-order elements.
    centralizers: BTreeMap<Vec<u8>, u64>,
}

/// Run every brute-force check that applies to the group.
pub fn verify_sweep(
    desc: GroupDescriptor,
    budget: u64,
    seed: u64,
) -> Result<SweepReport, OracleError> {
    let linear = match desc.linear().kind {
        GroupKind::GL => enumerate_gl(desc.d, desc.q, budget)?,
        _ => enumerate_gu(desc.d, desc.q, budget, seed)?,
    };
    match desc.kind {
        GroupKind::GL | GroupKind::GU => {
            let (report, _) = linear_sweep(&linear)?;
            Ok(report)
        }
        GroupKind::PGL | GroupKind::PGU => {
            let (_, data) = linear_sweep(&linear)?;
            projective_sweep(&quotient_pgl(&linear), &linear, &data)
        }
        other => Err(OracleError::Unsupported(format!(
            "{other} is not enumerated"
        ))),
    }
}

fn order_check(g: &GroupEnum) -> Result<CheckResult, OracleError> {
    let mut c = CheckResult::new("enumeration-order");
    let expected = group_order(g.descriptor.kind, g.d() as u32, g.descriptor.q)?.value;
    let got = g.order();
    c.record(got == expected, || {
        format!("enumerated {got}, formula {expected}")
    });
    Ok(c)
}

fn linear_sweep(g: &GroupEnum) -> Result<(SweepReport, LinearData), OracleError> {
    let desc = g.descriptor;
    let eps = desc.epsilon();
    let d = g.d();
    let mut checks = vec![order_check(g)?];
    let odd = g.odd_exponent();
    let odd_keys: Vec<u128> = g
        .keys
        .par_iter()
        .copied()
        .filter(|&k| g.is_odd_order(&raw(k), odd))
        .collect();

    let mut buckets: BTreeMap<Vec<u8>, Vec<u128>> = BTreeMap::new();
    for (k, cp) in odd_keys
        .par_iter()
        .map(|&k| (k, g.arith.charpoly(&raw(k), d)))
        .collect::<Vec<_>>()
    {
        buckets.entry(cp).or_default().push(k);
    }

    let mut class_eq = CheckResult::new("class-equals-charpoly");
    let mut cent = CheckResult::new("centralizer-order");
    let mut real = CheckResult::new("realness");
    let mut full = CheckResult::new("centralizer-direct-scan");
    let mut data = LinearData {
        centralizers: BTreeMap::new(),
    };
    let order = g.keys.len() as u64;
    for (cp, members) in &buckets {
        let rep = raw(members[0]);
        let orbit = g.orbit(&rep);
        let mut sorted = members.clone();
        sorted.sort_unstable();
        let xi = poly_of(g, &rep)?;
        class_eq.record(orbit == sorted, || {
            format!(
                "{xi}: class {} vs charpoly bucket {}",
                orbit.len(),
                sorted.len()
            )
        });
        let brute = order / orbit.len() as u64;
        data.centralizers.insert(cp.clone(), brute);
        let class = SemisimpleClass::from_poly(eps, desc.q, &xi)?;
        let formula = centralizer_shape(&class)?.order;
        cent.record(formula == big(brute), || {
            format!("{xi}: formula {formula}, brute {brute}")
        });
        let brute_real = orbit.binary_search(&key(&g.inv(&rep))).is_ok();
        let formula_real = realness_structure(&class)?.real;
        real.record(brute_real == formula_real, || {
            format!("{xi}: formula {formula_real}, brute {brute_real}")
        });
        if order <= FULL_SCAN_LIMIT {
            for &m in members {
                let direct = g.centralizer_count(&raw(m));
                full.record(direct == brute, || {
                    format!("{xi}: direct {direct}, orbit {brute}")
                });
            }
        }
    }
    checks.extend([class_eq, cent, real]);
    if full.tested > 0 {
        checks.push(full);
    }

    let mut inv = CheckResult::new("involution-centralizer");
    for l in 1..=d / 2 {
        let blocks = involution_with_blocks(d, l, desc.q, eps)?;
        let mut r = [0u8; 16];
        for (i, row) in blocks.entries.iter().enumerate() {
            r[i * d..i * d + d].copy_from_slice(row);
        }
        if !g.contains_key(key(&r)) {
            inv.record(false, || format!("l={l}: involution not in the group"));
            continue;
        }
        let brute = g.centralizer_count(&r);
        let predicted = blocks.predicted_centralizer.clone();
        inv.record(big(brute) == predicted, || {
            format!("l={l}: predicted {predicted}, brute {brute}")
        });
    }
    if inv.tested > 0 {
        checks.push(inv);
    }
    checks.push(regular_torus_check(g)?);

    let report = SweepReport {
        group: desc,
        order: g.order(),
        odd_elements: odd_keys.len() as u64,
        odd_classes: buckets.len() as u64,
        checks,
    };
    Ok((report, data))
}

/// With T the diagonal subgroup and S the permutation matrices in g: for
/// regular t ∈ T (C(t) = T), S maps t bijectively onto the g-conjugates of t
/// lying in T, and N(T) = T·S.
fn regular_torus_check(g: &GroupEnum) -> Result<CheckResult, OracleError> {
    let d = g.d();
    let mut c = CheckResult::new("regular-torus-action");
    let diag: Vec<u128> = g
        .keys
        .iter()
        .copied()
        .filter(|&k| {
            let r = raw(k);
            (0..d).all(|i| (0..d).all(|j| i == j || r[i * d + j] == 0))
        })
        .collect();
    let perms: Vec<Raw> = g
        .keys
        .iter()
        .map(|&k| raw(k))
        .filter(|r| {
            r[..d * d].iter().all(|&v| v <= 1)
                && r[..d * d].iter().filter(|&&v| v == 1).count() == d
        })
        .collect();
    let diag_set: HashSet<u128> = diag.iter().copied().collect();
    let mut found = 0;
    for &t in &diag {
        if found >= 3 {
            break;
        }
        let tr = raw(t);
        if g.centralizer_count(&tr) != diag.len() as u64 {
            continue;
        }
        found += 1;
        let orbit = g.orbit(&tr);
        let conj_in_t: HashSet<u128> = orbit
            .iter()
            .copied()
            .filter(|k| diag_set.contains(k))
            .collect();
        let images: HashSet<u128> = perms
            .iter()
            .map(|p| key(&g.mul(&g.mul(p, &tr), &g.inv(p))))
            .collect();
        let regular = images.len() == perms.len() && images == conj_in_t;
        let normalizer = g
            .keys
            .par_iter()
            .filter(|&&k| {
                let x = raw(k);
                diag_set.contains(&key(&g.mul(&g.mul(&x, &tr), &g.inv(&x))))
            })
            .count();
        let product = normalizer == diag.len() * perms.len();
        let m = Matrix::from_raw(g.field, d, &tr);
        c.record(regular && product, || {
            format!(
                "t={m}: |S|={}, conjugates in T={}, |N(T)|={normalizer}",
                perms.len(),
                conj_in_t.len()
            )
        });
    }
    Ok(c)
}

fn projective_sweep(
    p: &GroupEnum,
    parent: &GroupEnum,
    data: &LinearData,
) -> Result<SweepReport, OracleError> {
    let desc = p.descriptor;
    let eps = desc.epsilon();
    let d = p.d();
    let mut order_c = order_check(p)?;
    let expected = parent.keys.len() as u64 / eps.q_minus_eps(desc.q);
    order_c.record(p.keys.len() as u64 == expected, || {
        format!("quotient {} vs {expected}", p.keys.len())
    });
    let odd = p.odd_exponent();
    let odd_keys: Vec<u128> = p
        .keys
        .par_iter()
        .copied()
        .filter(|&k| p.is_odd_order(&raw(k), odd))
        .collect();

    let mut seen: HashSet<u128> = HashSet::new();
    let mut cent = CheckResult::new("pgl-centralizer-order");
    let mut real = CheckResult::new("pgl-realness");
    let mut cmp = CheckResult::new("centralizer-comparison");
    let mut classes = 0u64;
    let order = p.keys.len() as u64;
    for &t in &odd_keys {
        if seen.contains(&t) {
            continue;
        }
        classes += 1;
        let tr = raw(t);
        let orbit = p.orbit(&tr);
        seen.extend(orbit.iter().copied());
        let brute = order / orbit.len() as u64;
        let lifts = &p.lifts[&t];
        let lift = raw(lifts[0]);
        let xi = poly_of(parent, &lift)?;
        let class = SemisimpleClass::from_poly(eps, desc.q, &xi)?;
        let formula = pgl_centralizer_order(&class)?;
        cent.record(formula == big(brute), || {
            format!("{xi}: formula {formula}, brute {brute}")
        });
        let brute_real = orbit.binary_search(&key(&p.inv(&tr))).is_ok();
        let formula_real = pgl_is_real(&class)?;
        real.record(brute_real == formula_real, || {
            format!("{xi}: formula {formula_real}, brute {brute_real}")
        });
        for &l in lifts {
            let cp = parent.arith.charpoly(&raw(l), d);
            match data.centralizers.get(&cp) {
                Some(&c_gl) => {
                    cmp.record(brute <= c_gl, || format!("{xi}: PGL {brute} > GL {c_gl}"))
                }
                None => cmp.record(false, || format!("{xi}: lift is not of odd order")),
            }
        }
    }
    Ok(SweepReport {
        group: desc,
        order: p.order(),
        odd_elements: odd_keys.len() as u64,
        odd_classes: classes,
        checks: vec![order_c, cent, real, cmp],
    })
}

/// Whether the filter-built and closure-built GU_d(q) coincide.
pub fn gu_paths_agree(d: usize, q: u64, budget: u64, seed: u64) -> Result<bool, OracleError> {
    let a = enumerate_gu_filter(d, q, budget)?;
    let b = enumerate_gu_closure(d, q, budget, seed)?;
    Ok(a.keys == b.keys)
}

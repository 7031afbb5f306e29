//! The characteristic-2 tower GF(2) ⊆ GF(q) ⊆ GF(q^2), q = 2^f.
//!
//! Every field GF(2^k) with k ≤ 20 is represented in the polynomial basis of
//! its Conway polynomial. An element is stored as the bit mask of its
//! coordinates (bit `i` is the coefficient of `x^i`), so encodings are stable
//! across runs and tools. Because the Conway polynomials are primitive and
//! norm-compatible, the class of `x` is a primitive root `γ_k` and the
//! embedding GF(2^f) → GF(2^{2f}) is `γ_f ↦ γ_{2f}^{2^f + 1}`.

use std::fmt;
use std::ops::{Add, Div, Mul};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported extension degree over GF(2).
pub const MAX_DEGREE: u32 = 20;

/// Conway polynomials over GF(2) as bit masks (leading term included), indexed by degree.
const CONWAY: [u32; 21] = [
    0, 3, 7, 11, 19, 37, 91, 131, 285, 529, 1135, 2053, 4331, 8219, 16553, 32821, 65581, 131081,
    267267, 524327, 1050355,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unsupported field: f = {f}, delta = {delta} (need delta in {{1,2}} and 1 <= f*delta <= 20)")]
    Unsupported { f: u32, delta: u32 },
    #[error("encoding {bits} out of range for GF(2^{degree})")]
    BitsOutOfRange { bits: u64, degree: u32 },
    #[error("field mismatch: GF(2^{left}) vs GF(2^{right})")]
    Mismatch { left: u32, right: u32 },
    #[error("zero has no inverse or multiplicative order")]
    Zero,
    #[error("element {bits} of GF(2^{degree}) does not lie in the subfield GF(2^{sub})")]
    NotInSubfield { bits: u32, degree: u32, sub: u32 },
}

/// The Conway polynomial of degree `k` as a bit mask.
pub fn conway_polynomial(k: u32) -> Option<u32> {
    (1..=MAX_DEGREE).contains(&k).then(|| CONWAY[k as usize])
}

struct Tables {
    /// exp[i] = γ^i for 0 <= i < 2n, n = 2^k - 1
    exp: Vec<u32>,
    /// log[a] for a != 0
    log: Vec<u32>,
}

fn tables(k: u32) -> &'static Tables {
    static TABLES: [OnceLock<Tables>; 21] = [const { OnceLock::new() }; 21];
    TABLES[k as usize].get_or_init(|| {
        let modulus = CONWAY[k as usize];
        let n = (1usize << k) - 1;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; n + 1];
        let mut a: u32 = 1;
        for i in 0..n {
            exp[i] = a;
            log[a as usize] = i as u32;
            a <<= 1;
            if a >> k & 1 == 1 {
                a ^= modulus;
            }
        }
        debug_assert_eq!(a, 1, "Conway polynomial of degree {k} is not primitive");
        let (lo, hi) = exp.split_at_mut(n);
        hi.copy_from_slice(lo);
        Tables { exp, log }
    })
}

/// GF(q^δ) with q = 2^f, together with its role in the tower.
///
/// Two specs of the same total degree describe the same field (for example
/// `(2, 1)` and `(1, 2)` are both GF(4)); elements only record the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    f: u32,
    delta: u32,
}

/// Builds the canonical spec for GF(2^{f·δ}).
pub fn make_field(f: u32, delta: u32) -> Result<FieldSpec, FieldError> {
    FieldSpec::new(f, delta)
}

impl FieldSpec {
    pub fn new(f: u32, delta: u32) -> Result<Self, FieldError> {
        if f == 0 || !(delta == 1 || delta == 2) || f * delta > MAX_DEGREE {
            return Err(FieldError::Unsupported { f, delta });
        }
        Ok(Self { f, delta })
    }

    /// The field for GL^ε_d(q): GF(q) when ε = +1 (δ = 1), GF(q^2) when ε = −1.
    pub fn for_group(q: u64, delta: u32) -> Result<Self, FieldError> {
        match log2_exact(q) {
            Some(f) => Self::new(f, delta),
            None => Err(FieldError::Unsupported { f: 0, delta }),
        }
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Degree over GF(2).
    pub fn degree(&self) -> u32 {
        self.f * self.delta
    }

    /// Size of the fixed subfield, q = 2^f.
    pub fn q(&self) -> u64 {
        1 << self.f
    }

    /// Number of field elements, q^δ.
    pub fn size(&self) -> u64 {
        1 << self.degree()
    }

    pub fn defining_poly(&self) -> u32 {
        CONWAY[self.degree() as usize]
    }

    /// Descriptor used in reports, e.g. `GF(2^4)/conway`.
    pub fn descriptor(&self) -> String {
        format!("GF(2^{})/conway", self.degree())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.degree())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.degree())
    }

    pub fn elem(&self, bits: u64) -> Result<FieldElement, FieldError> {
        FieldElement::new(bits, self.degree())
    }

    /// The primitive root γ (the class of x; 1 in GF(2)).
    pub fn primitive(&self) -> FieldElement {
        FieldElement::from_log(1, self.degree())
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        let k = self.degree();
        (0..1u32 << k).map(move |b| FieldElement {
            bits: b,
            degree: k as u8,
        })
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        self.elements().skip(1)
    }

    /// Generator of the unique cyclic subgroup of order `n` (which must divide q^δ − 1).
    pub fn cyclic_generator(&self, n: u64) -> Option<FieldElement> {
        let total = self.size() - 1;
        (n > 0 && total % n == 0).then(|| self.primitive().pow(total / n))
    }

    /// Generator of the order-(q − ε) subgroup: GF(q)^* for ε = +1, the norm-one group for ε = −1.
    pub fn epsilon_subgroup_generator(&self) -> FieldElement {
        let n = if self.delta == 1 {
            self.q() - 1
        } else {
            self.q() + 1
        };
        self.cyclic_generator(n)
            .expect("q - eps divides q^delta - 1")
    }

    /// Image of `a ∈ GF(2^f)` in this field (δ = 2) under the norm-compatible embedding.
    pub fn embed(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        let k = self.degree();
        let sub = a.degree();
        if k % sub != 0 {
            return Err(FieldError::Mismatch {
                left: k,
                right: sub,
            });
        }
        if a.is_zero() {
            return Ok(self.zero());
        }
        let step = ((1u64 << k) - 1) / ((1u64 << sub) - 1);
        Ok(FieldElement::from_log(a.log() as u64 * step, k))
    }

    /// Inverse of [`embed`](Self::embed): the preimage of `a` in GF(2^sub).
    pub fn restrict(&self, a: FieldElement, sub: u32) -> Result<FieldElement, FieldError> {
        let k = self.degree();
        if a.degree() != k {
            return Err(FieldError::Mismatch {
                left: k,
                right: a.degree(),
            });
        }
        if sub == 0 || k % sub != 0 {
            return Err(FieldError::Unsupported { f: sub, delta: 1 });
        }
        if a.is_zero() {
            return Ok(FieldElement::zero(sub));
        }
        let step = ((1u64 << k) - 1) / ((1u64 << sub) - 1);
        let l = a.log() as u64;
        if l % step != 0 {
            return Err(FieldError::NotInSubfield {
                bits: a.bits,
                degree: k,
                sub,
            });
        }
        Ok(FieldElement::from_log(l / step, sub))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.degree())
    }
}

pub(crate) fn log2_exact(q: u64) -> Option<u32> {
    (q >= 2 && q.is_power_of_two()).then(|| q.trailing_zeros())
}

/// An element of GF(2^k), stored as its coordinate bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    degree: u8,
    bits: u32,
}

impl FieldElement {
    pub fn new(bits: u64, degree: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::Unsupported {
                f: degree,
                delta: 1,
            });
        }
        if bits >> degree != 0 {
            return Err(FieldError::BitsOutOfRange { bits, degree });
        }
        Ok(Self {
            bits: bits as u32,
            degree: degree as u8,
        })
    }

    pub fn zero(degree: u32) -> Self {
        Self {
            bits: 0,
            degree: degree as u8,
        }
    }

    pub fn one(degree: u32) -> Self {
        Self {
            bits: 1,
            degree: degree as u8,
        }
    }

    /// γ^e for the Conway primitive root γ.
    pub fn from_log(e: u64, degree: u32) -> Self {
        let t = tables(degree);
        let n = (1u64 << degree) - 1;
        Self {
            bits: t.exp[(e % n) as usize],
            degree: degree as u8,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    /// Discrete log to base γ. Panics on zero.
    pub(crate) fn log(&self) -> u32 {
        assert!(self.bits != 0, "log of zero");
        tables(self.degree()).log[self.bits as usize]
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.degree != other.degree {
            Err(FieldError::Mismatch {
                left: self.degree(),
                right: other.degree(),
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self, FieldError> {
        self.check(&other)?;
        Ok(Self {
            bits: self.bits ^ other.bits,
            degree: self.degree,
        })
    }

    pub fn try_mul(self, other: Self) -> Result<Self, FieldError> {
        self.check(&other)?;
        if self.bits == 0 || other.bits == 0 {
            return Ok(Self::zero(self.degree()));
        }
        let t = tables(self.degree());
        let i = t.log[self.bits as usize] + t.log[other.bits as usize];
        Ok(Self {
            bits: t.exp[i as usize],
            degree: self.degree,
        })
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        if self.bits == 0 {
            return Err(FieldError::Zero);
        }
        let t = tables(self.degree());
        let n = (1u32 << self.degree) - 1;
        let l = t.log[self.bits as usize];
        Ok(Self {
            bits: t.exp[((n - l) % n) as usize],
            degree: self.degree,
        })
    }

    /// `self^e`; `0^0 = 1`.
    pub fn pow(self, e: u64) -> Self {
        if e == 0 {
            return Self::one(self.degree());
        }
        if self.bits == 0 {
            return self;
        }
        let n = (1u64 << self.degree) - 1;
        let l = self.log() as u64;
        Self::from_log((l * (e % n)) % n, self.degree())
    }

    /// `self^(-e)`; panics on zero.
    pub fn pow_neg(self, e: u64) -> Self {
        self.inv().expect("negative power of zero").pow(e)
    }

    /// `self^(2^power)`, the `power`-th iterate of x ↦ x².
    pub fn frobenius(self, power: u32) -> Self {
        let mut a = self;
        for _ in 0..power % self.degree() {
            a = a * a;
        }
        a
    }

    /// The unique square root.
    pub fn sqrt(self) -> Self {
        self.frobenius(self.degree() - 1)
    }

    /// Multiplicative order.
    pub fn order(self) -> Result<u64, FieldError> {
        if self.bits == 0 {
            return Err(FieldError::Zero);
        }
        let n = (1u64 << self.degree) - 1;
        Ok(n / num_integer::gcd(n, self.log() as u64))
    }
}

pub fn fe_add(a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
    a.try_add(b)
}

pub fn fe_mul(a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
    a.try_mul(b)
}

pub fn fe_inv(a: FieldElement) -> Result<FieldElement, FieldError> {
    a.inv()
}

pub fn frobenius(a: FieldElement, power: u32) -> FieldElement {
    a.frobenius(power)
}

pub fn fe_order(a: FieldElement) -> Result<u64, FieldError> {
    a.order()
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF(2^{})", self.bits, self.degree)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

// Operators panic on mismatched fields; use the `try_` forms at API boundaries.
impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Div for FieldElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero")
    }
}

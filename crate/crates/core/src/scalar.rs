//! Exact scalar types and the group-order formulas that are generic over them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, One, Zero};

/// Scalars with exact arithmetic: machine integers, big integers and rationals.
///
/// Floating-point types are deliberately not implementors.
pub trait Exact: Num + Clone + PartialOrd + std::fmt::Debug {}

impl Exact for u32 {}
impl Exact for u64 {}
impl Exact for u128 {}
impl Exact for i64 {}
impl Exact for i128 {}
impl Exact for BigUint {}
impl Exact for BigInt {}
impl<T> Exact for Ratio<T> where T: Integer + Clone + std::fmt::Debug {}

pub fn pow<T: Exact>(base: &T, e: u64) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// |GL_m(Q)| = Q^{m(m−1)/2} ∏_{i=1}^m (Q^i − 1).
pub fn gl_order<T: Exact>(m: u32, big_q: &T) -> T {
    let mut acc = pow(big_q, m as u64 * (m as u64).saturating_sub(1) / 2);
    let mut qi = T::one();
    for _ in 1..=m {
        qi = qi * big_q.clone();
        acc = acc * (qi.clone() - T::one());
    }
    acc
}

/// |GU_m(Q)| = Q^{m(m−1)/2} ∏_{i=1}^m (Q^i − (−1)^i).
pub fn gu_order<T: Exact>(m: u32, big_q: &T) -> T {
    let mut acc = pow(big_q, m as u64 * (m as u64).saturating_sub(1) / 2);
    let mut qi = T::one();
    for i in 1..=m {
        qi = qi * big_q.clone();
        acc = if i % 2 == 1 {
            acc * (qi.clone() + T::one())
        } else {
            acc * (qi.clone() - T::one())
        };
    }
    acc
}

/// |GL^ε_m(Q)|: `gl_order` for ε = +1, `gu_order` for ε = −1.
pub fn gl_eps_order<T: Exact>(epsilon: i8, m: u32, big_q: &T) -> T {
    if epsilon > 0 {
        gl_order(m, big_q)
    } else {
        gu_order(m, big_q)
    }
}

/// Largest odd divisor.
pub fn odd_part(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return n.clone();
    }
    n >> n.trailing_zeros().unwrap_or(0)
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn two_pow(e: u64) -> BigUint {
    BigUint::one() << e
}

//! Automorphisms ad_t ∘ ι^a ∘ φ^b of the diagonal torus of GL^ε_d(q) modulo scalars.
//!
//! φ squares every diagonal entry and ι reverses the entries and inverts them.
//! In a word, ι is applied before φ. For ε = −1 the graph part is trivial and
//! φ has order 2f, with φ^f acting on the unitary torus like ι.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::gf2k::{FieldElement, FieldSpec};
use crate::semisimple::{group_field, ClassError, Epsilon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutoError {
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("diagonal has {got} entries, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("diagonal entry is zero or lies outside GF(q^delta)")]
    BadEntry,
    #[error("graph automorphism is not available for epsilon = -1")]
    GraphInTwisted,
    #[error("words belong to different models")]
    ModelMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// ad_t ∘ ι^graph_exp ∘ φ^field_exp with t normalized so that t_1 = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutoWord {
    epsilon: Epsilon,
    field: FieldSpec,
    t: Vec<FieldElement>,
    graph_exp: u8,
    field_exp: u32,
}

/// Applies μ = ι^graph_exp ∘ φ^field_exp to a diagonal, ι first.
pub fn apply_mu_diagonal(graph_exp: u8, field_exp: u32, t: &[FieldElement]) -> Vec<FieldElement> {
    let mut v: Vec<FieldElement> = if graph_exp % 2 == 1 {
        t.iter()
            .rev()
            .map(|a| a.inv().expect("zero on the diagonal"))
            .collect()
    } else {
        t.to_vec()
    };
    for a in &mut v {
        *a = a.frobenius(field_exp);
    }
    v
}

fn normalize(t: Vec<FieldElement>) -> Vec<FieldElement> {
    match t.first() {
        Some(first) if !first.is_one() => {
            let inv = first.inv().expect("zero on the diagonal");
            t.into_iter().map(|a| a * inv).collect()
        }
        _ => t,
    }
}

impl AutoWord {
    pub fn new(
        epsilon: Epsilon,
        q: u64,
        t: Vec<FieldElement>,
        graph_exp: u8,
        field_exp: u32,
    ) -> Result<Self, AutoError> {
        let field = group_field(epsilon, q)?;
        if t.iter()
            .any(|a| a.is_zero() || a.degree() != field.degree())
        {
            return Err(AutoError::BadEntry);
        }
        if epsilon == Epsilon::Minus && graph_exp % 2 == 1 {
            return Err(AutoError::GraphInTwisted);
        }
        let period = field.degree();
        Ok(Self {
            epsilon,
            field,
            t: normalize(t),
            graph_exp: graph_exp % 2,
            field_exp: field_exp % period,
        })
    }

    pub fn identity(epsilon: Epsilon, q: u64, d: usize) -> Result<Self, AutoError> {
        let field = group_field(epsilon, q)?;
        Self::new(epsilon, q, vec![field.one(); d], 0, 0)
    }

    pub fn t(&self) -> &[FieldElement] {
        &self.t
    }

    pub fn graph_exp(&self) -> u8 {
        self.graph_exp
    }

    pub fn field_exp(&self) -> u32 {
        self.field_exp
    }

    pub fn d(&self) -> usize {
        self.t.len()
    }

    /// δf, the order of φ.
    pub fn field_period(&self) -> u32 {
        self.field.degree()
    }

    pub fn is_identity(&self) -> bool {
        self.graph_exp == 0 && self.field_exp == 0 && self.t.iter().all(|a| a.is_one())
    }

    /// |μ| for the symmetry part of the word.
    pub fn mu_order(&self) -> u64 {
        let p = self.field_period() as u64;
        let field = p / p.gcd(&(self.field_exp as u64));
        let graph = if self.graph_exp == 1 { 2 } else { 1 };
        field.lcm(&graph)
    }

    pub fn apply_mu(&self, t: &[FieldElement]) -> Vec<FieldElement> {
        apply_mu_diagonal(self.graph_exp, self.field_exp, t)
    }

    fn with(&self, t: Vec<FieldElement>, graph_exp: u8, field_exp: u32) -> Self {
        Self {
            epsilon: self.epsilon,
            field: self.field,
            t: normalize(t),
            graph_exp: graph_exp % 2,
            field_exp: field_exp % self.field_period(),
        }
    }

    /// (ad_t ∘ μ)(ad_t′ ∘ μ′) = ad_{t·μ(t′)} ∘ μμ′.
    pub fn compose(&self, other: &Self) -> Result<Self, AutoError> {
        if self.field != other.field || self.t.len() != other.t.len() {
            return Err(AutoError::ModelMismatch);
        }
        let moved = self.apply_mu(&other.t);
        let t = self.t.iter().zip(moved).map(|(a, b)| *a * b).collect();
        Ok(self.with(
            t,
            self.graph_exp + other.graph_exp,
            self.field_exp + other.field_exp,
        ))
    }
}

impl fmt::Display for AutoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<_> = self.t.iter().map(|a| a.bits().to_string()).collect();
        write!(
            f,
            "ad_diag({}) o iota^{} o phi^{}",
            t.join(","),
            self.graph_exp,
            self.field_exp
        )
    }
}

/// N_{μ,l}(t) = ∏_{i<l} μ^i(t), un-normalized.
pub fn twisted_norm_diagonal(
    graph_exp: u8,
    field_exp: u32,
    t: &[FieldElement],
    l: u32,
) -> Vec<FieldElement> {
    let mut acc: Vec<FieldElement> = t.iter().map(|a| FieldElement::one(a.degree())).collect();
    let mut cur = t.to_vec();
    for _ in 0..l {
        for (x, y) in acc.iter_mut().zip(&cur) {
            *x = *x * *y;
        }
        cur = apply_mu_diagonal(graph_exp, field_exp, &cur);
    }
    acc
}

/// β^l in normal form ad_{N_{μ,l}(t)} ∘ μ^l.
pub fn twisted_norm(beta: &AutoWord, l: u32) -> Result<AutoWord, AutoError> {
    if l == 0 {
        return Err(AutoError::Precondition("l must be positive".into()));
    }
    let n = twisted_norm_diagonal(beta.graph_exp, beta.field_exp, &beta.t, l);
    Ok(beta.with(
        n,
        (beta.graph_exp as u32 * l % 2) as u8,
        (beta.field_exp as u64 * l as u64 % beta.field_period() as u64) as u32,
    ))
}

/// The l-fold composite β ∘ ⋯ ∘ β, computed by repeated composition.
pub fn naive_power(beta: &AutoWord, l: u32) -> Result<AutoWord, AutoError> {
    let mut p = beta.clone();
    for _ in 1..l {
        p = p.compose(beta)?;
    }
    Ok(p)
}

/// Order of β in the model, found by iterating until the identity word appears.
pub fn auto_order(beta: &AutoWord) -> u64 {
    let mut p = beta.clone();
    let mut n = 1u64;
    while !p.is_identity() {
        p = p.compose(beta).expect("same model");
        n += 1;
    }
    n
}

/// Smallest n ≥ 1 with t^n scalar.
pub fn order_mod_scalars(t: &[FieldElement]) -> u64 {
    let first = match t.first() {
        Some(a) => *a,
        None => return 1,
    };
    let inv = first.inv().expect("zero on the diagonal");
    t.iter()
        .map(|a| (*a * inv).order().expect("nonzero"))
        .fold(1, |acc, o| acc.lcm(&o))
}

/// All diagonal elements of GL^ε_d(q): (GF(q)^*)^d for ε = +1, and for ε = −1
/// the diagonals with t_{d+1−i} = t_i^{−q} inside GF(q^2)^*.
pub fn torus_elements(
    d: usize,
    q: u64,
    epsilon: Epsilon,
) -> Result<Vec<Vec<FieldElement>>, AutoError> {
    let field = group_field(epsilon, q)?;
    let units: Vec<_> = field.nonzero().collect();
    let f = field.f();
    let (free, middle) = match epsilon {
        Epsilon::Plus => (d, false),
        Epsilon::Minus => (d / 2, d % 2 == 1),
    };
    let norm_one: Vec<_> = units
        .iter()
        .copied()
        .filter(|a| a.pow(q + 1).is_one())
        .collect();
    let mut out = Vec::new();
    let n_free = units.len().pow(free as u32);
    let n_mid = if middle { norm_one.len() } else { 1 };
    for idx in 0..n_free * n_mid {
        let mut rest = idx;
        let mut head = Vec::with_capacity(free);
        for _ in 0..free {
            head.push(units[rest % units.len()]);
            rest /= units.len();
        }
        let t = match epsilon {
            Epsilon::Plus => head,
            Epsilon::Minus => {
                let mut t = head.clone();
                if middle {
                    t.push(norm_one[rest]);
                }
                t.extend(head.iter().rev().map(|a| a.frobenius(f).inv().unwrap()));
                t
            }
        };
        out.push(t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundViolation {
    pub word: String,
    pub order: u64,
    pub divisor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCheck {
    pub claim: char,
    pub divisor: u64,
    pub tested: u64,
    pub violations: Vec<BoundViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBoundReport {
    pub d: usize,
    pub q: u64,
    pub epsilon: Epsilon,
    pub claims: Vec<ClaimCheck>,
}

impl OrderBoundReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.violations.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimVerdict {
    pub claim: char,
    pub divisor: u64,
    /// Whether the hypothesis of the claim is met by this word.
    pub applies: bool,
    /// |β| divides the divisor; vacuously true when the claim does not apply.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordVerdicts {
    pub order: u64,
    pub claims: Vec<ClaimVerdict>,
}

/// The claims with their divisors δf, 3δf and (ε = −1 only) 2f.
fn claim_divisors(beta: &AutoWord) -> Vec<(char, u64)> {
    let df = beta.field.degree() as u64;
    let mut out = vec![('a', df), ('b', 3 * df)];
    if beta.epsilon == Epsilon::Minus {
        out.push(('c', 2 * beta.field.f() as u64));
    }
    out
}

/// The order of β and the verdict of each divisibility claim on it.
pub fn order_bound_verdicts(beta: &AutoWord) -> WordVerdicts {
    let q = beta.field.q();
    let om = order_mod_scalars(&beta.t);
    let q1 = beta.t.iter().all(|a| a.pow(q + 1).is_one());
    let applies = [
        om == 1,
        om.is_power_of_three(),
        beta.mu_order() % 2 == 0 && q1,
    ];
    let order = auto_order(beta);
    let claims = claim_divisors(beta)
        .into_iter()
        .zip(applies)
        .map(|((claim, divisor), applies)| ClaimVerdict {
            claim,
            divisor,
            applies,
            holds: !applies || divisor % order == 0,
        })
        .collect();
    WordVerdicts { order, claims }
}

/// Exhaustive check of the divisibility claims (a) t = 1 ⇒ |β| | δf,
/// (b) t a 3-element ⇒ |β| | 3δf, (c) ε = −1, |μ| even, t^{q+1} = 1 ⇒ |β| | 2f.
pub fn verify_order_bound(
    d: usize,
    q: u64,
    epsilon: Epsilon,
) -> Result<OrderBoundReport, AutoError> {
    let field = group_field(epsilon, q)?;
    if epsilon.q_minus_eps(q) % 3 != 0 {
        return Err(AutoError::Precondition("3 does not divide q - eps".into()));
    }
    if d > 4 || field.degree() > 6 {
        return Err(AutoError::Precondition(
            "model too large to enumerate".into(),
        ));
    }
    let graphs: &[u8] = if epsilon == Epsilon::Plus {
        &[0, 1]
    } else {
        &[0]
    };
    let mus: Vec<(u8, u32)> = graphs
        .iter()
        .flat_map(|&g| (0..field.degree()).map(move |b| (g, b)))
        .collect();
    let probe = AutoWord::identity(epsilon, q, d)?;
    let mut claims: Vec<ClaimCheck> = claim_divisors(&probe)
        .into_iter()
        .map(|(claim, divisor)| ClaimCheck {
            claim,
            divisor,
            tested: 0,
            violations: Vec::new(),
        })
        .collect();
    for t in torus_elements(d, q, epsilon)? {
        for &(g, b) in &mus {
            let w = AutoWord::new(epsilon, q, t.clone(), g, b)?;
            let verdicts = order_bound_verdicts(&w);
            for v in verdicts.claims.iter().filter(|v| v.applies) {
                let check = claims
                    .iter_mut()
                    .find(|c| c.claim == v.claim)
                    .expect("same claim set");
                check.tested += 1;
                if !v.holds {
                    check.violations.push(BoundViolation {
                        word: w.to_string(),
                        order: verdicts.order,
                        divisor: v.divisor,
                    });
                }
            }
        }
    }
    Ok(OrderBoundReport {
        d,
        q,
        epsilon,
        claims,
    })
}

trait PowerOfThree {
    fn is_power_of_three(self) -> bool;
}

impl PowerOfThree for u64 {
    fn is_power_of_three(mut self) -> bool {
        while self > 1 && self % 3 == 0 {
            self /= 3;
        }
        self == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::make_field;

    fn gf4() -> FieldSpec {
        make_field(2, 1).unwrap()
    }

    #[test]
    fn apply_mu_examples() {
        let f = gf4();
        let (w, one) = (f.elem(2).unwrap(), f.one());
        let t = vec![w, one, w];
        assert_eq!(apply_mu_diagonal(0, 0, &t), t);
        let w2 = w * w;
        assert_eq!(apply_mu_diagonal(1, 0, &t), vec![w2, one, w2]);
        assert_eq!(apply_mu_diagonal(0, 1, &t), vec![w2, one, w2]);
    }

    #[test]
    fn twisted_norm_examples() {
        let f = gf4();
        let (w, one) = (f.elem(2).unwrap(), f.one());
        let b = AutoWord::new(Epsilon::Plus, 4, vec![w, one, w], 0, 1).unwrap();
        assert_eq!(twisted_norm(&b, 1).unwrap(), b);
        assert!(twisted_norm(&b, 2).unwrap().is_identity());
        assert_eq!(auto_order(&b), 2);
        let b = AutoWord::new(Epsilon::Plus, 4, vec![w, one, w], 1, 0).unwrap();
        assert!(twisted_norm(&b, 2).unwrap().is_identity());
        assert!(AutoWord::new(Epsilon::Minus, 2, vec![one; 3], 1, 0).is_err());
    }

    #[test]
    fn identity_word_has_order_one() {
        assert_eq!(
            auto_order(&AutoWord::identity(Epsilon::Plus, 4, 3).unwrap()),
            1
        );
    }

    #[test]
    fn three_elements_divide_three_delta_f() {
        for t in torus_elements(3, 4, Epsilon::Plus).unwrap() {
            if !order_mod_scalars(&t).is_power_of_three() {
                continue;
            }
            let w = AutoWord::new(Epsilon::Plus, 4, t, 0, 1).unwrap();
            assert_eq!(6 % auto_order(&w), 0);
        }
    }

    #[test]
    fn order_bound_examples() {
        for (d, q, e) in [
            (3, 4, Epsilon::Plus),
            (3, 2, Epsilon::Minus),
            (4, 4, Epsilon::Plus),
        ] {
            let r = verify_order_bound(d, q, e).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.claims.iter().all(|c| c.tested > 0));
        }
        assert!(verify_order_bound(3, 8, Epsilon::Plus).is_err());
    }

    #[test]
    fn unitary_torus_is_closed_under_phi() {
        let torus = torus_elements(3, 2, Epsilon::Minus).unwrap();
        assert_eq!(torus.len(), 9);
        for t in &torus {
            assert!(torus.contains(&apply_mu_diagonal(0, 1, t)));
        }
    }
}

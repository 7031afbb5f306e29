use e1forge::gf2k::{FieldElement, FieldSpec};
use proptest::prelude::*;

fn field_and_elems(n: usize) -> impl Strategy<Value = (FieldSpec, Vec<FieldElement>)> {
    (1u32..=8).prop_flat_map(move |k| {
        let field = FieldSpec::new(k, 1).unwrap();
        proptest::collection::vec(0..field.size(), n).prop_map(move |bits| {
            (
                field,
                bits.into_iter().map(|b| field.elem(b).unwrap()).collect(),
            )
        })
    })
}

proptest! {
    #[test]
    fn ring_axioms((_, v) in field_and_elems(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert!((a + a).is_zero());
    }

    #[test]
    fn inverses((field, v) in field_and_elems(1)) {
        let a = v[0];
        prop_assume!(!a.is_zero());
        prop_assert_eq!(a * a.inv().unwrap(), field.one());
        prop_assert_eq!(a.pow(field.size() - 1), field.one());
        prop_assert_eq!((field.size() - 1) % a.order().unwrap(), 0);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative((field, v) in field_and_elems(2), s in 0u32..8) {
        let (a, b) = (v[0], v[1]);
        prop_assert_eq!((a + b).frobenius(s), a.frobenius(s) + b.frobenius(s));
        prop_assert_eq!((a * b).frobenius(s), a.frobenius(s) * b.frobenius(s));
        prop_assert_eq!(a.frobenius(field.degree()), a);
        prop_assert_eq!(a.sqrt() * a.sqrt(), a);
    }

    #[test]
    fn embedding_is_a_homomorphism(f in 1u32..=4, x in 0u64..16, y in 0u64..16) {
        let sub = FieldSpec::new(f, 1).unwrap();
        let big = FieldSpec::new(f, 2).unwrap();
        let a = sub.elem(x % sub.size()).unwrap();
        let b = sub.elem(y % sub.size()).unwrap();
        let (ea, eb) = (big.embed(a).unwrap(), big.embed(b).unwrap());
        prop_assert_eq!(big.embed(a + b).unwrap(), ea + eb);
        prop_assert_eq!(big.embed(a * b).unwrap(), ea * eb);
        prop_assert_eq!(ea.frobenius(f), ea);
        prop_assert_eq!(big.restrict(ea, f).unwrap(), a);
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for k in 1..=8 {
        let field = FieldSpec::new(k, 1).unwrap();
        let g = field.primitive();
        assert_eq!(g.order().unwrap(), field.size() - 1, "GF(2^{k})");
        let mut seen: Vec<u32> = (0..field.size() - 1).map(|e| g.pow(e).bits()).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len() as u64, field.size() - 1);
    }
}

#[test]
fn mismatched_fields_are_rejected() {
    let a = FieldSpec::new(2, 1).unwrap().one();
    let b = FieldSpec::new(3, 1).unwrap().one();
    assert!(a.try_add(b).is_err());
    assert!(a.try_mul(b).is_err());
    assert!(FieldSpec::new(0, 1).is_err());
    assert!(FieldSpec::new(1, 3).is_err());
}

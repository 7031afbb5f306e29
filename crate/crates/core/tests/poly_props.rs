use e1forge::gf2k::FieldSpec;
use e1forge::polyfield::{
    enumerate_charpolys, is_irreducible, is_real_charpoly, is_unitary_compatible, poly_dagger,
    poly_factor, poly_star, CharpolyFilter, MonicPoly,
};
use e1forge::DEFAULT_BUDGET;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        (1u32..=4).prop_map(|f| FieldSpec::new(f, 1).unwrap()),
        (1u32..=3).prop_map(|f| FieldSpec::new(f, 2).unwrap()),
    ]
}

fn poly_in(
    field: FieldSpec,
    max_deg: usize,
    unit_constant: bool,
) -> impl Strategy<Value = MonicPoly> {
    (0..=max_deg)
        .prop_flat_map(move |d| proptest::collection::vec(0..field.size(), d))
        .prop_map(move |mut bits| {
            if unit_constant && !bits.is_empty() && bits[0] == 0 {
                bits[0] = 1;
            }
            MonicPoly::from_bits(field, &bits).unwrap()
        })
}

fn field_and_polys(
    unit_constant: bool,
) -> impl Strategy<Value = (FieldSpec, MonicPoly, MonicPoly)> {
    field_strategy().prop_flat_map(move |field| {
        (
            Just(field),
            poly_in(field, 6, unit_constant),
            poly_in(field, 6, unit_constant),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factorization_round_trips((_, p, _) in field_and_polys(false)) {
        let fac = poly_factor(&p);
        prop_assert_eq!(fac.expand(), p.clone());
        prop_assert_eq!(fac.degree(), p.degree());
        for (g, m) in fac.factors() {
            prop_assert!(*m >= 1);
            prop_assert!(is_irreducible(g));
        }
    }

    #[test]
    fn linear_factors_match_roots((field, p, _) in field_and_polys(false)) {
        let roots = field.elements().filter(|&a| p.eval(a).is_zero()).count();
        let linear = poly_factor(&p).factors().iter().filter(|(g, _)| g.degree() == 1).count();
        prop_assert_eq!(roots, linear);
    }

    #[test]
    fn star_is_a_multiplicative_involution((_, a, b) in field_and_polys(true)) {
        let sa = poly_star(&a).unwrap();
        prop_assert_eq!(poly_star(&sa).unwrap(), a.clone());
        prop_assert_eq!(poly_star(&a.mul(&b)).unwrap(), sa.mul(&poly_star(&b).unwrap()));
        prop_assert_eq!(is_irreducible(&sa), is_irreducible(&a));
    }

    #[test]
    fn dagger_is_a_multiplicative_involution(
        (field, a, b) in (1u32..=3).prop_flat_map(|f| {
            let field = FieldSpec::new(f, 2).unwrap();
            (Just(field), poly_in(field, 5, true), poly_in(field, 5, true))
        })
    ) {
        let q = field.q();
        let da = poly_dagger(&a, q).unwrap();
        prop_assert_eq!(poly_dagger(&da, q).unwrap(), a.clone());
        prop_assert_eq!(poly_dagger(&a.mul(&b), q).unwrap(), da.mul(&poly_dagger(&b, q).unwrap()));
    }

    #[test]
    fn star_inverts_roots((field, p, _) in field_and_polys(true)) {
        let s = poly_star(&p).unwrap();
        for a in field.nonzero() {
            prop_assert_eq!(p.eval(a).is_zero(), s.eval(a.inv().unwrap()).is_zero());
        }
    }
}

#[test]
fn dagger_needs_quadratic_field() {
    let field = FieldSpec::new(2, 1).unwrap();
    let p = MonicPoly::from_bits(field, &[1]).unwrap();
    assert!(poly_dagger(&p, 4).is_err());
    let zero_const = MonicPoly::from_bits(field, &[0, 1]).unwrap();
    assert!(poly_star(&zero_const).is_err());
}

/// Brute-force count of real, unitary-compatible, non-identity polynomials.
fn brute_count(d: usize, q_field: FieldSpec) -> Vec<MonicPoly> {
    let q = q_field.q();
    let n = q_field.size();
    let one = MonicPoly::linear(q_field.one(), q_field).pow(d as u32);
    let mut out = Vec::new();
    for mut code in 1..n.pow(d as u32) {
        let mut c = Vec::with_capacity(d);
        for _ in 0..d {
            c.push(code % n);
            code /= n;
        }
        if c[0] == 0 {
            continue;
        }
        let p = MonicPoly::from_bits(q_field, &c).unwrap();
        if p != one && is_real_charpoly(&p).unwrap() && is_unitary_compatible(&p, q).unwrap() {
            out.push(p);
        }
    }
    out.sort();
    out
}

#[test]
fn charpoly_space_matches_brute_force() {
    for (d, f) in [(2usize, 1u32), (3, 1), (4, 1), (6, 1), (2, 2), (3, 2)] {
        let field = FieldSpec::new(f, 2).unwrap();
        let filter = CharpolyFilter {
            real: true,
            unitary: Some(field.q()),
            exclude_identity: true,
        };
        let space = enumerate_charpolys(d, field, filter, DEFAULT_BUDGET).unwrap();
        let mut got: Vec<_> = space.polys().collect();
        got.sort();
        assert_eq!(got, brute_count(d, field), "d={d} q={}", field.q());
    }
}

#[test]
fn real_charpolys_of_degree_two_over_gf4() {
    let field = FieldSpec::new(2, 1).unwrap();
    let filter = CharpolyFilter {
        real: true,
        unitary: None,
        exclude_identity: false,
    };
    let space = enumerate_charpolys(2, field, filter, DEFAULT_BUDGET).unwrap();
    assert_eq!(space.polys().count(), 4);
}

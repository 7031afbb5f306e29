use e1forge::autos::{auto_order, naive_power, torus_elements, twisted_norm, AutoWord};
use e1forge::polyfield::{enumerate_charpolys, CharpolyFilter};
use e1forge::semisimple::{
    centralizer_shape, group_field, index_odd_part, pgl_centralizer_order, Epsilon, SemisimpleClass,
};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

#[test]
fn centralizers_divide_group_orders() {
    for eps in [Epsilon::Plus, Epsilon::Minus] {
        for (d, q) in [(2usize, 2u64), (2, 4), (3, 2), (3, 4), (4, 2), (2, 8)] {
            let field = group_field(eps, q).unwrap();
            let unitary = (eps == Epsilon::Minus).then_some(q);
            let filter = CharpolyFilter {
                real: false,
                unitary,
                exclude_identity: false,
            };
            let space = enumerate_charpolys(d, field, filter, 300_000).unwrap();
            let mut tested = 0;
            for xi in space.iter() {
                if xi.factors().iter().any(|(p, _)| p.constant().is_zero()) {
                    continue;
                }
                let c = SemisimpleClass::new(eps, d, q, xi).unwrap();
                let g = c.group_order();
                let cent = centralizer_shape(&c).unwrap().order;
                assert!(g.is_multiple_of(&cent), "{eps} d={d} q={q}");
                let idx = index_odd_part(&c).unwrap();
                assert!(idx.is_odd());
                let pgl = pgl_centralizer_order(&c).unwrap();
                let projective = &g / eps.q_minus_eps(q);
                assert!(projective.is_multiple_of(&pgl));
                assert!(!pgl.is_zero());
                tested += 1;
            }
            assert!(tested > 0, "{eps} d={d} q={q}");
        }
    }
}

#[test]
fn identity_centralizer_is_the_whole_group() {
    for eps in [Epsilon::Plus, Epsilon::Minus] {
        let c = SemisimpleClass::identity(eps, 3, 4).unwrap();
        assert_eq!(centralizer_shape(&c).unwrap().order, c.group_order());
        assert!(index_odd_part(&c).unwrap().is_one());
    }
}

fn word() -> impl Strategy<Value = AutoWord> {
    prop_oneof![
        Just((3usize, 4u64, Epsilon::Plus)),
        Just((2, 8, Epsilon::Plus)),
        Just((3, 2, Epsilon::Minus)),
        Just((2, 4, Epsilon::Minus)),
    ]
    .prop_flat_map(|(d, q, eps)| {
        let tori = torus_elements(d, q, eps).unwrap();
        let n = tori.len();
        let graph = if eps == Epsilon::Plus { 2u8 } else { 1 };
        let period = group_field(eps, q).unwrap().degree();
        (0..n, 0..graph, 0..period)
            .prop_map(move |(i, g, p)| AutoWord::new(eps, q, tori[i].clone(), g, p).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_matches_composition(beta in word(), l in 1u32..=30) {
        prop_assert_eq!(twisted_norm(&beta, l).unwrap(), naive_power(&beta, l).unwrap());
    }

    #[test]
    fn order_is_exact(beta in word()) {
        let n = auto_order(&beta);
        prop_assert!(naive_power(&beta, n as u32).unwrap().is_identity());
        for k in 1..n {
            if n % k == 0 {
                prop_assert!(!naive_power(&beta, k as u32).unwrap().is_identity());
            }
        }
        prop_assert_eq!(n % beta.mu_order(), 0);
    }
}

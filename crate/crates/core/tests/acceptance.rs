use std::process::ExitCode;
use std::time::{Duration, Instant};

use e1forge::autos::{naive_power, torus_elements, twisted_norm, verify_order_bound, AutoWord};
use e1forge::bounds::{group_order, order_estimate_check, GroupKind, Registry};
use e1forge::gf2k::FieldSpec;
use e1forge::oracle::{
    brute_centralizer, enumerate_gl, enumerate_gu, verify_sweep, GroupDescriptor, Matrix,
};
use e1forge::polyfield::{
    enumerate_charpolys, is_irreducible, poly_dagger, poly_star, CharpolyFilter, MonicPoly,
};
use e1forge::semisimple::{
    classify_gudprep, group_field, involution_with_blocks, Epsilon, SemisimpleClass,
};
use e1forge::{Rational, DEFAULT_BUDGET};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn oracle_equivalence() -> Outcome {
    let linear = [
        (GroupKind::GL, 2, 2),
        (GroupKind::GL, 2, 4),
        (GroupKind::GL, 3, 2),
        (GroupKind::GL, 3, 4),
        (GroupKind::GU, 2, 2),
        (GroupKind::GU, 2, 4),
        (GroupKind::GU, 3, 2),
    ];
    let mut groups = 0;
    let mut odd = 0;
    for (kind, d, q) in linear {
        let projective = if kind == GroupKind::GL {
            GroupKind::PGL
        } else {
            GroupKind::PGU
        };
        for k in [kind, projective] {
            let desc = GroupDescriptor::new(k, d, q);
            let report =
                verify_sweep(desc, DEFAULT_BUDGET, 0).map_err(|e| format!("{desc}: {e}"))?;
            if !report.passed() {
                let bad: Vec<_> = report.checks.iter().filter(|c| !c.ok()).collect();
                return Err(format!("{desc}: {bad:?}"));
            }
            groups += 1;
            odd += report.odd_elements;
        }
    }
    Ok(format!("{groups} groups, {odd} odd-order elements"))
}

fn group_orders() -> Outcome {
    let pgu = group_order(GroupKind::PGU, 3, 4)
        .map_err(|e| e.to_string())?
        .value;
    let gl = group_order(GroupKind::GL, 3, 4)
        .map_err(|e| e.to_string())?
        .value;
    let counted = enumerate_gl(3, 4, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?
        .order();
    let ok = pgu == BigUint::from(62_400u32) && gl == BigUint::from(181_440u32) && counted == gl;
    if ok {
        Ok(format!(
            "|PGU_3(4)| = {pgu}, |GL_3(4)| = {gl} = enumerated {counted}"
        ))
    } else {
        Err(format!(
            "PGU_3(4) {pgu}, GL_3(4) {gl}, enumerated {counted}"
        ))
    }
}

fn involution_centralizers() -> Outcome {
    let cases = [
        (Epsilon::Plus, 2u64, 8u64),
        (Epsilon::Plus, 4, 576),
        (Epsilon::Minus, 2, 72),
    ];
    let mut seen = Vec::new();
    for (eps, q, expected) in cases {
        let g = match eps {
            Epsilon::Plus => enumerate_gl(3, q, DEFAULT_BUDGET),
            Epsilon::Minus => enumerate_gu(3, q, DEFAULT_BUDGET, 0),
        }
        .map_err(|e| e.to_string())?;
        let blocks = involution_with_blocks(3, 1, q, eps).map_err(|e| e.to_string())?;
        let bits: Vec<u64> = blocks.entries.iter().flatten().map(|&b| b as u64).collect();
        let z = Matrix::from_bits(g.field(), 3, &bits).map_err(|e| e.to_string())?;
        let brute = brute_centralizer(&g, &z).map_err(|e| e.to_string())?;
        let sign = eps.sign() as i64;
        let formula = (q as i64).pow(3) * (q as i64 - sign).pow(2);
        if brute != BigUint::from(expected)
            || formula != expected as i64
            || blocks.predicted_centralizer != brute
        {
            return Err(format!(
                "eps={eps} q={q}: brute {brute}, formula {formula}, expected {expected}"
            ));
        }
        seen.push(brute.to_string());
    }
    Ok(format!("centralizers {}", seen.join(", ")))
}

fn inequality_registry() -> Outcome {
    let start = Instant::now();
    let reg = Registry::builtin();
    let certs = reg.certify_all();
    let elapsed = start.elapsed();
    let mut tails = 0;
    for c in &certs {
        if !c.verified() {
            return Err(format!("{c}"));
        }
        c.replay().map_err(|e| format!("replay: {e}"))?;
        if c.range.is_tail() {
            tails += 1;
        }
    }
    for id in ["u3_mid_range", "u3_tail_reduced", "e6_degree_gap"] {
        if reg.get(id).is_none() {
            return Err(format!("registry lacks {id}"));
        }
    }
    let w = certs
        .iter()
        .find(|c| c.id == "u3_tail_reduced")
        .and_then(|c| c.witness.as_ref());
    if w.is_none() {
        return Err("tail entry without witness".into());
    }
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} entries ({tails} tails) in {:.2?}",
        certs.len(),
        elapsed
    ))
}

fn gudprep_completeness() -> Outcome {
    let mut total = 0;
    for (d, q) in [(5usize, 4u64), (6, 2)] {
        let field = group_field(Epsilon::Minus, q).map_err(|e| e.to_string())?;
        let filter = CharpolyFilter {
            real: true,
            unitary: Some(q),
            exclude_identity: true,
        };
        let space =
            enumerate_charpolys(d, field, filter, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let x1 = MonicPoly::linear(field.one(), field);
        let mut n = 0;
        for xi in space.iter() {
            let class = SemisimpleClass::new(Epsilon::Minus, d, q, xi.clone())
                .map_err(|e| e.to_string())?;
            let cases = classify_gudprep(&class).map_err(|e| e.to_string())?;
            if cases.cases.is_empty() {
                return Err(format!("d={d} q={q}: no case for {}", xi.expand()));
            }
            for (p, m) in xi.factors() {
                if *p != x1 && d < class.d1() as usize + 2 * (*m as usize) * p.degree() {
                    return Err(format!("d={d} q={q}: {} has d1 + 2mk > d", xi.expand()));
                }
            }
            n += 1;
        }
        if n == 0 {
            return Err(format!("d={d} q={q}: no classes enumerated"));
        }
        total += n;
    }
    Ok(format!("{total} classes, all classified"))
}

fn monic_polys(field: FieldSpec, deg: usize) -> impl Iterator<Item = MonicPoly> {
    let n = field.size();
    (0..n.pow(deg as u32)).map(move |mut code| {
        let mut c = Vec::with_capacity(deg);
        for _ in 0..deg {
            c.push(code % n);
            code /= n;
        }
        MonicPoly::from_bits(field, &c).expect("in range")
    })
}

fn duality_laws() -> Outcome {
    let mut checked = 0u64;
    let fields = [
        (FieldSpec::new(1, 1), None),
        (FieldSpec::new(1, 2), Some(2u64)),
        (FieldSpec::new(2, 2), Some(4)),
    ];
    for (field, q) in fields {
        let field = field.map_err(|e| e.to_string())?;
        let x1 = MonicPoly::linear(field.one(), field);
        let mut irreducibles = Vec::new();
        for deg in 1..=4 {
            for p in monic_polys(field, deg) {
                if !p.constant().is_zero() && is_irreducible(&p) {
                    irreducibles.push(p);
                }
            }
        }
        for p in &irreducibles {
            let s = poly_star(p).map_err(|e| e.to_string())?;
            if poly_star(&s).map_err(|e| e.to_string())? != *p || !is_irreducible(&s) {
                return Err(format!("star is not an involution on {p}"));
            }
            if s == *p && p.degree() % 2 == 1 && *p != x1 {
                return Err(format!("self-reciprocal {p} has odd degree"));
            }
            if let Some(q) = q {
                let t = poly_dagger(p, q).map_err(|e| e.to_string())?;
                if poly_dagger(&t, q).map_err(|e| e.to_string())? != *p || !is_irreducible(&t) {
                    return Err(format!("dagger is not an involution on {p}"));
                }
                if t == *p && p.degree() % 2 == 0 {
                    return Err(format!("dagger-fixed {p} has even degree"));
                }
            }
            checked += 1;
        }
        let small: Vec<&MonicPoly> = irreducibles.iter().filter(|p| p.degree() <= 2).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut pairs: Vec<(&MonicPoly, &MonicPoly)> = small
            .iter()
            .flat_map(|a| small.iter().map(move |b| (*a, *b)))
            .collect();
        for _ in 0..2000 {
            let a = &irreducibles[rng.gen_range(0..irreducibles.len())];
            let b = &irreducibles[rng.gen_range(0..irreducibles.len())];
            pairs.push((a, b));
        }
        for (a, b) in pairs {
            let ab = a.mul(b);
            let lhs = poly_star(&ab).map_err(|e| e.to_string())?;
            let rhs = poly_star(a)
                .map_err(|e| e.to_string())?
                .mul(&poly_star(b).map_err(|e| e.to_string())?);
            if lhs != rhs {
                return Err(format!("star not multiplicative on {a} * {b}"));
            }
            if let Some(q) = q {
                let lhs = poly_dagger(&ab, q).map_err(|e| e.to_string())?;
                let rhs = poly_dagger(a, q)
                    .map_err(|e| e.to_string())?
                    .mul(&poly_dagger(b, q).map_err(|e| e.to_string())?);
                if lhs != rhs {
                    return Err(format!("dagger not multiplicative on {a} * {b}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} checks"))
}

fn order_bounds() -> Outcome {
    let mut tested = 0;
    for (d, q, eps) in [
        (3usize, 4u64, Epsilon::Plus),
        (3, 2, Epsilon::Minus),
        (4, 4, Epsilon::Plus),
    ] {
        let report = verify_order_bound(d, q, eps).map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(format!("({d},{q},{eps}): {:?}", report.claims));
        }
        tested += report.claims.iter().map(|c| c.tested).sum::<u64>();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let configs = [
        (3usize, 4u64, Epsilon::Plus),
        (3, 2, Epsilon::Minus),
        (4, 4, Epsilon::Plus),
        (3, 8, Epsilon::Minus),
    ];
    let tori: Vec<_> = configs
        .iter()
        .map(|&(d, q, e)| torus_elements(d, q, e).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    for i in 0..1000 {
        let c = i % configs.len();
        let (_, q, eps) = configs[c];
        let t = tori[c][rng.gen_range(0..tori[c].len())].clone();
        let graph = if eps == Epsilon::Plus {
            rng.gen_range(0..2)
        } else {
            0
        };
        let period = group_field(eps, q).map_err(|e| e.to_string())?.degree();
        let word =
            AutoWord::new(eps, q, t, graph, rng.gen_range(0..period)).map_err(|e| e.to_string())?;
        for l in 1..=24 {
            let a = twisted_norm(&word, l).map_err(|e| e.to_string())?;
            let b = naive_power(&word, l).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!(
                    "{word}: l={l} twisted norm differs from composition"
                ));
            }
        }
    }
    Ok(format!(
        "{tested} torus words, 1000 random words up to l = 24"
    ))
}

fn order_estimates() -> Outcome {
    for a in 2..=64i64 {
        for m in 2..=20 {
            if !order_estimate_check(&Rational::from_integer(a.into()), m) {
                return Err(format!("fails at a={a}, m={m}"));
            }
        }
    }
    Ok("63 x 19 pairs".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("group orders", group_orders),
        ("involution centralizers", involution_centralizers),
        ("inequality registry", inequality_registry),
        ("large-index case completeness", gudprep_completeness),
        ("polynomial duality laws", duality_laws),
        ("automorphism order bounds", order_bounds),
        ("order estimates", order_estimates),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(msg) => println!(
                "criterion {}: PASS {name}: {msg} [{:.1?}]",
                i + 1,
                start.elapsed()
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL {name}: {msg} [{:.1?}]",
                    i + 1,
                    start.elapsed()
                );
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

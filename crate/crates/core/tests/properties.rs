mod common;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use laurent::{coprime_probable, CoprimeVerdict, LaurentPoly, Monomial, VarId, VarSpace, DEFAULT_TRIALS};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::golden::coprime_pairs;

const CASES: u32 = 1000;

/// Three exchange variables and one parameter `a`.
fn space() -> Arc<VarSpace> {
    VarSpace::indexed("x", 3, &["a"]).unwrap()
}

fn poly_from(space: &Arc<VarSpace>, terms: &[(i64, [i32; 4])]) -> LaurentPoly {
    LaurentPoly::from_terms(
        space,
        terms.iter().map(|&(c, e)| {
            let m = Monomial::from_pairs(e.iter().enumerate().map(|(v, &k)| (VarId(v as u32), k)));
            (m, BigInt::from(c))
        }),
    )
}

prop_compose! {
    fn laurent(max_terms: usize)(terms in prop::collection::vec(
        (-6i64..=6, (-2i32..=3, -2i32..=3, -2i32..=3, 0i32..=2)),
        0..=max_terms,
    )) -> LaurentPoly {
        let terms: Vec<(i64, [i32; 4])> = terms.into_iter().map(|(c, (a, b, d, p))| (c, [a, b, d, p])).collect();
        poly_from(&space(), &terms)
    }
}

fn nonzero(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    laurent(max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn non_unit(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    nonzero(max_terms).prop_filter("not a unit", |p| !p.is_unit())
}

/// Nonzero rational values for every variable of [`space`].
fn point() -> impl Strategy<Value = HashMap<VarId, BigRational>> {
    prop::collection::vec((1i64..=9, 1i64..=5, any::<bool>()), 4).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (n, d, neg))| {
                let n = if neg { -n } else { n };
                (VarId(i as u32), BigRational::new(n.into(), d.into()))
            })
            .collect()
    })
}

fn pairs() -> &'static [(String, LaurentPoly, LaurentPoly)] {
    static PAIRS: OnceLock<Vec<(String, LaurentPoly, LaurentPoly)>> = OnceLock::new();
    PAIRS.get_or_init(coprime_pairs)
}

fn eval(p: &LaurentPoly, at: &HashMap<VarId, BigRational>) -> BigRational {
    p.specialize(at).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn ring_axioms(a in laurent(5), b in laurent(5), c in laurent(5)) {
        let s = a.space().clone();
        let zero = LaurentPoly::zero(&s);
        let one = LaurentPoly::one(&s);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a - &a, zero.clone());
        prop_assert_eq!(&a + &(-&a), zero);
        prop_assert_eq!(a.pow(3), &(&a * &a) * &a);
    }

    #[test]
    fn specialization_is_a_homomorphism(a in laurent(5), b in laurent(5), at in point()) {
        prop_assert_eq!(eval(&(&a + &b), &at), eval(&a, &at) + eval(&b, &at));
        prop_assert_eq!(eval(&(&a * &b), &at), eval(&a, &at) * eval(&b, &at));
    }

    #[test]
    fn division_round_trip(a in laurent(5), b in nonzero(5)) {
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), Some(a.clone()));
        // Adding a term outside the product's support breaks divisibility
        // unless b is a unit.
        if !b.is_unit() {
            let s = a.space().clone();
            let bump = LaurentPoly::parse("x1^7*x2^7*x3^7", &s).unwrap();
            let off = &prod + &bump;
            if let Some(q) = off.exact_div(&b).unwrap() {
                prop_assert_eq!(&q * &b, off);
            }
        }
    }

    #[test]
    fn substitution_is_an_involution_for_units(
        p in laurent(5),
        j in 0u32..3,
        exps in (-2i32..=2, -2i32..=2),
        negative in any::<bool>(),
    ) {
        let s = p.space().clone();
        let j = VarId(j);
        let others: Vec<VarId> = s.exchange_ids().filter(|&v| v != j).collect();
        let m = Monomial::from_pairs([(others[0], exps.0), (others[1], exps.1)]);
        let sign = if negative { -1 } else { 1 };
        let u = LaurentPoly::monomial(&s, BigInt::from(sign), m);
        let once = p.subst_inverse_ratio(j, &u).unwrap();
        prop_assert_eq!(once.subst_inverse_ratio(j, &u).unwrap(), p);
    }

    #[test]
    fn substitution_matches_evaluation(p in laurent(5), q in nonzero(4), j in 0u32..3, at in point()) {
        let j = VarId(j);
        // Exponents of x_j start at -2; shift them to be nonnegative, since
        // negative powers need a unit image.
        let p = &p * &LaurentPoly::var(p.space(), j).pow(2);
        let s = p.space().clone();
        let q = LaurentPoly::from_terms(&s, q.terms().map(|(m, c)| (m.split_off(j).1, c.clone())));
        prop_assume!(!q.is_zero());
        let qv = eval(&q, &at);
        prop_assume!(!qv.is_zero());
        let got = p.subst_inverse_ratio(j, &q).unwrap();
        let mut moved = at.clone();
        moved.insert(j, qv / &at[&j]);
        prop_assert_eq!(eval(&got, &at), eval(&p, &moved));
    }

    #[test]
    fn content_split_is_exact(p in nonzero(6)) {
        let s = p.space().clone();
        let (l, core) = p.content_split().unwrap();
        prop_assert_eq!(&l.to_poly(&s) * &core, p);
        prop_assert!(core.integer_content().is_one());
        prop_assert!(core.min_monomial().is_one());
        prop_assert!(core.leading_term().unwrap().1.is_positive());
    }

    #[test]
    fn max_power_is_maximal(r in nonzero(4), q in non_unit(3), k in 0u32..=2) {
        let p = &r * &q.pow(k);
        let (core, b) = p.divide_out_max_power(&q).unwrap();
        prop_assert!(b >= k);
        prop_assert_eq!(&core * &q.pow(b), p);
        prop_assert_eq!(core.exact_div(&q).unwrap(), None);
    }

    #[test]
    fn shared_factor_is_suspected(p in nonzero(3), q in nonzero(3), r in non_unit(3), seed in any::<u64>()) {
        let (_, core) = r.content_split().unwrap();
        prop_assume!(core.len() > 1);
        let verdict = coprime_probable(&(&p * &r), &(&q * &r), seed, DEFAULT_TRIALS).unwrap();
        prop_assert!(!verdict.is_coprime(), "{} and {} share {}", p, q, r);
    }

    #[test]
    fn paper_pairs_stay_coprime_for_any_seed(seed in any::<u64>()) {
        for (name, p, q) in pairs() {
            let v = coprime_probable(p, q, seed, DEFAULT_TRIALS).unwrap();
            prop_assert!(v.is_coprime(), "{}: {:?}", name, v);
        }
    }
}

#[test]
fn paper_pairs_are_coprime_at_fixed_seed() {
    assert!(pairs().len() >= 20);
    for (name, p, q) in pairs() {
        assert_eq!(coprime_probable(p, q, 0, DEFAULT_TRIALS).unwrap(), CoprimeVerdict::CoprimeProbable, "{name}");
    }
}

#[test]
fn textbook_cases() {
    let s = VarSpace::indexed("x", 2, &[]).unwrap();
    let p = |t: &str| LaurentPoly::parse(t, &s).unwrap();
    let v = coprime_probable(&p("(x1 + x2)*x1"), &p("(x1 + x2)*x2"), 0, DEFAULT_TRIALS).unwrap();
    assert!(!v.is_coprime());
    let (core, b) = p("(x1 + x2)^2*(x1 - x2)").divide_out_max_power(&p("x1 + x2")).unwrap();
    assert_eq!((core, b), (p("x1 - x2"), 2));
    let (core, b) = p("x1 + 3").divide_out_max_power(&p("1")).unwrap();
    assert_eq!((core, b), (p("x1 + 3"), 0));
}

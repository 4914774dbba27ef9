mod common;

use std::collections::BTreeMap;

use laurent::recurrences::{
    catalog, gale_robinson_embed, lookup, two_term_embed, Embedding, Index, RecurrenceError, RecurrenceKind, TermValue,
};
use laurent::LaurentPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use common::*;

fn ones(_: &Index) -> BigRational {
    BigRational::one()
}

fn integers(spec: &str, count: usize) -> Vec<BigInt> {
    let t = lookup(spec).unwrap().compute_numeric(count, ones).unwrap();
    assert!(t.integrality().all_integers, "{spec}: {:?}", t.integrality());
    t.entries
        .iter()
        .map(|e| match &e.value {
            TermValue::Rational { value } => value.to_integer(),
            v => panic!("{v:?}"),
        })
        .collect()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn somos_values_match_oracle() {
    // Ordinal terms 5..12 of Somos-4 are indices 4..11.
    let s4 = integers("somos4", 20);
    assert_eq!(s4[4..12], big(&[2, 3, 7, 23, 59, 314, 1529, 8209])[..]);
    assert_eq!(s4, somos_ones(4, 20));

    let s5 = integers("somos5", 20);
    assert_eq!(s5[5..13], big(&[2, 3, 5, 11, 37, 83, 274, 1217])[..]);
    assert_eq!(s5, somos_ones(5, 20));

    let s6 = integers("somos6", 20);
    assert_eq!(s6[6..13], big(&[3, 5, 9, 23, 75, 421, 1103])[..]);
    assert_eq!(s6, somos_ones(6, 20));

    let s7 = integers("somos7", 20);
    assert_eq!(s7[7..14], big(&[3, 5, 9, 17, 41, 137, 769])[..]);
    assert_eq!(s7, somos_ones(7, 20));
}

#[test]
fn somos4_symbolic_terms() {
    let spec = lookup("somos4").unwrap();
    let t = spec.compute_symbolic(6).unwrap();
    let space = t.laurent(&Index::Int(0)).unwrap().space().clone();
    assert_eq!(
        t.laurent(&Index::Int(4)).unwrap(),
        &LaurentPoly::parse("y1*y3*y0^-1 + y2^2*y0^-1", &space).unwrap()
    );
    let y5 = LaurentPoly::parse("(y1*y2*y3 + y2^3 + y0*y3^2)*(y0*y1)^-1", &space).unwrap();
    assert_eq!(t.laurent(&Index::Int(5)).unwrap(), &y5);
    let at_ones = specialize(&spec, &y5, &BTreeMap::new(), &ones);
    assert_eq!(at_ones, q(3));
}

#[test]
fn symbolic_terms_match_exact_recursion() {
    for spec in catalog() {
        let mut r = rng(0x5eed ^ spec.name.len() as u64);
        let symbolic = spec.compute_symbolic(15).unwrap();
        assert!(symbolic.first_not_laurent().is_none(), "{}: {symbolic}", spec.name);
        let mut done = 0;
        let mut attempt = 0u64;
        while done < 5 {
            attempt += 1;
            assert!(attempt < 50, "{}: too many degenerate samples", spec.name);
            let bindings = random_bindings(&spec, &mut r);
            let bound = spec.bind(&bindings).unwrap();
            let init = random_initial(r.gen());
            let numeric = match bound.compute_numeric(15, &init) {
                Ok(t) => t,
                Err(RecurrenceError::ZeroTerm(_)) => continue,
                Err(e) => panic!("{}: {e}", spec.name),
            };
            let values = specialize_table(&spec, &symbolic, &bindings, &init);
            assert_eq!(values.len(), numeric.entries.len(), "{}", spec.name);
            for ((idx, v), e) in values.iter().zip(&numeric.entries) {
                assert_eq!(idx, &e.index);
                assert_eq!(Some(v), numeric.rational(idx), "{} at {idx}", spec.name);
            }
            if let RecurrenceKind::OneDim { recurrence, .. } = &spec.kind {
                let initial: Vec<BigRational> = (0..recurrence.n() as i64).map(|i| init(&Index::Int(i))).collect();
                let oracle = one_dim_oracle(&spec.name, &bound_params(&spec, &bindings), &initial, 15);
                let got: Vec<BigRational> = values.into_iter().map(|(_, v)| v).collect();
                assert_eq!(got, oracle, "{}", spec.name);
            }
            done += 1;
        }
    }
}

/// Catalog bindings merged with the sampled ones.
fn bound_params(spec: &laurent::recurrences::RecurrenceSpec, extra: &BTreeMap<String, i64>) -> BTreeMap<String, i64> {
    let mut out = match &spec.kind {
        RecurrenceKind::OneDim { recurrence, .. } => recurrence.bindings.clone(),
        _ => BTreeMap::new(),
    };
    out.extend(extra.clone());
    out
}

#[test]
fn nonnegativity_probe() {
    let mut findings = Vec::new();
    for spec in catalog() {
        let t = spec.compute_symbolic(15).unwrap();
        let neg = t.negative_coefficients();
        if !neg.is_empty() {
            findings.push((spec.name.clone(), neg.len(), neg[0].clone()));
        }
    }
    for (name, count, first) in &findings {
        println!("negative coefficients in {name}: {count}, first at {} ({} {})", first.index, first.coefficient, first.monomial);
    }
    // Only the frieze with epsilon = -1 has a sign in its exchange polynomial.
    assert!(findings.iter().all(|(name, ..)| name == "frieze-minus"), "{findings:?}");
}

#[test]
fn gale_robinson_embedding_coherence() {
    let oracle = somos_ones(6, 13);
    for big_n in 6..=12 {
        let e = gale_robinson_embed(1, 2, 3, big_n, &[("alpha", 1), ("beta", 1), ("gamma", 1)]).unwrap();
        let one_dim = Embedding::GaleRobinson { p: 1, q: 2, r: 3 }
            .one_dim("somos6", &[("alpha", 1), ("beta", 1), ("gamma", 1)])
            .unwrap();
        let t = e.compute_symbolic(&one_dim).unwrap();
        let y = t.laurent(&Index::Int(big_n)).unwrap();
        let direct = one_dim.compute_symbolic(big_n as usize + 1).unwrap();
        assert_eq!(Some(y), direct.laurent(&Index::Int(big_n)), "N = {big_n}");
        let spec = lookup("somos6").unwrap();
        assert_eq!(specialize(&spec, y, &BTreeMap::new(), &ones), BigRational::from_integer(oracle[big_n as usize].clone()));
    }
}

#[test]
fn two_term_embedding_coherence() {
    let oracle = somos_ones(5, 13);
    let spec = lookup("somos5").unwrap();
    for big_n in 5..=12 {
        let e = two_term_embed(1, 2, 5, big_n, &[("alpha", 1), ("beta", 1)]).unwrap();
        let one_dim = Embedding::TwoTerm { p: 1, q: 2, n: 5 }
            .one_dim("somos5", &[("alpha", 1), ("beta", 1)])
            .unwrap();
        let t = e.compute_symbolic(&one_dim).unwrap();
        let y = t.laurent(&Index::Int(big_n)).unwrap();
        assert_eq!(specialize(&spec, y, &BTreeMap::new(), &ones), BigRational::from_integer(oracle[big_n as usize].clone()));
    }
    assert_eq!(oracle[8], BigInt::from(11));
}

#[test]
fn embedding_index_examples() {
    let e = gale_robinson_embed(1, 2, 3, 6, &[]).unwrap();
    assert_eq!(e.index(&[0, 0, 0]), 6);
    assert_eq!(e.index(&[-1, 0, 0]), 5);
    let s7 = gale_robinson_embed(1, 2, 4, 7, &[]).unwrap();
    assert!(s7.initial_indices().unwrap().iter().all(|m| (0..7).contains(m)));
    let s5 = two_term_embed(1, 2, 5, 8, &[]).unwrap();
    assert_eq!(s5.index(&[0, 0, 0]), 8);
}

#[test]
fn random_embeddings_satisfy_region_conditions() {
    let mut r = rng(17);
    let mut checked = 0;
    while checked < 10 {
        let three: bool = r.gen();
        let (e, n) = if three {
            let (p, q, rr) = (r.gen_range(1..=4), r.gen_range(1..=4), r.gen_range(1..=4));
            let n = p + q + rr;
            match gale_robinson_embed(p, q, rr, r.gen_range(n..=n + 4), &[]) {
                Ok(e) => (e, n),
                Err(_) => continue,
            }
        } else {
            let n = r.gen_range(4..=8);
            let p = r.gen_range(1..n / 2);
            let qq = r.gen_range(p + 1..=n / 2);
            (two_term_embed(p, qq, n, r.gen_range(n..=n + 4), &[]).unwrap(), n)
        };
        let rec = &e.recurrence;
        // Upward closure along the generators of the order, then finite
        // downsets.
        let gens: Vec<Vec<i64>> = if three {
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        } else {
            vec![vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 1], vec![0, -1, 1]]
        };
        for _ in 0..200 {
            let h: Vec<i64> = (0..3).map(|_| r.gen_range(-4..=4)).collect();
            if !rec.in_region(&h) {
                continue;
            }
            for g in &gens {
                let up: Vec<i64> = h.iter().zip(g).map(|(a, b)| a + b).collect();
                assert!(rec.in_region(&up), "{} at {h:?} + {g:?}", rec.name);
            }
            rec.downset(&h).unwrap();
        }
        let idx = e.initial_indices().unwrap();
        assert!(idx.iter().all(|m| (0..n).contains(m)), "{}: {idx:?}", rec.name);
        checked += 1;
    }
}

#[test]
fn catalog_lookup() {
    assert!(matches!(
        lookup("somos4").unwrap().kind,
        RecurrenceKind::OneDim {
            embedding: Some(Embedding::TwoTerm { p: 1, q: 2, n: 4 }),
            ..
        }
    ));
    let cube = lookup("cube").unwrap();
    assert_eq!(cube.free_parameters(), ["alpha", "beta", "gamma"]);
    assert!(matches!(lookup("nosuch"), Err(RecurrenceError::Unknown(_))));
}

#[test]
fn serde_round_trip() {
    for spec in catalog() {
        let json = serde_json::to_string(&spec).unwrap();
        let back: laurent::recurrences::RecurrenceSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let t = back.compute_symbolic(8).unwrap();
        let tj = serde_json::to_string(&t).unwrap();
        let tb: laurent::recurrences::TermTable = serde_json::from_str(&tj).unwrap();
        assert_eq!(tb, t, "{}", spec.name);
    }
}

//! Independent oracles shared by the integration tests and the acceptance
//! runner. Nothing here calls the term engines of the crate.
#![allow(dead_code)]

pub mod golden;

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use laurent::recurrences::{Index, RecurrenceSpec, TermTable, TermValue};
use laurent::LaurentPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `y_m y_{m-n} = sum_k c_k y_{m-a_k} y_{m-n+a_k}` from `initial`, with
/// terms given as `(c_k, a_k)`. Exact rationals throughout.
pub fn quadratic_oracle(n: usize, terms: &[(i64, usize)], initial: &[BigRational], count: usize) -> Vec<BigRational> {
    assert_eq!(initial.len(), n);
    let mut y = initial.to_vec();
    while y.len() < count {
        let m = y.len();
        let mut num = BigRational::zero();
        for &(c, a) in terms {
            num += q(c) * &y[m - a] * &y[m - n + a];
        }
        y.push(num / &y[m - n]);
    }
    y.truncate(count);
    y
}

/// Somos-k for k in 4..=7 with all-ones initial data, as integers. Panics
/// if a term fails to be an integer.
pub fn somos_ones(k: usize, count: usize) -> Vec<BigInt> {
    let terms: Vec<(i64, usize)> = (1..=k / 2).map(|a| (1, a)).collect();
    quadratic_oracle(k, &terms, &vec![BigRational::one(); k], count)
        .into_iter()
        .map(|v| {
            assert!(v.is_integer(), "Somos-{k} produced {v}");
            v.to_integer()
        })
        .collect()
}

/// Exact-rational recursion for the one-dimensional catalog entries,
/// written out by hand.
pub fn one_dim_oracle(name: &str, params: &BTreeMap<String, i64>, initial: &[BigRational], count: usize) -> Vec<BigRational> {
    let p = |k: &str| params.get(k).copied().unwrap_or(1);
    let (n, terms): (usize, Vec<(i64, usize)>) = match name {
        "somos4" => (4, vec![(p("alpha"), 1), (p("beta"), 2)]),
        "somos5" => (5, vec![(p("alpha"), 1), (p("beta"), 2)]),
        "somos6" | "gale-robinson" => (6, vec![(p("alpha"), 1), (p("beta"), 2), (p("gamma"), 3)]),
        "somos7" => (7, vec![(p("alpha"), 1), (p("beta"), 2), (p("gamma"), 4)]),
        "two-term" => (7, vec![(p("alpha"), 1), (p("beta"), 3)]),
        "binomial3" => {
            let mut y = initial.to_vec();
            while y.len() < count {
                let m = y.len();
                y.push((&y[m - 2] * &y[m - 1] + q(1)) / &y[m - 3]);
            }
            y.truncate(count);
            return y;
        }
        "somos4-gen" => {
            let mut y = initial.to_vec();
            while y.len() < count {
                let m = y.len();
                y.push((&y[m - 3] * &y[m - 1] + &y[m - 2]) / &y[m - 4]);
            }
            y.truncate(count);
            return y;
        }
        other => panic!("no oracle for {other}"),
    };
    quadratic_oracle(n, &terms, initial, count)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero rational with small numerator and denominator.
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=5);
        if num != 0 {
            return BigRational::new(num.into(), den.into());
        }
    }
}

/// Deterministic random initial values: the value at an index depends only
/// on `seed` and the index.
pub fn random_initial(seed: u64) -> impl Fn(&Index) -> BigRational {
    move |idx: &Index| {
        let mut h = DefaultHasher::new();
        idx.hash(&mut h);
        random_rational(&mut rng(seed ^ h.finish()))
    }
}

/// Random nonzero integer bindings for every free parameter.
pub fn random_bindings(spec: &RecurrenceSpec, rng: &mut ChaCha8Rng) -> BTreeMap<String, i64> {
    spec.free_parameters()
        .into_iter()
        .map(|p| {
            let v: i64 = rng.gen_range(1..=4);
            (p, if rng.gen_bool(0.5) { v } else { -v })
        })
        .collect()
}

/// Evaluates a symbolic table: initial variables through `init`, parameters
/// through `bindings`.
pub fn specialize_table(
    spec: &RecurrenceSpec,
    table: &TermTable,
    bindings: &BTreeMap<String, i64>,
    init: &dyn Fn(&Index) -> BigRational,
) -> Vec<(Index, BigRational)> {
    let mut out = Vec::new();
    for e in &table.entries {
        let TermValue::Laurent { value } = &e.value else {
            panic!("{}: term {} is not Laurent", spec.name, e.index);
        };
        out.push((e.index.clone(), specialize(spec, value, bindings, init)));
    }
    out
}

pub fn specialize(
    spec: &RecurrenceSpec,
    value: &LaurentPoly,
    bindings: &BTreeMap<String, i64>,
    init: &dyn Fn(&Index) -> BigRational,
) -> BigRational {
    let space = value.space();
    let mut assignment = HashMap::new();
    for v in space.ids() {
        let name = space.name(v);
        let x = match bindings.get(name) {
            Some(&c) => q(c),
            None => {
                let idx = spec
                    .initial_index(name)
                    .unwrap_or_else(|| panic!("{}: `{name}` is neither bound nor initial", spec.name));
                init(&idx)
            }
        };
        assignment.insert(v, x);
    }
    value.specialize(&assignment).expect("nonzero specialization")
}

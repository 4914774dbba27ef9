//! Probabilistic coprimality of Laurent polynomials over `Z[parameters]`.
//!
//! Exchange-variable monomials are units and are discarded. Integer content
//! and parameter-monomial content are compared exactly. Any remaining common
//! factor must involve some variable `v` present in both inputs; for each such
//! `v` the other variables are specialized to random integers in
//! [`SAMPLE_RANGE`] and the univariate gcd in `v` is computed modulo the prime
//! `2^61 - 1`. A common factor is suspected only when that gcd has positive
//! degree in every trial.
//!
//! A shared factor whose leading coefficient vanishes under every sampled
//! specialization would be missed, so a `CoprimeProbable` verdict can be wrong
//! with small probability. `CommonFactorSuspected` is wrong only if every
//! trial hits a root of the resultant.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::poly::LaurentPoly;
use crate::space::{same_space, VarId};

pub const DEFAULT_TRIALS: u32 = 8;
pub const SAMPLE_RANGE: RangeInclusive<u64> = 2..=1_000_000;

const PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoprimeVerdict {
    CoprimeProbable,
    CommonFactorSuspected { reason: String },
}

impl CoprimeVerdict {
    pub fn is_coprime(&self) -> bool {
        matches!(self, CoprimeVerdict::CoprimeProbable)
    }
}

pub fn coprime_probable(
    p: &LaurentPoly,
    q: &LaurentPoly,
    seed: u64,
    trials: u32,
) -> Result<CoprimeVerdict, AlgebraError> {
    let space = p.space().clone();
    if !same_space(&space, q.space()) {
        return Err(AlgebraError::SpaceMismatch);
    }
    let (lp, cp) = p.content_split()?;
    let (lq, cq) = q.content_split()?;

    let g = lp.coeff.gcd(&lq.coeff);
    if !g.is_one() {
        return Ok(CoprimeVerdict::CommonFactorSuspected {
            reason: format!("common integer factor {g}"),
        });
    }
    let (_, mp) = lp.scalar_part(&space);
    let (_, mq) = lq.scalar_part(&space);
    let shared = mp.gcd(&mq);
    if let Some(&(v, _)) = shared.exponents().iter().find(|&&(_, e)| e > 0) {
        return Ok(CoprimeVerdict::CommonFactorSuspected {
            reason: format!("common parameter factor {}", space.name(v)),
        });
    }

    let vp = cp.variables();
    let vq = cq.variables();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &v in vp.intersection(&vq) {
        let mut always = true;
        for _ in 0..trials.max(1) {
            let values: Vec<u64> = (0..space.len()).map(|_| rng.gen_range(SAMPLE_RANGE)).collect();
            let a = univariate(&cp, v, &values);
            let b = univariate(&cq, v, &values);
            if gcd_degree(a, b) == 0 {
                always = false;
                break;
            }
        }
        if always {
            return Ok(CoprimeVerdict::CommonFactorSuspected {
                reason: format!(
                    "univariate gcd in {} has positive degree in all {} trials",
                    space.name(v),
                    trials.max(1)
                ),
            });
        }
    }
    Ok(CoprimeVerdict::CoprimeProbable)
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn reduce(c: &BigInt) -> u64 {
    let m = c.mod_floor(&BigInt::from(PRIME));
    m.to_u64().expect("reduced below the modulus")
}

/// Coefficients of `p` as a polynomial in `v` over `F_PRIME`, every other
/// variable set to `values`. Input must be a polynomial.
fn univariate(p: &LaurentPoly, v: VarId, values: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for (m, c) in p.terms() {
        let (d, rest) = m.split_off(v);
        let d = d as usize;
        let mut t = reduce(c);
        for &(w, e) in rest.exponents() {
            t = mulmod(t, powmod(values[w.index()], e as u64));
        }
        if out.len() <= d {
            out.resize(d + 1, 0);
        }
        out[d] = (out[d] + t) % PRIME;
    }
    trim(&mut out);
    out
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of `gcd(a, b)`; zero polynomials are treated as having degree 0
/// gcd, so a vanishing specialization never counts as evidence.
fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() - 1
}

fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let lb_inv = inv(*b.last().expect("nonzero divisor"));
    while r.len() >= b.len() {
        let lead = *r.last().expect("nonempty");
        if lead != 0 {
            let k = mulmod(lead, lb_inv);
            let shift = r.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + PRIME - mulmod(k, bi)) % PRIME;
            }
        }
        r.pop();
    }
    trim(&mut r);
    r
}

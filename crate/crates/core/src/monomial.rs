//! Laurent monomials and the monomial units `±m`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::space::VarId;

/// A Laurent monomial stored sparsely as `(variable, exponent)` pairs sorted
/// by variable, with no zero exponents.
///
/// The derived `Ord` is *not* the term order; use [`Monomial::grlex_cmp`] (or
/// the [`Grlex`] wrapper) for that.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<(VarId, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn var_pow(v: VarId, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, i32)>) -> Self {
        let mut exps: Vec<(VarId, i32)> = pairs.into_iter().collect();
        exps.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(VarId, i32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        out.retain(|&(_, e)| e != 0);
        Monomial { exps: out }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(VarId, i32)] {
        &self.exps
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        match self.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e as i64).sum()
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    /// True when `other` divides `self` in the polynomial (not Laurent) sense.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other
            .exps
            .iter()
            .all(|&(v, e)| self.exponent(v) >= e)
    }

    /// Componentwise minimum of exponents, treating absent variables as 0.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut vars: Vec<VarId> = self
            .exps
            .iter()
            .chain(other.exps.iter())
            .map(|&(v, _)| v)
            .collect();
        vars.sort();
        vars.dedup();
        Monomial::from_pairs(
            vars.into_iter()
                .map(|v| (v, self.exponent(v).min(other.exponent(v)))),
        )
    }

    /// Removes variable `v`, returning its exponent and the rest.
    pub fn split_off(&self, v: VarId) -> (i32, Monomial) {
        let mut rest = self.clone();
        match rest.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => {
                let (_, e) = rest.exps.remove(i);
                (e, rest)
            }
            Err(_) => (0, rest),
        }
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.exponent(v) != 0
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn map_vars(&self, f: impl Fn(VarId) -> VarId) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }

    /// Graded lexicographic comparison: total degree first, then exponents of
    /// lower-indexed variables are more significant.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                },
            }
        }
    }
}

/// Newtype ordering monomials by [`Monomial::grlex_cmp`]; used as the key of
/// the term map so that the last entry is the leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Grlex(pub Monomial);

impl Ord for Grlex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.grlex_cmp(&other.0)
    }
}

impl PartialOrd for Grlex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An invertible element `±m` of the Laurent ring (the unit group when the
/// coefficient ring has units `{±1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialUnit {
    pub negative: bool,
    pub monomial: Monomial,
}

impl MonomialUnit {
    pub fn one() -> Self {
        MonomialUnit {
            negative: false,
            monomial: Monomial::one(),
        }
    }

    pub fn new(negative: bool, monomial: Monomial) -> Self {
        MonomialUnit { negative, monomial }
    }

    pub fn inverse(&self) -> Self {
        MonomialUnit {
            negative: self.negative,
            monomial: self.monomial.inverse(),
        }
    }

    pub fn mul(&self, other: &MonomialUnit) -> MonomialUnit {
        MonomialUnit {
            negative: self.negative != other.negative,
            monomial: self.monomial.mul(&other.monomial),
        }
    }

    pub fn sign(&self) -> i32 {
        if self.negative {
            -1
        } else {
            1
        }
    }
}

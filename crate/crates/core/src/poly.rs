//! Sparse multivariate Laurent polynomials over `Z[parameters]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::monomial::{Grlex, Monomial, MonomialUnit};
use crate::space::{same_space, VarId, VarSpace};

mod packed;

/// A canonical Laurent polynomial: no zero coefficients, no zero exponents.
///
/// Terms are kept in a map keyed by graded-lex order, so iteration runs from
/// the smallest term to the leading term.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    space: Arc<VarSpace>,
    terms: BTreeMap<Grlex, BigInt>,
}

/// The factor `L = coeff * monomial` removed by [`LaurentPoly::content_split`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Content {
    pub coeff: BigInt,
    pub monomial: Monomial,
}

impl Content {
    pub fn one() -> Self {
        Content {
            coeff: BigInt::one(),
            monomial: Monomial::one(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.monomial.is_one()
    }

    pub fn to_poly(&self, space: &Arc<VarSpace>) -> LaurentPoly {
        LaurentPoly::monomial(space, self.coeff.clone(), self.monomial.clone())
    }

    /// The invertible part `±m` where `m` collects the exchange variables.
    pub fn unit_part(&self, space: &VarSpace) -> MonomialUnit {
        let m = Monomial::from_pairs(
            self.monomial
                .exponents()
                .iter()
                .copied()
                .filter(|&(v, _)| !space.is_parameter(v)),
        );
        MonomialUnit::new(self.coeff.is_negative(), m)
    }

    /// The non-invertible scalar part: `|coeff|` times the parameter monomial.
    pub fn scalar_part(&self, space: &VarSpace) -> (BigInt, Monomial) {
        let m = Monomial::from_pairs(
            self.monomial
                .exponents()
                .iter()
                .copied()
                .filter(|&(v, _)| space.is_parameter(v)),
        );
        (self.coeff.abs(), m)
    }
}

impl LaurentPoly {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        LaurentPoly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<VarSpace>) -> Self {
        Self::constant(space, 1)
    }

    pub fn constant(space: &Arc<VarSpace>, c: impl Into<BigInt>) -> Self {
        Self::monomial(space, c.into(), Monomial::one())
    }

    pub fn var(space: &Arc<VarSpace>, v: VarId) -> Self {
        Self::monomial(space, BigInt::one(), Monomial::var(v))
    }

    /// The variable with the given name; panics if it is not in the space.
    pub fn named(space: &Arc<VarSpace>, name: &str) -> Self {
        let v = space
            .index_of(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in space {space}"));
        Self::var(space, v)
    }

    pub fn monomial(space: &Arc<VarSpace>, c: BigInt, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Grlex(m), c);
        }
        LaurentPoly {
            space: space.clone(),
            terms,
        }
    }

    pub fn from_unit(space: &Arc<VarSpace>, u: &MonomialUnit) -> Self {
        Self::monomial(space, BigInt::from(u.sign()), u.monomial.clone())
    }

    /// Sums arbitrary `(monomial, coefficient)` pairs into canonical form.
    pub fn from_terms(
        space: &Arc<VarSpace>,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(space, acc)
    }

    fn from_map(space: &Arc<VarSpace>, acc: HashMap<Monomial, BigInt>) -> Self {
        LaurentPoly {
            space: space.clone(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (Grlex(m), c))
                .collect(),
        }
    }

    /// Parses an expression in the documented grammar; see [`crate::parse`].
    pub fn parse(text: &str, space: &Arc<VarSpace>) -> Result<Self, AlgebraError> {
        crate::parse::parse_poly(text, space)
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter().map(|(m, c)| (&m.0, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Grlex(Monomial::one()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms
            .get(&Grlex(m.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back().map(|(m, c)| (&m.0, c))
    }

    /// Single-term polynomials `±m` with no parameter factor: the units of
    /// `A[x^{±1}]`.
    pub fn as_unit(&self) -> Option<MonomialUnit> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.leading_term()?;
        if c.abs().is_one() && m.variables().all(|v| !self.space.is_parameter(v)) {
            Some(MonomialUnit::new(c.is_negative(), m.clone()))
        } else {
            None
        }
    }

    pub fn is_unit(&self) -> bool {
        self.as_unit().is_some()
    }

    /// True when all exponents are nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.0.is_polynomial())
    }

    pub fn depends_on(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.0.contains(v))
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.0.variables()).collect()
    }

    /// `(min, max)` exponent of `v` over all terms (absent counts as 0).
    pub fn degree_range(&self, v: VarId) -> (i32, i32) {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for m in self.terms.keys() {
            let e = m.0.exponent(v);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (lo, hi)
        }
    }

    /// Componentwise minimum exponent over all terms, absent counting as 0.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.0.clone();
        for m in it {
            g = g.gcd(&m.0);
        }
        g
    }

    /// Positive gcd of the integer coefficients (0 for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn check_space(&self, other: &LaurentPoly) -> Result<(), AlgebraError> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(AlgebraError::SpaceMismatch)
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_space(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(LaurentPoly {
            space: self.space.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_space(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), -c);
        }
        Ok(LaurentPoly {
            space: self.space.clone(),
            terms,
        })
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.mul_limited(other, usize::MAX)
    }

    /// Product that fails with `SizeLimit` once more than `limit` distinct
    /// monomials have been accumulated.
    pub fn mul_limited(&self, other: &LaurentPoly, limit: usize) -> Result<LaurentPoly, AlgebraError> {
        self.check_space(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentPoly::zero(&self.space));
        }
        match packed::mul(self, other, limit) {
            Some(r) => r,
            None => self.generic_mul(other, limit),
        }
    }

    fn generic_mul(&self, other: &LaurentPoly, limit: usize) -> Result<LaurentPoly, AlgebraError> {
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity((self.terms.len() * other.terms.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            if acc.len() > limit {
                return Err(AlgebraError::SizeLimit(acc.len(), limit));
            }
            for (mb, cb) in &other.terms {
                let m = ma.0.mul(&mb.0);
                match acc.get_mut(&m) {
                    Some(c) => *c += ca * cb,
                    None => {
                        acc.insert(m, ca * cb);
                    }
                }
            }
        }
        Ok(LaurentPoly::from_map(&self.space, acc))
    }

    pub fn scale(&self, k: &BigInt) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero(&self.space);
        }
        LaurentPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (Grlex(t.0.mul(m)), c.clone()))
                .collect(),
        }
    }

    pub fn mul_unit(&self, u: &MonomialUnit) -> LaurentPoly {
        let p = self.mul_monomial(&u.monomial);
        if u.negative {
            -p
        } else {
            p
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        self.pow_limited(k, usize::MAX).expect("unlimited power")
    }

    pub fn pow_limited(&self, k: u32, limit: usize) -> Result<LaurentPoly, AlgebraError> {
        let mut result = LaurentPoly::one(&self.space);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_limited(&base, limit)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_limited(&base, limit)?;
            }
        }
        Ok(result)
    }

    /// Exact division in the Laurent ring. Returns `Ok(None)` when `q` does
    /// not divide `self`.
    ///
    /// Exchange-variable monomials are units and are split off first; the
    /// remaining polynomial division runs under a monomial order. Parameters
    /// are not units, so a parameter factor of `q` must genuinely divide.
    pub fn exact_div(&self, q: &LaurentPoly) -> Result<Option<LaurentPoly>, AlgebraError> {
        self.check_space(q)?;
        if q.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        if let Some(u) = q.as_unit() {
            return Ok(Some(self.mul_unit(&u.inverse())));
        }
        let shift_p = self.exchange_shift();
        let shift_q = q.exchange_shift();
        let p1 = self.mul_monomial(&shift_p.inverse());
        let q1 = q.mul_monomial(&shift_q.inverse());
        if !p1.is_polynomial() || !q1.is_polynomial() {
            // Negative parameter exponents: nothing sensible to divide.
            return Ok(None);
        }
        Ok(poly_div(&p1, &q1).map(|r| r.mul_monomial(&shift_p.div(&shift_q))))
    }

    /// Minimal exponents restricted to exchange variables.
    fn exchange_shift(&self) -> Monomial {
        let m = self.min_monomial();
        Monomial::from_pairs(
            m.exponents()
                .iter()
                .copied()
                .filter(|&(v, _)| !self.space.is_parameter(v)),
        )
    }

    /// `self|_{x_j <- q/x_j}`.
    ///
    /// `q` must not involve `x_j`. Negative powers of `x_j` in `self` are only
    /// accepted when `q` is a unit, since otherwise `q^{-d}` is not Laurent.
    pub fn subst_inverse_ratio(&self, j: VarId, q: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_space(q)?;
        let name = || self.space.name(j).to_string();
        if q.depends_on(j) {
            return Err(AlgebraError::SelfReferentialSubstitution(name()));
        }
        if q.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let unit = q.as_unit();
        let mut by_degree: BTreeMap<i32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (d, rest) = m.0.split_off(j);
            by_degree.entry(d).or_default().push((rest.mul(&Monomial::var_pow(j, -d)), c.clone()));
        }
        if by_degree.keys().next().is_some_and(|&d| d < 0) && unit.is_none() {
            return Err(AlgebraError::NegativeExponent(name()));
        }
        let mut out = LaurentPoly::zero(&self.space);
        let mut qpow = LaurentPoly::one(&self.space);
        let mut qdeg = 0;
        for (d, terms) in by_degree {
            let chunk = LaurentPoly::from_terms(&self.space, terms);
            let factor = if d < 0 {
                let u = unit.as_ref().expect("checked above").inverse();
                LaurentPoly::from_unit(&self.space, &u).pow((-d) as u32)
            } else {
                while qdeg < d {
                    qpow = &qpow * q;
                    qdeg += 1;
                }
                qpow.clone()
            };
            out = &out + &(&chunk * &factor);
        }
        Ok(out)
    }

    /// `self|_{x_j <- 0}`: drops every term containing `x_j`.
    pub fn set_zero(&self, j: VarId) -> Result<LaurentPoly, AlgebraError> {
        if self.terms.keys().any(|m| m.0.exponent(j) < 0) {
            return Err(AlgebraError::NegativeExponent(self.space.name(j).to_string()));
        }
        Ok(LaurentPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.0.contains(j))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Splits `self = L * core` where `L` is the integer content times the
    /// minimal monomial (over all variables, parameters included), signed so
    /// that the leading coefficient of `core` is positive.
    pub fn content_split(&self) -> Result<(Content, LaurentPoly), AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut g = self.integer_content();
        if self.leading_term().expect("nonzero").1.is_negative() {
            g = -g;
        }
        let m = self.min_monomial();
        let inv = m.inverse();
        let core = LaurentPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (Grlex(t.0.mul(&inv)), c / &g))
                .collect(),
        };
        Ok((Content { coeff: g, monomial: m }, core))
    }

    /// Divides out the largest power `q^b` dividing `self`. A unit `q` gives `b = 0`.
    pub fn divide_out_max_power(&self, q: &LaurentPoly) -> Result<(LaurentPoly, u32), AlgebraError> {
        self.check_space(q)?;
        if q.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if q.is_unit() {
            return Ok((self.clone(), 0));
        }
        let mut core = self.clone();
        let mut b = 0;
        while let Some(next) = core.exact_div(q)? {
            core = next;
            b += 1;
        }
        Ok((core, b))
    }

    /// Exact rational value under a full assignment of the occurring variables.
    pub fn specialize(&self, values: &HashMap<VarId, BigRational>) -> Result<BigRational, AlgebraError> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for &(v, e) in m.0.exponents() {
                let x = values
                    .get(&v)
                    .ok_or_else(|| AlgebraError::MissingValue(self.space.name(v).to_string()))?;
                if e < 0 && x.is_zero() {
                    return Err(AlgebraError::ZeroDenominator(self.space.name(v).to_string()));
                }
                t *= x.pow(e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes `images[v]` for each variable `v` of this space; the images
    /// live in `target`. A negative power requires its image to be a unit.
    pub fn compose(&self, images: &[LaurentPoly], target: &Arc<VarSpace>) -> Result<LaurentPoly, AlgebraError> {
        self.compose_limited(images, target, usize::MAX)
    }

    /// [`compose`](Self::compose) that gives up with `SizeLimit` once a
    /// partial product or the accumulated sum exceeds `limit` terms.
    pub fn compose_limited(&self, images: &[LaurentPoly], target: &Arc<VarSpace>, limit: usize) -> Result<LaurentPoly, AlgebraError> {
        if images.len() != self.space.len() {
            return Err(AlgebraError::InvalidSpace(format!(
                "compose needs {} images, got {}",
                self.space.len(),
                images.len()
            )));
        }
        if images.iter().any(|p| !same_space(p.space(), target)) {
            return Err(AlgebraError::SpaceMismatch);
        }
        let mut cache: HashMap<(VarId, i32), LaurentPoly> = HashMap::new();
        let mut out: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::constant(target, c.clone());
            for &(v, e) in m.0.exponents() {
                let img = &images[v.index()];
                let factor = match cache.get(&(v, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = if e >= 0 {
                            img.pow_limited(e as u32, limit)?
                        } else {
                            let u = img
                                .as_unit()
                                .ok_or_else(|| AlgebraError::NotInvertible(self.space.name(v).to_string()))?;
                            LaurentPoly::from_unit(target, &u.inverse()).pow((-e) as u32)
                        };
                        cache.insert((v, e), f.clone());
                        f
                    }
                };
                t = t.mul_limited(&factor, limit)?;
            }
            for (tm, tc) in t.terms {
                *out.entry(tm.0).or_insert_with(BigInt::zero) += tc;
            }
            if out.len() > limit {
                return Err(AlgebraError::SizeLimit(out.len(), limit));
            }
        }
        Ok(LaurentPoly::from_map(target, out))
    }

    /// Renames variables into another space (a monomial map; no collapsing checks).
    pub fn map_vars(&self, target: &Arc<VarSpace>, f: impl Fn(VarId) -> VarId) -> LaurentPoly {
        LaurentPoly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| (m.0.map_vars(&f), c.clone())),
        )
    }

    /// Equality up to the units `±1` of the coefficient ring.
    pub fn eq_up_to_sign(&self, other: &LaurentPoly) -> bool {
        self == other || *self == -other
    }

    /// Reads the polynomial in another space containing all the variable
    /// names used here.
    pub fn reinterpret(&self, target: &Arc<VarSpace>) -> Result<LaurentPoly, AlgebraError> {
        let mut map = HashMap::new();
        for v in self.variables() {
            map.insert(v, target.require(self.space.name(v))?);
        }
        Ok(self.map_vars(target, |v| map[&v]))
    }
}

fn add_term(terms: &mut BTreeMap<Grlex, BigInt>, m: Grlex, c: BigInt) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Polynomial long division; both inputs have nonnegative exponents.
fn poly_div(p: &LaurentPoly, q: &LaurentPoly) -> Option<LaurentPoly> {
    if let Some(r) = packed::div(p, q) {
        return r;
    }
    let (lq_m, lq_c) = q.leading_term().expect("nonzero divisor");
    let lq_m = lq_m.clone();
    let lq_c = lq_c.clone();
    let rest: Vec<(Monomial, BigInt)> = q
        .terms
        .iter()
        .rev()
        .skip(1)
        .map(|(m, c)| (m.0.clone(), c.clone()))
        .collect();
    let mut rem = p.terms.clone();
    let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
    while let Some((lm, lc)) = rem.pop_last() {
        if !lm.0.divisible_by(&lq_m) {
            return None;
        }
        let (k, r) = lc.div_rem(&lq_c);
        if !r.is_zero() {
            return None;
        }
        let tm = lm.0.div(&lq_m);
        for (m, c) in &rest {
            add_term(&mut rem, Grlex(m.mul(&tm)), -(c * &k));
        }
        quot.push((tm, k));
    }
    Some(LaurentPoly {
        space: p.space.clone(),
        terms: quot.into_iter().map(|(m, c)| (Grlex(m), c)).collect(),
    })
}

fn write_term(f: &mut fmt::Formatter<'_>, space: &VarSpace, m: &Monomial, c: &BigInt, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
        (true, false) => {}
    }
    let mut need_star = false;
    if !abs.is_one() || m.is_one() {
        write!(f, "{abs}")?;
        need_star = true;
    }
    // Parameters first so coefficients read as `alpha*x1*x2`.
    let params = m.exponents().iter().filter(|&&(v, _)| space.is_parameter(v));
    let exch = m.exponents().iter().filter(|&&(v, _)| !space.is_parameter(v));
    for &(v, e) in params.chain(exch) {
        if need_star {
            f.write_str("*")?;
        }
        f.write_str(space.name(v))?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
        need_star = true;
    }
    Ok(())
}

/// Terms are printed from the leading term down, in the parser's grammar.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, &self.space, &m.0, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    space: Arc<VarSpace>,
    expr: String,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            space: self.space.clone(),
            expr: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        LaurentPoly::parse(&repr.expr, &repr.space).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$try(rhs).expect("operands live in different variable spaces")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> Arc<VarSpace> {
        VarSpace::builder()
            .exchange("x")
            .exchange("y")
            .exchange("z")
            .parameter("alpha")
            .parameter("beta")
            .build()
            .unwrap()
    }

    fn p(s: &Arc<VarSpace>, t: &str) -> LaurentPoly {
        LaurentPoly::parse(t, s).unwrap()
    }

    #[test]
    fn additive_inverse_and_unit_cancellation() {
        let s = space();
        assert!((p(&s, "x") + p(&s, "-x")).is_zero());
        assert!((p(&s, "x^-1") * p(&s, "x")).is_one());
        assert_eq!(p(&s, "x^2 + y") + p(&s, "y"), p(&s, "x^2 + 2*y"));
        assert_eq!(p(&s, "(x+y)*(x-y)"), p(&s, "x^2 - y^2"));
    }

    #[test]
    fn exact_division_examples() {
        let s = space();
        let q = p(&s, "x^2 - y^2").exact_div(&p(&s, "x + y")).unwrap();
        assert_eq!(q, Some(p(&s, "x - y")));
        let q = p(&s, "x + y").exact_div(&p(&s, "x")).unwrap();
        assert_eq!(q, Some(p(&s, "1 + x^-1*y")));
        assert_eq!(p(&s, "x + y").exact_div(&p(&s, "x + 2*y")).unwrap(), None);
        assert_eq!(
            p(&s, "x").exact_div(&LaurentPoly::zero(&s)),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn parameters_are_not_units() {
        let s = space();
        assert_eq!(p(&s, "x").exact_div(&p(&s, "alpha")).unwrap(), None);
        assert_eq!(
            p(&s, "alpha*x + alpha*y^2").exact_div(&p(&s, "alpha")).unwrap(),
            Some(p(&s, "x + y^2"))
        );
    }

    #[test]
    fn division_by_laurent_divisor() {
        let s = space();
        let a = p(&s, "x^-2*y + z^3");
        let b = p(&s, "y^-1 + x*z");
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b).unwrap(), Some(a));
    }

    #[test]
    fn substitution_examples() {
        let s = space();
        let x = s.index_of("x").unwrap();
        let z = s.index_of("z").unwrap();
        // y <- 1/y on x^2 y^3 + 1
        let f = p(&s, "x^2*y^3 + 1");
        let y = s.index_of("y").unwrap();
        assert_eq!(
            f.subst_inverse_ratio(y, &LaurentPoly::one(&s)).unwrap(),
            p(&s, "x^2*y^-3 + 1")
        );
        // z <- x^b / z on x^a z^c + y^b with a=1,b=2,c=3
        let g = p(&s, "x*z^3 + y^2");
        assert_eq!(
            g.subst_inverse_ratio(z, &p(&s, "x^2")).unwrap(),
            p(&s, "x^7*z^-3 + y^2")
        );
        assert_eq!(
            g.subst_inverse_ratio(z, &p(&s, "z + 1")),
            Err(AlgebraError::SelfReferentialSubstitution("z".into()))
        );
        assert_eq!(
            p(&s, "x^-1").subst_inverse_ratio(x, &p(&s, "y + 1")),
            Err(AlgebraError::NegativeExponent("x".into()))
        );
        assert_eq!(p(&s, "y + 3").subst_inverse_ratio(x, &p(&s, "y + 1")).unwrap(), p(&s, "y + 3"));
    }

    #[test]
    fn set_zero_examples() {
        let s = space();
        let x = s.index_of("x").unwrap();
        assert_eq!(p(&s, "x^2*y^3 + 1").set_zero(x).unwrap(), LaurentPoly::one(&s));
        assert_eq!(p(&s, "y + z").set_zero(x).unwrap(), p(&s, "y + z"));
        assert!(p(&s, "x^-1 + y").set_zero(x).is_err());
    }

    #[test]
    fn content_split_examples() {
        let s = VarSpace::builder()
            .exchange("xb")
            .exchange("xc")
            .exchange("xe")
            .exchange("xf")
            .exchange("xg")
            .parameter("alpha")
            .parameter("beta")
            .build()
            .unwrap();
        let g = p(&s, "alpha*beta*xe*xg*xf*xb^-1 + beta*xc*xe");
        let (l, core) = g.content_split().unwrap();
        assert_eq!(l.to_poly(&s), p(&s, "beta*xe*xb^-1"));
        assert_eq!(core, p(&s, "alpha*xg*xf + xb*xc"));

        let t = space();
        let (l, core) = p(&t, "2*x + 4*y").content_split().unwrap();
        assert_eq!(l.to_poly(&t), p(&t, "2"));
        assert_eq!(core, p(&t, "x + 2*y"));

        let (l, core) = p(&t, "-x - y").content_split().unwrap();
        assert_eq!(l.coeff, BigInt::from(-1));
        assert_eq!(core, p(&t, "x + y"));
    }

    #[test]
    fn max_power_examples() {
        let s = space();
        let q = p(&s, "x + y");
        let f = &(&q * &q) * &p(&s, "x - y");
        assert_eq!(f.divide_out_max_power(&q).unwrap(), (p(&s, "x - y"), 2));
        assert_eq!(f.divide_out_max_power(&LaurentPoly::one(&s)).unwrap(), (f.clone(), 0));
        assert_eq!(f.divide_out_max_power(&p(&s, "-x^2")).unwrap(), (f.clone(), 0));
        let g = p(&s, "x + 2*z");
        assert_eq!(g.divide_out_max_power(&q).unwrap(), (g.clone(), 0));
    }

    #[test]
    fn specialize_examples() {
        let s = space();
        let vals: HashMap<VarId, BigRational> = [(VarId(0), 2), (VarId(1), 3)]
            .into_iter()
            .map(|(v, k)| (v, BigRational::from_integer(k.into())))
            .collect();
        assert_eq!(p(&s, "x + y").specialize(&vals).unwrap(), BigRational::from_integer(5.into()));
        assert_eq!(
            p(&s, "x^-1").specialize(&vals).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert!(matches!(p(&s, "z").specialize(&vals), Err(AlgebraError::MissingValue(_))));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let s = space();
        for text in ["0", "1", "-x^-2*y + 3*alpha*z^4 - 7", "x*y*z - beta"] {
            let a = p(&s, text);
            assert_eq!(p(&s, &a.to_string()), a, "{text}");
        }
        assert_eq!(p(&s, "1 + x^-1*y").to_string(), "1 + x^-1*y");
    }

    #[test]
    fn serde_round_trip() {
        let s = space();
        let a = p(&s, "alpha*x^2*y^-1 - 5");
        let json = serde_json::to_string(&a).unwrap();
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = p(&space(), "x");
        let other = VarSpace::indexed("x", 1, &[]).unwrap();
        let b = LaurentPoly::parse("x1", &other).unwrap();
        assert_eq!(a.try_add(&b), Err(AlgebraError::SpaceMismatch));
    }
}

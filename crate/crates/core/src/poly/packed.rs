//! Kronecker-packed fast paths for multiplication and exact division.
//!
//! Exponent vectors inside a known box are encoded as mixed-radix `u64`
//! keys. Adding keys multiplies monomials as long as no digit overflows its
//! radix, and comparing keys is a lex monomial order. Coefficients use
//! `i128` when an a-priori bound (multiplication) or checked arithmetic
//! (division) allows it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::LaurentPoly;
use crate::error::AlgebraError;
use crate::monomial::{Grlex, Monomial};
use crate::space::VarId;

struct Layout {
    /// Exponent represented by digit zero.
    offset: Vec<i32>,
    radix: Vec<u64>,
    stride: Vec<u64>,
}

impl Layout {
    fn new(offset: Vec<i32>, span: &[i64]) -> Option<Layout> {
        let mut stride = Vec::with_capacity(span.len());
        let mut radix = Vec::with_capacity(span.len());
        let mut total: u64 = 1;
        for &s in span {
            let r = u64::try_from(s + 1).ok()?;
            stride.push(total);
            radix.push(r);
            total = total.checked_mul(r)?;
        }
        Some(Layout { offset, radix, stride })
    }

    /// Key of `m` with digits measured from `base` rather than the layout offset.
    fn pack_from(&self, m: &Monomial, base: &[i32]) -> u64 {
        let mut key = 0u64;
        let mut it = m.exponents().iter().peekable();
        for v in 0..base.len() {
            let e = match it.peek() {
                Some(&&(w, e)) if w.index() == v => {
                    it.next();
                    e
                }
                _ => 0,
            };
            key += (e - base[v]) as u64 * self.stride[v];
        }
        key
    }

    fn digit(&self, key: u64, v: usize) -> u64 {
        (key / self.stride[v]) % self.radix[v]
    }

    fn unpack(&self, key: u64) -> Monomial {
        Monomial::from_pairs(
            (0..self.offset.len()).map(|v| (VarId(v as u32), self.digit(key, v) as i32 + self.offset[v])),
        )
    }
}

/// Per-variable exponent range, widened to include zero.
fn bounds(p: &LaurentPoly, nvars: usize) -> (Vec<i32>, Vec<i32>) {
    let mut lo = vec![0; nvars];
    let mut hi = vec![0; nvars];
    for m in p.terms.keys() {
        for &(v, e) in m.0.exponents() {
            lo[v.index()] = lo[v.index()].min(e);
            hi[v.index()] = hi[v.index()].max(e);
        }
    }
    (lo, hi)
}

fn max_bits(p: &LaurentPoly) -> u64 {
    p.terms.values().map(|c| c.bits()).max().unwrap_or(0)
}

fn log2_ceil(n: usize) -> u64 {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as u64
}

/// Product of two nonzero polynomials, or `None` when the exponent box does
/// not fit in a `u64` key. Gives up once more than `limit` distinct
/// monomials have been accumulated.
pub(super) fn mul(a: &LaurentPoly, b: &LaurentPoly, limit: usize) -> Option<Result<LaurentPoly, AlgebraError>> {
    let nvars = a.space.len();
    let (alo, ahi) = bounds(a, nvars);
    let (blo, bhi) = bounds(b, nvars);
    let span: Vec<i64> = (0..nvars)
        .map(|v| (ahi[v] - alo[v]) as i64 + (bhi[v] - blo[v]) as i64)
        .collect();
    let offset: Vec<i32> = (0..nvars).map(|v| alo[v].checked_add(blo[v])).collect::<Option<_>>()?;
    let layout = Layout::new(offset, &span)?;
    let ka: Vec<u64> = a.terms.keys().map(|m| layout.pack_from(&m.0, &alo)).collect();
    let kb: Vec<u64> = b.terms.keys().map(|m| layout.pack_from(&m.0, &blo)).collect();
    // Squares only visit pairs i <= j; the cross terms count twice.
    let square = std::ptr::eq(a, b);
    let small = max_bits(a) + max_bits(b) + log2_ceil(a.len().min(b.len())) + 2 < 127;
    let terms: Vec<(Monomial, BigInt)> = if small {
        let ca: Vec<i128> = a.terms.values().map(|c| c.to_i128().unwrap()).collect();
        let cb: Vec<i128> = b.terms.values().map(|c| c.to_i128().unwrap()).collect();
        let mut acc: FxHashMap<u64, i128> = FxHashMap::default();
        acc.reserve((a.len() * b.len()).min(1 << 20));
        if square {
            for i in 0..ka.len() {
                if acc.len() > limit {
                    return Some(Err(AlgebraError::SizeLimit(acc.len(), limit)));
                }
                *acc.entry(ka[i] + ka[i]).or_insert(0) += ca[i] * ca[i];
                let twice = 2 * ca[i];
                for j in i + 1..ka.len() {
                    *acc.entry(ka[i] + ka[j]).or_insert(0) += twice * ca[j];
                }
            }
        } else {
            for (x, cx) in ka.iter().zip(&ca) {
                if acc.len() > limit {
                    return Some(Err(AlgebraError::SizeLimit(acc.len(), limit)));
                }
                for (y, cy) in kb.iter().zip(&cb) {
                    *acc.entry(x + y).or_insert(0) += cx * cy;
                }
            }
        }
        acc.into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(k, c)| (layout.unpack(k), BigInt::from(c)))
            .collect()
    } else {
        let ca: Vec<&BigInt> = a.terms.values().collect();
        let cb: Vec<&BigInt> = b.terms.values().collect();
        let mut acc: FxHashMap<u64, BigInt> = FxHashMap::default();
        for (x, cx) in ka.iter().zip(&ca) {
            if acc.len() > limit {
                return Some(Err(AlgebraError::SizeLimit(acc.len(), limit)));
            }
            for (y, cy) in kb.iter().zip(&cb) {
                let c = *cx * *cy;
                match acc.get_mut(&(x + y)) {
                    Some(s) => *s += c,
                    None => {
                        acc.insert(x + y, c);
                    }
                }
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (layout.unpack(k), c))
            .collect()
    };
    Some(Ok(LaurentPoly {
        space: a.space.clone(),
        terms: terms.into_iter().map(|(m, c)| (Grlex(m), c)).collect(),
    }))
}

trait Coeff: Clone + Sized {
    fn zero() -> Self;
    fn from_big(c: &BigInt) -> Option<Self>;
    fn into_big(self) -> BigInt;
    fn vanishes(&self) -> bool;
    /// `self - a * b`, or `None` on overflow.
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self>;
    /// Exact quotient, or `Some(None)` when `d` does not divide `self`.
    fn div_exact(&self, d: &Self) -> Option<Option<Self>>;
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(c: &BigInt) -> Option<Self> {
        c.to_i128()
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(a.checked_mul(*b)?)
    }
    fn div_exact(&self, d: &Self) -> Option<Option<Self>> {
        if self.checked_rem(*d)? != 0 {
            return Some(None);
        }
        Some(Some(self.checked_div(*d)?))
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn from_big(c: &BigInt) -> Option<Self> {
        Some(c.clone())
    }
    fn into_big(self) -> BigInt {
        self
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self - a * b)
    }
    fn div_exact(&self, d: &Self) -> Option<Option<Self>> {
        let (q, r) = self.div_rem(d);
        Some(r.is_zero().then_some(q))
    }
}

/// Exact division of polynomials (no negative exponents). The outer `None`
/// means the packed path does not apply; the inner one means `q` does not
/// divide `p`.
pub(super) fn div(p: &LaurentPoly, q: &LaurentPoly) -> Option<Option<LaurentPoly>> {
    let nvars = p.space.len();
    let (_, phi) = bounds(p, nvars);
    let (_, qhi) = bounds(q, nvars);
    if (0..nvars).any(|v| qhi[v] > phi[v]) {
        return Some(None);
    }
    let span: Vec<i64> = phi.iter().map(|&e| e as i64).collect();
    let layout = Layout::new(vec![0; nvars], &span)?;
    let zero = vec![0; nvars];
    // The quotient's degree in each variable is the difference of degrees.
    let qmax: Vec<u64> = (0..nvars).map(|v| (phi[v] - qhi[v]) as u64).collect();
    let pk: Vec<(u64, &BigInt)> = p.terms.iter().map(|(m, c)| (layout.pack_from(&m.0, &zero), c)).collect();
    let qk: Vec<(u64, &BigInt)> = q.terms.iter().map(|(m, c)| (layout.pack_from(&m.0, &zero), c)).collect();
    let out = match div_with::<i128>(&layout, &pk, &qk, &qmax) {
        Some(r) => r,
        None => div_with::<BigInt>(&layout, &pk, &qk, &qmax)?,
    };
    Some(out.map(|terms| LaurentPoly {
        space: p.space.clone(),
        terms: terms.into_iter().map(|(k, c)| (Grlex(layout.unpack(k)), c)).collect(),
    }))
}

/// Division with a heap over the non-leading divisor terms: row `i` yields
/// `quot[j] * q[i]` for successive `j`, so the heap never holds more than
/// `|q| - 1` entries. Rows that have caught up with the quotient wait for
/// its next term. `None` on coefficient overflow.
#[allow(clippy::type_complexity)]
fn div_with<C: Coeff>(
    layout: &Layout,
    p: &[(u64, &BigInt)],
    q: &[(u64, &BigInt)],
    qmax: &[u64],
) -> Option<Option<Vec<(u64, BigInt)>>> {
    let mut ps: Vec<(u64, C)> = p.iter().map(|&(k, c)| Some((k, C::from_big(c)?))).collect::<Option<_>>()?;
    ps.sort_unstable_by_key(|t| Reverse(t.0));
    let mut qs: Vec<(u64, C)> = q.iter().map(|&(k, c)| Some((k, C::from_big(c)?))).collect::<Option<_>>()?;
    qs.sort_unstable_by_key(|t| Reverse(t.0));
    let (lead, lc) = qs[0].clone();
    let mut next = vec![0usize; qs.len()];
    let mut waiting: Vec<usize> = (1..qs.len()).collect();
    let mut heap: BinaryHeap<(u64, usize)> = BinaryHeap::with_capacity(qs.len());
    let mut quot: Vec<(u64, C)> = Vec::new();
    let mut k = 0;
    loop {
        let m = match (ps.get(k), heap.peek()) {
            (None, None) => break,
            (Some(&(a, _)), None) => a,
            (None, Some(&(b, _))) => b,
            (Some(&(a, _)), Some(&(b, _))) => a.max(b),
        };
        let mut c = C::zero();
        if ps.get(k).is_some_and(|&(a, _)| a == m) {
            c = ps[k].1.clone();
            k += 1;
        }
        while heap.peek().is_some_and(|&(b, _)| b == m) {
            let (_, i) = heap.pop().unwrap();
            c = c.sub_mul(&quot[next[i]].1, &qs[i].1)?;
            next[i] += 1;
            match quot.get(next[i]) {
                Some((t, _)) => heap.push((t + qs[i].0, i)),
                None => waiting.push(i),
            }
        }
        if c.vanishes() {
            continue;
        }
        for v in 0..qmax.len() {
            let (dm, dl) = (layout.digit(m, v), layout.digit(lead, v));
            if dm < dl || dm - dl > qmax[v] {
                return Some(None);
            }
        }
        let Some(t) = c.div_exact(&lc)? else {
            return Some(None);
        };
        let tk = m - lead;
        quot.push((tk, t));
        for i in waiting.drain(..) {
            heap.push((tk + qs[i].0, i));
        }
    }
    Some(Some(quot.into_iter().map(|(k, c)| (k, c.into_big())).collect()))
}

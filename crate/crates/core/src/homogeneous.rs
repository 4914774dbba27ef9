//! Homogeneous exchange patterns: one exchange polynomial `P_i` per label,
//! and the birational involutions `F_i : x_i <- P_i / x_i`.
//!
//! Variables other than the pattern's `x_1 .. x_n` are coefficients. Those
//! with the exchange role (such as `lambda`, `mu`) are treated as invertible
//! coefficients; those with the parameter role are not.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coprime::{coprime_probable, CoprimeVerdict};
use crate::error::AlgebraError;
use crate::poly::LaurentPoly;
use crate::space::{VarId, VarSpace};

/// Default cap on the number of terms of one coordinate during word
/// evaluation.
pub const DEFAULT_TERM_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogeneousError {
    #[error("pattern needs at least one variable")]
    Empty,
    #[error("expected {expected} polynomials, got {got}")]
    Count { expected: usize, got: usize },
    #[error("P_{0} is zero")]
    Zero(usize),
    #[error("P_{0} has a negative exponent in a pattern variable")]
    NotPolynomial(usize),
    #[error("word letter {0} is outside 1..={1}")]
    BadLetter(usize, usize),
    #[error("point has {got} coordinates, expected {expected}")]
    BadPoint { expected: usize, got: usize },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid family parameters: {0}")]
    BadParameters(String),
    #[error("coefficient `{0}` has no numeric value")]
    UnboundCoefficient(String),
    #[error("division by a zero coordinate at word position {0}")]
    ZeroCoordinate(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousPattern {
    pub name: String,
    vars: Vec<VarId>,
    polys: Vec<LaurentPoly>,
}

/// Coordinates of a point of the iteration, as Laurent polynomials in the
/// starting variables.
pub type SymbolicPoint = Vec<LaurentPoly>;

impl HomogeneousPattern {
    /// `vars` are the pattern variables `x_1 .. x_n` in order; `polys[k]` is
    /// `P_{k+1}`. Checks only the structural part of hom1.
    pub fn new(name: &str, vars: Vec<VarId>, polys: Vec<LaurentPoly>) -> Result<Self, HomogeneousError> {
        if vars.is_empty() {
            return Err(HomogeneousError::Empty);
        }
        if polys.len() != vars.len() {
            return Err(HomogeneousError::Count {
                expected: vars.len(),
                got: polys.len(),
            });
        }
        for (k, p) in polys.iter().enumerate() {
            if p.is_zero() {
                return Err(HomogeneousError::Zero(k + 1));
            }
            if vars.iter().any(|&v| p.degree_range(v).0 < 0) {
                return Err(HomogeneousError::NotPolynomial(k + 1));
            }
        }
        Ok(HomogeneousPattern {
            name: name.to_string(),
            vars,
            polys,
        })
    }

    /// Parses `P_1 .. P_n` over `x1 .. xn`, with `params` as non-invertible
    /// coefficients and `units` as invertible ones.
    pub fn parse(name: &str, polys: &[&str], params: &[&str], units: &[&str]) -> Result<Self, HomogeneousError> {
        let n = polys.len();
        let mut b = VarSpace::builder();
        for i in 1..=n {
            b = b.exchange(format!("x{i}"));
        }
        for u in units {
            b = b.exchange(*u);
        }
        for p in params {
            b = b.parameter(*p);
        }
        let space = b.build()?;
        let vars = (1..=n).map(|i| space.index_of(&format!("x{i}")).expect("declared")).collect();
        let polys = polys
            .iter()
            .map(|t| LaurentPoly::parse(t, &space))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, vars, polys)
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        self.polys[0].space()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    /// `P_i`, 1-based.
    pub fn p(&self, i: usize) -> &LaurentPoly {
        &self.polys[i - 1]
    }

    /// `P_{ji} = P_j |_{x_i = 0}`.
    pub fn p_ji(&self, j: usize, i: usize) -> Result<LaurentPoly, AlgebraError> {
        self.p(j).set_zero(self.vars[i - 1])
    }

    /// Substitutes integers for the named coefficients.
    pub fn bind(&self, bindings: &BTreeMap<String, i64>) -> Result<Self, HomogeneousError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let space = self.space();
        let images: Vec<LaurentPoly> = space
            .ids()
            .map(|v| match bindings.get(space.name(v)) {
                Some(&c) if !self.vars.contains(&v) => LaurentPoly::constant(space, c),
                _ => LaurentPoly::var(space, v),
            })
            .collect();
        let polys = self
            .polys
            .iter()
            .map(|p| p.compose(&images, space))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&self.name, self.vars.clone(), polys)
    }

    pub fn identity_point(&self) -> SymbolicPoint {
        self.vars.iter().map(|&v| LaurentPoly::var(self.space(), v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hom1Check {
    pub k: usize,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hom2Check {
    pub j: usize,
    pub i: usize,
    pub p_ji: LaurentPoly,
    pub verdict: Option<CoprimeVerdict>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hom3Check {
    pub j: usize,
    pub i: usize,
    pub p_ji: LaurentPoly,
    /// The Laurent monomial `L`, when the quotient is one.
    pub l: Option<LaurentPoly>,
    pub b: u32,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub pattern: String,
    pub hom1: Vec<Hom1Check>,
    pub hom2: Vec<Hom2Check>,
    pub hom3: Vec<Hom3Check>,
    pub pass: bool,
    /// How coefficients of `L` were judged.
    pub coefficient_ring: String,
}

/// hom1 exactly, hom2 by randomized coprimality, hom3 exactly.
pub fn check_homogeneous(pattern: &HomogeneousPattern, seed: u64, trials: u32) -> Result<HomReport, HomogeneousError> {
    let n = pattern.n();
    let space = pattern.space().clone();
    let mut hom1 = Vec::new();
    for k in 1..=n {
        let p = pattern.p(k);
        let detail = if p.depends_on(pattern.vars[k - 1]) {
            Some(format!("P_{k} depends on x_{k}"))
        } else {
            let m = p.min_monomial();
            pattern
                .vars
                .iter()
                .position(|&v| m.exponent(v) > 0)
                .map(|i| format!("P_{k} is divisible by x_{}", i + 1))
        };
        hom1.push(Hom1Check {
            k,
            pass: detail.is_none(),
            detail,
        });
    }

    let mut hom2 = Vec::new();
    let mut hom3 = Vec::new();
    let mut salt = 0u64;
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let p_ji = pattern.p_ji(j, i)?;
            let p_i = pattern.p(i);
            let verdict = if p_ji.is_zero() {
                None
            } else {
                salt += 1;
                Some(coprime_probable(&p_ji, p_i, seed.wrapping_add(salt), trials)?)
            };
            hom2.push(Hom2Check {
                j,
                i,
                p_ji: p_ji.clone(),
                pass: verdict.as_ref().is_some_and(CoprimeVerdict::is_coprime),
                verdict,
            });
            salt += 1;
            hom3.push(hom3_check(pattern, j, i, &p_ji, &space, seed.wrapping_add(salt), trials)?);
        }
    }
    let pass = hom1.iter().all(|c| c.pass) && hom2.iter().all(|c| c.pass) && hom3.iter().all(|c| c.pass);
    Ok(HomReport {
        pattern: pattern.name.clone(),
        hom1,
        hom2,
        hom3,
        pass,
        coefficient_ring: "integers and parameter monomials; exchange-role coefficients such as lambda, mu count as units".into(),
    })
}

fn hom3_check(
    pattern: &HomogeneousPattern,
    j: usize,
    i: usize,
    p_ji: &LaurentPoly,
    space: &Arc<VarSpace>,
    seed: u64,
    trials: u32,
) -> Result<Hom3Check, HomogeneousError> {
    let fail = |detail: String| Hom3Check {
        j,
        i,
        p_ji: p_ji.clone(),
        l: None,
        b: 0,
        pass: false,
        detail: Some(detail),
    };
    if p_ji.is_zero() {
        return Ok(fail(format!("P_{j}{i} is zero")));
    }
    let xj = pattern.vars[j - 1];
    if p_ji.depends_on(xj) {
        return Ok(fail(format!("P_{j}{i} depends on x_{j}")));
    }
    let p_i = pattern.p(i);
    let substituted = p_i.subst_inverse_ratio(xj, p_ji)?;
    // Take the largest b that leaves L * P_i. When P_ji and P_i share a
    // factor the maximal power can swallow P_i itself, so step b down.
    let (rest, b_max) = substituted.divide_out_max_power(p_ji)?;
    let mut found = None;
    let mut cofactor = rest;
    for b in (0..=b_max).rev() {
        if let Some(l) = cofactor.exact_div(p_i)? {
            let single = l.len() == 1;
            if found.is_none() || single {
                found = Some((l, b));
            }
            if single {
                break;
            }
        }
        cofactor = cofactor.try_mul(p_ji)?;
    }
    let Some((l, b)) = found else {
        return Ok(fail(format!("P_{i} does not divide the substituted polynomial")));
    };
    if l.len() != 1 {
        return Ok(Hom3Check {
            l: Some(l),
            b,
            ..fail("quotient is not a Laurent monomial".into())
        });
    }
    let (content, _) = l.content_split()?;
    let (c, m) = content.scalar_part(space);
    let scalar = LaurentPoly::monomial(space, c, m);
    let verdict = coprime_probable(&scalar, p_i, seed, trials)?;
    let pass = verdict.is_coprime();
    Ok(Hom3Check {
        j,
        i,
        p_ji: p_ji.clone(),
        l: Some(l),
        b,
        pass,
        detail: (!pass).then(|| "coefficient of L shares a factor with P_i".to_string()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordOutcome {
    Laurent {
        point: SymbolicPoint,
    },
    NotLaurent {
        /// Position in the word, 0-based from the left.
        position: usize,
        numerator: LaurentPoly,
        denominator: LaurentPoly,
    },
}

impl WordOutcome {
    pub fn point(&self) -> Option<&SymbolicPoint> {
        match self {
            WordOutcome::Laurent { point } => Some(point),
            WordOutcome::NotLaurent { .. } => None,
        }
    }
}

/// `F_{w_1} ∘ ... ∘ F_{w_m}` applied to `start`; the rightmost letter acts
/// first.
pub fn apply_word(pattern: &HomogeneousPattern, word: &[usize], start: &[LaurentPoly]) -> Result<WordOutcome, HomogeneousError> {
    apply_word_limited(pattern, word, start, DEFAULT_TERM_LIMIT)
}

pub fn apply_word_limited(
    pattern: &HomogeneousPattern,
    word: &[usize],
    start: &[LaurentPoly],
    limit: usize,
) -> Result<WordOutcome, HomogeneousError> {
    let n = pattern.n();
    if start.len() != n {
        return Err(HomogeneousError::BadPoint {
            expected: n,
            got: start.len(),
        });
    }
    if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > n) {
        return Err(HomogeneousError::BadLetter(bad, n));
    }
    let target = start[0].space().clone();
    let source = pattern.space();
    let mut point: SymbolicPoint = start.to_vec();
    for (pos, &i) in word.iter().enumerate().rev() {
        let images: Vec<LaurentPoly> = source
            .ids()
            .map(|v| match pattern.vars.iter().position(|&x| x == v) {
                Some(k) => Ok(point[k].clone()),
                None => Ok(LaurentPoly::var(&target, target.require(source.name(v))?)),
            })
            .collect::<Result<_, AlgebraError>>()?;
        let numerator = pattern.p(i).compose_limited(&images, &target, limit)?;
        match numerator.exact_div(&point[i - 1])? {
            Some(v) => point[i - 1] = v,
            None => {
                return Ok(WordOutcome::NotLaurent {
                    position: pos,
                    numerator,
                    denominator: point[i - 1].clone(),
                })
            }
        }
    }
    Ok(WordOutcome::Laurent { point })
}

/// Exact-rational counterpart of [`apply_word`]. `coefficients` must give a
/// value to every variable of the pattern's space other than `x_1 .. x_n`.
pub fn apply_word_numeric(
    pattern: &HomogeneousPattern,
    word: &[usize],
    start: &[BigRational],
    coefficients: &BTreeMap<String, BigRational>,
) -> Result<Vec<BigRational>, HomogeneousError> {
    let n = pattern.n();
    if start.len() != n {
        return Err(HomogeneousError::BadPoint {
            expected: n,
            got: start.len(),
        });
    }
    if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > n) {
        return Err(HomogeneousError::BadLetter(bad, n));
    }
    let space = pattern.space();
    let mut assignment = HashMap::new();
    for v in space.ids().filter(|v| !pattern.vars.contains(v)) {
        let name = space.name(v);
        let c = coefficients
            .get(name)
            .ok_or_else(|| HomogeneousError::UnboundCoefficient(name.to_string()))?;
        assignment.insert(v, c.clone());
    }
    let mut point = start.to_vec();
    for (pos, &i) in word.iter().enumerate().rev() {
        for (k, &v) in pattern.vars.iter().enumerate() {
            assignment.insert(v, point[k].clone());
        }
        if point[i - 1].is_zero() {
            return Err(HomogeneousError::ZeroCoordinate(pos));
        }
        point[i - 1] = pattern.p(i).specialize(&assignment)? / &point[i - 1];
    }
    Ok(point)
}

/// The first `count` reduced words over `1..=n` (no letter repeated
/// consecutively), shortest first, each length in lexicographic order. A
/// word lists the maps outermost first, so `word[1..]` is its parent.
pub fn reduced_words(n: usize, count: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    while out.len() < count && !layer.is_empty() {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=n {
                if w.first() != Some(&i) {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(i);
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.truncate(count);
    out
}

/// The sequence produced by applying `F_first, F_{first+1}, ...` cyclically
/// to the identity point, recording each new coordinate.
pub fn sequence(pattern: &HomogeneousPattern, first: usize, count: usize) -> Result<Vec<WordOutcome>, HomogeneousError> {
    let n = pattern.n();
    let mut point = pattern.identity_point();
    let mut out = Vec::new();
    for step in 0..count {
        let i = (first - 1 + step) % n + 1;
        match apply_word(pattern, &[i], &point)? {
            WordOutcome::Laurent { point: p } => {
                point = p;
                out.push(WordOutcome::Laurent { point: point.clone() });
            }
            other => {
                out.push(other);
                break;
            }
        }
    }
    Ok(out)
}

/// `x1^2 + ... + xn^2 + sum_{i<j} a{i}_{j} x_i x_j` restricted to `x_i = 0`.
pub fn quadratic(n: usize) -> Result<HomogeneousPattern, HomogeneousError> {
    if n < 2 {
        return Err(HomogeneousError::BadParameters("quadratic needs n >= 2".into()));
    }
    let mut terms: Vec<String> = (1..=n).map(|i| format!("x{i}^2")).collect();
    let mut params = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            params.push(format!("a{i}_{j}"));
            terms.push(format!("a{i}_{j}*x{i}*x{j}"));
        }
    }
    let full = terms.join(" + ");
    let params: Vec<&str> = params.iter().map(String::as_str).collect();
    let base = HomogeneousPattern::parse("quadratic", &vec![full.as_str(); n], &params, &[])?;
    let polys = (1..=n)
        .map(|i| base.p(i).set_zero(base.vars[i - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    HomogeneousPattern::new(&format!("quadratic(n={n})"), base.vars.clone(), polys)
}

/// A monic palindromic polynomial of degree `d` in `var`, coefficients
/// `{coef}1, {coef}2, ...`; the middle coefficient of even degree occurs
/// once.
fn palindromic_text(d: u32, var: &str, coef: &str) -> (String, Vec<String>) {
    let mut terms = vec!["1".to_string(), format!("({var})^{d}")];
    let mut params = Vec::new();
    for k in 1..=d / 2 {
        let name = format!("{coef}{k}");
        if 2 * k == d {
            terms.push(format!("{name}*({var})^{k}"));
        } else {
            terms.push(format!("{name}*(({var})^{k} + ({var})^{})", d - k));
        }
        params.push(name);
    }
    (terms.join(" + "), params)
}

/// `P_1 = mu^2 P(x2/lambda)`, `P_2 = lambda^2 Q(x1/mu)` with `P`, `Q` monic
/// palindromic of degrees `d`, `e`.
pub fn palindromic(d: u32, e: u32) -> Result<HomogeneousPattern, HomogeneousError> {
    if d == 0 || e == 0 {
        return Err(HomogeneousError::BadParameters("degrees must be at least 1".into()));
    }
    let (p, mut params) = palindromic_text(d, "x2*lambda^-1", "alpha");
    let (q, qp) = palindromic_text(e, "x1*mu^-1", "beta");
    params.extend(qp);
    let params: Vec<&str> = params.iter().map(String::as_str).collect();
    HomogeneousPattern::parse(
        &format!("palindromic(d={d},e={e})"),
        &[&format!("mu^2*({p})"), &format!("lambda^2*({q})")],
        &params,
        &["lambda", "mu"],
    )
}

/// `y_k = (y_{k-1}^2 + c y_{k-1} + d) / y_{k-2}`.
pub fn seq54() -> Result<HomogeneousPattern, HomogeneousError> {
    HomogeneousPattern::parse("seq54", &["x2^2 + c*x2 + d", "x1^2 + c*x1 + d"], &["c", "d"], &[])
}

pub fn trinomial() -> Result<HomogeneousPattern, HomogeneousError> {
    HomogeneousPattern::parse(
        "trinomial",
        &["x2 + x3^2 + x2^2*x3", "x1 + x3", "x2 + x1^2 + x2^2*x1"],
        &[],
        &[],
    )
}

/// Built-in family by name. `args` supplies `n` for `quadratic` and `d`,
/// `e` for `palindromic`.
pub fn builtin_family(name: &str, args: &[u32]) -> Result<HomogeneousPattern, HomogeneousError> {
    let arg = |k: usize, default: u32| args.get(k).copied().unwrap_or(default);
    match name {
        "quadratic" => quadratic(arg(0, 3) as usize),
        "palindromic" => palindromic(arg(0, 2), arg(1, 2)),
        "seq54" => seq54(),
        "trinomial" => trinomial(),
        _ => Err(HomogeneousError::UnknownFamily(name.to_string())),
    }
}

pub const FAMILIES: &[&str] = &["quadratic", "palindromic", "seq54", "trinomial"];

impl fmt::Display for HomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "homogeneous pattern {}", self.pattern)?;
        for c in &self.hom1 {
            writeln!(f, "hom1 P_{}: {}", c.k, if c.pass { "ok" } else { c.detail.as_deref().unwrap_or("fail") })?;
        }
        for c in &self.hom2 {
            let v = match &c.verdict {
                Some(CoprimeVerdict::CoprimeProbable) => "coprime (probable)".to_string(),
                Some(CoprimeVerdict::CommonFactorSuspected { reason }) => format!("common factor suspected: {reason}"),
                None => "P_ji is zero".to_string(),
            };
            writeln!(f, "hom2 (j={}, i={}): P_ji = {}; {}", c.j, c.i, c.p_ji, v)?;
        }
        for c in &self.hom3 {
            let l = c.l.as_ref().map(ToString::to_string).unwrap_or_else(|| "-".into());
            write!(f, "hom3 (j={}, i={}): L = {}, b = {}", c.j, c.i, l, c.b)?;
            match &c.detail {
                Some(d) => writeln!(f, "; {d}")?,
                None => writeln!(f)?,
            }
        }
        writeln!(f, "coefficient ring: {}", self.coefficient_ring)?;
        write!(f, "verdict: {}", if self.pass { "pass" } else { "fail" })
    }
}

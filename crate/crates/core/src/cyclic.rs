//! The G-sequence test for one-dimensional recurrences
//! `y_{m+n} y_m = F(y_{m+1}, ..., y_{m+n-1})`.
//!
//! Starting from `G_{n-1} = F`, each step substitutes `x_m <- Q_m / x_m`,
//! strips the content and divides out the largest power of `Q_m`. The test
//! passes when the loop returns to `G_0 = F` (up to sign) and the side
//! conditions hold.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coprime::{coprime_probable, CoprimeVerdict};
use crate::error::AlgebraError;
use crate::exchange::{Edge, ExchangePattern, PatternError};
use crate::poly::{Content, LaurentPoly};
use crate::space::{VarId, VarSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("window length n must be at least 2, got {0}")]
    WindowTooShort(usize),
    #[error("F is zero")]
    ZeroF,
    #[error("F depends on x_n")]
    DependsOnLast,
    #[error("F has a negative exponent")]
    NotPolynomial,
    #[error("cluster variables must be {0} distinct exchange variables")]
    BadVariables(usize),
    #[error("the G-sequence did not complete: {0}")]
    Incomplete(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// `F` in `x_1 .. x_{n-1}` together with the window length `n`.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicSpec {
    n: usize,
    vars: Vec<VarId>,
    f: LaurentPoly,
}

impl CyclicSpec {
    pub fn new(f: LaurentPoly, vars: Vec<VarId>) -> Result<Self, CyclicError> {
        let n = vars.len();
        if n < 2 {
            return Err(CyclicError::WindowTooShort(n));
        }
        let space = f.space().clone();
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n || vars.iter().any(|&v| v.index() >= space.len() || space.is_parameter(v)) {
            return Err(CyclicError::BadVariables(n));
        }
        if f.is_zero() {
            return Err(CyclicError::ZeroF);
        }
        if !f.is_polynomial() {
            return Err(CyclicError::NotPolynomial);
        }
        if f.depends_on(vars[n - 1]) {
            return Err(CyclicError::DependsOnLast);
        }
        Ok(CyclicSpec { n, vars, f })
    }

    /// Builds the space `x1 .. xn, params...` and parses `F` in it.
    pub fn parse(n: usize, f: &str, params: &[&str]) -> Result<Self, CyclicError> {
        let space = VarSpace::indexed("x", n, params)?;
        let f = LaurentPoly::parse(f, &space)?;
        let vars = (0..n as u32).map(VarId).collect();
        CyclicSpec::new(f, vars)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &LaurentPoly {
        &self.f
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        self.f.space()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    /// `x_i` for `i` in `1..=n`.
    pub fn x(&self, i: usize) -> VarId {
        self.vars[i - 1]
    }

    /// `<m>`: the representative of `m` modulo `n` in `1..=n`.
    pub fn rem(&self, m: i64) -> usize {
        (m - 1).rem_euclid(self.n as i64) as usize + 1
    }

    /// `p` with `x_i -> x_{<shift + i>}`.
    pub fn shift(&self, p: &LaurentPoly, shift: i64) -> LaurentPoly {
        let space = self.space().clone();
        let pos: Vec<Option<usize>> = space
            .ids()
            .map(|v| self.vars.iter().position(|&w| w == v))
            .collect();
        p.map_vars(&space, |v| match pos[v.index()] {
            Some(i) => self.x(self.rem(shift + i as i64 + 1)),
            None => v,
        })
    }

    /// `F_m = F(x_{<m+1>}, ..., x_{<m-1>})`.
    pub fn f_m(&self, m: i64) -> LaurentPoly {
        self.shift(&self.f, m)
    }

    /// `Q_m = F_m |_{x_n <- 0}`.
    pub fn q_m(&self, m: i64) -> LaurentPoly {
        self.f_m(m)
            .set_zero(self.x(self.n))
            .expect("F is a polynomial")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    /// Holds with high probability (randomized coprimality).
    Probable,
    /// Unit `Q_m`: irreducibility is not meaningful and is waived.
    Vacuous,
    /// Not certified by the heuristic; taken as a hypothesis.
    Assumed,
    Fail,
}

impl CheckStatus {
    pub fn ok(self) -> bool {
        self != CheckStatus::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GStep {
    pub m: usize,
    pub q: LaurentPoly,
    pub g_tilde: LaurentPoly,
    pub content: Content,
    pub g_approx: LaurentPoly,
    pub b: u32,
    pub g: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCheck {
    pub m: usize,
    pub status: CheckStatus,
    pub method: String,
    /// `gcd(G_{m-1}, Q_m)`, the downstream GEP2 requirement.
    pub coprime: Option<CoprimeVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSequenceCertificate {
    pub n: usize,
    pub f: LaurentPoly,
    pub steps: Vec<GStep>,
    pub g0: Option<LaurentPoly>,
    pub gep1a: CheckStatus,
    pub gep1a_detail: Option<String>,
    pub gep2a: Vec<IrreducibilityCheck>,
    pub gep3a: CheckStatus,
    pub verdict: Verdict,
    /// First failing step with the offending polynomials.
    pub failure: Option<String>,
}

impl GSequenceCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// `G_m` for `m` in `0..n`, where available.
    pub fn g(&self, m: usize) -> Option<&LaurentPoly> {
        if m + 1 == self.n {
            return Some(&self.f);
        }
        self.steps.iter().find(|s| s.m == m + 1).map(|s| &s.g)
    }

    pub fn step(&self, m: usize) -> Option<&GStep> {
        self.steps.iter().find(|s| s.m == m)
    }
}

/// Runs the G-loop and records the full trace. Side conditions are left
/// unevaluated; see [`verify_cyclic`].
pub fn build_g_sequence(spec: &CyclicSpec) -> Result<GSequenceCertificate, CyclicError> {
    let n = spec.n;
    let mut steps = Vec::with_capacity(n - 1);
    let mut g = spec.f.clone();
    let mut failure = None;
    for m in (1..n).rev() {
        let q = spec.q_m(m as i64);
        if q.is_zero() {
            failure = Some(format!("Q_{m} = 0 (F is divisible by a variable)"));
            break;
        }
        let g_tilde = g.subst_inverse_ratio(spec.x(m), &q)?;
        let (content, g_approx) = g_tilde.content_split()?;
        let (next, b) = g_approx.divide_out_max_power(&q)?;
        steps.push(GStep {
            m,
            q,
            g_tilde,
            content,
            g_approx,
            b,
            g: next.clone(),
        });
        g = next;
    }
    let complete = failure.is_none();
    Ok(GSequenceCertificate {
        n,
        f: spec.f.clone(),
        steps,
        g0: complete.then_some(g),
        gep1a: CheckStatus::Assumed,
        gep1a_detail: None,
        gep2a: Vec::new(),
        gep3a: CheckStatus::Assumed,
        verdict: Verdict::Inconclusive,
        failure,
    })
}

/// The G-sequence plus checks of GEP1a (exact), GEP2a (heuristic) and
/// GEP3a (exact, up to sign).
pub fn verify_cyclic(spec: &CyclicSpec, seed: u64, trials: u32) -> Result<GSequenceCertificate, CyclicError> {
    let mut cert = build_g_sequence(spec)?;
    let space = spec.space().clone();

    let divisor = (1..spec.n)
        .map(|i| spec.x(i))
        .find(|&v| spec.f.degree_range(v).0 > 0);
    cert.gep1a = match divisor {
        Some(v) => {
            cert.gep1a_detail = Some(format!("F is divisible by {}", space.name(v)));
            CheckStatus::Fail
        }
        None => CheckStatus::Pass,
    };

    for (k, step) in cert.steps.iter().enumerate() {
        let (status, method) = irreducible_heuristic(&step.q);
        let coprime = if step.q.is_unit() {
            None
        } else {
            Some(coprime_probable(&step.g, &step.q, seed.wrapping_add(k as u64), trials)?)
        };
        let status = match (&coprime, status) {
            (Some(v), _) if !v.is_coprime() => CheckStatus::Fail,
            (_, s) => s,
        };
        cert.gep2a.push(IrreducibilityCheck {
            m: step.m,
            status,
            method,
            coprime,
        });
    }

    cert.gep3a = match &cert.g0 {
        Some(g0) if g0.eq_up_to_sign(&spec.f) => CheckStatus::Pass,
        _ => CheckStatus::Fail,
    };

    let ok = cert.gep1a.ok() && cert.gep2a.iter().all(|c| c.status.ok()) && cert.gep3a.ok();
    cert.verdict = if ok { Verdict::Pass } else { Verdict::Inconclusive };
    if !ok && cert.failure.is_none() {
        cert.failure = Some(first_failure(&cert, &space));
    }
    Ok(cert)
}

fn first_failure(cert: &GSequenceCertificate, space: &VarSpace) -> String {
    if let Some(d) = &cert.gep1a_detail {
        return format!("GEP1a: {d}");
    }
    if let Some(c) = cert.gep2a.iter().find(|c| !c.status.ok()) {
        let step = cert.steps.iter().find(|s| s.m == c.m).expect("step recorded");
        return format!(
            "GEP2a at m = {}: Q = {}, G = {} ({})",
            c.m, step.q, step.g, c.method
        );
    }
    let g0 = cert.g0.as_ref().map(ToString::to_string).unwrap_or_default();
    let mut msg = format!("GEP3a: G_0 = {g0} differs from F = {}", cert.f);
    if space.parameter_ids().next().is_some() {
        msg.push_str("; content computation incomplete (non-monomial content in the parameters is not detected)");
    }
    msg
}

/// Irreducibility of `Q` in `A[x^{±1}]`, decided only in easy cases.
pub fn irreducible_heuristic(q: &LaurentPoly) -> (CheckStatus, String) {
    let space = q.space();
    if q.is_unit() {
        return (CheckStatus::Vacuous, "unit".into());
    }
    if q.len() == 1 {
        let (m, c) = q.leading_term().expect("one term");
        let pdeg: i64 = m
            .exponents()
            .iter()
            .filter(|&&(v, _)| space.is_parameter(v))
            .map(|&(_, e)| e as i64)
            .sum();
        let c = c.abs();
        let irreducible = (c.is_one() && pdeg == 1) || (pdeg == 0 && is_prime(&c));
        return if irreducible {
            (CheckStatus::Pass, "prime scalar times a unit".into())
        } else {
            (CheckStatus::Fail, "reducible scalar times a unit".into())
        };
    }
    if q.len() == 2 {
        let mut it = q.terms();
        let (m1, c1) = it.next().expect("two terms");
        let (m2, c2) = it.next().expect("two terms");
        let shared_param = m1
            .exponents()
            .iter()
            .any(|&(v, e)| space.is_parameter(v) && e > 0 && m2.exponent(v) > 0);
        let diff = m1.div(m2);
        let g = diff
            .exponents()
            .iter()
            .fold(0i64, |acc, &(_, e)| acc.gcd(&(e as i64)));
        if c1.gcd(c2).is_one() && !shared_param && g == 1 {
            return (CheckStatus::Pass, "binomial with primitive exponent difference".into());
        }
    }
    (CheckStatus::Assumed, "not certified by the heuristic".into())
}

fn is_prime(c: &BigInt) -> bool {
    use num_traits::ToPrimitive;
    match c.to_u64() {
        Some(k) if k >= 2 => (2..).take_while(|d| d * d <= k).all(|d| k % d != 0),
        _ => false,
    }
}

/// The caterpillar of the cyclic pattern with `spine_len` spine vertices,
/// legs carrying the shifted `G` polynomials. Returns the pattern and its
/// spine (vertex 0 is the root, vertex `spine_len + 1` the head).
pub fn cyclic_caterpillar(
    spec: &CyclicSpec,
    cert: &GSequenceCertificate,
    spine_len: usize,
) -> Result<(ExchangePattern, Vec<usize>), CyclicError> {
    if cert.g0.is_none() {
        return Err(CyclicError::Incomplete(cert.failure.clone().unwrap_or_default()));
    }
    let n = spec.n;
    let big_m = spine_len.max(1);
    let mut edges = Vec::new();
    let label = |k: i64| spec.rem(k) - 1;
    // t0 -- t1 with label <0> = n.
    edges.push(Edge {
        a: 0,
        b: 1,
        label: label(0),
        poly: spec.f_m(n as i64),
    });
    for k in 1..=big_m {
        let next = if k == big_m { big_m + 1 } else { k + 1 };
        edges.push(Edge {
            a: k,
            b: next,
            label: label(k as i64),
            poly: spec.f_m(spec.rem(k as i64) as i64),
        });
    }
    let mut vertex = big_m + 2;
    for k in 1..=big_m {
        let skip = [spec.rem(k as i64 - 1), spec.rem(k as i64)];
        for j in 1..=n {
            if skip.contains(&j) {
                continue;
            }
            let idx = spec.rem(k as i64 - j as i64 - 1);
            let g = cert
                .g(idx)
                .ok_or_else(|| CyclicError::Incomplete(format!("G_{idx} missing")))?;
            edges.push(Edge {
                a: k,
                b: vertex,
                label: j - 1,
                poly: spec.shift(g, j as i64),
            });
            vertex += 1;
        }
    }
    let pattern = ExchangePattern::new(spec.space().clone(), spec.vars.clone(), vertex, 0, edges)?;
    Ok((pattern, (1..=big_m).collect()))
}

impl fmt::Display for GSequenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "G_{} = F = {}", self.n - 1, self.f)?;
        for s in &self.steps {
            writeln!(f, "m = {}", s.m)?;
            writeln!(f, "  Q_{}        = {}", s.m, s.q)?;
            writeln!(f, "  G~_{}       = {}", s.m - 1, s.g_tilde)?;
            writeln!(f, "  L          = {}", s.content.to_poly(self.f.space()))?;
            writeln!(f, "  b          = {}", s.b)?;
            writeln!(f, "  G_{}        = {}", s.m - 1, s.g)?;
        }
        writeln!(f, "GEP1a: {:?}", self.gep1a)?;
        for c in &self.gep2a {
            let cop = match &c.coprime {
                None => "n/a".to_string(),
                Some(CoprimeVerdict::CoprimeProbable) => "coprime (probable)".to_string(),
                Some(CoprimeVerdict::CommonFactorSuspected { reason }) => format!("common factor suspected: {reason}"),
            };
            writeln!(f, "GEP2a m = {}: {:?} ({}); gcd(G_{}, Q_{}): {}", c.m, c.status, c.method, c.m - 1, c.m, cop)?;
        }
        writeln!(f, "GEP3a: {:?}", self.gep3a)?;
        if let Some(msg) = &self.failure {
            writeln!(f, "first failure: {msg}")?;
        }
        write!(
            f,
            "verdict: {}",
            match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Inconclusive => "inconclusive",
            }
        )
    }
}

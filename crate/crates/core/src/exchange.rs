//! Generalized exchange patterns on edge-labeled trees.
//!
//! A pattern assigns an exchange polynomial to every edge `t --k-- t'` of a
//! finite tree. Clusters are propagated from the root by
//! `x_k(t) * x_k(t') = P(x(t))` and stored fully expanded in the initial
//! cluster variables. [`check_caterpillar_conditions`] checks the hypotheses
//! GEP1 to GEP3 of the caterpillar lemma along an explicit spine.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coprime::{coprime_probable, CoprimeVerdict};
use crate::error::AlgebraError;
use crate::poly::{Content, LaurentPoly};
use crate::space::{VarId, VarSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("edge {edge} references vertex {vertex}, but the tree has {count} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, count: usize },
    #[error("edge {edge} has label {label}, outside 1..={n}")]
    LabelOutOfRange { edge: usize, label: usize, n: usize },
    #[error("two edges at vertex {vertex} share label {label}")]
    DuplicateLabel { vertex: usize, label: usize },
    #[error("edge {edge} has the zero exchange polynomial")]
    ZeroPolynomial { edge: usize },
    #[error("exchange polynomial of edge {edge} depends on its own label variable")]
    DependsOnLabel { edge: usize },
    #[error("exchange polynomial of edge {edge} has a negative exponent in a cluster variable")]
    NotPolynomial { edge: usize },
    #[error("the edges do not form a tree")]
    NotATree,
    #[error("cluster variables must be distinct exchange variables")]
    BadCluster,
    #[error("malformed spine: {0}")]
    BadSpine(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Zero-based index into the cluster; reports print it one-based.
    pub label: usize,
    pub poly: LaurentPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExchangePattern {
    space: Arc<VarSpace>,
    cluster: Vec<VarId>,
    vertex_count: usize,
    root: usize,
    edges: Vec<Edge>,
    #[serde(skip)]
    incident: Vec<Vec<usize>>,
}

/// Values `x_1(t) .. x_n(t)` in the initial cluster variables.
pub type Cluster = Vec<LaurentPoly>;

#[derive(Clone, Debug)]
pub enum Propagation {
    Laurent(Vec<Cluster>),
    /// Exact division failed crossing `edge` into `vertex`; a finding, not an error.
    NotLaurent { vertex: usize, edge: usize, label: usize },
}

impl ExchangePattern {
    pub fn new(
        space: Arc<VarSpace>,
        cluster: Vec<VarId>,
        vertex_count: usize,
        root: usize,
        edges: Vec<Edge>,
    ) -> Result<Self, PatternError> {
        let n = cluster.len();
        let distinct: BTreeSet<VarId> = cluster.iter().copied().collect();
        if n < 1
            || distinct.len() != n
            || cluster
                .iter()
                .any(|&v| v.index() >= space.len() || space.is_parameter(v))
        {
            return Err(PatternError::BadCluster);
        }
        if root >= vertex_count {
            return Err(PatternError::NotATree);
        }
        let mut incident = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            for v in [e.a, e.b] {
                if v >= vertex_count {
                    return Err(PatternError::VertexOutOfRange {
                        edge: i,
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if e.a == e.b {
                return Err(PatternError::NotATree);
            }
            if e.label >= n {
                return Err(PatternError::LabelOutOfRange {
                    edge: i,
                    label: e.label + 1,
                    n,
                });
            }
            if e.poly.is_zero() {
                return Err(PatternError::ZeroPolynomial { edge: i });
            }
            if e.poly.depends_on(cluster[e.label]) {
                return Err(PatternError::DependsOnLabel { edge: i });
            }
            if cluster.iter().any(|&v| e.poly.degree_range(v).0 < 0) {
                return Err(PatternError::NotPolynomial { edge: i });
            }
            incident[e.a].push(i);
            incident[e.b].push(i);
        }
        for (v, inc) in incident.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &i in inc {
                if !seen.insert(edges[i].label) {
                    return Err(PatternError::DuplicateLabel {
                        vertex: v,
                        label: edges[i].label + 1,
                    });
                }
            }
        }
        let pattern = ExchangePattern {
            space,
            cluster,
            vertex_count,
            root,
            edges,
            incident,
        };
        if pattern.edges.len() + 1 != vertex_count || pattern.bfs_order().len() != vertex_count {
            return Err(PatternError::NotATree);
        }
        Ok(pattern)
    }

    /// A path `0 --l_1-- 1 --l_2-- 2 ...` rooted at vertex 0.
    pub fn path(
        space: Arc<VarSpace>,
        cluster: Vec<VarId>,
        steps: Vec<(usize, LaurentPoly)>,
    ) -> Result<Self, PatternError> {
        let edges = steps
            .into_iter()
            .enumerate()
            .map(|(i, (label, poly))| Edge {
                a: i,
                b: i + 1,
                label,
                poly,
            })
            .collect::<Vec<_>>();
        let count = edges.len() + 1;
        ExchangePattern::new(space, cluster, count, 0, edges)
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.cluster.len()
    }

    pub fn cluster_vars(&self) -> &[VarId] {
        &self.cluster
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// The edge joining `a` and `b`, if any.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.incident[a]
            .iter()
            .copied()
            .find(|&i| self.other_end(i, a) == b)
    }

    pub fn other_end(&self, edge: usize, v: usize) -> usize {
        let e = &self.edges[edge];
        if e.a == v {
            e.b
        } else {
            e.a
        }
    }

    /// The root cluster: the distinct generators.
    pub fn initial_cluster(&self) -> Cluster {
        self.cluster
            .iter()
            .map(|&v| LaurentPoly::var(&self.space, v))
            .collect()
    }

    /// `(vertex, parent edge)` in breadth-first order from the root.
    fn bfs_order(&self) -> Vec<(usize, Option<usize>)> {
        let mut seen = vec![false; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut queue = VecDeque::from([(self.root, None)]);
        seen[self.root] = true;
        while let Some((v, via)) = queue.pop_front() {
            order.push((v, via));
            for &i in &self.incident[v] {
                let w = self.other_end(i, v);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back((w, Some(i)));
                }
            }
        }
        order
    }

    /// `P(x(t))` for the exchange polynomial of `edge`.
    pub fn evaluate_at(&self, edge: usize, cluster: &Cluster) -> Result<LaurentPoly, AlgebraError> {
        let mut images: Vec<LaurentPoly> = self
            .space
            .ids()
            .map(|v| LaurentPoly::var(&self.space, v))
            .collect();
        for (k, &v) in self.cluster.iter().enumerate() {
            images[v.index()] = cluster[k].clone();
        }
        self.edges[edge].poly.compose(&images, &self.space)
    }

    /// Crosses `edge` from a vertex holding `cluster`. `None` when the exact
    /// division fails.
    pub fn exchange(&self, edge: usize, cluster: &Cluster) -> Result<Option<Cluster>, AlgebraError> {
        let k = self.edges[edge].label;
        let p = self.evaluate_at(edge, cluster)?;
        Ok(p.exact_div(&cluster[k])?.map(|x| {
            let mut next = cluster.clone();
            next[k] = x;
            next
        }))
    }

    /// Clusters at every vertex, breadth-first from the root.
    pub fn propagate(&self) -> Result<Propagation, AlgebraError> {
        let mut clusters: Vec<Option<Cluster>> = vec![None; self.vertex_count];
        for (v, via) in self.bfs_order() {
            let c = match via {
                None => self.initial_cluster(),
                Some(i) => {
                    let from = self.other_end(i, v);
                    let prev = clusters[from].as_ref().expect("parent visited first");
                    match self.exchange(i, prev)? {
                        Some(c) => c,
                        None => {
                            return Ok(Propagation::NotLaurent {
                                vertex: v,
                                edge: i,
                                label: self.edges[i].label + 1,
                            })
                        }
                    }
                }
            };
            clusters[v] = Some(c);
        }
        Ok(Propagation::Laurent(
            clusters.into_iter().map(|c| c.expect("tree is connected")).collect(),
        ))
    }

    /// Clusters along a vertex path starting at the root.
    pub fn propagate_path(&self, path: &[usize]) -> Result<Propagation, PatternError> {
        if path.first() != Some(&self.root) {
            return Err(PatternError::BadSpine("path must start at the root".into()));
        }
        let mut out = vec![self.initial_cluster()];
        for w in path.windows(2) {
            let i = self
                .edge_between(w[0], w[1])
                .ok_or_else(|| PatternError::BadSpine(format!("no edge {} -- {}", w[0], w[1])))?;
            match self.exchange(i, out.last().expect("nonempty"))? {
                Some(c) => out.push(c),
                None => {
                    return Ok(Propagation::NotLaurent {
                        vertex: w[1],
                        edge: i,
                        label: self.edges[i].label + 1,
                    })
                }
            }
        }
        Ok(Propagation::Laurent(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub edge: usize,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub p_edge: usize,
    pub q_edge: usize,
    pub q0: LaurentPoly,
    pub verdict: CoprimeVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gep3Witness {
    /// The Laurent monomial `L` with its coefficient.
    pub l: Content,
    pub b: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCheck {
    pub p_edge: usize,
    pub q_edge: usize,
    pub r_edge: usize,
    pub witness: Option<Gep3Witness>,
    pub detail: Option<String>,
}

impl TripleCheck {
    pub fn pass(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaterpillarReport {
    pub gep1: Vec<EdgeCheck>,
    pub gep2: Vec<PairCheck>,
    pub gep3: Vec<TripleCheck>,
    /// GEP2 is probabilistic; a pass means "probable".
    pub pass: bool,
}

/// Checks GEP1 on every edge and GEP2, GEP3 on every configuration around
/// an oriented spine edge. `spine` lists the spine vertices in order away
/// from the root; each must have degree `n`.
pub fn check_caterpillar_conditions(
    pattern: &ExchangePattern,
    spine: &[usize],
    seed: u64,
    trials: u32,
) -> Result<CaterpillarReport, PatternError> {
    let n = pattern.n();
    if spine.is_empty() {
        return Err(PatternError::BadSpine("empty spine".into()));
    }
    for &v in spine {
        if v >= pattern.vertex_count() || pattern.degree(v) != n {
            return Err(PatternError::BadSpine(format!("vertex {v} does not have degree {n}")));
        }
    }
    if pattern.edge_between(pattern.root(), spine[0]).is_none() {
        return Err(PatternError::BadSpine("spine must start next to the root".into()));
    }
    let mut spine_edges = Vec::new();
    for w in spine.windows(2) {
        let e = pattern
            .edge_between(w[0], w[1])
            .ok_or_else(|| PatternError::BadSpine(format!("no edge {} -- {}", w[0], w[1])))?;
        spine_edges.push((w[0], e, w[1]));
    }

    let gep1 = pattern
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| gep1_check(pattern, i, e))
        .collect::<Vec<_>>();

    let mut gep2 = Vec::new();
    let mut gep3 = Vec::new();
    for &(tail, qe, head) in &spine_edges {
        let q = &pattern.edges()[qe];
        let xj = pattern.cluster_vars()[q.label];
        for &pe in pattern.incident(tail) {
            if pe == qe {
                continue;
            }
            let p = &pattern.edges()[pe];
            let xi = pattern.cluster_vars()[p.label];
            let q0 = q.poly.set_zero(xi)?;
            let verdict = if q0.is_zero() {
                CoprimeVerdict::CommonFactorSuspected {
                    reason: "Q vanishes at x_i = 0".into(),
                }
            } else {
                coprime_probable(&p.poly, &q0, seed, trials)?
            };
            gep2.push(PairCheck {
                p_edge: pe,
                q_edge: qe,
                q0: q0.clone(),
                verdict,
            });
            let Some(re) = pattern
                .incident(head)
                .iter()
                .copied()
                .find(|&r| pattern.edges()[r].label == p.label)
            else {
                continue;
            };
            let r = &pattern.edges()[re].poly;
            let (witness, detail) = if q0.is_zero() {
                (None, Some("Q vanishes at x_i = 0".to_string()))
            } else {
                gep3_witness(&p.poly, &q0, r, xj, seed, trials)?
            };
            gep3.push(TripleCheck {
                p_edge: pe,
                q_edge: qe,
                r_edge: re,
                witness,
                detail,
            });
        }
    }
    let pass = gep1.iter().all(|c| c.pass)
        && gep2.iter().all(|c| c.verdict.is_coprime())
        && gep3.iter().all(TripleCheck::pass);
    Ok(CaterpillarReport {
        gep1,
        gep2,
        gep3,
        pass,
    })
}

fn gep1_check(pattern: &ExchangePattern, i: usize, e: &Edge) -> EdgeCheck {
    let space = pattern.space();
    if let Some(&v) = pattern
        .cluster_vars()
        .iter()
        .find(|&&v| e.poly.degree_range(v).0 > 0)
    {
        return EdgeCheck {
            edge: i,
            pass: false,
            detail: Some(format!("divisible by {}", space.name(v))),
        };
    }
    EdgeCheck {
        edge: i,
        pass: true,
        detail: None,
    }
}

/// Solves `L * Q0^b * P = R|_{x_j <- Q0/x_j}` for a Laurent monomial `L`
/// whose coefficient lies in `A` and is coprime with `P`.
pub fn gep3_witness(
    p: &LaurentPoly,
    q0: &LaurentPoly,
    r: &LaurentPoly,
    xj: VarId,
    seed: u64,
    trials: u32,
) -> Result<(Option<Gep3Witness>, Option<String>), AlgebraError> {
    let space = p.space();
    let rt = r.subst_inverse_ratio(xj, q0)?;
    let (core, b) = rt.divide_out_max_power(q0)?;
    let Some(l) = core.exact_div(p)? else {
        return Ok((None, Some("P does not divide the substituted R".into())));
    };
    if l.len() != 1 {
        return Ok((None, Some(format!("quotient {l} is not a monomial"))));
    }
    let (m, c) = l.leading_term().expect("one term");
    let content = Content {
        coeff: c.clone(),
        monomial: m.clone(),
    };
    let (g, params) = content.scalar_part(space);
    if params.exponents().iter().any(|&(_, e)| e < 0) {
        return Ok((None, Some(format!("coefficient of {l} is not in A"))));
    }
    let scalar = LaurentPoly::monomial(space, g, params);
    let verdict = coprime_probable(&scalar, p, seed, trials)?;
    if !verdict.is_coprime() {
        return Ok((None, Some(format!("coefficient of {l} shares a factor with P"))));
    }
    Ok((Some(Gep3Witness { l: content, b }), None))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma22Report {
    /// `x_i(t1), x_j(t2), x_i(t3)`, when all three are Laurent.
    pub values: Option<[LaurentPoly; 3]>,
    pub t3_vs_t1: Option<CoprimeVerdict>,
    pub t2_vs_t1: Option<CoprimeVerdict>,
    pub pass: bool,
}

/// Along `path = [t0, t1, t2, t3]` with labels `i, j, i`, checks that the
/// exchanged values are Laurent and that `x_i(t3), x_j(t2)` are each coprime
/// with `x_i(t1)`.
pub fn lemma22_gcd_probe(
    pattern: &ExchangePattern,
    path: &[usize; 4],
    seed: u64,
    trials: u32,
) -> Result<Lemma22Report, PatternError> {
    let labels: Vec<usize> = path
        .windows(2)
        .map(|w| {
            pattern
                .edge_between(w[0], w[1])
                .map(|e| pattern.edges()[e].label)
                .ok_or_else(|| PatternError::BadSpine(format!("no edge {} -- {}", w[0], w[1])))
        })
        .collect::<Result<_, _>>()?;
    if labels[0] != labels[2] || labels[0] == labels[1] {
        return Err(PatternError::BadSpine("path labels must read i, j, i".into()));
    }
    let (i, j) = (labels[0], labels[1]);
    let clusters = match pattern.propagate_path(path)? {
        Propagation::Laurent(c) => c,
        Propagation::NotLaurent { .. } => {
            return Ok(Lemma22Report {
                values: None,
                t3_vs_t1: None,
                t2_vs_t1: None,
                pass: false,
            })
        }
    };
    let a = clusters[1][i].clone();
    let b = clusters[2][j].clone();
    let c = clusters[3][i].clone();
    let v31 = coprime_probable(&c, &a, seed, trials)?;
    let v21 = coprime_probable(&b, &a, seed.wrapping_add(1), trials)?;
    let pass = v31.is_coprime() && v21.is_coprime();
    Ok(Lemma22Report {
        values: Some([a, b, c]),
        t3_vs_t1: Some(v31),
        t2_vs_t1: Some(v21),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space2() -> Arc<VarSpace> {
        VarSpace::indexed("x", 2, &[]).unwrap()
    }

    fn p(s: &Arc<VarSpace>, t: &str) -> LaurentPoly {
        LaurentPoly::parse(t, s).unwrap()
    }

    #[test]
    fn single_edge_exchange() {
        let s = space2();
        let cl: Vec<VarId> = s.exchange_ids().collect();
        let pat = ExchangePattern::path(s.clone(), cl, vec![(0, p(&s, "x2 + 1"))]).unwrap();
        let Propagation::Laurent(c) = pat.propagate().unwrap() else {
            panic!("expected Laurent clusters")
        };
        assert_eq!(c[1][0], p(&s, "x1^-1*x2 + x1^-1"));
        assert_eq!(c[1][1], p(&s, "x2"));
    }

    #[test]
    fn steps_by_hand() {
        // x1' = (x2 + 1)/x1, x2' = (x1' + 2)/x2, then x1'' = (x2' + 1)/x1'.
        let s = space2();
        let cl: Vec<VarId> = s.exchange_ids().collect();
        let pat = ExchangePattern::path(
            s.clone(),
            cl,
            vec![(0, p(&s, "x2 + 1")), (1, p(&s, "x1 + 2")), (0, p(&s, "x2 + 1"))],
        )
        .unwrap();
        let Propagation::Laurent(c) = pat.propagate_path(&[0, 1, 2]).unwrap() else {
            panic!("first two steps divide by monomials")
        };
        assert_eq!(c[2][1], p(&s, "x1^-1 + x1^-1*x2^-1 + 2*x2^-1"));
        match pat.propagate().unwrap() {
            Propagation::NotLaurent { vertex, label, .. } => assert_eq!((vertex, label), (3, 1)),
            Propagation::Laurent(_) => panic!("x1 + 1 + x1*x2 + x2 + x1 is not divisible by x2 + 1"),
        }
    }

    #[test]
    fn rejects_malformed_patterns() {
        let s = space2();
        let cl: Vec<VarId> = s.exchange_ids().collect();
        let err = ExchangePattern::path(s.clone(), cl.clone(), vec![(0, p(&s, "x1 + 1"))]);
        assert!(matches!(err, Err(PatternError::DependsOnLabel { .. })));
        let edges = vec![
            Edge { a: 0, b: 1, label: 0, poly: p(&s, "x2 + 1") },
            Edge { a: 0, b: 2, label: 0, poly: p(&s, "x2 + 2") },
        ];
        let err = ExchangePattern::new(s.clone(), cl, 3, 0, edges);
        assert!(matches!(err, Err(PatternError::DuplicateLabel { vertex: 0, label: 1 })));
    }

    #[test]
    fn reverse_exchange_recovers_value() {
        let s = VarSpace::indexed("x", 3, &[]).unwrap();
        let cl: Vec<VarId> = s.exchange_ids().collect();
        let pat = ExchangePattern::path(s.clone(), cl, vec![(1, p(&s, "x1^2 + x3"))]).unwrap();
        let Propagation::Laurent(c) = pat.propagate().unwrap() else {
            panic!()
        };
        let back = pat.exchange(0, &c[1]).unwrap().unwrap();
        assert_eq!(back, c[0]);
    }
}

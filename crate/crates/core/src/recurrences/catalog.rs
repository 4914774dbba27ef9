use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::embed::Embedding;
use super::lattice::{HalfSpace, LatticeRecurrence, Region};
use super::one_dim::OneDimRecurrence;
use super::{Index, RecurrenceError, TermEntry, TermTable, TermValue};
use crate::homogeneous::{self, apply_word, apply_word_numeric, reduced_words, HomogeneousError, HomogeneousPattern, WordOutcome};
use crate::poly::LaurentPoly;
use crate::stencil::{Point, StencilRecurrence};

/// Sup-norm radius of the window lattice tables are drawn from.
pub const LATTICE_RADIUS: i64 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RecurrenceKind {
    OneDim {
        recurrence: OneDimRecurrence,
        #[serde(default)]
        embedding: Option<Embedding>,
    },
    Lattice {
        recurrence: LatticeRecurrence,
    },
    /// Terms are the cluster variables of the exchange tree: the starting
    /// variables, then one new variable per reduced word in breadth-first
    /// order.
    Homogeneous {
        pattern: HomogeneousPattern,
        #[serde(default)]
        bindings: BTreeMap<String, i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub name: String,
    pub description: String,
    pub kind: RecurrenceKind,
}

fn one_dim(name: &str, description: &str, n: usize, f: &str, params: &[&str]) -> RecurrenceSpec {
    RecurrenceSpec {
        name: name.into(),
        description: description.into(),
        kind: RecurrenceKind::OneDim {
            recurrence: OneDimRecurrence::new(name, n, f, params, &[]).expect("built-in recurrence"),
            embedding: None,
        },
    }
}

fn embedded(name: &str, description: &str, e: Embedding, bindings: &[(&str, i64)]) -> RecurrenceSpec {
    RecurrenceSpec {
        name: name.into(),
        description: description.into(),
        kind: RecurrenceKind::OneDim {
            recurrence: e.one_dim(name, bindings).expect("built-in recurrence"),
            embedding: Some(e),
        },
    }
}

fn lattice(name: &str, description: &str, stencil: StencilRecurrence, region: Region) -> RecurrenceSpec {
    RecurrenceSpec {
        name: name.into(),
        description: description.into(),
        kind: RecurrenceKind::Lattice {
            recurrence: LatticeRecurrence::new(name, stencil, region, BTreeMap::new()).expect("built-in recurrence"),
        },
    }
}

fn homogeneous(name: &str, description: &str, mut pattern: HomogeneousPattern) -> RecurrenceSpec {
    pattern.name = name.into();
    RecurrenceSpec {
        name: name.into(),
        description: description.into(),
        kind: RecurrenceKind::Homogeneous {
            pattern,
            bindings: BTreeMap::new(),
        },
    }
}

impl RecurrenceSpec {
    /// Formal parameters without a numeric binding. For homogeneous
    /// patterns this includes invertible coefficients such as `lambda`.
    pub fn free_parameters(&self) -> Vec<String> {
        let (names, bindings): (Vec<String>, &BTreeMap<String, i64>) = match &self.kind {
            RecurrenceKind::OneDim { recurrence, .. } => (recurrence.spec.params.clone(), &recurrence.bindings),
            RecurrenceKind::Lattice { recurrence } => (recurrence.stencil.params().to_vec(), &recurrence.bindings),
            RecurrenceKind::Homogeneous { pattern, bindings, .. } => (coefficient_names(pattern), bindings),
        };
        names.into_iter().filter(|p| !bindings.contains_key(p)).collect()
    }

    /// A copy with additional integer bindings for formal parameters.
    pub fn bind(&self, extra: &BTreeMap<String, i64>) -> Result<Self, RecurrenceError> {
        let free = self.free_parameters();
        if let Some(k) = extra.keys().find(|k| !free.contains(k)) {
            return Err(RecurrenceError::Invalid(format!("`{k}` is not a free parameter of {}", self.name)));
        }
        let mut out = self.clone();
        match &mut out.kind {
            RecurrenceKind::OneDim { recurrence, .. } => recurrence.bindings.extend(extra.clone()),
            RecurrenceKind::Lattice { recurrence } => recurrence.bindings.extend(extra.clone()),
            RecurrenceKind::Homogeneous { bindings, .. } => bindings.extend(extra.clone()),
        }
        Ok(out)
    }

    /// The first `count` terms, initial ones included, for one-dimensional
    /// and homogeneous kinds; the first `count` non-initial points of the
    /// radius-[`LATTICE_RADIUS`] window for lattice kinds. Homogeneous terms
    /// follow [`reduced_words`].
    pub fn compute_symbolic(&self, count: usize) -> Result<TermTable, RecurrenceError> {
        match &self.kind {
            RecurrenceKind::OneDim { recurrence, .. } => recurrence.compute_symbolic(count),
            RecurrenceKind::Lattice { recurrence } => recurrence.compute_symbolic(&recurrence.targets(LATTICE_RADIUS, count)),
            RecurrenceKind::Homogeneous { pattern, bindings } => homogeneous_symbolic(&self.name, pattern, bindings, count),
        }
    }

    /// Exact-rational values of the terms [`compute_symbolic`](Self::compute_symbolic)
    /// produces, with initial values `init(index)`. Every parameter must be bound.
    pub fn compute_numeric(&self, count: usize, init: impl Fn(&Index) -> BigRational) -> Result<TermTable, RecurrenceError> {
        match &self.kind {
            RecurrenceKind::OneDim { recurrence, .. } => {
                let initial: Vec<BigRational> = (0..recurrence.n() as i64).map(|i| init(&Index::Int(i))).collect();
                let mut t = recurrence.compute_numeric(&initial, count.max(recurrence.n()))?;
                t.entries.truncate(count);
                Ok(t)
            }
            RecurrenceKind::Lattice { recurrence } => {
                recurrence.compute_numeric(&recurrence.targets(LATTICE_RADIUS, count), |h| init(&Index::Point(h.clone())))
            }
            RecurrenceKind::Homogeneous { pattern, bindings } => homogeneous_numeric(&self.name, pattern, bindings, count, init),
        }
    }

    /// The index whose initial value the variable `name` stands for in
    /// symbolic tables.
    pub fn initial_index(&self, name: &str) -> Option<Index> {
        match &self.kind {
            RecurrenceKind::OneDim { recurrence, .. } => {
                let i: i64 = name.strip_prefix('y')?.parse().ok()?;
                (0..recurrence.n() as i64).contains(&i).then_some(Index::Int(i))
            }
            RecurrenceKind::Lattice { recurrence } => {
                let inner = name.strip_prefix("y[")?.strip_suffix(']')?;
                let p: Point = inner.split(',').map(|c| c.trim().parse().ok()).collect::<Option<_>>()?;
                recurrence.is_initial(&p).then_some(Index::Point(p))
            }
            RecurrenceKind::Homogeneous { pattern, .. } => {
                let c: usize = name.strip_prefix('x')?.parse().ok()?;
                (1..=pattern.n()).contains(&c).then(|| Index::Int(c as i64 - 1))
            }
        }
    }
}

fn coefficient_names(pattern: &HomogeneousPattern) -> Vec<String> {
    let space = pattern.space();
    space
        .ids()
        .filter(|v| !pattern.vars().contains(v))
        .map(|v| space.name(v).to_string())
        .collect()
}

fn initial_entries(n: usize, count: usize, value: impl Fn(usize) -> TermValue) -> Vec<TermEntry> {
    (0..n.min(count))
        .map(|k| TermEntry {
            index: Index::Int(k as i64),
            value: value(k),
        })
        .collect()
}

/// Terms are `x_1 .. x_n` followed by the variable created at each reduced
/// word. Vertices below a non-Laurent vertex are skipped.
fn homogeneous_symbolic(
    name: &str,
    pattern: &HomogeneousPattern,
    bindings: &BTreeMap<String, i64>,
    count: usize,
) -> Result<TermTable, RecurrenceError> {
    let n = pattern.n();
    let bound = pattern.bind(bindings)?;
    let root = bound.identity_point();
    let mut entries = initial_entries(n, count, |k| TermValue::Laurent { value: root[k].clone() });
    let mut points: HashMap<Vec<usize>, Vec<LaurentPoly>> = HashMap::new();
    points.insert(Vec::new(), root);
    for word in reduced_words(n, count.saturating_sub(n)) {
        let Some(parent) = points.get(&word[1..]) else {
            continue;
        };
        let i = word[0];
        let value = match apply_word(&bound, &[i], parent)? {
            WordOutcome::Laurent { point } => {
                let v = point[i - 1].clone();
                points.insert(word.clone(), point);
                TermValue::Laurent { value: v }
            }
            WordOutcome::NotLaurent {
                numerator, denominator, ..
            } => TermValue::NotLaurent { numerator, denominator },
        };
        entries.push(TermEntry {
            index: Index::Word { word },
            value,
        });
    }
    Ok(TermTable {
        recurrence: name.to_string(),
        bindings: bindings.clone(),
        entries,
    })
}

fn homogeneous_numeric(
    name: &str,
    pattern: &HomogeneousPattern,
    bindings: &BTreeMap<String, i64>,
    count: usize,
    init: impl Fn(&Index) -> BigRational,
) -> Result<TermTable, RecurrenceError> {
    let n = pattern.n();
    let coefficients: BTreeMap<String, BigRational> = bindings
        .iter()
        .map(|(k, &v)| (k.clone(), BigRational::from_integer(v.into())))
        .collect();
    let root: Vec<BigRational> = (0..n).map(|k| init(&Index::Int(k as i64))).collect();
    let mut entries = initial_entries(n, count, |k| TermValue::Rational { value: root[k].clone() });
    let mut points: HashMap<Vec<usize>, Vec<BigRational>> = HashMap::new();
    points.insert(Vec::new(), root);
    for word in reduced_words(n, count.saturating_sub(n)) {
        let parent = &points[&word[1..]];
        let i = word[0];
        let point = apply_word_numeric(pattern, &[i], parent, &coefficients).map_err(|e| match e {
            HomogeneousError::ZeroCoordinate(_) => RecurrenceError::ZeroTerm(Index::Word { word: word[1..].to_vec() }),
            HomogeneousError::UnboundCoefficient(c) => RecurrenceError::UnboundParameter(c),
            e => e.into(),
        })?;
        entries.push(TermEntry {
            index: Index::Word { word: word.clone() },
            value: TermValue::Rational {
                value: point[i - 1].clone(),
            },
        });
        points.insert(word, point);
    }
    Ok(TermTable {
        recurrence: name.to_string(),
        bindings: bindings.clone(),
        entries,
    })
}

const ONES3: &[(&str, i64)] = &[("alpha", 1), ("beta", 1), ("gamma", 1)];
const ONES2: &[(&str, i64)] = &[("alpha", 1), ("beta", 1)];

/// Every named recurrence, in a fixed order.
pub fn catalog() -> Vec<RecurrenceSpec> {
    let k_ge_0 = Region {
        half_spaces: vec![HalfSpace {
            normal: vec![0, 0, 1],
            offset: 0,
        }],
    };
    let j_ge_0 = Region {
        half_spaces: vec![HalfSpace {
            normal: vec![0, 1],
            offset: 0,
        }],
    };
    vec![
        one_dim("binomial3", "y_{m+3} y_m = y_{m+1} y_{m+2} + 1", 3, "x1*x2 + 1", &[]),
        one_dim("somos4-gen", "y_{m+4} y_m = y_{m+1} y_{m+3} + y_{m+2}", 4, "x1*x3 + x2", &[]),
        embedded("somos4", "Somos-4: y_m y_{m-4} = y_{m-1} y_{m-3} + y_{m-2}^2", Embedding::TwoTerm { p: 1, q: 2, n: 4 }, ONES2),
        embedded("somos5", "Somos-5: y_m y_{m-5} = y_{m-1} y_{m-4} + y_{m-2} y_{m-3}", Embedding::TwoTerm { p: 1, q: 2, n: 5 }, ONES2),
        embedded("somos6", "Somos-6, the Gale-Robinson case (1,2,3)", Embedding::GaleRobinson { p: 1, q: 2, r: 3 }, ONES3),
        embedded("somos7", "Somos-7, the Gale-Robinson case (1,2,4)", Embedding::GaleRobinson { p: 1, q: 2, r: 4 }, ONES3),
        embedded("gale-robinson", "three-term Gale-Robinson (1,2,3) with formal alpha, beta, gamma", Embedding::GaleRobinson { p: 1, q: 2, r: 3 }, &[]),
        embedded("two-term", "two-term Gale-Robinson (1,3,7) with formal alpha, beta", Embedding::TwoTerm { p: 1, q: 3, n: 7 }, &[]),
        lattice("cube", "cube recurrence on the nonnegative octant", StencilRecurrence::cube(), Region::orthant(3, &[0, 1, 2])),
        lattice("cube-propp", "cube recurrence with unit coefficients", StencilRecurrence::cube_unit(), Region::orthant(3, &[0, 1, 2])),
        lattice("octahedron", "octahedron recurrence on the even lattice, k >= 0", StencilRecurrence::octahedron(), k_ge_0),
        lattice("knight", "knight recurrence on the nonnegative quadrant", StencilRecurrence::knight(), Region::orthant(2, &[0, 1])),
        lattice("frieze-plus", "frieze recurrence with epsilon = +1", StencilRecurrence::frieze(false), Region::orthant(2, &[0, 1])),
        lattice("frieze-minus", "frieze recurrence with epsilon = -1", StencilRecurrence::frieze(true), Region::orthant(2, &[0, 1])),
        lattice("number-wall", "number wall (p,q,r) = (1,1,1) on j >= 0", StencilRecurrence::number_wall(1, 1, 1), j_ge_0),
        homogeneous("quadratic", "quadratic form maps, n = 3", homogeneous::quadratic(3).expect("built-in")),
        homogeneous("palindromic", "palindromic pair, d = e = 2", homogeneous::palindromic(2, 2).expect("built-in")),
        homogeneous("seq54", "y_k = (y_{k-1}^2 + c y_{k-1} + d) / y_{k-2}", homogeneous::seq54().expect("built-in")),
        homogeneous("trinomial", "rank-3 trinomial maps", homogeneous::trinomial().expect("built-in")),
    ]
}

pub fn lookup(name: &str) -> Result<RecurrenceSpec, RecurrenceError> {
    catalog()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| RecurrenceError::Unknown(name.to_string()))
}

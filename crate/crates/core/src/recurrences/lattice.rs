use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{bound_images, nonzero, numeric_params, Index, RecurrenceError, TermEntry, TermTable, TermValue};
use crate::poly::LaurentPoly;
use crate::space::{VarId, VarSpace};
use crate::stencil::{point_name, Point, StencilRecurrence};

/// Cap on the number of points visited below one target.
pub const DOWNSET_LIMIT: usize = 200_000;

/// `normal . h + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl HalfSpace {
    pub fn contains(&self, h: &[i64]) -> bool {
        self.normal.iter().zip(h).map(|(a, b)| a * b).sum::<i64>() + self.offset >= 0
    }
}

/// An intersection of half-spaces, restricted to the stencil's lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Region {
    pub half_spaces: Vec<HalfSpace>,
}

impl Region {
    /// `h_i >= 0` for every coordinate listed in `coords`.
    pub fn orthant(d: usize, coords: &[usize]) -> Self {
        Region {
            half_spaces: coords
                .iter()
                .map(|&i| {
                    let mut normal = vec![0; d];
                    normal[i] = 1;
                    HalfSpace { normal, offset: 0 }
                })
                .collect(),
        }
    }

    pub fn contains(&self, h: &[i64]) -> bool {
        self.half_spaces.iter().all(|s| s.contains(h))
    }
}

/// A stencil recurrence on a region `H`; the initial set is
/// `H_init = {h in H : h - s not in H}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeRecurrence {
    pub name: String,
    pub stencil: StencilRecurrence,
    pub region: Region,
    #[serde(default)]
    pub bindings: BTreeMap<String, i64>,
}

/// The points below a target, in evaluation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Downset {
    pub initial: Vec<Point>,
    pub interior: Vec<Point>,
}

impl LatticeRecurrence {
    pub fn new(
        name: &str,
        stencil: StencilRecurrence,
        region: Region,
        bindings: BTreeMap<String, i64>,
    ) -> Result<Self, RecurrenceError> {
        if region.half_spaces.iter().any(|s| s.normal.len() != stencil.dim()) {
            return Err(RecurrenceError::Invalid("half-space dimension differs from the stencil".into()));
        }
        for k in bindings.keys() {
            if !stencil.params().contains(k) {
                return Err(RecurrenceError::Invalid(format!("binding for undeclared parameter `{k}`")));
            }
        }
        Ok(LatticeRecurrence {
            name: name.to_string(),
            stencil,
            region,
            bindings,
        })
    }

    pub fn dim(&self) -> usize {
        self.stencil.dim()
    }

    pub fn in_region(&self, h: &[i64]) -> bool {
        h.len() == self.dim() && self.stencil.lattice().contains(h) && self.region.contains(h)
    }

    pub fn is_initial(&self, h: &[i64]) -> bool {
        let below: Point = h.iter().zip(self.stencil.shift()).map(|(a, b)| a - b).collect();
        self.in_region(h) && !self.in_region(&below)
    }

    /// Every point the value at `target` depends on. Initial points are
    /// created only when reached.
    pub fn downset(&self, target: &[i64]) -> Result<Downset, RecurrenceError> {
        if !self.in_region(target) {
            return Err(RecurrenceError::OutsideRegion(Index::Point(target.to_vec())));
        }
        let offsets: Vec<Point> = self.stencil.offsets().values().cloned().collect();
        let mut seen: BTreeSet<Point> = BTreeSet::new();
        let mut stack = vec![target.to_vec()];
        let mut initial = Vec::new();
        let mut interior = Vec::new();
        while let Some(h) = stack.pop() {
            if !seen.insert(h.clone()) {
                continue;
            }
            if seen.len() > DOWNSET_LIMIT {
                return Err(RecurrenceError::InfiniteDownset(Index::Point(target.to_vec()), DOWNSET_LIMIT));
            }
            if !self.in_region(&h) {
                return Err(RecurrenceError::OutsideRegion(Index::Point(h)));
            }
            if self.is_initial(&h) {
                initial.push(h);
                continue;
            }
            let below: Point = h.iter().zip(self.stencil.shift()).map(|(a, b)| a - b).collect();
            stack.push(below);
            for o in &offsets {
                stack.push(h.iter().zip(o).map(|(a, b)| a + b).collect());
            }
            interior.push(h);
        }
        let by_key = |a: &Point, b: &Point| self.stencil.key(a).cmp(&self.stencil.key(b)).then_with(|| a.cmp(b));
        initial.sort_by(by_key);
        interior.sort_by(by_key);
        Ok(Downset { initial, interior })
    }

    /// Initial variables `y[...]` of `points` plus the unbound parameters.
    pub fn space_for(&self, points: &[Point]) -> Result<Arc<VarSpace>, RecurrenceError> {
        let mut b = VarSpace::builder();
        for p in points {
            b = b.exchange(point_name("y", p));
        }
        for p in self.stencil.params() {
            if !self.bindings.contains_key(p) {
                b = b.parameter(p.clone());
            }
        }
        Ok(b.build()?)
    }

    /// Values at `targets` as Laurent polynomials in the initial variables
    /// reached from them. Stops at the first non-Laurent value.
    pub fn compute_symbolic(&self, targets: &[Point]) -> Result<TermTable, RecurrenceError> {
        let mut initial: BTreeSet<Point> = BTreeSet::new();
        let mut interior: BTreeSet<Point> = BTreeSet::new();
        for t in targets {
            let d = self.downset(t)?;
            initial.extend(d.initial);
            interior.extend(d.interior);
        }
        let mut initial: Vec<Point> = initial.into_iter().collect();
        initial.sort_by(|a, b| self.stencil.key(a).cmp(&self.stencil.key(b)).then_with(|| a.cmp(b)));
        let space = self.space_for(&initial)?;
        self.evaluate(targets, &initial, interior, &space)
    }

    /// As [`compute_symbolic`](Self::compute_symbolic) in a caller-supplied
    /// space, with the initial variable of `h` named by `name(h)`.
    pub fn compute_symbolic_in(
        &self,
        targets: &[Point],
        space: &Arc<VarSpace>,
        name: impl Fn(&Point) -> String,
    ) -> Result<TermTable, RecurrenceError> {
        let mut initial: BTreeSet<Point> = BTreeSet::new();
        let mut interior: BTreeSet<Point> = BTreeSet::new();
        for t in targets {
            let d = self.downset(t)?;
            initial.extend(d.initial);
            interior.extend(d.interior);
        }
        let mut values: HashMap<Point, LaurentPoly> = HashMap::new();
        for p in initial {
            let v = space.require(&name(&p))?;
            values.insert(p, LaurentPoly::var(space, v));
        }
        self.run(targets, values, interior, space)
    }

    fn evaluate(
        &self,
        targets: &[Point],
        initial: &[Point],
        interior: BTreeSet<Point>,
        space: &Arc<VarSpace>,
    ) -> Result<TermTable, RecurrenceError> {
        let values: HashMap<Point, LaurentPoly> = initial
            .iter()
            .map(|p| (p.clone(), LaurentPoly::named(space, &point_name("y", p))))
            .collect();
        self.run(targets, values, interior, space)
    }

    fn run(
        &self,
        targets: &[Point],
        mut values: HashMap<Point, LaurentPoly>,
        interior: BTreeSet<Point>,
        space: &Arc<VarSpace>,
    ) -> Result<TermTable, RecurrenceError> {
        let mut order: Vec<Point> = interior.into_iter().collect();
        order.sort_by(|a, b| self.stencil.key(a).cmp(&self.stencil.key(b)).then_with(|| a.cmp(b)));
        let template = self.stencil.template();
        let tspace = template.space().clone();
        let offsets = self.stencil.offsets();
        let mut failure: Option<(Point, LaurentPoly, LaurentPoly)> = None;
        for h in &order {
            let images = bound_images(&tspace, space, &self.bindings, |name| {
                let v: VarId = tspace.require(name)?;
                match offsets.get(&v) {
                    Some(o) => {
                        let p: Point = h.iter().zip(o).map(|(a, b)| a + b).collect();
                        Ok(values[&p].clone())
                    }
                    None => Ok(LaurentPoly::var(space, space.require(name)?)),
                }
            })?;
            let numerator = template.compose(&images, space)?;
            let below: Point = h.iter().zip(self.stencil.shift()).map(|(a, b)| a - b).collect();
            let denominator = values[&below].clone();
            match numerator.exact_div(&denominator)? {
                Some(v) => {
                    values.insert(h.clone(), v);
                }
                None => {
                    failure = Some((h.clone(), numerator, denominator));
                    break;
                }
            }
        }
        let mut entries = Vec::new();
        for t in targets {
            let value = match (values.get(t), &failure) {
                (Some(v), _) => TermValue::Laurent { value: v.clone() },
                (None, Some((p, num, den))) => {
                    entries.push(TermEntry {
                        index: Index::Point(p.clone()),
                        value: TermValue::NotLaurent {
                            numerator: num.clone(),
                            denominator: den.clone(),
                        },
                    });
                    break;
                }
                (None, None) => unreachable!("every target is evaluated"),
            };
            entries.push(TermEntry {
                index: Index::Point(t.clone()),
                value,
            });
        }
        Ok(TermTable {
            recurrence: self.name.clone(),
            bindings: self.bindings.clone(),
            entries,
        })
    }

    /// Exact-rational values at `targets` with initial values `init(h)`.
    pub fn compute_numeric(
        &self,
        targets: &[Point],
        init: impl Fn(&Point) -> BigRational,
    ) -> Result<TermTable, RecurrenceError> {
        let tspace = self.stencil.template().space().clone();
        let params = numeric_params(&tspace, &self.bindings)?;
        let mut values: HashMap<Point, BigRational> = HashMap::new();
        let mut order: BTreeSet<Point> = BTreeSet::new();
        for t in targets {
            let d = self.downset(t)?;
            for p in d.initial {
                let v = init(&p);
                values.insert(p, v);
            }
            order.extend(d.interior);
        }
        let mut order: Vec<Point> = order.into_iter().collect();
        order.sort_by(|a, b| self.stencil.key(a).cmp(&self.stencil.key(b)).then_with(|| a.cmp(b)));
        let mut assignment: HashMap<VarId, BigRational> = HashMap::new();
        for (name, v) in &params {
            assignment.insert(tspace.require(name)?, v.clone());
        }
        for h in &order {
            for (&v, o) in self.stencil.offsets() {
                let p: Point = h.iter().zip(o).map(|(a, b)| a + b).collect();
                assignment.insert(v, values[&p].clone());
            }
            let num = self.stencil.template().specialize(&assignment)?;
            let below: Point = h.iter().zip(self.stencil.shift()).map(|(a, b)| a - b).collect();
            let den = &values[&below];
            nonzero(den, Index::Point(below.clone()))?;
            let v = num / den;
            values.insert(h.clone(), v);
        }
        Ok(TermTable {
            recurrence: self.name.clone(),
            bindings: self.bindings.clone(),
            entries: targets
                .iter()
                .map(|t| TermEntry {
                    index: Index::Point(t.clone()),
                    value: TermValue::Rational { value: values[t].clone() },
                })
                .collect(),
        })
    }

    /// Non-initial points of the region within sup-norm `radius`, in
    /// evaluation order.
    pub fn targets(&self, radius: i64, count: usize) -> Vec<Point> {
        let d = self.dim();
        let mut out = Vec::new();
        let mut p = vec![-radius; d];
        'outer: loop {
            if self.in_region(&p) && !self.is_initial(&p) {
                out.push(p.clone());
            }
            for i in 0..d {
                if p[i] < radius {
                    p[i] += 1;
                    continue 'outer;
                }
                p[i] = -radius;
            }
            break;
        }
        out.sort_by(|a, b| self.stencil.key(a).cmp(&self.stencil.key(b)).then_with(|| a.cmp(b)));
        out.truncate(count);
        out
    }
}

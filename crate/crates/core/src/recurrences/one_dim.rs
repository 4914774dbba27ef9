use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{bound_images, nonzero, numeric_params, Index, RecurrenceError, TermEntry, TermTable, TermValue};
use crate::cyclic::CyclicSpec;
use crate::poly::LaurentPoly;
use crate::space::VarSpace;

/// Default cap on the number of terms of a symbolic value.
pub const DEFAULT_TERM_LIMIT: usize = 500_000;

/// `y_{m+n} y_m = F(y_{m+1}, ..., y_{m+n-1})`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OneDimRecurrence {
    pub name: String,
    pub spec: CyclicSpecDef,
    #[serde(default)]
    pub bindings: BTreeMap<String, i64>,
    #[serde(skip)]
    compiled: Option<CyclicSpec>,
}

/// Serializable form of a [`CyclicSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicSpecDef {
    pub n: usize,
    pub f: String,
    #[serde(default)]
    pub params: Vec<String>,
}

impl PartialEq for OneDimRecurrence {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.spec == other.spec && self.bindings == other.bindings
    }
}

impl OneDimRecurrence {
    pub fn new(name: &str, n: usize, f: &str, params: &[&str], bindings: &[(&str, i64)]) -> Result<Self, RecurrenceError> {
        let def = CyclicSpecDef {
            n,
            f: f.to_string(),
            params: params.iter().map(|s| s.to_string()).collect(),
        };
        Self::from_def(name, def, bindings.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }

    pub fn from_def(name: &str, def: CyclicSpecDef, bindings: BTreeMap<String, i64>) -> Result<Self, RecurrenceError> {
        let params: Vec<&str> = def.params.iter().map(String::as_str).collect();
        let spec = CyclicSpec::parse(def.n, &def.f, &params).map_err(|e| RecurrenceError::Invalid(e.to_string()))?;
        for k in bindings.keys() {
            if !def.params.contains(k) {
                return Err(RecurrenceError::Invalid(format!("binding for undeclared parameter `{k}`")));
            }
        }
        Ok(OneDimRecurrence {
            name: name.to_string(),
            spec: def,
            bindings,
            compiled: Some(spec),
        })
    }

    /// Re-parses after deserialization.
    pub fn compiled(&self) -> Result<CyclicSpec, RecurrenceError> {
        match &self.compiled {
            Some(s) => Ok(s.clone()),
            None => Self::from_def(&self.name, self.spec.clone(), self.bindings.clone())?.compiled(),
        }
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// The space of initial variables `y0 .. y{n-1}` plus unbound parameters.
    pub fn initial_space(&self) -> Result<Arc<VarSpace>, RecurrenceError> {
        let mut b = VarSpace::builder();
        for i in 0..self.n() {
            b = b.exchange(format!("y{i}"));
        }
        for p in &self.spec.params {
            if !self.bindings.contains_key(p) {
                b = b.parameter(p.clone());
            }
        }
        Ok(b.build()?)
    }

    /// Terms `y_0 .. y_{count-1}` as Laurent polynomials in the initial
    /// variables. Stops after the first term that fails to be Laurent.
    pub fn compute_symbolic(&self, count: usize) -> Result<TermTable, RecurrenceError> {
        self.compute_symbolic_limited(count, DEFAULT_TERM_LIMIT)
    }

    pub fn compute_symbolic_limited(&self, count: usize, limit: usize) -> Result<TermTable, RecurrenceError> {
        let spec = self.compiled()?;
        let n = self.n();
        let space = self.initial_space()?;
        let mut values: Vec<LaurentPoly> = (0..n.min(count))
            .map(|i| LaurentPoly::named(&space, &format!("y{i}")))
            .collect();
        let mut entries: Vec<TermEntry> = values
            .iter()
            .enumerate()
            .map(|(i, v)| TermEntry {
                index: Index::Int(i as i64),
                value: TermValue::Laurent { value: v.clone() },
            })
            .collect();
        for m in n..count {
            let base = m - n;
            let images = bound_images(spec.space(), &space, &self.bindings, |name| {
                if let Some(i) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    if (1..n).contains(&i) {
                        return Ok(values[base + i].clone());
                    }
                    return Ok(LaurentPoly::zero(&space));
                }
                Ok(LaurentPoly::named(&space, name))
            })?;
            let numerator = spec.f().compose_limited(&images, &space, limit)?;
            let denominator = values[base].clone();
            match numerator.exact_div(&denominator)? {
                Some(v) => {
                    values.push(v.clone());
                    entries.push(TermEntry {
                        index: Index::Int(m as i64),
                        value: TermValue::Laurent { value: v },
                    });
                }
                None => {
                    entries.push(TermEntry {
                        index: Index::Int(m as i64),
                        value: TermValue::NotLaurent { numerator, denominator },
                    });
                    break;
                }
            }
        }
        Ok(TermTable {
            recurrence: self.name.clone(),
            bindings: self.bindings.clone(),
            entries,
        })
    }

    /// Exact-rational recursion from `initial` (length `n`).
    pub fn compute_numeric(&self, initial: &[BigRational], count: usize) -> Result<TermTable, RecurrenceError> {
        let spec = self.compiled()?;
        let n = self.n();
        if initial.len() != n {
            return Err(RecurrenceError::InitialCount {
                expected: n,
                got: initial.len(),
            });
        }
        let params = numeric_params(spec.space(), &self.bindings)?;
        let mut assignment = HashMap::new();
        for (name, v) in &params {
            assignment.insert(spec.space().require(name)?, v.clone());
        }
        let mut values: Vec<BigRational> = initial.to_vec();
        for m in n..count {
            let base = m - n;
            for i in 1..n {
                assignment.insert(spec.x(i), values[base + i].clone());
            }
            let num = spec.f().specialize(&assignment)?;
            nonzero(&values[base], Index::Int(base as i64))?;
            values.push(num / &values[base]);
        }
        values.truncate(count);
        Ok(TermTable {
            recurrence: self.name.clone(),
            bindings: self.bindings.clone(),
            entries: values
                .into_iter()
                .enumerate()
                .map(|(i, v)| TermEntry {
                    index: Index::Int(i as i64),
                    value: TermValue::Rational { value: v },
                })
                .collect(),
        })
    }
}

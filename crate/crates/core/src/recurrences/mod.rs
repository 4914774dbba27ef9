//! Term computation for one-dimensional and lattice recurrences, the
//! Gale–Robinson embeddings and the catalog of named recurrences.

pub mod catalog;
pub mod embed;
pub mod lattice;
pub mod one_dim;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::AlgebraError;
use crate::homogeneous::HomogeneousError;
use crate::poly::LaurentPoly;
use crate::space::VarSpace;
use crate::stencil::{point_name, Point, StencilError};

pub use catalog::{catalog, lookup, RecurrenceKind, RecurrenceSpec, LATTICE_RADIUS};
pub use embed::{gale_robinson_embed, two_term_embed, Embedding};
pub use lattice::{HalfSpace, LatticeRecurrence, Region};
pub use one_dim::OneDimRecurrence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("index {0} is outside the region")]
    OutsideRegion(Index),
    #[error("index {0} is an initial index")]
    InitialIndex(Index),
    #[error("downset of {0} exceeds {1} points; the region lacks finite downsets")]
    InfiniteDownset(Index, usize),
    #[error("division by a zero term at index {0}")]
    ZeroTerm(Index),
    #[error("expected {expected} initial values, got {got}")]
    InitialCount { expected: usize, got: usize },
    #[error("parameter `{0}` has no numeric binding")]
    UnboundParameter(String),
    #[error("unknown recurrence `{0}`")]
    Unknown(String),
    #[error("invalid embedding: {0}")]
    Embedding(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Stencil(#[from] StencilError),
    #[error(transparent)]
    Homogeneous(#[from] HomogeneousError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Index {
    Int(i64),
    Point(Point),
    /// A vertex of the exchange tree of a homogeneous pattern, written as
    /// the word `F_{w_1} ∘ ... ∘ F_{w_m}` leading to it from the root.
    Word { word: Vec<usize> },
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Int(k) => write!(f, "{k}"),
            Index::Point(p) => write!(f, "{}", point_name("", p)),
            Index::Word { word } => {
                let w: Vec<String> = word.iter().map(usize::to_string).collect();
                write!(f, "<{}>", w.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermValue {
    Laurent { value: LaurentPoly },
    /// The numerator did not divide by the opposite term.
    NotLaurent { numerator: LaurentPoly, denominator: LaurentPoly },
    Rational { value: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub index: Index,
    pub value: TermValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermTable {
    pub recurrence: String,
    pub bindings: BTreeMap<String, i64>,
    pub entries: Vec<TermEntry>,
}

impl TermTable {
    pub fn get(&self, index: &Index) -> Option<&TermValue> {
        self.entries.iter().find(|e| &e.index == index).map(|e| &e.value)
    }

    pub fn laurent(&self, index: &Index) -> Option<&LaurentPoly> {
        match self.get(index)? {
            TermValue::Laurent { value } => Some(value),
            _ => None,
        }
    }

    pub fn rational(&self, index: &Index) -> Option<&BigRational> {
        match self.get(index)? {
            TermValue::Rational { value } => Some(value),
            _ => None,
        }
    }

    /// First index whose symbolic value failed to be Laurent.
    pub fn first_not_laurent(&self) -> Option<&Index> {
        self.entries
            .iter()
            .find(|e| matches!(e.value, TermValue::NotLaurent { .. }))
            .map(|e| &e.index)
    }

    pub fn integrality(&self) -> IntegralityReport {
        let first = self.entries.iter().find(|e| match &e.value {
            TermValue::Rational { value } => !value.is_integer(),
            _ => false,
        });
        IntegralityReport {
            all_integers: first.is_none(),
            first_non_integer: first.map(|e| e.index.clone()),
        }
    }

    /// Terms with a negative integer coefficient.
    pub fn negative_coefficients(&self) -> Vec<NegativeCoefficient> {
        let mut out = Vec::new();
        for e in &self.entries {
            if let TermValue::Laurent { value } = &e.value {
                for (m, c) in value.terms() {
                    if c.is_negative() {
                        out.push(NegativeCoefficient {
                            index: e.index.clone(),
                            monomial: LaurentPoly::monomial(value.space(), BigInt::from(1), m.clone()).to_string(),
                            coefficient: c.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TermTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.value {
                TermValue::Laurent { value } => writeln!(f, "y{} = {}", bracket(&e.index), value)?,
                TermValue::Rational { value } => writeln!(f, "y{} = {}", bracket(&e.index), value)?,
                TermValue::NotLaurent { numerator, denominator } => writeln!(
                    f,
                    "y{} = ({}) / ({})  [not Laurent]",
                    bracket(&e.index),
                    numerator,
                    denominator
                )?,
            }
        }
        Ok(())
    }
}

fn bracket(i: &Index) -> String {
    match i {
        Index::Int(k) => k.to_string(),
        Index::Point(p) => point_name("", p),
        Index::Word { .. } => i.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub all_integers: bool,
    pub first_non_integer: Option<Index>,
}

/// A coefficient violating the nonnegativity conjecture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeCoefficient {
    pub index: Index,
    pub monomial: String,
    pub coefficient: BigInt,
}

/// Images for composing a polynomial whose parameters are partly bound to
/// integers: bound parameters become constants, everything else is looked
/// up by name in `target` through `image`.
pub(crate) fn bound_images(
    source: &Arc<VarSpace>,
    target: &Arc<VarSpace>,
    bindings: &BTreeMap<String, i64>,
    mut image: impl FnMut(&str) -> Result<LaurentPoly, RecurrenceError>,
) -> Result<Vec<LaurentPoly>, RecurrenceError> {
    source
        .ids()
        .map(|v| {
            let name = source.name(v);
            match bindings.get(name) {
                Some(&c) if source.is_parameter(v) => Ok(LaurentPoly::constant(target, c)),
                _ => image(name),
            }
        })
        .collect()
}

/// Numeric values of the parameters; all must be bound.
pub(crate) fn numeric_params(
    space: &VarSpace,
    bindings: &BTreeMap<String, i64>,
) -> Result<BTreeMap<String, BigRational>, RecurrenceError> {
    space
        .parameter_ids()
        .map(|v| {
            let name = space.name(v);
            bindings
                .get(name)
                .map(|&c| (name.to_string(), BigRational::from_integer(c.into())))
                .ok_or_else(|| RecurrenceError::UnboundParameter(name.to_string()))
        })
        .collect()
}

pub(crate) fn nonzero(value: &BigRational, index: Index) -> Result<(), RecurrenceError> {
    if value.is_zero() {
        Err(RecurrenceError::ZeroTerm(index))
    } else {
        Ok(())
    }
}

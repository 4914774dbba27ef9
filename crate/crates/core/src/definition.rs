//! Recurrence definition files.
//!
//! One TOML grammar covers every kind; `kind` selects the fields that
//! follow. Polynomials use the expression grammar of [`crate::parse`].
//!
//! ```toml
//! name = "somos4gen"
//! kind = "one-dim"
//! n = 4
//! f = "x1^2*x3 + x2^3"        # y_{m+n} y_m = F(y_{m+1}, ..., y_{m+n-1})
//! params = []                 # formal parameters allowed in F
//!
//! name = "knight"
//! kind = "stencil"
//! shift = [2, 1]
//! lattice = "all"             # or "even_sum"
//! order = "product"           # or "cone"
//! key = [[1, 1], [1, 0]]      # linear forms compared lexicographically
//! template = "alpha*y[0,-1]*y[-2,0] + beta*y[-1,0]*y[-1,-1]"
//! params = ["alpha", "beta"]
//! region = [{ normal = [1, 0], offset = 0 }, { normal = [0, 1], offset = 0 }]
//!
//! name = "seq54"
//! kind = "homogeneous"
//! polys = ["x2^2 + c*x2 + d", "x1^2 + c*x1 + d"]   # P_1 .. P_n over x1 .. xn
//! params = ["c", "d"]
//! units = []                  # invertible coefficients, e.g. lambda
//! ```
//!
//! Every kind also accepts `description` and a `[bindings]` table of
//! integer parameter values. A one-dimensional file may name an
//! `embedding = { type = "gale_robinson", p = 1, q = 2, r = 3 }` or
//! `{ type = "two_term", p = 1, q = 2, n = 5 }`. A stencil file needs a
//! `region` (half-spaces `normal . h + offset >= 0`) only to compute terms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic::CyclicSpec;
use crate::homogeneous::{HomogeneousError, HomogeneousPattern};
use crate::recurrences::one_dim::CyclicSpecDef;
use crate::recurrences::{
    Embedding, HalfSpace, LatticeRecurrence, OneDimRecurrence, RecurrenceError, RecurrenceKind, RecurrenceSpec, Region,
};
use crate::stencil::{Lattice, PartialOrderKind, StencilDef, StencilError, StencilRecurrence};

#[derive(Debug, Error)]
pub enum DefinitionError {
    #[error("definition file: {0}")]
    Syntax(String),
    #[error("expected a {expected} definition, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("stencil `{0}` has no region, so terms cannot be computed")]
    MissingRegion(String),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Stencil(#[from] StencilError),
    #[error(transparent)]
    Homogeneous(#[from] HomogeneousError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(flatten)]
    pub body: Body,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    OneDim {
        n: usize,
        f: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        embedding: Option<Embedding>,
    },
    Stencil {
        shift: Vec<i64>,
        #[serde(default)]
        lattice: Lattice,
        #[serde(default)]
        order: PartialOrderKind,
        key: Vec<Vec<i64>>,
        template: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<Vec<HalfSpace>>,
    },
    Homogeneous {
        polys: Vec<String>,
        #[serde(default)]
        units: Vec<String>,
    },
}

impl Body {
    fn kind(&self) -> &'static str {
        match self {
            Body::OneDim { .. } => "one-dim",
            Body::Stencil { .. } => "stencil",
            Body::Homogeneous { .. } => "homogeneous",
        }
    }
}

impl Definition {
    pub fn from_toml(text: &str) -> Result<Self, DefinitionError> {
        let def: Definition = toml::from_str(text).map_err(|e| DefinitionError::Syntax(e.to_string()))?;
        // Parse everything once so errors surface at load time.
        def.to_spec_or_stencil()?;
        Ok(def)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("definitions serialize")
    }

    fn to_spec_or_stencil(&self) -> Result<(), DefinitionError> {
        match &self.body {
            Body::Stencil { region: None, .. } => self.stencil().map(drop),
            _ => self.to_spec().map(drop),
        }
    }

    fn wrong(&self, expected: &'static str) -> DefinitionError {
        DefinitionError::WrongKind {
            expected,
            found: self.body.kind(),
        }
    }

    pub fn one_dim(&self) -> Result<OneDimRecurrence, DefinitionError> {
        let Body::OneDim { n, f, .. } = &self.body else {
            return Err(self.wrong("one-dim"));
        };
        let def = CyclicSpecDef {
            n: *n,
            f: f.clone(),
            params: self.params.clone(),
        };
        Ok(OneDimRecurrence::from_def(&self.name, def, self.bindings.clone())?)
    }

    /// The exchange polynomial of a one-dimensional definition, parameters
    /// left formal.
    pub fn cyclic(&self) -> Result<CyclicSpec, DefinitionError> {
        let Body::OneDim { n, f, .. } = &self.body else {
            return Err(self.wrong("one-dim"));
        };
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        CyclicSpec::parse(*n, f, &params).map_err(|e| RecurrenceError::Invalid(e.to_string()).into())
    }

    pub fn stencil(&self) -> Result<StencilRecurrence, DefinitionError> {
        let Body::Stencil {
            shift,
            lattice,
            order,
            key,
            template,
            ..
        } = &self.body
        else {
            return Err(self.wrong("stencil"));
        };
        Ok(StencilRecurrence::new(StencilDef {
            name: self.name.clone(),
            shift: shift.clone(),
            lattice: *lattice,
            order: *order,
            key: key.clone(),
            template: template.clone(),
            params: self.params.clone(),
        })?)
    }

    pub fn pattern(&self) -> Result<HomogeneousPattern, DefinitionError> {
        let Body::Homogeneous { polys, units } = &self.body else {
            return Err(self.wrong("homogeneous"));
        };
        let polys: Vec<&str> = polys.iter().map(String::as_str).collect();
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        let units: Vec<&str> = units.iter().map(String::as_str).collect();
        Ok(HomogeneousPattern::parse(&self.name, &polys, &params, &units)?)
    }

    pub fn to_spec(&self) -> Result<RecurrenceSpec, DefinitionError> {
        let kind = match &self.body {
            Body::OneDim { embedding, .. } => {
                if let Some(e) = embedding {
                    e.validate()?;
                }
                RecurrenceKind::OneDim {
                    recurrence: self.one_dim()?,
                    embedding: *embedding,
                }
            }
            Body::Stencil { region, .. } => {
                let region = region.clone().ok_or_else(|| DefinitionError::MissingRegion(self.name.clone()))?;
                RecurrenceKind::Lattice {
                    recurrence: LatticeRecurrence::new(
                        &self.name,
                        self.stencil()?,
                        Region { half_spaces: region },
                        self.bindings.clone(),
                    )?,
                }
            }
            Body::Homogeneous { .. } => RecurrenceKind::Homogeneous {
                pattern: self.pattern()?,
                bindings: self.bindings.clone(),
            },
        };
        Ok(RecurrenceSpec {
            name: self.name.clone(),
            description: self.description.clone(),
            kind,
        })
    }

    pub fn from_spec(spec: &RecurrenceSpec) -> Self {
        let (body, params, bindings) = match &spec.kind {
            RecurrenceKind::OneDim { recurrence, embedding } => (
                Body::OneDim {
                    n: recurrence.spec.n,
                    f: recurrence.spec.f.clone(),
                    embedding: *embedding,
                },
                recurrence.spec.params.clone(),
                recurrence.bindings.clone(),
            ),
            RecurrenceKind::Lattice { recurrence } => {
                let d = recurrence.stencil.def();
                (
                    Body::Stencil {
                        shift: d.shift.clone(),
                        lattice: d.lattice,
                        order: d.order,
                        key: d.key.clone(),
                        template: d.template.clone(),
                        region: Some(recurrence.region.half_spaces.clone()),
                    },
                    d.params.clone(),
                    recurrence.bindings.clone(),
                )
            }
            RecurrenceKind::Homogeneous { pattern, bindings } => {
                let space = pattern.space();
                let mut params = Vec::new();
                let mut units = Vec::new();
                for v in space.ids().filter(|v| !pattern.vars().contains(v)) {
                    let name = space.name(v).to_string();
                    if space.is_parameter(v) {
                        params.push(name);
                    } else {
                        units.push(name);
                    }
                }
                let polys = (1..=pattern.n()).map(|i| pattern.p(i).to_string()).collect();
                (Body::Homogeneous { polys, units }, params, bindings.clone())
            }
        };
        Definition {
            name: spec.name.clone(),
            description: spec.description.clone(),
            body,
            params,
            bindings,
        }
    }
}

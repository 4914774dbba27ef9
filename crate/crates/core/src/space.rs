//! Variable spaces.
//!
//! Every [`LaurentPoly`](crate::LaurentPoly) lives in a [`VarSpace`]: an ordered
//! list of named variables. The position of a variable in the space fixes its
//! significance in the graded-lexicographic term order (earlier is more
//! significant).
//!
//! Variables come in two roles. `Exchange` variables are the cluster
//! variables; they are units of the Laurent ring and may carry negative
//! exponents. `Parameter` variables generate the coefficient ring
//! `A = Z[parameters]`; they are not units, so content extraction and
//! coprimality tests treat them like primes of `A`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Index of a variable inside its [`VarSpace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Exchange,
    Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub role: Role,
}

/// An ordered set of uniquely named variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Variable>", into = "Vec<Variable>")]
pub struct VarSpace {
    vars: Vec<Variable>,
    #[serde(skip)]
    lookup: HashMap<String, VarId>,
}

impl PartialEq for VarSpace {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VarSpace {}

impl VarSpace {
    pub fn new(vars: Vec<Variable>) -> Result<Self, AlgebraError> {
        let mut lookup = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() {
                return Err(AlgebraError::InvalidSpace("empty variable name".into()));
            }
            if lookup.insert(v.name.clone(), VarId(i as u32)).is_some() {
                return Err(AlgebraError::InvalidSpace(format!(
                    "duplicate variable name `{}`",
                    v.name
                )));
            }
        }
        Ok(VarSpace { vars, lookup })
    }

    pub fn builder() -> VarSpaceBuilder {
        VarSpaceBuilder::default()
    }

    /// Exchange variables named `{prefix}1 .. {prefix}n` followed by the given parameters.
    pub fn indexed(prefix: &str, n: usize, params: &[&str]) -> Result<Arc<Self>, AlgebraError> {
        let mut b = VarSpace::builder();
        for i in 1..=n {
            b = b.exchange(format!("{prefix}{i}"));
        }
        for p in params {
            b = b.parameter(*p);
        }
        b.build()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<VarId> {
        self.lookup.get(name).copied()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.index()]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.vars[id.index()].name
    }

    pub fn role(&self, id: VarId) -> Role {
        self.vars[id.index()].role
    }

    pub fn is_parameter(&self, id: VarId) -> bool {
        self.role(id) == Role::Parameter
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.vars.len() as u32).map(VarId)
    }

    pub fn exchange_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids().filter(|&v| self.role(v) == Role::Exchange)
    }

    pub fn parameter_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids().filter(|&v| self.role(v) == Role::Parameter)
    }

    /// Looks up `name`, failing with [`AlgebraError::UnknownVariable`].
    pub fn require(&self, name: &str) -> Result<VarId, AlgebraError> {
        self.index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }
}

impl TryFrom<Vec<Variable>> for VarSpace {
    type Error = AlgebraError;

    fn try_from(vars: Vec<Variable>) -> Result<Self, Self::Error> {
        VarSpace::new(vars)
    }
}

impl From<VarSpace> for Vec<Variable> {
    fn from(space: VarSpace) -> Self {
        space.vars
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

#[derive(Default)]
pub struct VarSpaceBuilder {
    vars: Vec<Variable>,
}

impl VarSpaceBuilder {
    pub fn exchange(mut self, name: impl Into<String>) -> Self {
        self.vars.push(Variable {
            name: name.into(),
            role: Role::Exchange,
        });
        self
    }

    pub fn parameter(mut self, name: impl Into<String>) -> Self {
        self.vars.push(Variable {
            name: name.into(),
            role: Role::Parameter,
        });
        self
    }

    pub fn var(mut self, name: impl Into<String>, role: Role) -> Self {
        self.vars.push(Variable {
            name: name.into(),
            role,
        });
        self
    }

    pub fn build(self) -> Result<Arc<VarSpace>, AlgebraError> {
        VarSpace::new(self.vars).map(Arc::new)
    }
}

/// True when both handles name the same space (pointer-equal or structurally equal).
pub(crate) fn same_space(a: &Arc<VarSpace>, b: &Arc<VarSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let err = VarSpace::builder().exchange("x").parameter("x").build();
        assert!(matches!(err, Err(AlgebraError::InvalidSpace(_))));
    }

    #[test]
    fn indexed_space_layout() {
        let s = VarSpace::indexed("x", 3, &["alpha"]).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.index_of("x2"), Some(VarId(1)));
        assert!(s.is_parameter(VarId(3)));
        assert_eq!(s.exchange_ids().count(), 3);
    }

    #[test]
    fn serde_round_trip_rebuilds_lookup() {
        let s = VarSpace::indexed("y", 2, &["c"]).unwrap();
        let json = serde_json::to_string(&*s).unwrap();
        let back: VarSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, *s);
        assert_eq!(back.index_of("c"), Some(VarId(2)));
    }
}

//! Exact sparse Laurent polynomial arithmetic and mechanical checks of the
//! Laurent phenomenon for exchange-pattern recurrences.

pub mod coprime;
pub mod cyclic;
pub mod definition;
pub mod error;
pub mod exchange;
pub mod homogeneous;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod recurrences;
pub mod space;
pub mod stencil;

pub use coprime::{coprime_probable, CoprimeVerdict, DEFAULT_TRIALS};
pub use definition::{Definition, DefinitionError};
pub use error::{AlgebraError, ParseError};
pub use monomial::{Monomial, MonomialUnit};
pub use poly::{Content, LaurentPoly};
pub use space::{Role, VarId, VarSpace, Variable};

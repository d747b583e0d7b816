//! Modules over R: finitely presented abelian groups, R-modules with an
//! involution, and their normal forms after localization.

mod abelian;
mod module;
mod zp;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::rep_ring::PrimeSpot;

pub use abelian::{homology, preimage_basis, subquotient, FgAbelian, Presentation};
pub use module::{
    one_minus_t_nilpotency_bound, validate_module, FgRModule, NotDvrReport, RModuleMap,
};
pub use zp::{homology_at, tensor_zp, tor1_zp, GradedZpModule, ZpModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RModError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("ill-defined map: {0}")]
    IllDefinedMap(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("modules over different primes: {0} and {1}")]
    MismatchedPrime(u64, u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a maximal ideal")]
    NotMaximal(PrimeSpot),
    #[error("{0} is not a minimal prime")]
    NotMinimal(PrimeSpot),
    #[error("not a module over a discrete valuation ring: {}", .0.reason)]
    NotDvrModule(NotDvrReport),
    #[error("invalid R-module: {}", .0.join("; "))]
    InvalidModule(Vec<String>),
}

//! Exact integer linear algebra: matrices over ℤ, Smith normal form,
//! lattice membership, and extension feasibility for finite p-modules.

mod matrix;
mod partition;
mod snf;

use thiserror::Error;

pub use matrix::IntMatrix;
pub use partition::{lr_coefficient, lr_extension_feasible, Partition};
pub use snf::{
    column_basis, kernel_basis, member_localized, snf, solve_membership, valuation, SnfResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{op}: shape mismatch ({}x{} vs {}x{})", left.0, left.1, right.0, right.1)]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

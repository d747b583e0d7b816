//! Exact computations with ℤ/2-equivariant K-theory: modules over the
//! representation ring R = ℤ[t]/(t² − 1), their localizations across
//! Spec R, the paired invariant 𝕂 = (K*_G, K*_{G,−}, φ, ψ), and the Künneth
//! sequences for products of ℤ/2-spaces.

pub mod json;
pub mod kinv;
pub mod kunneth;
pub mod linalg;
pub mod rep_ring;
pub mod rmod;
pub mod spaces;

pub use kinv::{KInvariant, SixTermData};
pub use kunneth::{KunnethResult, Settings};
pub use linalg::{IntMatrix, Partition};
pub use rep_ring::{LocalizationMode, PrimeSpot, RingElem};
pub use rmod::{FgAbelian, FgRModule, GradedZpModule, Presentation, ZpModule};
pub use spaces::{Catalog, SpaceExpr};

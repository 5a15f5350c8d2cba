//! Exact computation of SK₁ for p-adic group rings of finite groups.

pub mod abelian;
pub mod engine;
pub mod error;
pub mod group;
pub mod homology;
pub mod jobs;
pub mod lab;
pub mod linalg;
pub mod modp;
pub mod rings;

pub use abelian::{AbelianGroupPresentation, PModule};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupDescriptor};
pub use linalg::{BigMatrix, SmallMatrix};
pub use modp::Zpn;

//! Search for an unknown 1-dimensional subspace of GF(q)^n with subspace
//! membership queries.
//!
//! The crate covers field arithmetic, projective-space enumeration, separating
//! systems (non-adaptive search), adaptive games against fixed and adversarial
//! oracles, and closed-form bounds on the optimal query counts.

pub mod bounds;
pub mod error;
pub mod field;
pub mod game;
pub mod gaussian;
pub mod literal;
pub mod plane;
pub mod rng;
pub mod separating;
pub mod space;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use gaussian::gaussian_binomial;
pub use space::{Point, Space, Subspace, Vector};

/// Default cap on the number of points an enumeration may touch.
pub const DEFAULT_POINT_CAP: u64 = 1_000_000;

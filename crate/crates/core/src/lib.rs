//! Genus-2 curves over Q with Jacobians of positive rank: models, Jacobian
//! arithmetic, rank certificates, explicit families and density experiments.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod experiments;
pub mod families;
pub mod io;
pub mod jacobian;
pub mod models;
pub mod regev;

pub use algebra::{Field, Integer, Poly, PolyRing, PrimeField, Rational, Rationals};
pub use error::{Error, Result};
pub use models::{BoxKind, BoxSpec, InfinityType, ModelKey, WeierstrassModel};

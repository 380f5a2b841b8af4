//! Explicit curves with split Jacobians: the `d^3 x^6 + m^3` family, gluing
//! two elliptic curves along 2-torsion, twist parametrizations and the
//! Freeman-Satoh pairs.

pub mod elliptic;
pub mod freeman_satoh;
pub mod glue;
pub mod split;
pub mod twist;

pub use elliptic::{Cubic, EllipticPoint};
pub use freeman_satoh::{freeman_satoh_e, FreemanSatohCurve, FsForm};
pub use glue::{glue, rank_doubling_check, split_count_check, DoublingRow, GlueSpec, SplitCountRow};
pub use split::{frey_class, split_family, verify_split, FreyClass, SplitFamilyMember};
pub use twist::{twist_family_d, twist_witness, TwistFamilyPoint, TwistWitness, WitnessStatus};

#[cfg(test)]
mod tests;

//! Finite p-groups given by power-commutator presentations, the p-group
//! generation algorithm, and a descendant search constrained by abelian
//! quotient invariants of subgroup families.

pub mod abelian;
pub mod autgroup;
pub mod cases;
pub mod descend;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod pcover;
pub mod pcp;
pub mod structure;
pub mod tower;

pub use abelian::{is_quotient, AbelianInvariants};
pub use error::{Error, Result};
pub use pcp::{parse_presentation, Element, PcPresentation};
pub use structure::Subgroup;

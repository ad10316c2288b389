//! Finite inverse semigroups, their Booleanization and Exel completion, and a
//! symbolic model of the Cuntz inverse monoids.
//!
//! Everything is exact and finite: semigroups are Cayley tables over
//! [`ElementId`]s with zero at index 0, and every property is decided by
//! exhaustive check.

pub mod boolean;
pub mod completion;
pub mod cuntz;
pub mod error;
pub mod exec;
pub mod filters;
pub mod fixtures;
pub mod groupoid;
pub mod report;
pub mod suites;
pub mod table;

pub use boolean::{AdditiveIdeal, BooleanInvSemigroup, MorphismTable};
pub use error::{Error, Result};
pub use filters::{Cover, Filter};
pub use report::{Check, CheckReport};
pub use table::{ElementId, InverseSemigroupTable, PartialBijection};

//! Exact character theory for finite permutation groups: enumeration,
//! conjugacy classes, characteristic subgroups, character tables over
//! cyclotomic fields, Clifford-theoretic averages and bound checks.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod chartab;
pub mod classes;
pub mod clifford;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod metrics;
pub mod modp;
pub mod perm;
pub mod socle;
pub mod subgroup;
pub mod worked;

pub use chartab::{character_table, CharacterTable};
pub use classes::{conjugacy_classes, ConjugacyData};
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{PermGroup, DEFAULT_ORDER_CAP};
pub use perm::Permutation;
pub use subgroup::SubgroupHandle;

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;

//! Overpartition statistics, the separable overpartition classes `L_k` and
//! `F_k`, and exact checking of their generating-function identities against
//! brute-force enumeration.

pub mod cli;
pub mod enumeration;
pub mod identities;
pub mod overpartition;
pub mod separable;
pub mod series;

pub use enumeration::{BasisFamily, ClassTag};
pub use overpartition::{Bound, Convention, Overpartition, Part, Partition};
pub use series::{Count, QSeries, ZQPoly};
pub use identities::{IdentityId, Params, VerificationReport};

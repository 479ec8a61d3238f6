//! Multiplicative subshifts `X_Ω^(l)`: sequences whose restriction to every
//! geometric chain `i, il, il², …` is a point of a base shift `Ω`.
//!
//! The crate decides the mixing hierarchy of `Ω` (SFTs and spacing shifts),
//! builds verifiable connection certificates in `X_Ω^(l)`, decides witness
//! existence exactly for fixed multipliers, and cross-checks the relation
//! between the two sides over families of base shifts.

pub mod dimension;
pub mod error;
pub mod lambda;
pub mod mult;
pub mod oracle;
pub mod shift;
pub mod spec_file;
pub mod witness;
pub mod word;

pub use num_bigint::BigUint;

pub use error::{ArithError, MultError, ParseError, ShiftError, SpecFileError, VerifyError, WitnessError};
pub use mult::{MultShift, Pattern};
pub use oracle::{SearchBudget, Verdict};
pub use shift::{Constraints, GapSet, Property, PropertyVerdict, SftSpec, ShiftSpec, SpacingClass, SpacingSpec};
pub use spec_file::{parse_spec_str, CertificateFile, ParsedSpec, SpecFile};
pub use witness::{Construction, WitnessCertificate};
pub use word::{Symbol, Word};

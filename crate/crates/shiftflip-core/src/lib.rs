//! Shift spaces of finite type, their flips (shift-reversing involutions), and
//! the machinery built on top of them: fixed-point count invariants, membership
//! tests for almost-fixed points, witness constructions that separate flips up
//! to conjugacy, and an explicit coded system whose stable blocks admit no
//! nontrivial symbol involution.
//!
//! The crate is `no_std` + `alloc`: everything here is pure computation over
//! interned alphabets and words.  IO, file formats and the command line live in
//! the companion `shiftflip` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alphabet;
pub mod coded;
pub mod conjugacy;
pub mod construct;
pub mod error;
pub mod flip;
pub mod index_set;
pub mod invariants;
pub mod limits;
pub mod point;
pub mod presets;
pub mod sft;
pub mod word;

pub use alphabet::{Alphabet, Symbol, SymbolInvolution};
pub use conjugacy::ConjugacyDescriptor;
pub use error::Error;
pub use flip::{validate_flip, Flip, LocalRule, RuleTable, ThetaRule, ValidationReport};
pub use limits::SearchLimits;
pub use index_set::IndexSet;
pub use invariants::{AMembership, FVector, NonConjugacyCertificate};
pub use point::{EventuallyPeriodicPoint, PeriodicPoint};
pub use sft::SftPresentation;
pub use word::Word;

pub type Result<T> = core::result::Result<T, Error>;

//! B-free integers, their admissible languages, and sliding block codes
//! acting on the associated subshifts.

pub mod arith;
pub mod audit;
pub mod bset;
pub mod caps;
pub mod cli;
pub mod codes;
pub mod constructions;
pub mod error;
pub mod sieve;

pub use bset::BSet;
pub use caps::Caps;
pub use codes::Code;
pub use error::{Error, Result};
pub use sieve::{LanguageTable, Source, Word};

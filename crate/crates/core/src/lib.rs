//! Splittings of finite cyclic groups by multiplier sets.
//!
//! A multiplier set `M` of nonzero integers *splits* `Z_n` with splitter set
//! `S` when every nonzero residue is uniquely `m * s` with `m` in `M` and `s`
//! in `S`, while zero has no such representation. This crate verifies and
//! searches such splittings, builds them from direct logarithms and power
//! residue characters, and uses them as perfect codes correcting one
//! limited-magnitude error.
//!
//! Module map:
//!
//! * [`zmod`]: primality, factoring, primitive roots, discrete logarithms.
//! * [`factorization`]: factorizations `G = A + B` of cyclic groups and the
//!   complement search.
//! * [`splitting`]: multiplier sets, certificates, the splitter search.
//! * [`logarithms`]: logarithm tables, Kummer-Mills admissibility, the `8k`
//!   lift, and the split-prime scan.
//! * [`characters`]: `k`-characters, character scans, radius primes.
//! * [`structure`]: splitter structure for `M = [-1, 5]*`.
//! * [`codec`]: the single limited-magnitude error code.

pub mod characters;
pub mod codec;
mod cover;
mod error;
pub mod factorization;
pub mod logarithms;
mod parallel;
mod search;
pub mod splitting;
pub mod structure;
pub mod zmod;

pub use error::{Error, Result};
pub use search::{SearchOutcome, DEFAULT_BUDGET};

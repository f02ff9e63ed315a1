//! Exact and numeric machinery for odd-balanced unimodal sequences.
//!
//! The crate is `no_std` and only needs `alloc`. It contains
//!
//! * truncated power series over pluggable coefficient rings ([`series`],
//!   [`ring`], [`laurent`], [`cyclotomic`]),
//! * exact expansions of the rank generating function and its residue-class
//!   refinements ([`gf`]) together with a brute-force enumerator that serves as
//!   an independent oracle ([`enumerator`]),
//! * complex evaluation of theta, eta, Appell sums and the Mordell integral and
//!   checks of their transformation laws ([`modular`]),
//! * the mixed mock modular decomposition of the generating function
//!   ([`decomposition`]),
//! * asymptotic main terms, the Tauberian transfer and the convergence and
//!   log-concavity reports built from exact counts ([`asymptotics`]).
//!
//! IO, file formats and the command line live in the `oddbal` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod cyclotomic;
pub mod decomposition;
pub mod enumerator;
pub mod gf;
pub mod laurent;
pub mod modular;
pub mod precise;
pub mod ring;
pub mod series;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;

pub use cyclotomic::Cyclotomic;
pub use gf::RankTable;
pub use laurent::Laurent;
pub use modular::{EvalResult, HalfPlanePoint};
pub use ring::Ring;
pub use series::TruncatedSeries;

//! Exact arithmetic for p-adic measures, cyclotomic local factors, weight
//! combinatorics, Hodge/Newton polygons, Schur-Weyl polynomial operators, and
//! ordinarity bookkeeping. All arithmetic is exact: big integers, big
//! rationals, residues at explicit precision, and cyclotomic numbers
//! represented modulo cyclotomic polynomials.

pub mod bernoulli;
pub mod error;
pub mod cyclo;
pub mod halfint;
pub mod local_factors;
pub mod measures;
pub mod ordinarity;
pub mod padic;
pub mod polygons;
pub mod schur_weyl;
pub mod weights;

pub use error::Error;
pub use halfint::HalfInt;

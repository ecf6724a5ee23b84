//! Exact linear algebra over `Z/p^k`.
//!
//! Everything downstream (chain complexes, spectral sequence pages, bracket
//! computations) reduces to row spans, solving, and subquotients of free
//! modules over `Z/p^k`. Since `Z/p^k` has zero divisors for `k > 1`, the
//! canonical row form is the Howell form rather than a reduced echelon form:
//! it is the unique form that captures the full row span including the
//! non-saturated "trailing" spans, so span membership and solving work
//! directly against it.

mod error;
mod matrix;
mod modulus;
pub mod pmod;
mod presentation;
mod solve;

pub use error::LinearError;
pub use matrix::{HowellForm, Matrix};
pub use modulus::Modulus;
pub use presentation::{GroupPresentation, SubquotientPresentation};
pub use solve::Solution;

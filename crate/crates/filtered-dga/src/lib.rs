//! Finite filtered differential graded algebras.
//!
//! A `FilteredDga` is the algebraic stand-in for a tower of fibrations with
//! compatible pairings: mapping spaces out of the unit become chain groups,
//! homotopy becomes homology, nullhomotopies become bounding chains. The
//! filtration is a decreasing chain `F_0 ⊇ F_1 ⊇ … ⊇ F_L = 0` spanned by
//! basis elements, the differential lowers degree by one and preserves
//! filtration, and the product adds filtrations.

mod bracket;
mod complex;
mod dga;
mod error;
pub(crate) mod homology;
mod io;
mod random;

pub use bracket::{
    differential_source, differential_source_congruence_holds, toda_bracket, toda_filtered,
    Coset,
};
pub use complex::{ChainComplex, ChainMap, Cone, Subquotient, Window};
pub use dga::{DgaBuilder, FilteredDga, Generator, ValidationReport, Violation};
pub use error::DgaError;
pub use homology::{homology_product, HomologyGroup, WindowClass};
pub use io::{parse_dga, serialize_dga};
pub use random::{random_instance, RandomDgaParams};

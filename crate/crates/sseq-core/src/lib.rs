//! Spectral sequence pages and the machinery over them: page turning,
//! cycle/boundary subgroups of the E_1 page, Massey products with
//! indeterminacy, the crossing-differential check, and permanence status.
//!
//! Pages are bigraded presented p-groups indexed by `(stem, filtration)`.
//! The differential `d_r` lowers the stem by one and raises filtration by
//! `r`. Towers of pages remember, for every generator, a representative in
//! E_1 coordinates, so that independently computed pages can be compared
//! exactly.

mod crossing;
mod error;
mod from_dga;
mod massey;
mod page;
mod tower;

pub use crossing::{
    crossing_check, detects, permanent_cycle_status, CrossingOutcome, DeathWitness, Detection,
    PermanenceStatus, SseqData,
};
pub use error::SseqError;
pub use from_dga::{
    boundaries_br, cycles_zr, dga_tower, dr_tilde_matrix, e1_from_filtered, er_page,
    pages_agree, zr_characterizations_agree, ztilde, ztilde_isomorphism_holds,
    ztilde_square_commutes, E1Data, ErPage, ZtildeData,
};
pub use massey::{massey_on_page, PageCoset};
pub use page::{Bidegree, Page, PageElement, PageGroup};
pub use tower::{turn_page, PageTower, TurnedPage};

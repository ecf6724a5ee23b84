use crate::Bidegree;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SseqError {
    #[error("linear algebra error: {0}")]
    Linear(#[from] ring_linear::LinearError),
    #[error("chain-level error: {0}")]
    Dga(#[from] filtered_dga::DgaError),
    #[error("Leibniz fails on page {page} for generator pair {left:?} x {right:?}")]
    LeibnizFailure {
        page: u32,
        left: (Bidegree, usize),
        right: (Bidegree, usize),
    },
    #[error("d_r does not square to zero at {0:?}")]
    DifferentialSquare(Bidegree),
    #[error("page {0} is not available in this tower")]
    PageUnavailable(u32),
    #[error("element at {0:?} is not a d_r-cycle; it cannot enter a Massey product")]
    NotACycle(Bidegree),
    #[error("Massey product undefined: {which} at {bidegree:?} is not hit by d_r (class {class:?})")]
    MasseyUndefined {
        which: String,
        bidegree: Bidegree,
        class: Vec<u32>,
    },
    #[error("inconsistent chart data: {0}")]
    Consistency(String),
    #[error("element does not survive to the requested page")]
    DoesNotSurvive,
}

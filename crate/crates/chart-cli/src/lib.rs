//! Chart files, fixtures, the `moss` command line, and rendering.

pub mod cli;
pub mod convert;
pub mod fixtures;
pub mod render;
pub mod report;
pub mod schema;

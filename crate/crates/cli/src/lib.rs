//! File formats, Monte Carlo experiments and the `pcm` command line tool for
//! incomplete pairwise comparison matrices.

pub mod error;
pub mod format;
pub mod simulation;

pub use error::CliError;

use pcm_core::{RiProvenance, RiTable};

/// Random indices shipped with the tool, estimated with `pcm estimate-ri`.
pub const DEFAULT_RI_TABLE: &str = include_str!("../data/ri_table.txt");

pub fn default_ri_table() -> RiTable {
    format::parse_ri_table(DEFAULT_RI_TABLE, RiProvenance::Estimated).expect("shipped table parses")
}

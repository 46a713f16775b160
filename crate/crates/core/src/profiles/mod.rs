//! Concentration-compactness numerics: the refined Sobolev ratio,
//! single-bubble extraction from sequences, and decoupling checks.

mod decoupling;
mod extract;
mod sequence;
mod sobolev;

pub use decoupling::{
    decompose, decoupling_check, DecompositionReport, DecouplingReport, PairSeparation,
};
pub use extract::{
    extract_bubble, windowed_strichartz, Bubble, Extraction, ExtractionConfig, LowerBoundLog,
};
pub use sequence::{load_sequence, write_sequence, INDEX_FILE};
pub use sobolev::{
    refined_sobolev_ratio, refined_sobolev_ratio_with_theta, refined_sobolev_theta, RefinedSobolev,
};

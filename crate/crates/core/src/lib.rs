//! Complementarity spectra of finite simple digraphs.
//!
//! The complementarity spectrum of a digraph is the set of spectral radii of
//! its induced strongly connected subdigraphs (together with `0`, the radius
//! of a single vertex). This crate computes it with certified interval
//! bounds, classifies digraphs by spectrum cardinality, generates the
//! coalescence/theta families and their cospectral constructions, and runs
//! exhaustive searches for non-isomorphic cospectral mates at small order.

pub mod compspec;
pub mod digraph;
mod error;
pub mod families;
pub mod format;
pub mod poly;
pub mod sachs;
pub mod scc;
pub mod search;
pub mod spectral;
pub mod verify;

pub use compspec::{
    classify_cardinality, complementarity_spectrum, complementarity_spectrum_with, contains_cycle,
    spectra_equal, verify_eicp_definition, Cardinality, CardinalityClass, CompSpectrum,
    SpectrumOptions, SpectrumValue,
};
pub use digraph::{canonical_form, is_isomorphic, Digraph, VertexSet};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use poly::Polynomial;
pub use scc::SccDecomposition;
pub use spectral::RadiusEstimate;

/// Default tolerance for certified spectral radii.
pub const DEFAULT_RADIUS_TOL: f64 = 1e-12;

/// Default tolerance for identifying equal spectrum values.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

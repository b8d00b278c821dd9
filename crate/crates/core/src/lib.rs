//! Derived-category computations for toric flips and flops given by a
//! weight sequence `(a_1..a_m; b_1..b_n)`: charts and singularities,
//! threshold-ideal resolutions, Čech cohomology of twisted line bundles,
//! and the Fourier-Mukai functors between the two sides of the flip.

#![allow(clippy::needless_range_loop)]

pub mod cech;
pub mod charts;
pub mod checks;
pub mod complex;
pub mod error;
pub mod functors;
pub mod graded;
pub mod linalg;
pub mod resolution;
pub mod sheaf;
pub mod weights;

pub use charts::{
    atlas_report, minus_chart, plus_chart, y_chart, AtlasEntry, CyclicQuotientChart, QuotientTypeNormalForm,
};
pub use complex::{Entry, MonomialComplex, Term};
pub use error::{Error, Result};
pub use graded::{degree, homology_dims, section_basis, Character, Localization, Monomial, StrandComplex};
pub use linalg::IntMatrix;
pub use resolution::{
    build_resolution, minimal_resolution_degrees, threshold_generators, verify_degree_bounds, Block, ResolutionDegrees,
    ThresholdIdeal,
};
pub use sheaf::{DivisorId, PushforwardResult, SkyscraperPattern, Space, TwistClass};
pub use weights::{
    canonical_extension, classical_name, classify, normalize, ClassificationReport, FfDirection, Kind, WeightSequence,
};

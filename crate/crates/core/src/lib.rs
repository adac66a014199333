//! Second-order random networks built on the intersection algebra of a
//! coherent configuration.
//!
//! The pipeline: pick a [`SchemeDescriptor`], build its
//! [`IntersectionAlgebra`], describe the covariance as an
//! [`AlgebraElement`], take its square root in the algebra, and sample
//! thresholded Gaussian graphs with a [`Sampler`]. [`motif`] summarizes the
//! results.

pub mod algebra;
pub mod config;
pub mod error;
pub mod io;
pub mod motif;
pub mod sampler;
pub mod scheme;

pub use algebra::{AlgebraElement, IntersectionAlgebra, IntersectionMatrix, SpectralSummary};
pub use config::{RunConfig, RunRecord};
pub use error::{Error, Result};
pub use motif::{DegreeDirection, DegreeHistogram, EnsembleCensus, MotifCensus, VertexClass};
pub use sampler::{GraphSample, Sampler, SamplerConfig, StructuredOperator};
pub use scheme::{Edge, RelationId, SchemeDescriptor, SchemeKind, StructureConstants};

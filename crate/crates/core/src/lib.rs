//! Second-order local geometry of regular and corank-1 singular surfaces
//! and 3-manifolds given by their 2-jets in Monge form.
//!
//! A jet is stored as one symmetric matrix per normal coordinate. From it the
//! crate computes fundamental forms, samples and classifies the curvature
//! locus, takes normal sections and tangent projections, finds asymptotic
//! directions and classifies corank-1 jets up to A^2-equivalence.

pub mod asymptotic;
pub mod cli;
pub mod error;
pub mod export;
pub mod forms;
pub mod jet;
pub mod linalg;
pub mod locus;
pub mod manifest;
pub mod orbit;
pub mod sections;

pub use error::{GeometryError, Result};
pub use jet::{JetShape, ManifoldClass, MongeJet, NormalDirection, ProjectiveDirection};
pub use locus::{classify_locus, sample_locus, GridSpec, LocusType};

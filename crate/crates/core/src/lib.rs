//! Exact hard-core and semiproper-colouring partition functions, clique
//! lower bounds, and a harness that checks the surrounding inequalities
//! numerically.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod graph;
pub mod partition;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{NamedKind, SimpleGraph, VertexMask};
pub use partition::ActivityMatrix;
pub use scalar::{Rational, Scalar};
pub use spectral::{Spectrum, WeightedModel};

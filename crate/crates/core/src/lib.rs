//! Fully hyperbolic hyper-star message passing over knowledge hypergraphs.
//!
//! Points live on the Lorentz hyperboloid `⟨x,x⟩_H = 1/k`. Entities, relations and
//! per-(relation, position) features are stored as Euclidean rows, lifted through the
//! exponential map at the origin, and refined by two-stage message passing
//! (hyperedge centroid, then node centroid over composed incident messages).
//! Decoders score tuples or classify nodes from the origin tangent space.

pub mod autodiff;
pub mod cli;
pub mod data;
pub mod decoders;
pub mod encoder;
pub mod error;
pub mod lorentz;
pub mod metrics;
pub mod rng;
pub mod train;

pub use error::{Error, Result};

//! Computes the von Neumann dimension of the kernel of a crossed-product
//! operator over the lamplighter shift `(Z/p)^Z x (Z/2)^3` by splitting the
//! space into finite S-graphs.
//!
//! The pipeline is: [`dynamics`] (space, group, action) feeds
//! [`operator`] (the operators `S` and `T`), whose orbits are cut into finite
//! graphs by [`decomposer`] and classified against the templates in
//! [`families`]. [`dimension`] sums the per-graph kernel dimensions with
//! certified tails; [`duality`] exports `T` as a rational group-ring element.

pub mod decomposer;
pub mod dimension;
pub mod duality;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod families;
pub mod operator;
pub mod sgraph;

pub use error::{Error, Result};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

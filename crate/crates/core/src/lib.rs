//! Combinatorial calculus for Morse functions on compact orientable surfaces.
//!
//! The central object is the decorated Kronrod-Reeb graph ([`KrGraph`]): the
//! quotient of a surface by the connected components of the level sets of a
//! Morse function, with bold edges for arc components, thin edges for circle
//! components, and wall labels tracking the boundary arcs that bold edges
//! sweep along.
//!
//! On top of the graph the crate provides
//!
//! * invariant-based deciders for path components of function spaces
//!   ([`surface::same_component_real`], [`surface::same_component_circle`]),
//! * canonical graphs built from invariants ([`canonical`]),
//! * elementary surgeries and normalization to canonical form ([`surgery`]),
//! * circle-valued graphs with cut and glue along regular values ([`circle`]),
//! * a text format, DOT export, exhaustive enumeration and random walks
//!   ([`text`], [`dot`], [`enumerate`], [`walk`]).

pub mod canonical;
pub mod circle;
pub mod dot;
pub mod enumerate;
mod error;
pub mod graph;
pub mod surface;
pub mod surgery;
pub mod text;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{DerivedInvariants, Edge, KrGraph, Style, Vertex, VertexKind};
pub use surface::{
    BoundaryBehavior, BoundaryComponent, CircleMorseDescriptor, RealMorseDescriptor, SurfaceSig,
    ValidationReport,
};

/// Heights are exact rationals; only their order is ever significant.
pub type Height = num_rational::Ratio<i64>;

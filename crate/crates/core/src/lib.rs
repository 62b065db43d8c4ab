//! Size functions of vertex-weighted graphs and their behaviour under
//! occlusion.
//!
//! * [`graph`]: the sublevel filtration of a [`FilteredGraph`], component
//!   counts, relative and cycle ranks, inclusion-induced maps.
//! * [`sizefn`]: size-function values, cornerpoints with multiplicities,
//!   reconstruction from cornerpoints, Hausdorff and matching comparisons.
//! * [`mv`]: decompositions `X = A ∪ B`, kernel ranks of the Mayer-Vietoris
//!   maps, the corrected inclusion-exclusion relation and the sufficient
//!   conditions for it.
//! * [`imaging`]: PBM rasters, pixel graphs, the eight line-distance
//!   measuring functions and the two occlusion patterns.
//! * [`experiment`]: the fingerprinting and recognition protocols.

pub mod error;
pub mod experiment;
pub mod format;
pub mod graph;
pub mod imaging;
pub mod linalg;
pub mod mv;
pub mod sizefn;
mod unionfind;

pub use error::{Error, Result};
pub use graph::{ComponentLabeling, CriticalValueSet, FilteredGraph, VertexId};
pub use mv::Decomposition;
pub use sizefn::{Cornerpoint, CornerpointSet, SizeFunctionGrid};

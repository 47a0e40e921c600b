// Index-driven loops over parallel arrays are the norm in this crate's
// matrix and table code; the range-loop lint fights that style.
#![allow(clippy::needless_range_loop)]

//! Exact computer algebra for Mackey and Green functors over a finite
//! group: the span category of finite G-sets, Day-convolution tensor
//! products, internal homs, the Dress construction, crossed G-sets and the
//! Green algebra, with machine-checkable certificates for the structural
//! isomorphisms.

pub mod certificate;
pub mod convolution;
pub mod crossed;
pub mod format;
pub mod green;
pub mod group;
pub mod gset;
pub mod linalg;
pub mod mackey;
pub mod morphism_search;
pub mod reps;
pub mod span;

//! Boundary-complexity invariant of compact manifolds computed from ordered
//! handle decompositions.
//!
//! An ordered decomposition is replayed handle by handle; after each prefix
//! the free boundary splits into connected closed components, and the
//! invariant of the ordering is the largest total rational Betti number seen
//! on any component. On top of that sit an ordering search, bound
//! bookkeeping, a boundary-union composer with its inequality checker, and
//! the piece-counting obstruction for decompositions into many-boundary
//! pieces.

pub mod catalog;
pub mod homology;
pub mod trace;
pub mod nu;
pub mod obstruction;
pub mod sample;
pub mod union;

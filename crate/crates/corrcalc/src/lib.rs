//! Workbench for 3-manifolds presented as branched coverings of the
//! 3-sphere.
//!
//! Coverings are encoded as permutation representations of the fundamental
//! group of the branch-locus complement. A manifold carrying two such
//! coverings is a correspondence between the marked subgraphs of the two
//! branch loci; correspondences compose by the fibered product, realized
//! combinatorially as the orbit decomposition of the product sheet action
//! over the shared middle sphere. On top of the composition table sit the
//! convolution algebra with its involution, degree-driven time evolutions,
//! creation/annihilation operators and Hamiltonians, declared cobordism
//! quotients with 2-cell products, and the partition-function and
//! multiplicity-bound numerics.

pub mod algebra;
pub mod bounds;
pub mod cli;
pub mod cobordism;
pub mod correspondence;
pub mod covering;
pub mod io;
pub mod perm;
pub mod presentation;
pub mod session;

//! Exact convex geometry: hulls, Minkowski sums, affine images, face
//! lattices, vertex–edge graphs and maximum cliques.

pub mod chart;
pub mod clique;
mod hull;
pub mod lattice;
pub mod polytope;

pub use chart::{affine_rank, AffineChart};
pub use clique::max_clique;
pub use lattice::{faces, graph, FaceLattice, Graph};
pub use polytope::{
    affine_image, conv_union, convex_hull, minkowski_sum, minkowski_sum_all,
    restrict_to_affine_hull, Facet, Polytope, Restricted,
};

//! Depth of neural-network polytopes: construction trees, the bounds engine,
//! polygon decomposition and polytope families.

pub mod bounds;
pub mod expr;
pub mod families;
pub mod polygon;
pub mod zonotope;

pub use bounds::{
    check_single_decomposition_upper, depth_bounds, depth_bounds_with, BoundsOptions,
    KnownPolytope, PolyDepthInterval, PolyRule, PolyRuleApplication,
};
pub use expr::{depth_upper_vertex_split, realize, vertex_split_expr, PolytopeExpr};
pub use families::{
    bipyramid, cyclic, cyclic_standard, generic_zonotope, octahedron, prism, pyramid, simplex,
    triangular_bipyramid, zonotope, Provenance, Tagged,
};
pub use polygon::polygon_decompose;
pub use zonotope::{
    asymmetric_two_face, generic_generators, in_general_position, is_zonotope,
    zonotope_vertex_count,
};

//! Continuous piecewise linear functions in symbolic form.

mod affine;
mod expr;

pub use affine::{affinely_independent, normalize_max, transport_map, AffineFn, AffineMap, MaxAffine};
pub use expr::{evaluate, simplify_sum_scale, CpwlExpr, WangSunForm};

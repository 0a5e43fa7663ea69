//! Exact-arithmetic tooling for minimal-depth questions about ReLU networks
//! and neural-network polytopes.

pub mod bitset;
pub mod bridge;
pub mod cpwl;
pub mod depth;
pub mod error;
pub mod geom;
pub mod io;
pub mod matrix;
pub mod point;
pub mod polydepth;
pub mod rational;
pub mod relu;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use point::Point;
pub use rational::Rational;

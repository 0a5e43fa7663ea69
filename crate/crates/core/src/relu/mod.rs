//! ReLU networks and compilers from symbolic CPWL functions.

pub(crate) mod compile;
mod network;

pub use compile::{compile_expr, compile_max_tree, compile_wang_sun, depth_bound};
pub use network::{
    eval_net, net_compose_affine, net_linear_combination, net_max_pair, net_scale, net_sum,
    Activation, Layer, ReluNetwork,
};

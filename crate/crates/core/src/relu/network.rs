//! ReLU networks with exact rational weights and the combinators for sum,
//! scaling, affine precomposition and pairwise max.

use num_traits::{One, Signed, Zero};

use crate::cpwl::AffineFn;
use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::point::Point;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Activation {
    Relu,
    None,
}

/// One affine map `x ↦ weights · x + bias`, optionally followed by ReLU.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub weights: Matrix,
    pub bias: Point,
    pub activation: Activation,
}

impl Layer {
    pub fn new(weights: Matrix, bias: Point, activation: Activation) -> Result<Self> {
        check_dim(weights.rows(), bias.dim())?;
        Ok(Layer {
            weights,
            bias,
            activation,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }

    fn forward(&self, x: &[Rational]) -> Vec<Rational> {
        let mut y = self.weights.mul_vec(x).expect("layer dimensions chain");
        for (v, b) in y.iter_mut().zip(&self.bias.0) {
            *v += b;
            if self.activation == Activation::Relu && v.is_negative() {
                *v = Rational::zero();
            }
        }
        y
    }
}

/// Feed-forward ReLU network: every layer but the last is ReLU-activated.
/// Networks built through [`ReluNetwork::new`] have scalar output; the
/// combinators use vector-valued networks internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReluNetwork {
    input_dim: usize,
    layers: Vec<Layer>,
}

impl ReluNetwork {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self> {
        let net = Self::vector(input_dim, layers)?;
        check_dim(1, net.output_dim())?;
        Ok(net)
    }

    pub(crate) fn vector(input_dim: usize, layers: Vec<Layer>) -> Result<Self> {
        let last = layers.len().checked_sub(1).ok_or(Error::EmptyInput("network layers"))?;
        let mut width = input_dim;
        for (i, l) in layers.iter().enumerate() {
            check_dim(width, l.in_dim())?;
            let expected = if i == last {
                Activation::None
            } else {
                Activation::Relu
            };
            if l.activation != expected {
                return Err(Error::InvalidArgument(format!(
                    "layer {i} must have activation {expected:?}"
                )));
            }
            width = l.out_dim();
        }
        Ok(ReluNetwork { input_dim, layers })
    }

    /// Depth-0 network computing the given affine functions.
    pub fn affine(ls: &[AffineFn]) -> Result<Self> {
        let n = ls.first().ok_or(Error::EmptyInput("affine outputs"))?.dim();
        let w = Matrix::from_rows(ls.iter().map(|l| l.coeffs.0.clone()).collect(), n)?;
        let b = Point(ls.iter().map(|l| l.constant.clone()).collect());
        Self::vector(n, vec![Layer::new(w, b, Activation::None)?])
    }

    pub fn zero(n: usize) -> Self {
        Self::affine(&[AffineFn::zero(n)]).expect("zero network")
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of ReLU layers.
    pub fn hidden_depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn hidden_widths(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(Layer::out_dim)
            .collect()
    }

    pub fn eval_vec(&self, x: &Point) -> Result<Vec<Rational>> {
        check_dim(self.input_dim, x.dim())?;
        let mut v = x.0.clone();
        for l in &self.layers {
            v = l.forward(&v);
        }
        Ok(v)
    }

    fn last(&self) -> &Layer {
        self.layers.last().expect("nonempty")
    }

    /// Replaces the output `y` by `relu(y) − relu(−y)`.
    pub fn deepen(&self) -> ReluNetwork {
        let last = self.last();
        let k = last.out_dim();
        let hidden = Layer {
            weights: Matrix::vstack(&[&last.weights, &last.weights.scale(&-Rational::one())])
                .expect("same columns"),
            bias: Point([last.bias.0.clone(), (-&last.bias).0].concat()),
            activation: Activation::Relu,
        };
        let id = Matrix::identity(k);
        let out = Layer {
            weights: Matrix::from_rows(
                (0..k)
                    .map(|i| [id.row(i).to_vec(), id.row(i).iter().map(|v| -v).collect()].concat())
                    .collect(),
                2 * k,
            )
            .expect("width 2k"),
            bias: Point::zeros(k),
            activation: Activation::None,
        };
        let mut layers = self.layers[..self.layers.len() - 1].to_vec();
        layers.push(hidden);
        layers.push(out);
        ReluNetwork {
            input_dim: self.input_dim,
            layers,
        }
    }

    pub fn deepen_to(&self, depth: usize) -> ReluNetwork {
        let mut net = self.clone();
        while net.hidden_depth() < depth {
            net = net.deepen();
        }
        net
    }

    /// `x ↦ matrix · N(x) + offset`, fused into the output layer.
    pub fn map_output(&self, matrix: &Matrix, offset: &Point) -> Result<ReluNetwork> {
        let last = self.last();
        check_dim(last.out_dim(), matrix.cols())?;
        check_dim(matrix.rows(), offset.dim())?;
        let weights = matrix.mul(&last.weights)?;
        let bias = &matrix.apply(&last.bias)? + offset;
        let mut layers = self.layers.clone();
        *layers.last_mut().expect("nonempty") = Layer::new(weights, bias, Activation::None)?;
        Ok(ReluNetwork {
            input_dim: self.input_dim,
            layers,
        })
    }

    /// Turns the output layer into a ReLU layer `relu(gate · y)` and reads out
    /// `readout · (that)`.
    pub(crate) fn append_hidden(&self, gate: &Matrix, readout: &Matrix) -> Result<ReluNetwork> {
        let last = self.last();
        check_dim(last.out_dim(), gate.cols())?;
        check_dim(gate.rows(), readout.cols())?;
        let hidden = Layer::new(
            gate.mul(&last.weights)?,
            gate.apply(&last.bias)?,
            Activation::Relu,
        )?;
        let out = Layer::new(readout.clone(), Point::zeros(readout.rows()), Activation::None)?;
        let mut layers = self.layers[..self.layers.len() - 1].to_vec();
        layers.push(hidden);
        layers.push(out);
        Ok(ReluNetwork {
            input_dim: self.input_dim,
            layers,
        })
    }

    /// Runs networks side by side on the same input and concatenates their
    /// outputs. Shallower networks are deepened first.
    pub fn parallel(nets: &[ReluNetwork]) -> Result<ReluNetwork> {
        let first = nets.first().ok_or(Error::EmptyInput("networks"))?;
        let n = first.input_dim;
        for net in nets {
            check_dim(n, net.input_dim)?;
        }
        let depth = nets.iter().map(ReluNetwork::hidden_depth).max().expect("nonempty");
        let padded: Vec<ReluNetwork> = nets.iter().map(|net| net.deepen_to(depth)).collect();
        let mut layers = Vec::with_capacity(depth + 1);
        for li in 0..=depth {
            let ws: Vec<&Matrix> = padded.iter().map(|p| &p.layers[li].weights).collect();
            let weights = if li == 0 {
                Matrix::vstack(&ws)?
            } else {
                Matrix::block_diag(&ws)
            };
            let bias = Point(
                padded
                    .iter()
                    .flat_map(|p| p.layers[li].bias.0.iter().cloned())
                    .collect(),
            );
            layers.push(Layer::new(weights, bias, padded[0].layers[li].activation)?);
        }
        Ok(ReluNetwork { input_dim: n, layers })
    }
}

/// `N₁ + N₂`, with depth the larger of the two.
pub fn net_sum(a: &ReluNetwork, b: &ReluNetwork) -> Result<ReluNetwork> {
    net_linear_combination(&[(Rational::one(), a.clone()), (Rational::one(), b.clone())])
}

/// `Σ αᵢ Nᵢ` for scalar networks, with depth the largest operand depth.
pub fn net_linear_combination(parts: &[(Rational, ReluNetwork)]) -> Result<ReluNetwork> {
    let nets: Vec<ReluNetwork> = parts.iter().map(|(_, n)| n.clone()).collect();
    for net in &nets {
        check_dim(1, net.output_dim())?;
    }
    let both = ReluNetwork::parallel(&nets)?;
    let row: Vec<Rational> = parts.iter().map(|(a, _)| a.clone()).collect();
    both.map_output(&Matrix::from_rows(vec![row], parts.len())?, &Point::zeros(1))
}

/// `α · N`, by scaling the output layer.
pub fn net_scale(alpha: &Rational, net: &ReluNetwork) -> ReluNetwork {
    let k = net.output_dim();
    net.map_output(&Matrix::identity(k).scale(alpha), &Point::zeros(k))
        .expect("square output map")
}

/// `x ↦ N(matrix · x + offset)`, fused into the first layer.
pub fn net_compose_affine(net: &ReluNetwork, matrix: &Matrix, offset: &Point) -> Result<ReluNetwork> {
    check_dim(net.input_dim, matrix.rows())?;
    check_dim(matrix.rows(), offset.dim())?;
    let first = &net.layers[0];
    let weights = first.weights.mul(matrix)?;
    let bias = &first.weights.apply(offset)? + &first.bias;
    let mut layers = net.layers.clone();
    layers[0] = Layer::new(weights, bias, first.activation)?;
    Ok(ReluNetwork {
        input_dim: matrix.cols(),
        layers,
    })
}

/// Gate for `max(a, b) = relu(a − b) + relu(b) − relu(−b)`.
pub(crate) fn max_pair_gate() -> (Matrix, Matrix) {
    (
        Matrix::from_int_rows(&[&[1, -1], &[0, 1], &[0, -1]]),
        Matrix::from_int_rows(&[&[1, 1, -1]]),
    )
}

/// `max(N₁, N₂)`, one layer deeper than the deeper operand.
pub fn net_max_pair(a: &ReluNetwork, b: &ReluNetwork) -> Result<ReluNetwork> {
    check_dim(1, a.output_dim())?;
    check_dim(1, b.output_dim())?;
    let both = ReluNetwork::parallel(&[a.clone(), b.clone()])?;
    let (gate, readout) = max_pair_gate();
    both.append_hidden(&gate, &readout)
}

/// Exact forward pass of a scalar network.
pub fn eval_net(net: &ReluNetwork, x: &Point) -> Result<Rational> {
    check_dim(1, net.output_dim())?;
    Ok(net.eval_vec(x)?.pop().expect("scalar output"))
}

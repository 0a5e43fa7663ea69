//! Compilers from symbolic CPWL functions to ReLU networks.

use std::collections::VecDeque;

use num_traits::One;

use crate::cpwl::{AffineFn, CpwlExpr, WangSunForm};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::relu::network::{
    max_pair_gate, net_compose_affine, net_linear_combination, net_max_pair, net_scale, ReluNetwork,
};
use crate::rational::{int, Rational};

/// Balanced max tree over `ls`: depth `⌈log₂ p⌉`. At each level adjacent
/// values are merged pairwise; an unpaired value is carried through
/// `relu(v) − relu(−v)`.
pub fn compile_max_tree(ls: &[AffineFn]) -> Result<ReluNetwork> {
    let mut net = ReluNetwork::affine(ls)?;
    let (pair_gate, pair_readout) = max_pair_gate();
    while net.output_dim() > 1 {
        let k = net.output_dim();
        let pairs = k / 2;
        let carry = k % 2;
        let hidden = 3 * pairs + 2 * carry;
        let mut gate = Matrix::zeros(hidden, k);
        let mut readout = Matrix::zeros(pairs + carry, hidden);
        for i in 0..pairs {
            for r in 0..3 {
                for c in 0..2 {
                    gate.set(3 * i + r, 2 * i + c, pair_gate.get(r, c).clone());
                }
                readout.set(i, 3 * i + r, pair_readout.get(0, r).clone());
            }
        }
        if carry == 1 {
            let h = 3 * pairs;
            gate.set(h, k - 1, int(1));
            gate.set(h + 1, k - 1, int(-1));
            readout.set(pairs, h, int(1));
            readout.set(pairs, h + 1, int(-1));
        }
        net = net.append_hidden(&gate, &readout)?;
    }
    Ok(net)
}

/// One max tree per term, combined linearly; depth is the deepest term.
pub fn compile_wang_sun(form: &WangSunForm) -> Result<ReluNetwork> {
    let n = form.dim();
    let mut parts = vec![(
        Rational::one(),
        ReluNetwork::affine(&[AffineFn::constant(n, form.constant().clone())])?,
    )];
    for (alpha, term) in form.terms() {
        parts.push((alpha.clone(), compile_max_tree(term.args())?));
    }
    net_linear_combination(&parts)
}

/// Order in which the children of a max node are merged: repeatedly the two
/// shallowest, first-come first-merged among equals.
pub(crate) fn merge_depth(mut depths: Vec<usize>) -> usize {
    depths.sort_unstable();
    let mut queue: VecDeque<usize> = depths.into();
    while queue.len() > 1 {
        let a = queue.pop_front().expect("two entries");
        let b = queue.pop_front().expect("two entries");
        insert_sorted(&mut queue, a.max(b) + 1);
    }
    queue.pop_front().unwrap_or(0)
}

fn insert_sorted(queue: &mut VecDeque<usize>, v: usize) {
    let pos = queue.iter().position(|&x| x > v).unwrap_or(queue.len());
    queue.insert(pos, v);
}

/// Hidden depth that [`compile_expr`] produces for `f`: sums, scalars and
/// affine precomposition keep the deepest child; a max node merges its
/// children pairwise, one extra layer per merge.
pub fn depth_bound(f: &CpwlExpr) -> Result<usize> {
    f.dim()?;
    Ok(depth_rec(f))
}

fn depth_rec(f: &CpwlExpr) -> usize {
    match f {
        CpwlExpr::Affine(_) => 0,
        CpwlExpr::Sum(ts) => ts.iter().map(depth_rec).max().unwrap_or(0),
        CpwlExpr::Scale(_, e) => depth_rec(e),
        CpwlExpr::Compose { inner, .. } => depth_rec(inner),
        CpwlExpr::Max(ts) => merge_depth(ts.iter().map(depth_rec).collect()),
    }
}

/// Compiles an expression tree bottom-up with the network combinators.
pub fn compile_expr(f: &CpwlExpr) -> Result<ReluNetwork> {
    f.dim()?;
    compile_rec(f)
}

fn compile_rec(f: &CpwlExpr) -> Result<ReluNetwork> {
    match f {
        CpwlExpr::Affine(l) => ReluNetwork::affine(std::slice::from_ref(l)),
        CpwlExpr::Sum(ts) => {
            let parts = ts
                .iter()
                .map(|t| Ok((Rational::one(), compile_rec(t)?)))
                .collect::<Result<Vec<_>>>()?;
            net_linear_combination(&parts)
        }
        CpwlExpr::Scale(a, e) => Ok(net_scale(a, &compile_rec(e)?)),
        CpwlExpr::Compose {
            inner,
            matrix,
            offset,
        } => net_compose_affine(&compile_rec(inner)?, matrix, offset),
        CpwlExpr::Max(ts) => {
            let mut nets = ts.iter().map(compile_rec).collect::<Result<Vec<_>>>()?;
            nets.sort_by_key(ReluNetwork::hidden_depth);
            let mut queue: VecDeque<ReluNetwork> = nets.into();
            while queue.len() > 1 {
                let a = queue.pop_front().expect("two entries");
                let b = queue.pop_front().expect("two entries");
                let merged = net_max_pair(&a, &b)?;
                let d = merged.hidden_depth();
                let pos = queue
                    .iter()
                    .position(|x| x.hidden_depth() > d)
                    .unwrap_or(queue.len());
                queue.insert(pos, merged);
            }
            queue.pop_front().ok_or(Error::EmptyInput("max of expressions"))
        }
    }
}

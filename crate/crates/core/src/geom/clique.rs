//! Exact maximum clique by branch and bound with a greedy-colouring bound.

use crate::bitset::BitSet;
use crate::geom::lattice::Graph;

/// A maximum clique of `g`, as sorted vertex indices.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    expand(g, &mut current, BitSet::full(n), &mut best);
    best.sort_unstable();
    best
}

/// Greedy sequential colouring of `cand`; returns vertices in colour order
/// together with the colour count seen so far (an upper bound on any clique
/// inside the prefix).
fn colour_order(g: &Graph, cand: &BitSet) -> Vec<(usize, usize)> {
    let mut uncoloured = cand.clone();
    let mut out = Vec::with_capacity(cand.len());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut avail = uncoloured.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            uncoloured.remove(v);
            for u in g.neighbors(v).iter() {
                if avail.contains(u) {
                    avail.remove(u);
                }
            }
            out.push((v, colour));
        }
    }
    out
}

fn expand(g: &Graph, current: &mut Vec<usize>, mut cand: BitSet, best: &mut Vec<usize>) {
    if cand.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    let order = colour_order(g, &cand);
    for &(v, colour) in order.iter().rev() {
        if current.len() + colour <= best.len() {
            return;
        }
        current.push(v);
        let next = cand.intersection(g.neighbors(v));
        expand(g, current, next, best);
        current.pop();
        cand.remove(v);
    }
}

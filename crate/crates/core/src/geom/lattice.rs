//! Face lattice and vertex–edge graph of a polytope.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::geom::chart::affine_rank;
use crate::geom::polytope::{convex_hull, Polytope};
use crate::point::Point;

/// All nonempty faces of a polytope, grouped by dimension. Each face is the
/// sorted set of its vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl FaceLattice {
    pub fn build(p: &Polytope) -> FaceLattice {
        let d = p.intrinsic_dim();
        let nv = p.num_vertices();
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
        if d == 0 {
            by_dim[0].push(vec![0]);
            return FaceLattice { by_dim };
        }

        let facets: Vec<BTreeSet<usize>> = p
            .facets()
            .iter()
            .map(|f| f.vertices.iter().copied().collect())
            .collect();
        let mut seen: HashSet<BTreeSet<usize>> = facets.iter().cloned().collect();
        let mut queue: VecDeque<BTreeSet<usize>> = facets.iter().cloned().collect();
        while let Some(face) = queue.pop_front() {
            for g in &facets {
                let meet: BTreeSet<usize> = face.intersection(g).copied().collect();
                if !meet.is_empty() && seen.insert(meet.clone()) {
                    queue.push_back(meet);
                }
            }
        }

        for face in seen {
            let pts: Vec<Point> = face.iter().map(|&i| p.vertices()[i].clone()).collect();
            let k = affine_rank(&pts);
            by_dim[k].push(face.into_iter().collect());
        }
        by_dim[d].push((0..nv).collect());
        for level in &mut by_dim {
            level.sort();
        }
        FaceLattice { by_dim }
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        &self.by_dim[k]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// Incidences between `k`-faces and `(k+1)`-faces as index pairs.
    pub fn covers(&self, k: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if k >= self.dim() {
            return out;
        }
        for (i, lo) in self.by_dim[k].iter().enumerate() {
            for (j, hi) in self.by_dim[k + 1].iter().enumerate() {
                if lo.iter().all(|v| hi.binary_search(v).is_ok()) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// All `k`-faces of `P` as polytopes.
pub fn faces(p: &Polytope, k: usize) -> Result<Vec<Polytope>> {
    let d = p.intrinsic_dim();
    if k > d {
        return Err(Error::OutOfRange {
            what: "face dimension",
            value: k,
            min: 0,
            max: d,
        });
    }
    p.lattice()
        .faces(k)
        .iter()
        .map(|f| {
            let pts: Vec<Point> = f.iter().map(|&i| p.vertices()[i].clone()).collect();
            convex_hull(&pts)
        })
        .collect()
}

/// Simple undirected graph on `0..n` with bitset adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &BitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.adj.len() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BitSet::len).sum::<usize>() / 2
    }

    pub fn is_complete(&self) -> bool {
        let n = self.adj.len();
        self.num_edges() == n * n.saturating_sub(1) / 2
    }
}

/// Vertex–edge graph: `(u, v)` is an edge iff the intersection of all facets
/// containing both vertices is exactly `{u, v}`.
pub fn graph(p: &Polytope) -> Graph {
    let n = p.num_vertices();
    let mut g = Graph::new(n);
    match p.intrinsic_dim() {
        0 => return g,
        1 => {
            g.add_edge(0, 1);
            return g;
        }
        _ => {}
    }
    let facet_sets: Vec<BitSet> = p
        .facets()
        .iter()
        .map(|f| {
            let mut s = BitSet::new(n);
            for &v in &f.vertices {
                s.insert(v);
            }
            s
        })
        .collect();
    let mut incident: Vec<BitSet> = vec![BitSet::new(facet_sets.len()); n];
    for (fi, f) in p.facets().iter().enumerate() {
        for &v in &f.vertices {
            incident[v].insert(fi);
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let common = incident[u].intersection(&incident[v]);
            if common.is_empty() {
                continue;
            }
            let mut meet = BitSet::full(n);
            for fi in common.iter() {
                meet = meet.intersection(&facet_sets[fi]);
            }
            if meet.len() == 2 {
                g.add_edge(u, v);
            }
        }
    }
    g
}

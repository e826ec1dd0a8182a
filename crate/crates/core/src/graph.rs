//! Simple graphs on at most 64 vertices, stored as neighbour bitsets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Largest graph for which exhaustive independent-set enumeration is allowed.
pub const ENUMERATION_LIMIT: usize = 24;

/// A subset of the vertices of a graph, one bit per vertex.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMask(pub u64);

impl VertexMask {
    pub const EMPTY: VertexMask = VertexMask(0);

    pub fn full(n: usize) -> Self {
        VertexMask(low_bits(n))
    }

    pub fn singleton(v: usize) -> Self {
        VertexMask(1 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        VertexMask(vs.into_iter().fold(0u64, |m, v| m | (1 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> Bits {
        Bits(self.0)
    }
}

impl fmt::Debug for VertexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedKind {
    Clique,
    PathEdges,
    Cycle,
    Empty,
}

/// Finite simple graph: symmetric, irreflexive adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<u64>,
    degrees: Vec<usize>,
    max_degree: usize,
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.vertex_count(), self.edges())
    }
}

impl SimpleGraph {
    fn from_adjacency(adj: Vec<u64>) -> Self {
        let degrees: Vec<usize> = adj.iter().map(|a| a.count_ones() as usize).collect();
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        SimpleGraph { adj, degrees, max_degree }
    }

    /// The graph with no vertices; every partition function on it is 1.
    pub fn null() -> Self {
        Self::from_adjacency(Vec::new())
    }

    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "vertex count", size: n as u128, limit: MAX_VERTICES as u128 });
        }
        if n == 0 {
            return Err(invalid("a graph needs at least one vertex"));
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidEdge(u));
            }
            if adj[u] >> v & 1 == 1 {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self::from_adjacency(adj))
    }

    pub fn make_named(kind: NamedKind, size: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)>;
        let n = match kind {
            NamedKind::Clique => {
                if size < 1 {
                    return Err(invalid("clique needs at least one vertex"));
                }
                edges = (0..size).flat_map(|u| (u + 1..size).map(move |v| (u, v))).collect();
                size
            }
            NamedKind::PathEdges => {
                edges = (0..size).map(|i| (i, i + 1)).collect();
                size + 1
            }
            NamedKind::Cycle => {
                if size < 3 {
                    return Err(invalid(format!("cycle length {size} < 3")));
                }
                edges = (0..size).map(|i| (i, (i + 1) % size)).collect();
                size
            }
            NamedKind::Empty => {
                if size < 1 {
                    return Err(invalid("empty graph needs at least one vertex"));
                }
                edges = Vec::new();
                size
            }
        };
        Self::from_edge_list(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> VertexMask {
        VertexMask(self.adj[v])
    }

    pub(crate) fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u] >> v & 1 == 1
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, &a) in self.adj.iter().enumerate() {
            out.extend(Bits(a & !low_bits(u + 1)).map(|v| (u, v)));
        }
        out
    }

    pub fn full_mask(&self) -> VertexMask {
        VertexMask::full(self.vertex_count())
    }

    pub fn is_regular(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_clique(&self) -> bool {
        let n = self.vertex_count();
        self.degrees.iter().all(|&d| d + 1 == n)
    }

    pub fn is_independent(&self, set: VertexMask) -> bool {
        set.iter().all(|v| self.adj[v] & set.0 == 0)
    }

    fn check_mask(&self, mask: VertexMask) -> Result<()> {
        if mask.0 & !low_bits(self.vertex_count()) != 0 {
            let v = (mask.0 & !low_bits(self.vertex_count())).trailing_zeros() as usize;
            return Err(Error::VertexOutOfRange { vertex: v, n: self.vertex_count() });
        }
        Ok(())
    }

    /// `G[keep]`, relabelled in ascending vertex order.
    pub fn induced_subgraph(&self, keep: VertexMask) -> Result<SimpleGraph> {
        self.check_mask(keep)?;
        let kept: Vec<usize> = keep.iter().collect();
        let adj = kept
            .iter()
            .map(|&v| {
                kept.iter()
                    .enumerate()
                    .filter(|&(_, &u)| self.adj[v] >> u & 1 == 1)
                    .fold(0u64, |m, (i, _)| m | (1 << i))
            })
            .collect();
        Ok(Self::from_adjacency(adj))
    }

    /// `G □ K_q`. Vertex `(v, i)` gets index `i * n + v`, so activities for
    /// the product are the `q` rows of an activity matrix laid end to end.
    pub fn cartesian_with_clique(&self, q: usize) -> Result<SimpleGraph> {
        if q < 1 {
            return Err(invalid("clique factor must have q >= 1"));
        }
        let n = self.vertex_count();
        let total = n as u128 * q as u128;
        if total > MAX_VERTICES as u128 {
            return Err(Error::TooLarge { what: "product graph vertex count", size: total, limit: MAX_VERTICES as u128 });
        }
        let mut adj = vec![0u64; n * q];
        for i in 0..q {
            for v in 0..n {
                let mut row = self.adj[v] << (i * n);
                for j in 0..q {
                    if j != i {
                        row |= 1 << (j * n + v);
                    }
                }
                adj[i * n + v] = row;
            }
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Connected components within `mask`.
    pub(crate) fn components_within(&self, mask: u64) -> Vec<u64> {
        components_of(&self.adj, mask)
    }

    pub fn connected_components(&self) -> Vec<VertexMask> {
        self.components_within(self.full_mask().0).into_iter().map(VertexMask).collect()
    }

    /// Streams every independent set, starting with the empty set.
    pub fn enumerate_independent_sets(&self) -> Result<IndependentSets<'_>> {
        if self.vertex_count() > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                what: "exhaustive enumeration",
                size: self.vertex_count() as u128,
                limit: ENUMERATION_LIMIT as u128,
            });
        }
        Ok(IndependentSets { adj: &self.adj, stack: vec![(0, self.full_mask().0)] })
    }
}

pub(crate) fn components_of(adj: &[u64], mask: u64) -> Vec<u64> {
    let mut rest = mask;
    let mut out = Vec::new();
    while rest != 0 {
        let seed = rest & rest.wrapping_neg();
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut next = 0u64;
            for v in Bits(frontier) {
                next |= adj[v];
            }
            next &= mask & !comp;
            comp |= next;
            frontier = next;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

/// Depth-first stream over independent sets.
///
/// Each stack entry is `(set, candidates)` where every candidate is larger
/// than all members of `set` and non-adjacent to them, so each independent
/// set is produced exactly once.
pub struct IndependentSets<'a> {
    adj: &'a [u64],
    stack: Vec<(u64, u64)>,
}

impl Iterator for IndependentSets<'_> {
    type Item = VertexMask;

    fn next(&mut self) -> Option<VertexMask> {
        let (set, candidates) = self.stack.pop()?;
        for v in Bits(candidates) {
            let later = !low_bits(v + 1);
            self.stack.push((set | 1 << v, candidates & later & !self.adj[v]));
        }
        Some(VertexMask(set))
    }
}

/// Plain edge-list form used in witnesses and files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&SimpleGraph> for EdgeList {
    fn from(g: &SimpleGraph) -> Self {
        EdgeList { n: g.vertex_count(), edges: g.edges() }
    }
}

impl EdgeList {
    pub fn to_graph(&self) -> Result<SimpleGraph> {
        SimpleGraph::from_edge_list(self.n, &self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> SimpleGraph {
        SimpleGraph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn edge_list_construction() {
        assert_eq!(p3().degrees(), &[1, 2, 1]);
        let k3 = SimpleGraph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.degrees(), &[2, 2, 2]);
        assert_eq!(k3.max_degree(), 2);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(SimpleGraph::from_edge_list(2, &[(0, 0)]), Err(Error::InvalidEdge(0)));
        assert_eq!(SimpleGraph::from_edge_list(2, &[(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(
            SimpleGraph::from_edge_list(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert!(matches!(SimpleGraph::from_edge_list(65, &[]), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn named_graphs() {
        let k4 = SimpleGraph::make_named(NamedKind::Clique, 4).unwrap();
        assert!(k4.degrees().iter().all(|&d| d == 3));
        let c5 = SimpleGraph::make_named(NamedKind::Cycle, 5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!(matches!(SimpleGraph::make_named(NamedKind::Cycle, 2), Err(Error::InvalidParameter(_))));
        let p0 = SimpleGraph::make_named(NamedKind::PathEdges, 0).unwrap();
        assert_eq!(p0.vertex_count(), 1);
        assert_eq!(SimpleGraph::make_named(NamedKind::Empty, 3).unwrap().edge_count(), 0);
    }

    #[test]
    fn induced_subgraphs() {
        let k3 = SimpleGraph::make_named(NamedKind::Clique, 3).unwrap();
        let k2 = k3.induced_subgraph(VertexMask::from_vertices([0, 1])).unwrap();
        assert_eq!(k2, SimpleGraph::make_named(NamedKind::Clique, 2).unwrap());
        let ends = p3().induced_subgraph(VertexMask::from_vertices([0, 2])).unwrap();
        assert_eq!(ends.edge_count(), 0);
        assert_eq!(ends.vertex_count(), 2);
        let c5 = SimpleGraph::make_named(NamedKind::Cycle, 5).unwrap();
        assert_eq!(c5.induced_subgraph(VertexMask::EMPTY).unwrap().vertex_count(), 0);
        assert_eq!(c5.induced_subgraph(c5.full_mask()).unwrap(), c5);
        assert!(k3.induced_subgraph(VertexMask::singleton(5)).is_err());
    }

    #[test]
    fn cartesian_products() {
        let k2 = SimpleGraph::make_named(NamedKind::Clique, 2).unwrap();
        let sq = k2.cartesian_with_clique(2).unwrap();
        assert_eq!((sq.vertex_count(), sq.edge_count()), (4, 4));
        assert!(sq.is_regular());
        // 2x3 grid: 3 rungs + 2*2 rails.
        let grid = p3().cartesian_with_clique(2).unwrap();
        assert_eq!((grid.vertex_count(), grid.edge_count()), (6, 7));
        let single = SimpleGraph::make_named(NamedKind::Empty, 1).unwrap();
        assert_eq!(single.cartesian_with_clique(3).unwrap(), SimpleGraph::make_named(NamedKind::Clique, 3).unwrap());
        assert_eq!(p3().cartesian_with_clique(1).unwrap(), p3());
        let big = SimpleGraph::make_named(NamedKind::Empty, 33).unwrap();
        assert!(matches!(big.cartesian_with_clique(2), Err(Error::TooLarge { .. })));
        for v in 0..3 {
            for i in 0..2 {
                assert_eq!(grid.degree(i * 3 + v), p3().degree(v) + 1);
            }
        }
    }

    #[test]
    fn independent_set_counts() {
        let k3 = SimpleGraph::make_named(NamedKind::Clique, 3).unwrap();
        assert_eq!(k3.enumerate_independent_sets().unwrap().count(), 4);
        let sets: Vec<_> = p3().enumerate_independent_sets().unwrap().collect();
        assert_eq!(sets.len(), 5);
        assert!(sets.contains(&VertexMask::from_vertices([0, 2])));
        assert_eq!(SimpleGraph::make_named(NamedKind::Empty, 3).unwrap().enumerate_independent_sets().unwrap().count(), 8);
        let big = SimpleGraph::make_named(NamedKind::Empty, 25).unwrap();
        assert!(big.enumerate_independent_sets().is_err());
    }

    #[test]
    fn components() {
        let g = SimpleGraph::from_edge_list(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let sizes: Vec<usize> = g.connected_components().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![3, 2]);
        let c5 = SimpleGraph::make_named(NamedKind::Cycle, 5).unwrap();
        assert_eq!(c5.connected_components().len(), 1);
        let e3 = SimpleGraph::make_named(NamedKind::Empty, 3).unwrap();
        assert!(e3.connected_components().iter().all(|c| c.len() == 1));
        assert_eq!(e3.connected_components().len(), 3);
    }
}

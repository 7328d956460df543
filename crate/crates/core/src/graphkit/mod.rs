//! Small undirected simple graphs on at most 64 vertices.
//!
//! Every adjacency row is a single `u64`, so neighbourhood operations are
//! word-wide bit operations. The submodules add graph6 I/O, canonical
//! labelling, isomorphism-free enumeration, subgraph containment and BFS
//! metrics.

mod canon;
mod enumerate;
mod graph6;
mod metrics;
mod subgraph;

use std::fmt;

use thiserror::Error;

pub use canon::{canonical_form, canonical_labeling, is_isomorphic, CanonicalForm};
pub use enumerate::{enumerate_connected, EnumBudget, EnumSpec, Enumerator};
pub use graph6::{parse_graph6, parse_graph6_lines, write_graph6};
pub use metrics::{ball, ball_with_center, diameter, distances_from, eccentricity, radius};
pub use subgraph::{contains_induced_subgraph, contains_subgraph};

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, the limit is {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("enumeration budget exceeded after {extensions} extensions ({emitted} graphs emitted, last complete order {completed_order})")]
    BudgetExceeded {
        extensions: u64,
        emitted: usize,
        completed_order: usize,
    },
}

/// Iterates over the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An undirected simple graph with vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows. Rows are symmetrised; bit `i` of
    /// row `i` must be clear.
    pub fn from_rows(rows: &[u64]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let mask = low_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & (1 << i) != 0 {
                return Err(GraphError::SelfLoop(i));
            }
            if r & !mask != 0 {
                return Err(GraphError::VertexOutOfRange {
                    vertex: 63 - (r & !mask).leading_zeros() as usize,
                    n,
                });
            }
            for j in Bits(r) {
                g.adj[i] |= 1 << j;
                g.adj[j] |= 1 << i;
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            g.adj[i] = low_mask(n) & !(1 << i);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    /// Star with `leaves` leaves; the centre is vertex 0.
    pub fn star(leaves: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| Bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / self.n as f64
        }
    }

    /// Degrees sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<_> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        Ok(())
    }

    /// Appends a vertex adjacent to `nbrs` and returns its index.
    pub fn add_vertex(&mut self, nbrs: u64) -> Result<usize, GraphError> {
        if self.n == MAX_VERTICES {
            return Err(GraphError::TooManyVertices(self.n + 1));
        }
        let w = self.n;
        if nbrs & !low_mask(w) != 0 {
            return Err(GraphError::VertexOutOfRange {
                vertex: 63 - nbrs.leading_zeros() as usize,
                n: w,
            });
        }
        self.adj.push(nbrs);
        self.n += 1;
        for v in Bits(nbrs) {
            self.adj[v] |= 1 << w;
        }
        Ok(w)
    }

    /// Subgraph induced on the vertices in `mask`, relabelled in increasing
    /// order of the original indices.
    pub fn induced(&self, mask: u64) -> Graph {
        let mask = mask & self.vertex_mask();
        let verts: Vec<usize> = Bits(mask).collect();
        let mut index = [usize::MAX; 64];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let adj = verts
            .iter()
            .map(|&v| Bits(self.adj[v] & mask).fold(0u64, |acc, u| acc | (1 << index[u])))
            .collect();
        Graph { n: verts.len(), adj }
    }

    pub fn delete_vertex(&self, v: usize) -> Graph {
        self.induced(self.vertex_mask() & !(1 << v))
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut adj = vec![0u64; self.n];
        for u in 0..self.n {
            adj[perm[u]] = Bits(self.adj[u]).fold(0, |acc, v| acc | (1 << perm[v]));
        }
        Graph { n: self.n, adj }
    }

    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|r| r << self.n));
        Ok(Graph { n, adj })
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen & (1 << s) != 0 {
                continue;
            }
            let comp = self.reach(s, self.vertex_mask());
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `s` inside `allowed`.
    pub(crate) fn reach(&self, s: usize, allowed: u64) -> u64 {
        let mut comp = 1u64 << s;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in Bits(frontier) {
                next |= self.adj[v];
            }
            next &= allowed & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reach(0, self.vertex_mask()) == self.vertex_mask()
    }

    /// Whether deleting `v` disconnects the remaining vertices.
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        let rest = self.vertex_mask() & !(1 << v);
        let others = self.reach(v, self.vertex_mask()) & rest;
        if others == 0 {
            return false;
        }
        self.reach(others.trailing_zeros() as usize, rest) != others
    }

    pub fn is_bridge(&self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let mut h = self.clone();
        h.adj[u] &= !(1 << v);
        h.adj[v] &= !(1 << u);
        h.reach(u, h.vertex_mask()) & (1 << v) == 0
    }

    pub fn non_cut_vertices(&self) -> u64 {
        (0..self.n)
            .filter(|&v| !self.is_cut_vertex(v))
            .fold(0, |acc, v| acc | (1 << v))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_graph6(self))
    }
}

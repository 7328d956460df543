//! Canonical labelling by equitable-partition refinement and
//! individualisation, with automorphism pruning.

use std::cmp::Ordering;

use super::{write_graph6, Bits, Graph};

/// Isomorphism-invariant certificate: the graph6 record of the canonically
/// relabelled graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub cert: Vec<u8>,
}

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.cert).expect("certificate is ASCII")
    }
}

/// Result of a canonical search.
pub(crate) struct Canon {
    /// `lab[v]` is the canonical position of vertex `v`.
    pub lab: Vec<usize>,
    pub rows: Vec<u64>,
    /// Automorphisms discovered during the search, as vertex maps.
    pub autos: Vec<Vec<usize>>,
}

impl Canon {
    pub fn graph(&self) -> Graph {
        Graph::from_rows(&self.rows).expect("canonical rows form a simple graph")
    }

    /// Orbit representatives under the group generated by the discovered
    /// automorphisms. This group may be a proper subgroup of the full
    /// automorphism group, so equal roots prove equivalence but distinct
    /// roots prove nothing.
    pub fn partial_orbits(&self) -> Vec<usize> {
        let n = self.lab.len();
        let mut uf = UnionFind::new(n);
        for a in &self.autos {
            for (v, &w) in a.iter().enumerate() {
                uf.union(v, w);
            }
        }
        (0..n).map(|v| uf.find(v)).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Refines an ordered partition (cells as vertex masks) to the coarsest
/// equitable partition below it. Split cells are ordered by neighbour count,
/// so the result depends only on the isomorphism type of (graph, partition).
fn refine(g: &Graph, cells: &mut Vec<u64>) {
    let adj = g.rows();
    let mut changed = true;
    while changed {
        changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = cells[s];
            let mut next = Vec::with_capacity(cells.len() + 2);
            let mut split_any = false;
            for &cell in cells.iter() {
                if cell.count_ones() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut groups: Vec<(u32, u64)> = Vec::new();
                for v in Bits(cell) {
                    let c = (adj[v] & splitter).count_ones();
                    match groups.iter_mut().find(|(k, _)| *k == c) {
                        Some((_, m)) => *m |= 1 << v,
                        None => groups.push((c, 1 << v)),
                    }
                }
                if groups.len() > 1 {
                    split_any = true;
                    groups.sort_unstable_by_key(|&(k, _)| k);
                    next.extend(groups.into_iter().map(|(_, m)| m));
                } else {
                    next.push(cell);
                }
            }
            *cells = next;
            if split_any {
                changed = true;
            }
            s += 1;
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn leaf(&mut self, cells: &[u64]) {
        let n = self.g.order();
        let mut lab = vec![0usize; n];
        for (i, &c) in cells.iter().enumerate() {
            lab[c.trailing_zeros() as usize] = i;
        }
        let mut rows = vec![0u64; n];
        for u in 0..n {
            rows[lab[u]] = Bits(self.g.neighbors(u)).fold(0, |acc, w| acc | (1 << lab[w]));
        }
        match &self.best {
            None => self.best = Some((rows, lab)),
            Some((best_rows, best_lab)) => match compare_rows(&rows, best_rows) {
                Ordering::Greater => self.best = Some((rows, lab)),
                Ordering::Equal => {
                    let mut inv = vec![0usize; n];
                    for (v, &p) in best_lab.iter().enumerate() {
                        inv[p] = v;
                    }
                    let auto: Vec<usize> = (0..n).map(|u| inv[lab[u]]).collect();
                    if auto.iter().enumerate().any(|(i, &j)| i != j) {
                        self.autos.push(auto);
                    }
                }
                Ordering::Less => {}
            },
        }
    }

    fn same_orbit(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        if explored.is_empty() {
            return false;
        }
        let n = self.g.order();
        let mut uf = UnionFind::new(n);
        for a in &self.autos {
            if path.iter().all(|&p| a[p] == p) {
                for (x, &y) in a.iter().enumerate() {
                    uf.union(x, y);
                }
            }
        }
        let rv = uf.find(v);
        explored.iter().any(|&e| uf.find(e) == rv)
    }

    fn dfs(&mut self, mut cells: Vec<u64>, path: &mut Vec<usize>) {
        refine(self.g, &mut cells);
        let target = match cells.iter().position(|c| c.count_ones() > 1) {
            None => return self.leaf(&cells),
            Some(t) => t,
        };
        let cell = cells[target];
        let mut explored = Vec::new();
        for v in Bits(cell) {
            if self.same_orbit(path, &explored, v) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            self.dfs(child, path);
            path.pop();
            explored.push(v);
        }
    }
}

fn compare_rows(a: &[u64], b: &[u64]) -> Ordering {
    a.cmp(b)
}

/// Canonical search with an initial vertex colouring. Vertices of smaller
/// colour precede those of larger colour in the canonical order.
pub(crate) fn canon_colored(g: &Graph, colors: &[u32]) -> Canon {
    let n = g.order();
    assert_eq!(colors.len(), n, "one colour per vertex");
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let cells: Vec<u64> = distinct
        .iter()
        .map(|&c| (0..n).filter(|&v| colors[v] == c).fold(0u64, |m, v| m | (1 << v)))
        .collect();
    let mut s = Search {
        g,
        best: None,
        autos: Vec::new(),
    };
    if n == 0 {
        return Canon {
            lab: Vec::new(),
            rows: Vec::new(),
            autos: Vec::new(),
        };
    }
    s.dfs(cells, &mut Vec::new());
    let (rows, lab) = s.best.expect("search reaches at least one leaf");
    Canon {
        lab,
        rows,
        autos: s.autos,
    }
}

pub(crate) fn canon(g: &Graph) -> Canon {
    canon_colored(g, &vec![0; g.order()])
}

/// `lab[v]` is the position of `v` in the canonical order.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    canon(g).lab
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let c = canon(g);
    CanonicalForm {
        n: g.order(),
        cert: write_graph6(&c.graph()).into_bytes(),
    }
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && a.degree_sequence() == b.degree_sequence()
        && canon(a).rows == canon(b).rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_paths_agree() {
        let p3 = Graph::path(3).unwrap();
        let q = p3.permuted(&[1, 0, 2]);
        assert_ne!(p3, q);
        assert_eq!(canonical_form(&p3), canonical_form(&q));
        assert_ne!(canonical_form(&p3), canonical_form(&Graph::complete(3).unwrap()));
        assert_ne!(
            canonical_form(&Graph::path(4).unwrap()),
            canonical_form(&Graph::star(3).unwrap())
        );
    }

    #[test]
    fn regular_graphs() {
        let c6 = Graph::cycle(6).unwrap();
        let two_triangles = Graph::cycle(3)
            .unwrap()
            .disjoint_union(&Graph::cycle(3).unwrap())
            .unwrap();
        assert!(!is_isomorphic(&c6, &two_triangles));
        let shifted = c6.permuted(&[3, 5, 1, 0, 2, 4]);
        assert!(is_isomorphic(&c6, &shifted));
        let c = canon(&c6);
        assert!(!c.autos.is_empty());
    }

    #[test]
    fn labeling_is_a_permutation() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let mut lab = canonical_labeling(&g);
        lab.sort_unstable();
        assert_eq!(lab, vec![0, 1, 2, 3, 4]);
    }
}

//! Isomorphism-free generation by canonical augmentation.
//!
//! A graph on `k` vertices is produced from its canonical parent: the graph
//! obtained by deleting the distinguished vertex (the last vertex in
//! canonical order among those whose removal keeps the graph connected).
//! A child is accepted only if the added vertex lies in the automorphism
//! orbit of its distinguished vertex, and isomorphic siblings from one parent
//! are merged, so every isomorphism class appears exactly once.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::canon::{canon, canon_colored, Canon};
use super::metrics::{diameter, radius};
use super::{write_graph6, Bits, Graph, GraphError, MAX_VERTICES};

/// Bounds on the graphs to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumSpec {
    pub max_vertices: usize,
    pub max_degree: Option<usize>,
    pub max_diameter: Option<usize>,
    pub max_radius: Option<usize>,
    pub connected_only: bool,
}

impl EnumSpec {
    pub fn connected(max_vertices: usize) -> Self {
        EnumSpec {
            max_vertices,
            max_degree: None,
            max_diameter: None,
            max_radius: None,
            connected_only: true,
        }
    }

    pub fn with_max_degree(mut self, d: usize) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn with_max_diameter(mut self, d: usize) -> Self {
        self.max_diameter = Some(d);
        self
    }

    pub fn with_max_radius(mut self, r: usize) -> Self {
        self.max_radius = Some(r);
        self
    }

    /// Whether `g` satisfies the metric bounds. Degree and connectivity are
    /// enforced during generation.
    fn accepts(&self, g: &Graph) -> bool {
        if self.max_diameter.is_none() && self.max_radius.is_none() {
            return true;
        }
        if let Some(d) = self.max_diameter {
            match diameter(g) {
                Ok(x) if x <= d => {}
                _ => return false,
            }
        }
        if let Some(r) = self.max_radius {
            match radius(g) {
                Ok(x) if x <= r => {}
                _ => return false,
            }
        }
        true
    }
}

/// Resource limits for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_vertices: usize,
    /// Cap on candidate one-vertex extensions examined.
    pub max_extensions: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_vertices: 10,
            max_extensions: 10_000_000,
        }
    }
}

/// Level-by-level enumerator. Each call to [`Enumerator::next_level`]
/// returns every graph of the next order that satisfies the [`EnumSpec`],
/// sorted by canonical certificate. Graphs are returned in canonical
/// labelling.
pub struct Enumerator {
    spec: EnumSpec,
    budget: EnumBudget,
    parents: Vec<Graph>,
    next_order: usize,
    extensions: u64,
    emitted: usize,
    finished: bool,
}

impl Enumerator {
    pub fn new(spec: EnumSpec, budget: EnumBudget) -> Self {
        Enumerator {
            spec,
            budget,
            parents: Vec::new(),
            next_order: 1,
            extensions: 0,
            emitted: 0,
            finished: false,
        }
    }

    pub fn extensions(&self) -> u64 {
        self.extensions
    }

    /// Largest order whose level has been fully produced.
    pub fn completed_order(&self) -> usize {
        self.next_order - 1
    }

    /// Number of graphs in the frontier that the next level would extend.
    pub fn frontier_size(&self) -> usize {
        self.parents.len()
    }

    fn budget_error(&self) -> GraphError {
        GraphError::BudgetExceeded {
            extensions: self.extensions,
            emitted: self.emitted,
            completed_order: self.completed_order(),
        }
    }

    pub fn next_level(&mut self) -> Option<Result<(usize, Vec<Graph>), GraphError>> {
        if self.finished || self.next_order > self.spec.max_vertices {
            return None;
        }
        let k = self.next_order;
        if k > self.budget.max_vertices || k > MAX_VERTICES {
            self.finished = true;
            return Some(Err(self.budget_error()));
        }
        let level: Vec<(Vec<u8>, Graph)> = if k == 1 {
            let g = Graph::empty(1).expect("one vertex");
            vec![(write_graph6(&g).into_bytes(), g)]
        } else {
            match self.extend() {
                Ok(l) => l,
                Err(e) => {
                    self.finished = true;
                    return Some(Err(e));
                }
            }
        };
        self.parents = level.iter().map(|(_, g)| g.clone()).collect();
        self.next_order += 1;
        let out: Vec<Graph> = level
            .into_iter()
            .map(|(_, g)| g)
            .filter(|g| self.spec.accepts(g))
            .collect();
        self.emitted += out.len();
        Some(Ok((k, out)))
    }

    fn extend(&mut self) -> Result<Vec<(Vec<u8>, Graph)>, GraphError> {
        let counter = AtomicU64::new(self.extensions);
        let over = AtomicBool::new(false);
        let cap = self.budget.max_extensions;
        let spec = &self.spec;
        let per_parent: Vec<Vec<(Vec<u8>, Graph)>> = self
            .parents
            .par_iter()
            .map(|p| children(p, spec, &counter, cap, &over))
            .collect();
        self.extensions = counter.load(Ordering::Relaxed);
        if over.load(Ordering::Relaxed) {
            return Err(self.budget_error());
        }
        let mut level: Vec<(Vec<u8>, Graph)> = per_parent.into_iter().flatten().collect();
        level.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(level)
    }
}

fn children(
    parent: &Graph,
    spec: &EnumSpec,
    counter: &AtomicU64,
    cap: u64,
    over: &AtomicBool,
) -> Vec<(Vec<u8>, Graph)> {
    let n = parent.order();
    let max_deg = spec.max_degree.unwrap_or(usize::MAX);
    let open = (0..n)
        .filter(|&v| parent.degree(v) < max_deg)
        .fold(0u64, |m, v| m | (1 << v));
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    let mut subsets: Vec<u64> = Vec::new();
    let mut s = open;
    loop {
        let size = s.count_ones() as usize;
        if size <= max_deg && (size > 0 || !spec.connected_only) {
            subsets.push(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & open;
    }
    for nbrs in subsets {
        if over.load(Ordering::Relaxed) {
            return out;
        }
        if counter.fetch_add(1, Ordering::Relaxed) + 1 > cap {
            over.store(true, Ordering::Relaxed);
            return out;
        }
        let mut child = parent.clone();
        let w = child.add_vertex(nbrs).expect("order below the vertex cap");
        let Some(c) = canonical_extension(&child, w, spec.connected_only) else {
            continue;
        };
        if seen.insert(c.rows.clone()) {
            let g = c.graph();
            out.push((write_graph6(&g).into_bytes(), g));
        }
    }
    out
}

/// Returns the canonical labelling of `g` if `w` is in the orbit of its
/// distinguished deletion vertex.
fn canonical_extension(g: &Graph, w: usize, connected_only: bool) -> Option<Canon> {
    let c = canon(g);
    let candidates = if connected_only {
        g.non_cut_vertices()
    } else {
        g.vertex_mask()
    };
    let star = Bits(candidates)
        .max_by_key(|&v| c.lab[v])
        .expect("a nonempty connected graph has a non-cut vertex");
    if star == w {
        return Some(c);
    }
    if g.degree(star) != g.degree(w) {
        return None;
    }
    let orbits = c.partial_orbits();
    if orbits[star] == orbits[w] {
        return Some(c);
    }
    let mut colors = vec![0u32; g.order()];
    colors[w] = 1;
    let cw = canon_colored(g, &colors);
    colors[w] = 0;
    colors[star] = 1;
    let cs = canon_colored(g, &colors);
    (cw.rows == cs.rows).then_some(c)
}

/// Collects every graph satisfying `spec`, ordered by vertex count and then
/// canonical certificate.
pub fn enumerate_connected(spec: &EnumSpec, budget: &EnumBudget) -> Result<Vec<Graph>, GraphError> {
    let mut e = Enumerator::new(spec.clone(), *budget);
    let mut all = Vec::new();
    while let Some(level) = e.next_level() {
        let (_, graphs) = level?;
        all.extend(graphs);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(spec: EnumSpec) -> Vec<usize> {
        let mut e = Enumerator::new(spec, EnumBudget::default());
        let mut out = Vec::new();
        while let Some(l) = e.next_level() {
            out.push(l.unwrap().1.len());
        }
        out
    }

    #[test]
    fn connected_counts() {
        assert_eq!(counts(EnumSpec::connected(7)), vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn all_graph_counts() {
        let spec = EnumSpec {
            connected_only: false,
            ..EnumSpec::connected(6)
        };
        assert_eq!(counts(spec), vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn trees_and_degree_bounds() {
        assert_eq!(counts(EnumSpec::connected(3).with_max_degree(2)), vec![1, 1, 2]);
        // connected graphs with maximum degree at most 2 are paths and cycles
        assert_eq!(counts(EnumSpec::connected(6).with_max_degree(2)), vec![1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn budget_is_reported() {
        let budget = EnumBudget {
            max_vertices: 10,
            max_extensions: 50,
        };
        let err = enumerate_connected(&EnumSpec::connected(6), &budget).unwrap_err();
        assert!(matches!(err, GraphError::BudgetExceeded { completed_order, .. } if completed_order >= 3));
        let small = EnumBudget {
            max_vertices: 3,
            max_extensions: 1000,
        };
        let err = enumerate_connected(&EnumSpec::connected(4), &small).unwrap_err();
        assert!(matches!(err, GraphError::BudgetExceeded { emitted: 4, completed_order: 3, .. }));
    }
}

//! Subgraph containment by backtracking over injective vertex maps.

use super::{Bits, Graph};

/// Pattern vertices in an order where each vertex after the first of its
/// component has an earlier neighbour, starting from high degree.
fn search_order(p: &Graph) -> Vec<usize> {
    let n = p.order();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let root = (0..n)
            .filter(|&v| placed & (1 << v) == 0)
            .max_by_key(|&v| (p.degree(v), std::cmp::Reverse(v)))
            .expect("unplaced vertex remains");
        placed |= 1 << root;
        order.push(root);
        let mut i = order.len() - 1;
        while i < order.len() {
            let mut next: Vec<usize> = Bits(p.neighbors(order[i]) & !placed).collect();
            next.sort_by_key(|&v| std::cmp::Reverse(p.degree(v)));
            for v in next {
                placed |= 1 << v;
                order.push(v);
            }
            i += 1;
        }
    }
    order
}

struct Matcher<'a> {
    host: &'a Graph,
    pat: &'a Graph,
    order: Vec<usize>,
    image: Vec<usize>,
    induced: bool,
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize, used: u64) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let p = self.order[depth];
        let need = self.pat.degree(p);
        let mut cand = self.host.vertex_mask() & !used;
        for &q in &self.order[..depth] {
            let hq = self.image[q];
            if self.pat.has_edge(p, q) {
                cand &= self.host.neighbors(hq);
            } else if self.induced {
                cand &= !self.host.neighbors(hq);
            }
        }
        for h in Bits(cand) {
            if self.host.degree(h) < need {
                continue;
            }
            self.image[p] = h;
            if self.extend(depth + 1, used | (1 << h)) {
                return true;
            }
        }
        false
    }
}

fn degrees_dominated(host: &Graph, pat: &Graph) -> bool {
    let h = host.degree_sequence();
    let p = pat.degree_sequence();
    p.iter().zip(h.iter()).all(|(a, b)| a <= b)
}

fn contains(host: &Graph, pat: &Graph, induced: bool) -> bool {
    if pat.order() > host.order() || pat.edge_count() > host.edge_count() {
        return false;
    }
    if !degrees_dominated(host, pat) {
        return false;
    }
    let mut m = Matcher {
        host,
        pat,
        order: search_order(pat),
        image: vec![usize::MAX; pat.order()],
        induced,
    };
    m.extend(0, 0)
}

/// Whether some subgraph of `host`, not necessarily induced, is isomorphic
/// to `pattern`.
pub fn contains_subgraph(host: &Graph, pattern: &Graph) -> bool {
    contains(host, pattern, false)
}

/// Whether some induced subgraph of `host` is isomorphic to `pattern`.
pub fn contains_induced_subgraph(host: &Graph, pattern: &Graph) -> bool {
    contains(host, pattern, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let k3 = Graph::complete(3).unwrap();
        let p3 = Graph::path(3).unwrap();
        let p4 = Graph::path(4).unwrap();
        let s3 = Graph::star(3).unwrap();
        assert!(contains_subgraph(&k3, &p3));
        assert!(!contains_induced_subgraph(&k3, &p3));
        assert!(!contains_subgraph(&p4, &s3));
        assert!(contains_subgraph(&Graph::cycle(6).unwrap(), &p4));
        assert!(!contains_subgraph(&p3, &p4));
        assert!(contains_subgraph(&p3, &Graph::empty(0).unwrap()));
    }

    #[test]
    fn disconnected_patterns() {
        let two_k2 = Graph::complete(2).unwrap().disjoint_union(&Graph::complete(2).unwrap()).unwrap();
        assert!(contains_subgraph(&Graph::path(4).unwrap(), &two_k2));
        assert!(!contains_subgraph(&Graph::path(3).unwrap(), &two_k2));
        assert!(!contains_subgraph(&Graph::star(4).unwrap(), &two_k2));
    }
}

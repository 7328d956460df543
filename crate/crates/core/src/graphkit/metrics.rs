//! Breadth-first distances, eccentricities and balls.

use super::{Bits, Graph, GraphError};

/// Distance from `s` to every vertex, `None` when unreachable.
pub fn distances_from(g: &Graph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[s] = Some(0);
    let mut seen = 1u64 << s;
    let mut frontier = seen;
    let mut d = 0;
    while frontier != 0 {
        d += 1;
        let mut next = 0u64;
        for v in Bits(frontier) {
            next |= g.neighbors(v);
        }
        next &= !seen;
        for v in Bits(next) {
            dist[v] = Some(d);
        }
        seen |= next;
        frontier = next;
    }
    dist
}

pub fn eccentricity(g: &Graph, v: usize) -> Result<usize, GraphError> {
    if v >= g.order() {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.order() });
    }
    distances_from(g, v)
        .into_iter()
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
        .ok_or(GraphError::Disconnected)
}

pub fn diameter(g: &Graph) -> Result<usize, GraphError> {
    (0..g.order()).try_fold(0, |acc, v| Ok(acc.max(eccentricity(g, v)?)))
}

pub fn radius(g: &Graph) -> Result<usize, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    (0..g.order())
        .map(|v| eccentricity(g, v))
        .try_fold(usize::MAX, |acc, e| Ok(acc.min(e?)))
        .map(|r| if g.order() == 0 { 0 } else { r })
}

/// Induced subgraph on the vertices within distance `k` of `v`, together with
/// the index of `v` inside it.
pub fn ball_with_center(g: &Graph, v: usize, k: usize) -> Result<(Graph, usize), GraphError> {
    if v >= g.order() {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.order() });
    }
    let mask = distances_from(g, v)
        .iter()
        .enumerate()
        .filter(|(_, d)| matches!(d, Some(d) if *d <= k))
        .fold(0u64, |m, (u, _)| m | (1 << u));
    let center = (mask & ((1u64 << v) - 1)).count_ones() as usize;
    Ok((g.induced(mask), center))
}

pub fn ball(g: &Graph, v: usize, k: usize) -> Result<Graph, GraphError> {
    ball_with_center(g, v, k).map(|(b, _)| b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_metrics() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(diameter(&p4), Ok(3));
        assert_eq!(radius(&p4), Ok(2));
        let p5 = Graph::path(5).unwrap();
        let (b, c) = ball_with_center(&p5, 2, 1).unwrap();
        assert_eq!(b, Graph::path(3).unwrap());
        assert_eq!(c, 1);
        assert_eq!(ball(&p5, 0, 10).unwrap(), p5);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::empty(2).unwrap();
        assert_eq!(diameter(&g), Err(GraphError::Disconnected));
        assert_eq!(radius(&g), Err(GraphError::Disconnected));
        assert_eq!(radius(&Graph::empty(1).unwrap()), Ok(0));
    }
}

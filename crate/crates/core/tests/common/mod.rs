//! Seeded property suites shared by the property and acceptance targets.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use specrad::graphkit::{ball, Bits, Graph};
use specrad::linalg::{rank_of, trace_rank_lower_bound, SymMatrix};
use specrad::spectra::{
    compare_radius, eigen_multiplicity, is_end_path_edge, lambda1, radius_algebraic, subdivide_edge, RadiusComparison,
};

pub const SEED: u64 = 0x5eed_2024;
pub const CASES: u32 = 1000;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_global_rejects: 100 * cases,
        ..Config::default()
    }
}

/// Random spanning tree on `n` vertices plus a random set of extra edges.
fn build(n: usize, parents: &[usize], extra: u64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for v in 1..n {
        g.add_edge(parents[v - 1] % v, v).unwrap();
    }
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if extra >> (bit % 64) & 1 == 1 && !g.has_edge(u, v) {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

/// Connected graphs on `lo..=hi` vertices with edge density about `1/sparsity`.
pub fn connected_graph(lo: usize, hi: usize, sparsity: u32) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        let masks = proptest::collection::vec(any::<u64>(), sparsity as usize);
        (Just(n), proptest::collection::vec(0usize..64, n.saturating_sub(1)), masks)
            .prop_map(|(n, parents, masks)| build(n, &parents, masks.iter().fold(u64::MAX, |a, m| a & m)))
    })
}

/// Connected graphs with at least two independent cycles, hence spectral
/// radius above 2.
pub fn bicyclic_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    connected_graph(lo, hi, 2).prop_map(|mut g| {
        let n = g.order();
        let mut step = 2;
        while g.edge_count() < n + 1 {
            for u in 0..n {
                let v = (u + step) % n;
                if u != v && !g.has_edge(u, v) && g.edge_count() < n + 1 {
                    g.add_edge(u, v).unwrap();
                }
            }
            step += 1;
        }
        g
    })
}

pub fn symmetric_f64(lo: usize, hi: usize) -> impl Strategy<Value = SymMatrix<f64>> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(-5.0f64..5.0, n * n).prop_map(move |v| {
            SymMatrix::from_fn(n, |i, j| if i <= j { v[i * n + j] } else { v[j * n + i] })
        })
    })
}

pub fn symmetric_rational(lo: usize, hi: usize) -> impl Strategy<Value = SymMatrix<BigRational>> {
    (lo..=hi, 1i64..4).prop_flat_map(|(n, span)| {
        proptest::collection::vec(-span..=span, n * n).prop_map(move |v| {
            SymMatrix::from_fn(n, |i, j| {
                let x = if i <= j { v[i * n + j] } else { v[j * n + i] };
                BigRational::from_integer(BigInt::from(x))
            })
        })
    })
}

pub fn perron_simplicity(g: &Graph) -> Result<(), TestCaseError> {
    let r = radius_algebraic(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(eigen_multiplicity(g, &r), 1, "graph {}", g);
    if g.order() > 1 {
        let (vals, vecs) = SymMatrix::<f64>::adjacency(g).eigen();
        let top = &vecs[vals.len() - 1];
        let sign = top[0].signum();
        prop_assert!(top.iter().all(|x| x * sign > 1e-9), "Perron vector of {} is not positive", g);
        let gap = vals[vals.len() - 1] - vals[vals.len() - 2];
        prop_assert!(gap > 1e-9, "top eigenvalue of {} is not simple", g);
    }
    Ok(())
}

/// Deleting a non-bridge edge or a non-cut vertex leaves a proper connected
/// subgraph with strictly smaller spectral radius.
pub fn strict_monotonicity(g: &Graph) -> Result<(), TestCaseError> {
    let r = radius_algebraic(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut subs = Vec::new();
    if let Some((u, v)) = g.edges().find(|&(u, v)| !g.is_bridge(u, v)) {
        let mut h = g.clone();
        h.remove_edge(u, v).unwrap();
        subs.push(h);
    }
    if g.order() > 1 {
        let v = Bits(g.non_cut_vertices()).next().expect("a connected graph has a non-cut vertex");
        subs.push(g.delete_vertex(v));
    }
    for h in subs {
        prop_assert!(h.is_connected());
        prop_assert_eq!(compare_radius(&h, &r), RadiusComparison::Less, "{} inside {}", h, g);
    }
    Ok(())
}

pub fn subdivision_decrease(g: &Graph, pick: usize) -> Result<(), TestCaseError> {
    prop_assert!(lambda1(g) > 2.0, "{} has spectral radius at most 2", g);
    let internal: Vec<(usize, usize)> = g.edges().filter(|&e| !is_end_path_edge(g, e).unwrap()).collect();
    prop_assert!(!internal.is_empty(), "{} has two cycles but no internal edge", g);
    let e = internal[pick % internal.len()];
    let h = subdivide_edge(g, e).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let r = radius_algebraic(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(compare_radius(&h, &r), RadiusComparison::Less, "subdividing {:?} of {}", e, g);
    Ok(())
}

/// Both Weyl inequalities with eigenvalues in decreasing order, plus the
/// trace identity as an independent check on the eigensolver.
pub fn weyl(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> Result<(), TestCaseError> {
    let desc = |m: &SymMatrix<f64>| {
        let mut v = m.eigenvalues();
        v.reverse();
        v
    };
    let (ea, eb, es) = (desc(a), desc(b), desc(&a.add(b)));
    let n = ea.len();
    let tol = 1e-9 * (1.0 + a.max_abs() + b.max_abs()) * n as f64;
    prop_assert!((es.iter().sum::<f64>() - a.add(b).trace()).abs() < tol);
    for i in 0..n {
        for j in 0..n - i {
            prop_assert!(es[i + j] <= ea[i] + eb[j] + tol, "upper Weyl at ({}, {})", i, j);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i + j >= n - 1 {
                let k = i + j - (n - 1);
                prop_assert!(es[k] >= ea[i] + eb[j] - tol, "lower Weyl at ({}, {})", i, j);
            }
        }
    }
    Ok(())
}

/// The radius-`k` ball with the largest spectral radius meets the
/// average-degree bound `2 cos(pi/(k+2)) sqrt(d-1)` and, for minimum degree
/// at least 2, the bound `2k/(k+1) sqrt(delta-1)`.
pub fn ball_bounds(g: &Graph, k: usize) -> Result<(), TestCaseError> {
    let d = g.average_degree();
    prop_assert!(d >= 2.0);
    let best = (0..g.order()).map(|v| lambda1(&ball(g, v, k).unwrap())).fold(0.0, f64::max);
    let avg = 2.0 * (std::f64::consts::PI / (k as f64 + 2.0)).cos() * (d - 1.0).sqrt();
    prop_assert!(best >= avg - 1e-9, "{}: ball radius {} below {}", g, best, avg);
    let delta = g.min_degree();
    if delta >= 2 {
        let b = 2.0 * k as f64 / (k as f64 + 1.0) * ((delta - 1) as f64).sqrt();
        prop_assert!(best >= b - 1e-9, "{}: ball radius {} below {}", g, best, b);
    }
    let w = specrad::spectra::ball_radius_witness(g, k).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!((w.value - best).abs() < 1e-9);
    Ok(())
}

pub fn trace_rank(m: &SymMatrix<BigRational>) -> Result<(), TestCaseError> {
    let bound = trace_rank_lower_bound(m);
    let rank = rank_of(m);
    prop_assert!(bound <= BigRational::from_integer(BigInt::from(rank)), "bound {} above rank {}", bound, rank);
    prop_assert_eq!(rank, m.map(|x| num_traits::ToPrimitive::to_f64(x).unwrap()).rank(1e-9));
    Ok(())
}

/// Graphs with average degree at least 2.
pub fn dense_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    bicyclic_graph(lo, hi)
}

/// Injective maps from the pattern into the host preserving edges.
pub fn embeds(host: &Graph, pat: &Graph, induced: bool) -> bool {
    fn go(host: &Graph, pat: &Graph, induced: bool, map: &mut Vec<usize>) -> bool {
        let k = map.len();
        if k == pat.order() {
            return true;
        }
        for h in 0..host.order() {
            if map.contains(&h) {
                continue;
            }
            let ok = (0..k).all(|j| {
                let pe = pat.has_edge(j, k);
                let he = host.has_edge(map[j], h);
                if induced {
                    pe == he
                } else {
                    !pe || he
                }
            });
            if ok {
                map.push(h);
                if go(host, pat, induced, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    go(host, pat, induced, &mut Vec::new())
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(config(cases));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: [Suite; 6] = [
    ("perron_simplicity", |c| run(c, connected_graph(1, 8, 2), |g| perron_simplicity(&g))),
    ("strict_monotonicity", |c| run(c, connected_graph(2, 8, 2), |g| strict_monotonicity(&g))),
    ("subdivision_decrease", |c| {
        run(c, (bicyclic_graph(4, 8), any::<usize>()), |(g, p)| subdivision_decrease(&g, p))
    }),
    ("weyl", |c| run(c, (symmetric_f64(1, 8), symmetric_f64(8, 8)), |(a, b)| {
        let n = a.order();
        weyl(&a, &b.principal(&(0..n).collect::<Vec<_>>()))
    })),
    ("ball_bounds", |c| run(c, (dense_graph(4, 12), 1usize..=3), |(g, k)| ball_bounds(&g, k))),
    ("trace_rank", |c| run(c, symmetric_rational(1, 7), |m| trace_rank(&m))),
];

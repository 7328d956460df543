mod common;

use proptest::prelude::*;
use proptest::test_runner::TestRunner;
use specrad::graphkit::{
    ball, canonical_form, contains_induced_subgraph, contains_subgraph, diameter, enumerate_connected, is_isomorphic,
    parse_graph6, radius, write_graph6, EnumBudget, EnumSpec, Graph,
};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected_by_search(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn labelled_connected(n: usize) -> u64 {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .filter(|mask| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
            connected_by_search(n, &edges)
        })
        .count() as u64
}

fn automorphisms(g: &Graph) -> u64 {
    permutations(g.order()).iter().filter(|p| &g.permuted(p) == g).count() as u64
}

fn iso_by_search(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order() && permutations(a.order()).iter().any(|p| &a.permuted(p) == b)
}

fn by_order(max: usize) -> Vec<Vec<Graph>> {
    let all = enumerate_connected(&EnumSpec::connected(max), &EnumBudget::default()).unwrap();
    let mut levels = vec![Vec::new(); max + 1];
    for g in all {
        levels[g.order()].push(g);
    }
    levels
}

#[test]
fn graph6_reference_records() {
    let g = parse_graph6("DQc").unwrap();
    assert_eq!(g.order(), 5);
    let mut edges: Vec<_> = g.edges().collect();
    edges.sort();
    assert_eq!(edges, vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
    assert_eq!(write_graph6(&Graph::complete(4).unwrap()), "C~");
    assert_eq!(write_graph6(&Graph::path(3).unwrap()), "Bg");
    assert_eq!(parse_graph6(">>graph6<<A_\n").unwrap(), Graph::complete(2).unwrap());
    assert!(parse_graph6("C").is_err());
    assert!(parse_graph6("D\u{7f}").is_err());
    let big = Graph::cycle(64).unwrap();
    let text = write_graph6(&big);
    assert!(text.starts_with('~'));
    assert_eq!(parse_graph6(&text).unwrap(), big);
}

#[test]
fn graph6_round_trip() {
    let mut runner = TestRunner::new(common::config(common::CASES));
    runner
        .run(&(0usize..=64, any::<[u64; 64]>()), |(n, rows)| {
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if rows[u] >> v & 1 == 1 {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            prop_assert_eq!(parse_graph6(&write_graph6(&g)).unwrap(), g);
            Ok(())
        })
        .unwrap();
}

#[test]
fn unlabelled_counts() {
    let counts: Vec<usize> = by_order(8).iter().skip(1).map(Vec::len).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853, 11117]);
}

#[test]
fn orbit_counting_matches_labelled_search() {
    let levels = by_order(6);
    for n in 1..=6 {
        let fact: u64 = (1..=n as u64).product();
        let total: u64 = levels[n].iter().map(|g| fact / automorphisms(g)).sum();
        assert_eq!(total, labelled_connected(n), "n = {n}");
    }
    let expected = [1, 1, 4, 38, 728, 26704];
    for (n, e) in (1..=6).zip(expected) {
        assert_eq!(labelled_connected(n), e);
    }
}

#[test]
fn enumerated_graphs_are_pairwise_non_isomorphic() {
    for level in by_order(5) {
        for (i, a) in level.iter().enumerate() {
            for b in &level[i + 1..] {
                assert!(!iso_by_search(a, b));
                assert!(!is_isomorphic(a, b));
            }
        }
    }
}

#[test]
fn canonical_form_is_invariant() {
    let mut runner = TestRunner::new(common::config(common::CASES));
    runner
        .run(
            &(common::connected_graph(1, 10, 1), any::<u64>()),
            |(g, seed)| {
                let n = g.order();
                let mut perm: Vec<usize> = (0..n).collect();
                let mut s = seed;
                for i in (1..n).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    perm.swap(i, (s >> 33) as usize % (i + 1));
                }
                let h = g.permuted(&perm);
                prop_assert_eq!(canonical_form(&g), canonical_form(&h));
                prop_assert!(is_isomorphic(&g, &h));
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn containment_matches_search() {
    let mut runner = TestRunner::new(common::config(300));
    runner
        .run(
            &(common::connected_graph(1, 4, 1), common::connected_graph(1, 7, 1)),
            |(pat, host)| {
                prop_assert_eq!(contains_subgraph(&host, &pat), common::embeds(&host, &pat, false));
                prop_assert_eq!(contains_induced_subgraph(&host, &pat), common::embeds(&host, &pat, true));
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn restricted_enumeration() {
    let spec = EnumSpec::connected(9).with_max_degree(2);
    let got = enumerate_connected(&spec, &EnumBudget::default()).unwrap();
    assert_eq!(got.len(), 1 + 1 + 2 * 7);
    let all = by_order(7);
    let spec = EnumSpec::connected(7).with_max_degree(3).with_max_diameter(2);
    let got = enumerate_connected(&spec, &EnumBudget::default()).unwrap();
    let want = all.iter().flatten().filter(|g| g.max_degree() <= 3 && diameter(g).unwrap() <= 2).count();
    assert_eq!(got.len(), want);
    let spec = EnumSpec::connected(7).with_max_radius(1);
    let stars = enumerate_connected(&spec, &EnumBudget::default()).unwrap();
    let want = all.iter().flatten().filter(|g| radius(g).unwrap() <= 1).count();
    assert_eq!(stars.len(), want);
    let tight = EnumBudget {
        max_vertices: 5,
        max_extensions: 10_000_000,
    };
    assert!(enumerate_connected(&EnumSpec::connected(7), &tight).is_err());
}

#[test]
fn metrics() {
    assert_eq!(diameter(&Graph::path(7).unwrap()).unwrap(), 6);
    assert_eq!(radius(&Graph::path(7).unwrap()).unwrap(), 3);
    assert_eq!(radius(&Graph::cycle(9).unwrap()).unwrap(), 4);
    let b = ball(&Graph::path(9).unwrap(), 4, 2).unwrap();
    assert!(is_isomorphic(&b, &Graph::path(5).unwrap()));
    assert!(diameter(&Graph::empty(2).unwrap()).is_err());
}

use num_bigint::BigInt;
use num_rational::BigRational;
use specrad::algnum::{lambda_star, AlgebraicReal};
use specrad::graphkit::Graph;
use specrad::lines::{
    alpha_of_lam_algebraic, ceil_strict, choose_t, clique_bound_check, clique_number, code_from_graph, kronecker_lift, lam_of_alpha,
    lower_bound_construction, lower_bound_count, project_code, rank_bound_check, scalar_of, simplex_like_code,
    size_upper_bound, underlying_graph, upper_bound_parameters, LSet, LinesError, SphericalCode,
};
use specrad::order::OrderValue;
use specrad::spectra::lambda1;
use specrad::{BigFloat, CodeF, CodeQ, SymMatrix};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn aq(n: i64, d: i64) -> AlgebraicReal {
    AlgebraicReal::from_rational(q(n, d))
}

/// Vectors `sqrt(1 - alpha) (x_i ⊗ e_k) ⊕ sqrt(alpha)` for `m` copies of
/// the base vectors; their Gram matrix is the lifted code.
fn explicit_lift(base: &[Vec<f64>], alpha: f64, m: usize) -> Vec<Vec<f64>> {
    let d = base[0].len();
    let mut out = Vec::new();
    for x in base {
        for k in 0..m {
            let mut v = vec![0.0; d * m + 1];
            for (c, xc) in x.iter().enumerate() {
                v[c * m + k] = (1.0 - alpha).sqrt() * xc;
            }
            v[d * m] = alpha.sqrt();
            out.push(v);
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The lift agrees with the explicit vectors up to a simultaneous
/// permutation, matched by the multiset of each row.
fn assert_matches_explicit(code: &CodeF, vectors: &[Vec<f64>]) {
    assert_eq!(code.len(), vectors.len());
    let key = |row: Vec<f64>| {
        let mut r: Vec<i64> = row.iter().map(|x| (x * 1e9).round() as i64).collect();
        r.sort();
        r
    };
    let mut got: Vec<Vec<i64>> = (0..code.len()).map(|i| key(code.gram.row(i).to_vec())).collect();
    let mut want: Vec<Vec<i64>> = vectors.iter().map(|v| key(vectors.iter().map(|w| dot(v, w)).collect())).collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn constructions_match_explicit_vectors() {
    let k2 = code_from_graph::<f64>(&Graph::complete(2).unwrap(), &aq(1, 1)).unwrap();
    let lift = kronecker_lift(&k2, &aq(1, 3), 16).unwrap();
    assert_eq!(lift.len(), 30);
    assert!(lift.validate().valid);
    assert_matches_explicit(&lift, &explicit_lift(&[vec![1.0], vec![-1.0]], 1.0 / 3.0, 15));

    let k3 = code_from_graph::<f64>(&Graph::complete(3).unwrap(), &aq(2, 1)).unwrap();
    let lift = kronecker_lift(&k3, &aq(1, 5), 15).unwrap();
    assert_eq!(lift.len(), 21);
    assert!(lift.validate().valid);
    let s = 3f64.sqrt() / 2.0;
    let tri = [vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]];
    assert_matches_explicit(&lift, &explicit_lift(&tri, 0.2, 7));

    let s2 = AlgebraicReal::from_integer(2).sqrt().unwrap();
    let alpha = alpha_of_lam_algebraic(&s2).unwrap();
    let p3 = code_from_graph::<f64>(&Graph::path(3).unwrap(), &s2).unwrap();
    let lift = kronecker_lift(&p3, &alpha, 15).unwrap();
    assert_eq!(lift.len(), 21);
    let h = 0.5f64.sqrt();
    let bent = [vec![1.0, 0.0], vec![-h, h], vec![0.0, -1.0]];
    assert_matches_explicit(&lift, &explicit_lift(&bent, alpha.to_f64(), 7));
}

#[test]
fn scalar_types_agree() {
    let s2 = AlgebraicReal::from_integer(2).sqrt().unwrap();
    let alpha = alpha_of_lam_algebraic(&s2).unwrap();
    let g = Graph::path(3).unwrap();
    let f = kronecker_lift(&code_from_graph::<f64>(&g, &s2).unwrap(), &alpha, 15).unwrap();
    let b = kronecker_lift(&code_from_graph::<BigFloat>(&g, &s2).unwrap(), &alpha, 15).unwrap();
    let s = kronecker_lift(&code_from_graph::<f32>(&g, &s2).unwrap(), &alpha, 15).unwrap();
    assert!(b.validate().valid, "{:?}", b.validate());
    assert!(s.validate().valid, "{:?}", s.validate());
    for i in 0..f.len() {
        for j in 0..f.len() {
            assert!((f.gram.get(i, j) - b.gram.get(i, j).to_f64()).abs() < 1e-15);
            assert!((f.gram.get(i, j) - *s.gram.get(i, j) as f64).abs() < 1e-6);
        }
    }
    assert!(matches!(code_from_graph::<BigRational>(&g, &s2), Err(LinesError::NotRepresentable)));
    assert!(scalar_of::<BigRational>(&s2).is_err());
    assert!((scalar_of::<f64>(&s2).unwrap() - 2f64.sqrt()).abs() < 1e-16);
}

#[test]
fn rational_codes_are_exact() {
    let k3 = code_from_graph::<BigRational>(&Graph::complete(3).unwrap(), &aq(2, 1)).unwrap();
    let lift: CodeQ = kronecker_lift(&k3, &aq(1, 5), 15).unwrap();
    let audit = lift.validate();
    assert!(audit.valid && audit.exact);
    assert_eq!(audit.rank, 15);
    let v = lift.to_json();
    let back = CodeQ::from_json(&v, Some(aq(1, 5))).unwrap();
    assert_eq!(back.gram, lift.gram);
    assert_eq!(v["size"], 21);
    let mut entries: Vec<&str> = v["gram"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    entries.sort();
    entries.dedup();
    assert_eq!(entries, vec!["-1/5", "1", "1/5"]);
}

#[test]
fn invalid_codes_are_reported() {
    let third = q(1, 3);
    let gram = SymMatrix::from_fn(5, |i, j| if i == j { q(1, 1) } else { -third.clone() });
    let audit = SphericalCode::new(gram, vec![-third.clone(), third.clone()], 5).validate();
    assert!(!audit.psd && !audit.valid && audit.membership_ok);
    let gram = SymMatrix::from_fn(3, |i, j| if i == j { q(1, 1) } else { q(1, 2) });
    let audit = SphericalCode::new(gram, vec![-third.clone(), third], 3).validate();
    assert!(!audit.membership_ok && audit.violation.is_some());
    assert!(kronecker_lift(&code_from_graph::<f64>(&Graph::complete(3).unwrap(), &aq(2, 1)).unwrap(), &aq(1, 5), 2).is_err());
}

#[test]
fn projection_of_planted_independent_sets() {
    let alpha = aq(1, 3);
    assert_eq!(LSet::new(&alpha, 10).unwrap().values::<BigRational>().unwrap(), [q(-11, 13), q(1, 13)]);
    let k2 = code_from_graph::<BigRational>(&Graph::complete(2).unwrap(), &aq(1, 1)).unwrap();
    let lift = kronecker_lift(&k2, &alpha, 16).unwrap();
    for t in 3..=15 {
        let p = project_code(&lift, t).unwrap();
        assert_eq!(p.independent_set.len(), t);
        assert!(p.switched.is_empty());
        assert_eq!(p.kept.len(), 30 - 2 * t);
        assert_eq!(p.class_sizes.get(&1), Some(&t));
        let audit = p.code.validate();
        assert!(audit.valid, "t = {t}: {audit:?}");
        let r = rank_bound_check(&p.code, 16).unwrap();
        assert!(r.passed && r.identity_holds, "t = {t}: {r:?}");
        assert!(r.rank_i_minus_a <= r.rank_gram + 1);
    }
    let p = project_code(&lift, 10).unwrap();
    assert!((0..p.code.len()).all(|i| (0..p.code.len()).all(|j| {
        let x = p.code.gram.get(i, j);
        i == j || *x == q(1, 13) || *x == q(-11, 13)
    })));
    assert!(matches!(project_code(&lift, 2), Err(LinesError::Domain(_))));
    assert!(matches!(project_code(&lift, 16), Err(LinesError::NoIndependentSet { .. })));
}

#[test]
fn projection_switches_a_planted_vector() {
    let alpha = aq(1, 3);
    let n = 14;
    let base: CodeQ = simplex_like_code(&alpha, n).unwrap();
    let flip = |i: usize| if i == 0 { -1 } else { 1 };
    let gram = SymMatrix::from_fn(n, |i, j| {
        let x = base.gram.get(i, j).clone();
        if flip(i) * flip(j) < 0 {
            -x
        } else {
            x
        }
    });
    let mut code = SphericalCode::new(gram, base.l.clone(), n);
    code.alpha = Some(alpha);
    assert_eq!(underlying_graph(&code, 0).unwrap().graph.edge_count(), n - 1);
    let p = project_code(&code, 10).unwrap();
    assert!(!p.independent_set.contains(&0));
    assert_eq!(p.switched, vec![0]);
    assert_eq!(p.kept.len(), n - 10);
    assert!(p.kept.contains(&0));
    assert!(p.code.validate().valid);
    assert!((0..p.code.len()).all(|i| (0..i).all(|j| *p.code.gram.get(i, j) == q(1, 13))));
    assert!(rank_bound_check(&p.code, n).unwrap().passed);
}

#[test]
fn clique_bound() {
    for (g, lam, alpha, n) in [
        (Graph::complete(2).unwrap(), aq(1, 1), aq(1, 3), 16),
        (Graph::complete(3).unwrap(), aq(2, 1), aq(1, 5), 15),
        (Graph::path(3).unwrap(), aq(3, 1), aq(1, 7), 10),
    ] {
        let code0 = code_from_graph::<f64>(&g, &lam);
        let Ok(code0) = code0 else { continue };
        let lift = kronecker_lift(&code0, &alpha, n).unwrap();
        let (omega, bound, ok) = clique_bound_check(&lift).unwrap();
        assert!(ok);
        assert_eq!(omega, clique_number(&g));
        assert_eq!(bound, 1 + (1.0 / alpha.to_f64()).floor() as usize);
    }
    assert_eq!(ceil_strict(&aq(3, 1)), BigInt::from(4));
    assert_eq!(ceil_strict(&aq(5, 2)), BigInt::from(3));
}

#[test]
fn lower_bounds() {
    assert_eq!(lower_bound_count(16, Some(2)).unwrap(), 30);
    assert_eq!(lower_bound_count(15, Some(3)).unwrap(), 21);
    assert!(lower_bound_count(10, Some(1)).is_err());
    let c: CodeQ = lower_bound_construction(&aq(1, 5), 15, Some(&Graph::complete(3).unwrap())).unwrap();
    assert_eq!(c.len(), 21);
    assert!(lower_bound_construction::<f64>(&aq(1, 5), 15, Some(&Graph::path(3).unwrap())).is_err());
    let s: CodeQ = lower_bound_construction(&aq(1, 7), 9, None).unwrap();
    assert_eq!(s.len(), 9);
    assert!(s.validate().valid);
}

#[test]
fn upper_bound_rows() {
    let rows = size_upper_bound(&aq(1, 7), 1000, Some(&OrderValue::Finite(4))).unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r.name).collect();
    assert!(names.contains(&"average_degree") && names.contains(&"uniform"));
    let avg = rows.iter().find(|r| r.name == "average_degree").unwrap();
    assert_eq!(avg.coefficient, "49/36");
    let rel = size_upper_bound(&aq(1, 3), 8, None).unwrap();
    let rel = rel.iter().find(|r| r.name == "relative").unwrap();
    assert_eq!(rel.coefficient, "8");
    assert_eq!(rel.value, 64.0);
    let ls = alpha_of_lam_algebraic(&lambda_star()).unwrap();
    let rows = size_upper_bound(&ls, 20, None).unwrap();
    assert!(rows.iter().any(|r| r.name == "not_totally_real_integer" && r.value == 21.0));
    let two_minus = alpha_of_lam_algebraic(&AlgebraicReal::from_integer(4).sub(&AlgebraicReal::from_integer(2).sqrt().unwrap())).unwrap();
    let rows = size_upper_bound(&two_minus, 20, None).unwrap();
    assert!(rows.iter().any(|r| r.name == "algebraic_degree" && r.coefficient == "2"));
    assert!(size_upper_bound(&aq(1, 3), 0, None).is_err());
    assert_eq!(lam_of_alpha(&q(1, 7)).unwrap(), q(3, 1));
}

#[test]
fn parameters_and_t() {
    let p = upper_bound_parameters(&AlgebraicReal::from_integer(2), 0.01).unwrap();
    assert!(p.lambda_prime > 2.0 / 1.04f64.sqrt());
    assert!(p.k == 0 || 2.0 * (std::f64::consts::PI / (p.k as f64 + 1.0)).cos() <= 2.0 / 1.04f64.sqrt());
    assert_eq!(p.star_degree, 5);
    assert_eq!(p.t_min, 6);
    assert!((p.coefficient - 1.51).abs() < 1e-12);
    assert!(upper_bound_parameters(&aq(3, 2), 0.1).is_err());

    let alpha = aq(1, 5);
    let family = [Graph::complete(4).unwrap(), Graph::star(5).unwrap(), Graph::path(3).unwrap().disjoint_union(&Graph::cycle(5).unwrap()).unwrap()];
    assert!(choose_t(&alpha, &family).is_err());
    let family = &family[..2];
    let c = choose_t(&alpha, family).unwrap();
    assert!(c.t > 5);
    for g in family {
        let lhs = 1.0 - lambda1(g) / 2.0 + g.order() as f64 / (c.t as f64 + 5.0 - 1.0);
        assert!(lhs < 0.0, "{g}");
    }
}

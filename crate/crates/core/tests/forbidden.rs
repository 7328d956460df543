mod common;

use num_rational::BigRational;
use specrad::algnum::{alpha, lambda_star, AlgebraicReal};
use specrad::forbidden::{
    build_family, build_family_or_partial, choose_m, choose_n, minimal_obstructions, minimize_family, oracle_check,
    ForbiddenError, ForbiddenFamily,
};
use specrad::graphkit::{enumerate_connected, is_isomorphic, EnumBudget, EnumSpec, Graph};
use specrad::spectra::lambda1;

fn rat(n: i64, d: i64) -> AlgebraicReal {
    AlgebraicReal::from_rational(BigRational::new(n.into(), d.into()))
}

fn budget(v: usize) -> EnumBudget {
    EnumBudget {
        max_vertices: v,
        max_extensions: 10_000_000,
    }
}

fn same_set(got: &[Graph], want: &[Graph]) -> bool {
    got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| is_isomorphic(g, w)))
}

fn family(lam: &AlgebraicReal) -> ForbiddenFamily {
    let (fam, _) = build_family_or_partial(lam, &budget(8)).unwrap();
    minimize_family(&fam)
}

/// `lambda1(g) <= lam` iff `g` contains no member, by floating eigenvalues
/// and a direct embedding search. Rational non-integer `lam` is never a
/// spectral radius, so a margin separates the floating comparison.
fn independent_oracle(fam: &ForbiddenFamily, lam: f64, up_to: usize) {
    for g in enumerate_connected(&EnumSpec::connected(up_to), &EnumBudget::default()).unwrap() {
        let r = lambda1(&g);
        assert!((r - lam).abs() > 1e-9);
        let inside = r < lam;
        let contains = fam.members.iter().any(|h| common::embeds(&g, h, false));
        assert_ne!(inside, contains, "{g} with lambda1 {r}");
    }
}

#[test]
fn small_lambda_obstructions() {
    let obs = minimal_obstructions(&rat(1, 1), 6, &budget(6)).unwrap();
    assert!(same_set(&obs, &[Graph::path(3).unwrap()]));
    let obs = minimal_obstructions(&rat(3, 2), 7, &budget(7)).unwrap();
    let want = [Graph::path(4).unwrap(), Graph::star(3).unwrap(), Graph::cycle(3).unwrap()];
    assert!(same_set(&obs, &want));
    assert!(same_set(&family(&rat(1, 1)).members, &[Graph::path(3).unwrap()]));
    assert!(same_set(&family(&rat(3, 2)).members, &want));
}

#[test]
fn families_against_independent_oracle() {
    for (n, d) in [(13, 10), (3, 2), (9, 5)] {
        let lam = rat(n, d);
        independent_oracle(&family(&lam), n as f64 / d as f64, 7);
    }
}

#[test]
fn families_pass_the_enumeration_oracle() {
    for lam in [rat(19, 10), rat(2, 1), rat(201, 100)] {
        let fam = family(&lam);
        let report = oracle_check(&fam, 8, &EnumBudget::default()).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        assert_eq!(report.checked, 1 + 1 + 2 + 6 + 21 + 112 + 853 + 11117);
    }
}

#[test]
fn family_members_are_minimal() {
    let fam = family(&rat(2, 1));
    for (i, a) in fam.members.iter().enumerate() {
        for (j, b) in fam.members.iter().enumerate() {
            if i != j {
                assert!(!common::embeds(a, b, false), "{a} contains {b}");
            }
        }
    }
    let obs = minimal_obstructions(&rat(2, 1), 7, &budget(7)).unwrap();
    for g in fam.members.iter().filter(|g| g.order() <= 7) {
        assert!(obs.iter().any(|h| is_isomorphic(g, h)), "{g} is not a minimal obstruction");
    }
}

#[test]
fn thresholds() {
    assert_eq!(choose_m(&rat(2, 1)).unwrap(), 2);
    assert_eq!(choose_m(&rat(201, 100)).unwrap(), 2);
    let mid = alpha(4).unwrap().add(&alpha(5).unwrap()).div(&rat(2, 1)).unwrap();
    assert_eq!(choose_m(&mid).unwrap(), 5);
    let n = choose_n(&rat(2, 1), 2).unwrap();
    assert!(n > 2);
}

#[test]
fn refusals() {
    for lam in [alpha(2).unwrap(), lambda_star(), lambda_star().add(&rat(1, 10)), rat(-1, 1)] {
        let r = build_family(&lam, &budget(6));
        assert!(matches!(r, Err(ForbiddenError::UnsupportedLambda(_))), "{lam}");
    }
}

#[test]
fn json_shape() {
    let fam = family(&rat(3, 2));
    let v = fam.to_json();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["members"].as_array().unwrap().len(), 3);
    assert!(v["lambda"]["minpoly"].is_string());
    assert!(v["log"]["complete"].is_boolean());
}

use dbr::funcexpr::{parse_expr, radial_limit, default_radii, Exponent, Expr, LimitStatus};
use dbr::{Complex64, Expr64};
use proptest::prelude::*;

fn p(s: &str) -> Expr64 {
    parse_expr(s).unwrap()
}

/// Smooth on the closed disk minus the branch points on the boundary.
const SMOOTH: [&str; 8] = [
    "(1-z)^(3/4)/(1+z)^(1/4)",
    "1-(1-z)^(1/2)",
    "((1-z)/(1+z))^(1/4)",
    "0.1*(z-1)",
    "(z^2-0.5)/2",
    "(1+z/3)*(1-z)^(1/2)/2",
    "{z^2+1}(z/(2-z))",
    "(2.5-0.25i)*z^3+1/(3-z)",
];

fn constant() -> impl Strategy<Value = Complex64> {
    prop_oneof![
        (1..20i32).prop_map(|n| Complex64::new(n as f64 / 4.0, 0.0)),
        ((-8..8i32), (1..8i32)).prop_map(|(a, b)| Complex64::new(a as f64 / 2.0, b as f64 / 4.0)),
    ]
}

fn expr() -> impl Strategy<Value = Expr64> {
    let leaf = prop_oneof![Just(Expr::z()), constant().prop_map(Expr::constant)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner.clone(), -3..4i64).prop_map(|(a, n)| Expr::powi(a, n)),
            (inner.clone(), prop_oneof![Just((1, 2)), Just((3, 4)), Just((-1, 4))])
                .prop_map(|(a, (n, d))| Expr::frac_pow(a, Exponent::new(n, d).unwrap())),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::compose(a, b)),
        ]
    })
}

fn interior() -> impl Strategy<Value = Complex64> {
    (0.0..0.95f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in expr()) {
        let printed = e.to_string();
        let back = parse_expr::<f64>(&printed).unwrap();
        prop_assert_eq!(back, e, "{}", printed);
    }

    #[test]
    fn derivative_matches_central_difference(i in 0..SMOOTH.len(), z in interior()) {
        let e = p(SMOOTH[i]);
        let d = e.differentiate().eval(z).unwrap();
        let h = 1e-5;
        let fd = (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h);
        prop_assert!((d - fd).norm() / (1.0 + d.norm()) < 1e-6, "{} at {}: {} vs {}", SMOOTH[i], z, d, fd);
    }
}

#[test]
fn branch_safety_on_random_interior_points() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for s in SMOOTH {
        let e = p(s);
        for _ in 0..10_000 {
            let z = Complex64::from_polar(rng.gen::<f64>().sqrt() * (1.0 - 1e-12), rng.gen_range(0.0..std::f64::consts::TAU));
            assert!(e.eval(z).is_ok(), "{s} failed at {z}");
        }
    }
}

#[test]
fn radial_limits_agree_with_deep_samples() {
    let radii = default_radii::<f64>();
    let r = 1.0 - 2f64.powi(-45);
    for (s, zeta, want) in [
        ("1-(1-z)^(1/2)", Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        ("z+(1-z)^(1/2)", Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        ("z^2", Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)),
        ("(1+z)/2", Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)),
        ("1/(2-z)", Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
    ] {
        let e = p(s);
        let res = radial_limit(&e, zeta, &radii).unwrap();
        assert_eq!(res.status, LimitStatus::Converged, "{s}");
        let v = res.value.unwrap();
        assert!((v - e.eval(zeta * r).unwrap()).norm() < 1e-5, "{s}: {v}");
        assert!((v - want).norm() < 1e-5, "{s}: {v} vs {want}");
    }
}

use dbr::funcexpr::{parse_expr, Expr};
use dbr::hardy::{h2_membership, quadrature_t, taylor_coeffs, toeplitz_coanalytic_apply, CoeffVector, Membership};
use dbr::hb::{corona_infimum, decompose, hb_membership, hb_norm, HbSpace};
use dbr::poly::{bezout, Poly};
use dbr::{Complex64, Expr64, HbSpace64, Poly64};
use proptest::prelude::*;

fn p(s: &str) -> Expr64 {
    parse_expr(s).unwrap()
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly64> {
    prop::collection::vec(coeff(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn disk(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(r, t)| Complex64::from_polar(radius * r.sqrt(), t))
}

/// Polynomial with every root in `1.2 ≤ |z| ≤ 3`.
fn outer_poly() -> impl Strategy<Value = Poly64> {
    (prop::collection::vec((1.2..3.0f64, 0.0..std::f64::consts::TAU), 1..=4), 0.5..2.0f64).prop_map(|(roots, c)| {
        let roots: Vec<_> = roots.into_iter().map(|(r, t)| (Complex64::from_polar(r, t), 1)).collect();
        Poly::from_roots(&roots).scale(Complex64::new(c, 0.0))
    })
}

const SPACES: [&str; 4] = ["(1+z)/2", "(1+z^2)/2", "0.5/(1-z/2)", "(1+z)^2/4"];

fn spaces() -> Vec<HbSpace64> {
    SPACES.iter().map(|b| HbSpace::from_expr(&p(b)).unwrap()).collect()
}

/// Functions inside H² with Taylor coefficients decaying at least geometrically.
const H2_FIXTURES: [&str; 5] = ["1/(2-z)", "(1+z/3)^3", "(z^2-0.5)/2", "1/(1-z/2)^2", "z/(3+z^2)"];

#[test]
fn parseval() {
    for s in H2_FIXTURES {
        let f = p(s);
        let c = taylor_coeffs(&f, 64, None).unwrap();
        for r in [0.5, 0.9] {
            let q = quadrature_t(|z| f.eval(z * r).map(|v| Complex64::new(v.norm_sqr(), 0.0)), 256, |_| false, 0).unwrap();
            let series: f64 = c.coeffs.iter().enumerate().map(|(k, c)| c.norm_sqr() * r.powi(2 * k as i32)).sum();
            assert!((q.value.re - series).abs() <= 1e-6 * series, "{s} at r = {r}: {} vs {series}", q.value.re);
        }
    }
}

#[test]
fn h2_norm_matches_coefficients() {
    for s in H2_FIXTURES {
        let f = p(s);
        let v = h2_membership(&f).unwrap();
        assert_eq!(v.status, Membership::Inside, "{s}");
        let c = taylor_coeffs(&f, 512, Some(0.999)).unwrap();
        let want = c.norm_sqr();
        let got = v.best_norm().unwrap().powi(2);
        assert!((got - want).abs() <= 1e-3 * want, "{s}: {got} vs {want}");
    }
}

#[test]
fn mate_identity_on_accepted_symbols() {
    for b in SPACES.iter().chain(&["z^3*(1+z)/2", "(1+z)*(2+z)/6", "(z-0.5)/(1-0.5*z)*(1+z)/2"]) {
        let space = HbSpace::from_expr(&p(b)).unwrap();
        for j in 0..4096 {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * (j as f64 + 0.5) / 4096.0);
            let id = space.mate.eval(z).norm_sqr() + space.b.eval(z).norm_sqr();
            assert!((id - 1.0).abs() < 1e-8, "{b} at {z}: {id}");
        }
    }
}

#[test]
fn corona_and_bezout_coherence_for_boundary_factors() {
    for space in spaces() {
        let factors: Vec<Poly64> = space.zeros.iter().map(|z| Poly::linear(z.zeta)).collect();
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i + 1..] {
                assert!(corona_infimum(a, b).infimum > 0.1);
                assert_eq!(bezout(a, b).unwrap().gcd.degree(), Some(0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_eigen_identity(v in outer_poly(), lambda in disk(0.8)) {
        let k = CoeffVector::kernel(lambda, 256);
        let tk = toeplitz_coanalytic_apply(&v, &k);
        let vl = v.eval(lambda).conj();
        let err: f64 = tk.coeffs.iter().zip(&k.coeffs).map(|(a, b)| (a - vl * b).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err / k.norm() < 1e-6);
    }

    #[test]
    fn direct_sum_is_orthonormal(which in 0..SPACES.len(), h in poly(5), j in 0..4usize) {
        let space = &spaces()[which];
        prop_assume!(space.n > 0);
        let j = j % space.n;
        let f = Expr::from_poly(&(&(&space.a * &h) + &Poly::monomial(j)));
        let d = decompose(space, &f).unwrap();
        let norm = hb_norm(&d).unwrap();
        let want = h.norm2().powi(2) + 1.0;
        prop_assert!((norm * norm - want).abs() <= 1e-8 * want, "{} vs {}", norm * norm, want);
    }

    #[test]
    fn decomposition_reconstructs(which in 0..SPACES.len(), q in poly(4), z in disk(0.98)) {
        let space = &spaces()[which];
        for f in [Expr::from_poly(&q), Expr::mul(Expr::from_poly(&q), p("(2-z)^(1/2)"))] {
            let d = decompose(space, &f).unwrap();
            prop_assert!(d.interpolation_residual < 1e-6);
            let fz = f.eval(z).unwrap();
            let back = space.a.eval(z) * d.g.eval(z).unwrap() + d.p.eval(z);
            prop_assert!((fz - back).norm() < 1e-8 * (1.0 + fz.norm()), "{} vs {}", fz, back);
        }
    }

    #[test]
    fn multipliers_preserve_membership(which in 0..2usize, m in poly(3), g in poly(3)) {
        let space = &spaces()[which];
        // `a·g + 1` is inside every space with a boundary zero.
        let f = Expr::from_poly(&(&(&space.a * &g) + &Poly::one()));
        prop_assert_eq!(hb_membership(space, &Expr::mul(Expr::from_poly(&m), f)).status, Membership::Inside);
    }
}

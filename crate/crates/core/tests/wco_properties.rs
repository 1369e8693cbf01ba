use dbr::funcexpr::parse_expr;
use dbr::hardy::{GridOptions, Membership};
use dbr::hb::HbSpace;
use dbr::poly::roots;
use dbr::selftest::MEMBERSHIP_FIXTURES;
use dbr::wco::{
    build_weight, classify, hilbert_schmidt_test, sweep_table, symbol_profile, AnalysisOptions, MatrixTrend, SumStatus,
    SweepOptions, Verdict,
};
use dbr::{Complex64, Expr64};

fn p(s: &str) -> Expr64 {
    parse_expr(s).unwrap()
}

/// Every `(b, u, φ)` the suite exercises, bounded or not.
fn suite() -> Vec<(&'static str, &'static str, &'static str)> {
    let mut v = MEMBERSHIP_FIXTURES.to_vec();
    v.extend([
        ("(1+z)/2", "1", "-z"),
        ("(1+z)/2", "1", "1-(1-z)^(1/2)"),
        ("(1+z)/2", "1", "0.1*(z-1)"),
        ("(1+z^2)/2", "z", "z^2"),
    ]);
    v
}

fn interior_points(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |j| Complex64::from_polar(0.02 + 0.96 * (j as f64 + 0.5) / n as f64, 2.399963 * j as f64))
}

#[test]
fn weight_identity_and_conjugation() {
    for (b, u, phi) in suite() {
        let space = HbSpace::from_expr(&p(b)).unwrap();
        let (u, phi) = (p(u), p(phi));
        let profile = symbol_profile(&space, &u, &phi).unwrap();
        let w = build_weight(&space, &u, &phi, &profile);
        for r in roots(&w.q).unwrap_or_default() {
            assert!(r.value.norm() > 1.0, "{b} {u}: q has a root at {}", r.value);
        }
        for z in interior_points(200) {
            let (uz, fz) = (u.eval(z).unwrap(), phi.eval(z).unwrap());
            let mut rhs = uz * space.a.eval(fz);
            for (&j, &lambda) in profile.d_set.iter().zip(&profile.lambdas) {
                rhs *= (fz - lambda).powu(profile.records[j].mult as u32);
            }
            let lhs = w.w.eval(z).unwrap() * space.a.eval(z);
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()), "{b} {u} {phi} at {z}");
            let conj = w.w_tilde.eval(z).unwrap() * w.q.eval(fz);
            assert!((w.w.eval(z).unwrap() - conj).norm() < 1e-9, "{b} {u} {phi} at {z}");
        }
    }
}

#[test]
fn verdict_coherence_over_the_suite() {
    let opts = AnalysisOptions::default();
    for (b, u, phi) in suite() {
        let space = HbSpace::from_expr(&p(b)).unwrap();
        let report = classify(&space, &p(u), &p(phi), &opts);
        if report.w_in_h2.as_ref().is_some_and(|v| v.status == Membership::Outside) {
            assert_eq!(report.bounded, Verdict::No, "{b} {u} {phi}");
        }
        if report.bounded == Verdict::Yes && !report.profile.as_ref().is_some_and(|p| p.u_is_zero) {
            let trend = report.matrix.as_ref().map(|m| m.trend);
            assert_eq!(trend, Some(MatrixTrend::BoundedConsistent), "{b} {u} {phi}");
        }
        if let Some(hs) = &report.hs {
            if hs.integral_status == SumStatus::Converged && hs.series_status == SumStatus::Converged {
                let (i, s) = (hs.integral.unwrap(), *hs.series.last().unwrap());
                assert!(hs.verdict == Verdict::Yes || (i - s).abs() > 1e-3 * i, "{b} {u} {phi}: {i} vs {s}");
            }
        }
    }
}

#[test]
fn hs_cross_check() {
    for (w, phi, want) in [("z/2-1", "z/2", 5.0 / 3.0), ("1", "z/3", 9.0 / 8.0), ("z", "0.5*z^2", 4.0 / 3.0)] {
        let hs = hilbert_schmidt_test(&p(w), &p(phi));
        let (i, s) = (hs.integral.unwrap(), *hs.series.last().unwrap());
        assert!((i - want).abs() < 1e-6 * want, "{w}: {i}");
        assert!((i - s).abs() < 1e-3 * i, "{w}: {i} vs {s}");
        assert_eq!(hs.verdict, Verdict::Yes);
    }
}

#[test]
fn criterion_rows_are_nonnegative_and_stable_under_refinement() {
    for (w, phi) in [("((1-z)/(1+z))^(1/4)", "1-(1-z)^(1/2)"), ("z/2-1", "z/2"), ("1", "(z^2-0.5)/2")] {
        let (w, phi) = (p(w), p(phi));
        let base = SweepOptions { levels: 8, ..SweepOptions::default() };
        let fine_grid = GridOptions { phi_resolution: 0.5, weight_tol: 1e-11, ..base.grid };
        let fine = SweepOptions { grid: fine_grid, ..base };
        let (a, b) = (sweep_table(&w, &phi, &base), sweep_table(&w, &phi, &fine));
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            for (x, y) in ra.values.iter().zip(&rb.values) {
                assert!(*x >= 0.0 && *y >= 0.0);
                assert!((x - y).abs() <= 0.01 * x.max(*y), "k = {}: {x} vs {y}", ra.k);
            }
        }
    }
}

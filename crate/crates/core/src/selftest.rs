//! Embedded fixture suite: ten acceptance criteria, each with its tolerances
//! and a runtime budget.
//!
//! Every tolerance is multiplied by a caller-supplied scale, so a scale below
//! one tightens the suite and a scale of zero makes every numeric check fail.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::funcexpr::{parse_expr, Expr};
use crate::hardy::{hinf_sup, toeplitz_coanalytic_apply, CoeffVector, Membership};
use crate::hb::{corona_infimum, decompose, hb_membership, hb_norm, HbSpace};
use crate::poly::{bezout, Poly};
use crate::scalar::{cis, C};
use crate::wco::{
    build_weight, classify, compactness_sweep, criterion_sweep, hilbert_schmidt_test, operator_norm_estimate,
    symbol_profile, wco_matrix, wco_matrix_h2, AnalysisOptions, CompactVerdict, ConstraintOutcome, CriterionVerdict,
    SweepOptions, Verdict, DEFAULT_MATRIX_SIZES,
};

/// Default seed of the random draws in the suite.
pub const SEED: u64 = 0x5eed_db12;

/// Tolerance scale and seed of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub scale: f64,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { scale: 1.0, seed: SEED }
    }
}

/// Result of one criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// First failed check, or a summary of the measured values.
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(s: &str) -> Expr<f64> {
    parse_expr(s).expect("fixture expression")
}

fn f1() -> HbSpace<f64> {
    HbSpace::from_expr(&e("(1+z)/2")).expect("F1")
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly<f64> {
    let deg = rng.gen_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

fn random_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> C<f64> {
    cis(rng.gen_range(0.0..std::f64::consts::TAU)) * (radius * rng.gen::<f64>().sqrt())
}

fn mate(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let space = f1();
    let want = Poly::from_real(&[0.5, -0.5]);
    let got = space.mate.as_poly().ok_or("mate is not a polynomial")?;
    let top = got.degree().unwrap_or(0).max(1);
    let err = (0..=top).map(|k| (got.coeff(k) - want.coeff(k)).norm()).fold(0.0, f64::max);
    ensure(err <= 1e-10 * s, || format!("mate coefficient error {err:.3e}"))?;
    let z = &space.zeros;
    ensure(z.len() == 1 && z[0].mult == 1 && (z[0].zeta - C::new(1.0, 0.0)).norm() <= 1e-10 * s, || {
        format!("boundary zeros {:?}", z.iter().map(|z| (z.zeta, z.mult)).collect::<Vec<_>>())
    })?;
    Ok(format!("coefficient error {err:.1e}"))
}

fn identity(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let (u, phi) = (e("1"), e("z"));
    let (table, v) = criterion_sweep(&u, &phi, &SweepOptions::default());
    ensure(table.rows.len() == 12, || format!("{} criterion rows", table.rows.len()))?;
    let dev = table.rows.iter().flat_map(|r| r.values.iter()).map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    ensure(dev <= 1e-6 * s, || format!("criterion rows deviate from 1 by {dev:.3e}"))?;
    ensure(v == CriterionVerdict::Bounded, || format!("criterion verdict {v:?}"))?;
    let est = operator_norm_estimate(&f1(), &u, &phi, &DEFAULT_MATRIX_SIZES);
    let sdev = est.sigma_max.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    ensure(sdev <= 1e-8 * s, || format!("matrix sigma_max deviates from 1 by {sdev:.3e}"))?;
    Ok(format!("row deviation {dev:.1e}, sigma deviation {sdev:.1e}"))
}

fn half_disk_weight(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let space = f1();
    let (u, phi) = (e("(1-z)^(3/4)/(1+z)^(1/4)"), e("1-(1-z)^(1/2)"));
    let profile = symbol_profile(&space, &u, &phi).map_err(|err| err.to_string())?;
    let w = build_weight(&space, &u, &phi, &profile).w;
    let want = e("((1-z)/(1+z))^(1/4)");
    let mut err: f64 = 0.0;
    for j in 0..100 {
        let z = cis(0.37 * j as f64 + 0.1) * (0.05 + 0.009 * j as f64);
        let (a, b) = (w.eval(z).map_err(|x| x.to_string())?, want.eval(z).map_err(|x| x.to_string())?);
        err = err.max((a - b).norm());
    }
    ensure(err <= 1e-8 * s, || format!("weight differs from closed form by {err:.3e}"))?;
    let opts = AnalysisOptions::default();
    let report = classify(&space, &u, &phi, &opts);
    ensure(report.bounded == Verdict::Yes, || format!("bounded = {:?}: {:?}", report.bounded, report.notes))?;
    let hinf = hinf_sup(&u).map_err(|x| x.to_string())?;
    ensure(hinf.status == Membership::Outside, || format!("hinf_sup(u) = {:?}", hinf.status))?;
    let one = e("1");
    let c = classify(&space, &one, &phi, &opts);
    ensure(c.bounded == Verdict::No, || format!("composition operator bounded = {:?}", c.bounded))?;
    ensure(c.caratheodory.iter().any(|k| k.outcome == ConstraintOutcome::Violation), || "no ADC violation recorded".into())?;
    let h2 = c.w_in_h2.as_ref().map(|v| v.status);
    ensure(h2 == Some(Membership::Outside), || format!("weight_in_h2 = {h2:?}"))?;
    Ok(format!("weight error {err:.1e}"))
}

fn norm_ratio(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let space = f1();
    let (u, phi) = (e("1"), e("0.1*(z-1)"));
    let profile = symbol_profile(&space, &u, &phi).map_err(|x| x.to_string())?;
    let wt = build_weight(&space, &u, &phi, &profile).w_tilde;
    let sup = hinf_sup(&wt).map_err(|x| x.to_string())?.norm_estimate.ok_or("sup of w_tilde is infinite")?;
    ensure(sup <= 0.12 + 1e-6 * s, || format!("sup of w_tilde {sup:.9}"))?;
    let h2 = wco_matrix_h2(&wt, &phi, 32).matrix.sigma_max();
    ensure(h2 <= 0.6 * (1.0 + 0.05 * s), || format!("H2 sigma_max {h2:.6}"))?;
    let hb = wco_matrix(&space, &u, &phi, 32).matrix.sigma_max();
    ensure(hb >= 1.0 - 1e-8 * s, || format!("H(b) sigma_max {hb:.10}"))?;
    let ratio = hb / h2;
    ensure(ratio >= (1.0 / 0.6) * (1.0 - 0.1 * s), || format!("norm ratio {ratio:.4}"))?;
    Ok(format!("sup {sup:.6}, sigma {h2:.4} / {hb:.4}, ratio {ratio:.3}"))
}

fn hilbert_schmidt(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let space = f1();
    let (u, phi) = (e("z-1"), e("z/2"));
    let profile = symbol_profile(&space, &u, &phi).map_err(|x| x.to_string())?;
    let w = build_weight(&space, &u, &phi, &profile).w;
    let hs = hilbert_schmidt_test(&w, &phi);
    let integral = hs.integral.ok_or("integral did not converge")?;
    ensure((integral - 5.0 / 3.0).abs() <= 1e-4 * s, || format!("integral {integral:.10}"))?;
    let series = hs.series_at(64).ok_or("series shorter than 64 terms")?;
    ensure((series - integral).abs() <= 1e-3 * s * integral, || format!("series {series:.10} vs integral {integral:.10}"))?;
    let report = classify(&space, &u, &phi, &AnalysisOptions::default());
    ensure(report.hilbert_schmidt == Verdict::Yes, || format!("classify HS = {:?}", report.hilbert_schmidt))?;
    Ok(format!("integral {integral:.8}, series(64) {series:.8}"))
}

fn compactness(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let space = f1();
    let (u, phi) = (e("z-1"), e("0.3"));
    let profile = symbol_profile(&space, &u, &phi).map_err(|x| x.to_string())?;
    let w = build_weight(&space, &u, &phi, &profile).w;
    let (t, v) = compactness_sweep(&w, &phi, &SweepOptions::default());
    let (first, last) = (t.rows[0].max, t.rows[t.rows.len() - 1].max);
    ensure(last < 1e-3 * s * first, || format!("final row {last:.3e} vs first {first:.3e}"))?;
    ensure(v == CompactVerdict::Compact, || format!("constant weight verdict {v:?}"))?;
    let (_, v) = compactness_sweep(&e("1"), &e("z"), &SweepOptions::default());
    ensure(v == CompactVerdict::NotCompact, || format!("identity verdict {v:?}"))?;
    Ok(format!("row decay {:.1e}", last / first))
}

fn toeplitz_kernel(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let deg = rng.gen_range(1..=4);
        let roots: Vec<(C<f64>, usize)> = (0..deg)
            .map(|_| (cis(rng.gen_range(0.0..std::f64::consts::TAU)) * rng.gen_range(1.2..3.0), 1))
            .collect();
        let v = Poly::from_roots(&roots).scale(C::new(rng.gen_range(0.5..2.0), 0.0));
        let lambda = random_in_disk(&mut rng, 0.8);
        let k = CoeffVector::kernel(lambda, 256);
        let tk = toeplitz_coanalytic_apply(&v, &k);
        let vl = v.eval(lambda).conj();
        let diff: f64 = tk.coeffs.iter().zip(&k.coeffs).map(|(a, b)| (a - vl * b).norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(diff / k.norm());
    }
    ensure(worst < 1e-6 * s, || format!("kernel identity residual {worst:.3e}"))?;
    Ok(format!("worst residual {worst:.1e}"))
}

fn corona(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let (p, q) = (Poly::<f64>::from_real(&[-1.0, 1.0]), Poly::from_real(&[1.0, 1.0]));
    let c = corona_infimum(&p, &q);
    ensure((c.infimum - 2.0).abs() <= 1e-3 * s, || format!("corona infimum {:.6}", c.infimum))?;
    let b = bezout(&p, &q).map_err(|x| x.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut res: f64 = 0.0;
    for _ in 0..100 {
        let z = random_in_disk(&mut rng, 1.0);
        let lhs = p.eval(z) * b.h1.eval(z) + q.eval(z) * b.h2.eval(z);
        res = res.max((lhs - b.gcd.eval(z)).norm());
    }
    ensure(b.gcd.degree() == Some(0) && res < 1e-10 * s, || format!("bezout residual {res:.3e}"))?;
    let d = corona_infimum(&p, &p).infimum;
    ensure(d < 1e-6 * s, || format!("degenerate corona infimum {d:.3e}"))?;
    Ok(format!("infimum {:.6}, bezout residual {res:.1e}", c.infimum))
}

/// Fixture pairs `(b, u, φ)` used by the membership and decomposition checks.
pub const MEMBERSHIP_FIXTURES: [(&str, &str, &str); 7] = [
    ("(1+z)/2", "(1-z)^(3/4)/(1+z)^(1/4)", "1-(1-z)^(1/2)"),
    ("(1+z)/2", "1", "z"),
    ("(1+z)/2", "z-1", "z/2"),
    ("(1+z)/2", "z-1", "0.3"),
    ("(1+z)/2", "z-1", "(1-z)^(1/2)/2"),
    ("(1+z^2)/2", "1+z/3", "(z^2-0.5)/2"),
    ("(1+z^2)/2", "1", "z"),
];

struct Fixture {
    space: HbSpace<f64>,
    u: Expr<f64>,
    phi: Expr<f64>,
}

/// Fixtures whose `u` and `u·φ` are both inside H(b).
fn hypothesis_fixtures() -> std::result::Result<Vec<Fixture>, String> {
    let mut out = Vec::new();
    for (b, u, phi) in MEMBERSHIP_FIXTURES {
        let space = HbSpace::from_expr(&e(b)).map_err(|x| x.to_string())?;
        let (u, phi) = (e(u), e(phi));
        let p = symbol_profile(&space, &u, &phi).map_err(|x| x.to_string())?;
        if p.h1.is_inside() && p.h2.is_inside() {
            out.push(Fixture { space, u, phi });
        }
    }
    Ok(out)
}

fn membership(cfg: &Settings) -> Check {
    let fixtures = hypothesis_fixtures()?;
    ensure(!fixtures.is_empty(), || "no fixture satisfies both hypotheses".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut outside, mut inconclusive, mut total) = (0, 0, 0);
    let mut first_bad = None;
    for i in 0..70 {
        let fx = &fixtures[i % fixtures.len()];
        let p = random_poly(&mut rng, 5);
        let mut f = Expr::mul(fx.u.clone(), Expr::compose(Expr::from_poly(&p), fx.phi.clone()));
        if i >= 50 {
            for _ in 0..rng.gen_range(1..=2) {
                let lambda = random_in_disk(&mut rng, 0.8);
                let m = rng.gen_range(1..=2);
                let q = Poly::new(vec![C::new(1.0, 0.0), -lambda.conj()]).powi(m);
                f = Expr::div(f, Expr::compose(Expr::from_poly(&q), fx.phi.clone()));
            }
        }
        let v = hb_membership(&fx.space, &f);
        total += 1;
        match v.status {
            Membership::Inside => {}
            Membership::Outside => {
                outside += 1;
                first_bad.get_or_insert(i);
            }
            Membership::Inconclusive => inconclusive += 1,
        }
    }
    ensure(outside == 0, || format!("{outside} outside verdicts, first at draw {}", first_bad.unwrap_or(0)))?;
    ensure(inconclusive * 20 <= total, || format!("{inconclusive} of {total} inconclusive"))?;
    Ok(format!("{total} draws over {} fixtures, {inconclusive} inconclusive", fixtures.len()))
}

fn decomposition(cfg: &Settings) -> Check {
    let s = cfg.scale;
    let fixtures = hypothesis_fixtures()?;
    let (mut res, mut interp) = (0.0f64, 0.0f64);
    for fx in &fixtures {
        for f in [fx.u.clone(), Expr::mul(fx.u.clone(), fx.phi.clone())] {
            let d = decompose(&fx.space, &f).map_err(|x| x.to_string())?;
            res = res.max(d.residual);
            interp = interp.max(d.interpolation_residual);
        }
    }
    ensure(res < 1e-8 * s, || format!("reconstruction residual {res:.3e}"))?;
    ensure(interp < 1e-6 * s, || format!("interpolation residual {interp:.3e}"))?;
    let spaces = [f1(), HbSpace::from_expr(&e("(1+z^2)/2")).map_err(|x| x.to_string())?];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let space = &spaces[i % spaces.len()];
        let h = random_poly(&mut rng, 6);
        let j = rng.gen_range(0..space.n);
        let f = Expr::from_poly(&(&(&space.a * &h) + &Poly::monomial(j)));
        let d = decompose(space, &f).map_err(|x| x.to_string())?;
        let norm = hb_norm(&d).map_err(|x| x.to_string())?;
        let want = h.norm2().powi(2) + 1.0;
        worst = worst.max((norm * norm - want).abs() / want);
    }
    ensure(worst <= 1e-8 * s, || format!("norm identity error {worst:.3e}"))?;
    Ok(format!("residuals {res:.1e} / {interp:.1e}, norm identity {worst:.1e}"))
}

/// Criterion table: id, name, runtime budget, check.
pub const CRITERIA: [(usize, &str, u64, fn(&Settings) -> Check); 10] = [
    (1, "mate reproduction", 1, mate),
    (2, "identity criterion", 30, identity),
    (3, "half-disk symbol", 300, half_disk_weight),
    (4, "norm ratio", 120, norm_ratio),
    (5, "hilbert-schmidt identity", 60, hilbert_schmidt),
    (6, "compactness", 60, compactness),
    (7, "toeplitz kernel identity", 30, toeplitz_kernel),
    (8, "corona and bezout", 10, corona),
    (9, "membership properties", 600, membership),
    (10, "decomposition invariants", 60, decomposition),
];

/// Run criterion `id`.
pub fn run_one(id: usize, settings: &Settings) -> Option<Outcome> {
    let &(id, name, budget, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let budget = Duration::from_secs(budget);
    let start = Instant::now();
    let result = check(settings);
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over the {}s budget", budget.as_secs())),
        Err(d) => (false, d),
    };
    Some(Outcome { id, name, passed, detail, elapsed, budget })
}

/// Run every criterion in order.
pub fn run_all(settings: &Settings) -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|c| run_one(c.0, settings)).collect()
}

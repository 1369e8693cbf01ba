use num_traits::One;

use crate::funcexpr::Expr;
use crate::hardy::{h2_membership, MembershipVerdict};
use crate::hb::HbSpace;
use crate::poly::{Poly, RationalFn};
use crate::scalar::{cst, Real, C};

use super::SymbolProfile;

/// The transferred weights of `W_{u,φ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<T> {
    /// `u·(a∘φ)·∏_{j∈D}(φ - λⱼ)^{mⱼ} / a`.
    pub w: Expr<T>,
    /// `u·(a∘φ)·(B∘φ) / a`.
    pub w_tilde: Expr<T>,
    /// `q = ∏(1 - λ̄ⱼz)^{mⱼ}`, so that `w = w̃·(q∘φ)`.
    pub q: Poly<T>,
    /// `B = ∏((z - λⱼ)/(1 - λ̄ⱼz))^{mⱼ}`.
    pub blaschke: RationalFn<T>,
}

/// `u / a`, exact when `a` divides the numerator of a rational `u`.
fn u_over_a<T: Real>(space: &HbSpace<T>, u: &Expr<T>) -> Expr<T> {
    if let Ok(r) = u.to_rational() {
        if let Ok((quot, rem)) = r.num.divrem(&space.a) {
            if rem.max_abs() <= cst::<T>(1e-12) * r.num.max_abs().max(T::one()) {
                return Expr::from_rational(&RationalFn { num: quot, den: r.den }.reduce());
            }
        }
    }
    Expr::div(u.clone(), space.a_expr())
}

/// Rewrite `e` as a reduced rational function when it is one.
fn simplify<T: Real>(e: Expr<T>) -> Expr<T> {
    match e.to_rational() {
        Ok(r) => Expr::from_rational(&r.reduce()),
        Err(_) => e,
    }
}

pub fn build_weight<T: Real>(space: &HbSpace<T>, u: &Expr<T>, phi: &Expr<T>, profile: &SymbolProfile<T>) -> Weight<T> {
    let mut num_factor = Poly::one();
    let mut q = Poly::one();
    let mut bnum = Poly::one();
    for (&j, &lambda) in profile.d_set.iter().zip(&profile.lambdas) {
        let m = profile.records[j].mult;
        num_factor = &num_factor * &Poly::linear(lambda).powi(m);
        let factor = Poly::new(vec![C::one(), -lambda.conj()]);
        q = &q * &factor.powi(m);
        bnum = &bnum * &Poly::linear(lambda).powi(m);
    }
    let blaschke = RationalFn { num: bnum, den: q.clone() };
    let base = Expr::mul(u_over_a(space, u), Expr::compose(space.a_expr(), phi.clone()));
    let w = simplify(Expr::mul(base.clone(), Expr::compose(Expr::from_poly(&num_factor), phi.clone())));
    let w_tilde = simplify(Expr::mul(base, Expr::compose(Expr::from_rational(&blaschke), phi.clone())));
    Weight { w, w_tilde, q, blaschke }
}

/// `w ∈ H²`; evaluation failures are inconclusive.
pub fn weight_in_h2<T: Real>(w: &Expr<T>) -> MembershipVerdict<T> {
    h2_membership(w).unwrap_or_else(|e| MembershipVerdict::inconclusive(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;
    use crate::hardy::Membership;
    use crate::scalar::cis;
    use crate::wco::symbol_profile;

    fn f1() -> HbSpace<f64> {
        HbSpace::from_expr(&parse_expr("(1+z)/2").unwrap()).unwrap()
    }

    fn weight(u: &str, phi: &str) -> Weight<f64> {
        let s = f1();
        let (u, phi) = (parse_expr(u).unwrap(), parse_expr(phi).unwrap());
        let p = symbol_profile(&s, &u, &phi).unwrap();
        build_weight(&s, &u, &phi, &p)
    }

    fn points() -> impl Iterator<Item = C<f64>> {
        (0..100).map(|j| cis(0.37 * j as f64 + 0.1) * (0.05 + 0.9 * (j as f64 / 100.0)))
    }

    #[test]
    fn section_six_weight() {
        let w = weight("(1-z)^(3/4)/(1+z)^(1/4)", "1-(1-z)^(1/2)");
        let want = parse_expr::<f64>("((1-z)/(1+z))^(1/4)").unwrap();
        for z in points() {
            let (a, b) = (w.w.eval(z).unwrap(), want.eval(z).unwrap());
            assert!((a - b).norm() < 1e-8, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn phi_epsilon_weight() {
        let w = weight("1", "0.1*(z-1)");
        let want = parse_expr::<f64>("0.1*(0.1*(z-1)-1)").unwrap();
        for z in points() {
            assert!((w.w.eval(z).unwrap() - want.eval(z).unwrap()).norm() < 1e-12);
            assert!((w.w_tilde.eval(z).unwrap() - want.eval(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn flat_weight_is_a_of_phi() {
        let w = weight("z-1", "(1-z)^(1/2)/2");
        let want = parse_expr::<f64>("(1-z)^(1/2)/2 - 1").unwrap();
        for z in points() {
            assert!((w.w.eval(z).unwrap() - want.eval(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugation_identity() {
        let s = HbSpace::from_expr(&parse_expr::<f64>("(1+z^2)/2").unwrap()).unwrap();
        let (u, phi) = (parse_expr("1+z/3").unwrap(), parse_expr("(z^2-0.5)/2").unwrap());
        let p = symbol_profile(&s, &u, &phi).unwrap();
        assert_eq!(p.d_set.len(), 2);
        let w = build_weight(&s, &u, &phi, &p);
        for z in points() {
            let pz = phi.eval(z).unwrap();
            let lhs = w.w.eval(z).unwrap();
            let rhs = w.w_tilde.eval(z).unwrap() * w.q.eval(pz);
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn h2_examples() {
        assert_eq!(weight_in_h2(&parse_expr::<f64>("((1-z)/(1+z))^(1/4)").unwrap()).status, Membership::Inside);
        assert_eq!(weight_in_h2(&parse_expr::<f64>("(1-z)^(-1/2)").unwrap()).status, Membership::Outside);
        let v = weight_in_h2(&parse_expr::<f64>("(2-1i)").unwrap());
        assert!((v.norm_estimate.unwrap() - 5f64.sqrt()).abs() < 1e-12);
    }
}

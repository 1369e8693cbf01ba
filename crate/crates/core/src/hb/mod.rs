//! The space H(b) for rational `b`: the Pythagorean mate, the boundary zeros
//! `ζᵢ` of multiplicity `mᵢ`, and the decomposition `f = a·g + p` with
//! `a = ∏(z - ζᵢ)^{mᵢ}`, `g ∈ H²`, `deg p < N = Σmᵢ`, normed by
//! `‖f‖² = ‖g‖₂² + Σ|p_j|²`.

mod corona;
mod mate;

pub use corona::{corona_infimum, CoronaEstimate};
pub use mate::{boundary_zeros, pythagorean_mate, validate_b, BCheck, BoundaryZero};

use num_traits::Zero;

use crate::error::{pair, Error, Result};
use crate::funcexpr::{radial_limit, default_radii, Expr};
use crate::hardy::{h2_membership, taylor_coeffs, CoeffVector, Membership, MembershipVerdict};
use crate::poly::{hermite_interpolate, HermiteData, HermiteNode, Poly, RationalFn};
use crate::scalar::{cis, cst, from_usize, two_pi, Real, C};

#[derive(Clone, Debug, PartialEq)]
pub struct HbSpace<T> {
    pub b: RationalFn<T>,
    pub mate: RationalFn<T>,
    pub zeros: Vec<BoundaryZero<T>>,
    pub a: Poly<T>,
    pub n: usize,
}

impl<T: Real> HbSpace<T> {
    pub fn new(b: RationalFn<T>) -> Result<Self> {
        let b = b.reduce();
        validate_b(&b)?;
        let mate = pythagorean_mate(&b)?;
        let (zeros, a) = boundary_zeros(&mate)?;
        let n = zeros.iter().map(|z| z.mult).sum();
        Ok(HbSpace { b, mate, zeros, a, n })
    }

    /// Build from an expression that simplifies to a rational function.
    pub fn from_expr(b: &Expr<T>) -> Result<Self> {
        Self::new(b.to_rational()?)
    }

    pub fn from_coeffs(num: Vec<C<T>>, den: Vec<C<T>>) -> Result<Self> {
        Self::new(RationalFn::new(Poly::new(num), Poly::new(den))?)
    }

    /// `a` as an expression.
    pub fn a_expr(&self) -> Expr<T> {
        Expr::from_poly(&self.a)
    }

    /// Orthonormal basis element: `a·z^k` for `k < n_h2`, then `z^j` for
    /// `j < N`.
    pub fn basis_element(&self, index: usize, n_h2: usize) -> Poly<T> {
        if index < n_h2 {
            &self.a * &Poly::monomial(index)
        } else {
            Poly::monomial(index - n_h2)
        }
    }
}

/// `f = a·g + p` together with its accuracy diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct HbDecomposition<T> {
    pub g: Expr<T>,
    /// Set when `f` is rational and `g` was obtained by exact division.
    pub g_rational: Option<RationalFn<T>>,
    pub p: Poly<T>,
    pub boundary_data: HermiteData<T>,
    /// `max |f - (a·g + p)| / (1 + |f|)` on 256 interior points.
    pub residual: T,
    /// `max |p^{(k)}(ζᵢ) - f^{(k)}(ζᵢ)| / (1 + |f^{(k)}(ζᵢ)|)`.
    pub interpolation_residual: T,
}

impl<T: Real> HbDecomposition<T> {
    /// Taylor coefficients of `g`, exact when `g` is a polynomial.
    pub fn g_coeffs(&self, n: usize) -> Result<CoeffVector<T>> {
        if let Some(p) = self.g_rational.as_ref().and_then(RationalFn::as_poly) {
            return Ok(CoeffVector::exact((0..n).map(|k| p.coeff(k)).collect()));
        }
        taylor_coeffs(&self.g, n, None)
    }
}

/// Boundary derivative limits `f^{(k)}(ζᵢ)`, `k < mᵢ`.
fn boundary_data<T: Real>(space: &HbSpace<T>, f: &Expr<T>) -> Result<HermiteData<T>> {
    let radii = default_radii::<T>();
    let max_m = space.zeros.iter().map(|z| z.mult).max().unwrap_or(0);
    let derivs: Vec<Expr<T>> = std::iter::successors(Some(f.clone()), |d| Some(d.differentiate()))
        .take(max_m)
        .collect();
    let mut nodes = Vec::with_capacity(space.zeros.len());
    for z in &space.zeros {
        let mut values = Vec::with_capacity(z.mult);
        for (order, d) in derivs.iter().take(z.mult).enumerate() {
            let lim = radial_limit(d, z.zeta, &radii)?;
            match lim.value {
                Some(v) if lim.is_converged() => values.push(v),
                _ => return Err(Error::NoLimit { zeta: pair(z.zeta), order }),
            }
        }
        nodes.push(HermiteNode { zeta: z.zeta, values });
    }
    Ok(HermiteData { nodes })
}

/// Interior test points: 16 radii in `[0.1, 0.95]` times 16 angles.
fn interior_grid<T: Real>() -> impl Iterator<Item = C<T>> {
    (0..16).flat_map(|i| {
        let r = cst::<T>(0.1) + cst::<T>(0.85) * from_usize::<T>(i) / cst(15.0);
        (0..16).map(move |j| {
            let t = two_pi::<T>() * (from_usize::<T>(j) + cst(0.5)) / cst(16.0);
            cis(t) * r
        })
    })
}

/// Decompose `f = a·g + p`.
pub fn decompose<T: Real>(space: &HbSpace<T>, f: &Expr<T>) -> Result<HbDecomposition<T>> {
    let data = boundary_data(space, f)?;
    let p = hermite_interpolate(&data)?;

    let mut g_rational = None;
    if let Ok(r) = f.to_rational() {
        let shifted = &r.num - &(&p * &r.den);
        let (quot, rem) = shifted.divrem(&space.a)?;
        let scale = shifted.max_abs().max(T::one());
        if rem.max_abs() <= cst::<T>(1e-9) * scale {
            g_rational = Some(RationalFn::new(quot, r.den)?.reduce());
        }
    }
    let g = match &g_rational {
        Some(r) => Expr::from_rational(r),
        None => Expr::div(Expr::sub(f.clone(), Expr::from_poly(&p)), space.a_expr()),
    };

    let mut residual = T::zero();
    for z in interior_grid::<T>() {
        let fv = f.eval(z)?;
        let rec = space.a.eval(z) * g.eval(z)? + p.eval(z);
        residual = residual.max((fv - rec).norm() / (T::one() + fv.norm()));
    }
    let mut interpolation_residual = T::zero();
    for node in &data.nodes {
        let mut d = p.clone();
        for v in &node.values {
            let err = (d.eval(node.zeta) - *v).norm() / (T::one() + v.norm());
            interpolation_residual = interpolation_residual.max(err);
            d = d.derivative();
        }
    }
    Ok(HbDecomposition { g, g_rational, p, boundary_data: data, residual, interpolation_residual })
}

/// Membership of `f` in H(b): `f` must have boundary data at every `ζᵢ` and
/// `g` must lie in H².
pub fn hb_membership<T: Real>(space: &HbSpace<T>, f: &Expr<T>) -> MembershipVerdict<T> {
    let d = match decompose(space, f) {
        Ok(d) => d,
        Err(e @ Error::NoLimit { .. }) => return MembershipVerdict::outside(e.to_string()),
        Err(e) => return MembershipVerdict::inconclusive(e.to_string()),
    };
    if let Some(g) = d.g_rational.as_ref().and_then(RationalFn::as_poly) {
        let norm = (g.norm2().powi(2) + d.p.norm2().powi(2)).sqrt();
        return MembershipVerdict {
            status: Membership::Inside,
            norm_estimate: Some(norm),
            extrapolated: Some(norm),
            evidence: Vec::new(),
            note: None,
        };
    }
    let mut v = match h2_membership(&d.g) {
        Ok(v) => v,
        Err(e) => return MembershipVerdict::inconclusive(format!("g: {e}")),
    };
    if v.is_inside() {
        let p2 = d.p.norm2().powi(2);
        let lift = |x: T| (x * x + p2).sqrt();
        v.norm_estimate = v.norm_estimate.map(lift);
        v.extrapolated = v.extrapolated.map(lift);
    }
    v
}

/// `‖f‖_b = (‖g‖₂² + Σ|p_j|²)^{1/2}`.
pub fn hb_norm<T: Real>(d: &HbDecomposition<T>) -> Result<T> {
    let p2 = d.p.norm2().powi(2);
    if let Some(g) = d.g_rational.as_ref().and_then(RationalFn::as_poly) {
        return Ok((g.norm2().powi(2) + p2).sqrt());
    }
    let v = h2_membership(&d.g)?;
    match (v.status, v.best_norm()) {
        (Membership::Inside, Some(g)) => Ok((g * g + p2).sqrt()),
        _ => Err(Error::GOutsideH2),
    }
}

impl<T: Real> HbSpace<T> {
    /// `true` when `f` is identically zero on the interior test grid.
    pub(crate) fn vanishes(f: &Expr<T>) -> bool {
        interior_grid::<T>().all(|z| f.eval(z).is_ok_and(|v| v.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn f1() -> HbSpace<f64> {
        HbSpace::from_expr(&parse_expr("(1+z)/2").unwrap()).unwrap()
    }

    fn e(s: &str) -> Expr<f64> {
        parse_expr(s).unwrap()
    }

    #[test]
    fn space_f1() {
        let s = f1();
        assert_eq!(s.n, 1);
        assert_eq!(s.a, Poly::from_real(&[-1.0, 1.0]));
        assert!(s.mate.eval(C::new(0.0, 0.0)).re > 0.0);
    }

    #[test]
    fn decompose_examples() {
        let s = f1();
        let d = decompose(&s, &e("1")).unwrap();
        assert!(d.g_rational.as_ref().unwrap().is_zero());
        assert!((d.p.coeff(0) - 1.0).norm() < 1e-12 && d.p.degree() == Some(0));

        let d = decompose(&s, &e("z^2")).unwrap();
        let g = d.g_rational.as_ref().unwrap().as_poly().unwrap();
        assert!((g.coeff(0) - 1.0).norm() < 1e-10 && (g.coeff(1) - 1.0).norm() < 1e-10);
        assert!((d.p.coeff(0) - 1.0).norm() < 1e-12);
        assert!(d.residual < 1e-12);

        let d = decompose(&s, &e("(1-z)^(1/2)")).unwrap();
        assert!(d.p.coeff(0).norm() < 1e-6);
        let want = e("-(1-z)^(-1/2)");
        for z in [C::new(0.3, 0.1), C::new(-0.5, 0.4)] {
            assert!((d.g.eval(z).unwrap() - want.eval(z).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn membership_examples() {
        let s = f1();
        assert_eq!(hb_membership(&s, &e("(1-z)^(1/2)")).status, Membership::Outside);
        assert_eq!(hb_membership(&s, &e("z^2")).status, Membership::Inside);
        let u = e("(z-1)*(1-z)^(-1/4)*(1+z)^(-1/4)");
        assert_eq!(hb_membership(&s, &u).status, Membership::Inside);
    }

    #[test]
    fn norm_examples() {
        let s = f1();
        let n = |f: &str| hb_norm(&decompose(&s, &e(f)).unwrap()).unwrap();
        assert!((n("1") - 1.0).abs() < 1e-12);
        assert!((n("z^2") - 3f64.sqrt()).abs() < 1e-10);
        assert!((n("z-1") - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_point_space() {
        let s = HbSpace::from_expr(&parse_expr::<f64>("(1+z^2)/2").unwrap()).unwrap();
        assert_eq!(s.n, 2);
        let d = decompose(&s, &e("z^3 + 2*z")).unwrap();
        assert!(d.residual < 1e-10 && d.interpolation_residual < 1e-10);
        assert!(d.p.degree().unwrap_or(0) <= 1);
    }
}

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{pair, Error, Result};
use crate::hardy::sup_on_circle;
use crate::poly::{roots_with_tolerance, Poly, RationalFn, Root};
use crate::scalar::{cis, cst, from_usize, tol, to_f64, two_pi, Real, C};

const POLE_MARGIN: f64 = 1e-10;
const SUP_TOL: f64 = 1e-8;
const BLASCHKE_TOL: f64 = 1e-10;
const DEFECT_TOL: f64 = 1e-10;
const MATE_TOL: f64 = 1e-8;
const MATE_GRID: usize = 1 << 12;
/// Roots this close to the circle are candidates for a boundary cluster.
const NEAR_CIRCLE: f64 = 1e-3;
/// Single-linkage radius for merging near-circle roots.
const BOUNDARY_CLUSTER: f64 = 1e-3;
/// Relative size of `P^{(j)}(ζ)/j!` accepted as zero when confirming a merge.
const MERGE_CONFIRM: f64 = 1e-6;

/// A zero of the mate on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryZero<T> {
    pub zeta: C<T>,
    pub mult: usize,
}

/// Facts established by [`validate_b`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BCheck<T> {
    /// `sup_T |b|`.
    pub sup_norm: T,
    /// `max_T (1 - |b|²)` on the check grid.
    pub max_defect: T,
}

fn circle_grid<T: Real>(n: usize) -> impl Iterator<Item = C<T>> {
    let step = two_pi::<T>() / from_usize(n);
    (0..n).map(move |j| cis(step * from_usize(j)))
}

/// Check the standing hypotheses on `b`: no pole in the closed disk,
/// `sup_T |b| = 1`, and `b` not inner.
pub fn validate_b<T: Real>(b: &RationalFn<T>) -> Result<BCheck<T>> {
    let b = b.reduce();
    if b.den.degree().unwrap_or(0) > 0 {
        for r in roots_with_tolerance(&b.den, cst(1e-6))? {
            if r.value.norm() <= T::one() + cst(POLE_MARGIN) {
                return Err(Error::PoleInClosedDisk(pair(r.value)));
            }
        }
    }
    let sup_norm = sup_on_circle(|t: T| Ok(b.eval(cis(t)).norm()))?;
    if sup_norm > T::one() + tol(SUP_TOL) {
        return Err(Error::NormTooLarge(to_f64(sup_norm)));
    }
    let (mut max_defect, mut max_dev) = (T::zero(), T::zero());
    for z in circle_grid::<T>(MATE_GRID) {
        let d = T::one() - b.eval(z).norm_sqr();
        max_defect = max_defect.max(d);
        max_dev = max_dev.max(d.abs());
    }
    if max_dev < tol(BLASCHKE_TOL) {
        return Err(Error::FiniteBlaschke);
    }
    if sup_norm < T::one() - tol(SUP_TOL) {
        return Err(Error::NormTooSmall(to_f64(sup_norm)));
    }
    Ok(BCheck { sup_norm, max_defect })
}

/// Laurent coefficients `ℓ_m`, `m = -d..=d`, of `|q|² - |p|²` on the circle.
fn defect_laurent<T: Real>(p: &Poly<T>, q: &Poly<T>) -> (usize, Vec<C<T>>) {
    let d = p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
    let auto = |f: &Poly<T>, m: usize| -> C<T> {
        (0..=d).fold(C::zero(), |acc, k| acc + f.coeff(k + m) * f.coeff(k).conj())
    };
    let mut ell = vec![C::zero(); 2 * d + 1];
    for m in 0..=d {
        let v = auto(q, m) - auto(p, m);
        ell[d + m] = v;
        ell[d - m] = v.conj();
    }
    (d, ell)
}

/// `P^{(j)}(ζ) / j!` against the matching coefficient scale of `P`.
fn shifted_coeff_small<T: Real>(p: &Poly<T>, zeta: C<T>, j: usize) -> bool {
    let mut fact = T::one();
    for i in 1..=j {
        fact = fact * from_usize::<T>(i);
    }
    let val = p.nth_derivative(j).eval(zeta).norm() / fact;
    let mut scale = T::zero();
    for (k, c) in p.coeffs().iter().enumerate().skip(j) {
        let mut binom = T::one();
        for i in 0..j {
            binom = binom * from_usize::<T>(k - i) / from_usize::<T>(i + 1);
        }
        scale = scale + c.norm() * binom;
    }
    val <= cst::<T>(MERGE_CONFIRM) * scale
}

/// Roots of `p` with near-circle roots merged into clusters of total
/// multiplicity `M` at `ζ ∈ T`, confirmed by `P^{(j)}(ζ) ≈ 0` for `j < M`.
/// Returns `(boundary clusters, remaining roots)`.
pub(crate) fn split_boundary_roots<T: Real>(p: &Poly<T>) -> Result<(Vec<BoundaryZero<T>>, Vec<Root<T>>)> {
    let all = roots_with_tolerance(p, cst(1e-6))?;
    let (near, mut rest): (Vec<Root<T>>, Vec<Root<T>>) = all
        .into_iter()
        .partition(|r| (r.value.norm() - T::one()).abs() < cst(NEAR_CIRCLE));
    let n = near.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (near[i].value - near[j].value).norm() <= cst(BOUNDARY_CLUSTER) {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
        }
    }
    let mut zeros = Vec::new();
    let mut seen = Vec::new();
    for &l in &label {
        if seen.contains(&l) {
            continue;
        }
        seen.push(l);
        let members: Vec<Root<T>> = (0..n).filter(|&i| label[i] == l).map(|i| near[i]).collect();
        let mult: usize = members.iter().map(|r| r.multiplicity).sum();
        let centre = members
            .iter()
            .fold(C::zero(), |acc, r| acc + r.value * from_usize::<T>(r.multiplicity))
            / from_usize::<T>(mult);
        let zeta = snap(centre / centre.norm());
        if (0..mult).all(|j| shifted_coeff_small(p, zeta, j)) {
            zeros.push(BoundaryZero { zeta, mult });
        } else {
            rest.extend(members);
        }
    }
    Ok((zeros, rest))
}

/// Flush rounding dust so that `±1` and `±i` come out exact.
fn snap<T: Real>(z: C<T>) -> C<T> {
    let dust = |x: T| if x.abs() <= cst(1e-14) { T::zero() } else { x };
    let z = C::new(dust(z.re), dust(z.im));
    z / z.norm()
}

/// Outer mate `ã` of `b` with `|ã|² + |b|² = 1` on the circle and `ã(0) > 0`,
/// by Fejér–Riesz factorization of `|q|² - |p|²` for `b = p/q`.
pub fn pythagorean_mate<T: Real>(b: &RationalFn<T>) -> Result<RationalFn<T>> {
    let b = b.reduce();
    if b.num.is_zero() {
        return Ok(RationalFn::constant(C::one()));
    }
    let (p, q) = (&b.num, &b.den);
    let mut min_defect = T::infinity();
    for z in circle_grid::<T>(MATE_GRID) {
        min_defect = min_defect.min(T::one() - b.eval(z).norm_sqr());
    }
    if min_defect < -tol::<T>(DEFECT_TOL) {
        return Err(Error::NegativeDefect(to_f64(min_defect)));
    }

    let (d, ell) = defect_laurent(p, q);
    let scale = ell.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    let mut cut = 0;
    while cut < d && ell[cut].norm() <= cst::<T>(1e-14) * scale {
        cut += 1;
    }
    if cut == d && ell[d].norm() <= cst::<T>(1e-14) * scale {
        return Err(Error::FiniteBlaschke);
    }
    let big_p = Poly::new(ell[cut..=2 * d - cut].to_vec());

    let mut h0 = Poly::one();
    if big_p.degree().unwrap_or(0) > 0 {
        let (bdry, rest) = split_boundary_roots(&big_p)?;
        for z in bdry {
            if z.mult % 2 == 1 {
                return Err(Error::OddBoundaryMultiplicity { zeta: pair(z.zeta), mult: z.mult });
            }
            h0 = &h0 * &Poly::linear(z.zeta).powi(z.mult / 2);
        }
        for r in rest.iter().filter(|r| r.value.norm() < T::one()) {
            let factor = Poly::new(vec![C::one(), -r.value.conj()]);
            h0 = &h0 * &factor.powi(r.multiplicity);
        }
    }

    // |c|² = mean(|q|² - |p|²) / mean(|h0|²) on a coarse grid.
    let (mut num, mut den) = (T::zero(), T::zero());
    for z in circle_grid::<T>(256) {
        num = num + q.eval(z).norm_sqr() - p.eval(z).norm_sqr();
        den = den + h0.eval(z).norm_sqr();
    }
    let modulus = (num / den).max(T::zero()).sqrt();
    let at0 = h0.coeff(0) / q.coeff(0);
    let c = C::new(modulus, T::zero()) * (at0.conj() / at0.norm());
    let mate = RationalFn { num: h0.scale(c), den: q.clone() };

    let mut worst = T::zero();
    for z in circle_grid::<T>(MATE_GRID) {
        worst = worst.max((mate.eval(z).norm_sqr() + b.eval(z).norm_sqr() - T::one()).abs());
    }
    if worst > tol(MATE_TOL) {
        return Err(Error::MateIdentity(to_f64(worst)));
    }
    Ok(mate)
}

/// Zeros of `ã` on the circle, projected exactly onto it, and the monic
/// polynomial `a = ∏ (z - ζᵢ)^{mᵢ}`.
pub fn boundary_zeros<T: Real>(mate: &RationalFn<T>) -> Result<(Vec<BoundaryZero<T>>, Poly<T>)> {
    if mate.num.degree().unwrap_or(0) == 0 {
        return Err(Error::NoBoundaryZeros);
    }
    let (mut zeros, _) = split_boundary_roots(&mate.num)?;
    if zeros.is_empty() {
        return Err(Error::NoBoundaryZeros);
    }
    zeros.sort_by(|x, y| {
        let key = |z: &BoundaryZero<T>| {
            let t = z.zeta.arg();
            if t < T::zero() { t + two_pi() } else { t }
        };
        key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal)
    });
    let a = Poly::from_roots(&zeros.iter().map(|z| (z.zeta, z.mult)).collect::<Vec<_>>());
    Ok((zeros, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn rat(s: &str) -> RationalFn<f64> {
        parse_expr::<f64>(s).unwrap().to_rational().unwrap()
    }

    fn poly_close(p: &Poly<f64>, want: &[f64], tol: f64) -> bool {
        (0..want.len().max(p.coeffs().len())).all(|k| (p.coeff(k) - C::new(*want.get(k).unwrap_or(&0.0), 0.0)).norm() <= tol)
    }

    #[test]
    fn validate_examples() {
        assert!(validate_b(&rat("(1+z)/2")).is_ok());
        assert_eq!(validate_b(&rat("z")), Err(Error::FiniteBlaschke));
        match validate_b(&rat("2*z")) {
            Err(Error::NormTooLarge(s)) => assert!((s - 2.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(validate_b(&rat("z/2")), Err(Error::NormTooSmall(_))));
        assert!(matches!(validate_b(&rat("1/(z-1/2)")), Err(Error::PoleInClosedDisk(_))));
        assert!(validate_b(&rat("0.5/(1-z/2)")).is_ok());
    }

    #[test]
    fn mate_examples() {
        let m = pythagorean_mate(&rat("(1+z)/2")).unwrap();
        let p = m.as_poly().unwrap();
        assert!(poly_close(&p, &[0.5, -0.5], 1e-7), "{p:?}");
        let m = pythagorean_mate(&rat("0")).unwrap();
        assert!(poly_close(&m.as_poly().unwrap(), &[1.0], 0.0));
        let m = pythagorean_mate(&rat("(1+z^2)/2")).unwrap();
        assert!(poly_close(&m.as_poly().unwrap(), &[0.5, 0.0, -0.5], 1e-7));
    }

    #[test]
    fn mate_with_pole_and_interior_factor() {
        // b = (1/2)/(1 - z/2) touches 1 at z = 1 only.
        let b = rat("0.5/(1-z/2)");
        let m = pythagorean_mate(&b).unwrap();
        assert!(m.eval(C::new(0.0, 0.0)).re > 0.0);
        let (zeros, a) = boundary_zeros(&m).unwrap();
        assert_eq!(zeros.len(), 1);
        assert_eq!(zeros[0].mult, 1);
        assert!((zeros[0].zeta - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!(poly_close(&a, &[-1.0, 1.0], 1e-12));
    }

    #[test]
    fn boundary_zero_examples() {
        let (z, a) = boundary_zeros(&rat("(1-z)/2")).unwrap();
        assert_eq!(z, vec![BoundaryZero { zeta: C::new(1.0, 0.0), mult: 1 }]);
        assert!(poly_close(&a, &[-1.0, 1.0], 0.0));
        let (z, a) = boundary_zeros(&rat("(1-z^2)/2")).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.iter().all(|b| b.mult == 1 && (b.zeta.norm() - 1.0).abs() < 1e-15));
        assert!(poly_close(&a, &[-1.0, 0.0, 1.0], 1e-12));
        assert_eq!(boundary_zeros(&rat("1")), Err(Error::NoBoundaryZeros));
    }

    #[test]
    fn higher_order_contact() {
        // |1-z|⁴/16 + |b|² = 1 for b = (1+z)(z-r)/(4√r), r = 3-2√2.
        let r = 3.0 - 2.0 * 2f64.sqrt();
        let b = rat(&format!("(1+z)*(z-{r})/(4*{})", r.sqrt()));
        let m = pythagorean_mate(&b).unwrap();
        let (z, a) = boundary_zeros(&m).unwrap();
        assert_eq!(z, vec![BoundaryZero { zeta: C::new(1.0, 0.0), mult: 2 }]);
        assert!(poly_close(&a, &[1.0, -2.0, 1.0], 1e-12));
        assert!(poly_close(&m.as_poly().unwrap(), &[0.25, -0.5, 0.25], 1e-7));
    }
}

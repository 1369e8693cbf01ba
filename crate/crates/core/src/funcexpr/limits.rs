use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cst, dyadic_radius, to_f64, Real, C};

use super::Expr;

/// Exponents `k` of the default radius schedule `r_k = 1 - 2^{-k}`.
pub const DEFAULT_SCHEDULE: std::ops::RangeInclusive<u32> = 4..=40;

const CAUCHY_TOL: f64 = 1e-7;
const GROWTH_FACTOR: f64 = 1.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStatus {
    Converged,
    Diverged,
    Oscillating,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialLimitResult<T> {
    pub status: LimitStatus,
    /// Present when converged.
    pub value: Option<C<T>>,
    /// `(r, e(rζ))` for every radius sampled.
    pub evidence: Vec<(T, C<T>)>,
}

impl<T: Real> RadialLimitResult<T> {
    pub fn is_converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }

    /// Largest sample magnitude, used as the local scale.
    pub fn scale(&self) -> T {
        self.evidence.iter().fold(T::one(), |m, (_, v)| m.max(v.norm()))
    }
}

/// Limit of `e(rζ)` as `r → 1⁻` along the given radii.
///
/// Samples that are Cauchy to `1e-7` over the last four radii converge to the
/// last sample. Otherwise the Aitken Δ² transform of the samples is tried,
/// which captures algebraic approach rates like `(1-r)^{1/2}` that are far
/// from Cauchy at `r = 1 - 2^{-40}`.
pub fn radial_limit<T: Real>(e: &Expr<T>, zeta: C<T>, radii: &[T]) -> Result<RadialLimitResult<T>> {
    let mut evidence = Vec::with_capacity(radii.len());
    for &r in radii {
        let v = e.eval(zeta * r).map_err(|err| Error::RadialSample {
            r: to_f64(r),
            source: Box::new(err),
        })?;
        evidence.push((r, v));
    }
    let vals: Vec<C<T>> = evidence.iter().map(|&(_, v)| v).collect();
    let (status, value) = classify_sequence(&vals);
    Ok(RadialLimitResult { status, value, evidence })
}

/// Default radii `1 - 2^{-k}`, `k = 4..=40`.
pub fn default_radii<T: Real>() -> Vec<T> {
    DEFAULT_SCHEDULE.map(dyadic_radius).collect()
}

pub(crate) fn classify_sequence<T: Real>(vals: &[C<T>]) -> (LimitStatus, Option<C<T>>) {
    let n = vals.len();
    if n >= 5 {
        let tail = &vals[n - 5..];
        let monotone = tail.windows(2).all(|w| w[1].norm() > w[0].norm());
        if monotone && tail[4].norm() >= cst::<T>(GROWTH_FACTOR) * tail[0].norm() {
            return (LimitStatus::Diverged, None);
        }
    }
    let acc = aitken(vals);
    if n >= 4 && is_cauchy(&vals[n - 4..]) {
        // The Aitken value removes the O(1 - r) bias of the last sample.
        let last = vals[n - 1];
        let step = (last - vals[n - 2]).norm();
        let value = match acc.last() {
            Some(&a) if (a - last).norm() <= cst::<T>(2.0) * step => a,
            _ => last,
        };
        return (LimitStatus::Converged, Some(value));
    }
    if acc.len() >= 4 && n >= 5 {
        let shrinking = vals[n - 5..]
            .windows(3)
            .all(|w| (w[2] - w[1]).norm() <= cst::<T>(0.9) * (w[1] - w[0]).norm());
        if shrinking && is_cauchy(&acc[acc.len() - 4..]) {
            return (LimitStatus::Converged, Some(acc[acc.len() - 1]));
        }
    }
    (LimitStatus::Oscillating, None)
}

fn is_cauchy<T: Real>(tail: &[C<T>]) -> bool {
    let last = tail[tail.len() - 1];
    let tol = cst::<T>(CAUCHY_TOL) * T::one().max(last.norm());
    tail.iter().all(|a| tail.iter().all(|b| (*a - *b).norm() <= tol))
}

/// Aitken Δ² transform; a zero second difference means the sequence is already
/// stationary and the sample itself is kept.
pub(crate) fn aitken<T: Real>(v: &[C<T>]) -> Vec<C<T>> {
    v.windows(3)
        .map(|w| {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let dd = d2 - d1;
            if dd.norm() <= T::epsilon() * (d1.norm() + d2.norm()) || dd.is_zero() {
                w[2]
            } else {
                w[2] - d2 * d2 / dd
            }
        })
        .collect()
}

/// Outcome of [`vanishing_order`].
#[derive(Clone, Debug, PartialEq)]
pub enum Vanishing<T> {
    /// Smallest order whose derivative limit is nonzero, with that limit.
    Order(usize, C<T>),
    /// Every derivative below the cap tends to zero.
    Flat,
    /// The limit of the given derivative order does not exist numerically.
    NoLimit { order: usize, result: RadialLimitResult<T> },
}

/// Order of vanishing of `e` at `ζ`, testing derivatives `0..cap`.
pub fn vanishing_order<T: Real>(e: &Expr<T>, zeta: C<T>, cap: usize) -> Result<Vanishing<T>> {
    if cap == 0 {
        return Err(Error::InvalidArgument("vanishing_order needs cap >= 1".into()));
    }
    let radii = default_radii::<T>();
    let mut d = e.clone();
    for order in 0..cap {
        let res = radial_limit(&d, zeta, &radii)?;
        let Some(v) = res.value else {
            return Ok(Vanishing::NoLimit { order, result: res });
        };
        let eps_zero = cst::<T>(1e-8) * res.scale();
        if v.norm() > eps_zero {
            return Ok(Vanishing::Order(order, v));
        }
        if order + 1 < cap {
            d = d.differentiate();
        }
    }
    Ok(Vanishing::Flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn lim(s: &str, zeta: C<f64>) -> RadialLimitResult<f64> {
        radial_limit(&parse_expr(s).unwrap(), zeta, &default_radii()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let r = lim("1-(1-z)^(1/2)", C::new(1.0, 0.0));
        assert_eq!(r.status, LimitStatus::Converged);
        assert!((r.value.unwrap() - 1.0).norm() < 1e-7);

        let r = lim("(1-z)^(-1/2)", C::new(1.0, 0.0));
        assert_eq!(r.status, LimitStatus::Diverged);

        let r = lim("z", C::new(0.0, 1.0));
        assert_eq!(r.status, LimitStatus::Converged);
        assert!((r.value.unwrap() - C::new(0.0, 1.0)).norm() < 1e-10);
        assert_eq!(r.evidence.len(), 37);
    }

    #[test]
    fn oscillation_is_neither() {
        // Spiral with constant modulus: exp(i·log(1-z)) winds forever.
        let vals: Vec<C<f64>> = (4..=40)
            .map(|k| C::new(0.0, -(k as f64) * std::f64::consts::LN_2).exp())
            .collect();
        assert_eq!(classify_sequence(&vals).0, LimitStatus::Oscillating);
    }

    #[test]
    fn branch_error_reports_radius() {
        let e: Expr<f64> = parse_expr("(z-1)^(1/2)").unwrap();
        let err = radial_limit(&e, C::new(-1.0, 0.0), &default_radii()).unwrap_err();
        assert!(matches!(err, Error::RadialSample { r, .. } if r == 1.0 - 2f64.powi(-4)));
    }

    #[test]
    fn vanishing_examples() {
        let one = C::new(1.0, 0.0);
        let v = vanishing_order(&parse_expr::<f64>("1").unwrap(), one, 1).unwrap();
        assert!(matches!(v, Vanishing::Order(0, _)));
        let v = vanishing_order(&parse_expr::<f64>("z-1").unwrap(), one, 1).unwrap();
        assert_eq!(v, Vanishing::Flat);
        let v = vanishing_order(&parse_expr::<f64>("(1-z)^(3/4)/(1+z)^(1/4)").unwrap(), one, 1).unwrap();
        assert_eq!(v, Vanishing::Flat);
        let v = vanishing_order(&parse_expr::<f64>("z-1").unwrap(), one, 2).unwrap();
        assert!(matches!(v, Vanishing::Order(1, c) if (c - 1.0).norm() < 1e-9));
        let v = vanishing_order(&parse_expr::<f64>("(1-z)^(-1/2)").unwrap(), one, 2).unwrap();
        assert!(matches!(v, Vanishing::NoLimit { order: 0, .. }));
    }
}

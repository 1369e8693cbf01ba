use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::funcexpr::Expr;
use crate::scalar::{cis, cst, dyadic_radius, from_usize, two_pi, Real};

use super::quad::circle_mean;

/// Radius levels `k` of `r = 1 - 2^{-k}` used by the membership tests.
pub const MEMBERSHIP_LEVELS: std::ops::RangeInclusive<u32> = 1..=24;

const INSIDE_REL: f64 = 1e-4;
const OUTSIDE_REL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Outside,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict<T> {
    pub status: Membership,
    /// Finite estimate when available; `None` stands for `+∞`.
    pub norm_estimate: Option<T>,
    /// Aitken-accelerated norm when the levels converge geometrically.
    pub extrapolated: Option<T>,
    /// `(r, level value)`: `∫|f(rζ)|² dm` for H², `max|f(rζ)|` for H∞.
    pub evidence: Vec<(T, T)>,
    pub note: Option<String>,
}

impl<T: Real> MembershipVerdict<T> {
    pub fn is_inside(&self) -> bool {
        self.status == Membership::Inside
    }

    pub fn outside(note: impl Into<String>) -> Self {
        MembershipVerdict {
            status: Membership::Outside,
            norm_estimate: None,
            extrapolated: None,
            evidence: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn inconclusive(note: impl Into<String>) -> Self {
        MembershipVerdict {
            status: Membership::Inconclusive,
            norm_estimate: None,
            extrapolated: None,
            evidence: Vec::new(),
            note: Some(note.into()),
        }
    }

    /// Best available norm: the extrapolated value when present.
    pub fn best_norm(&self) -> Option<T> {
        self.extrapolated.or(self.norm_estimate)
    }
}

/// Tri-state decision on a nondecreasing sequence of level values.
///
/// Outside when every one of the last five increments exceeds `1e-3` of the
/// current value. Inside when the last three increments are below `1e-4`
/// relative, or when the last five increments shrink geometrically and the
/// Aitken-accelerated tail is Cauchy to the same tolerance.
pub(crate) fn decide<T: Real>(vals: &[T]) -> (Membership, Option<T>) {
    let n = vals.len();
    let last = vals[n - 1];
    if !last.is_finite() {
        return (Membership::Outside, None);
    }
    if last <= T::min_positive_value() {
        return (Membership::Inside, Some(T::zero()));
    }
    let inc: Vec<T> = vals.windows(2).map(|w| w[1] - w[0]).collect();
    let rel = |i: usize| inc[i] / vals[i + 1].abs();
    let m = inc.len();
    if m >= 5 && (m - 5..m).all(|i| rel(i) > cst(OUTSIDE_REL)) {
        return (Membership::Outside, None);
    }
    let acc = aitken_real(vals);
    if m >= 3 && (m - 3..m).all(|i| rel(i).abs() < cst(INSIDE_REL)) {
        return (Membership::Inside, acc.filter(|&a| plausible(a, last)));
    }
    if m >= 5 {
        let geometric = (m - 4..m).all(|i| {
            inc[i] >= T::zero() && inc[i] <= cst::<T>(0.9) * inc[i - 1] && inc[i - 1] > T::zero()
        });
        if geometric {
            if let Some(a) = acc {
                let prev = aitken_real(&vals[..n - 1]);
                if let Some(p) = prev {
                    if (a - p).abs() < cst::<T>(INSIDE_REL) * a.abs() && plausible(a, last) {
                        return (Membership::Inside, Some(a));
                    }
                }
            }
        }
    }
    (Membership::Inconclusive, None)
}

fn plausible<T: Real>(extrap: T, last: T) -> bool {
    extrap.is_finite() && (extrap - last).abs() <= cst::<T>(1e-2) * last.abs()
}

fn aitken_real<T: Real>(v: &[T]) -> Option<T> {
    let n = v.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (v[n - 3], v[n - 2], v[n - 1]);
    let d1 = b - a;
    let d2 = c - b;
    let dd = d2 - d1;
    if dd.abs() <= T::epsilon() * (d1.abs() + d2.abs()) {
        return Some(c);
    }
    Some(c - d2 * d2 / dd)
}

/// Decide `f ∈ H²` from the partial norms `∫|f(rζ)|² dm`, `r = 1 - 2^{-k}`,
/// `k = 1..=24`. The reported norm is the square root of the last level.
pub fn h2_membership<T: Real>(f: &Expr<T>) -> Result<MembershipVerdict<T>> {
    let radii: Vec<T> = MEMBERSHIP_LEVELS.map(dyadic_radius).collect();
    let vals: Vec<T> = radii
        .par_iter()
        .map(|&r| circle_mean(|z| f.eval(z).map(|v| v.norm_sqr()), r, cst(1e-12)))
        .collect::<Result<_>>()?;
    Ok(verdict(radii, vals, true))
}

/// Decide `f ∈ H∞` from the running supremum of `|f|` on the same circles.
pub fn hinf_sup<T: Real>(f: &Expr<T>) -> Result<MembershipVerdict<T>> {
    let radii: Vec<T> = MEMBERSHIP_LEVELS.map(dyadic_radius).collect();
    let sups: Vec<T> = radii.par_iter().map(|&r| circle_sup(f, r)).collect::<Result<_>>()?;
    let mut running = T::zero();
    let vals: Vec<T> = sups
        .into_iter()
        .map(|s| {
            running = running.max(s);
            running
        })
        .collect();
    Ok(verdict(radii, vals, false))
}

fn verdict<T: Real>(radii: Vec<T>, vals: Vec<T>, squared: bool) -> MembershipVerdict<T> {
    let (status, extrap) = decide(&vals);
    let root = |x: T| if squared { x.max(T::zero()).sqrt() } else { x };
    let last = *vals.last().expect("levels are nonempty");
    MembershipVerdict {
        status,
        norm_estimate: (status != Membership::Outside).then(|| root(last)),
        extrapolated: extrap.map(root),
        evidence: radii.into_iter().zip(vals).collect(),
        note: None,
    }
}

fn circle_sup<T: Real>(f: &Expr<T>, r: T) -> Result<T> {
    sup_on_circle(|t: T| f.eval(cis(t) * r).map(|v| v.norm()))
}

/// Maximum of a `2π`-periodic function: a 4096-point scan followed by
/// golden-section searches around the eight largest samples.
pub(crate) fn sup_on_circle<T: Real, F: Fn(T) -> Result<T>>(at: F) -> Result<T> {
    const SCAN: usize = 4096;
    let step = two_pi::<T>() / from_usize(SCAN);
    let samples: Vec<T> = (0..SCAN).map(|j| at(step * from_usize(j))).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..SCAN).collect();
    order.sort_by(|&a, &b| samples[b].partial_cmp(&samples[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = samples[order[0]];
    for &j in order.iter().take(8) {
        let centre = step * from_usize(j);
        best = best.max(golden_max(&at, centre - step, centre + step)?);
    }
    Ok(best)
}

fn golden_max<T: Real, F: Fn(T) -> Result<T>>(f: &F, mut a: T, mut b: T) -> Result<T> {
    let g = cst::<T>(0.618_033_988_749_894_8);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..60 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(f1.max(f2))
}

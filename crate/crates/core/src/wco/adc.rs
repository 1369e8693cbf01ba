use serde::Serialize;

use crate::funcexpr::Expr;
use crate::hb::HbSpace;
use crate::scalar::{cst, dyadic_radius, Real, C};

use super::{SymbolProfile, UOrder, Verdict, ZetaClass};

/// Radius levels `k` of `r = 1 - 2^{-k}`.
const LEVELS: std::ops::RangeInclusive<u32> = 4..=30;
const STABLE: f64 = 0.01;
const GROWTH: f64 = 1.2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdcResult<T> {
    pub zeta: C<T>,
    /// `(r, (1 - |φ(rζ)|)/(1 - r))`.
    pub samples: Vec<(T, T)>,
    /// Smallest of the last four quotients; `None` when they diverge.
    pub liminf: Option<T>,
    pub adc: Verdict,
    /// `|φ'(ζ)|` when the quotient stabilizes.
    pub derivative: Option<T>,
}

/// Carathéodory quotient along the radius to `ζ`. Yes when the last four
/// quotients agree within 1%; no when each of the last five grows by 1.2.
pub fn adc_quotient<T: Real>(phi: &Expr<T>, zeta: C<T>) -> crate::Result<AdcResult<T>> {
    let mut samples = Vec::new();
    for k in LEVELS {
        let r = dyadic_radius::<T>(k);
        let v = phi.eval(zeta * r)?;
        samples.push((r, (T::one() - v.norm()) / (T::one() - r)));
    }
    let q: Vec<T> = samples.iter().map(|s| s.1).collect();
    let n = q.len();
    let growing = (n - 5..n).all(|i| q[i] >= cst::<T>(GROWTH) * q[i - 1] && q[i - 1] > T::zero());
    let tail = &q[n - 4..];
    let hi = tail.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = tail.iter().copied().fold(T::infinity(), T::min);
    let (adc, derivative) = if growing {
        (Verdict::No, None)
    } else if lo.is_finite() && hi - lo <= cst::<T>(STABLE) * hi.abs() {
        (Verdict::Yes, Some(q[n - 1]))
    } else {
        (Verdict::Inconclusive, None)
    };
    Ok(AdcResult { zeta, samples, liminf: (adc != Verdict::No).then_some(lo), adc, derivative })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintOutcome {
    Consistent,
    Violation,
    Inconclusive,
}

/// Constraint at a zero `ζ_k` with `u(ζ_k) ≠ 0` and `φ(ζ_k) = ζ_ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaratheodoryCheck<T> {
    pub k: usize,
    pub l: usize,
    pub m_k: usize,
    pub m_l: usize,
    pub adc: Option<AdcResult<T>>,
    pub outcome: ConstraintOutcome,
}

/// Multiplicity and angular-derivative constraints: `m_k ≤ m_ℓ`, and ADC of
/// `φ` at `ζ_k` when `m_k = m_ℓ`.
pub fn check_caratheodory<T: Real>(space: &HbSpace<T>, profile: &SymbolProfile<T>, phi: &Expr<T>) -> Vec<CaratheodoryCheck<T>> {
    let mut out = Vec::new();
    for (k, rec) in profile.records.iter().enumerate() {
        let (ZetaClass::ZeroOfA { target: l }, UOrder::Order { l: 0, .. }) = (rec.class, rec.u_order) else {
            continue;
        };
        let (m_k, m_l) = (rec.mult, space.zeros[l].mult);
        let mut check = CaratheodoryCheck { k, l, m_k, m_l, adc: None, outcome: ConstraintOutcome::Consistent };
        if m_k > m_l {
            check.outcome = ConstraintOutcome::Violation;
        } else if m_k == m_l {
            match adc_quotient(phi, rec.zeta) {
                Ok(a) => {
                    check.outcome = match a.adc {
                        Verdict::Yes => ConstraintOutcome::Consistent,
                        Verdict::No => ConstraintOutcome::Violation,
                        Verdict::Inconclusive => ConstraintOutcome::Inconclusive,
                    };
                    check.adc = Some(a);
                }
                Err(_) => check.outcome = ConstraintOutcome::Inconclusive,
            }
        }
        out.push(check);
    }
    out
}

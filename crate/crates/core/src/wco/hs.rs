use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::funcexpr::Expr;
use crate::hardy::{BoundaryGrid, GridOptions};
use crate::scalar::{cis, cst, from_usize, two_pi, Real, C};

use super::Verdict;

/// Terms of `Σ ‖w φⁿ‖₂²` computed.
pub const HS_SERIES_TERMS: usize = 256;
const SERIES_COEFFS: usize = 512;
const BOUNDARY_MODULUS: f64 = 1e-12;
const BOUNDARY_MASS: f64 = 1e-6;
const FLOORS: [i32; 4] = [8, 12, 16, 20];
const INTEGRAL_STABLE: f64 = 1e-4;
const INTEGRAL_GROWTH: f64 = 1e-3;
const AGREEMENT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumStatus {
    Converged,
    Divergent,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HsResult<T> {
    /// `∫ |w|²/(1 - |φ|²) dm` on the finest grid, when finite.
    pub integral: Option<T>,
    pub integral_status: SumStatus,
    /// `(kernel floor, integral)` per grid.
    pub integral_evidence: Vec<(T, T)>,
    /// Measure of boundary nodes with `|φ| ≥ 1 - 1e-12` where `w ≠ 0`.
    pub boundary_mass: T,
    /// Partial sums `S_n = Σ_{k ≤ n} ‖w φ^k‖₂²`.
    pub series: Vec<T>,
    pub series_status: SumStatus,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl<T: Real> HsResult<T> {
    /// `S_{n-1}`, the sum of the first `n` terms.
    pub fn series_at(&self, n: usize) -> Option<T> {
        self.series.get(n.checked_sub(1)?).copied()
    }
}

fn hs_integral<T: Real>(grid: &BoundaryGrid<T>) -> (T, T) {
    let edge = T::one() - cst(BOUNDARY_MODULUS);
    let mut mass = T::zero();
    let mut sum = T::zero();
    for ((&wt, &w2), &p) in grid.weight.iter().zip(&grid.w2).zip(&grid.phi) {
        if p.norm() >= edge {
            if w2 > T::zero() {
                mass = mass + wt;
            }
        } else {
            sum = sum + wt * w2 / (T::one() - p.norm_sqr());
        }
    }
    (sum, mass)
}

/// `‖w φⁿ‖₂²` for `n < HS_SERIES_TERMS` from Taylor coefficients on
/// `|z| = 1 - 1/(4K)`, `K = 512`.
fn series_terms<T: Real>(w: &Expr<T>, phi: &Expr<T>) -> Result<Vec<T>, String> {
    let m = 128 * SERIES_COEFFS;
    let rho = T::one() - T::one() / (cst::<T>(4.0) * from_usize(SERIES_COEFFS));
    let step = two_pi::<T>() / from_usize(m);
    let samples: Vec<(C<T>, C<T>)> = (0..m)
        .into_par_iter()
        .map(|j| {
            let z = cis(step * from_usize(j)) * rho;
            Ok((w.eval(z)?, phi.eval(z)?))
        })
        .collect::<crate::Result<_>>()
        .map_err(|e| e.to_string())?;
    let fft = FftPlanner::new().plan_fft_forward(m);
    let inv_m = T::one() / from_usize(m);
    let scales: Vec<T> = std::iter::successors(Some(inv_m), |s| Some(*s / rho)).take(SERIES_COEFFS).collect();
    let mut terms = Vec::with_capacity(HS_SERIES_TERMS);
    for chunk in (0..HS_SERIES_TERMS).collect::<Vec<_>>().chunks(32) {
        let part: Vec<T> = chunk
            .par_iter()
            .map(|&n| {
                let mut buf: Vec<C<T>> = samples.iter().map(|&(wv, pv)| wv * pv.powu(n as u32)).collect();
                fft.process(&mut buf);
                buf.iter().zip(&scales).map(|(x, &s)| (*x * s).norm_sqr()).sum::<T>()
            })
            .collect();
        terms.extend(part);
        let total: T = terms.iter().copied().sum();
        let recent: T = terms[terms.len() - 8..].iter().copied().sum();
        if recent <= cst::<T>(1e-18) * total {
            terms.resize(HS_SERIES_TERMS, T::zero());
            break;
        }
    }
    Ok(terms)
}

/// Hilbert–Schmidt test for `W_{w,φ}` on H²: the boundary integral of
/// `|w|²/(1 - |φ|²)` against the series `Σₙ ‖w φⁿ‖₂²`.
pub fn hilbert_schmidt_test<T: Real>(w: &Expr<T>, phi: &Expr<T>) -> HsResult<T> {
    let mut evidence = Vec::new();
    let mut mass = T::zero();
    let mut integral_status = SumStatus::Unresolved;
    for &k in &FLOORS {
        let floor = cst::<T>(2f64.powi(-k));
        let opts = GridOptions { kernel_floor: floor, ..GridOptions::default() };
        let grid = BoundaryGrid::build(w, phi, &opts);
        let (v, m) = hs_integral(&grid);
        mass = m;
        evidence.push((floor, v));
        if m > cst(BOUNDARY_MASS) {
            integral_status = SumStatus::Divergent;
            break;
        }
    }
    let vals: Vec<T> = evidence.iter().map(|e| e.1).collect();
    let n = vals.len();
    if integral_status != SumStatus::Divergent {
        let rel = |i: usize| (vals[i] - vals[i - 1]) / vals[i].abs().max(T::min_positive_value());
        if vals[n - 1] <= T::zero() || rel(n - 1).abs() <= cst(INTEGRAL_STABLE) {
            integral_status = SumStatus::Converged;
        } else if rel(n - 1) > cst(INTEGRAL_GROWTH) && rel(n - 2) > cst(INTEGRAL_GROWTH) {
            integral_status = SumStatus::Divergent;
        }
    }
    let integral = (integral_status == SumStatus::Converged).then(|| vals[n - 1]);

    let (series, series_status, note) = match series_terms(w, phi) {
        Ok(terms) => {
            let mut acc = T::zero();
            let sums: Vec<T> = terms
                .iter()
                .map(|t| {
                    acc = acc + *t;
                    acc
                })
                .collect();
            let total = acc;
            let head: T = terms[..64].iter().copied().sum();
            let tail: T = terms[HS_SERIES_TERMS - 64..].iter().copied().sum();
            let last: T = terms[HS_SERIES_TERMS - 32..].iter().copied().sum();
            let status = if last <= cst::<T>(1e-6) * total || total <= T::zero() {
                SumStatus::Converged
            } else if tail >= cst::<T>(0.1) * head {
                SumStatus::Divergent
            } else {
                SumStatus::Unresolved
            };
            (sums, status, None)
        }
        Err(e) => (Vec::new(), SumStatus::Unresolved, Some(format!("series unavailable: {e}"))),
    };

    let verdict = if integral_status == SumStatus::Divergent || series_status == SumStatus::Divergent {
        Verdict::No
    } else if let (Some(i), SumStatus::Converged) = (integral, series_status) {
        let s = *series.last().expect("converged series is nonempty");
        let scale = i.abs().max(s.abs());
        if scale <= T::min_positive_value() || (i - s).abs() <= cst::<T>(AGREEMENT) * scale {
            Verdict::Yes
        } else {
            Verdict::Inconclusive
        }
    } else {
        Verdict::Inconclusive
    };
    HsResult {
        integral,
        integral_status,
        integral_evidence: evidence,
        boundary_mass: mass,
        series,
        series_status,
        verdict,
        note,
    }
}

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::funcexpr::Expr;
use crate::hardy::taylor_coeffs;
use crate::hb::{decompose, HbSpace};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::scalar::{cst, Real, C};

/// Default truncation sizes of the matrix oracle.
pub const DEFAULT_MATRIX_SIZES: [usize; 4] = [16, 32, 64, 128];

const BOUNDED_REL: f64 = 0.05;
const UNBOUNDED_GROWTH: f64 = 1.25;
const MONOTONE_SLACK: f64 = 1e-6;

/// A truncated operator matrix and the columns that could not be computed.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T> {
    pub n: usize,
    pub matrix: Matrix<T>,
    /// `(column, reason)`; such columns are left zero.
    pub failed_columns: Vec<(usize, String)>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn is_partial(&self) -> bool {
        !self.failed_columns.is_empty()
    }
}

/// Coefficients of `f` in the monomial basis, exact when `f` is a polynomial.
fn h2_coeffs<T: Real>(f: &Expr<T>, n: usize) -> crate::Result<Vec<C<T>>> {
    if let Some(p) = f.to_rational().ok().and_then(|r| r.as_poly()) {
        return Ok((0..n).map(|k| p.coeff(k)).collect());
    }
    Ok(taylor_coeffs(f, n, None)?.coeffs)
}

fn assemble<T: Real>(n: usize, rows: usize, cols: Vec<crate::Result<Vec<C<T>>>>) -> OperatorMatrix<T> {
    let mut failed = Vec::new();
    let columns: Vec<Vec<C<T>>> = cols
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            c.unwrap_or_else(|e| {
                failed.push((j, e.to_string()));
                vec![C::zero(); rows]
            })
        })
        .collect();
    OperatorMatrix { n, matrix: Matrix::from_columns(rows, &columns), failed_columns: failed }
}

/// Matrix of `W_{u,φ}` on H(b) in the orthonormal basis
/// `{a·z^k}_{k<n} ∪ {z^j}_{j<N}`: column `e` holds the coordinates of
/// `u·(e∘φ) = a·g + p`, the first `n` Taylor coefficients of `g` followed by
/// the coefficients of `p`.
pub fn wco_matrix<T: Real>(space: &HbSpace<T>, u: &Expr<T>, phi: &Expr<T>, n: usize) -> OperatorMatrix<T> {
    let size = n + space.n;
    let cols = (0..size)
        .into_par_iter()
        .map(|j| {
            let e = space.basis_element(j, n);
            let v = Expr::mul(u.clone(), Expr::compose(Expr::from_poly(&e), phi.clone()));
            let d = decompose(space, &v)?;
            let mut col = d.g_coeffs(n)?.coeffs;
            col.extend((0..space.n).map(|k| d.p.coeff(k)));
            Ok(col)
        })
        .collect();
    assemble(n, size, cols)
}

/// Matrix of `W_{w,φ}` on H² in the basis `{z^k}_{k<n}`.
pub fn wco_matrix_h2<T: Real>(w: &Expr<T>, phi: &Expr<T>, n: usize) -> OperatorMatrix<T> {
    let cols = (0..n)
        .into_par_iter()
        .map(|k| {
            let v = Expr::mul(w.clone(), Expr::compose(Expr::from_poly(&Poly::monomial(k)), phi.clone()));
            h2_coeffs(&v, n)
        })
        .collect();
    assemble(n, n, cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixTrend {
    BoundedConsistent,
    UnboundedConsistent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEstimate<T> {
    pub sizes: Vec<usize>,
    pub sigma_max: Vec<T>,
    pub trend: MatrixTrend,
    pub partial: bool,
    pub note: Option<String>,
}

/// Bounded-consistent when `σ_max` is nondecreasing and its last two values
/// differ by less than 5%; unbounded-consistent when it grows by at least 25%
/// at every step of the schedule.
pub fn norm_trend<T: Real>(sigma: &[T]) -> MatrixTrend {
    if sigma.len() < 2 {
        return MatrixTrend::Inconclusive;
    }
    let slack = T::one() - cst(MONOTONE_SLACK);
    let monotone = sigma.windows(2).all(|w| w[1] >= w[0] * slack);
    let (a, b) = (sigma[sigma.len() - 2], sigma[sigma.len() - 1]);
    if monotone && (b - a).abs() < cst::<T>(BOUNDED_REL) * b.max(a) {
        return MatrixTrend::BoundedConsistent;
    }
    if sigma.windows(2).all(|w| w[1] >= cst::<T>(UNBOUNDED_GROWTH) * w[0] && w[0] > T::zero()) {
        return MatrixTrend::UnboundedConsistent;
    }
    MatrixTrend::Inconclusive
}

fn estimate<T: Real>(sizes: &[usize], mats: Vec<OperatorMatrix<T>>) -> NormEstimate<T> {
    let partial = mats.iter().any(OperatorMatrix::is_partial);
    let sigma_max: Vec<T> = mats.iter().map(|m| m.matrix.sigma_max()).collect();
    let (trend, note) = if partial {
        let (j, why) = mats.iter().flat_map(|m| m.failed_columns.first()).next().expect("partial");
        (MatrixTrend::UnboundedConsistent, Some(format!("column {j} could not be decomposed: {why}")))
    } else {
        (norm_trend(&sigma_max), None)
    };
    NormEstimate { sizes: sizes.to_vec(), sigma_max, trend, partial, note }
}

/// `σ_max` of the H(b) truncations for each size, with the trend verdict.
pub fn operator_norm_estimate<T: Real>(space: &HbSpace<T>, u: &Expr<T>, phi: &Expr<T>, sizes: &[usize]) -> NormEstimate<T> {
    let mats = sizes.iter().map(|&n| wco_matrix(space, u, phi, n)).collect();
    estimate(sizes, mats)
}

/// `σ_max` of the H² truncations of `W_{w,φ}`.
pub fn operator_norm_estimate_h2<T: Real>(w: &Expr<T>, phi: &Expr<T>, sizes: &[usize]) -> NormEstimate<T> {
    let mats = sizes.iter().map(|&n| wco_matrix_h2(w, phi, n)).collect();
    estimate(sizes, mats)
}

//! Hardy-space numerics: circle quadrature, Taylor coefficients, membership
//! verdicts for H² and H∞, and truncated co-analytic Toeplitz operators.

mod membership;
mod quad;

pub(crate) use membership::sup_on_circle;
pub use membership::{h2_membership, hinf_sup, Membership, MembershipVerdict, MEMBERSHIP_LEVELS};
pub use quad::{circle_mean, integrate_adaptive, quadrature_t, AdaptiveResult, BoundaryGrid, GridOptions, QuadratureResult};

use num_traits::Zero;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::funcexpr::Expr;
use crate::poly::Poly;
use crate::scalar::{cis, cst, from_usize, two_pi, Real, C};

/// Leading Taylor coefficients of an H² function.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector<T> {
    pub coeffs: Vec<C<T>>,
    /// Radius of the sampling circle; `1` for exact coefficients.
    pub rho: T,
}

impl<T: Real> CoeffVector<T> {
    pub fn exact(coeffs: Vec<C<T>>) -> Self {
        CoeffVector { coeffs, rho: T::one() }
    }

    /// Coefficients `conj(λ)^k` of the Cauchy kernel `k_λ`.
    pub fn kernel(lambda: C<T>, n: usize) -> Self {
        let lc = lambda.conj();
        let mut c = Vec::with_capacity(n);
        let mut acc = C::new(T::one(), T::zero());
        for _ in 0..n {
            c.push(acc);
            acc = acc * lc;
        }
        Self::exact(c)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ|c_k|²`.
    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }
}

/// First `n` Taylor coefficients of `f` from an FFT of samples on `|z| = ρ`.
///
/// The FFT length is the power of two at or above `128·n`, which makes the
/// aliasing factor `ρ^M ≤ e^{-32}` at the default radius `1 - 1/(4n)`.
pub fn taylor_coeffs<T: Real>(f: &Expr<T>, n: usize, rho: Option<T>) -> Result<CoeffVector<T>> {
    if n == 0 {
        return Ok(CoeffVector { coeffs: Vec::new(), rho: T::one() });
    }
    let rho = rho.unwrap_or_else(|| T::one() - T::one() / (cst::<T>(4.0) * from_usize(n)));
    if !(rho > T::zero() && rho < T::one()) {
        return Err(Error::InvalidArgument("sampling radius must lie in (0, 1)".into()));
    }
    let m = (128 * n).next_power_of_two();
    let step = two_pi::<T>() / from_usize(m);
    let mut buf: Vec<C<T>> = (0..m)
        .into_par_iter()
        .map(|j| f.eval(cis(step * from_usize(j)) * rho))
        .collect::<Result<_>>()?;
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let inv_m = T::one() / from_usize(m);
    let mut scale = inv_m;
    let coeffs = buf
        .into_iter()
        .take(n)
        .map(|x| {
            let c = x * scale;
            scale = scale / rho;
            c
        })
        .collect();
    Ok(CoeffVector { coeffs, rho })
}

/// Coefficient action of `T_{v̄}`: `(T g)_k = Σ_j conj(v_j) g_{k+j}`, truncated
/// to the length of `g`.
pub fn toeplitz_coanalytic_apply<T: Real>(v: &Poly<T>, g: &CoeffVector<T>) -> CoeffVector<T> {
    let n = g.len();
    let vc = v.coeffs();
    let coeffs = (0..n)
        .map(|k| {
            vc.iter()
                .enumerate()
                .take_while(|(j, _)| k + j < n)
                .fold(C::zero(), |acc, (j, c)| acc + c.conj() * g.coeffs[k + j])
        })
        .collect();
    CoeffVector { coeffs, rho: g.rho }
}

/// Result of [`range_norm_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct RangeNorm<T> {
    /// `‖g‖₂` for the solution of the truncated system `T_{v̄} g = f`.
    pub norm: T,
    pub solution: CoeffVector<T>,
    /// `‖T_{v̄} g - f‖₂ / ‖f‖₂` on the truncation.
    pub residual: T,
    /// `|g_{n-1}| / ‖g‖₂`, large when the truncation has not captured `g`.
    pub tail: T,
}

/// Norm of `f` in the range space `M(v̄)`: solve the truncated co-analytic
/// Toeplitz system, which is upper triangular with diagonal `conj(v(0))`.
pub fn range_norm_estimate<T: Real>(v: &Poly<T>, f: &CoeffVector<T>) -> Result<RangeNorm<T>> {
    let n = f.len();
    let v0 = v.coeff(0);
    let scale = v.max_abs();
    if v.is_zero() || v0.norm() <= cst::<T>(1e-12) * scale {
        return Err(Error::RankDeficient(crate::scalar::to_f64(v0.norm())));
    }
    let vc: Vec<C<T>> = v.coeffs().iter().map(|c| c.conj()).collect();
    let mut g = vec![C::zero(); n];
    for k in (0..n).rev() {
        let mut s = f.coeffs[k];
        for (j, c) in vc.iter().enumerate().skip(1) {
            if k + j >= n {
                break;
            }
            s = s - *c * g[k + j];
        }
        g[k] = s / vc[0];
    }
    let sol = CoeffVector { coeffs: g, rho: f.rho };
    let back = toeplitz_coanalytic_apply(v, &sol);
    let fnorm = f.norm();
    let resid = back
        .coeffs
        .iter()
        .zip(&f.coeffs)
        .map(|(a, b)| (*a - *b).norm_sqr())
        .sum::<T>()
        .sqrt();
    let norm = sol.norm();
    let tail = match sol.coeffs.last() {
        Some(c) if !norm.is_zero() => c.norm() / norm,
        _ => T::zero(),
    };
    Ok(RangeNorm {
        norm,
        residual: if fnorm.is_zero() { resid } else { resid / fnorm },
        tail,
        solution: sol,
    })
}

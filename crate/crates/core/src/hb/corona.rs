use rayon::prelude::*;
use serde::Serialize;

use crate::poly::Poly;
use crate::scalar::{cis, cst, from_usize, two_pi, Real, C};

const LEVELS: usize = 64;
const ANGLES: usize = 512;

/// Result of [`corona_infimum`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoronaEstimate<T> {
    /// Smallest value of `|p| + |q|` found.
    pub infimum: T,
    /// The infimum minus a Lipschitz bound over one grid cell.
    pub lower_bound: T,
    pub argmin: C<T>,
}

/// `inf_D (|p| + |q|)` on a radial-angular grid with radii `1 - 2^{-12 i/63}`,
/// refined by a pattern search around the best node.
pub fn corona_infimum<T: Real>(p: &Poly<T>, q: &Poly<T>) -> CoronaEstimate<T> {
    let f = |z: C<T>| p.eval(z).norm() + q.eval(z).norm();
    let radii: Vec<T> = (0..LEVELS)
        .map(|i| {
            let e = cst::<T>(-12.0) * from_usize::<T>(i) / from_usize::<T>(LEVELS - 1);
            T::one() - cst::<T>(2.0).powf(e)
        })
        .collect();
    let dt = two_pi::<T>() / from_usize(ANGLES);
    let (best, arg_i, arg_j) = radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            (0..ANGLES)
                .map(|j| (f(cis(dt * from_usize(j)) * r), i, j))
                .fold((T::infinity(), 0, 0), |a, b| if b.0 < a.0 { b } else { a })
        })
        .reduce(|| (T::infinity(), 0, 0), |a, b| if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a });

    // Pattern search in (r, θ), r clamped to [0, 1].
    let (mut r, mut t, mut val) = (radii[arg_i], dt * from_usize(arg_j), best);
    let mut hr = cst::<T>(0.5) / from_usize(LEVELS);
    let mut ht = dt;
    for _ in 0..200 {
        let mut moved = false;
        for (sr, st) in [(hr, T::zero()), (-hr, T::zero()), (T::zero(), ht), (T::zero(), -ht)] {
            let nr = (r + sr).max(T::zero()).min(T::one());
            let v = f(cis(t + st) * nr);
            if v < val {
                (r, t, val, moved) = (nr, t + st, v, true);
            }
        }
        if !moved {
            hr = hr * cst(0.5);
            ht = ht * cst(0.5);
            if ht < cst(1e-14) {
                break;
            }
        }
    }

    let lip = lipschitz(p) + lipschitz(q);
    // Largest cell diameter: radial gap plus arc length.
    let max_gap = radii.windows(2).fold(T::zero(), |m, w| m.max(w[1] - w[0]));
    let cell = max_gap + dt;
    CoronaEstimate {
        infimum: val,
        lower_bound: (best - lip * cell * cst(0.5)).max(T::zero()).min(val),
        argmin: cis(t) * r,
    }
}

/// `sup_D |p'|` bounded by the coefficient sum of `p'`.
fn lipschitz<T: Real>(p: &Poly<T>) -> T {
    p.derivative().coeffs().iter().map(|c| c.norm()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let zm1 = Poly::<f64>::from_real(&[-1.0, 1.0]);
        let zp1 = Poly::from_real(&[1.0, 1.0]);
        let c = corona_infimum(&zm1, &zp1);
        assert!((c.infimum - 2.0).abs() < 1e-3, "{c:?}");
        assert!(c.lower_bound <= c.infimum);
        assert!(corona_infimum(&zm1, &zm1).infimum < 1e-6);
        let c = corona_infimum(&(&zm1 * &zm1), &zp1);
        assert!((c.infimum - 1.75).abs() < 1e-3, "{c:?}");
        assert!((c.argmin - C::new(0.5, 0.0)).norm() < 1e-3);
    }
}

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cst, from_usize, Real, C};

use super::Poly;

/// A root together with its multiplicity after clustering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T> {
    pub value: C<T>,
    pub multiplicity: usize,
}

/// All roots of `p`, multiplicities recovered by clustering within `1e-6`.
pub fn roots<T: Real>(p: &Poly<T>) -> Result<Vec<Root<T>>> {
    roots_with_tolerance(p, cst(1e-6))
}

/// Companion-matrix eigenvalues, one Newton polish step, then clustering.
pub fn roots_with_tolerance<T: Real>(p: &Poly<T>, cluster_tol: T) -> Result<Vec<Root<T>>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::InvalidArgument("roots of a nonzero constant".into()));
    }
    // Exact zero roots are split off; they would otherwise sit in a singular
    // companion block.
    let low = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut raw: Vec<C<T>> = vec![C::zero(); low];
    let reduced = Poly::new(p.coeffs()[low..].to_vec());
    if let Some(d) = reduced.degree().filter(|&d| d > 0) {
        let monic = reduced.monic()?;
        let mut h = vec![vec![C::<T>::zero(); d]; d];
        for (j, cell) in h[0].iter_mut().enumerate() {
            *cell = -monic.coeff(d - 1 - j);
        }
        for i in 1..d {
            h[i][i - 1] = C::one();
        }
        let eig = hessenberg_eigenvalues(h)?;
        let dp = reduced.derivative();
        for r in eig {
            raw.push(newton_step(&reduced, &dp, r));
        }
    }
    Ok(cluster_roots(p, &raw, cluster_tol))
}

fn newton_step<T: Real>(p: &Poly<T>, dp: &Poly<T>, r: C<T>) -> C<T> {
    let d = dp.eval(r);
    let scale = p.max_abs() * cst(1e-8);
    if d.norm() <= scale {
        return r;
    }
    let step = p.eval(r) / d;
    // Reject steps that leave the root's neighbourhood (near-multiple roots).
    if step.norm() <= cst::<T>(1e-3) * (T::one() + r.norm()) {
        r - step
    } else {
        r
    }
}

/// Single-linkage clustering of raw roots. Each cluster is replaced by its
/// mean, polished once by Newton on the `(m-1)`-th derivative of `p`.
pub fn cluster_roots<T: Real>(p: &Poly<T>, raw: &[C<T>], tol: T) -> Vec<Root<T>> {
    let n = raw.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = T::one().max(raw[i].norm());
            if (raw[i] - raw[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C<T>>)> = Vec::new();
    for (i, &r) in raw.iter().enumerate() {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|(l, _)| *l == root) {
            Some((_, members)) => members.push(r),
            None => groups.push((root, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let mean = members.iter().fold(C::zero(), |a, &b| a + b) / from_usize::<T>(m);
            let value = if m > 1 {
                let d = p.nth_derivative(m - 1);
                newton_step(&d, &d.derivative(), mean)
            } else {
                mean
            };
            Root { value, multiplicity: m }
        })
        .collect()
}

/// Eigenvalues of a complex upper Hessenberg matrix by the shifted QR
/// iteration with Givens rotations and Wilkinson shifts.
pub fn hessenberg_eigenvalues<T: Real>(mut h: Vec<Vec<C<T>>>) -> Result<Vec<C<T>>> {
    let n = h.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let eps = T::epsilon();
    let norm = h
        .iter()
        .flat_map(|row| row.iter())
        .fold(T::zero(), |m, c| m.max(c.norm()));
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            out.push(h[0][0]);
            break;
        }
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let s = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            let s = if s.is_zero() { norm } else { s };
            if h[lo][lo - 1].norm() <= eps * s {
                h[lo][lo - 1] = C::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(Error::InvalidArgument(
                "QR iteration failed to converge for the companion matrix".into(),
            ));
        }
        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[hi][hi] + C::new(h[hi][hi - 1].norm() * cst(0.75), h[hi][hi - 1].norm() * cst(0.5))
        } else {
            wilkinson(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[k][k] - shift, h[k + 1][k])
            } else {
                (h[k][k - 1], h[k + 1][k - 1])
            };
            let (c, s) = givens(x, y);
            let start = if k == lo { lo } else { k - 1 };
            for j in start..=hi {
                let (a, b) = (h[k][j], h[k + 1][j]);
                h[k][j] = a * c + s * b;
                h[k + 1][j] = -s.conj() * a + b * c;
            }
            if k > lo {
                h[k + 1][k - 1] = C::zero();
            }
            let stop = (k + 2).min(hi);
            for row in h.iter_mut().take(stop + 1).skip(lo) {
                let (a, b) = (row[k], row[k + 1]);
                row[k] = a * c + s.conj() * b;
                row[k + 1] = -s * a + b * c;
            }
        }
    }
    Ok(out)
}

/// Rotation `[c s; -s̄ c]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens<T: Real>(x: C<T>, y: C<T>) -> (T, C<T>) {
    let ax = x.norm();
    if ax.is_zero() {
        return (T::zero(), C::one());
    }
    let r = (ax * ax + y.norm_sqr()).sqrt();
    let alpha = x / ax;
    (ax / r, alpha * y.conj() / r)
}

fn wilkinson<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = cst::<T>(0.5);
    let m = (a - d) * half;
    let disc = (m * m + b * c).sqrt();
    let l1 = (a + d) * half + disc;
    let l2 = (a + d) * half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut r: Vec<Root<f64>>) -> Vec<Root<f64>> {
        r.sort_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap());
        r
    }

    #[test]
    fn spec_examples() {
        let r = sorted(roots(&Poly::from_real(&[-1.0, 0.0, 1.0])).unwrap());
        assert_eq!(r.len(), 2);
        assert!((r[0].value + 1.0).norm() < 1e-12 && (r[1].value - 1.0).norm() < 1e-12);

        let r = roots(&Poly::from_real(&[-1.0, 1.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].value - 1.0).norm() < 1e-14);

        // -(z-1)^2/4
        let r = roots(&Poly::from_real(&[-0.25, 0.5, -0.25])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert!((r[0].value - 1.0).norm() < 1e-10);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert_eq!(roots(&Poly::<f64>::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn complex_roots_and_zero_roots() {
        let want = [C::new(0.3, 0.7), C::new(-1.2, 0.1), C::new(0.0, -2.0)];
        let p = Poly::from_roots(&[(want[0], 1), (want[1], 1), (want[2], 1), (C::zero(), 2)]);
        let r = roots(&p).unwrap();
        let total: usize = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 5);
        for w in want {
            assert!(r.iter().any(|x| (x.value - w).norm() < 1e-10));
        }
        assert!(r.iter().any(|x| x.value.norm() < 1e-12 && x.multiplicity == 2));
    }

    #[test]
    fn unit_circle_roots_of_high_degree() {
        let n = 12;
        let want: Vec<_> = (0..n)
            .map(|k| crate::scalar::cis(2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
            .collect();
        let p = Poly::from_roots(&want.iter().map(|&w| (w, 1)).collect::<Vec<_>>());
        let r = roots(&p).unwrap();
        assert_eq!(r.len(), n);
        for w in want {
            assert!(r.iter().any(|x| (x.value - w).norm() < 1e-10));
        }
    }
}

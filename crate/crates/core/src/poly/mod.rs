//! Dense complex polynomials, Euclidean algorithms and confluent interpolation.

mod rational;
mod roots;

pub use rational::RationalFn;
pub use roots::{cluster_roots, hessenberg_eigenvalues, roots, roots_with_tolerance, Root};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{pair, Error, Result};
use crate::scalar::{cst, from_usize, Real, C};

/// Polynomial with complex coefficients in ascending degree order.
///
/// The coefficient vector never ends in an exact zero, so the zero polynomial
/// is the empty vector and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Default)]
pub struct Poly<T> {
    coeffs: Vec<C<T>>,
}

impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Real> Poly<T> {
    pub fn new(mut coeffs: Vec<C<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&x| C::new(x, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C<T>) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = C::one();
        Poly { coeffs }
    }

    /// `z - root`.
    pub fn linear(root: C<T>) -> Self {
        Self::new(vec![-root, C::one()])
    }

    /// Monic product `∏ (z - r)^m`.
    pub fn from_roots(roots: &[(C<T>, usize)]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &(r, m)| acc * Self::linear(r).powi(m))
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C<T> {
        self.coeffs.get(k).copied().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<C<T>> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * from_usize::<T>(k))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// `self ∘ inner`, by Horner's scheme.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| &(&acc * inner) + &Self::constant(c))
    }

    /// Euclidean 2-norm of the coefficient vector (the H² norm).
    pub fn norm2(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Drop trailing coefficients whose modulus is at most `rel * max|c|`.
    pub fn trim_relative(&self, rel: T) -> Self {
        let cut = rel * self.max_abs();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(lead.inv()))
    }

    /// Polynomial whose coefficients are the conjugates of these.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = d.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        let Some(np) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if np < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); np - dd + 1];
        for k in (0..=np - dd).rev() {
            let q = rem[k + dd] * lead_inv;
            quot[k] = q;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j] - q * dc;
            }
            rem[k + dd] = C::zero();
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }
}

impl<T: Real> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}

impl<T: Real> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Result of the extended Euclidean algorithm: `p·h1 + q·h2 = gcd`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bezout<T> {
    /// Monic greatest common divisor.
    pub gcd: Poly<T>,
    pub h1: Poly<T>,
    pub h2: Poly<T>,
}

/// Extended Euclid over complex floating-point coefficients.
///
/// Remainders are cleaned of trailing coefficients below `1e-12` of the input
/// scale and treated as zero below `1e-10`, so coprime inputs return a gcd of
/// exactly `1`.
pub fn bezout<T: Real>(p: &Poly<T>, q: &Poly<T>) -> Result<Bezout<T>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let scale = p.max_abs().max(q.max_abs());
    let clean = cst::<T>(1e-12) * scale;
    let zero_tol = cst::<T>(1e-10) * scale;

    let (mut r0, mut r1) = (p.clone(), q.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while r1.max_abs() > zero_tol {
        let (quot, rem) = r0.divrem(&r1)?;
        let rem = strip_small(&rem, clean);
        let s2 = &s0 - &(&quot * &s1);
        let t2 = &t0 - &(&quot * &t1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lead = r0.leading().ok_or(Error::ZeroPolynomial)?.inv();
    let gcd = r0.scale(lead);
    // A constant gcd is reported as exactly one.
    let gcd = if gcd.degree() == Some(0) { Poly::one() } else { gcd };
    Ok(Bezout {
        gcd,
        h1: s0.scale(lead),
        h2: t0.scale(lead),
    })
}

fn strip_small<T: Real>(p: &Poly<T>, abs: T) -> Poly<T> {
    let mut c = p.coeffs.clone();
    while c.last().is_some_and(|x| x.norm() <= abs) {
        c.pop();
    }
    Poly::new(c)
}

/// One interpolation node with prescribed derivatives `f(ζ), f'(ζ), …`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteNode<T> {
    pub zeta: C<T>,
    pub values: Vec<C<T>>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct HermiteData<T> {
    pub nodes: Vec<HermiteNode<T>>,
}

impl<T: Real> HermiteData<T> {
    pub fn condition_count(&self) -> usize {
        self.nodes.iter().map(|n| n.values.len()).sum()
    }
}

/// Confluent Hermite interpolation in Newton form.
///
/// Returns the unique polynomial of degree `< N` (N = total condition count)
/// whose `k`-th derivative at each node equals the prescribed value.
pub fn hermite_interpolate<T: Real>(data: &HermiteData<T>) -> Result<Poly<T>> {
    let dup_tol = cst::<T>(1e-12);
    for (i, a) in data.nodes.iter().enumerate() {
        for b in &data.nodes[i + 1..] {
            if (a.zeta - b.zeta).norm() <= dup_tol {
                return Err(Error::DuplicateNode(pair(a.zeta)));
            }
        }
    }
    // Expanded node list z_0..z_{N-1}, grouped by node.
    let mut zs = Vec::new();
    let mut owner = Vec::new();
    for (ni, node) in data.nodes.iter().enumerate() {
        for _ in 0..node.values.len() {
            zs.push(node.zeta);
            owner.push(ni);
        }
    }
    let n = zs.len();
    if n == 0 {
        return Err(Error::EmptyInterpolation);
    }
    // Column-by-column divided-difference table; `col[i]` holds f[z_{i-j}..z_i].
    let mut col: Vec<C<T>> = owner.iter().map(|&o| data.nodes[o].values[0]).collect();
    let mut newton = vec![col[0]];
    let mut factorial = T::one();
    for j in 1..n {
        factorial = factorial * from_usize::<T>(j);
        let mut next = vec![C::zero(); n];
        for i in j..n {
            next[i] = if owner[i] == owner[i - j] {
                data.nodes[owner[i]].values[j] / factorial
            } else {
                (col[i] - col[i - 1]) / (zs[i] - zs[i - j])
            };
        }
        newton.push(next[j]);
        col = next;
    }
    let mut p = Poly::constant(newton[n - 1]);
    for i in (0..n - 1).rev() {
        p = &(&p * &Poly::linear(zs[i])) + &Poly::constant(newton[i]);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn close(p: &Poly<f64>, expect: &[C<f64>], tol: f64) -> bool {
        let n = p.coeffs().len().max(expect.len());
        (0..n).all(|k| (p.coeff(k) - expect.get(k).copied().unwrap_or_default()).norm() < tol)
    }

    #[test]
    fn divrem_examples() {
        let z2m1 = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let zm1 = Poly::from_real(&[-1.0, 1.0]);
        let (q, r) = z2m1.divrem(&zm1).unwrap();
        assert!(close(&q, &[c(1.0, 0.0), c(1.0, 0.0)], 1e-15));
        assert!(r.is_zero());

        let z2 = Poly::<f64>::monomial(2);
        let (q, r) = z2.divrem(&zm1).unwrap();
        assert!(close(&q, &[c(1.0, 0.0), c(1.0, 0.0)], 1e-15));
        assert!(close(&r, &[c(1.0, 0.0)], 1e-15));

        let p = Poly::new(vec![c(1.0, 2.0), c(-3.0, 0.5)]);
        let (q, r) = p.divrem(&Poly::one()).unwrap();
        assert_eq!(q, p);
        assert!(r.is_zero());

        assert_eq!(p.divrem(&Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn bezout_examples() {
        let zm1 = Poly::from_real(&[-1.0, 1.0]);
        let zp1 = Poly::from_real(&[1.0, 1.0]);
        let b = bezout(&zm1, &zp1).unwrap();
        assert_eq!(b.gcd, Poly::one());
        assert!(close(&b.h1, &[c(-0.5, 0.0)], 1e-14));
        assert!(close(&b.h2, &[c(0.5, 0.0)], 1e-14));

        let b = bezout(&zm1, &zm1).unwrap();
        assert!(close(&b.gcd, &[c(-1.0, 0.0), c(1.0, 0.0)], 1e-14));

        let sq = &zm1 * &zm1;
        let b = bezout(&sq, &zp1).unwrap();
        assert_eq!(b.gcd, Poly::one());
        for k in 0..100 {
            let z = crate::scalar::cis(k as f64 * 0.0628) * 0.9;
            let res = sq.eval(z) * b.h1.eval(z) + zp1.eval(z) * b.h2.eval(z) - 1.0;
            assert!(res.norm() < 1e-10);
        }
    }

    #[test]
    fn hermite_examples() {
        let one = c(1.0, 0.0);
        let p = hermite_interpolate(&HermiteData {
            nodes: vec![HermiteNode { zeta: one, values: vec![c(2.0, 0.0)] }],
        })
        .unwrap();
        assert!(close(&p, &[c(2.0, 0.0)], 1e-15));

        let p = hermite_interpolate(&HermiteData {
            nodes: vec![HermiteNode { zeta: one, values: vec![c(0.0, 0.0), c(3.0, 0.0)] }],
        })
        .unwrap();
        assert!(close(&p, &[c(-3.0, 0.0), c(3.0, 0.0)], 1e-14));

        let (v, w) = (c(0.3, -1.0), c(2.0, 0.5));
        let p = hermite_interpolate(&HermiteData {
            nodes: vec![
                HermiteNode { zeta: one, values: vec![v] },
                HermiteNode { zeta: -one, values: vec![w] },
            ],
        })
        .unwrap();
        assert!(close(&p, &[(v + w) / 2.0, (v - w) / 2.0], 1e-14));
    }

    #[test]
    fn hermite_rejects_duplicates_and_empty() {
        let node = HermiteNode { zeta: c(1.0, 0.0), values: vec![c(1.0, 0.0)] };
        let dup = HermiteData { nodes: vec![node.clone(), node] };
        assert!(matches!(hermite_interpolate(&dup), Err(Error::DuplicateNode(_))));
        assert_eq!(
            hermite_interpolate(&HermiteData::<f64>::default()),
            Err(Error::EmptyInterpolation)
        );
    }

    #[test]
    fn compose_and_powers() {
        let zm1 = Poly::from_real(&[-1.0, 1.0]);
        let half = Poly::from_real(&[0.0, 0.5]);
        // (z/2) - 1
        assert!(close(&zm1.compose(&half), &[c(-1.0, 0.0), c(0.5, 0.0)], 1e-15));
        let cube = zm1.powi(3);
        assert!(close(&cube, &[c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)], 1e-15));
    }

    #[test]
    fn f32_arithmetic_works() {
        let p = Poly::<f32>::from_real(&[-1.0, 0.0, 1.0]);
        let (q, r) = p.divrem(&Poly::from_real(&[1.0, 1.0])).unwrap();
        assert!((q.coeff(0).re + 1.0).abs() < 1e-6 && r.max_abs() < 1e-6);
    }
}

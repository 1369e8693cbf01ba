use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cst, Real, C};

use super::{bezout, Poly};

/// Ratio of two polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

impl<T: Real> RationalFn<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RationalFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: C<T>) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalFn {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RationalFn {
            num: &(&self.num * &o.den) - &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFn { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RationalFn { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let m = n.unsigned_abs() as usize;
        let pos = RationalFn { num: self.num.powi(m), den: self.den.powi(m) };
        if n >= 0 {
            Ok(pos)
        } else {
            Self::from_poly(Poly::one()).div(&pos)
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        // P(N/D) = Σ p_k N^k D^{d-k} / D^d for deg P = d.
        let homog = |p: &Poly<T>| -> (Poly<T>, usize) {
            let d = p.degree().unwrap_or(0);
            let mut acc = Poly::zero();
            for (k, &c) in p.coeffs().iter().enumerate() {
                let term = &inner.num.powi(k) * &inner.den.powi(d - k);
                acc = &acc + &term.scale(c);
            }
            (acc, d)
        };
        let (n, dn) = homog(&self.num);
        let (d, dd) = homog(&self.den);
        // N/D^{dn} ÷ M/D^{dd}
        if dn >= dd {
            RationalFn { num: n, den: &d * &inner.den.powi(dn - dd) }
        } else {
            RationalFn { num: &n * &inner.den.powi(dd - dn), den: d }
        }
    }

    /// Cancel the numerical gcd of numerator and denominator and scale the
    /// denominator to be monic.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return RationalFn { num: Poly::zero(), den: Poly::one() };
        }
        let mut num = self.num.trim_relative(cst(1e-14));
        let mut den = self.den.trim_relative(cst(1e-14));
        if let Ok(b) = bezout(&num, &den) {
            if b.gcd.degree().unwrap_or(0) > 0 {
                if let (Ok((qn, _)), Ok((qd, _))) = (num.divrem(&b.gcd), den.divrem(&b.gcd)) {
                    num = qn;
                    den = qd;
                }
            }
        }
        let lead = den.leading().unwrap_or_else(C::one).inv();
        RationalFn { num: num.scale(lead), den: den.scale(lead) }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Numerator divided by the constant denominator.
    pub fn as_poly(&self) -> Option<Poly<T>> {
        if self.is_polynomial() {
            Some(self.num.scale(self.den.coeff(0).inv()))
        } else {
            None
        }
    }
}

impl<T: Real> Default for RationalFn<T> {
    fn default() -> Self {
        Self::constant(C::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_cancels_common_factor() {
        let r = RationalFn::new(
            Poly::from_real(&[-1.0, 0.0, 1.0]),
            Poly::from_real(&[-1.0, 1.0]),
        )
        .unwrap()
        .reduce();
        assert!(r.is_polynomial());
        let p = r.as_poly().unwrap();
        assert!((p.coeff(0) - 1.0).norm() < 1e-12 && (p.coeff(1) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = RationalFn::new(Poly::from_real(&[1.0, 1.0]), Poly::from_real(&[2.0, 0.0, 1.0])).unwrap();
        let g = RationalFn::new(Poly::from_real(&[0.0, 0.5]), Poly::from_real(&[3.0, -1.0])).unwrap();
        let h = f.compose(&g);
        for z in [C::new(0.1, 0.2), C::new(-0.5, 0.3)] {
            assert!((h.eval(z) - f.eval(g.eval(z))).norm() < 1e-13);
        }
    }
}

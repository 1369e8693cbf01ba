//! Closed-form analytic functions on the unit disk.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := ("-" | "+") unary | power
//! power    := primary ("^" exponent)*
//! exponent := INT | "-" INT | "(" ["-"|"+"] INT ["/" ["-"|"+"] INT] ")"
//! primary  := NUMBER ["i"] | "i" | "z" | "(" expr ")" | "{" expr "}" "(" expr ")"
//! ```
//!
//! `{f}(g)` is the composition `f∘g`. Fractional powers use the principal
//! branch. Subtrees whose operands are all constants are folded when built,
//! which is what makes printing followed by parsing reproduce the tree.

mod limits;
mod parse;

pub use limits::{default_radii, radial_limit, vanishing_order, LimitStatus, RadialLimitResult, Vanishing, DEFAULT_SCHEDULE};
pub use parse::parse_expr;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{pair, Error, Result};
use crate::poly::{Poly, RationalFn};
use crate::scalar::{cst, Real, C};

/// Reduced rational exponent `num/den` with `den ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub num: i64,
    pub den: i64,
}

impl Exponent {
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let s = if den < 0 { -1 } else { 1 };
        Some(Exponent { num: s * num / g, den: s * den / g })
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn value<T: Real>(&self) -> T {
        T::from_i64(self.num).expect("fits") / T::from_i64(self.den).expect("fits")
    }

    fn minus_one(&self) -> Self {
        Exponent::new(self.num - self.den, self.den).expect("den nonzero")
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Expression tree over the single variable `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<T> {
    Const(C<T>),
    Var,
    Add(Box<Expr<T>>, Box<Expr<T>>),
    Sub(Box<Expr<T>>, Box<Expr<T>>),
    Mul(Box<Expr<T>>, Box<Expr<T>>),
    Div(Box<Expr<T>>, Box<Expr<T>>),
    /// Integer power, negative exponents allowed.
    Pow(Box<Expr<T>>, i64),
    /// Principal-branch power with a non-integer rational exponent.
    FracPow(Box<Expr<T>>, Exponent),
    /// `outer ∘ inner`.
    Compose(Box<Expr<T>>, Box<Expr<T>>),
}

impl<T: Real> Expr<T> {
    pub fn z() -> Self {
        Expr::Var
    }

    pub fn constant(c: C<T>) -> Self {
        Expr::Const(c)
    }

    pub fn real(x: T) -> Self {
        Expr::Const(C::new(x, T::zero()))
    }

    pub fn zero() -> Self {
        Expr::Const(C::zero())
    }

    pub fn one() -> Self {
        Expr::Const(C::one())
    }

    fn as_const(&self) -> Option<C<T>> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    /// True when the tree never references `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Expr::Pow(a, _) | Expr::FracPow(a, _) => a.is_constant(),
            Expr::Compose(outer, inner) => outer.is_constant() || inner.is_constant(),
        }
    }

    pub fn add(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            (Some(x), _) if x.is_zero() => b,
            (_, Some(y)) if y.is_zero() => a,
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            (_, Some(y)) if y.is_zero() => a,
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            (Some(x), _) if x.is_zero() => Expr::zero(),
            (_, Some(y)) if y.is_zero() => Expr::zero(),
            (Some(x), _) if x.is_one() => b,
            (_, Some(y)) if y.is_one() => a,
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if !y.is_zero() => Expr::Const(x / y),
            (Some(x), _) if x.is_zero() => Expr::zero(),
            (_, Some(y)) if y.is_one() => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Self) -> Self {
        match a.as_const() {
            Some(x) => Expr::Const(-x),
            None => Expr::mul(Expr::Const(-C::<T>::one()), a),
        }
    }

    pub fn powi(a: Self, n: i64) -> Self {
        match (n, a.as_const()) {
            (0, _) => Expr::one(),
            (1, _) => a,
            (_, Some(x)) if !(x.is_zero() && n < 0) => Expr::Const(cpowi(x, n)),
            _ => Expr::Pow(Box::new(a), n),
        }
    }

    pub fn frac_pow(a: Self, e: Exponent) -> Self {
        if e.is_integer() {
            return Expr::powi(a, e.num);
        }
        if let Some(x) = a.as_const() {
            if let Ok(v) = frac_pow_value(x, e, C::zero()) {
                return Expr::Const(v);
            }
        }
        Expr::FracPow(Box::new(a), e)
    }

    pub fn compose(outer: Self, inner: Self) -> Self {
        if outer.is_constant() {
            return outer;
        }
        if matches!(outer, Expr::Var) {
            return inner;
        }
        if matches!(inner, Expr::Var) {
            return outer;
        }
        Expr::Compose(Box::new(outer), Box::new(inner))
    }

    /// Horner form of a polynomial.
    pub fn from_poly(p: &Poly<T>) -> Self {
        let mut it = p.coeffs().iter().rev();
        let Some(&lead) = it.next() else {
            return Expr::zero();
        };
        it.fold(Expr::Const(lead), |acc, &c| {
            Expr::add(Expr::mul(acc, Expr::Var), Expr::Const(c))
        })
    }

    pub fn from_rational(r: &RationalFn<T>) -> Self {
        Expr::div(Expr::from_poly(&r.num), Expr::from_poly(&r.den))
    }

    /// Value at `z`, principal branches for fractional powers.
    pub fn eval(&self, z: C<T>) -> Result<C<T>> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => z,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let d = b.eval(z)?;
                if d.norm() < cst::<T>(1e-300) {
                    return Err(Error::Pole { z: pair(z) });
                }
                a.eval(z)? / d
            }
            Expr::Pow(a, n) => {
                let v = a.eval(z)?;
                if *n < 0 && v.norm() < cst::<T>(1e-300) {
                    return Err(Error::Pole { z: pair(z) });
                }
                cpowi(v, *n)
            }
            Expr::FracPow(a, e) => frac_pow_value(a.eval(z)?, *e, z)?,
            Expr::Compose(outer, inner) => outer.eval(inner.eval(z)?)?,
        })
    }

    /// Exact symbolic derivative with respect to `z`.
    pub fn differentiate(&self) -> Self {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var => Expr::one(),
            Expr::Add(a, b) => Expr::add(a.differentiate(), b.differentiate()),
            Expr::Sub(a, b) => Expr::sub(a.differentiate(), b.differentiate()),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.differentiate(), (**b).clone()),
                Expr::mul((**a).clone(), b.differentiate()),
            ),
            Expr::Div(a, b) => {
                let num = Expr::sub(
                    Expr::mul(a.differentiate(), (**b).clone()),
                    Expr::mul((**a).clone(), b.differentiate()),
                );
                Expr::div(num, Expr::powi((**b).clone(), 2))
            }
            Expr::Pow(a, n) => Expr::mul(
                Expr::mul(
                    Expr::real(T::from_i64(*n).expect("fits")),
                    Expr::powi((**a).clone(), n - 1),
                ),
                a.differentiate(),
            ),
            Expr::FracPow(a, e) => Expr::mul(
                Expr::mul(
                    Expr::real(e.value::<T>()),
                    Expr::frac_pow((**a).clone(), e.minus_one()),
                ),
                a.differentiate(),
            ),
            Expr::Compose(outer, inner) => Expr::mul(
                Expr::compose(outer.differentiate(), (**inner).clone()),
                inner.differentiate(),
            ),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |e, _| e.differentiate())
    }

    /// Convert to a ratio of polynomials when the tree has no fractional powers.
    pub fn to_rational(&self) -> Result<RationalFn<T>> {
        Ok(match self {
            Expr::Const(c) => RationalFn::constant(*c),
            Expr::Var => RationalFn::from_poly(Poly::z()),
            Expr::Add(a, b) => a.to_rational()?.add(&b.to_rational()?),
            Expr::Sub(a, b) => a.to_rational()?.sub(&b.to_rational()?),
            Expr::Mul(a, b) => a.to_rational()?.mul(&b.to_rational()?),
            Expr::Div(a, b) => a
                .to_rational()?
                .div(&b.to_rational()?)
                .map_err(|_| Error::NotRational("division by zero".into()))?,
            Expr::Pow(a, n) => a
                .to_rational()?
                .powi(*n as i32)
                .map_err(|_| Error::NotRational("negative power of zero".into()))?,
            Expr::FracPow(..) => return Err(Error::NotRational(self.to_string())),
            Expr::Compose(outer, inner) => outer.to_rational()?.compose(&inner.to_rational()?),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) | Expr::FracPow(..) => 3,
            Expr::Const(c) if c.im.is_zero() && c.re >= T::zero() => 4,
            // Non-trivial constants print parenthesised.
            Expr::Const(_) | Expr::Var | Expr::Compose(..) => 4,
        }
    }
}

fn cpowi<T: Real>(x: C<T>, n: i64) -> C<T> {
    if n >= 0 {
        x.powu(n as u32)
    } else {
        x.powu(n.unsigned_abs() as u32).inv()
    }
}

fn frac_pow_value<T: Real>(base: C<T>, e: Exponent, z: C<T>) -> Result<C<T>> {
    if base.norm() <= cst::<T>(1e-300) {
        return if e.num > 0 {
            Ok(C::zero())
        } else {
            Err(Error::Pole { z: pair(z) })
        };
    }
    if base.re <= T::zero() && base.im.abs() <= cst::<T>(1e-12) {
        return Err(Error::BranchCut { z: pair(z), base: pair(base) });
    }
    Ok(base.powf(e.value::<T>()))
}

struct Paren<'a, T>(&'a Expr<T>, bool);

impl<T: Real> fmt::Display for Paren<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn write_const<T: Real>(f: &mut fmt::Formatter<'_>, c: C<T>) -> fmt::Result {
    let (re, im) = (c.re, c.im);
    if im.is_zero() {
        if re >= T::zero() && !(re.is_zero() && re.is_sign_negative()) {
            write!(f, "{re}")
        } else {
            write!(f, "(-{})", -re)
        }
    } else {
        let re_part = if re.is_sign_negative() { format!("-{}", -re) } else { format!("{re}") };
        let (sign, mag) = if im.is_sign_negative() { ("-", -im) } else { ("+", im) };
        write!(f, "({re_part}{sign}{mag}i)")
    }
}

impl<T: Real> fmt::Display for Expr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => write!(f, "z"),
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Sub(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => "+",
                    Expr::Sub(..) => "-",
                    Expr::Mul(..) => "*",
                    _ => "/",
                };
                write!(f, "{}{}{}", Paren(a, a.precedence() < p), op, Paren(b, b.precedence() <= p))
            }
            Expr::Pow(a, n) => {
                let base = Paren(a, a.precedence() < 4 || !is_plain_atom(a));
                if *n >= 0 {
                    write!(f, "{base}^{n}")
                } else {
                    write!(f, "{base}^({n})")
                }
            }
            Expr::FracPow(a, e) => {
                let base = Paren(a, a.precedence() < 4 || !is_plain_atom(a));
                write!(f, "{base}^({}/{})", e.num, e.den)
            }
            Expr::Compose(outer, inner) => write!(f, "{{{outer}}}({inner})"),
        }
    }
}

fn is_plain_atom<T: Real>(e: &Expr<T>) -> bool {
    match e {
        Expr::Var | Expr::Compose(..) => true,
        // Constants with a sign or imaginary part already print parenthesised.
        Expr::Const(_) => true,
        _ => false,
    }
}

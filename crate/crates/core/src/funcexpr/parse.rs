use crate::error::{Error, Result};
use crate::scalar::{Real, C};

use super::{Exponent, Expr};

/// Parse an expression in `z`. Error positions are byte offsets into `src`.
pub fn parse_expr<T: Real>(src: &str) -> Result<Expr<T>> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn expr<T: Real>(&mut self) -> Result<Expr<T>> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term<T: Real>(&mut self) -> Result<Expr<T>> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                let at = self.pos;
                let rhs = self.unary()?;
                if rhs.is_const_zero() {
                    return Err(Error::ZeroDivisorLiteral { pos: at });
                }
                lhs = Expr::div(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary<T: Real>(&mut self) -> Result<Expr<T>> {
        if self.eat(b'-') {
            Ok(Expr::neg(self.unary()?))
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power<T: Real>(&mut self) -> Result<Expr<T>> {
        let mut base = self.primary()?;
        while self.eat(b'^') {
            let e = self.exponent()?;
            base = Expr::frac_pow(base, e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Exponent> {
        self.skip_ws();
        let start = self.pos;
        let bad = || Error::NonRationalExponent { pos: start };
        let e = if self.eat(b'(') {
            let num = self.signed_int().ok_or_else(bad)?;
            let den = if self.eat(b'/') { self.signed_int().ok_or_else(bad)? } else { 1 };
            if !self.eat(b')') {
                return Err(bad());
            }
            Exponent::new(num, den).ok_or_else(bad)?
        } else {
            let n = self.signed_int().ok_or_else(bad)?;
            Exponent::new(n, 1).expect("unit denominator")
        };
        // A decimal point or an identifier glued to the integer is not allowed.
        if matches!(self.src.get(self.pos), Some(b'.' | b'e' | b'E' | b'i' | b'z')) {
            return Err(bad());
        }
        Ok(e)
    }

    fn signed_int(&mut self) -> Option<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return None;
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()?;
        Some(if neg { -v } else { v })
    }

    fn primary<T: Real>(&mut self) -> Result<Expr<T>> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::Const(C::new(T::zero(), T::one())))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'{') => {
                self.pos += 1;
                let outer = self.expr()?;
                self.expect(b'}')?;
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(Expr::compose(outer, inner))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) => Err(self.syntax("expected a number, 'z', 'i', '(' or '{'")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number<T: Real>(&mut self) -> Result<Expr<T>> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let v: T = text.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("malformed number '{text}'"),
        })?;
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            return Ok(Expr::Const(C::new(T::zero(), v)));
        }
        Ok(Expr::Const(C::new(v, T::zero())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_positions() {
        assert_eq!(
            parse_expr::<f64>("(1-z)^(3/4)/(1+z)^z").unwrap_err(),
            Error::NonRationalExponent { pos: 18 }
        );
        assert_eq!(
            parse_expr::<f64>("z^0.5").unwrap_err(),
            Error::NonRationalExponent { pos: 2 }
        );
        assert_eq!(
            parse_expr::<f64>("1/(1-1)").unwrap_err(),
            Error::ZeroDivisorLiteral { pos: 2 }
        );
        assert!(matches!(parse_expr::<f64>("1+"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr::<f64>("(z"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr::<f64>("z w"), Err(Error::Syntax { pos: 2, .. })));
        assert!(parse_expr::<f64>("z^(1/0)").is_err());
    }

    #[test]
    fn literals() {
        assert_eq!(parse_expr::<f64>("2.5e-3").unwrap(), Expr::real(2.5e-3));
        assert_eq!(parse_expr::<f64>("3i").unwrap(), Expr::Const(C::new(0.0, 3.0)));
        assert_eq!(parse_expr::<f64>("(1-2i)").unwrap(), Expr::Const(C::new(1.0, -2.0)));
        assert_eq!(parse_expr::<f64>("z^(-6/4)").unwrap(), {
            Expr::FracPow(Box::new(Expr::Var), Exponent { num: -3, den: 2 })
        });
        assert_eq!(parse_expr::<f64>("z^(4/2)").unwrap(), Expr::Pow(Box::new(Expr::Var), 2));
    }
}

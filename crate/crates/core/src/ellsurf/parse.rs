//! Parser for rational functions in one variable with coefficients in `Q(sqrt m)`.
//!
//! Accepts `+ - * / ^` (also `**`), parentheses, implicit multiplication (`2t`, `3(t+1)`),
//! integer literals, `sqrt(n)` or `sqrt(p/q)`, and `i` for `sqrt(-1)`.

use super::field::{squarefree_decompose, Fe};
use super::ratfun::RationalFunction;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{0}` at position {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected `{0}` at position {1}")]
    Expected(char, usize),
    #[error("two different variables `{0}` and `{1}`")]
    TwoVariables(String, String),
    #[error("square roots from two different quadratic fields: sqrt({0}) and sqrt({1})")]
    TwoFields(i64, i64),
    #[error("argument of sqrt must be a nonzero rational constant")]
    BadSqrt,
    #[error("exponent must be an integer literal")]
    BadExponent,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a constant, found an expression in `{0}`")]
    NotConstant(String),
    #[error("integer literal too large")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    Pow,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push((
                    Tok::Num(lit.parse().map_err(|_| ParseError::Overflow)?),
                    start,
                ));
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((Tok::Ident(word), start));
            }
            '√' => {
                out.push((Tok::Ident("sqrt".into()), i));
                i += 1;
            }
            '*' if chars.get(i + 1) == Some(&'*') => {
                out.push((Tok::Pow, i));
                i += 2;
            }
            '^' => {
                out.push((Tok::Pow, i));
                i += 1;
            }
            '+' | '-' | '*' | '/' => {
                out.push((Tok::Op(ch), i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            _ => return Err(ParseError::UnexpectedChar(ch, i)),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var: Option<String>,
    field: Option<i64>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |t| t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen))
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(ParseError::DivisionByZero);
                    }
                    acc = &acc / &rhs;
                }
                _ if self.starts_atom() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Pow) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.next() {
            Some(Tok::Num(n)) => n.to_i32().ok_or(ParseError::BadExponent)?,
            _ => return Err(ParseError::BadExponent),
        };
        let e = if neg { -e } else { e };
        if e < 0 && base.is_zero() {
            return Err(ParseError::DivisionByZero);
        }
        Ok(base.pow(e))
    }

    fn expect(&mut self, t: Tok, c: char) -> Result<(), ParseError> {
        let at = self.here();
        if self.next() == Some(t) {
            Ok(())
        } else {
            Err(ParseError::Expected(c, at))
        }
    }

    fn use_field(&mut self, m: i64) -> Result<(), ParseError> {
        match self.field {
            Some(f) if f != m => Err(ParseError::TwoFields(f, m)),
            _ => {
                self.field = Some(m);
                Ok(())
            }
        }
    }

    fn sqrt_of(&mut self, x: &BigRational) -> Result<Fe, ParseError> {
        if x.is_zero() {
            return Err(ParseError::BadSqrt);
        }
        // sqrt(p/q) = sqrt(p q) / q
        let n = x.numer() * x.denom();
        let n = n.to_i64().ok_or(ParseError::Overflow)?;
        let (m, f) = squarefree_decompose(n);
        let scale = BigRational::new(BigInt::from(f), x.denom().clone());
        if m == 1 {
            return Ok(Fe::from_rat(scale));
        }
        self.use_field(m)?;
        Ok(Fe::new(BigRational::zero(), scale, m))
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        let at = self.here();
        match self.next() {
            Some(Tok::Num(n)) => Ok(RationalFunction::constant(Fe::from_bigint(n))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, ')')?;
                Ok(e)
            }
            Some(Tok::Ident(w)) if w == "sqrt" => {
                let arg = if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, ')')?;
                    e
                } else {
                    self.atom()?
                };
                let c = arg
                    .as_poly()
                    .filter(|p| p.is_constant())
                    .map(|p| p.coeff(0));
                match c {
                    Some(c) if c.is_rational() => {
                        Ok(RationalFunction::constant(self.sqrt_of(&c.u)?))
                    }
                    _ => Err(ParseError::BadSqrt),
                }
            }
            Some(Tok::Ident(w)) if w == "i" => {
                self.use_field(-1)?;
                Ok(RationalFunction::constant(Fe::new(
                    BigRational::zero(),
                    BigRational::one(),
                    -1,
                )))
            }
            Some(Tok::Ident(w)) => {
                match &self.var {
                    Some(v) if v != &w => return Err(ParseError::TwoVariables(v.clone(), w)),
                    _ => self.var = Some(w),
                }
                Ok(RationalFunction::t())
            }
            Some(Tok::Op(c)) => Err(ParseError::UnexpectedChar(c, at)),
            Some(Tok::Pow) => Err(ParseError::UnexpectedChar('^', at)),
            Some(Tok::RParen) => Err(ParseError::UnexpectedChar(')', at)),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Parses a rational function; returns it with the variable name used (if any) and the
/// quadratic field of any square roots.
pub fn parse_ratfun_full(
    s: &str,
) -> Result<(RationalFunction, Option<String>, Option<i64>), ParseError> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
        var: None,
        field: None,
    };
    let f = p.expr()?;
    if p.pos < p.toks.len() {
        let (t, at) = &p.toks[p.pos];
        let c = match t {
            Tok::RParen => ')',
            Tok::LParen => '(',
            Tok::Op(c) => *c,
            Tok::Pow => '^',
            _ => '?',
        };
        return Err(ParseError::UnexpectedChar(c, *at));
    }
    Ok((f, p.var, p.field))
}

pub fn parse_ratfun(s: &str) -> Result<RationalFunction, ParseError> {
    Ok(parse_ratfun_full(s)?.0)
}

/// Parses a constant field element such as `5`, `-3/4` or `1 + sqrt(-3)`.
pub fn parse_fe(s: &str) -> Result<Fe, ParseError> {
    let (f, _, _) = parse_ratfun_full(s)?;
    match f.as_poly() {
        Some(p) if p.is_constant() => Ok(p.coeff(0)),
        _ => Err(ParseError::NotConstant(s.to_string())),
    }
}

/// Rational constant, e.g. `-3/4`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let x = parse_fe(s)?;
    if x.is_rational() {
        Ok(x.u)
    } else {
        Err(ParseError::NotConstant(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::rat;
    use super::super::poly::Poly;
    use super::*;

    #[test]
    fn polynomials() {
        let f = parse_ratfun("t^3 - 2*t + 1").unwrap();
        assert_eq!(
            f,
            RationalFunction::from_poly(Poly::from_ints(&[1, -2, 0, 1]))
        );
        let g = parse_ratfun("-(t-2) t").unwrap();
        assert_eq!(g, RationalFunction::from_poly(Poly::from_ints(&[0, 2, -1])));
        let h = parse_ratfun("2t**2").unwrap();
        assert_eq!(h, RationalFunction::from_poly(Poly::from_ints(&[0, 0, 2])));
    }

    #[test]
    fn rational_functions() {
        let f = parse_ratfun("-8*s^2/(s^2-1)").unwrap();
        let g = RationalFunction::new(Poly::from_ints(&[0, 0, -8]), Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(f, g);
        let (_, var, _) = parse_ratfun_full("-8*s^2/(s^2-1)").unwrap();
        assert_eq!(var.as_deref(), Some("s"));
        let f = parse_ratfun("-12t^3/(9t-1)^2").unwrap();
        assert_eq!(f.valuation_at(&Fe::from_rat(rat(1, 9))), Some(-2));
        assert_eq!(parse_ratfun("t^-1").unwrap(), RationalFunction::t().inv());
    }

    #[test]
    fn square_roots() {
        let x = parse_fe("2/9*sqrt(-3)").unwrap();
        assert_eq!(x, Fe::new(rat(0, 1), rat(2, 9), -3));
        assert_eq!(
            parse_fe("sqrt(-12)").unwrap(),
            Fe::new(rat(0, 1), rat(2, 1), -3)
        );
        assert_eq!(parse_fe("sqrt(9/4)").unwrap(), Fe::from_rat(rat(3, 2)));
        assert_eq!(
            parse_fe("sqrt(1/2)").unwrap(),
            Fe::new(rat(0, 1), rat(1, 2), 2)
        );
        assert_eq!(
            parse_fe("1 + i").unwrap(),
            Fe::new(rat(1, 1), rat(1, 1), -1)
        );
        assert_eq!(parse_fe("√5").unwrap(), Fe::new(rat(0, 1), rat(1, 1), 5));
        let (f, _, m) = parse_ratfun_full("sqrt(-3) t^2").unwrap();
        assert_eq!(m, Some(-3));
        assert_eq!(f.field(), Some(-3));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_ratfun("t + s"),
            Err(ParseError::TwoVariables("t".into(), "s".into()))
        );
        assert_eq!(
            parse_ratfun("sqrt(2) + sqrt(3)"),
            Err(ParseError::TwoFields(2, 3))
        );
        assert_eq!(parse_ratfun("1/(t-t)"), Err(ParseError::DivisionByZero));
        assert_eq!(parse_ratfun("sqrt(t)"), Err(ParseError::BadSqrt));
        assert_eq!(
            parse_ratfun("(t"),
            Err(ParseError::Expected(')', usize::MAX))
        );
        assert!(matches!(
            parse_ratfun("t $"),
            Err(ParseError::UnexpectedChar('$', 2))
        ));
        assert!(matches!(parse_fe("t"), Err(ParseError::NotConstant(_))));
        assert_eq!(parse_ratfun("t^x"), Err(ParseError::BadExponent));
    }
}

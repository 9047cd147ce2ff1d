//! Recursive-descent parser for rational-function expressions like
//! `(x^2*(x-1) + 1)/(x*(x-1))`, with integer coefficients reduced mod p.

use super::ratfunc::RatFunc;
use super::FpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    /// Literal integer; reduced mod p only when used as a coefficient,
    /// never when used as an exponent.
    Int(u64),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>, FpError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut value: u64 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d as u64))
                        .ok_or_else(|| FpError::Parse("integer literal too large".into()))?;
                    chars.next();
                }
                Token::Int(value)
            }
            'x' | 'X' => {
                chars.next();
                Token::X
            }
            '+' => {
                chars.next();
                Token::Plus
            }
            '-' => {
                chars.next();
                Token::Minus
            }
            '*' => {
                chars.next();
                Token::Star
            }
            '/' => {
                chars.next();
                Token::Slash
            }
            '^' => {
                chars.next();
                Token::Caret
            }
            '(' => {
                chars.next();
                Token::LParen
            }
            ')' => {
                chars.next();
                Token::RParen
            }
            other => {
                return Err(FpError::Parse(format!("unexpected character {other:?}")));
            }
        };
        tokens.push(tok);
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    p: u64,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFunc, FpError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, FpError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, FpError> {
        if self.peek() == Some(Token::Minus) {
            self.next();
            return Ok(self.factor()?.neg());
        }
        let base = match self.next() {
            Some(Token::Int(v)) => RatFunc::constant(self.p, v % self.p),
            Some(Token::X) => RatFunc::x(self.p),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => inner,
                    _ => return Err(FpError::Parse("missing closing parenthesis".into())),
                }
            }
            other => {
                return Err(FpError::Parse(format!(
                    "expected a number, x, or '(', found {other:?}"
                )));
            }
        };
        if self.peek() == Some(Token::Caret) {
            self.next();
            match self.next() {
                Some(Token::Int(exp)) if exp <= u32::MAX as u64 => Ok(base.pow(exp as u32)),
                _ => Err(FpError::Parse(
                    "expected a nonnegative integer exponent after '^'".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }
}

/// Parse an expression in `x` over `F_p`.
pub fn parse_ratfunc(input: &str, p: u64) -> Result<RatFunc, FpError> {
    super::require_odd_prime(p)?;
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(FpError::Parse("empty expression".into()));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        p,
    };
    let f = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(FpError::Parse(format!(
            "trailing input at token {:?}",
            tokens[parser.pos]
        )));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::FpPoly;

    #[test]
    fn parses_polynomials() {
        let f = parse_ratfunc("x^4 + 2*x + 1", 3).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &FpPoly::new(3, vec![1, 2, 0, 0, 1]));
    }

    #[test]
    fn exponents_are_not_reduced_mod_p() {
        let f = parse_ratfunc("x^4", 3).unwrap();
        assert_eq!(f.num().degree(), Some(4));
    }

    #[test]
    fn parses_nested_fractions() {
        let f = parse_ratfunc("x^2 + 1/x^2 + 1/(x-1) + 1/(x+1) + x/(x^2+1)", 3).unwrap();
        // Denominator is x^2 (x-1)(x+1)(x^2+1), monic of degree 6.
        assert_eq!(f.den().degree(), Some(6));
        assert_eq!(f.pole_order_at_infinity(), 2);
    }

    #[test]
    fn display_round_trip() {
        let f = parse_ratfunc("(x^2*(x-1) + 1)/(x*(x-1))", 3).unwrap();
        let again = parse_ratfunc(&f.to_string(), 3).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn unary_minus_and_errors() {
        let f = parse_ratfunc("-x + 2", 5).unwrap();
        assert_eq!(f.num(), &FpPoly::new(5, vec![2, 4]));
        assert!(parse_ratfunc("x +", 3).is_err());
        assert!(parse_ratfunc("1/(x-x)", 3).is_err());
        assert!(parse_ratfunc("x^", 3).is_err());
        assert!(parse_ratfunc("y", 3).is_err());
        assert!(parse_ratfunc("x", 4).is_err());
    }
}

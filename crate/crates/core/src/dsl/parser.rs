//! Recursive-descent parser with the precedence chain
//! pow > unary minus > mul/div > add/sub.

use super::ast::{PotentialExpr, Rational, Variable};
use super::lexer::{tokenize, Spanned, Token};
use super::ParseError;

/// Parses a potential expression, returning the tree or a positioned
/// diagnostic. Identifiers outside {z1, z2, zb1, zb2, i, exp, ln, conj} are
/// parameter references.
pub fn parse(source: &str) -> Result<PotentialExpr, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, cursor: 0 };
    let expr = parser.expression()?;
    parser.expect_eof()?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Spanned>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.cursor]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, message: String) -> ParseError {
        ParseError {
            line: at.pos.line,
            col: at.pos.col,
            message,
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        let next = self.bump();
        if next.token == token {
            Ok(())
        } else {
            let found = next.token.clone();
            Err(self.error(&next, format!("expected {what}, found {found}")))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        let next = self.peek().clone();
        if next.token == Token::Eof {
            Ok(())
        } else {
            Err(self.error(&next, format!("unexpected trailing {}", next.token)))
        }
    }

    fn expression(&mut self) -> Result<PotentialExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().token {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = PotentialExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = PotentialExpr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PotentialExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().token {
                Token::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = PotentialExpr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Token::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = PotentialExpr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<PotentialExpr, ParseError> {
        if self.peek().token == Token::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(PotentialExpr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<PotentialExpr, ParseError> {
        let base = self.atom()?;
        if self.peek().token == Token::Caret {
            self.bump();
            let exponent = self.exponent()?;
            return Ok(PotentialExpr::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    /// Exponents are rational literals: a bare integer, or a parenthesized
    /// optionally signed `p` or `p/q`.
    fn exponent(&mut self) -> Result<Rational, ParseError> {
        let next = self.bump();
        match next.token.clone() {
            Token::Number(x) => {
                let num = self.require_integer(x, &next)?;
                Ok(Rational::new(num, 1))
            }
            Token::LParen => {
                let mut sign = 1i64;
                let mut at = self.bump();
                if at.token == Token::Minus {
                    sign = -1;
                    at = self.bump();
                }
                let Token::Number(x) = at.token else {
                    return Err(self.error(&at, format!("expected integer exponent, found {}", at.token)));
                };
                let num = sign * self.require_integer(x, &at)?;
                let den = if self.peek().token == Token::Slash {
                    self.bump();
                    let d = self.bump();
                    let Token::Number(y) = d.token else {
                        return Err(
                            self.error(&d, format!("expected integer denominator, found {}", d.token))
                        );
                    };
                    let den = self.require_integer(y, &d)?;
                    if den <= 0 {
                        return Err(self.error(&d, "exponent denominator must be positive".into()));
                    }
                    den
                } else {
                    1
                };
                self.expect(Token::RParen, "`)` after rational exponent")?;
                Ok(Rational::new(num, den))
            }
            other => Err(self.error(&next, format!("expected rational exponent, found {other}"))),
        }
    }

    fn require_integer(&self, x: f64, at: &Spanned) -> Result<i64, ParseError> {
        if x.fract() != 0.0 || x.abs() > 1e15 {
            return Err(self.error(at, format!("exponent `{x}` is not a rational literal (use p or p/q)")));
        }
        Ok(x as i64)
    }

    fn atom(&mut self) -> Result<PotentialExpr, ParseError> {
        let next = self.bump();
        match next.token.clone() {
            Token::Number(x) => Ok(PotentialExpr::Number(x)),
            Token::LParen => {
                let inner = self.expression()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => match name.as_str() {
                "z1" => Ok(PotentialExpr::Var(Variable::Z1)),
                "z2" => Ok(PotentialExpr::Var(Variable::Z2)),
                "zb1" => Ok(PotentialExpr::Var(Variable::Zb1)),
                "zb2" => Ok(PotentialExpr::Var(Variable::Zb2)),
                "i" => Ok(PotentialExpr::ImaginaryUnit),
                "exp" | "ln" | "conj" => {
                    self.expect(Token::LParen, &format!("`(` after `{name}`"))?;
                    let arg = self.expression()?;
                    self.expect(Token::RParen, "`)` closing the call")?;
                    Ok(match name.as_str() {
                        "exp" => PotentialExpr::Exp(Box::new(arg)),
                        "ln" => PotentialExpr::Ln(Box::new(arg)),
                        _ => PotentialExpr::Conj(Box::new(arg)),
                    })
                }
                _ => {
                    if self.peek().token == Token::LParen {
                        return Err(self.error(
                            &next,
                            format!("unknown function `{name}` (expected exp, ln or conj)"),
                        ));
                    }
                    Ok(PotentialExpr::Param(name))
                }
            },
            other => Err(self.error(&next, format!("unexpected {other}"))),
        }
    }
}

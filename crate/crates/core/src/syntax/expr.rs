use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Spanned, Tok};
use super::ParseError;
use crate::curve::CurvePoint;
use crate::{GaussianRational, Rational, RationalFunction};

const MAX_EXPONENT: i64 = 1000;

/// Expression syntax tree. Identifiers other than `z` and `i` are resolved
/// at evaluation time (generator names in presentations, `h`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Int(BigInt),
    Var,
    I,
    Ident { name: String, column: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div { num: Box<Expr>, den: Box<Expr>, column: usize },
    Pow { base: Box<Expr>, exp: i64, column: usize },
}

impl Expr {
    pub fn eval(
        &self,
        env: &dyn Fn(&str) -> Option<RationalFunction>,
    ) -> Result<RationalFunction, ParseError> {
        Ok(match self {
            Expr::Int(n) => RationalFunction::constant(GaussianRational::real(Rational::from_integer(n.clone()))),
            Expr::Var => RationalFunction::var(),
            Expr::I => RationalFunction::constant(GaussianRational::i()),
            Expr::Ident { name, column } => env(name)
                .ok_or_else(|| ParseError::semantic(*column, format!("unknown identifier `{name}`")))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div { num, den, column } => {
                let d = den.eval(env)?;
                if d.is_zero() {
                    return Err(ParseError::semantic(*column, "division by zero"));
                }
                num.eval(env)? / d
            }
            Expr::Pow { base, exp, column } => {
                let b = base.eval(env)?;
                if b.is_zero() && *exp < 0 {
                    return Err(ParseError::semantic(*column, "negative power of zero"));
                }
                b.pow(*exp)
            }
        })
    }

    /// Evaluation with only `z` and `i` in scope.
    pub fn eval_closed(&self) -> Result<RationalFunction, ParseError> {
        self.eval(&|_| None)
    }
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn column(&self) -> usize {
        self.toks[self.pos].column
    }

    pub(crate) fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::syntax(self.column(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    pub(crate) fn expect(&mut self, tok: Tok, wanted: &str) -> Result<usize, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().column)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let column = self.bump().column;
                    acc = Expr::Div { num: Box::new(acc), den: Box::new(self.unary()?), column };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let column = self.bump().column;
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let exp_column = self.column();
        let Tok::Int(n) = self.peek().clone() else {
            return Err(self.unexpected("an integer exponent"));
        };
        self.bump();
        let magnitude = n
            .to_i64()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::syntax(exp_column, format!("exponent larger than {MAX_EXPONENT}")))?;
        let exp = if negative { -magnitude } else { magnitude };
        Ok(Expr::Pow { base: Box::new(base), exp, column })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(match name.as_str() {
                    "z" => Expr::Var,
                    "i" => Expr::I,
                    _ => Expr::Ident { name, column },
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, `z`, `i`, a name or `(`")),
        }
    }

    /// `inf` or a constant expression with value in `Q(i)`.
    pub(crate) fn point(&mut self) -> Result<CurvePoint, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "inf") {
            self.bump();
            return Ok(CurvePoint::Infinity);
        }
        let column = self.column();
        let value = self.expr()?.eval_closed()?;
        value
            .as_constant()
            .map(CurvePoint::Finite)
            .ok_or_else(|| ParseError::semantic(column, "a point must be a constant or `inf`"))
    }

    /// `['-'] INT ['/' INT]`.
    pub(crate) fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let Tok::Int(n) = self.peek().clone() else {
            return Err(self.unexpected("a rational number"));
        };
        self.bump();
        let mut d = BigInt::from(1);
        if *self.peek() == Tok::Slash {
            let column = self.bump().column;
            let Tok::Int(den) = self.peek().clone() else {
                return Err(self.unexpected("a denominator"));
            };
            if den.is_zero() {
                return Err(ParseError::semantic(column, "zero denominator"));
            }
            self.bump();
            d = den;
        }
        let r = Rational::new(n, d);
        Ok(if negative { -r } else { r })
    }
}

/// Parses a complete expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses a point literal such as `1/2 - 7/3*i` or `inf`.
pub fn parse_point(src: &str) -> Result<CurvePoint, ParseError> {
    let mut p = Parser::new(src)?;
    let point = p.point()?;
    p.expect_end()?;
    Ok(point)
}

/// Parses a rational literal such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let mut p = Parser::new(src)?;
    let r = p.rational()?;
    p.expect_end()?;
    Ok(r)
}

use super::expr::Parser;
use super::lexer::Tok;
use super::ParseError;
use crate::curve::{CurvePoint, RealCurve};
use crate::divisor::QDivisor;
use crate::error::Error;
use crate::pair::DpdPair;
use crate::{Rational, RationalFunction};

/// A parsed pair document. Parsing checks syntax, the curve invariants and
/// that the divisor lives on the curve; the DPD-pair conditions themselves
/// are checked by [`PairDocument::pair`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairDocument {
    pub source: String,
    pub curve: RealCurve,
    pub d: QDivisor,
    pub h: RationalFunction,
    /// 1-based line of each key, in the order `curve`, `D`, `h` (0 when absent).
    pub lines: [usize; 3],
}

impl PairDocument {
    pub fn pair(&self) -> Result<DpdPair, Error> {
        DpdPair::new(self.curve.clone(), self.d.clone(), self.h.clone())
    }
}

/// A divisor with the column of each term's point, for diagnostics.
fn parse_divisor(src: &str) -> Result<(QDivisor, Vec<(CurvePoint, usize)>), ParseError> {
    let mut p = Parser::new(src)?;
    if matches!(p.peek(), Tok::Int(n) if n == &0.into()) {
        p.bump();
        p.expect_end()?;
        return Ok((QDivisor::zero(), Vec::new()));
    }
    let mut terms = Vec::new();
    let mut columns = Vec::new();
    let mut first = true;
    loop {
        let mut negative = false;
        match p.peek() {
            Tok::Minus => {
                p.bump();
                negative = true;
            }
            Tok::Plus if !first => {
                p.bump();
            }
            _ if !first => return Err(p.unexpected("`+`, `-` or end of input")),
            _ => {}
        }
        if !first && *p.peek() == Tok::Minus {
            return Err(p.unexpected("a divisor term"));
        }
        let coefficient = if *p.peek() == Tok::LBracket {
            Rational::from_integer(1.into())
        } else {
            let c = p.rational()?;
            p.expect(Tok::Star, "`*`")?;
            c
        };
        p.expect(Tok::LBracket, "`[`")?;
        let column = p.column();
        let point = p.point()?;
        p.expect(Tok::RBracket, "`]`")?;
        terms.push((point.clone(), if negative { -coefficient } else { coefficient }));
        columns.push((point, column));
        first = false;
        if *p.peek() == Tok::End {
            break;
        }
    }
    Ok((QDivisor::new(terms), columns))
}

/// `P1 minus [p, q, ...]`.
fn parse_curve(src: &str) -> Result<RealCurve, ParseError> {
    let mut p = Parser::new(src)?;
    let keyword = |p: &mut Parser, word: &str| -> Result<(), ParseError> {
        if matches!(p.peek(), Tok::Ident(s) if s == word) {
            p.bump();
            Ok(())
        } else {
            Err(p.unexpected(&format!("`{word}`")))
        }
    };
    keyword(&mut p, "P1")?;
    keyword(&mut p, "minus")?;
    let open = p.expect(Tok::LBracket, "`[`")?;
    let mut points = vec![p.point()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        points.push(p.point()?);
    }
    p.expect(Tok::RBracket, "`]`")?;
    p.expect_end()?;
    RealCurve::new(points).map_err(|e| ParseError::semantic(open, e.to_string()))
}

/// Parses a pair document: `key: value` lines for `curve`, `D` and `h` in any
/// order, `#` comments and blank lines ignored. `D` defaults to `0`.
pub fn parse_pair(text: &str) -> Result<PairDocument, ParseError> {
    let mut fields: [Option<(usize, usize, String)>; 3] = [None, None, None];
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let column = content.chars().take_while(|c| c.is_whitespace()).count() + 1;
            return Err(ParseError::syntax(column, "expected `key: value`").relocate(line, 0));
        };
        let key = content[..colon].trim();
        let slot = match key {
            "curve" => 0,
            "D" => 1,
            "h" => 2,
            _ => {
                let column = content.chars().take_while(|c| c.is_whitespace()).count() + 1;
                return Err(ParseError::syntax(column, format!("unknown key `{key}`")).relocate(line, 0));
            }
        };
        if fields[slot].is_some() {
            return Err(ParseError::semantic(1, format!("duplicate key `{key}`")).relocate(line, 0));
        }
        let offset = content[..=colon].chars().count();
        fields[slot] = Some((line, offset, content[colon + 1..].to_string()));
    }

    let missing = |key: &str| ParseError::semantic(1, format!("missing key `{key}`")).relocate(1, 0);
    let (curve_line, curve_offset, curve_src) = fields[0].clone().ok_or_else(|| missing("curve"))?;
    let (h_line, h_offset, h_src) = fields[2].clone().ok_or_else(|| missing("h"))?;

    let curve = parse_curve(&curve_src).map_err(|e| e.relocate(curve_line, curve_offset))?;
    let h = super::parse_expr(&h_src)
        .and_then(|e| e.eval_closed())
        .map_err(|e| e.relocate(h_line, h_offset))?;
    let (d, d_line) = match &fields[1] {
        None => (QDivisor::zero(), 0),
        Some((line, offset, src)) => {
            let (d, columns) = parse_divisor(src).map_err(|e| e.relocate(*line, *offset))?;
            if let Some((p, column)) = columns.iter().find(|(p, _)| !curve.contains(p)) {
                return Err(ParseError::semantic(*column, format!("support point {p} is removed from the curve"))
                    .relocate(*line, *offset));
            }
            (d, *line)
        }
    };
    Ok(PairDocument { source: text.to_string(), curve, d, h, lines: [curve_line, d_line, h_line] })
}

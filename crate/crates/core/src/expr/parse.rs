//! Tokenizer and recursive-descent parser for scalar and form expressions.
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := atom ('**' integer)? | '-' factor
//! atom    := number | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! A rational literal `p/q` must be written without spaces; `p / q` is a
//! division node with the same value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Expr, Func, Literal, ScalarField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(Literal),
    Ident(String),
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

fn advance(n: usize, i: &mut usize, col: &mut usize) {
    *i += n;
    *col += n;
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line: tl, col: tc });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '*' {
            if chars.get(i + 1) == Some(&'*') {
                out.push(Token { tok: Tok::StarStar, line: tl, col: tc });
                advance(2, &mut i, &mut col);
            } else {
                out.push(Token { tok: Tok::Star, line: tl, col: tc });
                advance(1, &mut i, &mut col);
            }
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut is_float = false;
            if j < chars.len() && chars[j] == '.' {
                is_float = true;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    is_float = true;
                    j = k;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
            }
            let text: String = chars[start..j].iter().collect();
            let lit = if is_float {
                let v: f64 = text
                    .parse()
                    .map_err(|_| syntax(tl, tc, format!("malformed number `{text}`")))?;
                Literal::Float(v)
            } else {
                let numer: BigInt = text.parse().expect("digits");
                // p/q written without spaces is a single rational literal
                if chars.get(j) == Some(&'/') && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                    let mut k = j + 1;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    let den_text: String = chars[j + 1..k].iter().collect();
                    let denom: BigInt = den_text.parse().expect("digits");
                    if denom.is_zero() {
                        return Err(syntax(tl, tc, "zero denominator in rational literal"));
                    }
                    j = k;
                    Literal::Rational(BigRational::new(numer, denom))
                } else {
                    Literal::Rational(BigRational::from_integer(numer))
                }
            };
            out.push(Token { tok: Tok::Num(lit), line: tl, col: tc });
            advance(j - i, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let name: String = chars[i..j].iter().collect();
            out.push(Token { tok: Tok::Ident(name), line: tl, col: tc });
            advance(j - i, &mut i, &mut col);
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    pub dim: usize,
}

/// How an identifier resolves in dimension `dim`.
pub(crate) enum Name {
    Var(usize),
    Func(Func),
    Differential(usize),
}

impl Parser {
    pub fn new(text: &str, dim: usize) -> Result<Parser> {
        if text.trim().is_empty() {
            return Err(syntax(1, 1, "empty expression"));
        }
        Ok(Parser { tokens: tokenize(text)?, pos: 0, dim })
    }

    pub fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.col)
    }

    pub fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    pub fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", describe(self.peek()))))
        }
    }

    fn variable_index(&self, name: &str, line: usize, col: usize) -> Result<Option<usize>> {
        let alias = match name {
            "x" => Some(1),
            "y" => Some(2),
            "z" => Some(3),
            _ => None,
        };
        let index = match alias {
            Some(i) => {
                if self.dim > 3 {
                    return Err(Error::UnknownIdentifier { name: name.into(), line, col });
                }
                i
            }
            None => match name.strip_prefix('x') {
                Some(digits) if !digits.is_empty() && digits.chars().all(|d| d.is_ascii_digit()) => {
                    match digits.parse::<usize>() {
                        Ok(i) if i >= 1 => i,
                        _ => return Err(Error::UnknownIdentifier { name: name.into(), line, col }),
                    }
                }
                _ => return Ok(None),
            },
        };
        if index > self.dim {
            return Err(Error::VariableOutOfRange { index, dim: self.dim, line, col });
        }
        Ok(Some(index - 1))
    }

    /// Resolves an identifier token at the current position without consuming it.
    pub fn resolve(&self, name: &str) -> Result<Name> {
        let (line, col) = self.here();
        if let Some(f) = Func::from_name(name) {
            return Ok(Name::Func(f));
        }
        if let Some(i) = self.variable_index(name, line, col)? {
            return Ok(Name::Var(i));
        }
        if let Some(rest) = name.strip_prefix('d') {
            match self.variable_index(rest, line, col) {
                Ok(Some(i)) => return Ok(Name::Differential(i)),
                Err(e @ Error::VariableOutOfRange { .. }) => return Err(e),
                _ => {}
            }
        }
        Err(Error::UnknownIdentifier { name: name.into(), line, col })
    }

    /// Whether the current token is a differential `dx`, `dx3`, ...
    pub fn at_differential(&self) -> bool {
        self.differential_at(0)
    }

    pub fn differential_at(&self, offset: usize) -> bool {
        match self.peek_at(offset) {
            Tok::Ident(name) => matches!(self.resolve(name), Ok(Name::Differential(_))),
            _ => false,
        }
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    pub fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::StarStar {
            self.bump();
            let exp = match self.peek().clone() {
                Tok::Num(Literal::Rational(r)) if r.is_integer() => r
                    .to_integer()
                    .to_u32()
                    .ok_or_else(|| self.error("exponent out of range"))?,
                other => {
                    return Err(self.error(format!(
                        "expected nonnegative integer exponent, found {}",
                        describe(&other)
                    )))
                }
            };
            self.bump();
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(lit) => {
                self.bump();
                Ok(Expr::Lit(lit))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match self.resolve(&name)? {
                Name::Var(i) => {
                    self.bump();
                    Ok(Expr::Var(i))
                }
                Name::Func(f) => {
                    self.bump();
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Call(f, Box::new(arg)))
                }
                Name::Differential(_) => {
                    Err(self.error(format!("differential `{name}` is not allowed in a scalar expression")))
                }
            },
            other => Err(self.error(format!("expected an operand, found {}", describe(&other)))),
        }
    }
}

pub(crate) fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(_) => "number".into(),
        Tok::Ident(n) => format!("`{n}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::StarStar => "`**`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a scalar field over `x1..x{dim}` (aliases `x, y, z` when `dim <= 3`).
pub fn parse_scalar(text: &str, dim: usize) -> Result<ScalarField> {
    let mut p = Parser::new(text, dim)?;
    let expr = p.expr()?;
    p.expect_eof()?;
    ScalarField::new(dim, expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Box<Expr> {
        Box::new(Expr::Var(i))
    }

    #[test]
    fn grammar_exercise() {
        let f = parse_scalar("x**2*y + sin(z)", 3).unwrap();
        let expected = Expr::Add(
            Box::new(Expr::Mul(Box::new(Expr::Pow(v(0), 2)), v(1))),
            Box::new(Expr::Call(Func::Sin, v(2))),
        );
        assert_eq!(*f.expr(), expected);
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_scalar("x**2*y+sin( z )", 3).unwrap();
        let b = parse_scalar("  x ** 2 * y\n + sin(z)", 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_scalar("q + 1", 3).unwrap_err();
        assert!(matches!(err, Error::UnknownIdentifier { ref name, line: 1, col: 1 } if name == "q"));
    }

    #[test]
    fn variable_beyond_dimension() {
        let err = parse_scalar("x4", 3).unwrap_err();
        assert!(matches!(err, Error::VariableOutOfRange { index: 4, dim: 3, .. }));
        assert!(matches!(parse_scalar("z", 2), Err(Error::VariableOutOfRange { index: 3, .. })));
    }

    #[test]
    fn aliases_only_up_to_three_dimensions() {
        assert!(parse_scalar("x1*x4", 4).is_ok());
        assert!(matches!(parse_scalar("x", 4), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_scalar("x +\n  * y", 3).unwrap_err();
        assert_eq!(err, Error::Syntax { line: 2, col: 3, msg: "expected an operand, found `*`".into() });
        assert!(parse_scalar("", 3).is_err());
        assert!(parse_scalar("sin x", 3).is_err());
        assert!(parse_scalar("(x", 3).is_err());
        assert!(parse_scalar("x**y", 3).is_err());
        assert!(parse_scalar("x y", 3).is_err());
        assert!(parse_scalar("1/0", 3).is_err());
        assert!(parse_scalar("dx", 3).is_err());
    }

    #[test]
    fn rational_and_float_literals() {
        let f = parse_scalar("3/4*x", 1).unwrap();
        match f.expr() {
            Expr::Mul(a, _) => assert_eq!(
                **a,
                Expr::Lit(Literal::Rational(BigRational::new(3.into(), 4.into())))
            ),
            other => panic!("unexpected {other:?}"),
        }
        let g = parse_scalar("3 / 4*x", 1).unwrap();
        assert!(matches!(g.expr(), Expr::Mul(a, _) if matches!(**a, Expr::Div(..))));
        let h = parse_scalar("2.5e-1 + 1e3", 1).unwrap();
        assert!(h.expr().has_float());
    }
}

//! The form-expression language.
//!
//! ```text
//! form    := term (("+" | "-") term)*
//! term    := product ("/\" product)*
//! product := unary ("*" unary)*
//! unary   := ("-" | "+") unary | power
//! power   := primary ("^" INT)?
//! primary := INT ("/" INT)? | x<i> | y<i> | dx<i> | dy<i> | "(" form ")"
//! ```
//!
//! `/\` is the wedge; `*` multiplies when at least one side is a function and
//! is rejected between two forms of positive degree. `^` raises functions to
//! integer powers. Sums must be homogeneous, except that zero adds to
//! anything. The printer is `Form`'s `Display`, and `parse_form` inverts it.

use num_bigint::BigInt;

use symflat::forms::{Form, FormIndex};
use symflat::scalars::{Poly, Rational};
use symflat::{Error, Result};

/// Line and column, both starting at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Parsed expression, before the chart dimension is known.
#[derive(Clone, Debug, PartialEq)]
pub enum FormExpr {
    Number(Rational),
    Coordinate { axis: Axis, index: usize, pos: Pos },
    Basis { axis: Axis, index: usize, pos: Pos },
    Neg(Box<FormExpr>),
    Add(Box<FormExpr>, Box<FormExpr>, Pos),
    Sub(Box<FormExpr>, Box<FormExpr>, Pos),
    Mul(Box<FormExpr>, Box<FormExpr>, Pos),
    Wedge(Box<FormExpr>, Box<FormExpr>, Pos),
    Pow(Box<FormExpr>, u32, Pos),
}

fn error(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Coord(Axis, usize),
    Diff(Axis, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Wedge,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number {v}"),
        Tok::Coord(Axis::X, i) => format!("x{i}"),
        Tok::Coord(Axis::Y, i) => format!("y{i}"),
        Tok::Diff(Axis::X, i) => format!("dx{i}"),
        Tok::Diff(Axis::Y, i) => format!("dy{i}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Wedge => "'/\\'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let digits = |start: usize| {
        let mut end = start;
        while end < chars.len() && chars[end].is_ascii_digit() {
            end += 1;
        }
        end
    };
    while i < chars.len() {
        let pos = Pos { line, column: col };
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (tok, len) = match c {
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '^' => (Tok::Caret, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '/' if chars.get(i + 1) == Some(&'\\') => (Tok::Wedge, 2),
            '/' => (Tok::Slash, 1),
            '0'..='9' => {
                let end = digits(i);
                let text: String = chars[i..end].iter().collect();
                (Tok::Int(text.parse().expect("digits")), end - i)
            }
            'x' | 'y' | 'd' => {
                let (axis_at, diff) = if c == 'd' { (i + 1, true) } else { (i, false) };
                let axis = match chars.get(axis_at) {
                    Some('x') => Axis::X,
                    Some('y') => Axis::Y,
                    _ => return Err(error(pos, "expected dx<i> or dy<i>")),
                };
                let end = digits(axis_at + 1);
                if end == axis_at + 1 {
                    return Err(error(pos, "coordinate name needs an index, e.g. x1 or dy2"));
                }
                let text: String = chars[axis_at + 1..end].iter().collect();
                let index: usize = text.parse().map_err(|_| error(pos, "coordinate index too large"))?;
                let tok = if diff { Tok::Diff(axis, index) } else { Tok::Coord(axis, index) };
                (tok, end - i)
            }
            other => return Err(error(pos, format!("unexpected character '{other}'"))),
        };
        out.push((tok, pos));
        i += len;
        col += len;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn form(&mut self) -> Result<FormExpr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = FormExpr::Add(Box::new(lhs), Box::new(self.term()?), pos);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = FormExpr::Sub(Box::new(lhs), Box::new(self.term()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<FormExpr> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Wedge {
            let (_, pos) = self.bump();
            lhs = FormExpr::Wedge(Box::new(lhs), Box::new(self.product()?), pos);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<FormExpr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            let (_, pos) = self.bump();
            lhs = FormExpr::Mul(Box::new(lhs), Box::new(self.unary()?), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FormExpr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(FormExpr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FormExpr> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, pos) = self.bump();
        match self.bump() {
            (Tok::Int(e), epos) => {
                let e: u32 = e.try_into().map_err(|_| error(epos, "exponent too large"))?;
                Ok(FormExpr::Pow(Box::new(base), e, pos))
            }
            (t, epos) => Err(error(epos, format!("expected an integer exponent, found {}", describe(&t)))),
        }
    }

    fn primary(&mut self) -> Result<FormExpr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(num) => {
                if *self.peek() != Tok::Slash {
                    return Ok(FormExpr::Number(Rational::from_integer(num)));
                }
                self.bump();
                match self.bump() {
                    (Tok::Int(den), dpos) => {
                        if den == BigInt::from(0) {
                            return Err(error(dpos, "division by zero"));
                        }
                        Ok(FormExpr::Number(Rational::new(num, den)))
                    }
                    (t, dpos) => Err(error(dpos, format!("expected a denominator, found {}", describe(&t)))),
                }
            }
            Tok::Coord(axis, index) => Ok(FormExpr::Coordinate { axis, index, pos }),
            Tok::Diff(axis, index) => Ok(FormExpr::Basis { axis, index, pos }),
            Tok::LParen => {
                let inner = self.form()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (t, p) => Err(error(p, format!("expected ')', found {}", describe(&t)))),
                }
            }
            t => Err(error(pos, format!("expected a number, coordinate, dx<i>, dy<i> or '(', found {}", describe(&t)))),
        }
    }
}

/// Parses without evaluating.
pub fn parse_expr(src: &str) -> Result<FormExpr> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.form()?;
    match p.bump() {
        (Tok::End, _) => Ok(e),
        (t, pos) => Err(error(pos, format!("unexpected {}", describe(&t)))),
    }
}

fn coordinate(n: usize, axis: Axis, index: usize, pos: Pos, prefix: &str) -> Result<usize> {
    if index == 0 || index > n {
        let name = if axis == Axis::X { "x" } else { "y" };
        return Err(error(pos, format!("{prefix}{name}{index} is out of range for n = {n}")));
    }
    Ok(match axis {
        Axis::X => index,
        Axis::Y => n + index,
    })
}

fn add(a: Form, b: Form, pos: Pos) -> Result<Form> {
    if b.is_zero() {
        return Ok(a);
    }
    if a.is_zero() {
        return Ok(b);
    }
    if a.degree() != b.degree() {
        return Err(error(pos, format!("cannot add forms of degree {} and {}", a.degree(), b.degree())));
    }
    a.checked_add(&b)
}

impl FormExpr {
    /// Evaluates on a chart of dimension `2n`.
    pub fn evaluate(&self, n: usize) -> Result<Form> {
        match self {
            FormExpr::Number(q) => Ok(Form::constant(n, q.clone())),
            FormExpr::Coordinate { axis, index, pos } => {
                let c = coordinate(n, *axis, *index, *pos, "")?;
                Ok(Form::function(Poly::coordinate(n, c)?))
            }
            FormExpr::Basis { axis, index, pos } => {
                let c = coordinate(n, *axis, *index, *pos, "d")?;
                Form::basis(n, &[c])
            }
            FormExpr::Neg(e) => Ok(e.evaluate(n)?.neg()),
            FormExpr::Add(a, b, pos) => add(a.evaluate(n)?, b.evaluate(n)?, *pos),
            FormExpr::Sub(a, b, pos) => add(a.evaluate(n)?, b.evaluate(n)?.neg(), *pos),
            FormExpr::Mul(a, b, pos) => {
                let (a, b) = (a.evaluate(n)?, b.evaluate(n)?);
                if a.degree() > 0 && b.degree() > 0 && !a.is_zero() && !b.is_zero() {
                    return Err(error(*pos, "'*' needs a function on one side; use /\\ to wedge forms"));
                }
                a.wedge(&b)
            }
            FormExpr::Wedge(a, b, _) => a.evaluate(n)?.wedge(&b.evaluate(n)?),
            FormExpr::Pow(base, e, pos) => {
                let b = base.evaluate(n)?;
                if b.is_zero() {
                    return Ok(if *e == 0 { Form::one(n) } else { b });
                }
                if b.degree() != 0 {
                    return Err(error(*pos, "'^' applies to functions only; use /\\ to wedge forms"));
                }
                Ok(Form::function(b.coefficient(FormIndex::EMPTY).pow(*e)))
            }
        }
    }
}

/// Parses and evaluates a form on a chart of dimension `2n`. The zero form
/// comes back with degree 0.
pub fn parse_form(src: &str, n: usize) -> Result<Form> {
    parse_expr(src)?.evaluate(n)
}

/// Parses a form expected to have `degree` (zero is accepted at any degree).
pub fn parse_form_of_degree(src: &str, n: usize, degree: i32) -> Result<Form> {
    parse_form(src, n)?.with_degree(degree)
}

pub fn print_form(f: &Form) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use symflat::scalars::{int, rat};

    #[test]
    fn spec_examples() {
        assert_eq!(parse_form("dx1/\\dy1 + dx2/\\dy2", 2).unwrap(), Form::omega(2));
        assert_eq!(parse_form("x1*dy1 + x2*dy2", 2).unwrap(), Form::lambda_standard(2));
        let expected = Form::dx(2, 1)
            .wedge(&Form::dx(2, 2))
            .unwrap()
            .mul_poly(&Poly::x(2, 1).pow(2).scale(&rat(3, 2)));
        assert_eq!(parse_form("(3/2*x1^2)*dx1/\\dx2", 2).unwrap(), expected);
    }

    #[test]
    fn precedence_and_signs() {
        let n = 1;
        let f = parse_form("-x1*dy1 - 2*(x1 + y1)^2*dx1/\\dy1 + 0", n).unwrap_err();
        assert!(matches!(f, Error::Parse { .. }));
        let f = parse_form("-x1*y1^2*dy1 + 1/2*dx1", n).unwrap();
        assert_eq!(f.coefficient(FormIndex::new(n, &[1]).unwrap()), Poly::constant(n, rat(1, 2)));
        let g = parse_form("(x1 + y1)^2", n).unwrap();
        assert_eq!(g.coefficient(FormIndex::EMPTY), (&Poly::x(n, 1) + &Poly::y(n, 1)).pow(2));
        assert_eq!(parse_form("dy1/\\dx1", n).unwrap(), Form::omega(n).neg());
        assert_eq!(parse_form("0", n).unwrap(), Form::zero(n, 0));
        assert_eq!(parse_form("7", n).unwrap(), Form::constant(n, int(7)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_form("dx1 +\n  dx3", 2).unwrap_err() {
            Error::Parse { line, column, message } => {
                assert_eq!((line, column), (2, 3));
                assert!(message.contains("dx3"), "{message}");
            }
            e => panic!("{e}"),
        }
        match parse_form("dx1 * dy1", 2).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (1, 5)),
            e => panic!("{e}"),
        }
        assert!(parse_form("x1 + dx1", 1).is_err());
        assert!(parse_form("(dx1", 1).is_err());
        assert!(parse_form("3/0", 1).is_err());
        assert!(parse_form("dz1", 1).is_err());
        assert!(parse_form("x", 1).is_err());
        assert!(parse_form("dx1 dy1", 1).is_err());
    }

    #[test]
    fn printer_round_trip_examples() {
        for src in ["3/2*x1^2*dx1/\\dy2 - dx2/\\dy2", "-y2", "x1*y1*dx1 + 1/3*dy2", "0"] {
            let f = parse_form(src, 2).unwrap();
            assert_eq!(parse_form(&print_form(&f), 2).unwrap(), f, "{src}");
        }
    }
}

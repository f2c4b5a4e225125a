//! A small expression language for defining fields on the command
//! line.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)? | '-' factor
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers are the variables `x`, `y`, `s`, the binary functions
//! `min`, `max`, and the unary functions `abs`, `exp`. Exponents are
//! nonnegative integer literals, so `-x^2` parses as `-(x^2)`. Parse
//! and evaluation errors carry byte offsets into the source string.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::{Axis, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    S,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::S => "s",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Min,
    Max,
    Abs,
    Exp,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Min => "min",
            Func::Max => "max",
            Func::Abs => "abs",
            Func::Exp => "exp",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            Func::Abs | Func::Exp => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power with a literal nonnegative exponent.
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
}

/// Parse failure with the byte span of the offending source text.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub span: (usize, usize),
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedToken { expected: Vec<&'static str>, found: String },
    UnknownIdentifier(String),
    Arity { name: &'static str, expected: usize, got: usize },
    BadExponent,
    BadNumber,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let (lo, hi) = self.span;
        match &self.kind {
            ParseErrorKind::UnexpectedToken { expected, found } => {
                write!(f, "syntax error at byte {lo}: found {found}, expected ")?;
                for (i, e) in expected.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier '{name}' at bytes {lo}-{hi}")
            }
            ParseErrorKind::Arity { name, expected, got } => {
                write!(f, "{name} expects {expected} argument(s), got {got} (bytes {lo}-{hi})")
            }
            ParseErrorKind::BadExponent => {
                write!(f, "exponent at bytes {lo}-{hi} must be a nonnegative integer literal")
            }
            ParseErrorKind::BadNumber => write!(f, "malformed number at bytes {lo}-{hi}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

/// Evaluation failure; `eval_on_grid` wraps it with the node index.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    Unbound(Var),
    DivisionByZero,
    /// Overflow or another non-finite intermediate result.
    NonFinite,
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::Unbound(v) => write!(f, "variable '{}' is not bound", v.name()),
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::NonFinite => write!(f, "evaluation produced a non-finite value"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

/// Values for the variables an expression may reference.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bindings {
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub s: Option<f64>,
}

impl Bindings {
    fn get(&self, v: Var) -> Option<f64> {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
            Var::S => self.s,
        }
    }

    fn set(&mut self, v: Var, value: f64) {
        match v {
            Var::X => self.x = Some(value),
            Var::Y => self.y = Some(value),
            Var::S => self.s = Some(value),
        }
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    /// Raw digits only, usable as an integer exponent.
    Int(u32),
    Ident(&'static str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Int(v) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".to_string(),
            Tok::Minus => "'-'".to_string(),
            Tok::Star => "'*'".to_string(),
            Tok::Slash => "'/'".to_string(),
            Tok::Caret => "'^'".to_string(),
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, (usize, usize))>, ParseError> {
        let mut lex = Lexer { src, pos: 0 };
        let bytes = src.as_bytes();
        let mut out = Vec::new();
        loop {
            while lex.pos < bytes.len() && bytes[lex.pos].is_ascii_whitespace() {
                lex.pos += 1;
            }
            if lex.pos >= bytes.len() {
                out.push((Tok::Eof, (lex.pos, lex.pos)));
                return Ok(out);
            }
            let start = lex.pos;
            let tok = match bytes[lex.pos] {
                b'+' => {
                    lex.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lex.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lex.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lex.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lex.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lex.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lex.pos += 1;
                    Tok::RParen
                }
                b',' => {
                    lex.pos += 1;
                    Tok::Comma
                }
                b'0'..=b'9' | b'.' => lex.number(start)?,
                c if c.is_ascii_alphabetic() => lex.ident(start)?,
                c => {
                    return Err(ParseError {
                        span: (start, start + 1),
                        kind: ParseErrorKind::UnexpectedToken {
                            expected: vec!["a token"],
                            found: format!("'{}'", c as char),
                        },
                    })
                }
            };
            out.push((tok, (start, lex.pos)));
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        let bytes = self.src.as_bytes();
        let mut integral = true;
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            integral = false;
            self.pos += 1;
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            integral = false;
            self.pos += 1;
            if self.pos < bytes.len() && (bytes[self.pos] == b'+' || bytes[self.pos] == b'-') {
                self.pos += 1;
            }
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let text = &self.src[start..self.pos];
        if integral {
            if let Ok(v) = text.parse::<u32>() {
                return Ok(Tok::Int(v));
            }
        }
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Tok::Num(v)),
            _ => Err(ParseError {
                span: (start, self.pos),
                kind: ParseErrorKind::BadNumber,
            }),
        }
    }

    fn ident(&mut self, start: usize) -> Result<Tok, ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        match &self.src[start..self.pos] {
            "x" => Ok(Tok::Ident("x")),
            "y" => Ok(Tok::Ident("y")),
            "s" => Ok(Tok::Ident("s")),
            "min" => Ok(Tok::Ident("min")),
            "max" => Ok(Tok::Ident("max")),
            "abs" => Ok(Tok::Ident("abs")),
            "exp" => Ok(Tok::Ident("exp")),
            other => Err(ParseError {
                span: (start, self.pos),
                kind: ParseErrorKind::UnknownIdentifier(other.to_string()),
            }),
        }
    }
}

// --------------------------------------------------------------- parser

struct Parser {
    toks: Vec<(Tok, (usize, usize))>,
    pos: usize,
}

/// Parses a source string into an [`Expr`].
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        other => Err(ParseError {
            span: p.span(),
            kind: ParseErrorKind::UnexpectedToken {
                expected: vec!["'+'", "'-'", "'*'", "'/'", "end of input"],
                found: other.describe(),
            },
        }),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> (usize, usize) {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let atom = self.atom()?;
        if matches!(self.peek(), Tok::Caret) {
            self.bump();
            let span = self.span();
            match self.bump() {
                Tok::Int(k) => Ok(Expr::Pow(Box::new(atom), k)),
                _ => Err(ParseError { span, kind: ParseErrorKind::BadExponent }),
            }
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Int(v) => Ok(Expr::Num(v as f64)),
            Tok::Ident("x") => Ok(Expr::Var(Var::X)),
            Tok::Ident("y") => Ok(Expr::Var(Var::Y)),
            Tok::Ident("s") => Ok(Expr::Var(Var::S)),
            Tok::Ident(name) => {
                let func = match name {
                    "min" => Func::Min,
                    "max" => Func::Max,
                    "abs" => Func::Abs,
                    _ => Func::Exp,
                };
                self.expect(Tok::LParen, &["'('"])?;
                let mut args = vec![self.expr()?];
                while matches!(self.peek(), Tok::Comma) {
                    self.bump();
                    args.push(self.expr()?);
                }
                let close = self.span();
                self.expect(Tok::RParen, &["')'", "','"])?;
                if args.len() != func.arity() {
                    return Err(ParseError {
                        span: (span.0, close.1),
                        kind: ParseErrorKind::Arity {
                            name: func.name(),
                            expected: func.arity(),
                            got: args.len(),
                        },
                    });
                }
                Ok(Expr::Call(func, args))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(inner)
            }
            other => Err(ParseError {
                span,
                kind: ParseErrorKind::UnexpectedToken {
                    expected: vec!["number", "identifier", "'('", "'-'"],
                    found: other.describe(),
                },
            }),
        }
    }

    fn expect(&mut self, want: Tok, expected: &[&'static str]) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError {
                span: self.span(),
                kind: ParseErrorKind::UnexpectedToken {
                    expected: expected.to_vec(),
                    found: self.peek().describe(),
                },
            })
        }
    }
}

// ----------------------------------------------------------- evaluation

/// Evaluates `e` under the given bindings. Any non-finite intermediate
/// value is reported as an error rather than propagated.
pub fn eval(e: &Expr, bindings: &Bindings) -> Result<f64, EvalError> {
    let v = match e {
        Expr::Num(v) => *v,
        Expr::Var(var) => bindings.get(*var).ok_or(EvalError::Unbound(*var))?,
        Expr::Neg(inner) => -eval(inner, bindings)?,
        Expr::Bin(op, a, b) => {
            let a = eval(a, bindings)?;
            let b = eval(b, bindings)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    a / b
                }
            }
        }
        Expr::Pow(base, k) => {
            // Repeated squaring keeps integer powers exact for dyadic bases.
            let mut acc = 1.0f64;
            let mut base = eval(base, bindings)?;
            let mut k = *k;
            while k > 0 {
                if k & 1 == 1 {
                    acc *= base;
                }
                base *= base;
                k >>= 1;
            }
            acc
        }
        Expr::Call(func, args) => {
            let a = eval(&args[0], bindings)?;
            match func {
                Func::Min => a.min(eval(&args[1], bindings)?),
                Func::Max => a.max(eval(&args[1], bindings)?),
                Func::Abs => a.abs(),
                Func::Exp => libm::exp(a),
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

/// The set of variables an expression reads.
pub fn free_vars(e: &Expr) -> Vec<Var> {
    fn walk(e: &Expr, seen: &mut [bool; 3]) {
        match e {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                seen[match v {
                    Var::X => 0,
                    Var::Y => 1,
                    Var::S => 2,
                }] = true
            }
            Expr::Neg(a) => walk(a, seen),
            Expr::Bin(_, a, b) => {
                walk(a, seen);
                walk(b, seen);
            }
            Expr::Pow(a, _) => walk(a, seen),
            Expr::Call(_, args) => args.iter().for_each(|a| walk(a, seen)),
        }
    }
    let mut seen = [false; 3];
    walk(e, &mut seen);
    let mut out = Vec::new();
    for (i, var) in [Var::X, Var::Y, Var::S].iter().enumerate() {
        if seen[i] {
            out.push(*var);
        }
    }
    out
}

/// Evaluation failure at a specific grid node.
#[derive(Debug, Clone, PartialEq)]
pub enum GridEvalError {
    /// A free variable is neither an axis variable nor bound.
    Unbound(Var),
    /// Evaluation failed at the node with this flat index.
    At { index: usize, error: EvalError },
    Field(Error),
}

impl core::fmt::Display for GridEvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GridEvalError::Unbound(v) => {
                write!(f, "variable '{}' is neither an axis variable nor bound", v.name())
            }
            GridEvalError::At { index, error } => {
                write!(f, "at node {index}: {error}")
            }
            GridEvalError::Field(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GridEvalError {}

/// Samples `e` over the grid spanned by `axes`, with `vars[k]` bound to
/// the running coordinate of axis `k` and everything else taken from
/// `bindings`.
pub fn eval_on_grid(
    e: &Expr,
    axes: &[Axis],
    vars: &[Var],
    bindings: &Bindings,
) -> Result<ScalarField, GridEvalError> {
    assert!(!axes.is_empty() && axes.len() <= 2 && axes.len() == vars.len());
    for v in free_vars(e) {
        if !vars.contains(&v) && bindings.get(v).is_none() {
            return Err(GridEvalError::Unbound(v));
        }
    }
    let mut values = Vec::new();
    let mut b = *bindings;
    let mut index = 0usize;
    if axes.len() == 1 {
        for i in 0..axes[0].len() {
            b.set(vars[0], axes[0].node(i));
            values.push(eval(e, &b).map_err(|error| GridEvalError::At { index: i, error })?);
        }
    } else {
        for i in 0..axes[0].len() {
            b.set(vars[0], axes[0].node(i));
            for j in 0..axes[1].len() {
                b.set(vars[1], axes[1].node(j));
                values
                    .push(eval(e, &b).map_err(|error| GridEvalError::At { index, error })?);
                index += 1;
            }
        }
    }
    ScalarField::new(axes.to_vec(), values).map_err(GridEvalError::Field)
}

// -------------------------------------------------------- pretty print

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl core::fmt::Display for Expr {
    /// Prints with minimal parentheses; `parse(e.to_string())`
    /// reproduces the tree.
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        fn paren(
            f: &mut core::fmt::Formatter<'_>,
            e: &Expr,
            below: u8,
        ) -> core::fmt::Result {
            if e.precedence() < below {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(a) => {
                write!(f, "-")?;
                paren(f, a, 3)
            }
            Expr::Bin(op, a, b) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                paren(f, a, prec)?;
                write!(f, " {sym} ")?;
                paren(f, b, prec + 1)
            }
            Expr::Pow(base, k) => {
                paren(f, base, 5)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: f64) -> Bindings {
        Bindings { x: Some(x), ..Bindings::default() }
    }

    #[test]
    fn arithmetic_with_precedence() {
        let e = parse("1 + 2*x^2").unwrap();
        assert_eq!(eval(&e, &b(3.0)).unwrap(), 19.0);
    }

    #[test]
    fn unary_minus_binds_below_pow() {
        let e = parse("-x^2 + exp(-s)").unwrap();
        let v = eval(&e, &Bindings { x: Some(2.0), s: Some(0.0), ..Bindings::default() })
            .unwrap();
        assert_eq!(v, -3.0);
    }

    #[test]
    fn functions_and_nesting() {
        let e = parse("min(x, y^3)").unwrap();
        let v = eval(
            &e,
            &Bindings { x: Some(0.5), y: Some(2.0), ..Bindings::default() },
        )
        .unwrap();
        assert_eq!(v, 0.5);
        assert_eq!(eval(&parse("max(abs(x), 1/2)").unwrap(), &b(-0.25)).unwrap(), 0.5);
    }

    #[test]
    fn dangling_operator_reports_offset_and_expectations() {
        let err = parse("x +").unwrap_err();
        assert_eq!(err.span.0, 3);
        match err.kind {
            ParseErrorKind::UnexpectedToken { expected, .. } => {
                assert!(expected.contains(&"number"));
                assert!(expected.contains(&"identifier"));
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn arity_error_spans_the_whole_call() {
        let err = parse("min(x^2)").unwrap_err();
        assert_eq!(err.span, (0, 8));
        assert_eq!(
            err.kind,
            ParseErrorKind::Arity { name: "min", expected: 2, got: 1 }
        );
    }

    #[test]
    fn unknown_identifiers_are_rejected() {
        let err = parse("2 * z").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("z".to_string()));
        assert!(parse("foo(x)").is_err());
    }

    #[test]
    fn fractional_exponent_is_rejected() {
        let err = parse("x^2.5").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadExponent);
        assert!(parse("x^-1").is_err());
    }

    #[test]
    fn division_by_zero_is_reported_at_the_node() {
        let e = parse("x/(x - 1)").unwrap();
        assert_eq!(eval(&e, &b(1.0)), Err(EvalError::DivisionByZero));
        let axis = Axis::new(0.0, 2.0, 3).unwrap();
        let err = eval_on_grid(&e, &[axis], &[Var::X], &Bindings::default()).unwrap_err();
        assert_eq!(
            err,
            GridEvalError::At { index: 1, error: EvalError::DivisionByZero }
        );
    }

    #[test]
    fn overflow_is_an_error() {
        let e = parse("exp(x^2)").unwrap();
        assert_eq!(eval(&e, &b(100.0)), Err(EvalError::NonFinite));
    }

    #[test]
    fn unbound_variable_is_rejected_before_sampling() {
        let e = parse("x + s").unwrap();
        let axis = Axis::new(0.0, 1.0, 3).unwrap();
        assert_eq!(
            eval_on_grid(&e, &[axis], &[Var::X], &Bindings::default()),
            Err(GridEvalError::Unbound(Var::S))
        );
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "1 + 2*x^2",
            "-x^2 + exp(-s)",
            "min(x, y^3)",
            "(x + 1)*(x - 1)",
            "x/(x - 1)/2",
            "-(x + s)^4",
            "max(abs(x), 0.125)",
        ] {
            let e = parse(src).unwrap();
            let printed = alloc::string::ToString::to_string(&e);
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn integer_power_is_exact_for_dyadic_bases() {
        let e = parse("x^10").unwrap();
        assert_eq!(eval(&e, &b(0.5)).unwrap(), 0.0009765625);
        assert_eq!(eval(&parse("x^0").unwrap(), &b(0.0)).unwrap(), 1.0);
    }
}

//! A small arithmetic expression language for section heights and weight
//! functions on the base grid.
//!
//! Grammar (left associative, `^` binds tightest, exponent is a literal):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' number)?
//! base   := number | ident | '(' expr ')' | func '(' expr ')'
//! ```
//!
//! Identifiers are `y1 .. yk` (1-based base coordinates); functions are
//! `sin`, `cos`, `exp`, `abs`, `sqrt`, `tanh`. The Unicode minus sign
//! U+2212 is accepted as a synonym for `-`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { offset: usize, name: String },

    #[error("`{name}` at offset {offset} is not a function")]
    Arity { offset: usize, name: String },

    #[error("division by a value too close to zero ({0:e})")]
    DivisionByZero(f64),

    #[error("square root of negative value {0}")]
    SqrtOfNegative(f64),

    #[error("expression evaluated to a non-finite value in `{0}`")]
    NonFinite(&'static str),

    #[error("variable y{} is not available (base has {available} coordinates)", index + 1)]
    VariableOutOfRange { index: usize, available: usize },
}

pub type ExprResult<T> = std::result::Result<T, ExprError>;

/// Smallest divisor magnitude allowed during evaluation.
pub const DIVISION_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnaryFn {
    Sin,
    Cos,
    Exp,
    Abs,
    Sqrt,
    Tanh,
}

impl UnaryFn {
    fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "exp" => UnaryFn::Exp,
            "abs" => UnaryFn::Abs,
            "sqrt" => UnaryFn::Sqrt,
            "tanh" => UnaryFn::Tanh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Abs => "abs",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Tanh => "tanh",
        }
    }
}

/// Parsed expression tree. Variables are stored 0-based (`y1` -> 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExprAst {
    Number(f64),
    Var(usize),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, f64),
    Func(UnaryFn, Box<ExprAst>),
}

impl ExprAst {
    /// Highest variable index used, if any (0-based).
    pub fn max_var(&self) -> Option<usize> {
        match self {
            ExprAst::Number(_) => None,
            ExprAst::Var(i) => Some(*i),
            ExprAst::Binary(_, a, b) => a.max_var().into_iter().chain(b.max_var()).max(),
            ExprAst::Pow(a, _) => a.max_var(),
            ExprAst::Func(_, a) => a.max_var(),
        }
    }

    /// Fully parenthesized textual form; `parse_expression` round-trips it.
    pub fn print(&self) -> String {
        match self {
            ExprAst::Number(v) => format_number(*v),
            ExprAst::Var(i) => format!("y{}", i + 1),
            ExprAst::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                format!("({} {} {})", a.print(), sym, b.print())
            }
            ExprAst::Pow(a, e) => format!("({}^{})", a.print(), format_number(*e)),
            ExprAst::Func(f, a) => format!("{}({})", f.name(), a.print()),
        }
    }
}

fn format_number(v: f64) -> String {
    // `{}` on f64 is shortest round-trip; force a decimal point so the
    // token is unambiguous.
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains('E') {
        s
    } else {
        format!("{s}.0")
    }
}

pub fn parse_expression(src: &str) -> ExprResult<ExprAst> {
    let mut parser = Parser::new(src)?;
    let ast = parser.expr()?;
    match parser.peek() {
        None => Ok(ast),
        Some(tok) => Err(ExprError::Syntax {
            offset: tok.offset,
            message: format!("unexpected `{}`", tok.text),
        }),
    }
}

pub fn evaluate_expression(ast: &ExprAst, env: &[f64]) -> ExprResult<f64> {
    let v = eval(ast, env)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::NonFinite("expression result"))
    }
}

fn eval(ast: &ExprAst, env: &[f64]) -> ExprResult<f64> {
    let finite = |v: f64, what: &'static str| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFinite(what))
        }
    };
    match ast {
        ExprAst::Number(v) => Ok(*v),
        ExprAst::Var(i) => env.get(*i).copied().ok_or(ExprError::VariableOutOfRange {
            index: *i,
            available: env.len(),
        }),
        ExprAst::Binary(op, a, b) => {
            let x = eval(a, env)?;
            let y = eval(b, env)?;
            match op {
                BinOp::Add => finite(x + y, "addition"),
                BinOp::Sub => finite(x - y, "subtraction"),
                BinOp::Mul => finite(x * y, "multiplication"),
                BinOp::Div => {
                    if y.abs() < DIVISION_FLOOR {
                        Err(ExprError::DivisionByZero(y))
                    } else {
                        finite(x / y, "division")
                    }
                }
            }
        }
        ExprAst::Pow(a, e) => {
            let x = eval(a, env)?;
            finite(x.powf(*e), "power")
        }
        ExprAst::Func(f, a) => {
            let x = eval(a, env)?;
            match f {
                UnaryFn::Sin => Ok(x.sin()),
                UnaryFn::Cos => Ok(x.cos()),
                UnaryFn::Exp => finite(x.exp(), "exp"),
                UnaryFn::Abs => Ok(x.abs()),
                UnaryFn::Sqrt => {
                    if x < 0.0 {
                        Err(ExprError::SqrtOfNegative(x))
                    } else {
                        Ok(x.sqrt())
                    }
                }
                UnaryFn::Tanh => Ok(x.tanh()),
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    text: String,
    offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn new(src: &str) -> ExprResult<Parser> {
        Ok(Parser {
            tokens: tokenize(src)?,
            pos: 0,
            end_offset: src.len(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end_offset, |t| t.offset)
    }

    fn expr(&mut self) -> ExprResult<ExprAst> {
        let mut lhs = self.term()?;
        while let Some(tok) = self.peek() {
            let op = match tok.kind {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> ExprResult<ExprAst> {
        let mut lhs = self.factor()?;
        while let Some(tok) = self.peek() {
            let op = match tok.kind {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> ExprResult<ExprAst> {
        let base = self.base()?;
        if let Some(tok) = self.peek() {
            if tok.kind == TokenKind::Caret {
                self.bump();
                let offset = self.here();
                match self.bump() {
                    Some(Token {
                        kind: TokenKind::Number(v),
                        ..
                    }) => return Ok(ExprAst::Pow(Box::new(base), v)),
                    Some(tok) => {
                        return Err(ExprError::Syntax {
                            offset: tok.offset,
                            message: format!("expected numeric exponent, found `{}`", tok.text),
                        })
                    }
                    None => {
                        return Err(ExprError::Syntax {
                            offset,
                            message: "expected numeric exponent, found end of input".into(),
                        })
                    }
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> ExprResult<ExprAst> {
        let offset = self.here();
        let tok = self.bump().ok_or_else(|| ExprError::Syntax {
            offset,
            message: "expected number, identifier or `(`, found end of input".into(),
        })?;
        match tok.kind {
            TokenKind::Number(v) => Ok(ExprAst::Number(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident => {
                let followed_by_paren =
                    matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen));
                if followed_by_paren {
                    let Some(f) = UnaryFn::from_name(&tok.text) else {
                        if parse_var(&tok.text).is_some() {
                            return Err(ExprError::Arity {
                                offset: tok.offset,
                                name: tok.text,
                            });
                        }
                        return Err(ExprError::UnknownFunction {
                            offset: tok.offset,
                            name: tok.text,
                        });
                    };
                    self.bump(); // '('
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(ExprAst::Func(f, Box::new(arg)))
                } else {
                    match parse_var(&tok.text) {
                        Some(i) => Ok(ExprAst::Var(i)),
                        None => Err(ExprError::UnknownIdentifier {
                            offset: tok.offset,
                            name: tok.text,
                        }),
                    }
                }
            }
            _ => Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("expected number, identifier or `(`, found `{}`", tok.text),
            }),
        }
    }

    fn expect_rparen(&mut self) -> ExprResult<()> {
        let offset = self.here();
        match self.bump() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => Ok(()),
            Some(tok) => Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("expected `)`, found `{}`", tok.text),
            }),
            None => Err(ExprError::Syntax {
                offset,
                message: "expected `)`, found end of input".into(),
            }),
        }
    }
}

/// `y<digits>` (1-based) -> 0-based index.
fn parse_var(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('y')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: usize = digits.parse().ok()?;
    if n == 0 {
        return None;
    }
    Some(n - 1)
}

fn tokenize(src: &str) -> ExprResult<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        // U+2212 MINUS SIGN is three bytes: e2 88 92.
        if b == 0xe2 && bytes.get(i + 1) == Some(&0x88) && bytes.get(i + 2) == Some(&0x92) {
            tokens.push(Token {
                kind: TokenKind::Minus,
                text: "\u{2212}".into(),
                offset: i,
            });
            i += 3;
            continue;
        }
        let simple = match b {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = simple {
            tokens.push(Token {
                kind,
                text: (b as char).to_string(),
                offset: i,
            });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || b == b'.' {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("invalid number literal `{text}`"),
            })?;
            tokens.push(Token {
                kind: TokenKind::Number(value),
                text: text.to_string(),
                offset: start,
            });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: src[start..i].to_string(),
                offset: start,
            });
            continue;
        }
        return Err(ExprError::Syntax {
            offset: i,
            message: format!("unexpected character `{}`", &src[i..].chars().next().unwrap()),
        });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_str(src: &str, env: &[f64]) -> f64 {
        evaluate_expression(&parse_expression(src).unwrap(), env).unwrap()
    }

    #[test]
    fn square_at_one() {
        assert_eq!(eval_str("y1^2", &[1.0]), 1.0);
    }

    #[test]
    fn sin_plus_linear_at_zero() {
        assert_eq!(eval_str("sin(y1)+0.5*y1", &[0.0]), 0.0);
    }

    #[test]
    fn double_plus_is_syntax_error_at_offset_3() {
        let err = parse_expression("y1++2").unwrap_err();
        match err {
            ExprError::Syntax { offset, .. } => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval_str("2+3*4", &[]), 14.0);
        assert_eq!(eval_str("2*3^2", &[]), 18.0);
        assert_eq!(eval_str("8-3-2", &[]), 3.0);
        assert_eq!(eval_str("8/4/2", &[]), 1.0);
        assert_eq!(eval_str("(2+3)*4", &[]), 20.0);
    }

    #[test]
    fn unicode_minus() {
        assert_eq!(eval_str("0\u{2212}y1", &[2.0]), -2.0);
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expression("z1+1").unwrap_err();
        assert!(matches!(err, ExprError::UnknownIdentifier { offset: 0, .. }));
    }

    #[test]
    fn unknown_function() {
        let err = parse_expression("log(y1)").unwrap_err();
        assert!(matches!(err, ExprError::UnknownFunction { offset: 0, .. }));
    }

    #[test]
    fn variable_used_as_function_is_arity_error() {
        let err = parse_expression("y1(2)").unwrap_err();
        assert!(matches!(err, ExprError::Arity { offset: 0, .. }));
    }

    #[test]
    fn division_guard() {
        let err = evaluate_expression(&parse_expression("1/y1").unwrap(), &[0.0]).unwrap_err();
        assert!(matches!(err, ExprError::DivisionByZero(_)));
    }

    #[test]
    fn sqrt_of_negative() {
        let err =
            evaluate_expression(&parse_expression("sqrt(0-y1)").unwrap(), &[1.0]).unwrap_err();
        assert!(matches!(err, ExprError::SqrtOfNegative(_)));
    }

    #[test]
    fn print_parse_round_trip() {
        let srcs = [
            "y1^2",
            "sin(y1)+0.5*y1",
            "1/(y1+2)*tanh(y2)",
            "sqrt(abs(y1-3))",
            "2.5e-3*y1",
        ];
        for src in srcs {
            let ast = parse_expression(src).unwrap();
            let printed = ast.print();
            let reparsed = parse_expression(&printed).unwrap();
            assert_eq!(ast, reparsed, "round trip failed for {src} -> {printed}");
        }
    }
}

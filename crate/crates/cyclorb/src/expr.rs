//! Small expression language for sector arithmetic on the command line.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr := term ('*' term)*
//! term := 'conj' '(' expr ')'
//!       | 'pi' '[' expr ']'
//!       | 'hom' '(' expr (',' expr)* ';' expr ')'
//!       | '(' expr ')'
//!       | label
//! ```
//!
//! `*` is left-associative fusion; `conj` and `pi` bind tighter because
//! they are delimited. `pi[x]` builds a soliton (n = 2 context); `*`
//! between two solitons is soliton composition, and a plain sum times a
//! soliton multiplies into its label sum.

use std::fmt;

use thiserror::Error;

use crate::fusion::{FusionError, SectorSum};
use crate::modular::ModularData;
use crate::soliton::{
    soliton_compose, soliton_conjugate, ProductSectorSum, SolitonError, SolitonSector,
};

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("lexical error at column {column}: {message}")]
    Lex { column: usize, message: String },
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown label '{name}' at column {column}")]
    UnknownLabel { name: String, column: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
}

/// Parsed sector expression. Label nodes remember their source column so
/// unknown labels can be reported with a position at evaluation time.
#[derive(Debug, Clone, Eq)]
pub enum SectorExpr {
    Label { name: String, column: usize },
    Conj(Box<SectorExpr>),
    Fuse(Box<SectorExpr>, Box<SectorExpr>),
    Pi(Box<SectorExpr>),
    Hom(Vec<SectorExpr>, Box<SectorExpr>),
}

// Structural equality ignores source columns so that
// parse(print(ast)) == ast holds.
impl PartialEq for SectorExpr {
    fn eq(&self, other: &Self) -> bool {
        use SectorExpr::*;
        match (self, other) {
            (Label { name: a, .. }, Label { name: b, .. }) => a == b,
            (Conj(a), Conj(b)) | (Pi(a), Pi(b)) => a == b,
            (Fuse(a1, a2), Fuse(b1, b2)) => a1 == b1 && a2 == b2,
            (Hom(al, at), Hom(bl, bt)) => al == bl && at == bt,
            _ => false,
        }
    }
}

impl fmt::Display for SectorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorExpr::Label { name, .. } => write!(f, "{name}"),
            SectorExpr::Conj(inner) => write!(f, "conj({inner})"),
            SectorExpr::Pi(inner) => write!(f, "pi[{inner}]"),
            SectorExpr::Fuse(l, r) => {
                write!(f, "{l} * ")?;
                // parenthesize a fuse on the right to keep left associativity
                if matches!(**r, SectorExpr::Fuse(_, _)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            SectorExpr::Hom(list, target) => {
                let parts: Vec<String> = list.iter().map(|e| e.to_string()).collect();
                write!(f, "hom({}; {target})", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semicolon,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        let column = pos + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => pos += 1,
            '*' => {
                tokens.push((Token::Star, column));
                pos += 1;
            }
            '(' => {
                tokens.push((Token::LParen, column));
                pos += 1;
            }
            ')' => {
                tokens.push((Token::RParen, column));
                pos += 1;
            }
            '[' => {
                tokens.push((Token::LBracket, column));
                pos += 1;
            }
            ']' => {
                tokens.push((Token::RBracket, column));
                pos += 1;
            }
            ';' => {
                tokens.push((Token::Semicolon, column));
                pos += 1;
            }
            ',' => {
                tokens.push((Token::Comma, column));
                pos += 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                tokens.push((Token::Ident(chars[start..pos].iter().collect()), column));
            }
            other => {
                return Err(ExprError::Lex {
                    column,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.pos)
    }

    fn column(&self) -> usize {
        self.peek().map_or(self.end_column, |(_, c)| *c)
    }

    fn advance(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ExprError> {
        match self.advance() {
            Some((t, _)) if t == want => Ok(()),
            Some((t, c)) => Err(ExprError::Syntax {
                column: c,
                message: format!("expected {what}, found {t:?}"),
            }),
            None => Err(ExprError::Syntax {
                column: self.end_column,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<SectorExpr, ExprError> {
        let mut node = self.parse_term()?;
        while matches!(self.peek(), Some((Token::Star, _))) {
            self.advance();
            let rhs = self.parse_term()?;
            node = SectorExpr::Fuse(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn parse_term(&mut self) -> Result<SectorExpr, ExprError> {
        let column = self.column();
        match self.advance() {
            Some((Token::Ident(name), col)) => match name.as_str() {
                "conj" => {
                    self.expect(Token::LParen, "'(' after conj")?;
                    let inner = self.parse_expr()?;
                    self.expect(Token::RParen, "')'")?;
                    Ok(SectorExpr::Conj(Box::new(inner)))
                }
                "pi" => {
                    self.expect(Token::LBracket, "'[' after pi")?;
                    let inner = self.parse_expr()?;
                    self.expect(Token::RBracket, "']'")?;
                    Ok(SectorExpr::Pi(Box::new(inner)))
                }
                "hom" => {
                    self.expect(Token::LParen, "'(' after hom")?;
                    let mut list = vec![self.parse_expr()?];
                    while matches!(self.peek(), Some((Token::Comma, _))) {
                        self.advance();
                        list.push(self.parse_expr()?);
                    }
                    self.expect(Token::Semicolon, "';' before the hom target")?;
                    let target = self.parse_expr()?;
                    self.expect(Token::RParen, "')'")?;
                    Ok(SectorExpr::Hom(list, Box::new(target)))
                }
                _ => Ok(SectorExpr::Label { name, column: col }),
            },
            Some((Token::LParen, _)) => {
                let inner = self.parse_expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some((t, c)) => Err(ExprError::Syntax {
                column: c,
                message: format!("expected a sector expression, found {t:?}"),
            }),
            None => Err(ExprError::Syntax {
                column,
                message: "expected a sector expression, found end of input".into(),
            }),
        }
    }
}

/// Parse an expression; label resolution happens later at evaluation.
pub fn parse_expr(text: &str) -> Result<SectorExpr, ExprError> {
    let tokens = lex(text)?;
    let end_column = text.chars().count() + 1;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column,
    };
    let expr = parser.parse_expr()?;
    if let Some((t, c)) = parser.peek() {
        return Err(ExprError::Syntax {
            column: *c,
            message: format!("trailing input {t:?}"),
        });
    }
    Ok(expr)
}

/// Evaluation result of a sector expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Sum(SectorSum),
    Soliton(SolitonSector),
    Product(ProductSectorSum),
    Count(u64),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Sum(_) => "sector sum",
            Value::Soliton(_) => "soliton",
            Value::Product(_) => "product sector sum",
            Value::Count(_) => "integer",
        }
    }
}

fn expect_sum(v: Value, context: &str) -> Result<SectorSum, ExprError> {
    match v {
        Value::Sum(s) => Ok(s),
        other => Err(ExprError::Type(format!(
            "{context} needs a sector sum, found a {}",
            other.type_name()
        ))),
    }
}

/// Evaluate an expression against a category. Soliton operations use the
/// n = 2 algebra.
pub fn eval(md: &ModularData, expr: &SectorExpr) -> Result<Value, ExprError> {
    match expr {
        SectorExpr::Label { name, column } => match md.ring().label_index(name) {
            Some(i) => Ok(Value::Sum(SectorSum::single(i))),
            None => Err(ExprError::UnknownLabel {
                name: name.clone(),
                column: *column,
            }),
        },
        SectorExpr::Conj(inner) => match eval(md, inner)? {
            Value::Sum(s) => Ok(Value::Sum(md.ring().conj_sum(&s))),
            Value::Soliton(s) => Ok(Value::Soliton(soliton_conjugate(md, 2, &s)?)),
            other => Err(ExprError::Type(format!(
                "conj needs a sector sum or soliton, found a {}",
                other.type_name()
            ))),
        },
        SectorExpr::Pi(inner) => {
            let sum = expect_sum(eval(md, inner)?, "pi[...]")?;
            Ok(Value::Soliton(SolitonSector::new(sum)))
        }
        SectorExpr::Fuse(l, r) => {
            let left = eval(md, l)?;
            let right = eval(md, r)?;
            match (left, right) {
                (Value::Sum(a), Value::Sum(b)) => Ok(Value::Sum(md.ring().fuse(&a, &b)?)),
                (Value::Soliton(a), Value::Soliton(b)) => {
                    Ok(Value::Product(soliton_compose(md, 2, &a, &b)?))
                }
                (Value::Sum(a), Value::Soliton(s)) | (Value::Soliton(s), Value::Sum(a)) => {
                    // the (mu, 1) product-sector action, extended linearly
                    Ok(Value::Soliton(SolitonSector::new(
                        md.ring().fuse(&a, &s.lambda)?,
                    )))
                }
                (a, b) => Err(ExprError::Type(format!(
                    "cannot fuse a {} with a {}",
                    a.type_name(),
                    b.type_name()
                ))),
            }
        }
        SectorExpr::Hom(list, target) => {
            let mut product: Option<SectorSum> = None;
            for e in list {
                let s = expect_sum(eval(md, e)?, "hom product list")?;
                product = Some(match product {
                    None => s,
                    Some(acc) => md.ring().fuse(&acc, &s)?,
                });
            }
            let product = product.expect("hom list is non-empty by grammar");
            let target = expect_sum(eval(md, target)?, "hom target")?;
            let mut count = 0u64;
            for (l, m) in target.iter() {
                count += m * product.coeff(l);
            }
            Ok(Value::Count(count))
        }
    }
}

/// Render an evaluation result with the category's labels.
pub fn format_value(md: &ModularData, value: &Value) -> String {
    match value {
        Value::Sum(s) => md.ring().format_sum(s),
        Value::Soliton(s) => format!("pi[{}]", md.ring().format_sum(&s.lambda)),
        Value::Product(p) => p.format(md),
        Value::Count(n) => n.to_string(),
    }
}

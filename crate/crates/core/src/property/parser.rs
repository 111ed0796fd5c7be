//! Recursive-descent parser for the property language.
//!
//! ```text
//! prop   := expr ;
//! expr   := term { ("and"|"or") term } ;      (not > and > or, left-assoc)
//! term   := "not" term | "(" expr ")" | atom ;
//! atom   := "connected" | "disconnected" | "bipartite" | "clique" | "independent"
//!         | "edge_parity" "(" ("even"|"odd") ")"
//!         | "max_degree" "<=" RATIONAL "n"
//!         | "diam" ">=" RATIONAL "n"
//!         | "has_independent_set" "(" INT ")"
//!         | "num_edges" ("<="|">="|"==") INT ;
//! RATIONAL := INT "/" INT | INT ;
//! ```

use crate::error::{input, Result};
use crate::property::{Atom, Cmp, Expr, Parity, PropertySpec, Ratio, Span};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    Slash,
    Le,
    Ge,
    EqEq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' => {
                chars.next();
                col += 1;
                out.push(Token {
                    tok: Tok::LParen,
                    span,
                });
            }
            ')' => {
                chars.next();
                col += 1;
                out.push(Token {
                    tok: Tok::RParen,
                    span,
                });
            }
            '/' => {
                chars.next();
                col += 1;
                out.push(Token {
                    tok: Tok::Slash,
                    span,
                });
            }
            '<' | '>' | '=' => {
                chars.next();
                col += 1;
                let second = chars.peek().copied();
                if second != Some('=') {
                    return Err(syntax(span, format!("expected '=' after '{c}'")));
                }
                chars.next();
                col += 1;
                let tok = match c {
                    '<' => Tok::Le,
                    '>' => Tok::Ge,
                    _ => Tok::EqEq,
                };
                out.push(Token { tok, span });
            }
            c if c.is_ascii_digit() => {
                let mut value: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d as u64 - '0' as u64))
                        .ok_or_else(|| syntax(span, "integer literal overflows".to_string()))?;
                    chars.next();
                    col += 1;
                }
                out.push(Token {
                    tok: Tok::Int(value),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    word.push(d);
                    chars.next();
                    col += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(word),
                    span,
                });
            }
            other => return Err(syntax(span, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

fn syntax(span: Span, msg: String) -> crate::error::Error {
    input(format!("{}:{}: {msg}", span.line, span.col))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> Span {
        self.peek().map(|t| t.span).unwrap_or(self.end)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Span> {
        match self.next() {
            Some(t) if t.tok == want => Ok(t.span),
            Some(t) => Err(syntax(
                t.span,
                format!("expected {what}, found {:?}", t.tok),
            )),
            None => Err(syntax(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_and()?;
        while let Some(Token {
            tok: Tok::Ident(w), ..
        }) = self.peek()
        {
            if w != "or" {
                break;
            }
            self.next();
            let rhs = self.parse_and()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        while let Some(Token {
            tok: Tok::Ident(w), ..
        }) = self.peek()
        {
            if w != "and" {
                break;
            }
            self.next();
            let rhs = self.parse_term()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(w), ..
            }) if w == "not" => {
                self.next();
                Ok(Expr::Not(Box::new(self.parse_term()?)))
            }
            Some(Token {
                tok: Tok::LParen, ..
            }) => {
                self.next();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        let tok = self
            .next()
            .ok_or_else(|| syntax(self.end, "expected an atom, found end of input".to_string()))?;
        let span = tok.span;
        let word = match tok.tok {
            Tok::Ident(w) => w,
            other => return Err(syntax(span, format!("expected an atom, found {other:?}"))),
        };
        let atom = match word.as_str() {
            "connected" => Atom::Connected,
            "disconnected" => Atom::Disconnected,
            "bipartite" => Atom::Bipartite,
            "clique" => Atom::Clique,
            "independent" => Atom::Independent,
            "edge_parity" => {
                self.expect(Tok::LParen, "'('")?;
                let p = match self.next() {
                    Some(Token {
                        tok: Tok::Ident(w), ..
                    }) if w == "even" => Parity::Even,
                    Some(Token {
                        tok: Tok::Ident(w), ..
                    }) if w == "odd" => Parity::Odd,
                    Some(t) => return Err(syntax(t.span, "expected 'even' or 'odd'".to_string())),
                    None => return Err(syntax(self.end, "expected 'even' or 'odd'".to_string())),
                };
                self.expect(Tok::RParen, "')'")?;
                Atom::EdgeParity(p)
            }
            "max_degree" => {
                self.expect(Tok::Le, "'<='")?;
                let q = self.parse_rational()?;
                self.expect_n()?;
                Atom::MaxDegreeLe(q)
            }
            "diam" => {
                self.expect(Tok::Ge, "'>='")?;
                let q = self.parse_rational()?;
                self.expect_n()?;
                Atom::DiamGe(q)
            }
            "has_independent_set" => {
                self.expect(Tok::LParen, "'('")?;
                let c = self.parse_int()?;
                self.expect(Tok::RParen, "')'")?;
                Atom::HasIndependentSet(c as u32)
            }
            "num_edges" => {
                let cmp = match self.next() {
                    Some(Token { tok: Tok::Le, .. }) => Cmp::Le,
                    Some(Token { tok: Tok::Ge, .. }) => Cmp::Ge,
                    Some(Token { tok: Tok::EqEq, .. }) => Cmp::Eq,
                    Some(t) => {
                        return Err(syntax(t.span, "expected '<=', '>=' or '=='".to_string()))
                    }
                    None => {
                        return Err(syntax(self.end, "expected '<=', '>=' or '=='".to_string()))
                    }
                };
                let k = self.parse_int()?;
                Atom::NumEdges(cmp, k)
            }
            other => return Err(syntax(span, format!("unknown atom {other:?}"))),
        };
        Ok(Expr::Atom(atom, span))
    }

    fn parse_int(&mut self) -> Result<u64> {
        match self.next() {
            Some(Token {
                tok: Tok::Int(v), ..
            }) => Ok(v),
            Some(t) => Err(syntax(
                t.span,
                format!("expected an integer, found {:?}", t.tok),
            )),
            None => Err(syntax(self.end, "expected an integer".to_string())),
        }
    }

    fn parse_rational(&mut self) -> Result<Ratio> {
        let start = self.here();
        let num = self.parse_int()?;
        if matches!(
            self.peek(),
            Some(Token {
                tok: Tok::Slash,
                ..
            })
        ) {
            self.next();
            let den = self.parse_int()?;
            if den == 0 {
                return Err(syntax(start, "rational with zero denominator".to_string()));
            }
            Ok(Ratio::new(num, den))
        } else {
            Ok(Ratio::new(num, 1))
        }
    }

    fn expect_n(&mut self) -> Result<()> {
        match self.next() {
            Some(Token {
                tok: Tok::Ident(w), ..
            }) if w == "n" => Ok(()),
            Some(t) => Err(syntax(t.span, format!("expected 'n', found {:?}", t.tok))),
            None => Err(syntax(self.end, "expected 'n'".to_string())),
        }
    }
}

/// Parses a property from its source text. The returned spec carries the
/// source as its name and is not flagged edge-monotone; callers declare
/// that separately.
pub fn parse_property(text: &str) -> Result<PropertySpec> {
    let tokens = tokenize(text)?;
    let lines = text.lines().count().max(1) as u32;
    let last_col = text
        .lines()
        .last()
        .map(|l| l.chars().count() + 1)
        .unwrap_or(1) as u32;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: Span {
            line: lines,
            col: last_col,
        },
    };
    let expr = parser.parse_expr()?;
    if let Some(t) = parser.peek() {
        return Err(syntax(t.span, format!("unexpected trailing {:?}", t.tok)));
    }
    Ok(PropertySpec::new(expr, false, text.trim()))
}

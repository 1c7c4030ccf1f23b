//! Family configuration documents.
//!
//! ```text
//! # Legendre family over F_7
//! name = legendre
//! p = 7
//! a2 = -(λ + 1)
//! a4 = λ
//! bad_locus = λ(λ - 1)
//! ```
//!
//! Expressions use integers, `λ` (or `lambda`), `+ - * / ^` and
//! parentheses; juxtaposition multiplies. Unlisted coefficients are zero.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ff::{is_prime, RationalFunction};
use crate::predict::PredictionModel;

use super::{FamilySpec, MarkedPoint};

const KEYS: [&str; 12] = [
    "name",
    "p",
    "a1",
    "a2",
    "a3",
    "a4",
    "a6",
    "bad_locus",
    "marked_point.x",
    "marked_point.y",
    "marked_point.order",
    "gate.modulus",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Num(u64),
    Lambda,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> std::result::Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64))
                        .ok_or("integer literal too large")?;
                    chars.next();
                }
                out.push(Token::Num(n));
            }
            'λ' | 'l' => {
                if c == 'l' {
                    let word: String = chars.clone().take(6).collect();
                    if word != "lambda" {
                        return Err(format!("unexpected identifier near '{word}'"));
                    }
                    chars.nth(5);
                } else {
                    chars.next();
                }
                out.push(Token::Lambda);
            }
            _ => {
                out.push(match c {
                    '+' => Token::Plus,
                    '-' | '−' => Token::Minus,
                    '*' | '·' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    other => return Err(format!("unexpected character '{other}'")),
                });
                chars.next();
            }
        }
    }
    Ok(out)
}

struct Parser<'t> {
    p: u64,
    tokens: &'t [Token],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> std::result::Result<RationalFunction, String> {
        let mut acc = self.term()?;
        while let Some(op @ (Token::Plus | Token::Minus)) = self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = if op == Token::Plus {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> std::result::Result<RationalFunction, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Token::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| "division by the zero polynomial".to_string())?;
                }
                Some(Token::Num(_) | Token::Lambda | Token::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<RationalFunction, String> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some(Token::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> std::result::Result<RationalFunction, String> {
        let base = self.atom()?;
        if self.peek() == Some(Token::Caret) {
            self.bump();
            match self.bump() {
                Some(Token::Num(e)) => {
                    let e = u32::try_from(e).map_err(|_| "exponent too large".to_string())?;
                    Ok(base.pow(e))
                }
                _ => Err("exponent must be a nonnegative integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> std::result::Result<RationalFunction, String> {
        match self.bump() {
            Some(Token::Num(n)) => Ok(RationalFunction::constant(self.p, (n % self.p) as i64)),
            Some(Token::Lambda) => Ok(RationalFunction::lambda(self.p)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("missing ')'".into()),
                }
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

/// Parses a rational expression in λ over `F_p`.
pub fn parse_expression(p: u64, text: &str) -> std::result::Result<RationalFunction, String> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err("empty expression".into());
    }
    let mut parser = Parser {
        p,
        tokens: &tokens,
        pos: 0,
    };
    let value = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(format!("trailing input at token {}", parser.pos + 1));
    }
    Ok(value)
}

/// Parses a family configuration document.
pub fn parse_family(document: &str) -> Result<FamilySpec> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in document.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Parse { line, reason };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err("expected 'key = value'".into()))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key '{key}'")));
        }
        if entries.insert(key, (line, value.trim())).is_some() {
            return Err(err(format!("duplicate key '{key}'")));
        }
    }

    let (p_line, p_text) = *entries.get("p").ok_or(Error::Parse {
        line: 0,
        reason: "missing key 'p'".into(),
    })?;
    let p: u64 = p_text.parse().map_err(|_| Error::Parse {
        line: p_line,
        reason: format!("p must be an integer, got '{p_text}'"),
    })?;
    if !is_prime(p) || p <= 3 {
        return Err(Error::Parse {
            line: p_line,
            reason: format!("p must be a prime greater than 3, got {p}"),
        });
    }

    let expr = |key: &str| -> Result<Option<RationalFunction>> {
        entries
            .get(key)
            .map(|&(line, text)| {
                parse_expression(p, text).map_err(|reason| Error::Parse { line, reason })
            })
            .transpose()
    };
    let integer = |key: &str| -> Result<Option<u64>> {
        entries
            .get(key)
            .map(|&(line, text)| {
                text.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    reason: format!("{key} must be a positive integer"),
                })
            })
            .transpose()
    };

    let zero = RationalFunction::constant(p, 0);
    let coeff =
        |key: &str| -> Result<RationalFunction> { Ok(expr(key)?.unwrap_or_else(|| zero.clone())) };
    let coeffs = [
        coeff("a1")?,
        coeff("a2")?,
        coeff("a3")?,
        coeff("a4")?,
        coeff("a6")?,
    ];
    let bad = match expr("bad_locus")? {
        None => None,
        Some(f) if f.is_polynomial() && !f.is_zero() => Some(f.numerator().clone()),
        Some(_) => {
            return Err(Error::Parse {
                line: entries["bad_locus"].0,
                reason: "bad_locus must be a nonzero polynomial".into(),
            })
        }
    };
    let name = entries.get("name").map_or("config", |&(_, v)| v);
    let mut spec = FamilySpec::from_long_weierstrass(name, p, coeffs, bad)?;

    let mx = expr("marked_point.x")?;
    let my = expr("marked_point.y")?;
    let order = integer("marked_point.order")?;
    match (mx, my, order) {
        (None, None, None) => {}
        (Some(x), Some(y), Some(order)) if order >= 2 => {
            spec.marked_point = Some(MarkedPoint { x, y, order });
        }
        _ => {
            let line = ["marked_point.x", "marked_point.y", "marked_point.order"]
                .iter()
                .find_map(|k| entries.get(k).map(|e| e.0))
                .unwrap_or(0);
            return Err(Error::Parse {
                line,
                reason: "marked_point needs x, y and an order of at least 2".into(),
            });
        }
    }

    if let Some(m) = integer("gate.modulus")? {
        if m < 2 {
            return Err(Error::Parse {
                line: entries["gate.modulus"].0,
                reason: "gate.modulus must be at least 2".into(),
            });
        }
        spec.gate = Some(m);
        spec.model = gate_model(p, m);
    }
    Ok(spec)
}

/// The prediction attached to a gate modulus: a prime `l` other than 2, 3
/// and `p` reads as a point of order `l`, a power of `p` as Igusa level.
fn gate_model(p: u64, m: u64) -> Option<PredictionModel> {
    if is_prime(m) && m != 2 && m != 3 && m != p {
        return Some(PredictionModel::Gamma1 { l: m });
    }
    let mut n = 0u32;
    let mut r = m;
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r == 1 && n > 0).then_some(PredictionModel::Igusa { p, n })
}

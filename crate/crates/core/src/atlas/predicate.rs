//! Boolean expressions over flag names, e.g. `K & !GS` or `S(2) & !(S3 | B)`.
//!
//! Grammar: `or := and ('|' and)*`, `and := unary ('&' unary)*`,
//! `unary := '!' unary | '(' or ')' | FLAG`. `&&` and `||` are accepted too.

use std::fmt;
use std::str::FromStr;

use super::{Flag, SpectrumRecord};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Flag(Flag),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

impl Predicate {
    pub fn eval(&self, record: &SpectrumRecord) -> Result<bool> {
        Ok(match self {
            Predicate::Flag(f) => record
                .flag(*f)
                .ok_or_else(|| Error::Predicate(format!("flag {f} is not recorded")))?,
            Predicate::Not(p) => !p.eval(record)?,
            Predicate::And(a, b) => a.eval(record)? && b.eval(record)?,
            Predicate::Or(a, b) => a.eval(record)? || b.eval(record)?,
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Flag(flag) => write!(f, "{flag}"),
            Predicate::Not(p) => write!(f, "!{p}"),
            Predicate::And(a, b) => write!(f, "({a} & {b})"),
            Predicate::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.or()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Predicate(format!(
                "unexpected `{}` in `{s}`",
                parser.tokens[parser.pos]
            )));
        }
        Ok(expr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Not,
    And,
    Or,
    Open,
    Close,
    Name(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Not => f.write_str("!"),
            Token::And => f.write_str("&"),
            Token::Or => f.write_str("|"),
            Token::Open => f.write_str("("),
            Token::Close => f.write_str(")"),
            Token::Name(n) => f.write_str(n),
        }
    }
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '!' | '~' => {
                out.push(Token::Not);
                i += 1;
            }
            '&' | '|' => {
                out.push(if c == '&' { Token::And } else { Token::Or });
                i += 1;
                if chars.get(i) == Some(&c) {
                    i += 1;
                }
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let mut name: String = chars[start..i].iter().collect();
                // `S(2)`: an arity in parentheses right after the name.
                if chars.get(i) == Some(&'(') {
                    let close = chars[i..].iter().position(|&c| c == ')').map(|p| p + i);
                    if let Some(close) = close {
                        let inner: String = chars[i + 1..close].iter().collect();
                        if !inner.is_empty() && inner.chars().all(|c| c.is_ascii_digit()) {
                            name.push_str(&inner);
                            i = close + 1;
                        }
                    }
                }
                out.push(Token::Name(name));
            }
            other => return Err(Error::Predicate(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn or(&mut self) -> Result<Predicate> {
        let mut left = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            left = Predicate::Or(Box::new(left), Box::new(self.and()?));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Predicate> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            left = Predicate::And(Box::new(left), Box::new(self.unary()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Predicate> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Token::Not) => Ok(Predicate::Not(Box::new(self.unary()?))),
            Some(Token::Open) => {
                let inner = self.or()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::Predicate("missing `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Name(n)) => Ok(Predicate::Flag(n.parse()?)),
            Some(t) => Err(Error::Predicate(format!("unexpected `{t}`"))),
            None => Err(Error::Predicate("unexpected end of expression".into())),
        }
    }
}

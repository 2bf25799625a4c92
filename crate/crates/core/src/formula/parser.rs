//! Recursive-descent parser for the formula text syntax.
//!
//! ```text
//! formula := term {"and" term} | term {"or" term} | term "implies" term
//! term    := unary ["until[" int ":" int "]" unary]
//! unary   := "true" | pred | "not" unary | "ev[" int ":" int "]" unary
//!          | "alw[" int ":" int "]" unary | "(" formula ")"
//! pred    := signal cmp number | "abs(" signal ")" cmp number
//!          | signal "in" "[" number "," number "]"
//! ```
//!
//! Mixing `and`/`or`/`implies` or chaining `until` at one level requires parentheses.

use super::{Cmp, Formula, Interval, Predicate};
use crate::ParseError;

const KEYWORDS: &[&str] = &["true", "not", "and", "or", "implies", "until", "ev", "alw", "abs", "in"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Cmp(Cmp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Cmp(c) => format!("`{}`", c.as_str()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
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
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '<' | '>' => {
                let strict = chars.get(i + 1) != Some(&'=');
                if !strict {
                    i += 1;
                }
                Tok::Cmp(match (c, strict) {
                    ('<', true) => Cmp::Lt,
                    ('<', false) => Cmp::Le,
                    ('>', true) => Cmp::Gt,
                    _ => Cmp::Ge,
                })
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                i += 1;
                while i < chars.len() {
                    let d = chars[i];
                    let exp_sign = (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                i -= 1;
                Tok::Number(chars[start..=i].iter().collect())
            }
            c if c.is_alphabetic() || c == '_' => {
                while i + 1 < chars.len()
                    && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_' || chars[i + 1] == '.')
                {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        };
        i += 1;
        col += i - start;
        out.push(Spanned { tok, line: tl, column: tc });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

/// Parses formula text into a flattened AST.
///
/// `abs(s) < c` becomes the membership predicate `s in [-c, c]` and `abs(s) > c`
/// becomes `(s > c) or (s < -c)`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        err(t.line, t.column, message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!("expected {wanted}, found {}", self.peek().tok.describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.term()?;
        let connective = match &self.peek().tok {
            Tok::Ident(s) if s == "and" || s == "or" || s == "implies" => s.clone(),
            _ => return Ok(first),
        };
        self.bump();
        if connective == "implies" {
            let rhs = self.term()?;
            if ["and", "or", "implies"].iter().any(|k| self.at_keyword(k)) {
                return Err(self.error_here("`implies` cannot be combined with other connectives without parentheses"));
            }
            return Ok(Formula::implies(first, rhs));
        }
        let mut operands = vec![first, self.term()?];
        loop {
            if self.at_keyword(&connective) {
                self.bump();
                operands.push(self.term()?);
            } else if ["and", "or", "implies"].iter().any(|k| self.at_keyword(k)) {
                return Err(self.error_here("mixing `and`, `or` and `implies` requires parentheses"));
            } else {
                break;
            }
        }
        Ok(if connective == "and" { Formula::and(operands) } else { Formula::or(operands) })
    }

    fn term(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if !self.at_keyword("until") {
            return Ok(lhs);
        }
        self.bump();
        let window = self.interval()?;
        let rhs = self.unary()?;
        if self.at_keyword("until") {
            return Err(self.error_here("chained `until` requires parentheses"));
        }
        Ok(Formula::until(window, lhs, rhs))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "not" => {
                    self.bump();
                    Ok(Formula::not(self.unary()?))
                }
                "ev" | "alw" => {
                    self.bump();
                    let window = self.interval()?;
                    let body = self.unary()?;
                    Ok(if s == "ev" { Formula::eventually(window, body) } else { Formula::always(window, body) })
                }
                "abs" => self.abs_predicate(),
                _ if KEYWORDS.contains(&s.as_str()) => Err(self.unexpected("a formula")),
                _ => self.predicate(),
            },
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn signal(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a signal name")),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number(s) => {
                let v: f64 = s.parse().map_err(|_| err(t.line, t.column, format!("invalid number `{s}`")))?;
                if !v.is_finite() {
                    return Err(err(t.line, t.column, format!("number `{s}` is out of range")));
                }
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn cmp(&mut self) -> Result<Cmp, ParseError> {
        match self.peek().tok {
            Tok::Cmp(c) => {
                self.bump();
                Ok(c)
            }
            _ => Err(self.unexpected("a comparison operator")),
        }
    }

    fn predicate(&mut self) -> Result<Formula, ParseError> {
        let signal = self.signal()?;
        if self.at_keyword("in") {
            self.bump();
            let open = self.peek().clone();
            self.expect(Tok::LBracket)?;
            let lo = self.number()?;
            self.expect(Tok::Comma)?;
            let hi = self.number()?;
            self.expect(Tok::RBracket)?;
            return Predicate::membership(signal, lo, hi)
                .map(Formula::Pred)
                .ok_or_else(|| err(open.line, open.column, format!("empty membership interval [{lo}, {hi}]")));
        }
        let op = self.cmp()?;
        let threshold = self.number()?;
        Ok(Formula::Pred(Predicate::comparison(signal, op, threshold)))
    }

    fn abs_predicate(&mut self) -> Result<Formula, ParseError> {
        let start = self.bump();
        self.expect(Tok::LParen)?;
        let signal = self.signal()?;
        self.expect(Tok::RParen)?;
        let op = self.cmp()?;
        let c = self.number()?;
        if op.is_lower_bound() {
            let lower = if op.is_strict() { Cmp::Lt } else { Cmp::Le };
            Ok(Formula::or([
                Formula::Pred(Predicate::comparison(signal.clone(), op, c)),
                Formula::Pred(Predicate::comparison(signal, lower, -c)),
            ]))
        } else {
            Predicate::membership(signal, -c, c)
                .map(Formula::Pred)
                .ok_or_else(|| err(start.line, start.column, format!("`abs(..) {} {c}` is unsatisfiable", op.as_str())))
        }
    }

    fn interval(&mut self) -> Result<Interval, ParseError> {
        let open = self.peek().clone();
        self.expect(Tok::LBracket)?;
        let lo = self.step()?;
        self.expect(Tok::Colon)?;
        if matches!(&self.peek().tok, Tok::RBracket) || matches!(&self.peek().tok, Tok::Ident(s) if s == "inf") {
            return Err(self.error_here("unbounded interval; temporal operators need a finite upper bound"));
        }
        let hi = self.step()?;
        self.expect(Tok::RBracket)?;
        Interval::new(lo, hi).ok_or_else(|| err(open.line, open.column, format!("empty interval [{lo}:{hi}]")))
    }

    fn step(&mut self) -> Result<usize, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number(s) if s.chars().all(|c| c.is_ascii_digit()) => {
                let v = s.parse().map_err(|_| err(t.line, t.column, format!("step `{s}` is too large")))?;
                self.bump();
                Ok(v)
            }
            Tok::Number(s) => {
                Err(err(t.line, t.column, format!("interval bound `{s}` must be a non-negative integer")))
            }
            _ => Err(self.unexpected("an integer step")),
        }
    }
}

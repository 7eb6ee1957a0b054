use super::{Func, SmoothExpr};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number `{x}`"),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                let mut seen_exp = false;
                while j < bytes.len() {
                    let d = bytes[j].1;
                    if d.is_ascii_digit() || d == '.' {
                        j += 1;
                    } else if (d == 'e' || d == 'E') && !seen_exp {
                        // Only an exponent if a digit (optionally signed) follows.
                        let next = bytes.get(j + 1).map(|b| b.1);
                        let after = bytes.get(j + 2).map(|b| b.1);
                        let digit_follows = matches!(next, Some(n) if n.is_ascii_digit())
                            || (matches!(next, Some('+') | Some('-')) && matches!(after, Some(a) if a.is_ascii_digit()));
                        if !digit_follows {
                            break;
                        }
                        seen_exp = true;
                        j += if matches!(next, Some('+') | Some('-')) { 2 } else { 1 };
                    } else {
                        break;
                    }
                }
                let end = bytes.get(j).map_or(src.len(), |b| b.0);
                let text = &src[pos..end];
                let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                    position: pos,
                    expected: vec!["number".into()],
                    found: format!("`{text}`"),
                })?;
                out.push((pos, Tok::Num(value)));
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].1.is_alphanumeric() || bytes[j].1 == '_') {
                    j += 1;
                }
                let end = bytes.get(j).map_or(src.len(), |b| b.0);
                out.push((pos, Tok::Ident(src[pos..end].to_string())));
                i = j;
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    position: pos,
                    expected: vec!["expression".into()],
                    found: format!("`{other}`"),
                })
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

/// Parses an expression.
///
/// Precedence from tightest: `^` (right associative, literal exponent),
/// unary `-`, then `* /`, then `+ -` (both left associative).
pub fn parse(src: &str) -> Result<SmoothExpr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.expect(Tok::End, &["operator", "end of input"])?;
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn expr(&mut self) -> Result<SmoothExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = SmoothExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = SmoothExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<SmoothExpr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = SmoothExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = SmoothExpr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<SmoothExpr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(SmoothExpr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<SmoothExpr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.unary()?;
        let value = constant_value(&exponent).ok_or_else(|| Error::Syntax {
            position: at,
            expected: vec!["numeric exponent".into()],
            found: format!("`{exponent}`"),
        })?;
        Ok(SmoothExpr::Pow(Box::new(base), value))
    }

    fn atom(&mut self) -> Result<SmoothExpr> {
        if matches!(self.peek(), Tok::End | Tok::RParen | Tok::Star | Tok::Slash | Tok::Caret | Tok::Plus | Tok::Minus) {
            return Err(self.error(&["number", "identifier", "`(`", "`-`"]));
        }
        match self.bump() {
            Tok::Num(x) => Ok(SmoothExpr::Const(x)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, &["`)`", "operator"])?;
                Ok(e)
            }
            Tok::Ident(name) => match Func::from_name(&name) {
                Some(func) => {
                    self.expect(Tok::LParen, &["`(`"])?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, &["`)`", "operator"])?;
                    Ok(SmoothExpr::Apply(func, Box::new(arg)))
                }
                None => Ok(SmoothExpr::Var(name)),
            },
            _ => unreachable!("non-atom tokens are rejected above"),
        }
    }
}

fn constant_value(e: &SmoothExpr) -> Option<f64> {
    if !e.free_vars().is_empty() {
        return None;
    }
    super::eval_real(e, &Default::default()).ok()
}

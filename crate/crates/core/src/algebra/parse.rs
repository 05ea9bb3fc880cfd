//! Plain-text polynomial syntax: `x^4 + 2*x^2 + 2`, `x2 - x1 - 1`, `3/2*x`, `(x - 1)^3`.
//!
//! `*` is optional between factors, `/` may only divide by constants, and `lhs = rhs`
//! is accepted in equation contexts and read as `lhs - rhs`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::mpoly::MPoly;
use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    /// `None` is the bare univariate `x`, `Some(k)` is `x{k+1}`.
    Var(Option<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(s: &str) -> std::result::Result<Lexed, (usize, String)> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut toks = Vec::new();
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let t = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => {
                if b.get(i + 1) == Some(&b'*') {
                    i += 1;
                    Tok::Caret
                } else {
                    Tok::Star
                }
            }
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'0'..=b'9' => {
                while i + 1 < b.len() && b[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(s[start..=i].parse().unwrap())
            }
            b'x' | b'X' => {
                let mut j = i + 1;
                if j < b.len() && b[j] == b'_' {
                    j += 1;
                }
                let ds = j;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                if j == ds {
                    Tok::Var(None)
                } else {
                    let k: usize = s[ds..j]
                        .parse()
                        .map_err(|_| (start, "variable index too large".to_string()))?;
                    if k == 0 {
                        return Err((start, "variables are numbered from x1".into()));
                    }
                    i = j - 1;
                    Tok::Var(Some(k - 1))
                }
            }
            _ => {
                return Err((start, format!("unexpected character '{}'", c as char)));
            }
        };
        toks.push((t, start));
        i += 1;
    }
    Ok(Lexed { toks, end: b.len() })
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    nvars: usize,
    /// ring index used for the bare `x`
    bare: usize,
}

type PResult<T> = std::result::Result<T, (usize, String)>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> PResult<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return Err((at, "division by zero".into())),
                        None => return Err((at, "can only divide by a constant".into())),
                    }
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<MPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or((at, "exponent too large".to_string()))?;
                    Ok(base.pow(e))
                }
                _ => Err((at, "expected a nonnegative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> PResult<MPoly> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(MPoly::constant(self.nvars, Rational::from_integer(n))),
            Some(Tok::Var(None)) => Ok(MPoly::var(self.nvars, self.bare)),
            Some(Tok::Var(Some(k))) => Ok(MPoly::var(self.nvars, k)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let at2 = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err((at2, "expected ')'".into())),
                }
            }
            Some(t) => Err((at, format!("unexpected token {t:?}"))),
            None => Err((at, "unexpected end of input".into())),
        }
    }
}

fn line_col(s: &str, offset: usize) -> (usize, usize) {
    let before = &s[..offset.min(s.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map(|p| offset - p).unwrap_or(offset + 1);
    (line, col)
}

fn perr(s: &str, (off, msg): (usize, String), line_base: usize) -> Error {
    let (line, column) = line_col(s, off);
    Error::Parse {
        line: line + line_base,
        column,
        message: msg,
    }
}

/// Parse in a ring of `nvars` variables (`None`: infer from the text). The bare `x`
/// is variable `x1`. Equations `lhs = rhs` are accepted when `allow_eq`.
fn parse_in(s: &str, nvars: Option<usize>, allow_eq: bool, line_base: usize) -> Result<MPoly> {
    let lexed = lex(s).map_err(|e| perr(s, e, line_base))?;
    let max_idx = lexed
        .toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Var(Some(k)) => Some(*k),
            _ => None,
        })
        .max();
    let inferred = max_idx.map(|k| k + 1).unwrap_or(1);
    let n = match nvars {
        Some(n) => {
            if let Some((_, off)) = lexed
                .toks
                .iter()
                .find(|(t, _)| matches!(t, Tok::Var(Some(k)) if *k >= n))
            {
                return Err(perr(s, (*off, format!("variable out of range for n = {n}")), line_base));
            }
            n
        }
        None => inferred,
    };
    let mut p = Parser {
        toks: &lexed.toks,
        pos: 0,
        end: lexed.end,
        nvars: n,
        bare: 0,
    };
    if lexed.toks.is_empty() {
        return Err(perr(s, (0, "empty polynomial".into()), line_base));
    }
    let lhs = p.expr().map_err(|e| perr(s, e, line_base))?;
    let out = if allow_eq && p.peek() == Some(&Tok::Eq) {
        p.bump();
        let rhs = p.expr().map_err(|e| perr(s, e, line_base))?;
        &lhs - &rhs
    } else {
        lhs
    };
    if p.pos < lexed.toks.len() {
        return Err(perr(s, (p.offset(), "unexpected trailing input".into()), line_base));
    }
    Ok(out)
}

/// Parse a univariate polynomial in `x` (a single `xk` is accepted as well).
pub fn parse_univariate(s: &str) -> Result<Poly> {
    let m = parse_in(s, None, false, 0)?;
    let used = m.vars_used();
    match used.as_slice() {
        [] => Ok(m.to_univariate(0).unwrap_or_else(Poly::zero)),
        [v] => Ok(m.to_univariate(*v).unwrap()),
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "expected a univariate polynomial".into(),
        }),
    }
}

/// Parse a polynomial in `x1..x{nvars}`.
pub fn parse_mpoly(s: &str, nvars: usize) -> Result<MPoly> {
    parse_in(s, Some(nvars), false, 0)
}

/// Parse one equation (`lhs = rhs` or a polynomial understood as `= 0`).
pub fn parse_equation(s: &str, nvars: usize) -> Result<MPoly> {
    parse_in(s, Some(nvars), true, 0)
}

/// Parse a block of equations, one per line; blank lines and `#` comments are skipped.
/// Errors carry the line number within the block.
pub fn parse_equations(text: &str, nvars: usize) -> Result<Vec<MPoly>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_in(body, Some(nvars), true, i)?);
    }
    Ok(out)
}

/// Largest variable index `k` such that `xk` occurs in any of the strings.
pub fn infer_nvars<'a>(items: impl IntoIterator<Item = &'a str>) -> usize {
    let mut n = 0;
    for s in items {
        if let Ok(l) = lex(s) {
            for (t, _) in l.toks {
                if let Tok::Var(Some(k)) = t {
                    n = n.max(k + 1);
                }
            }
        }
    }
    n
}

fn fmt_coeff_term(out: &mut String, c: &Rational, mono: &str, first: bool) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if mono.is_empty() {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&a.to_string());
        out.push('*');
        out.push_str(mono);
    }
}

pub fn format_univariate(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        fmt_coeff_term(&mut out, c, &mono, first);
        first = false;
    }
    out
}

pub fn format_multivariate(p: &MPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = p.terms().collect();
    // graded, then lex with x1 most significant
    terms.sort_by(|(a, _), (b, _)| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(v, &k)| {
                if k == 1 {
                    names[v].clone()
                } else {
                    format!("{}^{}", names[v], k)
                }
            })
            .collect();
        fmt_coeff_term(&mut out, c, &mono.join("*"), i == 0);
    }
    out
}

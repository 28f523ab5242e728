//! Line-oriented parser for `.lie` presentations.
//!
//! ```text
//! file      := fieldline dimline relation*
//! fieldline := "field" ("Q" | "F" posint)
//! dimline   := "dim" posint
//! relation  := "[" sym "," sym "]" "=" lincomb
//! lincomb   := term (("+"|"-") term)* | "0"
//! term      := [scalar "*"] sym
//! sym       := "b" index
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::fmt;

use thiserror::Error;

use super::{Presentation, Relation};
use crate::linalg::zero_vector;
use crate::scalars::{parse_scalar, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    IndexOutOfRange { index: usize, dim: usize },
    DuplicateRelation { i: usize, j: usize },
    UnorderedPair { i: usize, j: usize },
    Scalar(String),
    Field(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown basis symbol `{s}`"),
            ParseErrorKind::IndexOutOfRange { index, dim } => {
                write!(f, "basis index {index} out of range for dim {dim}")
            }
            ParseErrorKind::DuplicateRelation { i, j } => write!(f, "duplicate relation for [b{i},b{j}]"),
            ParseErrorKind::UnorderedPair { i, j } => {
                write!(f, "relation [b{i},b{j}] must have first index below second")
            }
            ParseErrorKind::Scalar(m) => write!(f, "bad scalar: {m}"),
            ParseErrorKind::Field(m) => write!(f, "bad field: {m}"),
        }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Number(String),
    LBracket,
    RBracket,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) | Tok::Number(w) => write!(f, "`{w}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
    end: usize,
}

fn lex(line_no: usize, text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col, end: col + 1 });
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let w: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Word(w),
                col,
                end: i + 1,
            });
        } else if c.is_ascii_digit() {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let w: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Number(w),
                col,
                end: i + 1,
            });
        } else {
            return Err(ParseError {
                line: line_no,
                column: col,
                kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
            });
        }
    }
    Ok(out)
}

struct Line<'a> {
    no: usize,
    len: usize,
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Line<'a> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.no,
            column,
            kind,
        }
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len + 1, |t| t.col)
    }

    fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<&'a Spanned, ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.err(
                self.here(),
                ParseErrorKind::Syntax(format!("expected {what}, found end of line")),
            )),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        let t = self.next(&tok.to_string())?;
        if t.tok != tok {
            return Err(self.err(
                t.col,
                ParseErrorKind::Syntax(format!("expected {tok}, found {}", t.tok)),
            ));
        }
        Ok(())
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(
                t.col,
                ParseErrorKind::Syntax(format!("unexpected {} after end of statement", t.tok)),
            )),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("`{kw}`"))?;
        match &t.tok {
            Tok::Word(w) if w == kw => Ok(()),
            other => Err(self.err(t.col, ParseErrorKind::Syntax(format!("expected `{kw}`, found {other}")))),
        }
    }

    fn posint(&mut self, what: &str) -> Result<(u64, usize), ParseError> {
        let t = self.next(what)?;
        let bad = || {
            self.err(
                t.col,
                ParseErrorKind::Syntax(format!("expected {what}, found {}", t.tok)),
            )
        };
        match &t.tok {
            Tok::Number(n) if n.bytes().all(|b| b.is_ascii_digit()) => match n.parse::<u64>() {
                Ok(v) if v > 0 => Ok((v, t.col)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

fn parse_field(line: &mut Line) -> Result<FieldSpec, ParseError> {
    line.keyword("field")?;
    let t = line.next("`Q` or `F <prime>`")?;
    let field = match &t.tok {
        Tok::Word(w) if w == "Q" => FieldSpec::Rationals,
        Tok::Word(w) if w == "F" => {
            let (p, col) = line.posint("a prime")?;
            FieldSpec::prime(p).map_err(|e| line.err(col, ParseErrorKind::Field(e.to_string())))?
        }
        Tok::Word(w) if w.starts_with('F') && w[1..].bytes().all(|b| b.is_ascii_digit()) && w.len() > 1 => {
            let p: u64 = w[1..]
                .parse()
                .map_err(|_| line.err(t.col, ParseErrorKind::Field(format!("`{w}`"))))?;
            FieldSpec::prime(p).map_err(|e| line.err(t.col, ParseErrorKind::Field(e.to_string())))?
        }
        other => {
            return Err(line.err(
                t.col,
                ParseErrorKind::Field(format!("expected `Q` or `F <prime>`, found {other}")),
            ))
        }
    };
    line.end()?;
    Ok(field)
}

fn parse_dim(line: &mut Line) -> Result<usize, ParseError> {
    line.keyword("dim")?;
    let (d, col) = line.posint("a positive dimension")?;
    let d = usize::try_from(d).map_err(|_| line.err(col, ParseErrorKind::Syntax("dimension too large".into())))?;
    line.end()?;
    Ok(d)
}

fn symbol(line: &Line, t: &Spanned, dim: usize) -> Result<usize, ParseError> {
    let Tok::Word(w) = &t.tok else {
        return Err(line.err(
            t.col,
            ParseErrorKind::Syntax(format!("expected a basis symbol, found {}", t.tok)),
        ));
    };
    let digits = w
        .strip_prefix('b')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
    let Some(digits) = digits else {
        return Err(line.err(t.col, ParseErrorKind::UnknownSymbol(w.clone())));
    };
    let index = digits.parse::<usize>().unwrap_or(usize::MAX);
    if index >= dim {
        return Err(line.err(t.col, ParseErrorKind::IndexOutOfRange { index, dim }));
    }
    Ok(index)
}

fn parse_term(line: &mut Line, field: FieldSpec, dim: usize, sign: bool) -> Result<(Scalar, usize), ParseError> {
    let first = line.next("a term")?;
    // a negative scalar is a `-` glued to the following number
    let (num, num_col) = match (&first.tok, line.peek()) {
        (Tok::Minus, Some(n)) if matches!(n.tok, Tok::Number(_)) && n.col == first.end => {
            line.pos += 1;
            let Tok::Number(text) = &n.tok else { unreachable!() };
            (Some(format!("-{text}")), first.col)
        }
        (Tok::Number(text), _) => (Some(text.clone()), first.col),
        _ => (None, first.col),
    };
    let (coeff, sym_tok) = match num {
        Some(text) => {
            let c = parse_scalar(&text, field).map_err(|e| line.err(num_col, ParseErrorKind::Scalar(e.to_string())))?;
            line.expect(Tok::Star)?;
            (c, line.next("a basis symbol")?)
        }
        None => (Scalar::one(field), first),
    };
    let index = symbol(line, sym_tok, dim)?;
    Ok((if sign { coeff } else { -coeff }, index))
}

fn parse_lincomb(line: &mut Line, field: FieldSpec, dim: usize) -> Result<Vec<Scalar>, ParseError> {
    let mut rhs = zero_vector(field, dim);
    if let Some(Spanned {
        tok: Tok::Number(n), ..
    }) = line.peek()
    {
        if n == "0" && line.toks.get(line.pos + 1).is_none() {
            line.pos += 1;
            return Ok(rhs);
        }
    }
    let (c, k) = parse_term(line, field, dim, true)?;
    rhs[k] = &rhs[k] + &c;
    while let Some(op) = line.peek() {
        let sign = match op.tok {
            Tok::Plus => true,
            Tok::Minus => false,
            _ => {
                return Err(line.err(
                    op.col,
                    ParseErrorKind::Syntax(format!("expected `+` or `-`, found {}", op.tok)),
                ))
            }
        };
        line.pos += 1;
        let (c, k) = parse_term(line, field, dim, sign)?;
        rhs[k] = &rhs[k] + &c;
    }
    Ok(rhs)
}

fn parse_relation(line: &mut Line, field: FieldSpec, dim: usize) -> Result<Relation, ParseError> {
    line.expect(Tok::LBracket)?;
    let ti = line.next("a basis symbol")?;
    let i = symbol(line, ti, dim)?;
    line.expect(Tok::Comma)?;
    let tj = line.next("a basis symbol")?;
    let j = symbol(line, tj, dim)?;
    line.expect(Tok::RBracket)?;
    if i >= j {
        return Err(line.err(ti.col, ParseErrorKind::UnorderedPair { i, j }));
    }
    line.expect(Tok::Eq)?;
    let rhs = parse_lincomb(line, field, dim)?;
    Ok(Relation { i, j, rhs })
}

/// Parses a presentation; every error carries a line and column.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut field = None;
    let mut dim = None;
    let mut relations: Vec<Relation> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        last_line = no;
        let toks = lex(no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line {
            no,
            len: raw.chars().count(),
            toks: &toks,
            pos: 0,
        };
        match (field, dim) {
            (None, _) => field = Some(parse_field(&mut line)?),
            (Some(_), None) => dim = Some(parse_dim(&mut line)?),
            (Some(f), Some(d)) => {
                let col = line.here();
                let rel = parse_relation(&mut line, f, d)?;
                if relations.iter().any(|r| r.i == rel.i && r.j == rel.j) {
                    return Err(line.err(col, ParseErrorKind::DuplicateRelation { i: rel.i, j: rel.j }));
                }
                relations.push(rel);
            }
        }
    }
    let eof = |what: &str| ParseError {
        line: last_line + 1,
        column: 1,
        kind: ParseErrorKind::Syntax(format!("missing {what} line")),
    };
    let field = field.ok_or_else(|| eof("`field`"))?;
    let dim = dim.ok_or_else(|| eof("`dim`"))?;
    Ok(Presentation { field, dim, relations })
}

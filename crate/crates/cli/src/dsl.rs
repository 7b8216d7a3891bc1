//! Text format for shift specifications.
//!
//! ```text
//! sft {
//!     dim 2;
//!     alphabet 0 1;
//!     # hard squares
//!     forbid { (0,0)=1 (1,0)=1 }
//!     forbid { (0,0)=1 (0,1)=1 }
//! }
//! ```
//!
//! Semicolons are optional. Symbols are words over `[A-Za-z0-9_]`; the
//! keywords `sft`, `dim`, `alphabet` and `forbid` cannot be symbols.

use std::collections::HashSet;
use std::fmt;

use sft_core::{Alphabet, FinitePattern, SftSpec};

const KEYWORDS: [&str; 4] = ["sft", "dim", "alphabet", "forbid"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub message: String,
    pub span: Span,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "error",
        };
        write!(
            f,
            "{}:{}: {kind}: {}",
            self.span.line, self.span.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Eq,
    Semi,
    Word(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&(i, c)) = chars.peek() {
        let span_at = |end: usize| Span {
            start: i,
            end,
            line,
            col,
        };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            out.push((t, span_at(i + 1)));
            col += 1;
            continue;
        }
        if c == '-' || is_word_char(c) {
            let mut end = i + c.len_utf8();
            chars.next();
            while let Some(&(j, d)) = chars.peek() {
                if !is_word_char(d) {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            let text = &src[i..end];
            let span = span_at(end);
            if text == "-" {
                return Err(ParseError {
                    kind: ErrorKind::Syntax,
                    message: "`-` must start an integer".into(),
                    span,
                });
            }
            let tok = Tok::Word(text.to_string());
            out.push((tok, span));
            col += end - i;
            continue;
        }
        return Err(ParseError {
            kind: ErrorKind::Syntax,
            message: format!("unexpected character `{c}`"),
            span: span_at(i + c.len_utf8()),
        });
    }
    let end = src.len();
    out.push((
        Tok::Eof,
        Span {
            start: end,
            end,
            line,
            col,
        },
    ));
    Ok(out)
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Source locations of the parsed items, in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpanMap {
    pub dim: Option<Span>,
    pub symbols: Vec<Span>,
    /// One entry per `forbid` block.
    pub forbid: Vec<Span>,
}

#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub source: String,
    pub spec: SftSpec,
    pub spans: SpanMap,
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(ParseError {
            kind: ErrorKind::Syntax,
            message: format!("expected {wanted}, found {}", self.peek().describe()),
            span: self.span(),
        })
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            self.unexpected(&t.describe())
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        match self.peek() {
            Tok::Word(w) if w == kw => Ok(self.bump().1),
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn skip_semis(&mut self) {
        while *self.peek() == Tok::Semi {
            self.bump();
        }
    }

    fn int(&mut self) -> PResult<(i64, Span)> {
        if let Tok::Word(w) = self.peek() {
            let digits = w.strip_prefix('-').unwrap_or(w);
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(v) = w.parse() {
                    return Ok((v, self.bump().1));
                }
            }
        }
        self.unexpected("an integer")
    }

    fn symbol(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Word(w) if !w.starts_with('-') && !KEYWORDS.contains(&w.as_str()) => {
                Ok((w, self.bump().1))
            }
            _ => self.unexpected("a symbol"),
        }
    }
}

fn semantic<T>(message: String, span: Span) -> PResult<T> {
    Err(ParseError {
        kind: ErrorKind::Semantic,
        message,
        span,
    })
}

pub fn parse_spec(source: &str) -> Result<SpecDocument, ParseError> {
    let mut p = Parser {
        toks: tokenize(source)?,
        pos: 0,
    };
    let mut spans = SpanMap::default();
    p.keyword("sft")?;
    p.expect(Tok::LBrace)?;

    p.keyword("dim")?;
    let (dim, dim_span) = p.int()?;
    spans.dim = Some(dim_span);
    if dim < 1 {
        return semantic(format!("dimension must be positive, got {dim}"), dim_span);
    }
    let dim = dim as usize;
    p.skip_semis();

    p.keyword("alphabet")?;
    let mut names = Vec::new();
    loop {
        match p.peek() {
            Tok::Semi | Tok::RBrace => break,
            Tok::Word(w) if w == "forbid" => break,
            _ => {
                let (name, span) = p.symbol()?;
                if names.contains(&name) {
                    return semantic(format!("duplicate symbol `{name}`"), span);
                }
                names.push(name);
                spans.symbols.push(span);
            }
        }
    }
    if names.is_empty() {
        return p.unexpected("a symbol");
    }
    let alphabet = Alphabet::new(names).expect("names checked");
    p.skip_semis();

    let mut forbidden = Vec::new();
    while p.at_keyword("forbid") {
        let start = p.bump().1;
        p.expect(Tok::LBrace)?;
        let mut cells = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let open = p.expect(Tok::LParen)?;
            let mut coord = vec![p.int()?.0];
            while *p.peek() == Tok::Comma {
                p.bump();
                coord.push(p.int()?.0);
            }
            let close = p.expect(Tok::RParen)?;
            let cell_span = Span {
                end: close.end,
                ..open
            };
            if coord.len() != dim {
                return semantic(
                    format!("coordinate has {} components, expected {dim}", coord.len()),
                    cell_span,
                );
            }
            if !seen.insert(coord.clone()) {
                return semantic(
                    format!("duplicate cell {coord:?} in one forbid block"),
                    cell_span,
                );
            }
            p.expect(Tok::Eq)?;
            let (name, sym_span) = p.symbol()?;
            let Some(s) = alphabet.index_of(&name) else {
                return semantic(format!("unknown symbol `{name}`"), sym_span);
            };
            cells.push((coord, s));
            p.skip_semis();
            if *p.peek() == Tok::RBrace {
                break;
            }
        }
        let end = p.expect(Tok::RBrace)?;
        spans.forbid.push(Span {
            end: end.end,
            ..start
        });
        forbidden.push(FinitePattern::new(dim, cells).expect("cells checked"));
        p.skip_semis();
    }
    p.expect(Tok::RBrace)?;
    p.expect(Tok::Eof)?;
    let spec = SftSpec::new(alphabet, dim, forbidden).expect("spec checked");
    Ok(SpecDocument {
        source: source.to_string(),
        spec,
        spans,
    })
}

/// Canonical text form; parses back to an equal spec.
pub fn print_spec(spec: &SftSpec) -> String {
    let mut out = format!("sft {{\n    dim {};\n    alphabet", spec.dim());
    for s in spec.alphabet().symbols() {
        out.push(' ');
        out.push_str(s);
    }
    out.push_str(";\n");
    for p in spec.forbidden() {
        out.push_str("    forbid {");
        for (c, s) in p.cells() {
            let coord: Vec<String> = c.iter().map(i64::to_string).collect();
            out.push_str(&format!(
                " ({})={}",
                coord.join(","),
                spec.alphabet().name(*s)
            ));
        }
        out.push_str(" }\n");
    }
    out.push_str("}\n");
    out
}

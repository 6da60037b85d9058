//! Surface syntax and its parser.
//!
//! ```text
//! decl      := ("coh" | "def" | "check") ident telescope ":" ty [":=" term]
//! telescope := { "(" ident ":" ty ")" }
//! ty        := "*" | term "->" term
//! term      := ident | ident "(" [term {"," term}] ")"
//! ```
//!
//! `#` starts a comment running to the end of the line. `coh` declarations
//! have no body; `def` and `check` require one.

use crate::diag::{CheckResult, DiagKind, Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceTerm {
    Name(Ident),
    App(Ident, Vec<SurfaceTerm>),
}

impl SurfaceTerm {
    pub fn span(&self) -> Span {
        match self {
            SurfaceTerm::Name(id) | SurfaceTerm::App(id, _) => id.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceType {
    Obj(Span),
    /// Source, target, and the position of the `->`.
    Arrow(SurfaceTerm, SurfaceTerm, Span),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Coh,
    Def,
    Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDecl {
    pub kind: DeclKind,
    pub name: Ident,
    pub telescope: Vec<(Ident, SurfaceType)>,
    pub result_ty: SurfaceType,
    pub body: Option<SurfaceTerm>,
    /// Position of the leading keyword.
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Colon,
    Comma,
    Arrow,
    Star,
    Define,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Define => "`:=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: [&str; 3] = ["coh", "def", "check"];

fn parse_error(span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagKind::ParseError, msg).at(span)
}

fn lex(source: &str) -> CheckResult<Vec<(Tok, Span)>> {
    let mut toks = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        match c {
            '#' => {
                while chars.peek().is_some_and(|c| *c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_whitespace() => bump(&mut chars),
            '(' | ')' | ',' | '*' => {
                bump(&mut chars);
                toks.push((
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        _ => Tok::Star,
                    },
                    span,
                ));
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    toks.push((Tok::Define, span));
                } else {
                    toks.push((Tok::Colon, span));
                }
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(parse_error(span, "expected `->`"));
                }
                bump(&mut chars);
                toks.push((Tok::Arrow, span));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(name), span));
            }
            other => return Err(parse_error(span, format!("unexpected character {other:?}"))),
        }
    }
    toks.push((Tok::Eof, Span { line, column }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, context: &str) -> CheckResult<Span> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            Err(parse_error(
                self.span(),
                format!(
                    "expected {} {context}, found {}",
                    tok.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn ident(&mut self, context: &str) -> CheckResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let span = self.next().1;
                Ok(Ident { name, span })
            }
            other => Err(parse_error(
                self.span(),
                format!(
                    "expected an identifier {context}, found {}",
                    other.describe()
                ),
            )),
        }
    }

    fn decl(&mut self) -> CheckResult<SurfaceDecl> {
        let span = self.span();
        let kind = match self.peek() {
            Tok::Ident(k) if k == "coh" => DeclKind::Coh,
            Tok::Ident(k) if k == "def" => DeclKind::Def,
            Tok::Ident(k) if k == "check" => DeclKind::Check,
            other => {
                return Err(parse_error(
                    span,
                    format!(
                        "expected `coh`, `def` or `check`, found {}",
                        other.describe()
                    ),
                ))
            }
        };
        self.next();
        let name = self.ident("naming the declaration")?;
        let mut telescope = Vec::new();
        while *self.peek() == Tok::LParen {
            self.next();
            let x = self.ident("in a telescope entry")?;
            self.expect(Tok::Colon, "after a telescope variable")?;
            let ty = self.ty()?;
            self.expect(Tok::RParen, "closing a telescope entry")?;
            telescope.push((x, ty));
        }
        self.expect(Tok::Colon, "before the declared type")?;
        let result_ty = self.ty()?;
        let body = if *self.peek() == Tok::Define {
            let at = self.next().1;
            if kind == DeclKind::Coh {
                return Err(parse_error(at, "a `coh` declaration has no body"));
            }
            Some(self.term()?)
        } else {
            None
        };
        if kind != DeclKind::Coh && body.is_none() {
            return Err(parse_error(
                self.span(),
                format!("expected `:=` and a body for `{}`", name.name),
            ));
        }
        Ok(SurfaceDecl {
            kind,
            name,
            telescope,
            result_ty,
            body,
            span,
        })
    }

    fn ty(&mut self) -> CheckResult<SurfaceType> {
        if *self.peek() == Tok::Star {
            return Ok(SurfaceType::Obj(self.next().1));
        }
        let src = self.term()?;
        let arrow = self.expect(Tok::Arrow, "after the source of an arrow type")?;
        let tgt = self
            .term()
            .map_err(|d| parse_error(arrow, "expected a target term after `->`").caused_by(d))?;
        Ok(SurfaceType::Arrow(src, tgt, arrow))
    }

    fn term(&mut self) -> CheckResult<SurfaceTerm> {
        let head = self.ident("as a term")?;
        if *self.peek() != Tok::LParen {
            return Ok(SurfaceTerm::Name(head));
        }
        self.next();
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.next();
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen, "closing an argument list")?;
        Ok(SurfaceTerm::App(head, args))
    }
}

pub fn parse(source: &str) -> CheckResult<Vec<SurfaceDecl>> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let mut decls = Vec::new();
    while *p.peek() != Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

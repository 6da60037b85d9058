//! Serialisations of a checked declaration store.
//!
//! The s-expression form is canonical: one ASCII line per declaration,
//!
//! ```text
//! (coh NAME CTX TY)
//! (def NAME CTX TY TM)
//! ```
//!
//! where `CTX = (ctx (0 TY) (1 TY) ...)`, `TY = obj | (arrow TY TM TM)`,
//! `TM = (var N) | (coh CTX TY SUB)` and `SUB = (sub (0 TM) ...)`. A
//! coherence carries its whole index inline, so a dump can be read back
//! without the source file; [`read_sexpr`] re-validates every index.
//!
//! The JSON form mirrors the same tree as `{sort, node, children}` objects.

use serde::Serialize;

use crate::diag::{CheckResult, DiagKind, Diagnostic, Span};
use crate::elab::{DeclStore, Entry};
use crate::rules::Checker;
use crate::syntax::{RawCtx, RawSub, RawTerm, RawType, VarName};
use crate::theory::{make_index_with, Catt, CohIndex};
use crate::{Ctx, Sub, Tm, Ty};

pub fn write_sexpr(store: &DeclStore) -> String {
    let mut out = String::new();
    for (name, entry) in store.iter() {
        match entry {
            Entry::Coh(i) => out.push_str(&format!("(coh {name} {} {})\n", i.ctx(), i.ty())),
            Entry::Def { ctx, ty, body } => {
                out.push_str(&format!("(def {name} {ctx} {ty} {body})\n"))
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub sort: &'static str,
    pub node: String,
    pub children: Vec<Node>,
}

impl Node {
    fn leaf(sort: &'static str, node: impl ToString) -> Node {
        Node {
            sort,
            node: node.to_string(),
            children: Vec::new(),
        }
    }

    fn branch(sort: &'static str, node: &str, children: Vec<Node>) -> Node {
        Node {
            sort,
            node: node.to_string(),
            children,
        }
    }
}

fn ty_node(ty: &Ty) -> Node {
    match ty {
        RawType::Obj => Node::leaf("type", "obj"),
        RawType::Arrow(a, t, u) => {
            Node::branch("type", "arrow", vec![ty_node(a), tm_node(t), tm_node(u)])
        }
    }
}

fn tm_node(tm: &Tm) -> Node {
    match tm {
        RawTerm::Var(x) => Node::branch("term", "var", vec![Node::leaf("level", x)]),
        RawTerm::Coh(i, s) => Node::branch(
            "term",
            "coh",
            vec![ctx_node(i.ctx()), ty_node(i.ty()), sub_node(s)],
        ),
    }
}

fn sub_node(s: &Sub) -> Node {
    let children =
        s.0.iter()
            .map(|(x, t)| Node::branch("binding", "map", vec![Node::leaf("level", x), tm_node(t)]))
            .collect();
    Node::branch("sub", "sub", children)
}

fn ctx_node(c: &Ctx) -> Node {
    let children =
        c.0.iter()
            .map(|(x, a)| Node::branch("entry", "decl", vec![Node::leaf("level", x), ty_node(a)]))
            .collect();
    Node::branch("ctx", "ctx", children)
}

pub fn to_json(store: &DeclStore) -> serde_json::Value {
    let decls: Vec<Node> = store
        .iter()
        .map(|(name, entry)| match entry {
            Entry::Coh(i) => Node::branch(
                "decl",
                "coh",
                vec![Node::leaf("name", name), ctx_node(i.ctx()), ty_node(i.ty())],
            ),
            Entry::Def { ctx, ty, body } => Node::branch(
                "decl",
                "def",
                vec![
                    Node::leaf("name", name),
                    ctx_node(ctx),
                    ty_node(ty),
                    tm_node(body),
                ],
            ),
        })
        .collect();
    serde_json::to_value(Node::branch("file", "decls", decls)).expect("tree serialises")
}

pub fn write_json(store: &DeclStore) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(store)).expect("tree serialises");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String, Span),
    List(Vec<Sexp>, Span),
}

impl Sexp {
    fn span(&self) -> Span {
        match self {
            Sexp::Atom(_, s) | Sexp::List(_, s) => *s,
        }
    }
}

fn bad(span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagKind::ParseError, msg).at(span)
}

fn read_all(text: &str) -> CheckResult<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Span)> = vec![(Vec::new(), Span { line: 1, column: 1 })];
    let mut atom: Option<(String, Span)> = None;
    let (mut line, mut column) = (1, 1);
    for c in text.chars() {
        let here = Span { line, column };
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some((a, sp)) = atom.take() {
                stack
                    .last_mut()
                    .expect("root frame")
                    .0
                    .push(Sexp::Atom(a, sp));
            }
        }
        match c {
            '(' => stack.push((Vec::new(), here)),
            ')' => {
                if stack.len() == 1 {
                    return Err(bad(here, "unbalanced `)`"));
                }
                let (items, sp) = stack.pop().expect("checked length");
                stack
                    .last_mut()
                    .expect("root frame")
                    .0
                    .push(Sexp::List(items, sp));
            }
            c if c.is_whitespace() => {}
            c if c.is_ascii_graphic() => {
                atom.get_or_insert_with(|| (String::new(), here)).0.push(c)
            }
            other => return Err(bad(here, format!("unexpected character {other:?}"))),
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    if let Some((a, sp)) = atom.take() {
        stack
            .last_mut()
            .expect("root frame")
            .0
            .push(Sexp::Atom(a, sp));
    }
    if stack.len() != 1 {
        let (_, sp) = stack.pop().expect("unclosed frame");
        return Err(bad(sp, "unclosed `(`"));
    }
    Ok(stack.pop().expect("root frame").0)
}

struct Reader {
    checker: Checker<'static, Catt>,
}

static CATT: Catt = Catt;

impl Reader {
    fn list<'a>(&self, s: &'a Sexp, head: &str, len: Option<usize>) -> CheckResult<&'a [Sexp]> {
        match s {
            Sexp::List(items, sp) => match items.first() {
                Some(Sexp::Atom(h, _)) if h == head => {
                    if len.is_some_and(|n| n != items.len() - 1) {
                        return Err(bad(
                            *sp,
                            format!("`{head}` expects {} fields", len.unwrap_or(0)),
                        ));
                    }
                    Ok(&items[1..])
                }
                _ => Err(bad(*sp, format!("expected `({head} ...)`"))),
            },
            Sexp::Atom(_, sp) => Err(bad(*sp, format!("expected `({head} ...)`"))),
        }
    }

    fn level(&self, s: &Sexp) -> CheckResult<VarName> {
        match s {
            Sexp::Atom(a, sp) => a
                .parse()
                .map(VarName)
                .map_err(|_| bad(*sp, "expected a level")),
            Sexp::List(_, sp) => Err(bad(*sp, "expected a level")),
        }
    }

    fn pair<'a>(&self, s: &'a Sexp) -> CheckResult<(VarName, &'a Sexp)> {
        match s {
            Sexp::List(items, _) if items.len() == 2 => Ok((self.level(&items[0])?, &items[1])),
            other => Err(bad(other.span(), "expected `(LEVEL VALUE)`")),
        }
    }

    fn ty(&self, s: &Sexp) -> CheckResult<Ty> {
        if let Sexp::Atom(a, _) = s {
            if a == "obj" {
                return Ok(RawType::Obj);
            }
        }
        let f = self.list(s, "arrow", Some(3))?;
        Ok(RawType::Arrow(
            Box::new(self.ty(&f[0])?),
            Box::new(self.tm(&f[1])?),
            Box::new(self.tm(&f[2])?),
        ))
    }

    fn tm(&self, s: &Sexp) -> CheckResult<Tm> {
        if let Sexp::List(items, _) = s {
            if matches!(items.first(), Some(Sexp::Atom(h, _)) if h == "coh") {
                let f = self.list(s, "coh", Some(3))?;
                let index = self.index(&f[0], &f[1])?;
                return Ok(RawTerm::Coh(index, self.sub(&f[2])?));
            }
        }
        let f = self.list(s, "var", Some(1))?;
        Ok(RawTerm::Var(self.level(&f[0])?))
    }

    fn sub(&self, s: &Sexp) -> CheckResult<Sub> {
        let f = self.list(s, "sub", None)?;
        let mut out = RawSub::new();
        for item in f {
            let (x, v) = self.pair(item)?;
            out.push(x, self.tm(v)?);
        }
        Ok(out)
    }

    fn ctx(&self, s: &Sexp) -> CheckResult<Ctx> {
        let f = self.list(s, "ctx", None)?;
        let mut out = RawCtx::new();
        for item in f {
            let (x, v) = self.pair(item)?;
            out.0.push((x, self.ty(v)?));
        }
        Ok(out)
    }

    fn index(&self, ctx: &Sexp, ty: &Sexp) -> CheckResult<CohIndex> {
        let (c, t) = (self.ctx(ctx)?, self.ty(ty)?);
        make_index_with(&self.checker, &c, &t).map_err(|d| d.at(ctx.span()))
    }

    fn name(&self, s: &Sexp) -> CheckResult<String> {
        match s {
            Sexp::Atom(a, _) => Ok(a.clone()),
            Sexp::List(_, sp) => Err(bad(*sp, "expected a declaration name")),
        }
    }
}

/// Reads a dump back, re-validating every coherence index and definition.
pub fn read_sexpr(text: &str) -> CheckResult<DeclStore> {
    let r = Reader {
        checker: Checker::new(&CATT),
    };
    let mut store = DeclStore::new();
    for item in read_all(text)? {
        let is_coh = matches!(&item, Sexp::List(items, _) if matches!(items.first(), Some(Sexp::Atom(h, _)) if h == "coh"));
        let (name, entry) = if is_coh {
            let f = r.list(&item, "coh", Some(3))?;
            (r.name(&f[0])?, Entry::Coh(r.index(&f[1], &f[2])?))
        } else {
            let f = r.list(&item, "def", Some(4))?;
            let (ctx, ty, body) = (r.ctx(&f[1])?, r.ty(&f[2])?, r.tm(&f[3])?);
            r.checker
                .check_tm(&ctx, &body, &ty)
                .map_err(|d| d.at(item.span()))?;
            (r.name(&f[0])?, Entry::Def { ctx, ty, body })
        };
        if store.get(&name).is_some() {
            return Err(Diagnostic::new(
                DiagKind::DuplicateName,
                format!("`{name}` is declared twice"),
            )
            .at(item.span()));
        }
        store.insert(name, entry);
    }
    Ok(store)
}

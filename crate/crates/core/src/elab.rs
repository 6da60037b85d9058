//! Elaboration of surface declarations into CaTT raw syntax.
//!
//! Telescope variables become consecutive De Bruijn levels. An arrow type
//! `t -> u` gets as base the common inferred type of its endpoints.
//! Applications of coherences take every argument positionally; definitions
//! are inlined at their use sites.

use indexmap::IndexMap;

use crate::diag::{CheckResult, DiagKind, Diagnostic};
use crate::rules::Checker;
use crate::surface::{DeclKind, Ident, SurfaceDecl, SurfaceTerm, SurfaceType};
use crate::syntax::{RawSub, RawTerm, RawType, VarName};
use crate::theory::{make_index_with, Catt, CohIndex};
use crate::{Ctx, Sub, Tm, Ty};

static CATT: Catt = Catt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Coh(CohIndex),
    Def { ctx: Ctx, ty: Ty, body: Tm },
}

impl Entry {
    pub fn ctx(&self) -> &Ctx {
        match self {
            Entry::Coh(i) => i.ctx(),
            Entry::Def { ctx, .. } => ctx,
        }
    }
}

/// Checked declarations, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeclStore {
    entries: IndexMap<String, Entry>,
}

impl DeclStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Entry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds an entry; the caller vouches that it has been checked.
    pub fn insert(&mut self, name: String, entry: Entry) {
        self.entries.insert(name, entry);
    }
}

/// The result of elaborating one declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elaborated {
    Coh {
        name: String,
        index: CohIndex,
    },
    Def {
        name: String,
        ctx: Ctx,
        ty: Ty,
        body: Tm,
    },
    Check {
        name: String,
        ctx: Ctx,
        ty: Ty,
        body: Tm,
    },
}

struct Scope {
    names: Vec<String>,
    ctx: Ctx,
}

impl Scope {
    fn lookup(&self, name: &str) -> Option<VarName> {
        self.names.iter().rposition(|n| n == name).map(VarName)
    }
}

pub struct Elaborator {
    checker: Checker<'static, Catt>,
    store: DeclStore,
}

impl Default for Elaborator {
    fn default() -> Self {
        Self::new()
    }
}

impl Elaborator {
    pub fn new() -> Self {
        Elaborator {
            checker: Checker::new(&CATT),
            store: DeclStore::new(),
        }
    }

    /// Same as [`Elaborator::new`] but never reuses index validations.
    pub fn without_cache() -> Self {
        Elaborator {
            checker: Checker::without_cache(&CATT),
            store: DeclStore::new(),
        }
    }

    pub fn store(&self) -> &DeclStore {
        &self.store
    }

    pub fn into_store(self) -> DeclStore {
        self.store
    }

    /// Elaborates and, for `coh` and `def`, records the declaration.
    pub fn declare(&mut self, decl: &SurfaceDecl) -> CheckResult<Elaborated> {
        let out = self.elaborate(decl)?;
        match &out {
            Elaborated::Coh { name, index } => {
                self.store.insert(name.clone(), Entry::Coh(index.clone()))
            }
            Elaborated::Def {
                name,
                ctx,
                ty,
                body,
            } => self.store.insert(
                name.clone(),
                Entry::Def {
                    ctx: ctx.clone(),
                    ty: ty.clone(),
                    body: body.clone(),
                },
            ),
            Elaborated::Check { .. } => {}
        }
        Ok(out)
    }

    /// Elaborates against the current store without modifying it.
    pub fn elaborate(&self, decl: &SurfaceDecl) -> CheckResult<Elaborated> {
        let name = decl.name.name.clone();
        if decl.kind != DeclKind::Check && self.store.get(&name).is_some() {
            return Err(Diagnostic::new(
                DiagKind::DuplicateName,
                format!("`{name}` is already declared"),
            )
            .at(decl.name.span));
        }
        let scope = self.telescope(decl)?;
        let ty = self.ty(&scope, &decl.result_ty)?;
        match decl.kind {
            DeclKind::Coh => {
                let index = make_index_with(&self.checker, &scope.ctx, &ty)
                    .map_err(|d| d.at(decl.name.span))?;
                Ok(Elaborated::Coh { name, index })
            }
            DeclKind::Def | DeclKind::Check => {
                let surface_body = decl.body.as_ref().ok_or_else(|| {
                    Diagnostic::new(DiagKind::ParseError, "missing body").at(decl.span)
                })?;
                let (body, found) = self.term(&scope, surface_body)?;
                if found != ty {
                    return Err(Diagnostic::new(
                        DiagKind::TypeMismatch,
                        format!("body of `{name}` does not have the declared type"),
                    )
                    .expected_actual(&ty, &found)
                    .at(surface_body.span()));
                }
                let ctx = scope.ctx;
                Ok(if decl.kind == DeclKind::Def {
                    Elaborated::Def {
                        name,
                        ctx,
                        ty,
                        body,
                    }
                } else {
                    Elaborated::Check {
                        name,
                        ctx,
                        ty,
                        body,
                    }
                })
            }
        }
    }

    /// The context declared by the telescope, checked entry by entry.
    pub fn elaborate_telescope(&self, decl: &SurfaceDecl) -> CheckResult<Ctx> {
        Ok(self.telescope(decl)?.ctx)
    }

    fn telescope(&self, decl: &SurfaceDecl) -> CheckResult<Scope> {
        let mut scope = Scope {
            names: Vec::new(),
            ctx: Ctx::new(),
        };
        for (x, sty) in &decl.telescope {
            if scope.lookup(&x.name).is_some() {
                return Err(Diagnostic::new(
                    DiagKind::DuplicateName,
                    format!("`{}` is bound twice in the telescope", x.name),
                )
                .at(x.span));
            }
            let ty = self.ty(&scope, sty)?;
            scope.ctx.extend(ty);
            scope.names.push(x.name.clone());
        }
        Ok(scope)
    }

    fn ty(&self, scope: &Scope, sty: &SurfaceType) -> CheckResult<Ty> {
        match sty {
            SurfaceType::Obj(_) => Ok(RawType::Obj),
            SurfaceType::Arrow(src, tgt, at) => {
                let (s, s_ty) = self.term(scope, src)?;
                let (t, t_ty) = self.term(scope, tgt)?;
                if s_ty != t_ty {
                    return Err(Diagnostic::new(
                        DiagKind::EndpointTypeMismatch,
                        "the two endpoints of an arrow have different types",
                    )
                    .expected_actual(&s_ty, &t_ty)
                    .at(*at));
                }
                Ok(RawType::Arrow(Box::new(s_ty), Box::new(s), Box::new(t)))
            }
        }
    }

    fn term(&self, scope: &Scope, st: &SurfaceTerm) -> CheckResult<(Tm, Ty)> {
        let (head, args) = match st {
            SurfaceTerm::Name(id) => (id, None),
            SurfaceTerm::App(id, args) => (id, Some(args)),
        };
        if let Some(x) = scope.lookup(&head.name) {
            if args.is_some() {
                return Err(arity(
                    head,
                    0,
                    args.map_or(0, Vec::len),
                    "is a variable and takes",
                ));
            }
            let tm = RawTerm::Var(x);
            let ty = self
                .checker
                .infer_tm(&scope.ctx, &tm)
                .map_err(|d| d.at(head.span))?;
            return Ok((tm, ty));
        }
        let Some(entry) = self.store.get(&head.name) else {
            return Err(Diagnostic::new(
                DiagKind::UnknownName,
                format!("unknown name `{}`", head.name),
            )
            .at(head.span));
        };
        let target = entry.ctx();
        let given = args.map_or(0, Vec::len);
        if given != target.len() {
            return Err(arity(head, target.len(), given, "expects"));
        }
        let mut sub: Sub = RawSub::new();
        for ((x, _), a) in target.0.iter().zip(args.into_iter().flatten()) {
            let (t, _) = self.term(scope, a)?;
            sub.push(*x, t);
        }
        let tm = match entry {
            Entry::Coh(i) => RawTerm::Coh(i.clone(), sub),
            Entry::Def { ctx, body, .. } => {
                self.checker.check_sub(&scope.ctx, &sub, ctx).map_err(|d| {
                    Diagnostic::new(
                        DiagKind::SubstitutionMismatch,
                        format!("arguments of `{}` do not match its telescope", head.name),
                    )
                    .caused_by(d)
                    .at(head.span)
                })?;
                body.apply(&sub)
            }
        };
        let ty = self
            .checker
            .infer_tm(&scope.ctx, &tm)
            .map_err(|d| d.at(head.span))?;
        Ok((tm, ty))
    }
}

fn arity(head: &Ident, expected: usize, given: usize, what: &str) -> Diagnostic {
    Diagnostic::new(
        DiagKind::ArityMismatch,
        format!("`{}` {what} {expected} arguments, {given} given", head.name),
    )
    .expected_actual(expected, given)
    .at(head.span)
}

/// Elaborates a whole file, stopping at the first failure.
pub fn elaborate_all(decls: &[SurfaceDecl]) -> CheckResult<DeclStore> {
    let mut e = Elaborator::new();
    for d in decls {
        e.declare(d)?;
    }
    Ok(e.into_store())
}

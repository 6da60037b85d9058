//! The judgment engine shared by every globular type theory.
//!
//! A theory is given by a [`Signature`]: a set of indices, each carrying a
//! context and a type. The four judgments `Γ ⊢`, `Γ ⊢ A`, `Γ ⊢ t : A` and
//! `Δ ⊢ γ : Γ` are syntax-directed (there is no conversion rule), so the
//! checker infers the unique type of a term and compares it structurally.

use std::cell::RefCell;
use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;

use crate::diag::{CheckResult, DiagKind, Diagnostic};
use crate::syntax::{subst_ty, RawCtx, RawSub, RawTerm, RawType, VarName};

/// Requirements on the type of coherence indices.
pub trait IndexType: Clone + Eq + Hash + fmt::Debug + fmt::Display {}

impl<T: Clone + Eq + Hash + fmt::Debug + fmt::Display> IndexType for T {}

/// The context and type an index is declared with.
pub type IndexDecl<'a, I> = (&'a RawCtx<I>, &'a RawType<I>);

pub trait Signature {
    type Index: IndexType;

    /// The context and type of an index, or `None` if the index does not
    /// belong to the theory.
    fn lookup<'a>(&'a self, index: &'a Self::Index) -> Option<IndexDecl<'a, Self::Index>>;

    /// Whether every index promises `dim(ctx) <= dim(ty)`.
    fn wf_dimension(&self) -> bool {
        false
    }
}

/// The theory Glob: no term constructors besides variables. Coherence nodes
/// of any index type are rejected.
pub struct Glob<I>(PhantomData<fn() -> I>);

impl<I> Glob<I> {
    pub fn new() -> Self {
        Glob(PhantomData)
    }
}

impl<I> Default for Glob<I> {
    fn default() -> Self {
        Self::new()
    }
}

impl<I: IndexType> Signature for Glob<I> {
    type Index = I;

    fn lookup<'a>(&'a self, _: &'a I) -> Option<(&'a RawCtx<I>, &'a RawType<I>)> {
        None
    }
}

/// Outcome of a successful check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgment<I> {
    CtxOk,
    TyOk,
    TmOk(RawType<I>),
    SubOk,
}

/// Checks judgments against a signature.
///
/// Validation of an index (`Ci ⊢ Ti`) is remembered for the lifetime of the
/// checker unless it was built with [`Checker::without_cache`]. A checker is
/// a per-invocation value; share the signature, not the checker, between
/// threads.
pub struct Checker<'s, S: Signature> {
    sig: &'s S,
    memo: bool,
    validated: RefCell<HashSet<S::Index>>,
    in_progress: RefCell<Vec<S::Index>>,
}

impl<'s, S: Signature> Checker<'s, S> {
    pub fn new(sig: &'s S) -> Self {
        Checker {
            sig,
            memo: true,
            validated: RefCell::default(),
            in_progress: RefCell::default(),
        }
    }

    pub fn without_cache(sig: &'s S) -> Self {
        Checker {
            memo: false,
            ..Self::new(sig)
        }
    }

    pub fn signature(&self) -> &'s S {
        self.sig
    }

    /// `Γ ⊢`.
    pub fn check_ctx(&self, ctx: &RawCtx<S::Index>) -> CheckResult<Judgment<S::Index>> {
        for (k, (x, ty)) in ctx.0.iter().enumerate() {
            let prefix = &ctx.0[..k];
            self.ty_in(prefix, ty).map_err(|mut d| {
                d.message = format!("in the declaration of variable {x}: {}", d.message);
                d
            })?;
            if x.0 != k {
                return Err(Diagnostic::new(
                    DiagKind::NameOutOfOrder,
                    format!("declaration at position {k} must be named {k}"),
                )
                .expected_actual(k, x));
            }
        }
        Ok(Judgment::CtxOk)
    }

    /// `Γ ⊢ A`.
    pub fn check_ty(
        &self,
        ctx: &RawCtx<S::Index>,
        ty: &RawType<S::Index>,
    ) -> CheckResult<Judgment<S::Index>> {
        self.check_ctx(ctx)?;
        self.ty_in(&ctx.0, ty)?;
        Ok(Judgment::TyOk)
    }

    /// The unique `A` with `Γ ⊢ t : A`.
    pub fn infer_tm(
        &self,
        ctx: &RawCtx<S::Index>,
        tm: &RawTerm<S::Index>,
    ) -> CheckResult<RawType<S::Index>> {
        self.check_ctx(ctx)?;
        self.infer_in(&ctx.0, tm)
    }

    /// `Γ ⊢ t : A`.
    pub fn check_tm(
        &self,
        ctx: &RawCtx<S::Index>,
        tm: &RawTerm<S::Index>,
        ty: &RawType<S::Index>,
    ) -> CheckResult<Judgment<S::Index>> {
        let actual = self.infer_tm(ctx, tm)?;
        if actual != *ty {
            return Err(Diagnostic::new(
                DiagKind::TypeMismatch,
                format!("term {tm} has another type"),
            )
            .expected_actual(ty, &actual));
        }
        Ok(Judgment::TmOk(actual))
    }

    /// `Δ ⊢ γ : Γ`.
    pub fn check_sub(
        &self,
        source: &RawCtx<S::Index>,
        sub: &RawSub<S::Index>,
        target: &RawCtx<S::Index>,
    ) -> CheckResult<Judgment<S::Index>> {
        self.check_ctx(source)?;
        self.check_ctx(target)?;
        self.sub_in(&source.0, sub, &target.0)?;
        Ok(Judgment::SubOk)
    }

    /// Inverse of [`Checker::ty_of_sphere_sub`]: the dimension `n` of `A` and
    /// the substitution `γ : Γ -> 𝕊ⁿ` with `⇒ᵤ(n)[γ] = A`.
    pub fn classify_ty(
        &self,
        ctx: &RawCtx<S::Index>,
        ty: &RawType<S::Index>,
    ) -> CheckResult<(usize, RawSub<S::Index>)> {
        self.check_ty(ctx, ty)?;
        Ok(classify(ty))
    }

    pub fn ty_of_sphere_sub(
        &self,
        ctx: &RawCtx<S::Index>,
        n: usize,
        sub: &RawSub<S::Index>,
    ) -> CheckResult<RawType<S::Index>> {
        self.check_sub(ctx, sub, &sphere(n))?;
        Ok(u_arrow(n).apply(sub))
    }

    // The `*_in` functions assume the context has already been checked.

    fn ty_in(
        &self,
        ctx: &[(VarName, RawType<S::Index>)],
        ty: &RawType<S::Index>,
    ) -> CheckResult<()> {
        match ty {
            RawType::Obj => Ok(()),
            RawType::Arrow(base, src, tgt) => {
                for (side, t) in [("source", src), ("target", tgt)] {
                    let found = self.infer_in(ctx, t)?;
                    if found != **base {
                        return Err(Diagnostic::new(
                            DiagKind::EndpointTypeMismatch,
                            format!("{side} {t} of an arrow does not have the arrow's base type"),
                        )
                        .expected_actual(base, &found));
                    }
                }
                Ok(())
            }
        }
    }

    fn infer_in(
        &self,
        ctx: &[(VarName, RawType<S::Index>)],
        tm: &RawTerm<S::Index>,
    ) -> CheckResult<RawType<S::Index>> {
        match tm {
            RawTerm::Var(x) => match ctx.get(x.0) {
                Some((_, ty)) => Ok(ty.clone()),
                None => Err(Diagnostic::new(
                    DiagKind::UnboundVariable,
                    format!(
                        "variable {x} is not declared in a context of length {}",
                        ctx.len()
                    ),
                )),
            },
            RawTerm::Coh(index, sub) => {
                let Some((ictx, ity)) = self.sig.lookup(index) else {
                    return Err(Diagnostic::new(
                        DiagKind::UnknownIndex,
                        "the theory has no such term constructor",
                    ));
                };
                self.validate_index(index, ictx, ity)?;
                self.sub_in(ctx, sub, &ictx.0).map_err(|d| {
                    Diagnostic::new(
                        DiagKind::SubstitutionMismatch,
                        "arguments do not form a substitution into the coherence context",
                    )
                    .caused_by(d)
                })?;
                Ok(ity.apply(sub))
            }
        }
    }

    fn validate_index(
        &self,
        index: &S::Index,
        ictx: &RawCtx<S::Index>,
        ity: &RawType<S::Index>,
    ) -> CheckResult<()> {
        if self.memo && self.validated.borrow().contains(index) {
            return Ok(());
        }
        if self.in_progress.borrow().contains(index) {
            return Err(Diagnostic::new(
                DiagKind::IndexTypeIllFormed,
                "coherence index refers to itself",
            ));
        }
        self.in_progress.borrow_mut().push(index.clone());
        let result = self.validate_index_uncached(ictx, ity);
        self.in_progress.borrow_mut().pop();
        result?;
        if self.memo {
            self.validated.borrow_mut().insert(index.clone());
        }
        Ok(())
    }

    fn validate_index_uncached(
        &self,
        ictx: &RawCtx<S::Index>,
        ity: &RawType<S::Index>,
    ) -> CheckResult<()> {
        let ill_formed = |d: Diagnostic| {
            Diagnostic::new(
                DiagKind::IndexTypeIllFormed,
                "coherence type is not derivable in its context",
            )
            .caused_by(d)
        };
        if self.sig.wf_dimension() && ictx.dim() > ity.dim() {
            return Err(Diagnostic::new(
                DiagKind::WfViolation,
                format!(
                    "coherence context has dimension {} above its type's {}",
                    ictx.dim(),
                    ity.dim()
                ),
            ));
        }
        self.check_ctx(ictx).map_err(ill_formed)?;
        self.ty_in(&ictx.0, ity).map_err(ill_formed)
    }

    fn sub_in(
        &self,
        source: &[(VarName, RawType<S::Index>)],
        sub: &RawSub<S::Index>,
        target: &[(VarName, RawType<S::Index>)],
    ) -> CheckResult<()> {
        if sub.len() != target.len() {
            return Err(Diagnostic::new(
                DiagKind::LengthMismatch,
                "substitution and target context differ in length",
            )
            .expected_actual(target.len(), sub.len()));
        }
        for (k, ((x, t), (y, a))) in sub.0.iter().zip(target).enumerate() {
            if x != y {
                return Err(Diagnostic::new(
                    DiagKind::TargetNameMismatch,
                    format!("entry {k} of the substitution must target variable {y}"),
                )
                .expected_actual(y, x));
            }
            let expected = subst_ty(a, &sub.0[..k]);
            let found = self.infer_in(source, t)?;
            if found != expected {
                return Err(Diagnostic::new(
                    DiagKind::TypeMismatch,
                    format!("value {t} given for variable {y} has the wrong type"),
                )
                .expected_actual(&expected, &found));
            }
        }
        Ok(())
    }
}

fn classify<I: Clone>(ty: &RawType<I>) -> (usize, RawSub<I>) {
    match ty {
        RawType::Obj => (0, RawSub::new()),
        RawType::Arrow(base, src, tgt) => {
            let (n, mut sub) = classify(base);
            sub.push(VarName(2 * n), (**src).clone());
            sub.push(VarName(2 * n + 1), (**tgt).clone());
            (n + 1, sub)
        }
    }
}

/// `⇒ᵤ n`, the generic type of dimension `n`.
pub fn u_arrow<I: Clone>(n: usize) -> RawType<I> {
    let mut ty = RawType::Obj;
    for k in 0..n {
        ty = RawType::Arrow(
            Box::new(ty),
            Box::new(RawTerm::Var(VarName(2 * k))),
            Box::new(RawTerm::Var(VarName(2 * k + 1))),
        );
    }
    ty
}

/// The sphere context `𝕊 n`, of length `2n`.
pub fn sphere<I: Clone>(n: usize) -> RawCtx<I> {
    let mut ctx = RawCtx::new();
    for k in 0..n {
        ctx.extend(u_arrow(k));
        ctx.extend(u_arrow(k));
    }
    ctx
}

/// The disk context `𝔻 n = 𝕊 n, ⇒ᵤ n`.
pub fn disk<I: Clone>(n: usize) -> RawCtx<I> {
    sphere(n).with(u_arrow(n))
}

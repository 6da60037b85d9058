//! Ps-contexts: recognition, the ◃ order, and boundary variables.
//!
//! A ps-context is built by the moves
//!
//! * `Start`: `(x : *) ⊢ps x : *`
//! * `Extend`: from focus `x : A`, declare `y : A` and `f : x -> y`; focus on `f`
//! * `Drop`: from focus `f : x -> y` move to `y`
//!
//! and is accepted once the focus is an object. The moves leading to a
//! given context are unique, and [`check_ps`] finds them greedily.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diag::{CheckResult, DiagKind, Diagnostic};
use crate::rules::{Checker, Glob, IndexType};
use crate::syntax::{RawCtx, RawTerm, RawType, VarName, VarSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PsMove {
    Start,
    Extend,
    Drop,
}

impl fmt::Display for PsMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PsMove::Start => "start",
            PsMove::Extend => "extend",
            PsMove::Drop => "drop",
        })
    }
}

/// The recorded derivation of `Γ ⊢ps`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PsDerivation<I> {
    ctx: RawCtx<I>,
    moves: Vec<PsMove>,
    focus: VarName,
}

impl<I: IndexType> PsDerivation<I> {
    pub fn ctx(&self) -> &RawCtx<I> {
        &self.ctx
    }

    pub fn moves(&self) -> &[PsMove] {
        &self.moves
    }

    /// The object the derivation ends on.
    pub fn final_focus(&self) -> VarName {
        self.focus
    }

    /// Runs `moves` from scratch, returning the context they build together
    /// with the final focus and its type. `None` if a move does not apply.
    pub fn replay(moves: &[PsMove]) -> Option<(RawCtx<I>, VarName, RawType<I>)> {
        let (first, rest) = moves.split_first()?;
        if *first != PsMove::Start {
            return None;
        }
        let mut ctx = RawCtx::new().with(RawType::Obj);
        let mut focus = (VarName(0), RawType::Obj);
        for m in rest {
            match m {
                PsMove::Start => return None,
                PsMove::Extend => {
                    let (x, a) = focus;
                    let y = ctx.extend(a.clone());
                    let ty = RawType::Arrow(
                        Box::new(a),
                        Box::new(RawTerm::Var(x)),
                        Box::new(RawTerm::Var(y)),
                    );
                    let f = ctx.extend(ty.clone());
                    focus = (f, ty);
                }
                PsMove::Drop => focus = drop_focus(&focus.1)?,
            }
        }
        Some((ctx, focus.0, focus.1))
    }

    /// `(dim A, ℓ)` for each `Extend`, where `A` is the focus type and `ℓ`
    /// the name of the new parallel variable.
    fn extensions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut focus_dim = 0;
        let mut len = 1;
        for m in &self.moves {
            match m {
                PsMove::Start => {}
                PsMove::Extend => {
                    out.push((focus_dim, len));
                    len += 2;
                    focus_dim += 1;
                }
                PsMove::Drop => focus_dim -= 1,
            }
        }
        out
    }
}

fn drop_focus<I: Clone>(ty: &RawType<I>) -> Option<(VarName, RawType<I>)> {
    match ty {
        RawType::Arrow(base, src, tgt) => {
            src.as_var()?;
            Some((tgt.as_var()?, (**base).clone()))
        }
        RawType::Obj => None,
    }
}

fn not_ps(reason: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagKind::NotPs, reason)
}

/// Decides `Γ ⊢ps`, returning the unique derivation.
pub fn check_ps<I: IndexType>(ctx: &RawCtx<I>) -> CheckResult<PsDerivation<I>> {
    let glob = Glob::<I>::new();
    Checker::new(&glob)
        .check_ctx(ctx)
        .map_err(|d| not_ps("not a well-formed context of the theory Glob").caused_by(d))?;

    let entries = &ctx.0;
    match entries.first() {
        Some((_, RawType::Obj)) => {}
        Some((_, ty)) => {
            return Err(not_ps(format!(
                "first declaration has type {ty}, not an object"
            )))
        }
        None => return Err(not_ps("the empty context is not a ps-context")),
    }
    let mut moves = vec![PsMove::Start];
    let mut focus = (VarName(0), RawType::Obj);
    let mut pos = 1;
    while pos < entries.len() {
        let (y, b) = &entries[pos];
        while focus.1 != *b {
            match drop_focus(&focus.1) {
                Some(next) => {
                    moves.push(PsMove::Drop);
                    focus = next;
                }
                None => {
                    return Err(not_ps(format!(
                        "declaration of {y} : {b} does not extend any cell of the focus chain"
                    )))
                }
            }
        }
        let expected = RawType::Arrow(
            Box::new(b.clone()),
            Box::new(RawTerm::Var(focus.0)),
            Box::new(RawTerm::Var(*y)),
        );
        match entries.get(pos + 1) {
            Some((_, ty)) if *ty == expected => {}
            Some((f, ty)) => {
                return Err(not_ps(format!(
                    "declaration of {f} must have type {expected}, found {ty}"
                )))
            }
            None => {
                return Err(not_ps(format!(
                    "declaration of {y} is not followed by a filler arrow"
                )))
            }
        }
        moves.push(PsMove::Extend);
        focus = (VarName(pos + 1), expected);
        pos += 2;
    }
    while focus.1 != RawType::Obj {
        match drop_focus(&focus.1) {
            Some(next) => {
                moves.push(PsMove::Drop);
                focus = next;
            }
            None => return Err(not_ps("focus cannot be dropped back to an object")),
        }
    }
    Ok(PsDerivation {
        ctx: ctx.clone(),
        moves,
        focus: focus.0,
    })
}

/// Boundary list in dimension `i`: which variables lie in the `i`-source.
pub fn src_vars<I: IndexType>(d: &PsDerivation<I>, i: usize) -> Vec<VarName> {
    let mut out = if i == 0 { vec![] } else { vec![VarName(0)] };
    for (dim_a, l) in d.extensions() {
        if i > dim_a + 1 {
            out.push(VarName(l));
            out.push(VarName(l + 1));
        }
    }
    out
}

/// Boundary list in dimension `i` on the target side. When the new cells
/// have dimension exactly `i`, the most recently added variable is replaced
/// by the new parallel one.
pub fn tgt_vars<I: IndexType>(d: &PsDerivation<I>, i: usize) -> Vec<VarName> {
    let mut out = if i == 0 { vec![] } else { vec![VarName(0)] };
    for (dim_a, l) in d.extensions() {
        if i > dim_a + 1 {
            out.push(VarName(l));
            out.push(VarName(l + 1));
        } else if i == dim_a + 1 {
            out.pop();
            out.push(VarName(l));
        }
    }
    out
}

pub fn src_set<I: IndexType>(d: &PsDerivation<I>) -> VarSet {
    src_vars(d, d.ctx.dim()).into_iter().collect()
}

pub fn tgt_set<I: IndexType>(d: &PsDerivation<I>) -> VarSet {
    tgt_vars(d, d.ctx.dim()).into_iter().collect()
}

/// The transitive closure of `x ◃ f ◃ y` for every `f : x -> y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleRel {
    vars: VarSet,
    pairs: BTreeSet<(VarName, VarName)>,
}

impl TriangleRel {
    pub fn related(&self, x: VarName, y: VarName) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (VarName, VarName)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The variables in ◃ order, when the relation is linear.
    pub fn chain(&self) -> Option<Vec<VarName>> {
        if !self.is_linear() {
            return None;
        }
        let mut vars: Vec<VarName> = self.vars.iter().collect();
        vars.sort_by_key(|x| self.pairs.iter().filter(|(_, y)| y == x).count());
        Some(vars)
    }

    /// Irreflexive and total on the context's variables.
    pub fn is_linear(&self) -> bool {
        let vars: Vec<VarName> = self.vars.iter().collect();
        vars.iter().all(|x| !self.related(*x, *x))
            && vars.iter().enumerate().all(|(k, x)| {
                vars[k + 1..]
                    .iter()
                    .all(|y| self.related(*x, *y) || self.related(*y, *x))
            })
    }
}

/// Arrows whose endpoints are not variables contribute nothing.
pub fn triangle_rel<I: IndexType>(ctx: &RawCtx<I>) -> TriangleRel {
    let mut next: BTreeMap<VarName, BTreeSet<VarName>> = BTreeMap::new();
    for (f, ty) in &ctx.0 {
        if let RawType::Arrow(_, src, tgt) = ty {
            if let (Some(x), Some(y)) = (src.as_var(), tgt.as_var()) {
                next.entry(x).or_default().insert(*f);
                next.entry(*f).or_default().insert(y);
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for &start in next.keys() {
        let mut stack: Vec<VarName> = next[&start].iter().copied().collect();
        let mut seen = BTreeSet::new();
        while let Some(y) = stack.pop() {
            if seen.insert(y) {
                pairs.insert((start, y));
                if let Some(more) = next.get(&y) {
                    stack.extend(more.iter().copied());
                }
            }
        }
    }
    TriangleRel {
        vars: ctx.vars(),
        pairs,
    }
}

pub fn is_linear<I: IndexType>(_ctx: &RawCtx<I>, rel: &TriangleRel) -> bool {
    rel.is_linear()
}

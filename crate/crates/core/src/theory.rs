//! The theory CaTT: coherences indexed by a ps-context and a full type.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::diag::{CheckResult, DiagKind, Diagnostic, Side};
use crate::ps::{check_ps, src_set, tgt_set, PsDerivation};
use crate::rules::{Checker, Signature};
use crate::syntax::{RawCtx, RawType, VarSet};

/// Evidence that a type is full in a ps-context. The sets recorded are the
/// two sides of each required equality, which hold by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FullnessWitness {
    /// `src Γ = Var(A) ∪ Var(t)` and `tgt Γ = Var(A) ∪ Var(u)` for `A = t -> u`.
    Cop { src: VarSet, tgt: VarSet },
    /// `Var(A) = Var(Γ)`.
    Ccoh { vars: VarSet },
}

/// A term constructor of CaTT: a ps-context, a type over it and the
/// fullness evidence. Equality and hashing look at the context and type
/// only.
#[derive(Clone)]
pub struct CohIndex(Arc<IndexData>);

struct IndexData {
    derivation: PsDerivation<CohIndex>,
    ty: RawType<CohIndex>,
    witness: FullnessWitness,
    hash: u64,
}

impl CohIndex {
    fn assemble(
        derivation: PsDerivation<CohIndex>,
        ty: RawType<CohIndex>,
        witness: FullnessWitness,
    ) -> Self {
        let mut h = DefaultHasher::new();
        derivation.ctx().hash(&mut h);
        ty.hash(&mut h);
        let hash = h.finish();
        CohIndex(Arc::new(IndexData {
            derivation,
            ty,
            witness,
            hash,
        }))
    }

    pub fn ctx(&self) -> &RawCtx<CohIndex> {
        self.0.derivation.ctx()
    }

    pub fn ty(&self) -> &RawType<CohIndex> {
        &self.0.ty
    }

    pub fn derivation(&self) -> &PsDerivation<CohIndex> {
        &self.0.derivation
    }

    pub fn witness(&self) -> &FullnessWitness {
        &self.0.witness
    }
}

impl PartialEq for CohIndex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.ctx() == other.ctx() && self.ty() == other.ty())
    }
}

impl Eq for CohIndex {}

impl Hash for CohIndex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Display for CohIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.ctx(), self.ty())
    }
}

impl fmt::Debug for CohIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohIndex({self})")
    }
}

/// Witness-erasing index equality.
pub fn eq_index(i: &CohIndex, j: &CohIndex) -> bool {
    i == j
}

/// The CaTT signature. Every [`CohIndex`] is a member; its context and type
/// are stored in the index itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct Catt;

impl Signature for Catt {
    type Index = CohIndex;

    fn lookup<'a>(
        &'a self,
        index: &'a CohIndex,
    ) -> Option<(&'a RawCtx<CohIndex>, &'a RawType<CohIndex>)> {
        Some((index.ctx(), index.ty()))
    }

    fn wf_dimension(&self) -> bool {
        true
    }
}

pub fn catt_signature() -> Catt {
    Catt
}

fn not_full(side: Side, expected: &VarSet, actual: &VarSet, what: &str) -> Diagnostic {
    let missing = expected.difference(actual);
    let extra = actual.difference(expected);
    Diagnostic::new(
        DiagKind::NotFull {
            side,
            missing: missing.clone(),
            extra: extra.clone(),
        },
        format!("{what} does not use exactly the variables {expected}"),
    )
    .expected_actual(expected, actual)
}

/// Tries the operation condition first (for arrow types), then the
/// coherence condition. The diagnostic reports the first failed side of the
/// operation condition for arrows and the coherence condition otherwise.
pub fn check_fullness(
    d: &PsDerivation<CohIndex>,
    ty: &RawType<CohIndex>,
) -> CheckResult<FullnessWitness> {
    let ctx_vars = d.ctx().vars();
    let ty_vars = ty.vars();
    let op_failure = match ty {
        RawType::Arrow(base, src, tgt) => {
            let base_vars = base.vars();
            let (s, t) = (src_set(d), tgt_set(d));
            let src_side = base_vars.union(&src.vars());
            let tgt_side = base_vars.union(&tgt.vars());
            if s != src_side {
                Some(not_full(Side::Source, &s, &src_side, "source of the type"))
            } else if t != tgt_side {
                Some(not_full(Side::Target, &t, &tgt_side, "target of the type"))
            } else {
                return Ok(FullnessWitness::Cop { src: s, tgt: t });
            }
        }
        RawType::Obj => None,
    };
    if ctx_vars == ty_vars {
        return Ok(FullnessWitness::Ccoh { vars: ctx_vars });
    }
    Err(op_failure.unwrap_or_else(|| not_full(Side::Coh, &ctx_vars, &ty_vars, "type")))
}

/// Validates `(Γ, A)` as a CaTT index using the given checker for `Γ ⊢ A`.
pub fn make_index_with(
    checker: &Checker<'_, Catt>,
    ctx: &RawCtx<CohIndex>,
    ty: &RawType<CohIndex>,
) -> CheckResult<CohIndex> {
    let derivation = check_ps(ctx)?;
    checker.check_ty(ctx, ty)?;
    let witness = check_fullness(&derivation, ty)?;
    if ctx.dim() > ty.dim() {
        return Err(Diagnostic::new(
            DiagKind::WfViolation,
            format!(
                "context dimension {} exceeds type dimension {}",
                ctx.dim(),
                ty.dim()
            ),
        ));
    }
    Ok(CohIndex::assemble(derivation, ty.clone(), witness))
}

pub fn make_index(ctx: &RawCtx<CohIndex>, ty: &RawType<CohIndex>) -> CheckResult<CohIndex> {
    make_index_with(&Checker::new(&Catt), ctx, ty)
}

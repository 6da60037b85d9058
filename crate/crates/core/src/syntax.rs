//! Raw syntax of globular type theories and its substitution calculus.
//!
//! Everything here is untyped: a [`RawType`] or [`RawTerm`] may well be
//! ill-formed, and derivability is decided separately by
//! [`crate::rules::Checker`]. Variables are De Bruijn *levels*: the k-th
//! variable declared in a context is named `k`.
//!
//! The syntax is parameterised by the type `I` of coherence indices, the
//! term constructors of the theory. Glob has no inhabited index, CaTT uses
//! [`crate::theory::CohIndex`].

use std::collections::BTreeSet;
use std::fmt;

/// A variable, named by its De Bruijn level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(pub usize);

impl VarName {
    pub fn level(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawType<I> {
    /// The type of objects, `*`.
    Obj,
    /// `Arrow(A, t, u)` is the type of cells from `t` to `u`, both of type `A`.
    Arrow(Box<RawType<I>>, Box<RawTerm<I>>, Box<RawTerm<I>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawTerm<I> {
    Var(VarName),
    /// A term constructor applied to a substitution into its context.
    Coh(I, RawSub<I>),
}

/// A substitution: values for the target context's variables, oldest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawSub<I>(pub Vec<(VarName, RawTerm<I>)>);

/// A context: variable declarations, oldest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawCtx<I>(pub Vec<(VarName, RawType<I>)>);

impl<I> Default for RawSub<I> {
    fn default() -> Self {
        RawSub(Vec::new())
    }
}

impl<I> Default for RawCtx<I> {
    fn default() -> Self {
        RawCtx(Vec::new())
    }
}

/// Shorthand for `RawTerm::Var(VarName(level))`.
pub fn var<I>(level: usize) -> RawTerm<I> {
    RawTerm::Var(VarName(level))
}

/// Shorthand for `RawType::Arrow` that boxes its arguments.
pub fn arrow<I>(base: RawType<I>, src: RawTerm<I>, tgt: RawTerm<I>) -> RawType<I> {
    RawType::Arrow(Box::new(base), Box::new(src), Box::new(tgt))
}

fn lookup<I>(bindings: &[(VarName, RawTerm<I>)], x: VarName) -> Option<&RawTerm<I>> {
    bindings
        .iter()
        .rev()
        .find(|(name, _)| *name == x)
        .map(|(_, t)| t)
}

pub(crate) fn subst_ty<I: Clone>(
    ty: &RawType<I>,
    bindings: &[(VarName, RawTerm<I>)],
) -> RawType<I> {
    match ty {
        RawType::Obj => RawType::Obj,
        RawType::Arrow(base, src, tgt) => RawType::Arrow(
            Box::new(subst_ty(base, bindings)),
            Box::new(subst_tm(src, bindings)),
            Box::new(subst_tm(tgt, bindings)),
        ),
    }
}

pub(crate) fn subst_tm<I: Clone>(
    tm: &RawTerm<I>,
    bindings: &[(VarName, RawTerm<I>)],
) -> RawTerm<I> {
    match tm {
        RawTerm::Var(x) => lookup(bindings, *x).cloned().unwrap_or(RawTerm::Var(*x)),
        RawTerm::Coh(i, inner) => RawTerm::Coh(i.clone(), compose_slices(&inner.0, bindings)),
    }
}

fn compose_slices<I: Clone>(
    outer: &[(VarName, RawTerm<I>)],
    bindings: &[(VarName, RawTerm<I>)],
) -> RawSub<I> {
    RawSub(
        outer
            .iter()
            .map(|(x, t)| (*x, subst_tm(t, bindings)))
            .collect(),
    )
}

impl<I: Clone> RawType<I> {
    /// `A[γ]`.
    pub fn apply(&self, sub: &RawSub<I>) -> RawType<I> {
        subst_ty(self, &sub.0)
    }

    /// Number of iterated arrows.
    pub fn dim(&self) -> usize {
        let mut ty = self;
        let mut n = 0;
        while let RawType::Arrow(base, _, _) = ty {
            n += 1;
            ty = base;
        }
        n
    }

    pub fn vars(&self) -> VarSet {
        let mut out = BTreeSet::new();
        collect_ty(self, &mut out);
        VarSet(out)
    }
}

impl<I: Clone> RawTerm<I> {
    /// `t[γ]`. A variable without a binding in `γ` is left as is.
    pub fn apply(&self, sub: &RawSub<I>) -> RawTerm<I> {
        subst_tm(self, &sub.0)
    }

    /// Variables of a coherence term are those of its substitution; the
    /// index binds its own context.
    pub fn vars(&self) -> VarSet {
        let mut out = BTreeSet::new();
        collect_tm(self, &mut out);
        VarSet(out)
    }

    pub fn as_var(&self) -> Option<VarName> {
        match self {
            RawTerm::Var(x) => Some(*x),
            RawTerm::Coh(..) => None,
        }
    }
}

impl<I: Clone> RawSub<I> {
    pub fn new() -> Self {
        RawSub(Vec::new())
    }

    /// `Pre-id Γ`: each declared name mapped to itself.
    pub fn identity(ctx: &RawCtx<I>) -> RawSub<I> {
        RawSub(ctx.0.iter().map(|(x, _)| (*x, RawTerm::Var(*x))).collect())
    }

    /// `self ∘ other`: apply `other` to every value of `self`.
    pub fn compose(&self, other: &RawSub<I>) -> RawSub<I> {
        compose_slices(&self.0, &other.0)
    }

    pub fn get(&self, x: VarName) -> Option<&RawTerm<I>> {
        lookup(&self.0, x)
    }

    pub fn push(&mut self, x: VarName, t: RawTerm<I>) {
        self.0.push((x, t));
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> VarSet {
        let mut out = BTreeSet::new();
        for (_, t) in &self.0 {
            collect_tm(t, &mut out);
        }
        VarSet(out)
    }
}

impl<I: Clone> RawCtx<I> {
    pub fn new() -> Self {
        RawCtx(Vec::new())
    }

    /// Appends a declaration named by the current length, as rule `cc` requires.
    pub fn extend(&mut self, ty: RawType<I>) -> VarName {
        let x = VarName(self.0.len());
        self.0.push((x, ty));
        x
    }

    pub fn with(mut self, ty: RawType<I>) -> Self {
        self.extend(ty);
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Type declared for `x`, searching newest first.
    pub fn lookup(&self, x: VarName) -> Option<&RawType<I>> {
        self.0.iter().rev().find(|(y, _)| *y == x).map(|(_, a)| a)
    }

    /// Maximal dimension of the declared types; 0 for the empty context.
    pub fn dim(&self) -> usize {
        self.0.iter().map(|(_, a)| a.dim()).max().unwrap_or(0)
    }

    /// The declared names.
    pub fn vars(&self) -> VarSet {
        self.0.iter().map(|(x, _)| *x).collect()
    }
}

fn collect_ty<I>(ty: &RawType<I>, out: &mut BTreeSet<VarName>) {
    if let RawType::Arrow(base, src, tgt) = ty {
        collect_ty(base, out);
        collect_tm(src, out);
        collect_tm(tgt, out);
    }
}

fn collect_tm<I>(tm: &RawTerm<I>, out: &mut BTreeSet<VarName>) {
    match tm {
        RawTerm::Var(x) => {
            out.insert(*x);
        }
        RawTerm::Coh(_, sub) => {
            for (_, t) in &sub.0 {
                collect_tm(t, out);
            }
        }
    }
}

/// A finite set of variables. Equality is set equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VarSet(BTreeSet<VarName>);

impl VarSet {
    pub fn new() -> Self {
        VarSet(BTreeSet::new())
    }

    pub fn contains(&self, x: VarName) -> bool {
        self.0.contains(&x)
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).copied().collect())
    }

    /// Elements of `self` that are not in `other`.
    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ascending iteration.
    pub fn iter(&self) -> impl Iterator<Item = VarName> + '_ {
        self.0.iter().copied()
    }

    pub fn to_levels(&self) -> Vec<usize> {
        self.iter().map(VarName::level).collect()
    }
}

impl FromIterator<VarName> for VarSet {
    fn from_iter<T: IntoIterator<Item = VarName>>(iter: T) -> Self {
        VarSet(iter.into_iter().collect())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

// Canonical s-expression rendering. The grammar is shared with `crate::dump`.

impl<I: fmt::Display> fmt::Display for RawType<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawType::Obj => f.write_str("obj"),
            RawType::Arrow(base, src, tgt) => write!(f, "(arrow {base} {src} {tgt})"),
        }
    }
}

impl<I: fmt::Display> fmt::Display for RawTerm<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawTerm::Var(x) => write!(f, "(var {x})"),
            RawTerm::Coh(i, sub) => write!(f, "(coh {i} {sub})"),
        }
    }
}

impl<I: fmt::Display> fmt::Display for RawSub<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(sub")?;
        for (x, t) in &self.0 {
            write!(f, " ({x} {t})")?;
        }
        f.write_str(")")
    }
}

impl<I: fmt::Display> fmt::Display for RawCtx<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(ctx")?;
        for (x, a) in &self.0 {
            write!(f, " ({x} {a})")?;
        }
        f.write_str(")")
    }
}

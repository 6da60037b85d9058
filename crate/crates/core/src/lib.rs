//! A type-checker kernel for the globular type theories Glob and CaTT.
//!
//! * [`syntax`]: raw types, terms, substitutions and contexts, with
//!   substitution application and composition.
//! * [`rules`]: the judgment engine, generic over a [`rules::Signature`] of
//!   term constructors; disks, spheres and the type classifier.
//! * [`ps`]: ps-context recognition, the ◃ order and boundary variables.
//! * [`theory`]: CaTT's coherence indices and fullness conditions.
//! * [`surface`], [`elab`], [`dump`], [`cli`]: the text front end.

// Diagnostics are only built on the failure path; boxing them buys nothing.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod diag;
pub mod dump;
pub mod elab;
pub mod ps;
pub mod rules;
pub mod surface;
pub mod syntax;
pub mod theory;

pub use diag::{CheckResult, DiagKind, Diagnostic, Rule, Side, Span};
pub use rules::{Checker, Glob, Judgment, Signature};
pub use syntax::{RawCtx, RawSub, RawTerm, RawType, VarName, VarSet};
pub use theory::{catt_signature, make_index, Catt, CohIndex, FullnessWitness};

/// CaTT types.
pub type Ty = RawType<CohIndex>;
/// CaTT terms.
pub type Tm = RawTerm<CohIndex>;
/// CaTT substitutions.
pub type Sub = RawSub<CohIndex>;
/// CaTT contexts.
pub type Ctx = RawCtx<CohIndex>;

//! Generators and brute-force oracles shared by the integration tests.
//!
//! Nothing here calls into the checker: expected types of generated terms
//! are computed by hand, and the ps-context oracle runs the derivation rules
//! forwards on its own.
#![allow(dead_code)]

use std::collections::HashMap;

use catt::ps::PsMove;
use catt::syntax::{arrow, var};
use catt::{
    make_index, CohIndex, Ctx, RawCtx, RawSub, RawTerm, RawType, Signature, Sub, Tm, Ty, VarName,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gamma_c() -> Ctx {
    Ctx::new()
        .with(Ty::Obj)
        .with(Ty::Obj)
        .with(arrow(Ty::Obj, var(0), var(1)))
        .with(Ty::Obj)
        .with(arrow(Ty::Obj, var(1), var(3)))
}

pub fn gamma_w() -> Ctx {
    let xy = arrow(Ty::Obj, var(0), var(1));
    Ctx::new()
        .with(Ty::Obj)
        .with(Ty::Obj)
        .with(xy.clone())
        .with(xy.clone())
        .with(arrow(xy, var(2), var(3)))
        .with(Ty::Obj)
        .with(arrow(Ty::Obj, var(1), var(5)))
}

pub fn gamma_loop() -> Ctx {
    Ctx::new()
        .with(Ty::Obj)
        .with(arrow(Ty::Obj, var(0), var(0)))
}

pub fn sub_of(values: Vec<Tm>) -> Sub {
    RawSub(
        values
            .into_iter()
            .enumerate()
            .map(|(k, t)| (VarName(k), t))
            .collect(),
    )
}

/// A few standard coherences, built directly from raw syntax.
pub struct Lib {
    pub id: CohIndex,
    pub comp: CohIndex,
    pub unitl: CohIndex,
    pub whisk: CohIndex,
}

impl Lib {
    pub fn new() -> Lib {
        let id = make_index(&Ctx::new().with(Ty::Obj), &arrow(Ty::Obj, var(0), var(0))).unwrap();
        let comp = make_index(&gamma_c(), &arrow(Ty::Obj, var(0), var(3))).unwrap();
        let d1 = Ctx::new()
            .with(Ty::Obj)
            .with(Ty::Obj)
            .with(arrow(Ty::Obj, var(0), var(1)));
        let lib = Lib {
            id: id.clone(),
            comp: comp.clone(),
            unitl: id.clone(),
            whisk: id,
        };
        let unitl_ty = arrow(
            arrow(Ty::Obj, var(0), var(1)),
            lib.comp_tm(var(0), var(0), lib.id_tm(var(0)), var(1), var(2)),
            var(2),
        );
        let unitl = make_index(&d1, &unitl_ty).unwrap();
        let whisk_ty = arrow(
            arrow(Ty::Obj, var(0), var(5)),
            lib.comp_tm(var(0), var(1), var(2), var(5), var(6)),
            lib.comp_tm(var(0), var(1), var(3), var(5), var(6)),
        );
        let whisk = make_index(&gamma_w(), &whisk_ty).unwrap();
        Lib {
            unitl,
            whisk,
            ..lib
        }
    }

    pub fn id_tm(&self, x: Tm) -> Tm {
        RawTerm::Coh(self.id.clone(), sub_of(vec![x]))
    }

    pub fn comp_tm(&self, x: Tm, y: Tm, f: Tm, z: Tm, g: Tm) -> Tm {
        RawTerm::Coh(self.comp.clone(), sub_of(vec![x, y, f, z, g]))
    }

    pub fn unitl_tm(&self, x: Tm, y: Tm, f: Tm) -> Tm {
        RawTerm::Coh(self.unitl.clone(), sub_of(vec![x, y, f]))
    }

    pub fn indices(&self) -> Vec<CohIndex> {
        vec![
            self.id.clone(),
            self.comp.clone(),
            self.unitl.clone(),
            self.whisk.clone(),
        ]
    }
}

/// Terms of a context together with their types, computed by hand: the
/// variables, identities on objects, binary composites and left unitors.
pub fn pool(lib: &Lib, ctx: &Ctx) -> Vec<(Tm, Ty)> {
    let mut out: Vec<(Tm, Ty)> = ctx
        .0
        .iter()
        .map(|(x, a)| (RawTerm::Var(*x), a.clone()))
        .collect();
    let objects: Vec<Tm> = ctx
        .0
        .iter()
        .filter(|(_, a)| *a == Ty::Obj)
        .map(|(x, _)| RawTerm::Var(*x))
        .collect();
    for x in &objects {
        out.push((lib.id_tm(x.clone()), arrow(Ty::Obj, x.clone(), x.clone())));
    }
    let one_cells: Vec<(Tm, Tm, Tm)> = out
        .iter()
        .filter_map(|(t, a)| match a {
            RawType::Arrow(base, s, u) if **base == Ty::Obj => {
                Some((t.clone(), (**s).clone(), (**u).clone()))
            }
            _ => None,
        })
        .collect();
    let mut composites = 0;
    'outer: for (f, x, y) in &one_cells {
        for (g, y2, z) in &one_cells {
            if y == y2 {
                let t = lib.comp_tm(x.clone(), y.clone(), f.clone(), z.clone(), g.clone());
                out.push((t, arrow(Ty::Obj, x.clone(), z.clone())));
                composites += 1;
                if composites >= 24 {
                    break 'outer;
                }
            }
        }
    }
    for (x, a) in &ctx.0 {
        if let RawType::Arrow(base, s, u) = a {
            if **base == Ty::Obj {
                let f = RawTerm::Var(*x);
                let (s, u) = ((**s).clone(), (**u).clone());
                let src = lib.comp_tm(
                    s.clone(),
                    s.clone(),
                    lib.id_tm(s.clone()),
                    u.clone(),
                    f.clone(),
                );
                out.push((lib.unitl_tm(s, u, f.clone()), arrow(a.clone(), src, f)));
            }
        }
    }
    out
}

/// A random type over the pool, of dimension at most `max_dim`.
pub fn random_ty(rng: &mut impl Rng, pool: &[(Tm, Ty)], max_dim: usize) -> Ty {
    let d = rng.gen_range(0..=max_dim);
    if d == 0 {
        return Ty::Obj;
    }
    let mut bases: Vec<&Ty> = pool
        .iter()
        .map(|(_, a)| a)
        .filter(|a| a.dim() < d)
        .collect();
    bases.dedup();
    let Some(base) = bases.choose(rng).cloned() else {
        return Ty::Obj;
    };
    let terms: Vec<&Tm> = pool
        .iter()
        .filter(|(_, a)| a == base)
        .map(|(t, _)| t)
        .collect();
    let s = terms.choose(rng).unwrap();
    let u = terms.choose(rng).unwrap();
    arrow(base.clone(), (*s).clone(), (*u).clone())
}

/// A random well-formed CaTT context starting with an object.
pub fn random_ctx(rng: &mut impl Rng, lib: &Lib, len: usize, max_dim: usize) -> Ctx {
    let mut ctx = Ctx::new().with(Ty::Obj);
    while ctx.len() < len {
        let p = pool(lib, &ctx);
        let ty = random_ty(rng, &p, max_dim);
        ctx.extend(ty);
    }
    ctx
}

/// Builds a context `Γ` and a substitution `Δ ⊢ γ : Γ` by choosing terms of
/// `Δ` and declaring in `Γ` variables (and their boundaries) that map to them.
pub struct Preimage {
    pub ctx: Ctx,
    pub sub: Sub,
}

impl Preimage {
    fn ensure(&mut self, rng: &mut impl Rng, t: &Tm, a: &Ty) -> Tm {
        let reuse: Vec<usize> = (0..self.ctx.len())
            .filter(|&k| self.sub.0[k].1 == *t && self.ctx.0[k].1 == *a)
            .collect();
        if let Some(k) = reuse.choose(rng) {
            if rng.gen_bool(0.7) {
                return var(*k);
            }
        }
        let x = self.ctx.extend(a.clone());
        self.sub.push(x, t.clone());
        RawTerm::Var(x)
    }

    fn lift(&mut self, rng: &mut impl Rng, ty: &Ty) -> Ty {
        match ty {
            RawType::Obj => Ty::Obj,
            RawType::Arrow(base, s, u) => {
                let a = self.lift(rng, base);
                let s = self.ensure(rng, s, &a);
                let u = self.ensure(rng, u, &a);
                arrow(a, s, u)
            }
        }
    }
}

pub fn preimage(rng: &mut impl Rng, lib: &Lib, target: &Ctx, picks: usize) -> (Ctx, Sub) {
    let p = pool(lib, target);
    let mut pre = Preimage {
        ctx: Ctx::new(),
        sub: RawSub::new(),
    };
    for _ in 0..picks.max(1) {
        let (t, ty) = p.choose(rng).unwrap();
        let a = pre.lift(rng, ty);
        pre.ensure(rng, t, &a);
    }
    (pre.ctx, pre.sub)
}

/// A derivable chain `Ξ ⊢ θ : Θ`, `Θ ⊢ δ : Δ`, `Δ ⊢ γ : Γ`, a type `Γ ⊢ A`
/// and a term `Γ ⊢ t : T`.
pub struct Instance {
    pub xi: Ctx,
    pub theta_ctx: Ctx,
    pub theta: Sub,
    pub delta_ctx: Ctx,
    pub delta: Sub,
    pub gamma_ctx: Ctx,
    pub gamma: Sub,
    pub ty: Ty,
    pub tm: Tm,
    pub tm_ty: Ty,
}

pub fn instance(rng: &mut impl Rng, lib: &Lib) -> Instance {
    let len = rng.gen_range(1..7);
    let xi = random_ctx(rng, lib, len, 2);
    let picks = rng.gen_range(1..4);
    let (theta_ctx, theta) = preimage(rng, lib, &xi, picks);
    let picks = rng.gen_range(1..4);
    let (delta_ctx, delta) = preimage(rng, lib, &theta_ctx, picks);
    let picks = rng.gen_range(1..4);
    let (gamma_ctx, gamma) = preimage(rng, lib, &delta_ctx, picks);
    let p = pool(lib, &gamma_ctx);
    let ty = random_ty(rng, &p, 3);
    let (tm, tm_ty) = p.choose(rng).unwrap().clone();
    Instance {
        xi,
        theta_ctx,
        theta,
        delta_ctx,
        delta,
        gamma_ctx,
        gamma,
        ty,
        tm,
        tm_ty,
    }
}

/// Visits every well-formed Glob context with at most `max_len` entries and
/// types of dimension at most `max_dim` (the empty context included).
pub fn for_each_glob_ctx(max_len: usize, max_dim: usize, f: &mut impl FnMut(&Ctx)) {
    fn go(ctx: &mut Ctx, max_len: usize, max_dim: usize, f: &mut impl FnMut(&Ctx)) {
        f(ctx);
        if ctx.len() == max_len {
            return;
        }
        let mut options = vec![Ty::Obj];
        let mut bases: Vec<Ty> = Vec::new();
        for (_, a) in &ctx.0 {
            if a.dim() < max_dim && !bases.contains(a) {
                bases.push(a.clone());
            }
        }
        for base in bases {
            let of_base: Vec<VarName> = ctx
                .0
                .iter()
                .filter(|(_, a)| *a == base)
                .map(|(x, _)| *x)
                .collect();
            for s in &of_base {
                for u in &of_base {
                    options.push(arrow(base.clone(), RawTerm::Var(*s), RawTerm::Var(*u)));
                }
            }
        }
        for ty in options {
            ctx.extend(ty);
            go(ctx, max_len, max_dim, f);
            ctx.0.pop();
        }
    }
    go(&mut Ctx::new(), max_len, max_dim, f);
}

/// Every derivation of `Γ ⊢ps` with `|Γ| <= max_len`, found by running the
/// rules forwards from the start rule. Keys are contexts, values the move
/// sequences deriving them.
pub fn ps_oracle(max_len: usize) -> HashMap<Ctx, Vec<Vec<PsMove>>> {
    fn go(
        ctx: &mut Ctx,
        focus: (VarName, Ty),
        moves: &mut Vec<PsMove>,
        max_len: usize,
        out: &mut HashMap<Ctx, Vec<Vec<PsMove>>>,
    ) {
        if focus.1 == Ty::Obj {
            out.entry(ctx.clone()).or_default().push(moves.clone());
        }
        if let RawType::Arrow(base, s, u) = &focus.1 {
            if let (RawTerm::Var(_), RawTerm::Var(y)) = (&**s, &**u) {
                moves.push(PsMove::Drop);
                go(ctx, (*y, (**base).clone()), moves, max_len, out);
                moves.pop();
            }
        }
        if ctx.len() + 2 <= max_len {
            let (x, a) = focus;
            let l = VarName(ctx.len());
            let fty = arrow(a.clone(), RawTerm::Var(x), RawTerm::Var(l));
            ctx.0.push((l, a));
            ctx.0.push((VarName(l.0 + 1), fty.clone()));
            moves.push(PsMove::Extend);
            go(ctx, (VarName(l.0 + 1), fty), moves, max_len, out);
            moves.pop();
            ctx.0.pop();
            ctx.0.pop();
        }
    }
    let mut out = HashMap::new();
    if max_len >= 1 {
        let mut ctx = Ctx::new().with(Ty::Obj);
        go(
            &mut ctx,
            (VarName(0), Ty::Obj),
            &mut vec![PsMove::Start],
            max_len,
            &mut out,
        );
    }
    out
}

/// A signature whose indices point into a table of arbitrary raw data, for
/// exercising the engine on ill-formed and self-referential indices.
pub struct Table {
    pub entries: Vec<(RawCtx<usize>, RawType<usize>)>,
}

impl Signature for Table {
    type Index = usize;

    fn lookup<'a>(&'a self, i: &'a usize) -> Option<(&'a RawCtx<usize>, &'a RawType<usize>)> {
        self.entries.get(*i).map(|(c, t)| (c, t))
    }

    fn wf_dimension(&self) -> bool {
        true
    }
}

/// Arbitrary raw trees of bounded depth; `index` supplies coherence heads.
pub struct RawGen<'a, I> {
    pub index: &'a dyn Fn(&mut ChaCha8Rng) -> Option<I>,
    pub max_var: usize,
}

impl<I: Clone> RawGen<'_, I> {
    pub fn var(&self, rng: &mut ChaCha8Rng) -> VarName {
        VarName(rng.gen_range(0..=self.max_var))
    }

    pub fn ty(&self, rng: &mut ChaCha8Rng, depth: usize) -> RawType<I> {
        if depth <= 1 || rng.gen_bool(0.35) {
            return RawType::Obj;
        }
        RawType::Arrow(
            Box::new(self.ty(rng, depth - 1)),
            Box::new(self.tm(rng, depth - 1)),
            Box::new(self.tm(rng, depth - 1)),
        )
    }

    pub fn tm(&self, rng: &mut ChaCha8Rng, depth: usize) -> RawTerm<I> {
        if depth > 1 && rng.gen_bool(0.3) {
            if let Some(i) = (self.index)(rng) {
                return RawTerm::Coh(i, self.sub(rng, depth - 1));
            }
        }
        RawTerm::Var(self.var(rng))
    }

    pub fn sub(&self, rng: &mut ChaCha8Rng, depth: usize) -> RawSub<I> {
        let n = rng.gen_range(0..6);
        RawSub(
            (0..n)
                .map(|k| {
                    let x = if rng.gen_bool(0.85) {
                        VarName(k)
                    } else {
                        self.var(rng)
                    };
                    (x, self.tm(rng, depth))
                })
                .collect(),
        )
    }

    pub fn ctx(&self, rng: &mut ChaCha8Rng, depth: usize) -> RawCtx<I> {
        let n = rng.gen_range(0..7);
        RawCtx(
            (0..n)
                .map(|k| {
                    let x = if rng.gen_bool(0.9) {
                        VarName(k)
                    } else {
                        self.var(rng)
                    };
                    (x, self.ty(rng, depth))
                })
                .collect(),
        )
    }
}

/// Random source text: raw bytes, token soup, or grammatical declarations.
pub fn fuzz_source(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(0..120);
            let bytes: Vec<u8> = (0..n).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        1 => {
            const TOKS: [&str; 18] = [
                "coh", "def", "check", "id", "comp", "x", "y", "f", "(", ")", ":", "*", "->", ",",
                ":=", "# c\n", "\n", " ",
            ];
            let n = rng.gen_range(0..60);
            (0..n)
                .map(|_| *TOKS.choose(rng).unwrap())
                .collect::<Vec<_>>()
                .join(" ")
        }
        _ => {
            let mut src = String::from(
                "coh id (x : *) : x -> x\ncoh comp (x : *) (y : *) (f : x -> y) (z : *) (g : y -> z) : x -> z\n",
            );
            for k in 0..rng.gen_range(1..4) {
                src.push_str(&random_decl(rng, k));
            }
            src
        }
    }
}

fn random_decl(rng: &mut ChaCha8Rng, k: usize) -> String {
    const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];
    let n = rng.gen_range(1..5);
    let mut tele = String::new();
    let mut declared: Vec<&str> = Vec::new();
    for name in NAMES.iter().take(n) {
        let ty = if declared.is_empty() || rng.gen_bool(0.5) {
            "*".to_string()
        } else {
            let s = declared.choose(rng).unwrap();
            let t = declared.choose(rng).unwrap();
            format!("{s} -> {t}")
        };
        tele.push_str(&format!("({name} : {ty}) "));
        declared.push(name);
    }
    let term = |rng: &mut ChaCha8Rng| -> String {
        let v = declared.choose(rng).unwrap().to_string();
        match rng.gen_range(0..4) {
            0 => format!("id({v})"),
            1 => {
                let args: Vec<String> = (0..5)
                    .map(|_| declared.choose(rng).unwrap().to_string())
                    .collect();
                format!("comp({})", args.join(", "))
            }
            _ => v,
        }
    };
    let (s, t) = (term(rng), term(rng));
    if rng.gen_bool(0.5) {
        format!("coh k{k} {tele}: {s} -> {t}\n")
    } else {
        let body = term(rng);
        format!("def k{k} {tele}: {s} -> {t} := {body}\n")
    }
}

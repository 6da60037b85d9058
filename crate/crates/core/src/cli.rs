//! The `catt` command-line driver.
//!
//! Exit codes: 0 when everything checks, 1 on a check failure, 2 on a
//! parse, usage or I/O failure.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::diag::Diagnostic;
use crate::dump::{write_json, write_sexpr};
use crate::elab::{Elaborated, Elaborator};
use crate::ps::{check_ps, src_set, tgt_set, triangle_rel};
use crate::surface::{parse, DeclKind, SurfaceDecl};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "catt",
    version,
    about = "Type checker for the globular type theory CaTT"
)]
struct Args {
    /// Re-validate coherence indices at every use.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Stop after reporting this many check failures.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    max_errors: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every declaration of the given files, in order.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the elaborated raw syntax of a file.
    Dump {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Sexpr)]
        format: Format,
    },
    /// Show the ps-context analysis of every coherence's context.
    ExplainPs { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Sexpr,
    Json,
}

struct Reporter<'a> {
    err: &'a mut dyn Write,
    color: bool,
}

impl Reporter<'_> {
    fn error(&mut self, file: &Path, d: &Diagnostic) {
        let location = match d.span {
            Some(s) => format!("{}:{}:{}", file.display(), s.line, s.column),
            None => file.display().to_string(),
        };
        let label = if self.color {
            "\x1b[1;31merror\x1b[0m"
        } else {
            "error"
        };
        let _ = writeln!(self.err, "{location}: {label}{d}");
    }

    fn io(&mut self, file: &Path, e: &std::io::Error) {
        let label = if self.color {
            "\x1b[1;31merror\x1b[0m"
        } else {
            "error"
        };
        let _ = writeln!(
            self.err,
            "{}: {label}: cannot read file: {e}",
            file.display()
        );
    }
}

fn elaborator(no_cache: bool) -> Elaborator {
    if no_cache {
        Elaborator::without_cache()
    } else {
        Elaborator::new()
    }
}

enum Loaded {
    Decls(Vec<SurfaceDecl>),
    Failed,
}

fn load(file: &Path, rep: &mut Reporter<'_>) -> Loaded {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            rep.io(file, &e);
            return Loaded::Failed;
        }
    };
    match parse(&text) {
        Ok(d) => Loaded::Decls(d),
        Err(d) => {
            rep.error(file, &d);
            Loaded::Failed
        }
    }
}

/// Runs the driver on `args` (without the program name).
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv =
        std::iter::once(std::ffi::OsString::from("catt")).chain(args.into_iter().map(Into::into));
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let color =
        std::env::var("CATT_COLOR").map_or(true, |v| v != "0") && std::io::stderr().is_terminal();
    let mut rep = Reporter { err, color };
    match args.command {
        Command::Check { files } => {
            check(&files, args.no_cache, args.max_errors.max(1), out, &mut rep)
        }
        Command::Dump { file, format } => dump(&file, format, args.no_cache, out, &mut rep),
        Command::ExplainPs { file } => explain(&file, args.no_cache, out, &mut rep),
    }
}

fn check(
    files: &[PathBuf],
    no_cache: bool,
    max_errors: usize,
    out: &mut dyn Write,
    rep: &mut Reporter<'_>,
) -> i32 {
    let mut code = EXIT_OK;
    let mut errors = 0;
    for file in files {
        let decls = match load(file, rep) {
            Loaded::Decls(d) => d,
            Loaded::Failed => {
                code = EXIT_INPUT;
                continue;
            }
        };
        let mut e = elaborator(no_cache);
        let mut failed = false;
        for decl in &decls {
            if let Err(d) = e.declare(decl) {
                rep.error(file, &d);
                failed = true;
                errors += 1;
                if errors >= max_errors {
                    break;
                }
            }
        }
        if failed {
            code = code.max(EXIT_CHECK);
            if errors >= max_errors {
                break;
            }
        } else {
            let _ = writeln!(out, "{}: ok ({} declarations)", file.display(), decls.len());
        }
    }
    code
}

fn dump(
    file: &Path,
    format: Format,
    no_cache: bool,
    out: &mut dyn Write,
    rep: &mut Reporter<'_>,
) -> i32 {
    let Loaded::Decls(decls) = load(file, rep) else {
        return EXIT_INPUT;
    };
    let mut e = elaborator(no_cache);
    for decl in &decls {
        if let Err(d) = e.declare(decl) {
            rep.error(file, &d);
            return EXIT_CHECK;
        }
    }
    let text = match format {
        Format::Sexpr => write_sexpr(e.store()),
        Format::Json => write_json(e.store()),
    };
    let _ = out.write_all(text.as_bytes());
    EXIT_OK
}

fn explain(file: &Path, no_cache: bool, out: &mut dyn Write, rep: &mut Reporter<'_>) -> i32 {
    let Loaded::Decls(decls) = load(file, rep) else {
        return EXIT_INPUT;
    };
    let mut code = EXIT_OK;
    let mut e = elaborator(no_cache);
    for decl in &decls {
        if decl.kind != DeclKind::Coh {
            if let Err(d) = e.declare(decl) {
                rep.error(file, &d);
                code = EXIT_CHECK;
            }
            continue;
        }
        let names: Vec<&str> = decl
            .telescope
            .iter()
            .map(|(x, _)| x.name.as_str())
            .collect();
        let show = |v: crate::syntax::VarName| names.get(v.0).copied().unwrap_or("?").to_string();
        let _ = writeln!(out, "coh {}", decl.name.name);
        match e.elaborate_telescope(decl) {
            Err(d) => {
                let _ = writeln!(out, "  telescope rejected: {}", d.message);
            }
            Ok(ctx) => {
                let _ = writeln!(out, "  context: {ctx}");
                match check_ps(&ctx) {
                    Err(d) => {
                        let _ = writeln!(out, "  not a ps-context: {}", d.message);
                    }
                    Ok(der) => {
                        let moves: Vec<String> =
                            der.moves().iter().map(ToString::to_string).collect();
                        let _ = writeln!(out, "  moves: {}", moves.join(" "));
                        if let Some(chain) = triangle_rel(&ctx).chain() {
                            let chain: Vec<String> = chain.into_iter().map(show).collect();
                            let _ = writeln!(out, "  order: {}", chain.join(" < "));
                        }
                        let set = |s: crate::syntax::VarSet| {
                            s.iter().map(show).collect::<Vec<_>>().join(", ")
                        };
                        let _ = writeln!(out, "  dimension: {}", ctx.dim());
                        let _ = writeln!(out, "  source: {{{}}}", set(src_set(&der)));
                        let _ = writeln!(out, "  target: {{{}}}", set(tgt_set(&der)));
                    }
                }
            }
        }
        match e.declare(decl) {
            Ok(Elaborated::Coh { index, .. }) => {
                let _ = writeln!(out, "  accepted as {}", kind_of(&index));
            }
            Ok(_) => {}
            Err(d) => {
                rep.error(file, &d);
                code = EXIT_CHECK;
            }
        }
    }
    code
}

fn kind_of(index: &crate::theory::CohIndex) -> &'static str {
    match index.witness() {
        crate::theory::FullnessWitness::Cop { .. } => "operation",
        crate::theory::FullnessWitness::Ccoh { .. } => "coherence",
    }
}

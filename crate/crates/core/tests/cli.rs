use std::path::PathBuf;

use catt::cli::run_cli;
use catt::dump::{read_sexpr, write_sexpr};
use catt::elab::elaborate_all;
use catt::surface::parse;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_reports_located_diagnostics() {
    let (code, _, err) = run(&["check", &corpus("partial.catt")]);
    assert_eq!(code, 1);
    assert!(
        err.contains("partial.catt:3:5: error[fullness] NotFull"),
        "{err}"
    );

    let (code, _, err) = run(&["check", &corpus("syntax_error.catt")]);
    assert_eq!(code, 2);
    assert!(
        err.contains("syntax_error.catt:1:21: error[parse] ParseError"),
        "{err}"
    );
}

#[test]
fn max_errors_limits_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.catt");
    std::fs::write(&path, "coh a (x : *) : y -> x\ncoh b (x : *) : x -> q\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, _, err) = run(&["check", p]);
    assert_eq!((code, err.lines().count()), (1, 1));
    let (code, _, err) = run(&["--max-errors", "5", "check", p]);
    assert_eq!((code, err.lines().count()), (1, 2));
    assert!(err.contains("error[var] UnknownName"), "{err}");
}

#[test]
fn several_files_keep_separate_scopes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.catt");
    let b = dir.path().join("b.catt");
    std::fs::write(&a, "coh id (x : *) : x -> x\n").unwrap();
    std::fs::write(&b, "def i (x : *) : x -> x := id(x)\n").unwrap();
    let (code, out, err) = run(&["check", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}{err}");
    assert!(out.contains("a.catt: ok"));
    assert!(err.contains("UnknownName"));
}

#[test]
fn no_cache_gives_the_same_answers() {
    for file in ["comp.catt", "loop.catt", "partial.catt", "arity.catt"] {
        let p = corpus(file);
        assert_eq!(
            run(&["check", &p]),
            run(&["--no-cache", "check", &p]),
            "{file}"
        );
    }
}

#[test]
fn dump_round_trips() {
    let (code, text, _) = run(&["dump", &corpus("comp.catt")]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 8);
    assert!(text.is_ascii());
    let store = read_sexpr(&text).unwrap();
    assert_eq!(write_sexpr(&store), text);

    let src = std::fs::read_to_string(corpus("comp.catt")).unwrap();
    let direct = elaborate_all(&parse(&src).unwrap()).unwrap();
    assert_eq!(store, direct);
}

#[test]
fn dump_json_mirrors_the_tree() {
    let (code, text, _) = run(&["dump", "--format", "json", &corpus("comp.catt")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let decls = v["children"].as_array().unwrap();
    assert_eq!(decls.len(), 8);
    assert_eq!(decls[0]["children"][0]["node"], "id");
    assert_eq!(decls[0]["children"][0]["sort"], "name");
}

#[test]
fn explain_ps_describes_pasting_schemes() {
    let (code, out, _) = run(&["explain-ps", &corpus("comp.catt")]);
    assert_eq!(code, 0);
    assert!(out.contains("coh comp"));
    assert!(out.contains("order: x < f < y < g < z"), "{out}");
    assert!(out.contains("source: {x}"));
    assert!(out.contains("target: {z}"));
    assert!(out.contains("accepted as operation"));
    assert!(out.contains("accepted as coherence"));

    let (code, out, _) = run(&["explain-ps", &corpus("loop.catt")]);
    assert_eq!(code, 1);
    assert!(out.contains("not a ps-context"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["check"]).0, 2);
    assert_eq!(run(&["dump", "--format", "xml", "f"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

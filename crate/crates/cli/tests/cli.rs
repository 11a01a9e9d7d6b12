use std::process::Command;

fn tridend(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tridend")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn eval_st_product() {
    let (code, out, _) = tridend(&["eval", "(1)", "left", "(1)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(2,1)");
    let (_, out, _) = tridend(&["eval", "(1)", "middle", "(1)"]);
    assert_eq!(out.trim(), "(1,1)");
}

#[test]
fn eval_specializes_q() {
    let (_, sym, _) = tridend(&["eval", "(1)", "*", "(1)"]);
    assert_eq!(sym.trim(), "q*(1,1) + (1,2) + (2,1)");
    let (_, num, _) = tridend(&["--q", "3", "eval", "(1)", "*", "(1)"]);
    assert_eq!(num.trim(), "3*(1,1) + (1,2) + (2,1)");
}

#[test]
fn coproduct_and_reduced() {
    let (code, out, _) = tridend(&["--algebra", "pqsym", "coproduct", "(1,2)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1 # (1,2) + (1) # (1) + (1,2) # 1");
    let (_, out, _) = tridend(&["--algebra", "pqsym", "coproduct", "--reduced", "(1,1,2)"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn brace_and_primitives() {
    let (_, out, _) = tridend(&["brace", "(1)", "(1)"]);
    assert_eq!(out.trim(), "q*(1,1) + (1,2) - (2,1)");
    let (code, out, _) = tridend(&["--algebra", "tree", "primitives", "--degree", "2", "--q", "5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("rank 2\nkernel dimension 2"), "{out}");
}

#[test]
fn morphisms() {
    assert_eq!(tridend(&["morphism", "alpha", "(1,1,2)"]).1.trim(), "(1,1,2) + (1,1,3)");
    assert_eq!(tridend(&["morphism", "phi", "(1,2,1)"]).1.trim(), "[(1,3),(2)]");
    assert_eq!(tridend(&["morphism", "std", "(2,3,3,5,7)"]).1.trim(), "(1,2,2,3,4)");
    assert_eq!(tridend(&["morphism", "lift", "(1,2,2,3,1,4)", "(4,6,7,4,9)"]).1.trim(), "(4,6,6,7,4,9)");
}

#[test]
fn json_output_parses() {
    let (_, out, _) = tridend(&["--format", "json", "eval", "(1)", "right", "(1)"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["basis"], "(1,2)");
}

#[test]
fn verify_small_run_exits_zero() {
    let (code, out, _) = tridend(&["--algebra", "st", "--max-degree", "3", "--jobs", "2", "verify"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS  axioms[st]"));
    let (code, out, _) = tridend(&["--format", "json", "--max-degree", "3", "verify"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn dims_table() {
    let (code, out, _) = tridend(&["--max-degree", "4", "dims", "--rank-degree", "1"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["4", "75", "125", "14", "45", "44", "44", "92"]), "{out}");
}

#[test]
fn errors_exit_nonzero() {
    let (code, _, err) = tridend(&["--algebra", "nope", "eval", "(1)", "left", "(1)"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown algebra"));
    let (code, _, _) = tridend(&["eval", "(1,3)", "left", "(1)"]);
    assert_eq!(code, 2);
    let (code, _, _) = tridend(&["primitives", "--degree", "2"]);
    assert_eq!(code, 2);
}

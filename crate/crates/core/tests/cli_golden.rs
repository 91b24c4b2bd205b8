mod common;

use common::{exec, goldens, replay};

#[test]
fn recorded_examples_replay() {
    let mut failures = Vec::new();
    for g in goldens() {
        if let Err(e) = replay(&g) {
            failures.push(format!("{}: {e}", g.name));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn pretty_changes_only_whitespace() {
    let args = ["case-profile", "genus4"];
    let (_, plain) = exec(&args, b"");
    let (_, pretty) = exec(&["--pretty", args[0], args[1]], b"");
    let strip = |b: &[u8]| b.iter().copied().filter(|c| !c.is_ascii_whitespace()).collect::<Vec<_>>();
    assert_ne!(plain, pretty);
    assert_eq!(strip(&plain), strip(&pretty));
}

#[test]
fn parse_errors_name_the_field() {
    let mut child = std::process::Command::new(common::BIN)
        .args(["signature", "--ring", "-4", "--gram", r#"[[2,"1+i"],["1-i","2+q"]]"#])
        .output()
        .unwrap();
    assert_eq!(child.status.code(), Some(2));
    let err = String::from_utf8(std::mem::take(&mut child.stderr)).unwrap();
    assert!(err.contains("gram[1][1]"), "{err}");
}

#[test]
fn dual_output_feeds_back_in() {
    let (code, dual) = exec(&["dual", "--ring", "-3", "--gram", common::E], b"");
    assert_eq!(code, 0);
    let (code, twice) = exec(&["dual", "--in", "-"], &dual);
    assert_eq!(code, 0);
    let (_, canon) = exec(&["dual", "--in", "-"], &twice);
    assert_eq!(canon, dual);
}

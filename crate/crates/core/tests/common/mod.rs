#![allow(dead_code)]

use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

pub mod gen;

pub const BIN: &str = env!("CARGO_BIN_EXE_hermlat");

pub const DIAG5: &str = "[[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,-1]]";
pub const B2: &str = r#"[[2,"1+i"],["1-i",2]]"#;
pub const E: &str = r#"[[3,"pi"],["-pi",0]]"#;

pub fn exec(args: &[&str], stdin: &[u8]) -> (i32, Vec<u8>) {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn hermlat");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

pub struct Golden {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// Verb whose output is fed to stdin.
    pub pipe_from: Option<&'static [&'static str]>,
    pub stdin: &'static str,
    pub code: i32,
    /// Exact stdout, when pinned.
    pub stdout: Option<&'static str>,
    pub check: fn(&Value) -> bool,
}

fn any(_: &Value) -> bool {
    true
}

fn at(v: &Value, p: &str) -> Value {
    v.pointer(p).cloned().unwrap_or(Value::Null)
}

/// Run a golden case twice and compare both runs with each other and with
/// the expectation.
pub fn replay(g: &Golden) -> Result<(), String> {
    let input = match g.pipe_from {
        Some(args) => {
            let (code, out) = exec(args, b"");
            if code != 0 {
                return Err(format!("producer {args:?} exited {code}"));
            }
            out
        }
        None => g.stdin.as_bytes().to_vec(),
    };
    let (code, out) = exec(g.args, &input);
    let (code2, out2) = exec(g.args, &input);
    if (code, &out) != (code2, &out2) {
        return Err("output differs between runs".into());
    }
    if code != g.code {
        return Err(format!("exit {code}, expected {}", g.code));
    }
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    if let Some(s) = g.stdout {
        if text != s {
            return Err(format!("stdout {text:?}, expected {s:?}"));
        }
    }
    if g.code == 2 {
        return if text.is_empty() { Ok(()) } else { Err("usage error wrote stdout".into()) };
    }
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("bad JSON: {e}"))?;
    if (g.check)(&v) {
        Ok(())
    } else {
        Err(format!("check failed on {text}"))
    }
}

macro_rules! g {
    ($name:expr, [$($a:expr),*], pipe = [$($p:expr),*], $code:expr, $check:expr) => {
        Golden { name: $name, args: &[$($a),*], pipe_from: Some(&[$($p),*]), stdin: "", code: $code, stdout: None, check: $check }
    };
    ($name:expr, [$($a:expr),*], stdin = $text:expr, $code:expr, $check:expr) => {
        Golden { name: $name, args: &[$($a),*], pipe_from: None, stdin: $text, code: $code, stdout: None, check: $check }
    };
    ($name:expr, [$($a:expr),*], $code:expr, exact $s:expr) => {
        Golden { name: $name, args: &[$($a),*], pipe_from: None, stdin: "", code: $code, stdout: Some($s), check: any }
    };
    ($name:expr, [$($a:expr),*], $code:expr, $check:expr) => {
        Golden { name: $name, args: &[$($a),*], pipe_from: None, stdin: "", code: $code, stdout: None, check: $check }
    };
}

pub fn goldens() -> Vec<Golden> {
    vec![
        // ring
        g!("units -3", ["ring-info", "--ring", "-3"], 0, |v| at(v, "/unit_count") == json!(6)),
        g!("units -4", ["ring-info", "--ring", "-4"], 0, |v| at(v, "/unit_count") == json!(4)),
        g!("disc -20 rejected", ["ring-info", "--ring", "-20"], 2, any),
        g!("disc -12 rejected", ["ring-info", "--ring", "-12"], 2, any),
        g!("omega arithmetic", ["ring-info", "--ring", "-3", "--elem", "w"], 0, |v| {
            at(v, "/elem")
                == json!({"value": [-1, 1], "text": "-1/2+1/2*sqrt(-3)", "norm": 1, "trace": -1, "conj": [-1, -1]})
        }),
        g!("1+i arithmetic", ["ring-info", "--ring", "-4", "--elem", "1+i"], 0, |v| {
            at(v, "/elem/norm") == json!(2) && at(v, "/elem/trace") == json!(2)
        }),
        g!("divmod 5 by 1+i", ["ring-info", "--ring", "-4", "--divmod", "5", "1+i"], 0, |v| {
            at(v, "/divmod") == json!({"q": [4, -2], "r": [2, 0]})
        }),
        g!("divmod by 1", ["ring-info", "--ring", "-3", "--divmod", "2-3*w", "1"], 0, |v| {
            at(v, "/divmod") == json!({"q": [7, -3], "r": [0, 0]})
        }),
        g!("divmod 3 by pi", ["ring-info", "--ring", "-3", "--divmod", "3", "pi"], 0, |v| {
            at(v, "/divmod") == json!({"q": [0, -2], "r": [0, 0]})
        }),
        g!("gcd 2, 1+i", ["ring-info", "--ring", "-4", "--gcd", "2", "1+i"], 0, |v| at(v, "/gcd") == json!([2, 1])),
        g!("ramified prime 3", ["ring-info", "--ring", "-3"], 0, |v| {
            at(v, "/ramified_prime_generators") == json!([[0, 2]])
        }),
        g!("ramified prime 2", ["ring-info", "--ring", "-4"], 0, |v| {
            at(v, "/ramified_prime_generators") == json!([[2, 1]])
        }),
        // linalg
        g!("hnf [2, 1+i]", ["snf", "--ring", "-4", "--matrix", r#"[[2,"1+i"]]"#, "--hnf"], 0, |v| {
            at(v, "/hnf/entries") == json!([[[2, 1], [0, 0]]])
        }),
        g!("hnf identity", ["snf", "--ring", "-3", "--matrix", "[[1,0],[0,1]]", "--hnf"], 0, |v| {
            at(v, "/hnf/entries") == json!([[[2, 0], [0, 0]], [[0, 0], [2, 0]]])
        }),
        g!("hnf over Z keeps det", ["snf", "--ring", "Z", "--matrix", "[[2,4],[6,8]]", "--hnf"], 0, |v| {
            let e = at(v, "/hnf/entries");
            let d = e[0][0].as_i64().unwrap() * e[1][1].as_i64().unwrap()
                - e[0][1].as_i64().unwrap() * e[1][0].as_i64().unwrap();
            d.abs() == 8
        }),
        g!("snf E", ["snf", "--ring", "-3", "--matrix", E], 0, exact "{\"ring\":-3,\"divisors\":[[0,2],[0,2]],\"det\":[-6,0]}\n"),
        g!("snf [[pi]]", ["snf", "--ring", "-3", "--matrix", r#"[["pi"]]"#], 0, |v| at(v, "/divisors")
            == json!([[0, 2]])),
        g!("snf over Z", ["snf", "--ring", "Z", "--matrix", "[[2,4],[6,8]]"], 0, exact "{\"ring\":\"Z\",\"divisors\":[2,4],\"det\":-8}\n"),
        g!("det B2", ["snf", "--ring", "-4", "--matrix", B2], 0, |v| at(v, "/det") == json!([4, 0])),
        g!("snf non-integral", ["snf", "--ring", "Q", "--matrix", r#"[[1,"1/2"]]"#], 2, any),
        g!("diagonal B2", ["signature", "--ring", "-4", "--gram", B2, "--diagonal"], 0, exact "{\"p\":2,\"q\":0,\"diagonal\":[2,1]}\n"),
        g!("diagonal E", ["signature", "--ring", "-3", "--gram", E, "--diagonal"], 0, exact "{\"p\":1,\"q\":1,\"diagonal\":[3,-1]}\n"),
        g!("signature diag5", ["signature", "--ring", "-3", "--gram", DIAG5], 0, exact "{\"p\":4,\"q\":1}\n"),
        // lattice
        g!("standard diag5", ["signature", "--ring", "-3", "--gram", DIAG5, "--details"], 0, |v| {
            at(v, "/integral") == json!(true) && at(v, "/rank") == json!(5) && at(v, "/self_dual") == json!(true)
        }),
        g!("standard B2", ["signature", "--ring", "-4", "--gram", B2, "--details"], 0, |v| {
            at(v, "/integral") == json!(true) && at(v, "/positive_definite") == json!(true)
        }),
        g!("singular gram", ["signature", "--ring", "-3", "--gram", "[[0]]"], 2, any),
        g!("dual of (3)", ["dual", "--ring", "-3", "--gram", "[[3]]"], 0, |v| {
            at(v, "/basis/entries") == json!([["1/3"]])
        }),
        g!("disc group of (3)", ["disc-group", "--ring", "-3", "--gram", "[[3]]"], 0, |v| at(v, "/order") == json!(9)),
        g!("diag5 dual is itself", ["dual", "--ring", "-3", "--gram", DIAG5], 0, |v| {
            at(v, "/lattice_gram/entries")
                == json!([
                    [[2, 0], [0, 0], [0, 0], [0, 0], [0, 0]],
                    [[0, 0], [2, 0], [0, 0], [0, 0], [0, 0]],
                    [[0, 0], [0, 0], [2, 0], [0, 0], [0, 0]],
                    [[0, 0], [0, 0], [0, 0], [2, 0], [0, 0]],
                    [[0, 0], [0, 0], [0, 0], [0, 0], [-2, 0]]
                ])
        }),
        g!("disc group E", ["disc-group", "--ring", "-3", "--gram", E], 0, exact "{\"order\":9,\"divisors\":[[0,2],[0,2]],\"shape\":[3,3]}\n"),
        g!(
            "pi O in O",
            [
                "disc-group",
                "--sub",
                r#"{"ring":-3,"gram":[[1]],"basis":[["pi"]]}"#,
                "--super",
                r#"{"ring":-3,"gram":[[1]]}"#
            ],
            0,
            |v| { at(v, "/shape") == json!([3]) }
        ),
        g!(
            "L in L",
            [
                "disc-group",
                "--sub",
                r#"{"ring":-4,"gram":[[2,"1+i"],["1-i",2]]}"#,
                "--super",
                r#"{"ring":-4,"gram":[[2,"1+i"],["1-i",2]]}"#
            ],
            0,
            |v| { at(v, "/order") == json!(1) }
        ),
        g!("disc group B2", ["disc-group", "--ring", "-4", "--gram", B2], 0, |v| {
            at(v, "/shape") == json!([2, 2]) && at(v, "/divisors") == json!([[2, 1], [2, 1]])
        }),
        g!("self dual diag5", ["signature", "--ring", "-3", "--gram", DIAG5, "--details"], 0, |v| at(v, "/self_dual")
            == json!(true)),
        g!("(3) not self dual", ["signature", "--ring", "-3", "--gram", "[[3]]", "--details"], 0, |v| at(
            v,
            "/self_dual"
        ) == json!(
            false
        )),
        g!("alt form of (1)", ["convert", "--ring", "-3", "--gram", "[[1]]", "--to", "alt"], 0, |v| {
            at(v, "/s/entries") == json!([[0, -1], [1, 0]]) && at(v, "/j/entries") == json!([[0, -1], [1, -1]])
        }),
        g!("alt form diag5 unimodular", ["convert", "--ring", "-3", "--gram", DIAG5, "--to", "alt"], 0, |v| {
            at(v, "/det") == json!(1) || at(v, "/det") == json!(-1)
        }),
        g!(
            "herm from alt",
            ["convert", "--to", "herm", "--in", "-"],
            pipe = ["convert", "--ring", "-3", "--gram", "[[1]]", "--to", "alt"],
            0,
            |v| { at(v, "/lattice_gram/entries") == json!([[[2, 0]]]) }
        ),
        g!(
            "bad action",
            ["convert", "--to", "herm"],
            stdin = r#"{"ring":-3,"kind":"alternating","s":[[0,-1],[1,0]],"j":[[0,-1],[1,0]]}"#,
            2,
            any
        ),
        g!(
            "gaussian bad action",
            ["convert", "--to", "herm"],
            stdin = r#"{"ring":-4,"kind":"symmetric","s":[[2,0],[0,2]],"j":[[0,-1],[1,-1]]}"#,
            2,
            any
        ),
        g!("sym scaled of (3)", ["convert", "--ring", "-3", "--gram", "[[3]]", "--to", "sym-scaled"], 0, |v| {
            at(v, "/s/entries") == json!([[2, -1], [-1, 2]])
        }),
        g!(
            "herm from A2",
            ["convert", "--to", "herm", "--in", "-"],
            pipe = ["convert", "--ring", "-3", "--gram", "[[3]]", "--to", "sym-scaled"],
            0,
            |v| { at(v, "/lattice_gram/entries") == json!([[[6, 0]]]) }
        ),
        g!(
            "gaussian 2I",
            ["convert", "--to", "herm", "--in", "-"],
            pipe = ["convert", "--ring", "-4", "--gram", "[[2]]", "--to", "sym-gaussian"],
            0,
            |v| { at(v, "/lattice_gram/entries") == json!([[[4, 0]]]) }
        ),
        g!(
            "sym-gaussian of (2) is 2I",
            ["convert", "--ring", "-4", "--gram", "[[2]]", "--to", "sym-gaussian"],
            0,
            |v| { at(v, "/s/entries") == json!([[2, 0], [0, 2]]) && at(v, "/j/entries") == json!([[0, -1], [1, 0]]) }
        ),
        g!("trace form -3", ["convert", "--ring", "-3", "--gram", "[[1]]", "--to", "sym"], 0, |v| {
            at(v, "/s/entries") == json!([[2, -1], [-1, 2]])
        }),
        g!("trace form -4", ["convert", "--ring", "-4", "--gram", "[[1]]", "--to", "sym"], 0, |v| {
            at(v, "/s/entries") == json!([[2, 0], [0, 2]])
        }),
        g!("trace form diag5", ["convert", "--ring", "-3", "--gram", DIAG5, "--to", "sym"], 0, |v| {
            at(v, "/zrank") == json!(10) && at(v, "/signature") == json!({"p": 8, "q": 2})
        }),
        g!("pi times dual of (3)", ["dual", "--ring", "-3", "--gram", "[[3]]", "--scale", "pi"], 0, |v| {
            at(v, "/lattice_gram/entries") == json!([[[2, 0]]])
        }),
        g!("scale by 1", ["dual", "--ring", "-3", "--gram", "[[1]]", "--scale", "1"], 0, |v| {
            at(v, "/basis/entries") == json!([[[2, 0]]])
        }),
        g!("chain cubic threefolds", ["chain", "--in", "-"], pipe = ["case-build", "cubic-threefolds"], 0, |v| {
            at(v, "/lower/shape") == json!(vec![3; 10])
                && at(v, "/upper/shape") == json!([3])
                && at(v, "/index") == json!(177147)
        }),
        g!("chain genus3", ["chain", "--in", "-"], pipe = ["case-build", "genus3"], 0, |v| {
            at(v, "/lower/shape") == json!(vec![2; 6]) && at(v, "/upper/shape") == json!([2])
        }),
        g!("chain diag5", ["chain", "--ring", "-3", "--gram", DIAG5], 0, |v| {
            at(v, "/holds") == json!(true) && at(v, "/lower/order") == json!(1) && at(v, "/upper/order") == json!(243)
        }),
        g!(
            "radical cubic threefolds",
            ["reduce-mod-pi", "--in", "-"],
            pipe = ["case-build", "cubic-threefolds"],
            0,
            |v| { at(v, "/radical_dim") == json!(10) }
        ),
        g!("radical diag5", ["reduce-mod-pi", "--ring", "-3", "--gram", DIAG5], 0, |v| at(v, "/radical_dim")
            == json!(0)),
        g!("radical E", ["reduce-mod-pi", "--ring", "-3", "--gram", E], 0, |v| at(v, "/radical_dim") == json!(2)),
        // cycles
        g!("units as vectors -3", ["enumerate", "--ring", "-3", "--gram", "[[1]]", "--t", "1"], 0, |v| at(v, "/count")
            == json!(6)),
        g!("units as vectors -4", ["enumerate", "--ring", "-4", "--gram", "[[1]]", "--t", "1"], 0, |v| at(v, "/count")
            == json!(4)),
        // The true count is 24 (the 24 roots of D4); see the README.
        g!("B2 norm 2", ["enumerate", "--ring", "-4", "--gram", B2, "--t", "2"], 0, |v| at(v, "/count") == json!(24)),
        g!("2 is not a norm", ["enumerate", "--ring", "-3", "--gram", "[[1]]", "--t", "2"], 0, exact "{\"t\":2,\"count\":0,\"vectors\":[]}\n"),
        g!("associates of pi", ["enumerate", "--ring", "-3", "--gram", "[[1]]", "--t", "3"], 0, exact "{\"t\":3,\"count\":6,\"vectors\":[[[-3,-1]],[[-3,1]],[[0,-2]],[[0,2]],[[3,-1]],[[3,1]]]}\n"),
        g!("t = 0", ["enumerate", "--ring", "-4", "--gram", B2, "--t", "0"], 0, |v| at(v, "/count") == json!(0)),
        g!("perp e1", ["perp", "--ring", "-3", "--gram", DIAG5, "--x", "[1,0,0,0,0]"], 0, |v| {
            at(v, "/signature") == json!({"p": 3, "q": 1})
        }),
        g!("perp e5", ["perp", "--ring", "-3", "--gram", DIAG5, "--x", "[0,0,0,0,1]"], 0, |v| {
            at(v, "/signature") == json!({"p": 4, "q": 0})
        }),
        g!("dx e1", ["perp", "--ring", "-3", "--gram", DIAG5, "--x", "[1,0,0,0,0]", "--dx"], 0, exact "{\"nonempty\":true}\n"),
        g!("dx e5", ["perp", "--ring", "-3", "--gram", DIAG5, "--x", "[0,0,0,0,1]", "--dx"], 1, exact "{\"nonempty\":false}\n"),
        // catalog
        g!("profile cubic surfaces", ["case-profile", "cubic-surfaces"], 0, |v| {
            at(v, "/ring") == json!(-3)
                && at(v, "/n") == json!(5)
                && at(v, "/signature") == json!({"p": 4, "q": 1})
                && at(v, "/d") == Value::Null
                && at(v, "/dim_a") == json!(5)
                && at(v, "/excluded_cycle_t") == json!(1)
        }),
        g!("profile cubic threefolds", ["case-profile", "cubic-threefolds"], 0, |v| {
            at(v, "/d") == json!(3)
                && at(v, "/n") == json!(11)
                && at(v, "/pol_degree") == json!(59049)
                && at(v, "/quotient_1") == json!(vec![3; 10])
                && at(v, "/quotient_2") == json!([3])
                && at(v, "/zrank") == json!(22)
                && at(v, "/excluded_cycle_t") == json!(3)
        }),
        g!("profile genus3", ["case-profile", "genus3"], 0, |v| {
            at(v, "/ring") == json!(-4)
                && at(v, "/d") == json!(2)
                && at(v, "/n") == json!(7)
                && at(v, "/pol_degree") == json!(64)
                && at(v, "/quotient_1") == json!(vec![2; 6])
                && at(v, "/quotient_2") == json!([2])
                && at(v, "/zrank") == json!(14)
                && at(v, "/excluded_cycle_t") == json!(2)
        }),
        g!("profile genus4", ["case-profile", "genus4"], 0, |v| {
            at(v, "/ring") == json!(-3)
                && at(v, "/n") == json!(10)
                && at(v, "/pol_degree") == json!(6561)
                && at(v, "/quotient_1") == json!(vec![3; 8])
                && at(v, "/quotient_2") == json!([3, 3])
                && at(v, "/zrank") == json!(20)
                && at(v, "/excluded_cycle_t") == json!(2)
        }),
        g!("unknown case", ["case-profile", "quartic-surfaces"], 2, any),
        g!("star 3, 11", ["star-degree", "--d", "3", "--n", "11"], 0, exact "{\"d\":3,\"n\":11,\"degree\":59049,\"t\":{\"3\":10}}\n"),
        g!("star 3, 10", ["star-degree", "--d", "3", "--n", "10"], 0, |v| at(v, "/degree") == json!(6561)),
        g!("star 2, 7", ["star-degree", "--d", "2", "--n", "7"], 0, exact "{\"d\":2,\"n\":7,\"degree\":64,\"t\":{\"2\":6}}\n"),
        g!("bad d", ["star-degree", "--d", "4", "--n", "7"], 2, any),
        g!(
            "build cubic surfaces",
            ["signature", "--in", "-", "--details"],
            pipe = ["case-build", "cubic-surfaces"],
            0,
            |v| { at(v, "/self_dual") == json!(true) && at(v, "/p") == json!(4) && at(v, "/q") == json!(1) }
        ),
        g!("build genus3 divisors", ["snf", "--in", "-"], pipe = ["case-build", "genus3"], 0, |v| {
            at(v, "/divisors") == json!([[2, 0], [2, 1], [2, 1], [2, 1], [2, 1], [2, 1], [2, 1]])
        }),
        g!("build genus3 signature", ["signature", "--in", "-"], pipe = ["case-build", "genus3"], 0, |v| {
            *v == json!({"p": 6, "q": 1})
        }),
        g!("build cubic threefolds", ["disc-group", "--in", "-"], pipe = ["case-build", "cubic-threefolds"], 0, |v| {
            at(v, "/shape") == json!(vec![3; 10])
        }),
        g!(
            "build cubic threefolds signature",
            ["signature", "--in", "-"],
            pipe = ["case-build", "cubic-threefolds"],
            0,
            |v| { *v == json!({"p": 10, "q": 1}) }
        ),
        g!("verify cubic surfaces", ["case-verify", "cubic-surfaces", "--build"], 0, |v| at(v, "/pass") == json!(true)),
        g!(
            "verify definite diag",
            [
                "case-verify",
                "cubic-surfaces",
                "--ring",
                "-3",
                "--gram",
                "[[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]]"
            ],
            1,
            |v| { v["checks"].as_array().unwrap().iter().any(|c| c["id"] == "signature" && c["pass"] == json!(false)) }
        ),
        g!("verify cubic threefolds radical", ["case-verify", "cubic-threefolds", "--build"], 0, |v| {
            v["checks"]
                .as_array()
                .unwrap()
                .iter()
                .any(|c| c["id"] == "radical_dim" && c["actual"] == "10" && c["pass"] == json!(true))
        }),
        // cli
        g!("signature E", ["signature", "--ring", "-3", "--gram", E], 0, exact "{\"p\":1,\"q\":1}\n"),
    ]
}

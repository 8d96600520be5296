mod common;

use common::*;
use serde_json::Value;

fn entry(v: &Value, k: usize) -> Vec<Vec<(f64, f64)>> {
    matrix(&v["entries"][k])
}

#[test]
fn examples_match_the_corpus_and_repeat_byte_for_byte() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    examples(a.path());
    examples(b.path());
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 14);
    for n in &names {
        let x = std::fs::read(a.path().join(n)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(n)).unwrap(), "{n:?}");
    }
    for q in ["coin.qpl", "bell.qpl", "grover2.qpl", "grover3.qpl"] {
        let made = std::fs::read_to_string(a.path().join(q)).unwrap();
        assert_eq!(made, std::fs::read_to_string(corpus(q)).unwrap(), "{q}");
    }
}

#[test]
fn bell_example_reproduces_stabilizer_preconditions() {
    let d = tempfile::tempdir().unwrap();
    examples(d.path());
    let prog = d.path().join("bell.qpl");
    let zz = qwp(&["wp", "--program", p(&prog), "--post", p(&d.path().join("bell_post_zz.json")), "--observable"]);
    let v = assert_schema("tuple", &zz);
    let iz = real(&[&[1., 0., 0., 0.], &[0., -1., 0., 0.], &[0., 0., 1., 0.], &[0., 0., 0., -1.]]);
    assert!(max_diff(&entry(&v, 0), &iz) <= 1e-12);
    let xx = qwp(&["wp", "--program", p(&prog), "--post", p(&d.path().join("bell_post_xx.json")), "--observable"]);
    let zi = real(&[&[1., 0., 0., 0.], &[0., 1., 0., 0.], &[0., 0., -1., 0.], &[0., 0., 0., -1.]]);
    assert!(max_diff(&entry(&assert_schema("tuple", &xx), 0), &zi) <= 1e-12);
    // the Bell projector pulls back to |00⟩⟨00|
    let bp = qwp(&["wp", "--program", p(&prog), "--post", p(&d.path().join("bell_post.json"))]);
    let e00 = real(&[&[1., 0., 0., 0.], &[0., 0., 0., 0.], &[0., 0., 0., 0.], &[0., 0., 0., 0.]]);
    assert!(max_diff(&entry(&assert_schema("tuple", &bp), 0), &e00) <= 1e-12);
    // without --observable, Z⊗Z is not a predicate
    let bad = qwp(&["wp", "--program", p(&prog), "--post", p(&d.path().join("bell_post_zz.json"))]);
    assert_eq!(bad.code, 3);
    assert_schema("error", &bad);
}

#[test]
fn identity_program_echoes() {
    let d = tempfile::tempdir().unwrap();
    let post = write(d.path(), "p.json", &tuple_json(&[vec![vec![0.3, 0.1], vec![0.1, 0.6]]]));
    let id = corpus("identity.qpl");
    let w = qwp(&["wp", "--program", p(&id), "--post", p(&post)]);
    let v = assert_schema("tuple", &w);
    assert!(max_diff(&entry(&v, 0), &real(&[&[0.3, 0.1], &[0.1, 0.6]])) == 0.0);
    let r = qwp(&["run", "--program", p(&id), "--state", p(&post)]);
    let v = assert_schema("run", &r);
    assert!(max_diff(&entry(&v["state"], 0), &real(&[&[0.3, 0.1], &[0.1, 0.6]])) == 0.0);
}

#[test]
fn runs_report_branch_traces() {
    let d = tempfile::tempdir().unwrap();
    examples(d.path());
    let coin = qwp(&["run", "--program", p(&d.path().join("coin.qpl")), "--state", p(&d.path().join("coin_state.json"))]);
    let v = assert_schema("run", &coin);
    let t: Vec<f64> = v["traces"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(t.len() == 2 && (t[0] - 0.5).abs() <= 1e-12 && (t[1] - 0.5).abs() <= 1e-12);
    let g = qwp(&["run", "--program", p(&d.path().join("grover2.qpl")), "--state", p(&d.path().join("grover2_state.json"))]);
    let v = assert_schema("run", &g);
    assert!((v["traces"][3].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    // the register size follows the state
    let s3 = write(d.path(), "s3.json", &tuple_json(&[{
        let mut m = vec![vec![0.0; 8]; 8];
        m[0][0] = 1.0;
        m
    }]));
    let c3 = qwp(&["run", "--program", p(&d.path().join("coin.qpl")), "--state", p(&s3)]);
    assert_eq!(assert_schema("run", &c3)["state"]["sig"], serde_json::json!([8, 8]));
}

#[test]
fn check_verdicts_and_round_trip() {
    let d = tempfile::tempdir().unwrap();
    examples(d.path());
    let f = |n: &str| d.path().join(n);
    let g = qwp(&["check", "--program", p(&f("grover2.qpl")), "--post", p(&f("grover2_post.json")),
        "--state", p(&f("grover2_state.json")), "--threshold", "1"]);
    assert_eq!(g.code, 0);
    let v = assert_schema("triple", &g);
    assert_eq!(v["verdict"], "pass");
    assert!(v["duality_residual"].as_f64().unwrap() <= 1e-9);

    let c = qwp(&["check", "--program", p(&f("coin.qpl")), "--post", p(&f("coin_post.json")),
        "--state", p(&f("coin_state.json")), "--threshold", "0.6"]);
    assert_eq!(c.code, 1);
    let v = assert_schema("triple", &c);
    assert_eq!(v["verdict"], "fail");
    assert!((v["expectation"].as_f64().unwrap() - 0.5).abs() <= 1e-12);

    let zero = write(d.path(), "zero.json", &tuple_json(&vec![vec![vec![0.0; 4]; 4]; 4]));
    let z = qwp(&["check", "--program", p(&f("grover2.qpl")), "--post", p(&zero),
        "--state", p(&f("grover2_state.json")), "--threshold", "0"]);
    let v = assert_schema("triple", &z);
    assert_eq!((z.code, v["verdict"].as_str(), v["expectation"].as_f64()), (0, Some("pass"), Some(0.0)));

    // expectation recomputed from the wp output and the state file
    for (prog, post, state) in [("coin.qpl", "coin_post.json", "coin_state.json"),
        ("grover3.qpl", "grover3_post.json", "grover3_state.json"), ("bell.qpl", "bell_post.json", "bell_state.json")] {
        let (prog, post, state) = (f(prog), f(post), f(state));
        let chk = qwp(&["check", "--program", p(&prog), "--post", p(&post), "--state", p(&state), "--threshold", "0"]);
        let e = assert_schema("triple", &chk)["expectation"].as_f64().unwrap();
        let w = assert_schema("tuple", &qwp(&["wp", "--program", p(&prog), "--post", p(&post)]));
        let s: Value = serde_json::from_str(&std::fs::read_to_string(&state).unwrap()).unwrap();
        let (a, b) = (entry(&w, 0), entry(&s, 0));
        let mut tr = 0.0;
        for i in 0..a.len() {
            for j in 0..a.len() {
                tr += a[i][j].0 * b[j][i].0 - a[i][j].1 * b[j][i].1;
            }
        }
        assert!((tr - e).abs() <= 1e-12, "{}: {tr} vs {e}", prog.display());
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let d = tempfile::tempdir().unwrap();
    examples(d.path());
    let f = |n: &str| d.path().join(n);
    let (prog, post, state) = (f("grover3.qpl"), f("grover3_post.json"), f("grover3_state.json"));
    let args = ["check", "--program", p(&prog), "--post", p(&post), "--state", p(&state), "--threshold", "0.9", "--seed", "42"];
    let (a, b) = (qwp(&args), qwp(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(assert_schema("triple", &a)["seed"], 42);
}

#[test]
fn validate_reports() {
    let d = tempfile::tempdir().unwrap();
    let two = write(d.path(), "two.json", &tuple_json(&[vec![vec![2.0, 0.0], vec![0.0, 2.0]]]));
    let r = qwp(&["validate", "--kind", "predicate", p(&two)]);
    assert_eq!(r.code, 3);
    let v = assert_schema("report", &r);
    assert_eq!(v["pass"], false);
    assert_eq!(v["violations"][0]["witness"], 2.0);
    // 2·I has trace 4, so it is not a state either
    assert_eq!(qwp(&["validate", "--kind", "state", p(&two)]).code, 3);

    let ch = r#"{"in": 2, "out": 2, "kraus": [
        {"rows": 2, "cols": 2, "entries": [[1,0],[0,0],[0,0],[0,0]]},
        {"rows": 2, "cols": 2, "entries": [[0,0],[0,0],[0,0],[1,0]]}]}"#;
    let c = qwp(&["validate", "--kind", "channel", p(&write(d.path(), "c.json", ch))]);
    assert_eq!(c.code, 0);
    assert_eq!(assert_schema("report", &c)["pass"], true);

    let so = format!(r#"{{"in_sig": [2], "out_sig": [2, 2], "blocks": [[{ch}], [{ch}]]}}"#);
    let s = qwp(&["validate", "--kind", "superop", p(&write(d.path(), "s.json", &so))]);
    assert_eq!(s.code, 3);
    assert_eq!(assert_schema("report", &s)["violations"][0]["code"], "trace_increasing");

    // wrong shape for the kind
    let m = qwp(&["validate", "--kind", "channel", p(&two)]);
    assert_eq!(m.code, 3);
    assert_eq!(assert_schema("error", &m)["error"]["kind"], "InvalidInput");
}

#[test]
fn error_paths() {
    let d = tempfile::tempdir().unwrap();
    examples(d.path());
    let f = |n: &str| d.path().join(n);
    let post = f("coin_post.json");
    let cases: Vec<(&str, String, i32)> = vec![
        ("SyntaxError", "q *= \n".into(), 2),
        ("ScopeError", "new qbit q := 0\nr *= H\n".into(), 2),
        ("TypeError", "input bit c\nc *= H\n".into(), 2),
        ("ElaborationError", "input qbit q\nq *= [[1, 1], [0, 1]]\n".into(), 2),
    ];
    for (kind, src, code) in cases {
        let prog = write(d.path(), "bad.qpl", &src);
        let out = qwp(&["wp", "--program", p(&prog), "--post", p(&post)]);
        assert_eq!(out.code, code, "{kind}: {}", out.stdout);
        assert_eq!(assert_schema("error", &out)["error"]["kind"], kind);
    }
    let syn = qwp(&["wp", "--program", p(&write(d.path(), "s.qpl", "q *= \n")), "--post", p(&post)]);
    let v = assert_schema("error", &syn);
    assert_eq!((v["error"]["line"].as_u64(), v["error"]["col"].as_u64()), (Some(1), Some(6)));

    let coin = f("coin.qpl");
    let wrong_state = qwp(&["run", "--program", p(&f("grover2.qpl")), "--state", p(&f("coin_state.json"))]);
    assert_eq!(wrong_state.code, 3);
    assert_eq!(assert_schema("error", &wrong_state)["error"]["kind"], "SignatureMismatch");
    let wrong_post = qwp(&["wp", "--program", p(&f("grover2.qpl")), "--post", p(&post)]);
    assert_eq!(assert_schema("error", &wrong_post)["error"]["kind"], "SignatureMismatch");
    let missing = qwp(&["wp", "--program", p(&f("nope.qpl")), "--post", p(&post)]);
    assert_eq!((missing.code, assert_schema("error", &missing)["error"]["kind"].as_str()), (3, Some("InvalidInput")));
    let garbage = qwp(&["wp", "--program", p(&coin), "--post", p(&write(d.path(), "g.json", "{"))]);
    assert_eq!(garbage.code, 3);
    assert_schema("error", &garbage);

    let flip = corpus("flip_while.qpl");
    let idq = write(d.path(), "idq.json", &tuple_json(&[vec![vec![1.0, 0.0], vec![0.0, 1.0]]]));
    let nc = qwp(&["wp", "--program", p(&flip), "--post", p(&idq), "--max-iter", "3"]);
    assert_eq!(nc.code, 4);
    assert_eq!(assert_schema("error", &nc)["error"]["kind"], "NonConvergent");

    for r in ["1.5", "-0.1", "NaN"] {
        let t = qwp(&["check", "--program", p(&coin), "--post", p(&post), "--state", p(&f("coin_state.json")), "--threshold", r]);
        assert_eq!(t.code, 5, "{r}");
        assert_eq!(assert_schema("error", &t)["error"]["kind"], "InvalidThreshold");
    }

    for args in [
        vec!["frobnicate"],
        vec!["wp", "--program", p(&coin)],
        vec!["wp", "--program", p(&coin), "--post", p(&post), "--tol", "-1"],
        vec!["wp", "--program", p(&coin), "--post", p(&post), "--max-iter", "0"],
        vec!["wp", "--program", p(&f("bell.qpl")), "--post", p(&post), "--register", "2"],
        vec!["example", "bell", "--n", "2"],
    ] {
        let out = qwp(&args);
        assert_eq!(out.code, 64, "{args:?}: {}", out.stdout);
        assert_schema("error", &out);
    }
    let env_bad = qwp_env(&["wp", "--program", p(&coin), "--post", p(&post)], &[("QWP_TOL", "tiny")]);
    assert_eq!(env_bad.code, 64);
    assert_eq!(assert_schema("error", &env_bad)["error"]["kind"], "InvalidTolerance");
}

#[test]
fn tolerance_comes_from_the_environment() {
    let d = tempfile::tempdir().unwrap();
    let flip = corpus("flip_while.qpl");
    let idq = write(d.path(), "idq.json", &tuple_json(&[vec![vec![1.0, 0.0], vec![0.0, 1.0]]]));
    let args = ["wp", "--program", p(&flip), "--post", p(&idq), "--max-iter", "60"];
    assert_eq!(qwp(&args).code, 0);
    assert_eq!(qwp_env(&args, &[("QWP_TOL", "1e-300")]).code, 4);
    let mut over = args.to_vec();
    over.extend(["--tol", "1e-6"]);
    assert_eq!(qwp_env(&over, &[("QWP_TOL", "1e-300")]).code, 0);
}

#[test]
fn text_format_and_out_file() {
    let d = tempfile::tempdir().unwrap();
    examples(d.path());
    let f = |n: &str| d.path().join(n);
    let t = qwp(&["wp", "--program", p(&f("grover3.qpl")), "--post", p(&f("grover3_post.json")), "--format", "text"]);
    assert_eq!(t.code, 0);
    assert!(t.stdout.starts_with("sig: [8]\nentry 0:\n"), "{}", t.stdout);
    // every number has at most six significant digits
    for tok in t.stdout.split(|c: char| "[], \n:i+".contains(c)).filter(|s| s.starts_with(|c: char| c.is_ascii_digit()) && s.contains('.')) {
        let digits = tok.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect::<String>();
        assert!(digits.trim_start_matches('0').len() <= 6, "{tok}");
    }
    let dest = d.path().join("pre.json");
    let o = qwp(&["wp", "--program", p(&f("coin.qpl")), "--post", p(&f("coin_post.json")), "--out", p(&dest)]);
    assert_eq!(assert_schema("written", &o)["written"], p(&dest));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert!(schema_errors("tuple", &written).is_empty());
}

#[test]
fn help_is_plain_text() {
    let h = qwp(&["--help"]);
    assert_eq!(h.code, 0);
    assert!(h.stdout.contains("Usage: qwp"));
}

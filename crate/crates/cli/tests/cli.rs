use std::path::PathBuf;

use anodyne::Certificate;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = anodyne_cli::run(
        std::iter::once("anodyne").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("anodyne-cli-{}-{name}", std::process::id()))
}

#[test]
fn order_follows_the_cube_order() {
    let (code, out, _) = cli(&["cube", "order", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(1,2,3) < (1,3,2) < (2,1,3) < (3,1,2) < (2,3,1) < (3,2,1)\n");
    assert_eq!(cli(&["cube", "order", "--n", "1"]).1, "(1)\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&[]).0, 2);
    assert_eq!(cli(&["cube", "order"]).0, 2);
    assert_eq!(cli(&["cube", "order", "--n", "3", "--bogus"]).0, 2);
    assert_eq!(cli(&["build", "horn", "--n", "2", "--i", "5"]).0, 2);
    assert_eq!(cli(&["cube", "fill", "--n", "7"]).0, 2);
    assert_eq!(cli(&["twisted", "vn", "--n", "5"]).0, 2);
    assert_eq!(cli(&["verify", "/nonexistent/cert.json"]).0, 2);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn built_objects_parse_back() {
    for args in [
        &["build", "q", "--n", "2"][..],
        &["build", "r", "--n", "1"],
        &["build", "j", "--n", "2"],
        &["build", "m-stage", "--n", "2", "--k", "1"],
        &["build", "left-box", "--n", "3"],
        &["build", "horn-set", "--n", "4", "--faces", "0,4"],
    ] {
        let (code, out, err) = cli(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        anodyne::text::parse(&out).unwrap();
    }
    let q2 = anodyne::text::parse(&cli(&["build", "q", "--n", "2"]).1).unwrap();
    assert_eq!(q2, anodyne::twisted::q(2).decorated);
}

#[test]
fn emitted_certificates_verify_and_mutations_fail() {
    let path = temp("fill.json");
    let p = path.to_str().unwrap();
    assert_eq!(cli(&["cube", "fill", "--n", "3", "--out", p]).0, 0);
    let (code, out, _) = cli(&["verify", p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("ok: 8 steps"));

    let mut cert = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert.steps.pop();
    std::fs::write(&path, cert.to_json()).unwrap();
    let (code, out, _) = cli(&["verify", p]);
    assert_eq!(code, 1);
    assert!(out.contains("step 7"), "{out}");
    std::fs::write(&path, "{\"regime\": 3}").unwrap();
    assert_eq!(cli(&["verify", p]).0, 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["twisted", "vn", "--n", "2"][..],
        &["oracle", "subsets", "--n", "5", "--trials", "50", "--seed", "9"],
        &["cube", "inner", "--n", "3"],
    ] {
        let a = cli(args);
        assert_eq!(a.0, 0);
        assert_eq!(a, cli(args));
    }
    let (_, out, _) = cli(&["oracle", "subsets", "--n", "5", "--trials", "50"]);
    assert_eq!(out, "subsets n=5 seed=0: 50 passed\n");
}

#[test]
fn search_and_prism_from_files() {
    let start = temp("start.txt");
    let target = temp("target.txt");
    std::fs::write(&start, cli(&["build", "horn", "--n", "3", "--i", "1"]).1).unwrap();
    std::fs::write(&target, cli(&["build", "simplex", "--n", "3"]).1).unwrap();
    let (code, json, err) = cli(&[
        "certify",
        "search",
        "--start",
        start.to_str().unwrap(),
        "--target",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(Certificate::from_json(&json).unwrap().steps.len(), 1);
    let (code, _, _) = cli(&[
        "certify",
        "search",
        "--start",
        target.to_str().unwrap(),
        "--target",
        start.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);

    std::fs::write(&target, "#ambient linear 1\n#cells\n0,1\n").unwrap();
    std::fs::write(&start, "#ambient linear 1\n#cells\n0\n1\n").unwrap();
    let (code, json, err) = cli(&[
        "cube",
        "prism",
        "--complex",
        target.to_str().unwrap(),
        "--sub",
        start.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(anodyne::certify::replay(&Certificate::from_json(&json).unwrap()).ok);
    std::fs::remove_file(start).unwrap();
    std::fs::remove_file(target).unwrap();
}

#[test]
fn twisted_commands() {
    let x = temp("x.txt");
    std::fs::write(&x, "#ambient linear 1\n#cells\n0,1\n").unwrap();
    let (code, out, _) = cli(&["twisted", "tw", "--x", x.to_str().unwrap(), "--n", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0 0\n0 1\n1 1\n");
    let (_, out, _) = cli(&["twisted", "tw", "--x", x.to_str().unwrap(), "--n", "1"]);
    assert!(out.lines().all(|l| l.ends_with("fully-scaled")));
    std::fs::remove_file(x).unwrap();
    assert_eq!(
        cli(&["twisted", "pushout-check", "--n", "3"]),
        (0, "true\n".into(), String::new())
    );
    assert_eq!(
        cli(&["cube", "btau", "--n", "3", "--perm", "1,2,3"]).1,
        "(1,2,3): 0,3\n"
    );
    assert_eq!(cli(&["cube", "btau", "--n", "3", "--perm", "2,3,1"]).0, 2);
}

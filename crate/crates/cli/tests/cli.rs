use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qx")).args(args).output().expect("qx runs")
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    repo().join("corpus").join(name).to_string_lossy().into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn compile_meanprop_gives_four() {
    let v = json_out(&qx(&["compile", &corpus("meanprop.qdx")]));
    let certs = v.as_array().unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["subject"], "4");
    assert_eq!(certs[0]["enclosure"]["decimal"], "4");
    assert_eq!(certs[0]["verdicts"][0]["status"], "rational");
    assert_eq!(certs[0]["program"]["output"], "m");
}

#[test]
fn compile_batch_keeps_file_order() {
    let v = json_out(&qx(&["compile", &corpus("meanprop.qdx"), &corpus("sqrt_two.qdx")]));
    let outputs: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["program"]["output"].as_str().unwrap()).collect();
    assert_eq!(outputs, ["m", "d"]);
}

#[test]
fn unbound_name_exits_four_with_span() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "bad.qdx", "let a = seg(2);\nlet m = meanprop(a, bb);\nemit m;\n");
    let o = qx(&["compile", &p]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("bad.qdx:2:21: error: unbound name `bb`"), "{}", stderr(&o));

    let o = qx(&["--json", "compile", &p]);
    assert_eq!(code(&o), 4);
    let d: Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(d["exit_code"], 4);
    assert_eq!(d["diagnostics"][0]["kind"], "unbound-name");
    assert_eq!(d["diagnostics"][0]["span"]["line"], 2);
    assert_eq!(d["diagnostics"][0]["span"]["column"], 21);
}

#[test]
fn syntax_error_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "bad.qdx", "let a = seg(2) emit a;");
    assert_eq!(code(&qx(&["compile", &p])), 3);
    assert_eq!(code(&qx(&["eval", "sqrt("])), 3);
}

#[test]
fn geometry_error_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "bad.qdx", "let o = point(0, 0);\nlet l = line(o, o);\nlet a = seg(1);\nemit a;\n");
    let o = qx(&["compile", &p]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains(":2:1:"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_two() {
    assert_eq!(code(&qx(&["compile", "/nonexistent/never.qdx"])), 2);
    assert_eq!(code(&qx(&["verify", "/nonexistent/never.json"])), 2);
}

#[test]
fn eval_examples() {
    let o = qx(&["eval", "sin_pi(2/5)", "--precision", "20"]);
    assert_eq!(code(&o), 0);
    // certified digits are truncated: the value is 0.95105651629515357211643...
    assert_eq!(stdout(&o).trim(), "0.95105651629515357211…");

    let o = qx(&["eval", "clavius(20)"]);
    assert!(stdout(&o).starts_with("0.63661977"), "{}", stdout(&o));

    let o = qx(&["eval", "log(-1; 0)"]);
    assert!(stdout(&o).starts_with("0 + 3.14159265"), "{}", stdout(&o));

    let o = qx(&["eval", "21/10"]);
    assert_eq!(stdout(&o).trim(), "2.1");
}

#[test]
fn leading_minus_and_exact_imaginary_values() {
    assert_eq!(stdout(&qx(&["eval", "-1/2"])).trim(), "-0.5");
    assert_eq!(stdout(&qx(&["eval", "1 + 2*i"])).trim(), "1 + 2i");
    let v = json_out(&qx(&["report", "pow(-1, sqrt(2))", "--base", "-1"]));
    assert_eq!(v["base"], "-1");
}

#[test]
fn eval_json_carries_exact_endpoints() {
    let v = json_out(&qx(&["--json", "eval", "sqrt(2)", "--precision", "10"]));
    assert_eq!(v["digits"], 10);
    assert!(v["decimal"].as_str().unwrap().starts_with("1.4142135623"));
    assert_eq!(v["im"][0], "0");
}

#[test]
fn domain_errors_exit_five() {
    assert_eq!(code(&qx(&["eval", "log(0)"])), 5);
    assert_eq!(code(&qx(&["eval", "1/(1-1)"])), 5);
}

#[test]
fn ladder_examples() {
    let v = json_out(&qx(&["ladder", "pow(-1, sqrt(2))", "--ascend"]));
    assert_eq!(v["ladder"]["descent"]["rungs"].as_array().unwrap().len(), 1);
    assert_eq!(v["ladder"]["ascent"]["degree"], 1);
    assert_eq!(v["ladder"]["ascent"]["conditional"], true);
    assert_eq!(v["ladder"]["ascent"]["choices"][0]["unconditional"]["rule"], "gelfond-schneider");

    let v = json_out(&qx(&["ladder", "log(3; -1)"]));
    let rungs = v["ladder"]["descent"]["rungs"].as_array().unwrap();
    assert_eq!(rungs.len(), 1);
    assert_eq!(rungs[0]["kind"], "exponential_algebraic");

    let v = json_out(&qx(&["ladder", "5/7", "--reduce", "--ascend"]));
    assert!(v["ladder"]["descent"]["rungs"].as_array().unwrap().is_empty());
    assert_eq!(v["ladder"]["ascent"]["degree"], 0);
}

#[test]
fn reduce_records_the_removal_relation() {
    let v = json_out(&qx(&["reduce", "log(2; -1) + log(3; -1) + log(6; -1)"]));
    assert_eq!(v["ladder"]["reduced"]["rungs"].as_array().unwrap().len(), 2);
    assert_eq!(v["relations"].as_array().unwrap().len(), 1);
}

#[test]
fn ladder_with_custom_base() {
    let v = json_out(&qx(&["ladder", "pow(2, sqrt(3))", "--base", "2"]));
    assert_eq!(v["base"], "2");
    assert_eq!(v["ladder"]["descent"]["rungs"].as_array().unwrap().len(), 1);
    assert_eq!(code(&qx(&["ladder", "1", "--base", "1"])), 4);
}

#[test]
fn render_meanprop_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.svg");
    let o = qx(&["render", &corpus("meanprop.qdx"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("<svg"));
    let group = svg.split("id=\"step-m\"").nth(1).unwrap().split("</g>").next().unwrap();
    assert_eq!(group.matches("class=\"arc\"").count(), 1);
    assert_eq!(group.matches("class=\"segment\"").count(), 2);
    assert_eq!(group.matches("class=\"perpendicular\"").count(), 1);

    let out2 = dir.path().join("q.svg");
    let o = qx(&["render", &corpus("meanprop.qdx"), "--out", out2.to_str().unwrap(), "--with-curve", "quadratrix"]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&out2).unwrap().contains("class=\"curve\""));
}

#[test]
fn render_to_invalid_path_exits_two() {
    let o = qx(&["render", &corpus("meanprop.qdx"), "--out", "/nonexistent/dir/out.svg"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn outputs_are_deterministic() {
    let a = qx(&["compile", &corpus("pentagon.qdx"), &corpus("trisect.qdx")]);
    let b = qx(&["compile", &corpus("pentagon.qdx"), &corpus("trisect.qdx")]);
    assert_eq!(a.stdout, b.stdout);
    let a = qx(&["report", "pow(-1, sqrt(2))"]);
    let b = qx(&["report", "pow(-1, sqrt(2))"]);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let svgs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("{i}.svg"));
            qx(&["render", &corpus("vesica.qdx"), "--out", out.to_str().unwrap(), "--with-curve", "spiral"]);
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(svgs[0], svgs[1]);
}

#[test]
fn golden_certificates_verify() {
    let dir = repo().join("certs");
    let mut paths: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path().to_string_lossy().into_owned())
        .filter(|p| p.ends_with(".json"))
        .collect();
    paths.sort();
    assert!(paths.len() >= 10);
    let mut args = vec!["verify"];
    args.extend(paths.iter().map(String::as_str));
    let o = qx(&args);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn golden_program_certificates_are_reproduced() {
    for entry in std::fs::read_dir(repo().join("corpus")).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_stem().unwrap().to_string_lossy().into_owned();
        let golden = std::fs::read(repo().join("certs").join(format!("{name}.json"))).unwrap();
        let o = qx(&["compile", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert_eq!(o.stdout, golden, "{name}");
    }
}

#[test]
fn tampered_certificate_fails_verification() {
    let text = std::fs::read_to_string(repo().join("certs/sqrt_two.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v[0]["enclosure"]["decimal"] = Value::String("1.5".into());
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "t.json", &v.to_string());
    let o = qx(&["verify", &p]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn realize(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_realize"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const X2Y: &str = "ring { even: x:4; odd: y:1 } ideal { x^2*y }";

#[test]
fn parse_text_is_canonical() {
    let o = realize(&["parse", "--format", "text"], "ring { even: x:2 } ideal { x^3; x^2 # comment\n }");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ring { even: x:2 } ideal { x^2 }\n");
}

#[test]
fn parse_error_exits_2_with_position() {
    let o = realize(&["parse"], "ring { even: x:4; odd: y:1 }\nideal { y^2 }");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("<stdin>:2:"), "{err}");
}

#[test]
fn missing_input_file_exits_2() {
    let o = realize(&["verify", "--input", "/nonexistent/ring.txt"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hilbert_json() {
    let o = realize(&["hilbert", "--dmax", "9"], X2Y);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ranks"], serde_json::json!([1, 1, 0, 0, 1, 1, 0, 0, 1, 0]));
}

#[test]
fn polarize_json() {
    let o = realize(&["polarize"], X2Y);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ideal"], serde_json::json!(["x'_1_1*x'_1_2*y"]));
    assert_eq!(v["w_variables"][0]["name"], "w_1_2");
}

#[test]
fn plan_is_deterministic_and_truncates_only_on_request() {
    let a = stdout(&realize(&["plan"], X2Y));
    let b = stdout(&realize(&["plan"], X2Y));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(v["z_model"]["truncation"].is_null());
    assert_eq!(v["z_model"]["l"].as_array().unwrap().len(), 3);

    let t: serde_json::Value = serde_json::from_str(&stdout(&realize(&["plan", "--dmax", "4"], X2Y))).unwrap();
    assert_eq!(t["z_model"]["truncation"], 4);
    assert!(t["z_model"]["l"].as_array().unwrap().is_empty());
}

#[test]
fn verify_exit_codes() {
    let pass = realize(&["verify", "--dmax", "20", "--format", "text"], X2Y);
    assert_eq!(pass.status.code(), Some(0));
    assert!(stdout(&pass).ends_with("overall: PASS\n"));

    let inconclusive = realize(&["verify", "--dmax", "4"], "ring { even: x:6 } ideal { x^2 }");
    assert_eq!(inconclusive.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&inconclusive)).unwrap();
    assert_eq!(v["overall"], "INCONCLUSIVE");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("realize-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("ring.txt");
    let out = dir.join("plan.json");
    std::fs::write(&input, X2Y).unwrap();
    let o = realize(
        &["plan", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, stdout(&realize(&["plan"], X2Y)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn example_text() {
    let o = realize(&["example", "--format", "text"], "");
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("delta_1 = u_2*u_1^-1"));
    assert!(s.contains("L  = (z_1_1^2*y, z_1_1*z_1_2*y, z_1_2^2*y)"));
    assert!(s.ends_with("overall: PASS\n"));
}

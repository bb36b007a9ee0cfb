use std::process::{Command, Output};

fn dglap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dglap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn poly_examples() {
    let out = dglap(&["poly", "--kind", "bernardi", "--graph", "n=2;1>2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z + q\n");

    let out = dglap(&["poly", "--kind", "potts", "--graph", "n=2;1-2"]);
    assert_eq!(stdout(&out), "q^2 + q*v\n");
    let out = dglap(&["poly", "--kind", "potts-sokal", "--graph", "n=2;1-2"]);
    assert_eq!(stdout(&out), "q^2 + q*v\n");

    let out = dglap(&["poly", "--kind", "chi-gt", "--graph", "n=1;1>1"]);
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn poly_json_round_trips() {
    let out = dglap(&["--format", "json", "poly", "--kind", "chromatic", "--graph", "n=3;1-2,2-3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["kind"], "chromatic");
    assert_eq!(doc["polynomial"]["variables"], serde_json::json!(["q", "y"]));
    let p: dglap::MultiPoly = serde_json::from_value(doc["polynomial"].clone()).unwrap();
    let text = stdout(&dglap(&["poly", "--kind", "chromatic", "--graph", "n=3;1-2,2-3"]));
    assert_eq!(format!("{p}\n"), text);
}

#[test]
fn parse_errors_exit_two() {
    let out = dglap(&["poly", "--kind", "bernardi", "--graph", "n=2;1-2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position"), "{}", stderr(&out));
    let out = dglap(&["poly", "--kind", "bernardi", "--graph", "n=2;1>3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dglap(&["poly", "--kind", "nonsense", "--graph", "n=2;"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn universal_examples() {
    let out = dglap(&["universal", "--kind", "det", "--n", "2", "--k", "1"]);
    assert_eq!(stdout(&out), "n=2 k=1 directed\n(-1) n=2;1>1\n(-1) n=2;2>2\n");

    let out = dglap(&["--format", "json", "universal", "--kind", "chi-gt", "--n", "1", "--k", "1"]);
    assert_eq!(stdout(&out), "{\"n\":1,\"k\":1,\"oriented\":true,\"terms\":[]}\n");

    let plain = dglap(&["universal", "--kind", "truncated-bernardi", "--n", "2", "--k", "1"]);
    let moved = dglap(&["universal", "--kind", "truncated-bernardi", "--n", "2", "--k", "1", "--laplace"]);
    assert_eq!(stdout(&plain), stdout(&moved));

    let out = dglap(&["universal", "--kind", "det-minor", "--n", "2", "--k", "1", "--subset", "2", "--laplace"]);
    assert_eq!(stdout(&out), "n=2 k=1 directed\n(1) n=2;1>2\n");
    let out = dglap(&["universal", "--kind", "acyclic-sum", "--n", "2", "--k", "1", "--subset", ""]);
    assert_eq!(stdout(&out), "n=2 k=1 directed\n");
    let out = dglap(&["universal", "--kind", "det-minor", "--n", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn universal_potts_round_trips() {
    let out = dglap(&["--format", "json", "universal", "--kind", "potts", "--n", "2", "--k", "2", "--laplace"]);
    let v: dglap::UndirectedVector = serde_json::from_str(&stdout(&out)).unwrap();
    let text = stdout(&dglap(&["universal", "--kind", "potts", "--n", "2", "--k", "2", "--laplace"]));
    assert_eq!(format!("{v}\n"), text);
    let parsed = dglap::UndirectedVector::parse_text(&text, dglap::VarSet::QV).unwrap();
    assert_eq!(parsed, v);
}

#[test]
fn verify_single_identity() {
    let out = dglap(&["verify", "--identity", "theorem1", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"identity\":\"theorem1\",\"n\":2,\"k\":2,\"status\":\"equal\",\"checked\":4,\"mismatches\":0}\n"
    );
    assert!(stderr(&out).contains("1 equal"));
}

#[test]
fn verify_guard_refusal() {
    let out = dglap(&["verify", "--identity", "theorem1", "--n", "5", "--k", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--max-steps"), "{}", stderr(&out));
    let out = dglap(&["--max-graphs", "10", "verify", "--identity", "theorem1", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--max-graphs"));
}

#[test]
fn pushforward_reading_counts_only_when_requested() {
    let both = dglap(&["verify", "--identity", "theorem2", "--n", "2", "--k", "1", "--reading", "both"]);
    assert_eq!(both.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&both)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["status"], "equal");
    assert_eq!(lines[1]["status"], "differ");
    assert_eq!(lines[1]["informational"], true);

    let only = dglap(&["verify", "--identity", "theorem2", "--n", "2", "--k", "1", "--reading", "directed-pushforward"]);
    assert_eq!(only.status.code(), Some(1));
}

#[test]
fn verify_all_is_deterministic() {
    let args = ["verify", "--all", "--n-max", "2", "--k-max", "2"];
    let out = dglap(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let last = stdout(&out).lines().last().unwrap().to_string();
    assert!(last.contains("\"identity\":\"sign-convention\""));
    assert!(last.contains("\"sign\":\"(-1)^n\""));

    let mut single = vec!["--jobs", "1"];
    single.extend(args);
    assert_eq!(stdout(&dglap(&single)), stdout(&out));
}

#[test]
fn verify_minor_subsets() {
    let out = dglap(&["--format", "text", "verify", "--identity", "cor-mtt", "--n", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("I={2}"));
}

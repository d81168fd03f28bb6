use std::process::{Command, Output};

use serde_json::{json, Value};

fn run_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quadunit"));
    cmd.args(args).env_remove("QUADUNIT_MAX_ITER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = run_with(args, &[]);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().expect("exit code"), v)
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = run(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    assert_eq!(v["status"], "ok");
    assert!(v.get("error").is_none());
    v["result"].clone()
}

fn err(args: &[&str], code: i32) -> String {
    let (c, v) = run(args);
    assert_eq!(c, code, "{args:?}: {v}");
    assert_eq!(v["status"], "error");
    assert!(v.get("result").is_none());
    v["error"].as_str().expect("message").to_string()
}

#[test]
fn cf_examples() {
    let r = ok(&["cf", "29"]);
    assert_eq!(r["preperiod"], json!([5]));
    assert_eq!(r["period"], json!([2, 1, 1, 2, 10]));
    assert_eq!(r["period_length"], 5);

    let r = ok(&["cf", "101", "--P", "1", "--Q", "4"]);
    assert_eq!(r["period"], json!([1, 3, 4]));
    assert_eq!(r["alpha"], "(√101+1)/4");

    let r = ok(&["cf", "101", "--P", "-1", "--Q", "4"]);
    assert_eq!(r["period"].as_array().unwrap().len(), 3);

    assert!(err(&["cf", "25"], 3).contains("N is a perfect square"));
    assert!(err(&["cf", "29", "--P", "1", "--Q", "3"], 3).contains("divide"));
}

#[test]
fn index_examples() {
    let r = ok(&["index", "29"]);
    assert_eq!(r["e"], 3);
    assert_eq!(
        (
            &r["epsilon_O"]["u"],
            &r["epsilon_O"]["v"],
            &r["epsilon_O"]["d"]
        ),
        (&json!(5), &json!(1), &json!(2))
    );
    assert_eq!(r["epsilon_A"]["text"], "70+13√29");
    assert_eq!(r["norm"], -1);
    assert_eq!(r["methods"]["parity"], true);
    assert_eq!(r["methods"]["cf_equivalence"], true);

    let r = ok(&["index", "101"]);
    assert_eq!(r["e"], 1);
    assert_eq!(r["epsilon_O"]["text"], "10+√101");
    assert_eq!(r["odd_pell"], Value::Null);

    let r = ok(&["index", "77", "--oracle-bound", "11"]);
    assert_eq!(r["odd_pell"], json!({"x": 9, "y": 1}));
    assert_eq!(r["methods"]["oracle"]["found"], json!([9, 1]));

    assert!(err(&["index", "45"], 3).contains("not square-free"));
    assert!(err(&["index", "7"], 3).contains("mod 4"));
}

#[test]
fn large_coordinates_are_strings() {
    let r = ok(&["index", "1621"]);
    assert!(r["epsilon_A"]["u"].is_string());
    assert!(r["epsilon_A"]["u"].as_str().unwrap().len() > 19);
}

#[test]
fn family_examples() {
    let r = ok(&[
        "family", "a2+4", "--a-min", "3", "--a-max", "21", "--verify",
    ]);
    let rows = r["rows"].as_array().unwrap();
    let sqf: Vec<_> = rows.iter().filter(|x| x["squarefree"] == true).collect();
    assert_eq!(sqf.len(), 9);
    assert!(sqf.iter().all(|x| x["observed_e"] == 3));
    assert_eq!(r["verified_rows"], 9);
    // a = 11 gives 125 = 5³, listed but not assigned an index.
    let flagged: Vec<_> = rows.iter().filter(|x| x["squarefree"] == false).collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["N"], 125);
    assert_eq!(flagged[0]["observed_e"], Value::Null);

    let r = ok(&[
        "family",
        "4a2+1",
        "--a-min",
        "5",
        "--a-max",
        "9",
        "--squarefree-only",
    ]);
    let ns: Vec<_> = r["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["N"].clone())
        .collect();
    assert_eq!(ns, vec![json!(101), json!(197)]);

    assert!(err(&["family", "a2-4", "--a-min", "1", "--a-max", "3"], 3)
        .contains("a below family bound"));
    assert!(err(&["family", "a2+5", "--a-min", "3", "--a-max", "5"], 3).contains("a2+5"));
}

#[test]
fn classgroup_examples() {
    let r = ok(&["classgroup", "101"]);
    assert_eq!(r["kernel_order"], 3);
    assert_eq!((&r["h_plus_N"], &r["h_plus_4N"]), (&json!(1), &json!(3)));
    assert_eq!(r["predicted_e"], r["observed_e"]);

    let r = ok(&["classgroup", "29"]);
    assert_eq!(r["kernel_order"], 1);

    assert!(err(&["classgroup", "24"], 3).contains("5 (mod 8)"));
}

#[test]
fn ideal_examples() {
    let r = ok(&["ideal", "square", "29"]);
    assert_eq!(r["lhs"], "[4,1+√29]^2");
    assert_eq!(r["rhs"], "2[4,3+√29]");
    assert_eq!(r["equal"], true);

    let r = ok(&["ideal", "principal", "101", "--sign", "+"]);
    assert_eq!(r["principal"], false);
    let r = ok(&["ideal", "principal", "29", "--sign", "-"]);
    assert_eq!(r["principal"], true);

    let r = ok(&["ideal", "extend", "29", "--sign", "-"]);
    assert_eq!(r["generated_is_O"], true);
    assert_eq!(r["conclusion"], "J = 2·O");

    assert!(err(&["ideal", "extend", "17", "--sign", "+"], 3).contains("5 (mod 8)"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["cf"],
        &["index", "x"],
        &["ideal", "square", "29", "--sign", "*"],
    ] {
        let out = run_with(args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn iteration_cap_from_flag_and_env() {
    assert!(err(&["cf", "29", "--max-iter", "3"], 3).contains("iteration cap"));
    assert!(err(&["index", "29", "--max-iter", "3"], 3).contains("iteration cap"));
    ok(&["cf", "29", "--max-iter", "6"]);

    let out = run_with(&["cf", "29"], &[("QUADUNIT_MAX_ITER", "3")]);
    assert_eq!(out.status.code(), Some(3));
    // The flag wins over the environment.
    let out = run_with(
        &["cf", "29", "--max-iter", "100"],
        &[("QUADUNIT_MAX_ITER", "3")],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["index", "1621"][..],
        &[
            "family", "a2-4", "--a-min", "5", "--a-max", "61", "--verify",
        ],
    ] {
        let a = run_with(args, &[]).stdout;
        let b = run_with(args, &[]).stdout;
        assert_eq!(a, b);
    }
}

#[test]
fn table_formats() {
    let out = run_with(
        &[
            "family",
            "4a2+1",
            "--a-min",
            "5",
            "--a-max",
            "9",
            "--squarefree-only",
            "--format",
            "csv",
        ],
        &[],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let header: Vec<_> = lines[0].split(',').collect();
    let n = header.iter().position(|h| *h == "N").unwrap();
    assert_eq!(lines[1].split(',').nth(n), Some("101"));

    let out = run_with(&["cf", "29", "--format", "md"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("| key | value |\n|---|---|\n"));
    assert!(text.contains("| period_length | 5 |"));

    let out = run_with(&["cf", "25", "--format", "csv"], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("status,error\n"));
}

#[test]
fn logs_go_to_stderr() {
    let out = run_with(&["cf", "25"], &[("RUST_LOG", "info")]);
    assert!(!out.stderr.is_empty());
    serde_json::from_slice::<Value>(&out.stdout).expect("stdout stays pure JSON");
}

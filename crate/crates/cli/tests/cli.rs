use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;

fn maass(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_maass"));
    c.args(args).env_remove("MAASS_TERMS").env_remove("MAASS_FLOAT_BITS");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = maass(args, &[]);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

/// Parses a canonical dump back into exponent → coefficient plus the truncation.
fn parse_dump(text: &str) -> (BTreeMap<String, String>, Option<String>) {
    let mut terms = BTreeMap::new();
    let mut trunc = None;
    for line in text.lines() {
        if let Some(t) = line.strip_prefix("O(q^{").and_then(|t| t.strip_suffix("})")) {
            trunc = Some(t.to_string());
        } else if let Some((e, c)) = line.split_once('\t') {
            terms.insert(e.to_string(), c.to_string());
        }
    }
    (terms, trunc)
}

fn json_series(v: &Value) -> (BTreeMap<String, String>, Option<String>) {
    let terms = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_str().unwrap().to_string(), p[1].as_str().unwrap().to_string()))
        .collect();
    (terms, v["trunc"].as_str().map(String::from))
}

#[test]
fn named_j3_dump() {
    assert_eq!(stdout(&["named", "--form", "j3", "--terms", "3"]), "-1\t1\n0\t-12\n1\t54\nO(q^{2})\n");
}

#[test]
fn eta_expand_matches_named() {
    let a = stdout(&["eta-expand", "--spec", "3^8", "--terms", "20"]);
    let b = stdout(&["named", "--form", "eta8", "--terms", "20"]);
    assert_eq!(a, b);
    assert!(a.starts_with("1\t1\n4\t-8\n7\t20\n"));
}

#[test]
fn mock_table_small() {
    let out = stdout(&["mock", "--max-m", "5/3"]);
    assert!(out.contains("2/3  -61\n"), "{out}");
    assert!(out.contains("5/3  -65804/125\n"), "{out}");
}

#[test]
fn text_and_json_agree() {
    for args in [
        &["named", "--form", "F", "--terms", "30"][..],
        &["eta-expand", "--spec", "1^-1 3^9", "--terms", "25"][..],
        &["theta", "--D", "3", "--coset", "2", "--k", "4", "--terms", "15"][..],
    ] {
        assert_eq!(parse_dump(&stdout(args)), json_series(&json(args)), "{args:?}");
    }

    let args = ["mock", "--max-m", "8/3"];
    let text = stdout(&args);
    let j = json(&args);
    for row in j["coefficients"].as_array().unwrap() {
        let line = format!("{}  {}\n", row[0].as_str().unwrap(), row[1].as_str().unwrap());
        assert!(text.contains(&line), "{line}");
    }
    let pre = text.split("# scalar preimage\n").nth(1).unwrap();
    assert_eq!(parse_dump(pre), json_series(&j["preimage"]));

    let args = ["lift", "--m", "2/3", "--terms", "10"];
    let text = stdout(&args);
    let j = json(&args);
    assert!(text.contains(&format!("value\t{}\n", j["value"].as_str().unwrap())));
    assert_eq!(j["value"], "-61");
    assert_eq!(j["A"].as_array().unwrap().len(), 13);
    let lift = text.strip_prefix("# lift\n").unwrap().split("poles").next().unwrap();
    assert_eq!(parse_dump(lift), json_series(&j["lift"]));
}

#[test]
fn deterministic_across_runs_and_threads() {
    let args = ["mock", "--max-m", "8/3"];
    let a = maass(&args, &[("RAYON_NUM_THREADS", "1")]);
    let b = maass(&args, &[("RAYON_NUM_THREADS", "4")]);
    let c = maass(&args, &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn environment_overrides_terms() {
    let o = maass(&["named", "--form", "j3"], &[("MAASS_TERMS", "3")]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), stdout(&["named", "--form", "j3", "--terms", "3"]));
    // the flag wins over the environment
    let o = maass(&["named", "--form", "j3", "--terms", "4"], &[("MAASS_TERMS", "3")]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("O(q^{3})"));
}

#[test]
fn exit_codes() {
    assert_eq!(maass(&["named", "--bogus"], &[]).status.code(), Some(2));
    assert_eq!(maass(&["frobnicate"], &[]).status.code(), Some(2));
    assert_eq!(maass(&["lift", "--m", "2/3", "--terms", "4"], &[]).status.code(), Some(2));
    assert_eq!(maass(&["named", "--form", "j3"], &[("MAASS_FLOAT_BITS", "lots")]).status.code(), Some(2));

    let o = maass(&["named", "--form", "nope"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage named"));

    // exponent 3 does not give a rational function of j3
    let o = maass(&["lift", "--m", "2/3", "--divisor-exponent", "3", "--terms", "8"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage identification"));
}

#[test]
fn cm_eval_recognizes_class_polynomial() {
    let out = stdout(&["cm-eval", "--form", "[3,2,1]"]);
    assert!(out.contains("poly\t[729, 46, 1]\n"), "{out}");
    assert!(out.contains("re\t-23\n"), "{out}");
    let out = stdout(&["cm-eval", "--form", "[3,-3,1]"]);
    assert!(out.contains("poly\t[27, 1]\n"), "{out}");
}

#[test]
fn verify_command_passes() {
    let o = maass(&["verify-paper"], &[]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(o.status.success(), "{text}");
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        assert_eq!(line.split('\t').count(), 4, "{line}");
        assert!(line.ends_with("\tPASS"), "{line}");
    }
    // verify-paper forces exponent 2 whatever the flag says
    assert!(maass(&["verify-paper", "--divisor-exponent", "3"], &[]).status.success());
}

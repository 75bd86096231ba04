use std::process::{Command, Output};

use harmonic_bounds::cli::parse_rendered;
use harmonic_bounds::enclosure::Interval;
use harmonic_bounds::exact::Rational;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_harmonic-bounds"));
    c.env_remove("HARMONIC_BOUNDS_EPS").env_remove("HARMONIC_BOUNDS_N_MAX");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn line_with<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find(|l| l.contains(key))
        .unwrap_or_else(|| panic!("no line with {key:?} in\n{text}"))
}

#[test]
fn bounds_examples() {
    let o = run(&["bounds", "1", "thm2", "--digits", "9"]);
    assert!(o.status.success());
    assert!(line_with(&stdout(&o), "upper-bound constant").contains("1.12150934"));

    let o = run(&["bounds", "2", "toth-mare", "--digits", "6"]);
    let h2 = line_with(&stdout(&o), "H_2")
        .split_whitespace()
        .nth(1)
        .unwrap()
        .to_string();
    assert_eq!(h2, "1.5");

    let o = run(&["bounds", "100", "detemple-wang", "--digits", "12", "--format", "json"]);
    let v = json(&o);
    let residual = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["index"].as_str().unwrap().starts_with("residual"))
        .unwrap();
    let lo: Rational = residual["value"]["lo"].as_str().unwrap().parse().unwrap();
    assert!(lo.is_positive());
}

#[test]
fn table_examples() {
    let o = run(&[
        "table", "lambda", "--from", "1", "--to", "5", "--digits", "8", "--format", "markdown",
    ]);
    let text = stdout(&o);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| index"))
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].contains("1.12150934"));

    let o = run(&["table", "f", "--from", "1", "--to", "3", "--digits", "7"]);
    assert!(line_with(&stdout(&o), "  1 ").contains("0.3652721"));

    let o = run(&[
        "table", "d", "--from", "1", "--to", "4", "--digits", "8", "--format", "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,value_lo,value_hi,decimal"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "1");
    assert!(first[3].starts_with("3.7392975"));
    assert_eq!(lines.count(), 3);

    let o = run(&["table", "Lambda_cont", "--from", "1", "--to", "1", "--digits", "8"]);
    assert!(stdout(&o).contains("0.56075467"));
}

#[test]
fn machine_formats_round_trip() {
    let o = run(&[
        "table", "lambda", "--from", "2", "--to", "4", "--digits", "10", "--format", "csv",
    ]);
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let x = Interval::new(f[1].parse().unwrap(), f[2].parse().unwrap()).unwrap();
        assert!(parse_rendered(f[3]).unwrap().encloses(&x), "{line}");
    }
    let o = run(&[
        "table", "lambda", "--from", "2", "--to", "4", "--digits", "10", "--format", "json",
    ]);
    for row in json(&o)["rows"].as_array().unwrap() {
        for end in ["lo", "hi"] {
            let s = row["value"][end].as_str().expect("endpoints are strings");
            assert!(s.contains('/'), "{s}");
            s.parse::<Rational>().unwrap();
        }
    }
}

#[test]
fn constants_examples() {
    let five = stdout(&run(&["constants", "--digits", "5"]));
    assert!(line_with(&five, "gamma").contains("0.57721"));
    let nine = stdout(&run(&["constants", "--digits", "9"]));
    assert!(line_with(&nine, "c2").contains("1.12150934"));
    assert!(line_with(&nine, "c3").contains("3.73929751"));
    let one = stdout(&run(&["constants", "--digits", "1"]));
    for r in ["1/3", "6/5", "21/5"] {
        assert!(one.contains(r), "{r} missing from\n{one}");
    }
}

#[test]
fn verify_identities_json_schema() {
    let o = run(&["verify", "identities", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "pass-with-errata");
    for key in ["check_name", "params", "verdict", "witnesses", "errata"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let w = &v["witnesses"][0];
    assert!(w.get("input").is_some() && w.get("value_or_interval").is_some());
    let e = &v["errata"][0];
    for key in ["location", "printed", "recomputed", "match"] {
        assert!(e.get(key).is_some(), "{key}");
    }
    let mismatched: Vec<&str> = v["errata"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["match"] == false)
        .map(|e| e["location"].as_str().unwrap())
        .collect();
    assert!(mismatched.contains(&"lr gap numerator, coefficient of x^2"));
}

#[test]
fn verify_thm2_flags_equality_at_one() {
    let o = run(&["verify", "thm2", "--n-max", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(line_with(&text, "n=1:").contains("[equality]"));
    assert_eq!(text.matches("[equality]").count(), 1);
    assert!(text.trim_end().ends_with("verdict: pass"));
}

#[test]
fn verify_all_aggregates() {
    let o = run(&["verify", "all", "--n-max", "100", "--eps", "1e-10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["check_name"], "all");
    assert_eq!(v["params"]["n_max"], "100");
    let inputs: Vec<&str> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["input"].as_str().unwrap())
        .collect();
    for prefix in [
        "theorem-bounds/thm3: ",
        "monotone-d: ",
        "lemmas: lemma-sandwich/Lemma3_psi: ",
        "asymptotics: ",
    ] {
        assert!(inputs.iter().any(|i| i.starts_with(prefix)), "{prefix}");
    }
}

#[test]
fn env_defaults_and_flag_precedence() {
    let o = bin()
        .args(["verify", "monotone-f", "--format", "json"])
        .env("HARMONIC_BOUNDS_N_MAX", "30")
        .env("HARMONIC_BOUNDS_EPS", "1e-8")
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["params"]["n_max"], "30");
    assert_eq!(v["params"]["eps"], "1/100000000");

    let o = bin()
        .args([
            "verify",
            "monotone-f",
            "--format",
            "json",
            "--n-max",
            "12",
            "--eps",
            "1/1000",
        ])
        .env("HARMONIC_BOUNDS_N_MAX", "30")
        .env("HARMONIC_BOUNDS_EPS", "1e-8")
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["params"]["n_max"], "12");
    assert_eq!(v["params"]["eps"], "1/1000");

    let v = json(&run(&["verify", "monotone-f", "--format", "json"]));
    assert_eq!(v["params"]["n_max"], "1000");
    assert_eq!(v["params"]["eps"], "1/1000000000000");
}

#[test]
fn usage_errors() {
    for args in [
        &["verify", "thm4"][..],
        &["bounds", "0"],
        &["bounds", "3", "nope"],
        &["table", "d", "--from", "5", "--to", "2"],
        &["table", "d", "--from", "0"],
        &["constants", "--digits", "0"],
        &["verify", "thm1", "--eps", "0"],
        &["table", "lambda", "--format", "yaml"],
        &[],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_markdown_and_csv() {
    let o = run(&["verify", "lemmas", "--format", "markdown"]);
    assert!(stdout(&o).starts_with("### lemmas: pass"));
    let o = run(&["verify", "asymptotics", "--n-max", "50", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("section,item,status,detail"));
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("verdict,asymptotics,pass-with-errata"));
}

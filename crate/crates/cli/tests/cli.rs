use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run_with(args: &[&str], stdin: Option<&str>, threads: Option<usize>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tropdiff"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n.to_string());
    }
    let mut child = cmd.spawn().expect("spawn tropdiff");
    if let Some(input) = stdin {
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with(args, None, None)
}

fn result(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}{}", r.stdout, r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

#[test]
fn documented_examples() {
    let r = run(&["trop", "roots", "--model", "PC", "x^2 - (1+t)*x + t"]);
    assert_eq!((r.stdout.as_str(), r.code), ("{\"roots\":[\"0\",\"1\"]}\n", 0));

    let r = run(&["amalg", "decide", data("intro_problem.json").to_str().unwrap()]);
    assert_eq!((r.stdout.as_str(), r.code), ("{\"solvable\":false}\n", 0));

    let v = result(&["zsigma", "coset", "--A", "[[1-s],[1-s^2]]", "--b", "[1,1]"]);
    assert_eq!(v["ell"], json!(2));
    assert_eq!(v["C"], json!([[1, -1, 0], [1, 0, -1]]));
}

#[test]
fn exit_codes() {
    let obstruction = run(&["sigma", "hensel", "--model", "ISO", "s(x) - x - t", "--start", "0"]);
    assert_eq!(obstruction.code, 2);
    let v: Value = serde_json::from_str(&obstruction.stdout).unwrap();
    assert_eq!(v["diagnostics"][0]["kind"], "ResidueObstruction");
    assert!(obstruction.stderr.contains("residue obstruction"));

    let parse = run(&["hahn", "v", "1 + (t"]);
    assert_eq!(parse.code, 1);
    let v: Value = serde_json::from_str(&parse.stdout).unwrap();
    assert_eq!(v["diagnostics"][0]["kind"], "Parse");
    assert!(v["diagnostics"][0]["position"].is_u64());

    assert_eq!(run(&["hahn", "frobnicate", "1"]).code, 1);
    assert_eq!(run(&["trop", "initial", "x + 1"]).code, 1);
    assert_eq!(run(&["--model", "nowhere.json", "hahn", "v", "1"]).code, 1);
    assert_eq!(run(&[]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);

    // negative verdicts are results
    let v = result(&["sigma", "config", "--model", "ISO", "x^2", "--start", "t"]);
    assert_eq!(v["config"], json!(false));
    let v = result(&["zsigma", "check", "--A", "[[1-s]]", "--b", "[-1]", "--z", "[t]"]);
    assert_eq!(v, json!({"direct": false, "via_coset": false}));
}

#[test]
fn envelope_and_models() {
    let v = result(&["--json", "hahn", "v", "t^(1/2) + 1", "--model", "ISO"]);
    assert_eq!(
        v,
        json!({"command": "hahn v", "model": "ISO", "arguments": ["t^(1/2) + 1"], "options": {}, "result": {"valuation": "0"}})
    );
    let iso = data("iso_model.json");
    let v = result(&["sigma", "hensel", "x*s(x) - (1+t)", "--start", "1", "--precision", "3", "--model", iso.to_str().unwrap()]);
    assert_eq!(v["root"], "1 + 1/2*t - 1/8*t^2");
    assert_eq!(run(&["hahn", "v", "t^(1,-1)", "--model", "PC"]).code, 1);
}

#[test]
fn rank_two_values_print_as_arrays() {
    let dir = std::env::temp_dir().join(format!("tropdiff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("rank2.json");
    std::fs::write(&model, r#"{"n": 4, "a": 3, "sigma_gamma": [[1, "1/2"], [0, 1]]}"#).unwrap();
    let v = result(&["hahn", "v", "t^(1,-1) + t^(0,5)", "--model", model.to_str().unwrap()]);
    assert_eq!(v["valuation"], json!(["0", "5"]));
    let v = result(&["hahn", "sigma", "t^(2,0)", "--model", model.to_str().unwrap()]);
    assert_eq!(v["sigma"], "t^(2,1)");
}

#[test]
fn printed_values_parse_back_to_themselves() {
    for src in [
        "1/(1 - t + O(t^5))",
        "(1 + i*t^(1/2))^3",
        "-i*t^(-1/3) + 2/3 + O(t^2)",
        "z - z^3 + t^100",
        "O(t^(-1))",
        "0",
    ] {
        let printed = result(&["hahn", "eval", src])["value"].as_str().unwrap().to_string();
        let again = result(&["hahn", "eval", &printed])["value"].as_str().unwrap().to_string();
        assert_eq!(printed, again, "{src}");
    }
    let root = result(&["sigma", "hensel", "--model", "ISO", "x^2 + 1 - t", "--start", "i", "--precision", "4"]);
    let printed = root["root"].as_str().unwrap();
    assert_eq!(result(&["--model", "ISO", "hahn", "eval", printed])["value"], printed);
}

#[test]
fn batch_preserves_input_order() {
    let corpus = std::fs::read_to_string(data("corpus.ndjson")).unwrap();
    let requests: Vec<Value> = corpus.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let r = run_with(&["--batch", data("corpus.ndjson").to_str().unwrap()], None, Some(8));
    // the corpus contains domain errors, the largest per-request code
    assert_eq!(r.code, 2);
    let responses: Vec<Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(responses.len(), requests.len());
    for (req, resp) in requests.iter().zip(&responses) {
        assert_eq!(req["command"], resp["command"]);
        assert_eq!(req.get("arguments").cloned().unwrap_or(json!([])), resp["arguments"]);
        assert!(resp.get("result").is_some() != resp.get("diagnostics").is_some());
    }
}

#[test]
fn batch_reads_standard_input_and_reports_bad_lines() {
    let input = "{\"command\": \"hahn v\", \"arguments\": [\"t^2\"]}\n\nnot json\n{\"command\": \"hahn v\", \"arguments\": [\"1\"], \"bogus\": 1}\n";
    let r = run_with(&["--batch", "--precision", "3"], Some(input), None);
    let lines: Vec<Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["result"]["valuation"], "2");
    assert_eq!(lines[0]["options"]["precision"], "3");
    assert_eq!(lines[1]["line"], 3);
    assert_eq!(lines[2]["line"], 4);
    assert_eq!(r.code, 1);
    assert_eq!(run(&["--batch", "-", "hahn", "v", "1"]).code, 1);
}

#[test]
fn batch_matches_single_invocations() {
    let single = result(&["--json", "trop", "kapranov", "t^(-1)*x^3 + (1 + t)*x + t^2*x^-1"]);
    let line = r#"{"command": "trop kapranov", "arguments": ["t^(-1)*x^3 + (1 + t)*x + t^2*x^-1"]}"#;
    let r = run_with(&["--batch"], Some(line), None);
    assert_eq!(r.code, 0);
    assert_eq!(serde_json::from_str::<Value>(&r.stdout).unwrap(), single);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let path = data("corpus.ndjson");
    let first = run_with(&["--batch", path.to_str().unwrap()], None, Some(1)).stdout;
    let second = run_with(&["--batch", path.to_str().unwrap()], None, Some(8)).stdout;
    let third = run_with(&["--batch", path.to_str().unwrap()], None, None).stdout;
    assert!(!first.is_empty());
    assert_eq!(first, second);
    assert_eq!(first, third);
}

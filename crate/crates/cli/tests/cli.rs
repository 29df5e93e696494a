use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const ZIMNEE_UTRO: &str = "Мороз и солнце; день чудесный!\nЕще ты дремлешь, друг прелестный —\nПора, красавица, проснись:";
const SHUFFLED: &str = "чудесный! и дремлешь, негой Открой\nты прелестный день Мороз взоры";

fn metrum(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_metrum"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // the binary may exit on a bad argument before reading its input
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn jsonl(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn record(id: &str, text: &str) -> String {
    serde_json::json!({ "id": id, "text": text }).to_string()
}

fn corpus() -> String {
    let mut lines = Vec::new();
    for i in 0..6 {
        lines.push(record(&format!("good{i}"), ZIMNEE_UTRO));
        lines.push(record(&format!("bad{i}"), SHUFFLED));
    }
    lines.join("\n") + "\n"
}

#[test]
fn analyze_reads_stdin() {
    let out = metrum(&["analyze"], &format!("{ZIMNEE_UTRO}\n\n{SHUFFLED}\n"));
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let poems = doc["poems"].as_array().unwrap();
    assert_eq!(poems.len(), 2);
    assert_eq!(poems[0]["meter"], "iamb");
    assert_eq!(poems[0]["technicality"], 1.0);
    assert_eq!(poems[0]["rhyme_scheme"], "AA-");
    assert_eq!(
        poems[0]["lines"][0]["marked"],
        "Моро\u{301}з и со\u{301}лнце; де\u{301}нь чуде\u{301}сный!"
    );
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(metrum(&[], "").status.code(), Some(1));
    assert_eq!(metrum(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(metrum(&["filter"], "").status.code(), Some(1));
    assert_eq!(
        metrum(&["filter", "--min-technicality", "1.5"], "")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        metrum(&["stats", "--thresholds", "0.5,x"], "")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        metrum(&["stats", "--format", "xml"], "").status.code(),
        Some(1)
    );
    assert_eq!(metrum(&["--help"], "").status.code(), Some(0));
}

#[test]
fn data_errors_exit_two() {
    let out = metrum(&["analyze", "/nonexistent/poem.txt"], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
    assert_eq!(
        metrum(&["--lexicon", "/nonexistent.tsv", "analyze"], "мороз")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        metrum(&["eval", "/nonexistent.jsonl"], "").status.code(),
        Some(2)
    );
}

#[test]
fn filter_keeps_fields_and_appends_scores() {
    let input =
        r#"{"z": 1, "id": "p1", "text": "Мороз и солнце; день чудесный!", "author": "Пушкин"}"#;
    let out = metrum(&["filter", "--min-technicality", "0.9"], input);
    assert_eq!(out.status.code(), Some(0));
    let kept = jsonl(&out);
    assert_eq!(kept.len(), 1);
    let keys: Vec<&str> = kept[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, ["z", "id", "text", "author", "meter", "technicality"]);
    assert_eq!(kept[0]["meter"], "iamb");
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["retained"], 1);
}

#[test]
fn filter_is_monotone_in_the_threshold() {
    let input = corpus();
    let ids = |t: &str| -> Vec<String> {
        let out = metrum(&["filter", "--min-technicality", t], &input);
        assert_eq!(out.status.code(), Some(0));
        jsonl(&out)
            .iter()
            .map(|r| r["id"].as_str().unwrap().to_string())
            .collect()
    };
    let (low, mid, high) = (ids("0.0"), ids("0.7"), ids("1.0"));
    assert_eq!(low.len(), 12);
    assert!(mid.iter().all(|id| low.contains(id)));
    assert!(high.iter().all(|id| mid.contains(id)));
    assert_eq!(high.len(), 6);
    assert!(high.iter().all(|id| id.starts_with("good")));
}

#[test]
fn malformed_records_are_skipped_unless_strict() {
    let input = format!(
        "{}\nnot json\n{{\"id\": \"x\"}}\n",
        record("a", ZIMNEE_UTRO)
    );
    let out = metrum(&["filter", "--min-technicality", "0.5"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(jsonl(&out).len(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("<stdin>:2"));
    let out = metrum(&["--strict", "filter", "--min-technicality", "0.5"], &input);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn duplicate_ids_keep_the_last_record() {
    let input = [
        record("a", SHUFFLED),
        record("b", ZIMNEE_UTRO),
        record("a", ZIMNEE_UTRO),
    ]
    .join("\n");
    let out = metrum(&["filter", "--min-technicality", "0.0"], &input);
    let kept = jsonl(&out);
    assert_eq!(kept.len(), 2);
    assert_eq!(kept[0]["id"], "b");
    assert_eq!(kept[1]["id"], "a");
    assert_eq!(kept[1]["text"], ZIMNEE_UTRO);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1 duplicate ids"));
    let summary: Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(summary["records"], 2);
    assert_eq!(summary["duplicate_ids"], 1);
}

#[test]
fn stats_in_json_tsv_and_csv() {
    let input = corpus();
    let out = metrum(&["stats", "--thresholds", "0.5,0.9"], &input);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["poems"], 12);
    assert_eq!(doc["lines"], 30);
    assert!(doc["meters"]["iamb"].as_u64().unwrap() >= 6);
    let t = doc["thresholds"].as_array().unwrap();
    assert_eq!(t.len(), 2);
    assert!(t[0]["poems_all_lines_above"].as_u64() >= t[1]["poems_all_lines_above"].as_u64());
    assert_eq!(doc["line_histogram"].as_array().unwrap().len(), 50);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("hist.csv");
    let out = metrum(
        &["stats", "--format", "tsv", "--csv", csv.to_str().unwrap()],
        &input,
    );
    assert_eq!(out.status.code(), Some(0));
    let tsv = String::from_utf8(out.stdout).unwrap();
    assert!(tsv.starts_with("meter\tpoems\n"));
    assert!(tsv.contains("threshold\tlines_above\tpoems_all_lines_above"));
    let csv = std::fs::read_to_string(csv).unwrap();
    assert_eq!(csv.lines().count(), 51);
}

#[test]
fn worker_count_does_not_change_output() {
    let input = corpus();
    let one = metrum(
        &["--jobs", "1", "filter", "--min-technicality", "0.6"],
        &input,
    );
    let four = metrum(
        &["--jobs", "4", "filter", "--min-technicality", "0.6"],
        &input,
    );
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn eval_on_the_bundled_golden_set() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/golden.jsonl");
    let out = metrum(&["eval", golden.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["fragments"], 25);
    assert!(doc["line_stress_exact"].as_f64().unwrap() >= 0.9);
    assert!(doc.get("details").is_none());
    let out = metrum(&["eval", "--verbose", golden.to_str().unwrap()], "");
    assert_eq!(stdout_json(&out)["details"].as_array().unwrap().len(), 25);
}

#[test]
fn eval_strict_rejects_bad_fragments() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frags.jsonl");
    std::fs::write(
        &path,
        "{\"text\": [\"моро\u{301}з\"], \"scheme\": \"-\"}\n{\"text\": [\"a\", \"b\"], \"scheme\": \"A\"}\n",
    )
    .unwrap();
    let out = metrum(&["eval", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["skipped"], 1);
    let out = metrum(&["--strict", "eval", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_and_lexicon_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("metrum.toml");
    std::fs::write(&config, "[scan]\nmeter_floor = 1.1\n").unwrap();
    assert_eq!(
        metrum(&["--config", config.to_str().unwrap(), "analyze"], "мороз")
            .status
            .code(),
        Some(2)
    );
    std::fs::write(
        &config,
        "[scan]\nbeam_width = 4\n[rhyme]\nthreshold = 0.9\n",
    )
    .unwrap();
    let out = metrum(
        &["--config", config.to_str().unwrap(), "analyze"],
        ZIMNEE_UTRO,
    );
    assert_eq!(out.status.code(), Some(0));

    // a one-word lexicon moves the stress of "мороз"
    let lex = dir.path().join("lex.tsv");
    std::fs::write(&lex, "мороз\t2\t1\t-\nbroken line\n").unwrap();
    let out = metrum(&["--lexicon", lex.to_str().unwrap(), "analyze"], "мороз");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out)["poems"][0]["lines"][0]["marked"],
        "мо\u{301}роз"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped lexicon record"));
    let out = metrum(
        &["--strict", "--lexicon", lex.to_str().unwrap(), "analyze"],
        "мороз",
    );
    assert_eq!(out.status.code(), Some(2));
}

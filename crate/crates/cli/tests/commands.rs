use std::path::Path;

use moviedesc::corpus::{load_project, save_project, CorpusProject, Movie, Snippet, Source};
use moviedesc::TimeInterval;
use moviedesc_cli::{run, Cli, Command};

use clap::Parser;

fn moviedesc(args: &[&str]) -> i32 {
    run(std::iter::once("moviedesc").chain(args.iter().copied()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn usage_errors_exit_one_and_help_zero() {
    assert_eq!(moviedesc(&[]), 0);
    assert_eq!(moviedesc(&["--help"]), 0);
    assert_eq!(moviedesc(&["no-such-command"]), 1);
    assert_eq!(moviedesc(&["bleu", "--smoothing", "lots"]), 1);
    assert_eq!(moviedesc(&["segment", "--mixed", "a.wav"]), 1);
    assert_eq!(moviedesc(&["segment", "--mixed", "a", "--original", "b", "--threshold", "high"]), 1);
    assert_eq!(moviedesc(&["rank-export", "--method", "no-equals-sign"]), 1);
    assert_eq!(moviedesc(&["bleu"]), 1);
}

#[test]
fn missing_or_malformed_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    assert_eq!(moviedesc(&["bleu", "--pairs", "/definitely/missing.jsonl", "--out", p(&out)]), 2);

    let bad = dir.path().join("pairs.jsonl");
    std::fs::write(&bad, "{\"snippet_id\": \"a\", \"candidate\": \"x\", \"references\": [\"x\"]}\n{oops\n").unwrap();
    assert_eq!(moviedesc(&["bleu", "--pairs", p(&bad), "--out", p(&out)]), 2);
    assert!(!out.exists(), "no output on error");
}

#[test]
fn bleu_prints_one_percentage_line() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("eval.jsonl");
    std::fs::write(
        &pairs,
        "{\"snippet_id\":\"a\",\"candidate\":\"someone opens the front door .\",\"references\":[\"someone opens the front door .\"]}\n",
    )
    .unwrap();
    let out = dir.path().join("bleu.txt");
    assert_eq!(moviedesc(&["bleu", "--pairs", p(&pairs), "--out", p(&out)]), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "BLEU@4 100.00\n");
}

#[test]
fn out_file_is_replaced_whole() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let names = dir.path().join("names.txt");
    std::fs::write(&input, "Abby waves.\nThe man waits.\n").unwrap();
    std::fs::write(&names, "Abby\n").unwrap();
    let out = dir.path().join("anon.txt");
    std::fs::write(&out, "stale content that is much longer than the result\n".repeat(10)).unwrap();
    let code = moviedesc(&["anonymize", "--input", p(&input), "--names", p(&names), "--out", p(&out)]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "Someone waves.\nSomeone waits.\n");
}

fn small_project(path: &Path) {
    let mut proj = CorpusProject::new();
    proj.upsert_movie(
        "m",
        Movie {
            title: "m".into(),
            duration_s: Some(30.0),
            ..Movie::default()
        },
    );
    let iv = |a, b| TimeInterval::new(a, b).unwrap();
    proj.add_snippets(vec![
        Snippet::new("m-dvs-000", "m", iv(1.0, 5.0), "Abby opens the door.", Source::Dvs),
        Snippet::new("m-script-000", "m", iv(1.0, 4.6), "Abby opens the door slowly.", Source::Script),
    ])
    .unwrap();
    save_project(&proj, path).unwrap();
}

#[test]
fn project_commands_and_env_default() {
    let dir = tempfile::tempdir().unwrap();
    let project = dir.path().join("project.jsonl");
    small_project(&project);
    let pairs = dir.path().join("pairs.jsonl");
    assert_eq!(moviedesc(&["pair", "--project", p(&project), "--movie", "m", "--out", p(&pairs)]), 0);
    let text = std::fs::read_to_string(&pairs).unwrap();
    assert_eq!(text.lines().count(), 1);
    let pair: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert!((pair["iou"].as_f64().unwrap() - 0.9).abs() < 1e-12, "{text}");
    assert_eq!(moviedesc(&["pair", "--project", p(&project), "--movie", "m", "--min-iou", "0.95", "--out", p(&pairs)]), 0);
    assert_eq!(std::fs::read_to_string(&pairs).unwrap(), "");
    assert_eq!(moviedesc(&["pair", "--project", p(&project), "--movie", "x"]), 2);
    assert_eq!(moviedesc(&["pair", "--project", p(&project), "--movie", "m", "--min-iou", "3"]), 1);

    // the default project directory comes from the environment
    std::env::set_var(moviedesc_cli::io::PROJECT_DIR_ENV, dir.path());
    std::fs::rename(&project, dir.path().join(moviedesc_cli::io::PROJECT_FILE)).unwrap();
    let stats = dir.path().join("stats.json");
    assert_eq!(moviedesc(&["stats", "--json", "--out", p(&stats)]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(v["dvs"]["sentences"], 1);
    std::env::remove_var(moviedesc_cli::io::PROJECT_DIR_ENV);
}

#[test]
fn anonymize_rewrites_project_in_place() {
    let dir = tempfile::tempdir().unwrap();
    let project = dir.path().join("project.jsonl");
    small_project(&project);
    let names = dir.path().join("names.txt");
    std::fs::write(&names, "Abby\n").unwrap();
    let out = dir.path().join("anon.jsonl");
    assert_eq!(moviedesc(&["anonymize", "--project", p(&project), "--names", p(&names), "--out", p(&out)]), 0);
    let proj = load_project(&project).unwrap();
    assert_eq!(proj.snippet("m-dvs-000").unwrap().sentence, "Someone opens the door.");
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn defaults_and_seed() {
    let cli = Cli::try_parse_from(["moviedesc", "pair", "--movie", "m"]).unwrap();
    let Command::Pair(a) = cli.command else { panic!() };
    assert_eq!(a.min_iou, 0.75);
    let cli = Cli::try_parse_from(["moviedesc", "align-script", "--script", "s", "--subtitles", "t"]).unwrap();
    let Command::AlignScript(a) = cli.command else { panic!() };
    assert_eq!(a.min_score, 0.5);
    let cli = Cli::try_parse_from(["moviedesc", "vwords", "--dt", "a", "--train-features", "b", "--lsda", "c", "--places", "d"]).unwrap();
    let Command::Vwords(a) = cli.command else { panic!() };
    assert_eq!((a.k, a.seed), (300, 42));
    let cli = Cli::try_parse_from(["moviedesc", "segment", "--mixed", "a", "--original", "b"]).unwrap();
    let Command::Segment(a) = cli.command else { panic!() };
    assert_eq!(a.threshold, moviedesc_cli::ThresholdArg::Auto);
    assert_eq!(a.min_segment_s, 1.0);
}

#[test]
fn crf_map_rejects_unknown_labels_unless_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let tuples = dir.path().join("sr.jsonl");
    std::fs::write(
        &tuples,
        "{\"sentence_id\":\"1\",\"subject\":\"man\",\"verb\":\"open\",\"object\":\"door\",\"location\":\"hallway\",\"mode\":\"text\"}\n\
         {\"sentence_id\":\"2\",\"subject\":\"man\",\"verb\":\"drink\",\"object\":\"cup\",\"location\":\"kitchen\",\"mode\":\"text\"}\n",
    )
    .unwrap();
    let model = dir.path().join("crf.json");
    assert_eq!(moviedesc(&["crf-fit", "--tuples", p(&tuples), "--min-count", "1", "--out", p(&model)]), 0);
    let unaries = dir.path().join("u.csv");
    std::fs::write(
        &unaries,
        "snippet_id,node,label,score\ns1,verb,open,1.0\ns1,verb,fly,5.0\ns1,object,door,0.5\ns1,object,cup,0.1\ns1,location,hallway,0.2\n",
    )
    .unwrap();
    let out = dir.path().join("map.jsonl");
    assert_eq!(moviedesc(&["crf-map", "--model", p(&model), "--unaries", p(&unaries), "--out", p(&out)]), 2);
    assert!(!out.exists());
    assert_eq!(
        moviedesc(&["crf-map", "--model", p(&model), "--unaries", p(&unaries), "--drop-unknown", "--out", p(&out)]),
        0
    );
    let line = std::fs::read_to_string(&out).unwrap();
    assert!(line.contains("\"verb\":\"open\"") && line.contains("\"object\":\"door\""), "{line}");
}

#[test]
fn ranking_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    std::fs::write(&a, "{\"snippet_id\":\"s1\",\"sentence\":\"A one.\"}\n{\"snippet_id\":\"s2\",\"sentence\":\"A two.\"}\n").unwrap();
    std::fs::write(&b, "{\"snippet_id\":\"s1\",\"sentence\":\"B one.\"}\n{\"snippet_id\":\"s2\",\"sentence\":\"B two.\"}\n").unwrap();
    let tasks = dir.path().join("tasks.jsonl");
    let arg_a = format!("nn-dt={}", p(&a));
    let arg_b = format!("reference={}", p(&b));
    assert_eq!(moviedesc(&["rank-export", "--method", &arg_a, "--method", &arg_b, "--out", p(&tasks)]), 0);
    let again = dir.path().join("tasks2.jsonl");
    assert_eq!(moviedesc(&["rank-export", "--method", &arg_a, "--method", &arg_b, "--out", p(&again)]), 0);
    assert_eq!(std::fs::read(&tasks).unwrap(), std::fs::read(&again).unwrap());

    // judge always prefers the "A ..." sentence
    let text = std::fs::read_to_string(&tasks).unwrap();
    let mut judgments = String::new();
    for line in text.lines().skip(1) {
        let t: serde_json::Value = serde_json::from_str(line).unwrap();
        let mut ranks = serde_json::Map::new();
        for c in t["candidates"].as_array().unwrap() {
            let r = if c["sentence"].as_str().unwrap().starts_with('A') { 1 } else { 2 };
            ranks.insert(c["key"].as_str().unwrap().to_string(), r.into());
        }
        judgments.push_str(&serde_json::json!({"snippet_id": t["snippet_id"], "ranks": ranks}).to_string());
        judgments.push('\n');
    }
    let jpath = dir.path().join("judgments.jsonl");
    std::fs::write(&jpath, judgments).unwrap();
    let means = dir.path().join("means.json");
    assert_eq!(
        moviedesc(&["rank-import", "--tasks", p(&tasks), "--judgments", p(&jpath), "--json", "--out", p(&means)]),
        0
    );
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&means).unwrap()).unwrap();
    assert_eq!(v["correctness"]["nn-dt"], 1.0);
    assert_eq!(v["correctness"]["reference"], 2.0);
}

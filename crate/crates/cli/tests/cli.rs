use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn testlens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_testlens"))
        .args(args)
        .env_remove("TESTLENS_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

#[test]
fn tag_prints_term_tag_pairs() {
    let o = testlens(&["tag", "testParser"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "test/V Parser/N\n");
}

#[test]
fn split_and_json_output() {
    let o = testlens(&["split", "test_get_NotExisting", "XMLHttpRequest"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "test get Not Existing");
    assert_eq!(lines.len(), 2);

    let o = testlens(&["tag", "--json", "testParser", "setup"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn pattern_lists_templates() {
    let o = testlens(&["pattern", "testReadFileFromClasspath"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let cols: Vec<&str> = out.trim_end().split('\t').collect();
    assert_eq!(cols[0], "testReadFileFromClasspath");
    assert_eq!(cols[1], "V V N P N");
    assert!(cols[2].starts_with("V V N P+; Dual Verb Phrase"));

    let o = testlens(&["pattern", "--prefix", "2", "testFindResourceByName"]);
    assert!(stdout(&o).contains("\tV V\t"));
}

#[test]
fn lint_exit_codes() {
    let o = testlens(&["lint", &fixture("lint/satisfied")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "");

    let o = testlens(&["lint", &fixture("lint/violating/PrefixTest.java")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("[R1] failPrefixMissing"));
}

#[test]
fn lint_rule_selection_and_json() {
    let dir = fixture("lint/violating");
    let o = testlens(&["lint", "--rules", "R2,R5", "--format", "json", &dir]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["rule_id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["R2", "R5"]);
    assert!(v[0]["name_span"]["start"].is_u64());

    let o = testlens(&["lint", "--rules", "R9", &dir]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_exit_two() {
    let o = testlens(&["lint", "/no/such/path"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("testlens: error:"));

    assert_eq!(testlens(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(testlens(&["tag"]).status.code(), Some(2));
    assert_eq!(
        testlens(&["report", "--input", "x", "--format", "pdf"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn every_subcommand_has_help() {
    for cmd in [
        &["split"][..],
        &["tag"],
        &["pattern"],
        &["scan"],
        &["lint"],
        &["rename", "detect"],
        &["rename", "classify"],
        &["report"],
    ] {
        let mut args = cmd.to_vec();
        args.push("--help");
        let o = testlens(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}");
        assert!(stdout(&o).contains("Usage:"), "{cmd:?}");
    }
}

#[test]
fn scan_reports_methods() {
    let o = testlens(&["scan", &fixture("lint/satisfied")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let files = v.as_array().unwrap();
    assert_eq!(files.len(), 5);
    let mut paths: Vec<&str> = files.iter().map(|f| f["file"].as_str().unwrap()).collect();
    let unsorted = paths.clone();
    paths.sort();
    assert_eq!(paths, unsorted);
    let map_store = files
        .iter()
        .find(|f| f["file"].as_str().unwrap().ends_with("MapStoreTest.java"))
        .unwrap();
    assert_eq!(map_store["is_test_file"], true);
    let m = &map_store["methods"][0];
    assert_eq!(m["name"], "test_get_NotExisting");
    assert_eq!(m["pattern"], "V V VM V");
    assert_eq!(m["line"], 11);
}

#[test]
fn scan_warns_on_partial_parse() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("Broken.java");
    std::fs::write(
        &f,
        "import org.junit.Test;\nclass T {\n @Test public void testOne() { a(); }\n void testTwo() {\n",
    )
    .unwrap();
    let o = testlens(&["scan", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0]["error"].is_string());
    assert_eq!(v[0]["methods"][0]["name"], "testOne");
}

#[test]
fn rename_detect_and_classify() {
    let o = testlens(&[
        "rename",
        "detect",
        "--before",
        &fixture("rename/before"),
        "--after",
        &fixture("rename/after"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["old_name"], "testParse");
    assert_eq!(v[0]["new_name"], "testParseOk");
    assert_eq!(v[1]["new_name"], "testServerGet");
    assert_eq!(v[0]["file"], "ParserTest.java");

    let o = testlens(&[
        "rename",
        "detect",
        "--before",
        &fixture("rename/before/ParserTest.java"),
        "--after",
        &fixture("rename/after"),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("renames.csv");
    std::fs::write(
        &log,
        "old_name,new_name,file,commit\ntest_13,test13,A.java,c1\nshouldAcceptRaxProtocols,shouldRejectRaxProtocols,B.java,c2\n",
    )
    .unwrap();
    let o = testlens(&["rename", "classify", "--input", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["form"], "Formatting");
    assert_eq!(v[0]["semantics"], "Preserve");
    assert_eq!(v[1]["semantics"], "Change");
    assert_eq!(v[1]["pairs"][0]["relation"], "Antonym");

    let o = testlens(&[
        "rename",
        "classify",
        "--input",
        log.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(stdout(&o).lines().count() == 3);
}

#[test]
fn report_from_log_and_from_classified_json() {
    let dir = tempfile::tempdir().unwrap();
    let log = fixtures()
        .join("../../../core/tests/fixtures/corpus50.csv")
        .display()
        .to_string();
    let classified = dir.path().join("classified.json");
    let o = testlens(&["rename", "classify", "--input", &log]);
    std::fs::write(&classified, &o.stdout).unwrap();

    for table in ["full", "pairs", "prefix", "semantic", "terms", "catalog"] {
        let a = testlens(&["report", "--input", &log, "--table", table]);
        let b = testlens(&[
            "report",
            "--input",
            classified.to_str().unwrap(),
            "--table",
            table,
        ]);
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{table}");
    }

    let o = testlens(&[
        "report",
        "--input",
        &log,
        "--table",
        "prefix",
        "--prefix-len",
        "3",
        "--k",
        "2",
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.starts_with("Prefix Pairs (length 3),")));
    assert_eq!(out.lines().count(), 1 + 3);

    let o = testlens(&["report", "--input", &log, "--prefix-len", "1..6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("testlens.toml");
    std::fs::write(&cfg, "rules = [\"R3\"]\n[format]\nlint = \"json\"\n").unwrap();
    let violating = fixture("lint/violating");

    let o = testlens(&["--config", cfg.to_str().unwrap(), "lint", &violating]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["rule_id"], "R3");

    let o = Command::new(env!("CARGO_BIN_EXE_testlens"))
        .args(["lint", "--format", "text", &violating])
        .env("TESTLENS_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("[R3]"));

    // flags win over the file
    let o = testlens(&[
        "--config",
        cfg.to_str().unwrap(),
        "lint",
        "--rules",
        "R1",
        &violating,
    ]);
    assert!(stdout(&o).contains("\"R1\""));

    std::fs::write(&cfg, "colour = \"blue\"\n").unwrap();
    let o = testlens(&["--config", cfg.to_str().unwrap(), "split", "testA"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lexicon_override_changes_tags() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("lexicon.json");
    std::fs::write(&lex, r#"{"verbs": ["parser"]}"#).unwrap();
    let o = testlens(&["--lexicon", lex.to_str().unwrap(), "tag", "testParser"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // the verb list is replaced wholesale, so `test` is no longer a verb
    assert_eq!(stdout(&o), "test/N Parser/V\n");
}

//! Commands, output formats and exit codes.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Mutex;

use cli::{exit, run, Outcome, RunConfig};
use ordinals::parse_ordinal;
use tower::{cache, Entry, SignPolicy, Tower};

/// Stage commands build large objects; run them one at a time.
static HEAVY: Mutex<()> = Mutex::new(());

fn heavy() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("tower-cli").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert_eq!(out.code, exit::SUCCESS, "{args:?}: {}", out.stderr);
    out.stdout
}

fn program(name: &str) -> String {
    format!("{}/programs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cli-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn ordinal_commands() {
    assert_eq!(ok(&["ordinal", "fs", "w^2", "3"]), "w*3\n");
    assert_eq!(ok(&["ordinal", "classify", "w+1"]), "successor of w\n");
    assert_eq!(ok(&["ordinal", "classify", "w^w"]), "limit\n");
    assert_eq!(ok(&["ordinal", "classify", "0"]), "zero\n");
    assert_eq!(ok(&["ordinal", "compare", "w*2", "w+5"]), "w*2 > w+5\n");
    assert_eq!(cli(&["ordinal", "fs", "w+1", "2"]).code, exit::PARSE);
    assert_eq!(cli(&["ordinal", "classify", "w+"]).code, exit::PARSE);
}

#[test]
fn godel_round_trip() {
    let code = ok(&["godel", "encode", "0=0"]);
    assert_eq!(ok(&["godel", "decode", code.trim()]), "0=0\n");
    let hex = ok(&["godel", "encode", "--hex", "all b (b <= a -> ~b = S0)"]);
    assert!(hex.starts_with("0x"));
    assert_eq!(ok(&["godel", "decode", hex.trim()]), "all b (b<=a -> ~b=S0)\n");
    assert_eq!(cli(&["godel", "encode", "0 = "]).code, exit::PARSE);
    assert_eq!(cli(&["godel", "decode", "3"]).code, exit::PARSE);
}

#[test]
fn compiled_addition_holds_at_two_three_five() {
    let add = program("add.pr");
    let out = ok(&["compile", "pr-fn", &add, "--at", "2,3,5"]);
    assert!(out.ends_with("at (2, 3, 5): true\n"), "{out}");
    assert!(ok(&["compile", "pr-fn", &add, "--at", "2,3,6"]).ends_with("false\n"));
    assert_eq!(cli(&["compile", "pr-fn", &add, "--at", "2,3"]).code, exit::PARSE);
    let out = ok(&["--format", "structured", "compile", "pr-fn", &program("primality.pr"), "--at", "7,1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["schema"].as_u64(), v["eval"].as_str()), (Some(1), Some("true")));
    let dir = scratch("bad-program");
    let bad = dir.join("bad.pr");
    std::fs::write(&bad, "(comp succ").unwrap();
    assert_eq!(cli(&["compile", "pr-fn", bad.to_str().unwrap()]).code, exit::PARSE);
}

#[test]
fn stage_queries() {
    let _g = heavy();
    let dir = scratch("stage");
    let first = ok(&["stage", "0", "q-tilde"]);
    assert_eq!(ok(&["stage", "0", "q-tilde"]), first);
    assert!(first.starts_with("0x"));

    let q3 = dir.join("q3");
    std::fs::write(&q3, ok(&["stage", "3", "q-tilde"])).unwrap();
    let arg = format!("@{}", q3.display());
    assert_eq!(ok(&["stage", "w", "is-axiom", &arg]), "true (γ = 3)\n");
    assert_eq!(ok(&["stage", "3", "is-axiom", &arg]), "false\n");
    assert_eq!(ok(&["stage", "0", "is-axiom", "S0 = 0 -> 0 = 0"]), "false\n");
    assert_eq!(ok(&["stage", "0", "is-axiom", "~Sa = 0"]), "true (base axiom)\n");

    let rosser = ok(&["stage", "w+1", "rosser"]);
    assert!(rosser.starts_with("all b (~"), "{}", &rosser[..40]);
    let axiom = ok(&["stage", "1", "show-axiom"]);
    assert!(axiom.starts_with("sign: rosser\nall b (~"));
    let flipped = ok(&["--sign", "1=neg", "stage", "1", "show-axiom"]);
    assert!(flipped.starts_with("sign: neg\n~all b (~"));

    assert_eq!(cli(&["stage", "w+", "rosser"]).code, exit::PARSE);
    assert_eq!(cli(&["stage", "0", "is-axiom", "0x"]).code, exit::PARSE);
}

#[test]
fn cache_refusals_and_monotonicity_exit_codes() {
    let _g = heavy();
    let dir = scratch("cache");
    let d = dir.to_str().unwrap();
    let policy = SignPolicy::new();
    // a well-formed memo whose first code is longer than any real one
    let huge = Entry { notation: parse_ordinal("0").unwrap(), len: usize::MAX, digest: [0; 32] };
    let path = cache::store(&dir, &policy, &BTreeMap::from([(0, huge)])).unwrap();
    assert_eq!(cli(&["--cache", d, "stage", "1", "q-tilde"]).code, exit::MONOTONICITY);
    let out = cli(&["--cache", d, "verify", "--stages", "0,1"]);
    assert_eq!(out.code, exit::CHECK_FAILED, "{}", out.stdout);

    std::fs::write(&path, std::fs::read_to_string(&path).unwrap().replace("\"version\": 1", "\"version\": 2")).unwrap();
    let out = cli(&["--cache", d, "verify"]);
    assert_eq!(out.code, exit::CACHE);
    assert!(out.stderr.starts_with("error: ") && !out.stderr.contains("panicked"));
    std::fs::write(&path, "{").unwrap();
    assert_eq!(cli(&["--cache", d, "stage", "0", "q-tilde"]).code, exit::CACHE);
}

#[test]
fn failing_verification_exits_four() {
    let _g = heavy();
    let dir = scratch("corrupt");
    let mut t = Tower::new(SignPolicy::new());
    t.corrupt_memo_entry(&parse_ordinal("1").unwrap()).unwrap();
    cache::store(&dir, t.policy(), t.memo()).unwrap();
    let out = cli(&["--cache", dir.to_str().unwrap(), "--format", "structured", "verify", "--stages", "0,1"]);
    assert_eq!(out.code, exit::CHECK_FAILED);
    let failed: Vec<serde_json::Value> = out
        .stdout
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["kind"] == "check" && v["passed"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!((failed[0]["check"].as_str(), failed[0]["stage"].as_str()), (Some("diagonal"), Some("1")));
}

#[test]
fn empty_grid_passes() {
    let out = cli(&["--format", "structured", "verify", "--stages"]);
    assert_eq!(out.code, exit::SUCCESS);
    let lines: Vec<serde_json::Value> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|v| v["schema"] == 1));
    assert_eq!(lines[1]["kind"], "summary");
    assert_eq!(lines[1]["passed"], true);
}

#[test]
fn config_files_resolve_and_round_trip() {
    let dir = scratch("config");
    let file = dir.join("run.toml");
    std::fs::write(
        &file,
        "format = \"structured\"\nbudget = 500\n[signs]\ndefault = \"neg\"\n\"w+1\" = \"rosser\"\n[grid]\nstages = [\"0\", \"w\"]\nseed = 9\n",
    )
    .unwrap();
    let f = file.to_str().unwrap();
    let out = ok(&["--config", f, "--sign", "w = rosser", "config"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let config: RunConfig = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(config.budget, 500);
    assert_eq!(config.grid.stages, ["0", "w"]);
    assert_eq!(config.policy().unwrap().canonical_text(), "default=neg,w=rosser,w+1=rosser");
    // the printed form is itself a config file describing the same run
    let toml_file = dir.join("printed.toml");
    std::fs::write(&toml_file, ok(&["--config", f, "--format", "human", "config"])).unwrap();
    let reread = RunConfig::from_file(&toml_file).unwrap();
    assert_eq!(reread, RunConfig { format: cli::Format::Human, ..RunConfig::from_file(&file).unwrap() });

    std::fs::write(&file, "budgett = 3\n").unwrap();
    assert_eq!(cli(&["--config", f, "config"]).code, exit::PARSE);
    std::fs::write(&file, "[signs]\nw = \"maybe\"\n").unwrap();
    assert_eq!(cli(&["--config", f, "config"]).code, exit::PARSE);
    assert_eq!(cli(&["--sign", "w", "config"]).code, exit::PARSE);
}

#[test]
fn binary_reports_exit_codes_without_traces() {
    let bin = env!("CARGO_BIN_EXE_tower-cli");
    let out = Command::new(bin).args(["ordinal", "fs", "w^2", "3"]).output().unwrap();
    assert_eq!((out.status.code(), String::from_utf8(out.stdout).unwrap()), (Some(0), "w*3\n".to_string()));
    let out = Command::new(bin).args(["godel", "decode", "zz"]).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::PARSE));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(exit::PARSE));
}

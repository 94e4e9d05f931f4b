use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gapedit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapedit"))
        .args(args)
        .current_dir(dir)
        .env_remove("GAPEDIT_SEED")
        .output()
        .expect("spawn gapedit")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = gapedit(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn counters(r: &Value) -> (u64, u64, u64, u64) {
    let c = &r["counters"];
    let g = |f: &str| c[f].as_u64().unwrap();
    (g("oracle_queries"), g("hash_retrievals"), g("table_lookups"), g("hashed_symbols"))
}

#[test]
fn gen_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "4096", "--edits", "16", "--sigma", "4", "--seed", "7", "--out", "pair1"]);
    for ext in ["a", "b", "json"] {
        assert!(dir.path().join(format!("pair1.{ext}")).exists());
    }
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("pair1.json")).unwrap()).unwrap();
    assert_eq!(m["n"], 4096);
    assert_eq!(std::fs::read(dir.path().join("pair1.a")).unwrap().len(), 4096);
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["one", "two"] {
        ok(dir.path(), &["gen", "--n", "500", "--edits", "9", "--seed", "3", "--out", out]);
    }
    for ext in ["a", "b", "json"] {
        let read = |p: &str| std::fs::read(dir.path().join(format!("{p}.{ext}"))).unwrap();
        assert_eq!(read("one"), read("two"), ".{ext} differs");
    }
}

#[test]
fn large_side_label_is_certified() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = ok(dir.path(), &["gen", "--large-side", "--k", "8", "--n", "4096", "--sigma", "2", "--out", "far"]);
    let m: Value = serde_json::from_str(manifest.trim()).unwrap();
    assert_eq!(m["label"], "large_side");
    assert_eq!(m["threshold"], 40 * 8 * 8);
    let rec = &records(&ok(dir.path(), &["exact", "--input", "far"]))[0];
    assert!(rec["exact_ed"].as_u64().unwrap() > 2560);
    assert_eq!(rec["exact_ed"], m["exact_ed"]);
}

#[test]
fn identical_pair_is_small_in_every_mode() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "1024", "--edits", "0", "--out", "same"]);
    for mode in ["noprep", "one-sided", "two-sided"] {
        for sub in ["gap", "wave"] {
            let rec = &records(&ok(dir.path(), &[sub, "--input", "same", "--k", "16", "--mode", mode]))[0];
            assert_eq!(rec["verdict"], "SMALL", "{sub} {mode}");
        }
    }
}

#[test]
fn labeled_small_batches_answer_small() {
    let dir = tempfile::tempdir().unwrap();
    let (n, k) = ("1024", 16usize);
    ok(dir.path(), &["gen", "--n", n, "--edits", "16", "--label-small", "16", "--count", "20", "--seed", "40", "--out", "s"]);
    // ED <= k / (2 ceil(log2 n)) = 0 for the one-sided back-end
    ok(dir.path(), &["gen", "--n", n, "--edits", "0", "--label-small", "0", "--count", "20", "--seed", "80", "--out", "z"]);
    let inputs = |p: &str| (0..20).map(|i| format!("{p}-{i}")).collect::<Vec<_>>();
    for (mode, prefix) in [("noprep", "s"), ("two-sided", "s"), ("one-sided", "z")] {
        let mut args = vec!["gap", "--mode", mode, "--k", "16", "--trials", "10", "--input"];
        let ins = inputs(prefix);
        args.extend(ins.iter().map(String::as_str));
        let recs = records(&ok(dir.path(), &args));
        assert_eq!(recs.len(), 200);
        let small = recs.iter().filter(|r| r["verdict"] == "SMALL").count();
        assert_eq!(small, 200, "{mode}");
        assert!(recs.iter().all(|r| r["exact_ed"].as_u64().unwrap() <= k as u64));
    }
}

#[test]
fn wave_defaults_step_to_k_and_bounds_oracle_calls() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "4096", "--edits", "0", "--label-small", "0", "--out", "w"]);
    let rec = &records(&ok(dir.path(), &["wave", "--input", "w", "--k", "64", "--l", "8", "--mode", "noprep"]))[0];
    assert_eq!(rec["verdict"], "SMALL");
    assert!(counters(rec).0 <= 65 * (2 * 64 / 8 + 1));
    let rec = &records(&ok(dir.path(), &["wave", "--input", "w", "--k", "32"]))[0];
    assert_eq!(rec["l"], 32);
    assert!(counters(rec).0 <= 33 * 3);
}

#[test]
fn records_replay_exactly() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "2048", "--edits", "20", "--out", "r"]);
    let first = records(&ok(dir.path(), &["gap", "--input", "r", "--k", "16", "--trials", "4", "--seed", "11"]));
    for rec in &first {
        let seed = rec["seed"].as_u64().unwrap().to_string();
        let again = &records(&ok(dir.path(), &["gap", "--input", "r", "--k", "16", "--seed", &seed]))[0];
        assert_eq!(again["verdict"], rec["verdict"]);
        assert_eq!(again["counters"], rec["counters"]);
    }
    assert_eq!(first[3]["seed"], 14);
}

#[test]
fn seed_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "256", "--out", "e"]);
    let out = Command::new(env!("CARGO_BIN_EXE_gapedit"))
        .args(["gap", "--input", "e", "--k", "4"])
        .current_dir(dir.path())
        .env("GAPEDIT_SEED", "99")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(records(&String::from_utf8(out.stdout).unwrap())[0]["seed"], 99);
}

#[test]
fn records_append_with_schema() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "256", "--out", "j"]);
    for _ in 0..2 {
        ok(dir.path(), &["gap", "--input", "j", "--k", "4", "--out", "runs.jsonl"]);
    }
    let recs = records(&std::fs::read_to_string(dir.path().join("runs.jsonl")).unwrap());
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["schema"] == 1));
}

#[test]
fn index_is_built_once_then_loaded() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "1024", "--edits", "4", "--out", "x"]);
    for (mode, file) in [("one-sided", "x.1s"), ("two-sided", "x.2s")] {
        let args = ["gap", "--input", "x", "--k", "8", "--mode", mode, "--index", file];
        let built = &records(&ok(dir.path(), &args))[0];
        let loaded = &records(&ok(dir.path(), &args))[0];
        assert!(built["preprocessing"]["hash_retrievals"].as_u64().unwrap() > 0, "{mode}");
        assert_eq!(loaded["preprocessing"]["hash_retrievals"], 0, "{mode}");
        assert_eq!(built["verdict"], loaded["verdict"]);
        assert_eq!(built["counters"], loaded["counters"]);
        assert_eq!(loaded["index"], file);
    }
    // an index built for another k is refused
    let out = gapedit(dir.path(), &["gap", "--input", "x", "--k", "9", "--mode", "one-sided", "--index", "x.1s"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("k = 8"));
}

#[test]
fn corrupted_index_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "512", "--edits", "4", "--out", "c"]);
    ok(dir.path(), &["wave", "--input", "c", "--k", "8", "--l", "4", "--mode", "one-sided", "--index", "c.wv"]);
    let path = dir.path().join("c.wv");
    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 40;
    bytes[last] ^= 1;
    std::fs::write(&path, bytes).unwrap();
    let out = gapedit(dir.path(), &["wave", "--input", "c", "--k", "8", "--l", "4", "--mode", "one-sided", "--index", "c.wv"]);
    assert!(!out.status.success());
    let out = gapedit(dir.path(), &["selftest", "--index", "c.wv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL index file loads"));
}

#[test]
fn usage_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["gap", "--input", "missing", "--k", "4"],
        vec!["gap", "--k", "4"],
        vec!["gen", "--n", "10", "--edits", "11"],
        vec!["gap", "--input", "a", "--k", "4", "--mode", "sideways"],
    ] {
        let out = gapedit(dir.path(), &args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn warns_when_k_exceeds_sqrt_n() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--n", "256", "--out", "q"]);
    let out = gapedit(dir.path(), &["gap", "--input", "q", "--k", "20"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: k = 20 exceeds sqrt(n)"));
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect()
}

#[test]
fn bench_single_cell_is_one_deterministic_row() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bench", "--n", "2048", "--k", "16", "--trials", "4", "--seed", "5"];
    let (one, two) = (ok(dir.path(), &args), ok(dir.path(), &args));
    let (r1, r2) = (csv_rows(&one), csv_rows(&two));
    assert_eq!(r1.len(), 1);
    // everything but the wall-clock columns replays
    let header = csv::Reader::from_reader(one.as_bytes()).headers().unwrap().clone();
    for (i, name) in header.iter().enumerate() {
        if !name.starts_with("wall_time") {
            assert_eq!(r1[0].get(i), r2[0].get(i), "{name}");
        }
    }
    assert_eq!(&r1[0][5], "4");
}

#[test]
fn bench_hash_work_tracks_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["bench", "--n", "16384,65536", "--k", "16,64,256", "--trials", "2", "--seed", "1"]);
    let header = csv::Reader::from_reader(text.as_bytes()).headers().unwrap().clone();
    let col = header.iter().position(|h| h == "hash_work_mean").unwrap();
    let work: Vec<f64> = csv_rows(&text).iter().map(|r| r[col].parse().unwrap()).collect();
    assert_eq!(work.len(), 6);
    // linear in n at every k
    for j in 0..3 {
        let ratio = work[3 + j] / work[j];
        assert!((3.0..5.5).contains(&ratio), "k column {j}: ratio {ratio}");
    }
    // once the sample rate drops below one, larger k means less hashing
    assert!(work[5] < work[4], "{work:?}");
}

#[test]
fn selftest_passes_and_catches_forced_collisions() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["selftest"]);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    let out = gapedit(dir.path(), &["selftest", "--force-x", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL two-sided oracle matches brute force"));
}

use std::process::{Command, Output};

fn rdq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_rd_table_has_nine_at_six() {
    let o = rdq(&["compute", "rd", "--ell", "4", "--t", "9", "--nmax", "10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "6 9"), "{out}");
    assert_eq!(out.lines().count(), 11);
    assert_eq!(out.lines().last(), Some("10 28"));
}

#[test]
fn compute_modular_and_glaisher_tables() {
    let o = rdq(&["compute", "rd", "--nmax", "6", "--mod", "4"]);
    assert!(stdout(&o).lines().any(|l| l == "6 1"));
    let regular = stdout(&rdq(&["compute", "regular", "--ell", "3", "--nmax", "40"]));
    let distinct = stdout(&rdq(&["compute", "distinct", "--t", "3", "--nmax", "40"]));
    assert_eq!(regular, distinct);
}

#[test]
fn enumerate_lists_nine_partitions_of_six() {
    let o = rdq(&["enumerate", "--n", "6"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().any(|l| l == "(2, 1^4)"));
}

#[test]
fn verify_identity_passes() {
    let o = rdq(&["verify", "identity", "eq3", "--depth", "400"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "eq3 pass (400 terms)");
}

#[test]
fn short_depth_is_a_precision_error() {
    let o = rdq(&["verify", "identity", "eq34", "--depth", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("insufficient-precision"));
}

#[test]
fn failing_catalog_entry_exits_one() {
    let dir = std::env::temp_dir().join(format!("rdq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.cat");
    std::fs::write(&path, "id: flipped f3^3/f1 == f4^3*f6^2/(f2^2*f12) - q*f12^3/f4\n").unwrap();
    let o = rdq(&["verify", "identity", "flipped", "--catalog", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("flipped fail at exponent 1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn theorem_json_has_six_passes() {
    let o = rdq(&["verify", "theorem", "3.1", "--prime", "7", "--alpha", "0", "--nmax", "30", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["version"], "1");
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 6);
    assert!(results.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn json_is_identical_across_job_counts() {
    for args in [
        &["verify", "identity", "all", "--json"][..],
        &["verify", "theorem", "5.1", "--prime", "5", "--alpha", "0", "--nmax", "100", "--json"][..],
    ] {
        let one = rdq(&[args, &["--jobs", "1"]].concat());
        let four = rdq(&[args, &["--jobs", "4"]].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout);
    }
}

#[test]
fn series_table_agrees_with_recurrence() {
    let a = rdq(&["verify", "theorem", "6.1", "--nmax", "200"]);
    let b = rdq(&["verify", "theorem", "6.1", "--nmax", "200", "--table", "series"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_rediscovers_mod_24_progression() {
    let o = rdq(&["scan", "--amax", "24", "--mod", "24", "--evidence", "200"]);
    assert!(stdout(&o).lines().any(|l| l == "24 23 24"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["verify", "theorem", "2.1"][..],
        &["verify", "identity", "nope"][..],
        &["verify", "theorem", "3.1", "--prime", "5"][..],
        &["--jobs", "0", "catalog", "list"][..],
    ] {
        let o = rdq(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn catalog_list_round_trips_through_a_file() {
    let listed = rdq(&["catalog", "list", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&listed.stdout).unwrap();
    let lines: String = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| format!("id: {} depth={} {}\n", r["id"].as_str().unwrap(), r["depth"], r["identity"].as_str().unwrap()))
        .collect();
    let dir = std::env::temp_dir().join(format!("rdq-cli-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("all.cat");
    std::fs::write(&path, lines).unwrap();
    let again = rdq(&["catalog", "list", "--catalog", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), stdout(&rdq(&["catalog", "list"])));
    std::fs::remove_dir_all(&dir).unwrap();
}

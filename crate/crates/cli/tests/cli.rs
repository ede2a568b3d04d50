mod common;

use std::fs;

use common::{build, cantorsat, code, level_order, stderr, stdout, toggle_edge};
use serde_json::Value;

fn arg(path: &std::path::Path) -> String {
    path.display().to_string()
}

#[test]
fn build_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 2, 2, 42);
    let out = cantorsat(["verify", "--in", &arg(&p)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("ok: n=2 depth=2 levels=[2, 14, 182]"));

    let bytes = fs::read(&p).unwrap();
    let t = cantorsat::io::read_tower(&bytes[..]).unwrap();
    assert_eq!(cantorsat::io::encode_tower(&t), bytes);
}

#[test]
fn n1_builds_instantly() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 1, 3, 0);
    let out = cantorsat(["verify", "--in", &arg(&p)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = fs::read(build(dir.path(), "a.json", 3, 1, 9)).unwrap();
    let b = fs::read(build(dir.path(), "b.json", 3, 1, 9)).unwrap();
    assert_eq!(a, b);
    let c = fs::read(build(dir.path(), "c.json", 3, 1, 10)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn build_to_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 2, 1, 5);
    let out = cantorsat(["build", "--n", "2", "--depth", "1", "--seed", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, fs::read(&p).unwrap());
}

#[test]
fn extend_matches_direct_build() {
    let dir = tempfile::tempdir().unwrap();
    let shallow = build(dir.path(), "s.json", 2, 1, 17);
    let deep = build(dir.path(), "d.json", 2, 2, 17);
    let grown = dir.path().join("g.json");
    let out = cantorsat(["extend", "--in", &arg(&shallow), "--out", &arg(&grown)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(fs::read(&grown).unwrap(), fs::read(&deep).unwrap());

    let out = cantorsat(["extend", "--in", &arg(&deep), "--depth", "1"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn empirical_mode_needs_m() {
    let out = cantorsat(["build", "--n", "2", "--mode", "empirical"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    let out = cantorsat([
        "build",
        "--n",
        "2",
        "--mode",
        "empirical",
        "--m",
        "8",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn uncertified_m_is_rejected_in_certified_mode() {
    let out = cantorsat(["build", "--n", "2", "--m", "5"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn exhaustion_exit_code() {
    let out = cantorsat(["build", "--n", "3", "--mode", "empirical", "--m", "1"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&cantorsat(["build"])), 4);
    assert_eq!(code(&cantorsat(["frobnicate"])), 4);
    assert_eq!(code(&cantorsat(["build", "--n", "two"])), 4);
    assert_eq!(code(&cantorsat(["build", "--n", "0"])), 4);
    assert_eq!(code(&cantorsat(["--help"])), 0);
}

#[test]
fn malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 2, 1, 1);
    let bytes = fs::read(&p).unwrap();
    let cut = dir.path().join("cut.json");
    fs::write(&cut, &bytes[..bytes.len() / 2]).unwrap();
    assert_eq!(code(&cantorsat(["verify", "--in", &arg(&cut)])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&cantorsat(["verify", "--in", &arg(&missing)])), 2);

    let mut doc: Value = serde_json::from_slice(&bytes).unwrap();
    doc["extra"] = Value::from(1);
    let extra = dir.path().join("extra.json");
    fs::write(&extra, serde_json::to_vec(&doc).unwrap()).unwrap();
    assert_eq!(code(&cantorsat(["verify", "--in", &arg(&extra)])), 2);
}

#[test]
fn single_edge_mutations_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 2, 2, 42);
    let doc: Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
    let target = dir.path().join("m.json");
    let cases = [
        (0, 0, 1),
        (1, 0, 1),
        (1, 3, 9),
        (1, 2, 12),
        (2, 0, 1),
        (2, 100, 181),
        (2, 5, 90),
    ];
    for (level, a, b) in cases {
        assert!(b < level_order(&doc, level));
        let mut d = doc.clone();
        toggle_edge(&mut d, level, a, b);
        fs::write(&target, serde_json::to_vec(&d).unwrap()).unwrap();
        let out = cantorsat(["verify", "--in", &arg(&target)]);
        assert_eq!(
            code(&out),
            1,
            "level {level} edge {a}-{b}: {}",
            stderr(&out)
        );
        assert!(stderr(&out).contains("violation: ["), "{}", stderr(&out));
    }
}

#[test]
fn top_level_mutation_needs_replay() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 2, 2, 42);
    let bytes = fs::read(&p).unwrap();
    let t = cantorsat::io::read_tower(&bytes[..]).unwrap();
    let top = t.depth();
    let order = t.level(top).order();
    // first top-level flip that keeps every structural invariant
    let (a, b) = (0..order)
        .flat_map(|a| (a + 1..order).map(move |b| (a, b)))
        .find(|&(a, b)| {
            let mut levels: Vec<_> = t.levels().iter().map(|g| (**g).clone()).collect();
            let present = levels[top].has_edge(a, b);
            levels[top].set_edge(a, b, !present).unwrap();
            let bonds = t.bonds().iter().map(|h| h.image().to_vec()).collect();
            let m = cantorsat::Tower::from_parts(2, 42, levels, bonds, t.per_level_m().to_vec())
                .unwrap();
            cantorsat::verify_tower(&m).is_ok()
        })
        .expect("some flip is structurally invisible");

    let mut doc: Value = serde_json::from_slice(&bytes).unwrap();
    toggle_edge(&mut doc, top, a, b);
    let target = dir.path().join("m.json");
    fs::write(&target, serde_json::to_vec(&doc).unwrap()).unwrap();
    let out = cantorsat(["verify", "--in", &arg(&target)]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("[seeded-reproducibility]"),
        "{}",
        stderr(&out)
    );
    let out = cantorsat(["verify", "--in", &arg(&target), "--no-replay"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn realize_outputs_and_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 3, 1, 7);
    let ty = dir.path().join("type.json");
    let run = |payload: &str, extra: &[&str]| {
        fs::write(&ty, payload).unwrap();
        let mut args = vec![
            "realize".to_string(),
            "--in".into(),
            arg(&p),
            "--type".into(),
            arg(&ty),
        ];
        args.extend(extra.iter().map(|s| s.to_string()));
        cantorsat(args)
    };

    let out = run(r#"{"constraints":[]}"#, &["--check"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "{\"separation_level\":0,\"entries\":[0,0]}\n");

    let out = run(
        r#"{"constraints":[{"canonical":{"level":0,"vertex":0},"bit":1},{"canonical":{"level":0,"vertex":1},"bit":1}]}"#,
        &["--check"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);

    let out = run(
        r#"{"constraints":[{"entries":[0],"bit":1},{"entries":[1],"bit":0}]}"#,
        &["--check"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["separation_level"], 1);

    let three = r#"{"constraints":[{"entries":[0],"bit":1},{"entries":[1],"bit":1},{"entries":[2],"bit":0}]}"#;
    assert_eq!(code(&run(three, &[])), 2);

    let same =
        r#"{"constraints":[{"entries":[0],"bit":1},{"canonical":{"level":1,"vertex":0},"bit":0}]}"#;
    assert_eq!(code(&run(same, &[])), 5);

    assert_eq!(
        code(&run(r#"{"constraints":[{"entries":[0],"bit":3}]}"#, &[])),
        2
    );
    assert_eq!(
        code(&run(r#"{"constraints":[{"entries":[1,0],"bit":1}]}"#, &[])),
        2
    );
}

#[test]
fn realize_with_depth_grows_and_truncates() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 2, 2, 3);
    let ty = dir.path().join("type.json");
    fs::write(&ty, r#"{"constraints":[{"entries":[0],"bit":0}]}"#).unwrap();
    for (depth, len) in [(1, 2), (3, 4)] {
        let out = cantorsat([
            "realize".to_string(),
            "--in".into(),
            arg(&p),
            "--type".into(),
            arg(&ty),
            "--depth".into(),
            depth.to_string(),
            "--check".into(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), len);
    }

    // a negative constraint cannot be realized in K_2 alone
    let root = build(dir.path(), "r.json", 2, 0, 3);
    let base = [
        "realize".to_string(),
        "--in".into(),
        arg(&root),
        "--type".into(),
        arg(&ty),
    ];
    assert_eq!(code(&cantorsat(&base)), 5);
    let mut grown: Vec<String> = base.to_vec();
    grown.extend(["--auto-extend".to_string(), "--check".into()]);
    let out = cantorsat(&grown);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["separation_level"], 1);
}

#[test]
fn stats_csv() {
    let out = cantorsat([
        "stats", "--n", "1", "--m-from", "1", "--m-to", "3", "--trials", "50",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let rate = headers.iter().position(|h| h == "saturated_rate").unwrap();
    let joint = headers.iter().position(|h| h == "joint_rate").unwrap();
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r[rate].parse::<f64>().unwrap(), 1.0);
        assert_eq!(r[joint].parse::<f64>().unwrap(), 1.0);
    }

    let out = cantorsat([
        "stats", "--n", "2", "--m-from", "5", "--m-to", "6", "--trials", "10",
    ]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].contains(",3/4,7.500000e-1,3/4,7.500000e-1,3/2,"));
    assert!(lines[2].contains(",7/16,4.375000e-1,7/16,4.375000e-1,7/8,8.750000e-1"));

    assert_eq!(
        code(&cantorsat([
            "stats", "--n", "2", "--m-from", "3", "--m-to", "1"
        ])),
        4
    );
    assert_eq!(
        code(&cantorsat([
            "stats", "--n", "2", "--m-from", "1", "--m-to", "1", "--trials", "0"
        ])),
        4
    );
}

#[test]
fn export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "t.json", 3, 1, 2);
    let out = cantorsat(["export", "--in", &arg(&p), "--level", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches("[label=").count(), 3);
    assert_eq!(text.matches(" -- ").count(), 3);

    let out1 = cantorsat([
        "export",
        "--in",
        &arg(&p),
        "--level",
        "1",
        "--format",
        "dot",
    ]);
    let again = cantorsat(["export", "--in", &arg(&p), "--level", "1"]);
    assert_eq!(out1.stdout, again.stdout);
    assert!(stdout(&out1).contains("[label=\"(2,39)\"]"));

    assert_eq!(
        code(&cantorsat(["export", "--in", &arg(&p), "--level", "2"])),
        4
    );
}

mod common;

use std::fs;

use common::{golden, morphmap, ok, summary_json};

fn code(dir: &std::path::Path, args: &[&str]) -> (i32, String) {
    let out = morphmap(dir, args);
    (
        out.status.code().expect("exited normally"),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn one_morph_all_passing_prints_single_cell() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("s.csv"),
        "morph_id,subject_role,probe_id,frs_id,score\nm1,A,p1,f1,0.9\nm1,B,p1,f1,0.8\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("t.json"),
        r#"{"target_far":0.001,"thresholds":{"f1":0.5}}"#,
    )
    .unwrap();
    let out = ok(
        dir.path(),
        &["map", "--scores", "s.csv", "--thresholds", "t.json"],
    )
    .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("    1 | 100.0\n"), "{text}");
    assert!(dir.path().join("map_summary.json").exists());
}

#[test]
fn missing_threshold_is_semantic_and_named() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("t.json"),
        r#"{"target_far":0.001,"thresholds":{"frs1":0.2,"frs3":0.2}}"#,
    )
    .unwrap();
    let scores = golden("reference_scores.csv");
    let (c, err) = code(
        dir.path(),
        &[
            "map",
            "--scores",
            scores.to_str().unwrap(),
            "--thresholds",
            "t.json",
        ],
    );
    assert_eq!(c, 2);
    assert!(err.contains("frs2"), "{err}");
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.csv"),
        "morph_id,subject_role,probe_id,frs_id,score\nm,A,p,f,zero\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("t.json"),
        r#"{"target_far":0.001,"thresholds":{"f":0.5}}"#,
    )
    .unwrap();
    fs::write(dir.path().join("junk.json"), "{not json").unwrap();
    let cases: [&[&str]; 6] = [
        &["map", "--scores", "bad.csv", "--thresholds", "t.json"],
        &["map", "--scores", "absent.csv", "--thresholds", "t.json"],
        &["map", "--scores", "bad.csv", "--thresholds", "junk.json"],
        &["compare", "junk.json", "junk.json"],
        &["calibrate", "--scores", "bad.csv"],
        &["--no-such-flag"],
    ];
    for args in cases {
        let (c, err) = code(dir.path(), args);
        assert_eq!(c, 1, "{args:?}: {err}");
        assert!(!err.contains("panicked"), "{err}");
    }
}

#[test]
fn calibration_without_impostors_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.csv"),
        "frs_id,label,score\nf1,genuine,0.9\n",
    )
    .unwrap();
    assert_eq!(code(dir.path(), &["calibrate", "--scores", "c.csv"]).0, 2);
}

#[test]
fn compare_shape_mismatch_names_both_shapes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("a.json"),
        summary_json("a", &[50.0, 40.0], 10),
    )
    .unwrap();
    fs::write(
        dir.path().join("b.json"),
        summary_json("b", &[50.0, 40.0, 10.0], 10),
    )
    .unwrap();
    let (c, err) = code(dir.path(), &["compare", "a.json", "b.json"]);
    assert_eq!(c, 2);
    assert!(err.contains("1x3") && err.contains("1x2"), "{err}");
}

#[test]
fn identical_bundles_tie() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("a.json"),
        summary_json("a", &[50.0, 40.0], 10),
    )
    .unwrap();
    let out = ok(dir.path(), &["compare", "a.json", "a.json"]).unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().matches("**").count(),
        8
    );
}

#[test]
fn interp_endpoints_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("v.txt"), "1 0\n0 1\n").unwrap();
    let out = ok(
        dir.path(),
        &["interp", "--vectors", "v.txt", "--alpha", "0"],
    )
    .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 0\n");
    let out = ok(
        dir.path(),
        &["interp", "--vectors", "v.txt", "--kind", "lerp"],
    )
    .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.5 0.5\n");

    fs::write(dir.path().join("anti.txt"), "1 0\n-1 0\n").unwrap();
    assert_eq!(code(dir.path(), &["interp", "--vectors", "anti.txt"]).0, 2);
    fs::write(dir.path().join("odd.txt"), "1 0\n").unwrap();
    assert_eq!(code(dir.path(), &["interp", "--vectors", "odd.txt"]).0, 1);
    assert_eq!(
        code(
            dir.path(),
            &["interp", "--vectors", "v.txt", "--alpha", "2"]
        )
        .0,
        1
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--identities",
        "12",
        "--pairs",
        "5",
        "--probes",
        "3",
        "--dim",
        "64",
        "--proj-dim",
        "32",
    ];
    ok(dir.path(), &args).unwrap();
    let first = fs::read(dir.path().join("scores.csv")).unwrap();
    let first_cal = fs::read(dir.path().join("calibration.csv")).unwrap();
    ok(dir.path(), &args).unwrap();
    assert_eq!(fs::read(dir.path().join("scores.csv")).unwrap(), first);
    assert_eq!(
        fs::read(dir.path().join("calibration.csv")).unwrap(),
        first_cal
    );
}

#[test]
fn summary_round_trips_through_compare() {
    let dir = tempfile::tempdir().unwrap();
    let a = golden("map_summary.json");
    let out = ok(
        dir.path(),
        &[
            "compare",
            a.to_str().unwrap(),
            a.to_str().unwrap(),
            "--format",
            "csv",
        ],
    )
    .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let matrix = fs::read_to_string(golden("map_matrix.csv")).unwrap();
    for (line, cell) in text.lines().skip(1).zip(matrix.lines().skip(1)) {
        // label,r,c,value,best vs r,c,value
        let rest = line.split_once(',').unwrap().1;
        assert!(rest.starts_with(cell), "{line} vs {cell}");
    }
}

//! Shared helpers for the CLI golden-file checks.
//!
//! Set `MORPHMAP_BLESS=1` to rewrite the golden files from the current
//! output instead of comparing against them.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

pub fn golden(name: &str) -> PathBuf {
    golden_dir().join(name)
}

pub fn morphmap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphmap"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn morphmap")
}

/// Runs and requires exit code 0.
pub fn ok(dir: &Path, args: &[&str]) -> Result<Output, String> {
    let out = morphmap(dir, args);
    if out.status.success() {
        Ok(out)
    } else {
        Err(format!(
            "`morphmap {}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn blessing() -> bool {
    std::env::var_os("MORPHMAP_BLESS").is_some_and(|v| v == "1")
}

/// Compares `actual` with the golden file `name` byte for byte.
pub fn check(name: &str, actual: &[u8]) -> Result<(), String> {
    let path = golden(name);
    if blessing() {
        fs::create_dir_all(golden_dir()).unwrap();
        fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let want = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == actual {
        return Ok(());
    }
    let line = want
        .split(|&b| b == b'\n')
        .zip(actual.split(|&b| b == b'\n'))
        .position(|(a, b)| a != b)
        .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
    Err(format!("{name} differs from golden at {line}"))
}

pub fn check_file(name: &str, produced: &Path) -> Result<(), String> {
    let bytes = fs::read(produced).map_err(|e| format!("{}: {e}", produced.display()))?;
    check(name, &bytes)
}

/// Simulates the reference world, calibrates it and checks both against
/// the committed fixture.
pub fn reference_fixture() -> Result<(), String> {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["simulate", "--out-dir", "."])?;
    ok(
        dir.path(),
        &[
            "calibrate",
            "--scores",
            "calibration.csv",
            "--far",
            "0.001",
            "--out-dir",
            ".",
        ],
    )?;
    check_file("reference_scores.csv", &dir.path().join("scores.csv"))?;
    check_file(
        "reference_thresholds.json",
        &dir.path().join("thresholds.json"),
    )?;

    ok(
        dir.path(),
        &[
            "simulate",
            "--baseline",
            "--out-scores",
            "baseline_scores.csv",
            "--out-cal",
            "baseline_cal.csv",
        ],
    )?;
    check_file(
        "baseline_scores.csv",
        &dir.path().join("baseline_scores.csv"),
    )
}

fn map_into(out_dir: &Path, scores: &str, label: &str) -> Result<Output, String> {
    let scores = golden(scores);
    let thresholds = golden("reference_thresholds.json");
    ok(
        out_dir,
        &[
            "map",
            "--scores",
            scores.to_str().unwrap(),
            "--thresholds",
            thresholds.to_str().unwrap(),
            "--label",
            label,
            "--out-dir",
            ".",
        ],
    )
}

pub fn map_golden() -> Result<(), String> {
    let dir = tempfile::tempdir().unwrap();
    let out = map_into(dir.path(), "reference_scores.csv", "reference")?;
    check("map_stdout.txt", &out.stdout)?;
    for f in ["map_matrix.csv", "map_curves.csv", "map_summary.json"] {
        check_file(f, &dir.path().join(f))?;
    }
    let base = tempfile::tempdir().unwrap();
    map_into(base.path(), "baseline_scores.csv", "baseline")?;
    check_file(
        "baseline_summary.json",
        &base.path().join("map_summary.json"),
    )
}

pub fn curves_golden() -> Result<(), String> {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (golden("map_summary.json"), golden("baseline_summary.json"));
    ok(
        dir.path(),
        &[
            "curves",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--out",
            "curves.svg",
        ],
    )?;
    check_file("curves.svg", &dir.path().join("curves.svg"))
}

pub fn compare_golden() -> Result<(), String> {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (golden("map_summary.json"), golden("baseline_summary.json"));
    let out = ok(
        dir.path(),
        &["compare", a.to_str().unwrap(), b.to_str().unwrap()],
    )?;
    check("compare.md", &out.stdout)
}

pub fn ablate_golden() -> Result<(), String> {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["ablate", "--out-dir", "."])?;
    check("ablation.csv", &out.stdout)?;
    check_file("ablation.csv", &dir.path().join("ablation.csv"))
}

/// Single-row summary with the given percentages.
pub fn summary_json(label: &str, row: &[f64], morph_count: usize) -> String {
    let n = row.len() as f64;
    // Doubly weighted mean with one row reduces to column weights c/c_max.
    let (num, den) = row.iter().enumerate().fold((0.0, 0.0), |(a, b), (i, v)| {
        let w = (i + 1) as f64 / n;
        (a + w * v / 100.0, b + w)
    });
    let values: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
    format!(
        "{{\"r_max\":1,\"c_max\":{},\"morph_count\":{morph_count},\"map_avg\":{},\"label\":\"{label}\",\
         \"matrix\":[[{}]],\"metadata\":{{\"dataset\":\"\",\"thresholds\":\"\",\"tool_version\":\"\",\"config\":[]}}}}",
        row.len(),
        num / den,
        values.join(",")
    )
}

/// The two-algorithm comparison: second algorithm best in every column.
pub fn table_two_golden() -> Result<(), String> {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c01.json"),
        summary_json("C01", &[97.9, 91.7, 74.0], 1000),
    )
    .unwrap();
    fs::write(
        dir.path().join("alg_b.json"),
        summary_json("alg-b", &[99.9, 99.7, 98.7], 1000),
    )
    .unwrap();
    let out = ok(dir.path(), &["compare", "c01.json", "alg_b.json"])?;
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    if rows.len() != 2 {
        return Err(format!("expected 2 rows, got {}", rows.len()));
    }
    if rows[0].contains("**") || rows[1].matches("**").count() != 6 {
        return Err(format!("best markers misplaced:\n{text}"));
    }
    check("table_two_compare.md", &out.stdout)
}

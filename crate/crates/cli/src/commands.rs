use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use morphmap::calibration::{calibrate_set, Calibration, Threshold};
use morphmap::interp::{format_vector, interpolate, read_vectors, MorphingFactor};
use morphmap::metric::{map_matrix, FrsQuantifier};
use morphmap::report::{
    compare, percent, read_summary_json, render_curves_svg, render_matrix, write_curves_csv,
    write_matrix_csv, write_summary_json, Comparison, Metadata, ReportBundle, TableFormat,
};
use morphmap::score_model::{
    parse_calibration_csv, parse_score_csv, read_threshold_json, write_calibration_csv,
    write_score_csv, write_threshold_json, CalibrationWarning, ProbePolicy, ThresholdTable,
};
use morphmap::simulator::{
    run_ablation, run_simulation, AblationRow, InterpSpace, MorphSource, SimConfig,
};
use morphmap::{Dataset, Matrix};
use serde_json::json;

use crate::fail::{Failure, Located, Outcome};
use crate::{Cli, Command, Format, WorldArgs};

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Calibrate { scores, far, out } => cmd_calibrate(cli, scores, *far, out.as_deref()),
        Command::Map {
            scores,
            thresholds,
            label,
        } => cmd_map(cli, scores, thresholds, label.as_deref()),
        Command::Curves { summaries, out } => cmd_curves(cli, summaries, out.as_deref()),
        Command::Compare { summaries } => cmd_compare(cli, summaries),
        Command::Simulate {
            world,
            kind,
            space,
            baseline,
            out_scores,
            out_cal,
        } => {
            let config = SimConfig {
                interp_kind: (*kind).into(),
                interp_space: (*space).into(),
                morph_source: if *baseline {
                    MorphSource::UnrelatedIdentity
                } else {
                    MorphSource::Interpolated
                },
                ..sim_config(cli, world)
            };
            cmd_simulate(cli, &config, out_scores.as_deref(), out_cal.as_deref())
        }
        Command::Ablate { world, out } => cmd_ablate(cli, &sim_config(cli, world), out.as_deref()),
        Command::Interp {
            vectors,
            alpha,
            kind,
        } => cmd_interp(vectors, *alpha, (*kind).into()),
    }
}

fn sim_config(cli: &Cli, w: &WorldArgs) -> SimConfig {
    SimConfig {
        seed: cli.seed,
        dim: w.dim,
        n_identities: w.identities,
        probes_per_identity: w.probes,
        probe_noise_sigma: w.sigma,
        n_frs: w.frs,
        frs_proj_dim: w.proj_dim,
        alpha: w.alpha,
        n_pairs: w.pairs,
        target_far: w.far,
        ..SimConfig::reference()
    }
}

fn policy(cli: &Cli) -> ProbePolicy {
    if cli.ragged {
        ProbePolicy::Ragged
    } else {
        ProbePolicy::Uniform
    }
}

fn quantifier(cli: &Cli) -> FrsQuantifier {
    if cli.pooled_frs {
        FrsQuantifier::Pooled
    } else {
        FrsQuantifier::Joint
    }
}

fn open(path: &Path) -> Outcome<File> {
    File::open(path).at(path)
}

fn out_path(cli: &Cli, explicit: Option<&Path>, default: &str) -> PathBuf {
    explicit.map_or_else(|| cli.out_dir.join(default), Path::to_path_buf)
}

/// Creates `path` (and its parent directories) and hands a buffered writer
/// to `fill`.
fn write_file<E: Into<Failure>>(
    path: &Path,
    fill: impl FnOnce(&mut BufWriter<File>) -> Result<(), E>,
) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).at(dir)?;
    }
    let mut w = BufWriter::new(File::create(path).at(path)?);
    fill(&mut w).at(path)?;
    w.flush().at(path)
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

fn cmd_calibrate(cli: &Cli, scores: &Path, far: f64, out: Option<&Path>) -> Outcome {
    let set = parse_calibration_csv::<f64, _>(open(scores)?).at(scores)?;
    for w in &set.warnings {
        match w {
            CalibrationWarning::NoImpostors { frs_id } => {
                eprintln!("warning: FRS `{frs_id}` has no impostor scores")
            }
        }
    }
    let cal = calibrate_set(&set, far)?;
    for w in &cal.warnings {
        eprintln!(
            "warning: FRS `{}` has only {} impostor scores; FAR resolution is coarser than {far}",
            w.frs_id, w.impostor_count
        );
    }
    let path = out_path(cli, out, "thresholds.json");
    write_file(&path, |w| write_threshold_json(&cal.table, w))?;
    print!("{}", operating_points(&cal, cli.format));
    Ok(())
}

fn operating_points(cal: &Calibration<f64>, format: Option<Format>) -> String {
    let frr = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    let mut out = String::new();
    match format {
        Some(Format::Json) => {
            let mut buf = Vec::new();
            write_threshold_json(&cal.table, &mut buf).expect("validated table");
            out.push_str(&String::from_utf8(buf).expect("utf-8 JSON"));
            out.push('\n');
        }
        Some(Format::Csv) => {
            out.push_str(
                "frs_id,threshold,above_max,achieved_far,achieved_frr,impostors,genuine\n",
            );
            for p in &cal.points {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p.frs_id,
                    p.threshold.decision_value(),
                    p.threshold.is_above_max(),
                    p.achieved_far,
                    frr(p.achieved_frr),
                    p.impostor_count,
                    p.genuine_count
                ));
            }
        }
        Some(Format::Md) => {
            out.push_str("| FRS | threshold | FAR | FRR | impostors | genuine |\n");
            out.push_str("|---|---:|---:|---:|---:|---:|\n");
            for p in &cal.points {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} |\n",
                    p.frs_id,
                    describe(&p.threshold),
                    p.achieved_far,
                    frr(p.achieved_frr),
                    p.impostor_count,
                    p.genuine_count
                ));
            }
        }
        None => {
            for p in &cal.points {
                out.push_str(&format!(
                    "{}: threshold {} far {} frr {} ({} impostor, {} genuine)\n",
                    p.frs_id,
                    describe(&p.threshold),
                    p.achieved_far,
                    p.achieved_frr
                        .map_or_else(|| "n/a".into(), |x| x.to_string()),
                    p.impostor_count,
                    p.genuine_count
                ));
            }
        }
    }
    out
}

fn describe(t: &Threshold<f64>) -> String {
    match t {
        Threshold::Observed(v) => v.to_string(),
        Threshold::AboveMax { max_impostor } => format!("> {max_impostor}"),
    }
}

fn cmd_map(cli: &Cli, scores: &Path, thresholds: &Path, label: Option<&str>) -> Outcome {
    let dataset: Dataset = parse_score_csv(open(scores)?, policy(cli)).at(scores)?;
    let table: ThresholdTable<f64> = read_threshold_json(open(thresholds)?).at(thresholds)?;
    let quantifier = quantifier(cli);
    let matrix: Matrix = map_matrix(&dataset, &table, quantifier)?;
    let label = label.map_or_else(
        || {
            scores
                .file_stem()
                .map_or_else(|| "scores".into(), |s| s.to_string_lossy().into_owned())
        },
        str::to_string,
    );
    let metadata = Metadata {
        dataset: file_name(scores),
        thresholds: file_name(thresholds),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: vec![
            format!("target_far={}", table.target_far),
            format!(
                "quantifier={}",
                match quantifier {
                    FrsQuantifier::Joint => "joint",
                    FrsQuantifier::Pooled => "pooled",
                }
            ),
            format!("ragged={}", cli.ragged),
        ],
    };
    let bundle = ReportBundle::new(label, matrix, metadata);

    write_file(&cli.out_dir.join("map_matrix.csv"), |w| {
        write_matrix_csv(&bundle.matrix, w)
    })?;
    write_file(&cli.out_dir.join("map_curves.csv"), |w| {
        write_curves_csv(&bundle.curves, w)
    })?;
    write_file(&cli.out_dir.join("map_summary.json"), |w| {
        write_summary_json(&bundle, w)
    })?;

    let mut stdout = std::io::stdout().lock();
    match cli.format {
        None => write!(
            stdout,
            "{}",
            render_matrix(&bundle.matrix, TableFormat::Text)
        )?,
        Some(Format::Md) => write!(
            stdout,
            "{}",
            render_matrix(&bundle.matrix, TableFormat::Markdown)
        )?,
        Some(Format::Csv) => write_matrix_csv(&bundle.matrix, &mut stdout)?,
        Some(Format::Json) => write_summary_json(&bundle, &mut stdout)?,
    }
    if cli.format.is_none() {
        writeln!(stdout, "MAP_Avg {:.4}", bundle.map_avg)?;
    }
    Ok(())
}

fn read_bundles(paths: &[PathBuf]) -> Outcome<Vec<ReportBundle>> {
    paths
        .iter()
        .map(|p| read_summary_json(open(p)?).at(p))
        .collect()
}

fn cmd_curves(cli: &Cli, summaries: &[PathBuf], out: Option<&Path>) -> Outcome {
    let bundles = read_bundles(summaries)?;
    let path = out_path(cli, out, "map_curves.svg");
    let svg = render_curves_svg(&bundles);
    write_file(&path, |w| w.write_all(svg.as_bytes()))
}

fn cmd_compare(cli: &Cli, summaries: &[PathBuf]) -> Outcome {
    let bundles = read_bundles(summaries)?;
    let cmp = compare(&bundles)?;
    print!("{}", comparison_text(&cmp, cli.format));
    Ok(())
}

fn comparison_text(cmp: &Comparison, format: Option<Format>) -> String {
    match format {
        None | Some(Format::Md) => cmp.to_markdown(),
        Some(Format::Csv) => {
            let mut out = String::from("label,r,c,map_percent,best\n");
            for row in &cmp.rows {
                for (c, (v, best)) in row.values.iter().zip(&row.best).enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{v},{best}\n",
                        csv_field(&row.label),
                        row.r,
                        c + 1
                    ));
                }
            }
            out
        }
        Some(Format::Json) => {
            let rows: Vec<_> = cmp
                .rows
                .iter()
                .map(|row| json!({"label": row.label, "r": row.r, "values": row.values, "best": row.best}))
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("plain JSON values");
            s.push('\n');
            s
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_simulate(
    cli: &Cli,
    config: &SimConfig,
    scores: Option<&Path>,
    cal: Option<&Path>,
) -> Outcome {
    let sim = run_simulation(config)?;
    let scores = out_path(cli, scores, "scores.csv");
    let cal = out_path(cli, cal, "calibration.csv");
    write_file(&scores, |w| write_score_csv(&sim.dataset, w))?;
    write_file(&cal, |w| write_calibration_csv(&sim.calibration, w))?;
    eprintln!(
        "wrote {} score records to {} and {} calibration records to {}",
        sim.dataset.records().len(),
        scores.display(),
        sim.calibration.len(),
        cal.display()
    );
    Ok(())
}

fn cmd_ablate(cli: &Cli, config: &SimConfig, out: Option<&Path>) -> Outcome {
    let rows = run_ablation(config)?;
    let csv = ablation_csv(&rows);
    write_file(&out_path(cli, out, "ablation.csv"), |w| {
        w.write_all(csv.as_bytes())
    })?;
    match cli.format {
        None | Some(Format::Csv) => print!("{csv}"),
        Some(Format::Md) => {
            let mut s = String::from("| space | kind | MAP_Avg |\n|---|---|---:|\n");
            for r in &rows {
                s.push_str(&format!(
                    "| {} | {} | {} |\n",
                    space_name(r.space),
                    r.kind,
                    percent(100.0 * r.map_avg)
                ));
            }
            print!("{s}");
        }
        Some(Format::Json) => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| json!({"space": r.space.as_str(), "kind": r.kind.as_str(), "map_avg": r.map_avg}))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("plain JSON values")
            );
        }
    }
    Ok(())
}

fn space_name(s: InterpSpace) -> &'static str {
    match s {
        InterpSpace::IdentityLevel => "identity",
        InterpSpace::LatentLevel => "latent",
    }
}

fn ablation_csv(rows: &[AblationRow]) -> String {
    let mut s = String::from("space,kind,map_avg\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.space, r.kind, r.map_avg));
    }
    s
}

fn cmd_interp(vectors: &Path, alpha: f64, kind: morphmap::interp::InterpKind) -> Outcome {
    let text = fs::read_to_string(vectors).at(vectors)?;
    let vs = read_vectors::<f64>(&text).at(vectors)?;
    if vs.is_empty() || vs.len() % 2 != 0 {
        return Err(Failure::input(anyhow!(
            "expected an even, nonzero number of vectors, found {}",
            vs.len()
        ))
        .context(vectors.display()));
    }
    let alpha = MorphingFactor::new(alpha)?;
    let mut out = String::new();
    for (i, pair) in vs.chunks(2).enumerate() {
        let m = interpolate(&pair[0], &pair[1], alpha, kind)
            .map_err(|e| Failure::from(e).context(format!("pair {}", i + 1)))?;
        out.push_str(&format_vector(&m));
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

//! On-disk outputs of a run: trajectory CSV, appraisal snapshots, heatmaps
//! and a JSON summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use teamdyn_core::Matrix;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::run::{simulate, RunOutcome};

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// File-name stamp for a sample time, zero-padded so names sort by time.
pub fn time_stamp(t: f64) -> String {
    format!("{t:09.3}")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| HarnessError::Run(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// `t,<metrics>,w_1..w_n`, one row per sample.
pub fn trajectory_csv(outcome: &RunOutcome) -> Result<Vec<u8>> {
    let n = outcome.config.n;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(outcome.metrics.iter().map(|m| m.as_str().to_string()));
    header.extend((1..=n).map(|i| format!("w_{i}")));
    let csv_err = |e: csv::Error| HarnessError::Run(format!("writing trajectory.csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for s in &outcome.trajectory.samples {
        let row = std::iter::once(s.t)
            .chain(s.metrics.iter().copied())
            .chain(s.w.iter().copied())
            .map(fmt17);
        w.write_record(row).map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| HarnessError::Run(format!("writing trajectory.csv: {e}")))
}

#[derive(Serialize)]
struct Snapshot<'a> {
    t: f64,
    n: usize,
    /// Row-major entries.
    data: &'a [f64],
}

/// 8-bit binary PGM, `cell` pixels per entry; darker means larger, with
/// black at 1 and white at 0.
pub fn heatmap_pgm(a: &Matrix, cell: usize) -> Vec<u8> {
    let n = a.dim();
    let side = n * cell;
    let mut out = format!("P5\n{side} {side}\n255\n").into_bytes();
    out.reserve(side * side);
    for i in 0..n {
        let row: Vec<u8> = (0..n).map(|j| gray(a[(i, j)])).collect();
        for _ in 0..cell {
            for &g in &row {
                out.extend(std::iter::repeat_n(g, cell));
            }
        }
    }
    out
}

/// The same picture as [`heatmap_pgm`] in SVG.
pub fn heatmap_svg(a: &Matrix, cell: usize) -> String {
    let n = a.dim();
    let side = n * cell;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n"
    );
    for i in 0..n {
        for j in 0..n {
            let g = gray(a[(i, j)]);
            let _ = writeln!(
                s,
                "  <rect x=\"{}\" y=\"{}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({g},{g},{g})\"/>",
                j * cell,
                i * cell
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn gray(v: f64) -> u8 {
    (255.0 * (1.0 - v.clamp(0.0, 1.0))).round() as u8
}

/// Indices of the samples that get snapshots: the first, the last, and the
/// first sample at or after each multiple of `every`.
pub fn snapshot_indices(times: &[f64], every: f64) -> Vec<usize> {
    let mut idx = Vec::new();
    if times.is_empty() {
        return idx;
    }
    idx.push(0);
    let mut next = every;
    for (k, &t) in times.iter().enumerate().skip(1) {
        if t >= next * (1.0 - 1e-12) {
            idx.push(k);
            while next <= t * (1.0 + 1e-12) {
                next += every;
            }
        }
    }
    let last = times.len() - 1;
    if *idx.last().unwrap() != last {
        idx.push(last);
    }
    idx
}

/// Writes every artifact of `outcome` under `dir` and returns the files
/// written.
pub fn write_artifacts(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    for sub in ["snapshots", "heatmaps"] {
        let stale = dir.join(sub);
        if stale.is_dir() {
            fs::remove_dir_all(&stale).map_err(|e| HarnessError::io(&stale, e))?;
        }
    }
    let mut written = Vec::new();
    let mut put = |path: PathBuf, bytes: &[u8]| -> Result<()> {
        write_file(&path, bytes)?;
        written.push(path);
        Ok(())
    };

    put(dir.join("trajectory.csv"), &trajectory_csv(outcome)?)?;
    put(
        dir.join("config.toml"),
        outcome.config.to_toml_string().as_bytes(),
    )?;

    let samples = &outcome.trajectory.samples;
    if samples.first().is_some_and(|s| s.appraisal.is_some()) {
        let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
        let every = outcome
            .config
            .artifacts
            .snapshot_every
            .unwrap_or(outcome.config.integrator.t_end / 4.0);
        let art = &outcome.config.artifacts;
        for k in snapshot_indices(&times, every) {
            let s = &samples[k];
            let a = s.appraisal.as_ref().expect("appraisal samples");
            let stamp = time_stamp(s.t);
            let snap = Snapshot {
                t: s.t,
                n: a.dim(),
                data: a.as_slice(),
            };
            let mut json = serde_json::to_string_pretty(&snap)
                .map_err(|e| HarnessError::Run(format!("serializing snapshot: {e}")))?;
            json.push('\n');
            put(
                dir.join("snapshots").join(format!("A_t{stamp}.json")),
                json.as_bytes(),
            )?;
            if art.heatmaps {
                put(
                    dir.join("heatmaps").join(format!("A_t{stamp}.pgm")),
                    &heatmap_pgm(a, art.cell_pixels),
                )?;
                if art.svg {
                    put(
                        dir.join("heatmaps").join(format!("A_t{stamp}.svg")),
                        heatmap_svg(a, art.cell_pixels).as_bytes(),
                    )?;
                }
            }
        }
    }

    let path = dir.join("summary.json");
    write_json(&path, &outcome.summary)?;
    written.push(path);
    Ok(written)
}

/// Runs `cfg` and persists its artifacts under `dir`.
pub fn run_experiment(cfg: &ExperimentConfig, dir: &Path) -> Result<RunOutcome> {
    let outcome = simulate(cfg)?;
    write_artifacts(&outcome, dir)?;
    Ok(outcome)
}

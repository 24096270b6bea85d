//! Results-directory layout and CSV/text renderings.
//!
//! ```text
//! <dir>/finals.csv                          scenario,learner,label,kind,seed,final_ae
//! <dir>/results.csv                         mean final error (%) per scenario x learner
//! <dir>/groups.csv                          significance groups (2+ seeds only)
//! <dir>/curves/<scenario>.csv               n,<learner labels...> seed-averaged ae_win
//! <dir>/traces/<scenario>/<id>_seed<k>.csv  n,loss,ae_cum,ae_win
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::experiment::{ExperimentOutput, ExperimentResult, LearnerColumn};
use super::groups::{PairwiseTest, ScenarioGroup};
use super::trace::RunTrace;
use crate::error::{Error, Result};
use crate::io::{format_sig9, write_atomic};

pub const FINALS_FILE: &str = "finals.csv";
pub const RESULTS_FILE: &str = "results.csv";
pub const GROUPS_FILE: &str = "groups.csv";
pub const PAIRWISE_FILE: &str = "pairwise.csv";
pub const TABLE_FILE: &str = "results_table.txt";
pub const CURVES_DIR: &str = "curves";
pub const TRACES_DIR: &str = "traces";

#[derive(Debug, Serialize, Deserialize)]
struct FinalRow {
    scenario: String,
    learner: String,
    label: String,
    kind: String,
    seed: u64,
    final_ae: f64,
}

fn csv_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    w.into_inner().expect("in-memory csv flush")
}

pub fn finals_csv(result: &ExperimentResult) -> Vec<u8> {
    let mut rows = Vec::new();
    for (s, scenario) in result.scenarios.iter().enumerate() {
        for (l, col) in result.learners.iter().enumerate() {
            for (k, seed) in result.seeds.iter().enumerate() {
                if let Some(v) = result.finals[s][l][k] {
                    rows.push(FinalRow {
                        scenario: scenario.clone(),
                        learner: col.id.clone(),
                        label: col.label.clone(),
                        kind: col.kind.clone(),
                        seed: *seed,
                        final_ae: v,
                    });
                }
            }
        }
    }
    csv_bytes(rows)
}

/// Rebuilds the finals table; scenario and learner order follow first
/// appearance in the file.
pub fn parse_finals(text: &str, origin: &Path) -> Result<ExperimentResult> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for r in reader.deserialize::<FinalRow>() {
        rows.push(r.map_err(|e| Error::Parse {
            path: origin.display().to_string(),
            message: e.to_string(),
        })?);
    }
    let mut scenarios: Vec<String> = Vec::new();
    let mut learners: Vec<LearnerColumn> = Vec::new();
    let mut seeds = BTreeSet::new();
    for r in &rows {
        if !scenarios.contains(&r.scenario) {
            scenarios.push(r.scenario.clone());
        }
        if !learners.iter().any(|l| l.id == r.learner) {
            learners.push(LearnerColumn {
                id: r.learner.clone(),
                label: r.label.clone(),
                kind: r.kind.clone(),
                oracle: r.kind == "bayes_oracle",
            });
        }
        seeds.insert(r.seed);
    }
    let seeds: Vec<u64> = seeds.into_iter().collect();
    let mut finals = vec![vec![vec![None; seeds.len()]; learners.len()]; scenarios.len()];
    for r in rows {
        let s = scenarios.iter().position(|x| *x == r.scenario).unwrap();
        let l = learners.iter().position(|x| x.id == r.learner).unwrap();
        let k = seeds.binary_search(&r.seed).unwrap();
        finals[s][l][k] = Some(r.final_ae);
    }
    Ok(ExperimentResult {
        scenarios,
        learners,
        seeds,
        finals,
    })
}

/// Loads `finals.csv` from a results directory.
pub fn read_results(dir: &Path) -> Result<ExperimentResult> {
    let path = dir.join(FINALS_FILE);
    if !path.is_file() {
        return Err(Error::io(
            dir,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("not a results directory ({FINALS_FILE} missing)"),
            ),
        ));
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let result = parse_finals(&text, &path)?;
    if result.scenarios.is_empty() {
        return Err(Error::NotFound(format!(
            "results directory {} contains no runs",
            dir.display()
        )));
    }
    Ok(result)
}

fn cell_text(result: &ExperimentResult, s: usize, l: usize, groups: Option<&[ScenarioGroup]>) -> String {
    let Some(mean) = result.mean(s, l) else {
        return "NA".into();
    };
    let flagged = groups
        .and_then(|g| g.iter().find(|g| g.scenario == result.scenarios[s]))
        .is_some_and(|g| g.contains(&result.learners[l].id));
    format!("{:.2}{}", mean * 100.0, if flagged { "*" } else { "" })
}

fn table_cells(result: &ExperimentResult, groups: Option<&[ScenarioGroup]>) -> Vec<Vec<String>> {
    let mut rows = vec![std::iter::once("scenario".to_string())
        .chain(result.learners.iter().map(|l| l.label.clone()))
        .collect::<Vec<_>>()];
    for (s, name) in result.scenarios.iter().enumerate() {
        rows.push(
            std::iter::once(name.clone())
                .chain((0..result.learners.len()).map(|l| cell_text(result, s, l, groups)))
                .collect(),
        );
    }
    rows
}

/// Mean final error in percent; `*` marks members of the scenario's
/// significance group.
pub fn results_csv(result: &ExperimentResult, groups: Option<&[ScenarioGroup]>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in table_cells(result, groups) {
        w.write_record(&row).expect("in-memory csv write");
    }
    w.into_inner().expect("in-memory csv flush")
}

/// The same table, column-aligned for reading.
pub fn results_text(result: &ExperimentResult, groups: Option<&[ScenarioGroup]>) -> String {
    let rows = table_cells(result, groups);
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (v, w))| if c == 0 { format!("{v:<w$}") } else { format!("{v:>w$}") })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out.push_str(&format!(
        "\nmean final prequential error (%) over {} seed(s)\n",
        result.seeds.len()
    ));
    if groups.is_some() {
        out.push_str("* not significantly different from the best learner\n");
    }
    out
}

pub fn groups_csv(result: &ExperimentResult, groups: &[ScenarioGroup]) -> Vec<u8> {
    #[derive(Serialize)]
    struct Row<'a> {
        scenario: &'a str,
        best: &'a str,
        learner: &'a str,
        label: &'a str,
        mean_ae_pct: String,
        p_value_vs_best: String,
        in_group: bool,
    }
    let label = |id: &str| {
        result
            .learners
            .iter()
            .find(|l| l.id == id)
            .map_or("", |l| l.label.as_str())
    };
    let mut rows = Vec::new();
    for g in groups {
        for e in &g.entries {
            rows.push(Row {
                scenario: &g.scenario,
                best: &g.best,
                learner: &e.learner,
                label: label(&e.learner),
                mean_ae_pct: format!("{:.4}", e.mean * 100.0),
                p_value_vs_best: format_sig9(e.p_value),
                in_group: e.in_group,
            });
        }
    }
    csv_bytes(rows)
}

pub fn pairwise_csv(tests: &[PairwiseTest]) -> Vec<u8> {
    #[derive(Serialize)]
    struct Row<'a> {
        scenario: &'a str,
        learner_a: &'a str,
        learner_b: &'a str,
        p_value: String,
    }
    csv_bytes(tests.iter().map(|t| Row {
        scenario: &t.scenario,
        learner_a: &t.learner_a,
        learner_b: &t.learner_b,
        p_value: format_sig9(t.p_value),
    }))
}

pub fn trace_csv(trace: &RunTrace, window: usize) -> Vec<u8> {
    let mut out = String::with_capacity(trace.len() * 24);
    out.push_str("n,loss,ae_cum,ae_win\n");
    for p in trace.series(window) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.n,
            p.loss,
            format_sig9(p.ae_cum),
            format_sig9(p.ae_win)
        ));
    }
    out.into_bytes()
}

pub fn curve_csv(curves: &[(LearnerColumn, Vec<f64>)]) -> Vec<u8> {
    let mut out = String::from("n");
    for (col, _) in curves {
        out.push(',');
        out.push_str(&col.label);
    }
    out.push('\n');
    let len = curves.iter().map(|c| c.1.len()).max().unwrap_or(0);
    for i in 0..len {
        out.push_str(&(i + 1).to_string());
        for (_, values) in curves {
            out.push(',');
            if let Some(v) = values.get(i) {
                out.push_str(&format_sig9(*v));
            }
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// File-name-safe form of a scenario or learner name.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

pub fn curve_path(dir: &Path, scenario: &str) -> PathBuf {
    dir.join(CURVES_DIR).join(format!("{}.csv", file_stem(scenario)))
}

pub fn trace_path(dir: &Path, scenario: &str, learner: &str, seed: u64) -> PathBuf {
    dir.join(TRACES_DIR)
        .join(file_stem(scenario))
        .join(format!("{}_seed{seed}.csv", file_stem(learner)))
}

fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes the full results directory for an experiment.
pub fn write_results(
    output: &ExperimentOutput,
    dir: &Path,
    groups: Option<&[ScenarioGroup]>,
) -> Result<()> {
    ensure_dir(&dir.join(CURVES_DIR))?;
    let result = &output.result;
    write_atomic(&dir.join(FINALS_FILE), &finals_csv(result))?;
    write_atomic(&dir.join(RESULTS_FILE), &results_csv(result, groups))?;
    let groups_path = dir.join(GROUPS_FILE);
    match groups {
        Some(g) => write_atomic(&groups_path, &groups_csv(result, g))?,
        // A stale file from an earlier run would contradict this one.
        None if groups_path.exists() => fs::remove_file(&groups_path).map_err(|e| Error::io(&groups_path, e))?,
        None => {}
    }
    for scenario in &result.scenarios {
        write_atomic(&curve_path(dir, scenario), &curve_csv(&output.curves(scenario)))?;
        ensure_dir(&dir.join(TRACES_DIR).join(file_stem(scenario)))?;
    }
    for trace in &output.traces {
        let path = trace_path(dir, trace.scenario(), trace.learner(), trace.seed());
        write_atomic(&path, &trace_csv(trace, output.window))?;
    }
    Ok(())
}

/// Renders a report bundle from a results directory: aligned text table,
/// results CSV and a copy of every curve file. Output depends only on the
/// directory contents.
pub fn write_report(
    results_dir: &Path,
    out: &Path,
    groups: Option<&[ScenarioGroup]>,
) -> Result<()> {
    let result = read_results(results_dir)?;
    ensure_dir(&out.join(CURVES_DIR))?;
    write_atomic(&out.join(TABLE_FILE), results_text(&result, groups).as_bytes())?;
    write_atomic(&out.join(RESULTS_FILE), &results_csv(&result, groups))?;
    for scenario in &result.scenarios {
        let src = curve_path(results_dir, scenario);
        if !src.is_file() {
            return Err(Error::NotFound(format!(
                "curve file {} is missing",
                src.display()
            )));
        }
        let bytes = fs::read(&src).map_err(|e| Error::io(&src, e))?;
        write_atomic(&curve_path(out, scenario), &bytes)?;
    }
    Ok(())
}

//! Command-line front end: `generate`, `run`, `compare` and `report`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::evaluation::{
    export, pairwise_tests, run_experiment, significance_groups, ExperimentConfig, WilcoxonVariant,
    DEFAULT_WINDOW,
};
use crate::io::{write_atomic, write_dataset, DatasetFormat};
use crate::learners::{preset, presets, LearnerSpec};
use crate::model::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "driftbench", version, about = "Drifting Gaussian-mixture stream benchmark")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one generated stream to CSV or ARFF.
    Generate(GenerateArgs),
    /// Run learners over scenarios and seeds, writing traces, curves and tables.
    Run(RunArgs),
    /// Significance groups and pairwise tests from a results directory.
    Compare(CompareArgs),
    /// Render a results directory into a text/CSV report bundle.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Canonical scenario name or path to a scenario file.
    #[arg(long)]
    pub scenario: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// csv or arff; defaults to the output file extension, else csv.
    #[arg(long)]
    pub format: Option<DatasetFormat>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Comma-separated scenario names or files, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub scenario: Vec<String>,
    /// Comma-separated learner ids, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub learner: Vec<String>,
    /// Number of seeds; runs use seeds 1..=k.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Window for windowed error curves.
    #[arg(long)]
    pub window: Option<usize>,
    /// Results directory; created if missing.
    #[arg(long)]
    pub outdir: PathBuf,
    /// Experiment file; command-line flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Significance level for groups (default 0.05).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// paired or unpaired.
    #[arg(long)]
    pub wilcoxon: Option<WilcoxonVariant>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "paired")]
    pub wilcoxon: WilcoxonVariant,
    /// Where to write groups.csv and pairwise.csv; defaults to the results directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "paired")]
    pub wilcoxon: WilcoxonVariant,
}

/// Experiment file accepted by `run --config`.
///
/// ```toml
/// scenarios = ["NSGT", "my_scenario.toml"]
/// learners = ["nb", "dwm"]
/// seeds = 10
/// window = 500
///
/// [[learner]]
/// id = "nn50"
/// label = "NN50"
/// kind = "window_knn"
/// wsize = 50
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default)]
    pub scenarios: Vec<String>,
    /// Reference learner ids.
    #[serde(default)]
    pub learners: Vec<String>,
    /// Fully specified learners.
    #[serde(default)]
    pub learner: Vec<LearnerSpec>,
    pub seeds: Option<usize>,
    pub window: Option<usize>,
    pub alpha: Option<f64>,
    pub wilcoxon: Option<String>,
}

impl ExperimentFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Run { .. } | Error::DegenerateScenario { .. } | Error::NumericalDegeneracy(_) => {
            EXIT_RUN
        }
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Generate(a) => generate(&a),
        Command::Run(a) => run(&a),
        Command::Compare(a) => compare(&a),
        Command::Report(a) => report(&a),
    }
}

fn generate(a: &GenerateArgs) -> Result<i32> {
    let scenario = catalog::resolve(&a.scenario)?;
    let format = a.format.unwrap_or_else(|| {
        match a.out.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("arff") => DatasetFormat::Arff,
            _ => DatasetFormat::Csv,
        }
    });
    write_dataset(&scenario, a.seed, format, &a.out)?;
    Ok(EXIT_OK)
}

fn resolve_scenarios(names: &[String]) -> Result<Vec<Arc<Scenario>>> {
    let mut out = Vec::new();
    for name in names {
        if name.eq_ignore_ascii_case("all") {
            out.extend(catalog::all().into_iter().map(|e| Arc::new(e.scenario)));
        } else {
            out.push(Arc::new(catalog::resolve(name)?));
        }
    }
    Ok(out)
}

fn resolve_learners(ids: &[String]) -> Result<Vec<LearnerSpec>> {
    let mut out = Vec::new();
    for id in ids {
        if id.eq_ignore_ascii_case("all") {
            out.extend(presets());
        } else {
            out.push(preset(id)?);
        }
    }
    Ok(out)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be in [0, 1]")));
    }
    Ok(())
}

fn run(a: &RunArgs) -> Result<i32> {
    let file = match &a.config {
        Some(path) => ExperimentFile::load(path)?,
        None => ExperimentFile::default(),
    };
    let scenario_names = if a.scenario.is_empty() { &file.scenarios } else { &a.scenario };
    if scenario_names.is_empty() {
        return Err(Error::InvalidArgument("no scenarios given (--scenario)".into()));
    }
    let scenarios = resolve_scenarios(scenario_names)?;

    let mut learners = if a.learner.is_empty() {
        let mut l = resolve_learners(&file.learners)?;
        l.extend(file.learner.iter().cloned());
        l
    } else {
        resolve_learners(&a.learner)?
    };
    if learners.is_empty() {
        return Err(Error::InvalidArgument("no learners given (--learner)".into()));
    }
    let mut seen = std::collections::HashSet::new();
    learners.retain(|l| seen.insert(l.id.to_ascii_lowercase()));

    let seeds = a.seeds.or(file.seeds).unwrap_or(10);
    if seeds == 0 {
        return Err(Error::InvalidArgument("--seeds must be at least 1".into()));
    }
    let mut config = ExperimentConfig::new(learners, seeds);
    config.window = a.window.or(file.window).unwrap_or(DEFAULT_WINDOW);
    config.alpha = a.alpha.or(file.alpha).unwrap_or(config.alpha);
    check_alpha(config.alpha)?;
    config.wilcoxon = match (a.wilcoxon, &file.wilcoxon) {
        (Some(v), _) => v,
        (None, Some(s)) => s.parse()?,
        (None, None) => WilcoxonVariant::Paired,
    };

    let output = run_experiment(&scenarios, &config)?;
    for f in &output.failures {
        eprintln!("run failed: {}", f.error);
    }
    let groups = if seeds >= 2 {
        Some(significance_groups(&output.result, config.alpha, config.wilcoxon)?)
    } else {
        eprintln!("note: significance groups not computed (need at least 2 seeds, got 1)");
        None
    };
    export::write_results(&output, &a.outdir, groups.as_deref())?;
    print!("{}", export::results_text(&output.result, groups.as_deref()));
    Ok(if output.failures.is_empty() { EXIT_OK } else { EXIT_RUN })
}

fn compare(a: &CompareArgs) -> Result<i32> {
    check_alpha(a.alpha)?;
    let result = export::read_results(&a.results)?;
    let groups = significance_groups(&result, a.alpha, a.wilcoxon)?;
    let pairs = pairwise_tests(&result, a.wilcoxon)?;
    let out = a.out.as_deref().unwrap_or(&a.results);
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_atomic(&out.join(export::GROUPS_FILE), &export::groups_csv(&result, &groups))?;
    write_atomic(&out.join(export::PAIRWISE_FILE), &export::pairwise_csv(&pairs))?;
    println!("scenario,best,members");
    for g in &groups {
        println!("{},{},{}", g.scenario, g.best, g.members().collect::<Vec<_>>().join(" "));
    }
    Ok(EXIT_OK)
}

fn report(a: &ReportArgs) -> Result<i32> {
    check_alpha(a.alpha)?;
    let result = export::read_results(&a.results)?;
    let groups = if result.seeds.len() >= 2 {
        Some(significance_groups(&result, a.alpha, a.wilcoxon)?)
    } else {
        None
    };
    export::write_report(&a.results, &a.out, groups.as_deref())?;
    Ok(EXIT_OK)
}

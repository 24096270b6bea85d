use std::sync::Arc;

use rayon::prelude::*;

use super::stats::WilcoxonVariant;
use super::trace::RunTrace;
use crate::error::{Error, Result};
use crate::learners::{Classifier, LearnerSpec};
use crate::model::Scenario;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DRIFTBENCH_THREADS";

/// Default window for windowed error curves.
pub const DEFAULT_WINDOW: usize = 500;

/// Interleaved test-then-train over the scenario stream for `seed`: each
/// pattern is scored by `predict` before `train` sees it.
pub fn prequential(scenario: &Scenario, learner: &mut dyn Classifier, seed: u64) -> Result<Vec<u8>> {
    let mut losses = Vec::with_capacity(scenario.length());
    for p in scenario.stream(seed) {
        losses.push((learner.predict(&p.x) != p.class_index) as u8);
        learner.train(&p.x, p.class_index)?;
    }
    Ok(losses)
}

/// Builds a fresh learner from `spec` and runs it on one seed. Errors carry
/// the run's identity.
pub fn prequential_run(scenario: &Arc<Scenario>, spec: &LearnerSpec, seed: u64) -> Result<RunTrace> {
    let wrap = |e: Error| Error::Run {
        scenario: scenario.name().to_string(),
        learner: spec.id.clone(),
        seed,
        source: Box::new(e),
    };
    let mut learner = spec.config.build(scenario, seed).map_err(wrap)?;
    let losses = prequential(scenario, learner.as_mut(), seed).map_err(wrap)?;
    RunTrace::new(scenario.name(), spec.id.as_str(), seed, losses)
}

/// Column of the results table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnerColumn {
    pub id: String,
    pub label: String,
    pub kind: String,
    /// The Bayes oracle never takes part in significance groups.
    pub oracle: bool,
}

impl From<&LearnerSpec> for LearnerColumn {
    fn from(s: &LearnerSpec) -> Self {
        Self {
            id: s.id.clone(),
            label: s.label.clone(),
            kind: s.config.kind.as_str().to_string(),
            oracle: s.is_oracle(),
        }
    }
}

/// Final errors of every (scenario, learner, seed) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub scenarios: Vec<String>,
    pub learners: Vec<LearnerColumn>,
    pub seeds: Vec<u64>,
    /// `finals[s][l][k]`: final error (fraction) of seed `seeds[k]`, `None` if
    /// that run failed.
    pub finals: Vec<Vec<Vec<Option<f64>>>>,
}

impl ExperimentResult {
    pub fn scenario_index(&self, name: &str) -> Option<usize> {
        self.scenarios.iter().position(|s| s.eq_ignore_ascii_case(name))
    }

    pub fn learner_index(&self, id: &str) -> Option<usize> {
        self.learners.iter().position(|l| l.id.eq_ignore_ascii_case(id))
    }

    /// Per-seed finals of a cell, or `None` if any of its runs failed.
    pub fn cell(&self, scenario: usize, learner: usize) -> Option<Vec<f64>> {
        self.finals[scenario][learner].iter().copied().collect()
    }

    pub fn mean(&self, scenario: usize, learner: usize) -> Option<f64> {
        let v = self.cell(scenario, learner)?;
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Looks up a cell mean by scenario name and learner id.
    pub fn mean_of(&self, scenario: &str, learner: &str) -> Option<f64> {
        self.mean(self.scenario_index(scenario)?, self.learner_index(learner)?)
    }
}

/// Failure of a single run; the rest of the experiment still completes.
#[derive(Debug)]
pub struct RunFailure {
    pub scenario: String,
    pub learner: String,
    pub seed: u64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub learners: Vec<LearnerSpec>,
    pub seeds: Vec<u64>,
    pub window: usize,
    pub alpha: f64,
    pub wilcoxon: WilcoxonVariant,
}

impl ExperimentConfig {
    /// Seeds `1..=k`, window 500, α = 0.05, paired tests.
    pub fn new(learners: Vec<LearnerSpec>, seeds: usize) -> Self {
        Self {
            learners,
            seeds: (1..=seeds as u64).collect(),
            window: DEFAULT_WINDOW,
            alpha: 0.05,
            wilcoxon: WilcoxonVariant::Paired,
        }
    }
}

/// Everything produced by [`run_experiment`].
#[derive(Debug)]
pub struct ExperimentOutput {
    pub result: ExperimentResult,
    pub window: usize,
    /// Successful runs, ordered by scenario, learner, then seed.
    pub traces: Vec<RunTrace>,
    pub failures: Vec<RunFailure>,
}

impl ExperimentOutput {
    /// Seed-averaged windowed error per learner column for one scenario;
    /// learners with failed runs are skipped.
    pub fn curves(&self, scenario: &str) -> Vec<(LearnerColumn, Vec<f64>)> {
        let mut out = Vec::new();
        for col in &self.result.learners {
            let runs: Vec<&RunTrace> = self
                .traces
                .iter()
                .filter(|t| t.scenario() == scenario && t.learner() == col.id)
                .collect();
            if runs.is_empty() || runs.len() != self.result.seeds.len() {
                continue;
            }
            let mut avg = vec![0.0; runs[0].len()];
            for t in &runs {
                for (a, v) in avg.iter_mut().zip(t.ae_win_series(self.window)) {
                    *a += v;
                }
            }
            for a in &mut avg {
                *a /= runs.len() as f64;
            }
            out.push((col.clone(), avg));
        }
        out
    }

    pub fn trace(&self, scenario: &str, learner: &str, seed: u64) -> Option<&RunTrace> {
        self.traces
            .iter()
            .find(|t| t.scenario() == scenario && t.learner() == learner && t.seed() == seed)
    }
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn configured_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidParameter(format!(
                "{THREADS_ENV} = `{v}` is not a positive integer"
            ))),
        },
    }
}

/// Runs every (scenario, learner, seed) combination on a bounded pool.
/// Results do not depend on scheduling.
pub fn run_experiment(scenarios: &[Arc<Scenario>], config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if scenarios.is_empty() || config.learners.is_empty() || config.seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "an experiment needs at least one scenario, learner and seed".into(),
        ));
    }
    if config.window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    for spec in &config.learners {
        spec.config.validate()?;
    }
    let jobs: Vec<(usize, usize, usize)> = (0..scenarios.len())
        .flat_map(|s| {
            (0..config.learners.len())
                .flat_map(move |l| (0..config.seeds.len()).map(move |k| (s, l, k)))
        })
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<RunTrace>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(s, l, k)| prequential_run(&scenarios[s], &config.learners[l], config.seeds[k]))
            .collect()
    });

    let mut finals =
        vec![vec![vec![None; config.seeds.len()]; config.learners.len()]; scenarios.len()];
    let mut traces = Vec::with_capacity(jobs.len());
    let mut failures = Vec::new();
    for (&(s, l, k), outcome) in jobs.iter().zip(outcomes) {
        match outcome {
            Ok(trace) => {
                finals[s][l][k] = Some(trace.final_ae());
                traces.push(trace);
            }
            Err(error) => failures.push(RunFailure {
                scenario: scenarios[s].name().to_string(),
                learner: config.learners[l].id.clone(),
                seed: config.seeds[k],
                error,
            }),
        }
    }
    Ok(ExperimentOutput {
        result: ExperimentResult {
            scenarios: scenarios.iter().map(|s| s.name().to_string()).collect(),
            learners: config.learners.iter().map(LearnerColumn::from).collect(),
            seeds: config.seeds.clone(),
            finals,
        },
        window: config.window,
        traces,
        failures,
    })
}

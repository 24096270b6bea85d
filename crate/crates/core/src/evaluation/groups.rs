use super::experiment::ExperimentResult;
use super::stats::WilcoxonVariant;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupEntry {
    pub learner: String,
    pub mean: f64,
    /// p-value of the test against the best learner (1 for the best itself).
    pub p_value: f64,
    pub in_group: bool,
}

/// Learners not significantly worse than the best on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGroup {
    pub scenario: String,
    pub best: String,
    pub entries: Vec<GroupEntry>,
}

impl ScenarioGroup {
    pub fn members(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().filter(|e| e.in_group).map(|e| e.learner.as_str())
    }

    pub fn contains(&self, learner: &str) -> bool {
        self.members().any(|m| m.eq_ignore_ascii_case(learner))
    }
}

fn require_seeds(result: &ExperimentResult) -> Result<()> {
    if result.seeds.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "significance tests need at least 2 seeds, the results have {}",
            result.seeds.len()
        )));
    }
    Ok(())
}

/// For each scenario: the learner with the lowest mean final error, and every
/// learner whose test against it gives `p >= alpha`. The oracle and cells with
/// failed runs are left out. Mean ties go to the earlier column.
pub fn significance_groups(
    result: &ExperimentResult,
    alpha: f64,
    variant: WilcoxonVariant,
) -> Result<Vec<ScenarioGroup>> {
    require_seeds(result)?;
    let mut groups = Vec::new();
    for (s, scenario) in result.scenarios.iter().enumerate() {
        let cells: Vec<(usize, Vec<f64>, f64)> = result
            .learners
            .iter()
            .enumerate()
            .filter(|(_, col)| !col.oracle)
            .filter_map(|(l, _)| {
                let v = result.cell(s, l)?;
                let m = result.mean(s, l)?;
                Some((l, v, m))
            })
            .collect();
        let Some(best) = cells
            .iter()
            .min_by(|a, b| a.2.total_cmp(&b.2))
            .map(|c| c.0)
        else {
            continue;
        };
        let best_finals = result.cell(s, best).expect("best cell complete");
        let mut entries = Vec::with_capacity(cells.len());
        for (l, finals, mean) in &cells {
            let p_value = if *l == best {
                1.0
            } else {
                variant.p_value(&best_finals, finals)?
            };
            entries.push(GroupEntry {
                learner: result.learners[*l].id.clone(),
                mean: *mean,
                p_value,
                in_group: p_value >= alpha,
            });
        }
        groups.push(ScenarioGroup {
            scenario: scenario.clone(),
            best: result.learners[best].id.clone(),
            entries,
        });
    }
    Ok(groups)
}

/// One pairwise comparison between two learners on a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseTest {
    pub scenario: String,
    pub learner_a: String,
    pub learner_b: String,
    pub p_value: f64,
}

/// Tests between every pair of non-oracle learners with complete cells.
pub fn pairwise_tests(result: &ExperimentResult, variant: WilcoxonVariant) -> Result<Vec<PairwiseTest>> {
    require_seeds(result)?;
    let mut out = Vec::new();
    for (s, scenario) in result.scenarios.iter().enumerate() {
        let cells: Vec<(usize, Vec<f64>)> = result
            .learners
            .iter()
            .enumerate()
            .filter(|(_, col)| !col.oracle)
            .filter_map(|(l, _)| Some((l, result.cell(s, l)?)))
            .collect();
        for (i, (la, a)) in cells.iter().enumerate() {
            for (lb, b) in &cells[i + 1..] {
                out.push(PairwiseTest {
                    scenario: scenario.clone(),
                    learner_a: result.learners[*la].id.clone(),
                    learner_b: result.learners[*lb].id.clone(),
                    p_value: variant.p_value(a, b)?,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::LearnerColumn;

    fn col(id: &str, oracle: bool) -> LearnerColumn {
        LearnerColumn {
            id: id.into(),
            label: id.to_uppercase(),
            kind: "naive_bayes".into(),
            oracle,
        }
    }

    fn result(cells: Vec<Vec<f64>>, oracle_first: bool) -> ExperimentResult {
        let learners = (0..cells.len())
            .map(|i| col(&format!("l{i}"), oracle_first && i == 0))
            .collect();
        let seeds = (1..=cells[0].len() as u64).collect();
        ExperimentResult {
            scenarios: vec!["S".into()],
            learners,
            seeds,
            finals: vec![cells
                .into_iter()
                .map(|c| c.into_iter().map(Some).collect())
                .collect()],
        }
    }

    #[test]
    fn single_learner_is_its_own_group() {
        let r = result(vec![vec![0.1, 0.2, 0.3]], false);
        let g = significance_groups(&r, 0.05, WilcoxonVariant::Paired).unwrap();
        assert_eq!(g[0].best, "l0");
        assert!(g[0].contains("l0"));
    }

    #[test]
    fn oracle_excluded() {
        let base: Vec<f64> = (0..10).map(|i| 0.2 + 0.001 * i as f64).collect();
        let r = result(vec![vec![0.0; 10], base.clone(), base], true);
        let g = significance_groups(&r, 0.05, WilcoxonVariant::Paired).unwrap();
        assert_eq!(g[0].best, "l1");
        assert!(g[0].entries.iter().all(|e| e.learner != "l0"));
        assert!(g[0].contains("l2"));
    }

    #[test]
    fn too_few_seeds() {
        let r = result(vec![vec![0.1], vec![0.2]], false);
        assert!(significance_groups(&r, 0.05, WilcoxonVariant::Paired).is_err());
        assert!(pairwise_tests(&r, WilcoxonVariant::Paired).is_err());
    }
}

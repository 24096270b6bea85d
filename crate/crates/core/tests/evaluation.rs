use std::path::Path;
use std::sync::Arc;

use driftbench::catalog;
use driftbench::evaluation::{
    export, prequential, prequential_run, run_experiment, significance_groups,
    wilcoxon_rank_sum, wilcoxon_signed_rank, ExperimentConfig, ExperimentResult, LearnerColumn,
    RunTrace, WilcoxonVariant,
};
use driftbench::learners::{preset, Classifier};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Midrank of `v` within `all`, by counting.
fn midrank(all: &[f64], v: f64) -> f64 {
    let below = all.iter().filter(|x| **x < v).count() as f64;
    let equal = all.iter().filter(|x| **x == v).count() as f64;
    below + (equal + 1.0) / 2.0
}

/// Two-sided signed-rank p-value by visiting all 2^n sign patterns.
fn signed_rank_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).filter(|d| *d != 0.0).collect();
    if d.is_empty() {
        return 1.0;
    }
    let abs: Vec<f64> = d.iter().map(|x| x.abs()).collect();
    let ranks: Vec<f64> = abs.iter().map(|v| midrank(&abs, *v)).collect();
    let mean = ranks.iter().sum::<f64>() / 2.0;
    let observed: f64 = d.iter().zip(&ranks).filter(|(x, _)| **x > 0.0).map(|(_, r)| r).sum();
    let n = d.len();
    let extreme = (0u32..1 << n)
        .filter(|mask| {
            let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            (w - mean).abs() >= (observed - mean).abs() - 1e-9
        })
        .count();
    extreme as f64 / (1u64 << n) as f64
}

/// Two-sided rank-sum p-value by visiting every way to pick the first sample.
fn rank_sum_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks: Vec<f64> = pooled.iter().map(|v| midrank(&pooled, *v)).collect();
    let (n, k) = (pooled.len(), a.len());
    let mean = k as f64 * (n as f64 + 1.0) / 2.0;
    let observed: f64 = ranks[..k].iter().sum();
    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        total += 1;
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if (w - mean).abs() >= (observed - mean).abs() - 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

fn tied_sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // Coarse grid so that ties and zero differences are common.
    (0..n).map(|_| rng.random_range(0..6) as f64 * 0.01).collect()
}

#[test]
fn signed_rank_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let n = rng.random_range(1..=12);
        let a = tied_sample(&mut rng, n);
        let b = tied_sample(&mut rng, n);
        let p = wilcoxon_signed_rank(&a, &b).unwrap();
        assert!((p - signed_rank_enumerated(&a, &b)).abs() < 1e-12, "{a:?} {b:?}");
        assert_eq!(p, wilcoxon_signed_rank(&b, &a).unwrap());
    }
}

#[test]
fn rank_sum_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..300 {
        let (na, nb) = (rng.random_range(1..=7), rng.random_range(1..=7));
        let a = tied_sample(&mut rng, na);
        let b = tied_sample(&mut rng, nb);
        let p = wilcoxon_rank_sum(&a, &b).unwrap();
        assert!((p - rank_sum_enumerated(&a, &b)).abs() < 1e-12, "{a:?} {b:?}");
        assert!((p - wilcoxon_rank_sum(&b, &a).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn uniform_shift_is_the_most_extreme_outcome() {
    let a: Vec<f64> = (0..10).map(|i| 0.1 + 0.01 * i as f64).collect();
    let b: Vec<f64> = a.iter().map(|x| x + 1.0).collect();
    let p = wilcoxon_signed_rank(&a, &b).unwrap();
    assert!((p - 2.0 / 1024.0).abs() < 1e-15);
    assert_eq!(wilcoxon_signed_rank(&a, &a).unwrap(), 1.0);
}

proptest! {
    #[test]
    fn cumulative_and_windowed_errors(losses in prop::collection::vec(0u8..=1, 1..400), w in 1usize..50) {
        let t = RunTrace::new("S", "L", 1, losses.clone()).unwrap();
        let mut prev = 0.0;
        for n in 1..=losses.len() {
            let cum = t.ae_cum(n).unwrap();
            let expected = ((n - 1) as f64 * prev + losses[n - 1] as f64) / n as f64;
            prop_assert!((cum - expected).abs() < 1e-12);
            prev = cum;
            if n >= w {
                let naive = losses[n - w..n].iter().map(|l| *l as f64).sum::<f64>() / w as f64;
                prop_assert!((t.ae_win(n, w).unwrap() - naive).abs() < 1e-12);
            } else {
                prop_assert!(t.ae_win(n, w).is_err());
            }
        }
        prop_assert_eq!(t.final_ae(), prev);
        let series = t.series(w);
        prop_assert_eq!(series.len(), losses.len());
        for p in &series {
            let span = p.n.min(w);
            let naive = losses[p.n - span..p.n].iter().map(|l| *l as f64).sum::<f64>() / span as f64;
            prop_assert!((p.ae_win - naive).abs() < 1e-12);
        }
    }
}

struct Always(usize);

impl Classifier for Always {
    fn predict(&self, _: &[f64]) -> usize {
        self.0
    }
    fn train(&mut self, _: &[f64], _: usize) -> driftbench::Result<()> {
        Ok(())
    }
    fn reset(&mut self) {}
}

#[test]
fn constant_predictors_score_the_label_frequencies() {
    let s = catalog::build("NSPC").unwrap().scenario;
    let others = s.stream(6).filter(|p| p.class_index != 0).count() as f64;
    let losses = prequential(&s, &mut Always(0), 6).unwrap();
    let t = RunTrace::new("NSPC", "always0", 6, losses).unwrap();
    assert!((t.final_ae() - others / s.length() as f64).abs() < 1e-12);

    let wrong = prequential(&s, &mut Always(9), 6).unwrap();
    assert!(wrong.iter().all(|l| *l == 1));
    assert!(RunTrace::new("S", "L", 1, vec![2]).is_err());
}

fn small_grid() -> (Vec<Arc<driftbench::model::Scenario>>, ExperimentConfig) {
    let scenarios = ["NSGT", "NSPC-A"]
        .iter()
        .map(|n| Arc::new(catalog::build(n).unwrap().scenario))
        .collect();
    let learners = ["opt", "nb", "sgd", "nn100"].iter().map(|id| preset(id).unwrap()).collect();
    (scenarios, ExperimentConfig::new(learners, 4))
}

#[test]
fn experiment_matches_serial_runs_in_any_order() {
    let (scenarios, config) = small_grid();
    let out = run_experiment(&scenarios, &config).unwrap();
    assert!(out.failures.is_empty());
    for s in scenarios.iter().rev() {
        for spec in config.learners.iter().rev() {
            let mut sum = 0.0;
            for seed in config.seeds.iter().rev() {
                let solo = prequential_run(s, spec, *seed).unwrap();
                assert_eq!(out.trace(s.name(), &spec.id, *seed).unwrap(), &solo);
                sum += solo.final_ae();
            }
            let mean = out.result.mean_of(s.name(), &spec.id).unwrap();
            assert!((mean - sum / config.seeds.len() as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn finals_round_trip_through_csv() {
    let (scenarios, config) = small_grid();
    let out = run_experiment(&scenarios, &config).unwrap();
    let bytes = export::finals_csv(&out.result);
    let back = export::parse_finals(std::str::from_utf8(&bytes).unwrap(), Path::new("mem")).unwrap();
    assert_eq!(back, out.result);
}

fn synthetic(columns: &[(&str, Vec<f64>)]) -> ExperimentResult {
    ExperimentResult {
        scenarios: vec!["S".into()],
        learners: columns
            .iter()
            .map(|(id, _)| LearnerColumn {
                id: id.to_string(),
                label: id.to_uppercase(),
                kind: if *id == "opt" { "bayes_oracle" } else { "naive_bayes" }.into(),
                oracle: *id == "opt",
            })
            .collect(),
        seeds: (1..=columns[0].1.len() as u64).collect(),
        finals: vec![columns
            .iter()
            .map(|(_, v)| v.iter().copied().map(Some).collect())
            .collect()],
    }
}

fn members(r: &ExperimentResult, alpha: f64) -> Vec<String> {
    let g = significance_groups(r, alpha, WilcoxonVariant::Paired).unwrap();
    let mut m: Vec<String> = g[0].members().map(String::from).collect();
    m.sort();
    m
}

#[test]
fn groups_follow_alpha_and_ignore_column_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut noisy = |base: f64| -> Vec<f64> {
        (0..10).map(|_| base + rng.random_range(0.0..0.02)).collect()
    };
    let cols = vec![
        ("opt", vec![0.0; 10]),
        ("a", noisy(0.10)),
        ("b", noisy(0.101)),
        ("c", noisy(0.13)),
        ("d", noisy(0.30)),
    ];
    let r = synthetic(&cols);
    let base = members(&r, 0.05);
    assert!(base.contains(&"a".to_string()) || base.contains(&"b".to_string()));
    assert!(!base.contains(&"d".to_string()));
    assert!(!base.contains(&"opt".to_string()));

    let mut shuffled = cols.clone();
    shuffled.reverse();
    assert_eq!(members(&synthetic(&shuffled), 0.05), base);

    assert_eq!(members(&r, 0.0), vec!["a", "b", "c", "d"]);
    let g = significance_groups(&r, 1.0, WilcoxonVariant::Paired).unwrap();
    assert_eq!(g[0].members().collect::<Vec<_>>(), vec![g[0].best.as_str()]);
}

//! Incremental classifiers behind a common predict-then-train interface.

mod adwin;
mod dwm;
mod estimator;
mod hoeffding;
mod knn;
mod naive_bayes;
mod oracle;
mod ozabag;
mod sgd;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use adwin::{cut_threshold, min_sub_window, Adwin, MAX_BUCKETS};
pub use dwm::{Dwm, DwmParams, Expert};
pub use estimator::{GaussianEstimator, MIN_VARIANCE};
pub use hoeffding::{
    hoeffding_bound, info_gain, HoeffdingParams, HoeffdingTree, LeafPrediction, SplitCandidate,
};
pub use knn::WindowKnn;
pub use naive_bayes::NaiveBayes;
pub use oracle::BayesOracle;
pub use ozabag::{mean_multiplicity, Member, OzaBagAdwin, OzaBagParams};
pub use sgd::SgdLinear;

use crate::error::{Error, Result};
use crate::model::{learner_rng, Scenario};

/// Incremental classifier. Labels are class indices.
pub trait Classifier: Send {
    /// Must not change any state that affects later predictions.
    fn predict(&self, x: &[f64]) -> usize;
    fn train(&mut self, x: &[f64], label: usize) -> Result<()>;
    /// Back to the freshly constructed state.
    fn reset(&mut self);
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn predict(&self, x: &[f64]) -> usize {
        (**self).predict(x)
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        (**self).train(x, label)
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    BayesOracle,
    NaiveBayes,
    SgdLinear,
    WindowKnn,
    Dwm,
    OzabagAdwin,
}

impl LearnerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BayesOracle => "bayes_oracle",
            Self::NaiveBayes => "naive_bayes",
            Self::SgdLinear => "sgd_linear",
            Self::WindowKnn => "window_knn",
            Self::Dwm => "dwm",
            Self::OzabagAdwin => "ozabag_adwin",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Self::BayesOracle | Self::NaiveBayes => &[],
            Self::SgdLinear => &["lr", "lambda"],
            Self::WindowKnn => &["wsize", "k"],
            Self::Dwm => &["beta", "theta", "period", "soft_vote"],
            Self::OzabagAdwin => &[
                "ensemble_size",
                "delta",
                "adwin",
                "grace_period",
                "split_confidence",
                "tie_threshold",
                "max_depth",
                "bins",
                "min_branch_fraction",
                "leaf_prediction",
            ],
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::BayesOracle,
            Self::NaiveBayes,
            Self::SgdLinear,
            Self::WindowKnn,
            Self::Dwm,
            Self::OzabagAdwin,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown learner kind `{s}`")))
    }
}

/// A learner kind plus flat hyperparameter keys, e.g. `wsize = 100`.
/// Missing keys take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub kind: LearnerKind,
    #[serde(flatten)]
    pub params: BTreeMap<String, toml::Value>,
}

impl LearnerConfig {
    pub fn new(kind: LearnerKind) -> Self {
        Self {
            kind,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<toml::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    fn check_keys(&self) -> Result<()> {
        let allowed = self.kind.keys();
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidParameter(format!(
                "`{k}` is not a hyperparameter of {}; expected one of [{}]",
                self.kind,
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }

    /// Checks keys and values without needing a scenario.
    pub fn validate(&self) -> Result<()> {
        self.check_keys()?;
        match self.kind {
            LearnerKind::BayesOracle | LearnerKind::NaiveBayes => Ok(()),
            LearnerKind::SgdLinear => self.sgd().map(drop),
            LearnerKind::WindowKnn => self.knn().map(drop),
            LearnerKind::Dwm => self.dwm_params()?.validate(),
            LearnerKind::OzabagAdwin => {
                OzaBagAdwin::new(self.ozabag_params()?, learner_rng(0)).map(drop)
            }
        }
    }

    fn float(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(toml::Value::Float(v)) => Ok(*v),
            Some(toml::Value::Integer(v)) => Ok(*v as f64),
            Some(v) => Err(Error::InvalidParameter(format!("`{key}` must be a number, got {v}"))),
        }
    }

    fn int(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(*v as usize),
            Some(v) => Err(Error::InvalidParameter(format!(
                "`{key}` must be a non-negative integer, got {v}"
            ))),
        }
    }

    fn boolean(&self, key: &str, default: bool) -> Result<bool> {
        match self.params.get(key) {
            None => Ok(default),
            Some(toml::Value::Boolean(v)) => Ok(*v),
            Some(v) => Err(Error::InvalidParameter(format!("`{key}` must be true or false, got {v}"))),
        }
    }

    fn sgd(&self) -> Result<SgdLinear> {
        let lr = self.float("lr", 0.01)?;
        let lambda = self.float("lambda", 1e-4)?;
        if !(lr > 0.0) || !(lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sgd_linear needs lr > 0 and lambda >= 0, got lr = {lr}, lambda = {lambda}"
            )));
        }
        Ok(SgdLinear::new(lr, lambda))
    }

    fn knn(&self) -> Result<WindowKnn> {
        WindowKnn::new(self.int("wsize", 100)?, self.int("k", 1)?)
    }

    fn dwm_params(&self) -> Result<DwmParams> {
        let d = DwmParams::default();
        Ok(DwmParams {
            beta: self.float("beta", d.beta)?,
            theta: self.float("theta", d.theta)?,
            period: self.int("period", d.period)?,
            soft_vote: self.boolean("soft_vote", d.soft_vote)?,
        })
    }

    fn ozabag_params(&self) -> Result<OzaBagParams> {
        let d = OzaBagParams::default();
        let t = d.tree;
        let leaf_prediction = match self.params.get("leaf_prediction") {
            None => t.leaf_prediction,
            Some(toml::Value::String(s)) => match s.as_str() {
                "majority" => LeafPrediction::MajorityClass,
                "nb" => LeafPrediction::NaiveBayes,
                "nb_adaptive" => LeafPrediction::AdaptiveNaiveBayes,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "leaf_prediction `{other}`; expected majority, nb or nb_adaptive"
                    )))
                }
            },
            Some(v) => return Err(Error::InvalidParameter(format!("`leaf_prediction` must be a string, got {v}"))),
        };
        let delta = self.float("delta", 0.002)?;
        Ok(OzaBagParams {
            ensemble_size: self.int("ensemble_size", d.ensemble_size)?,
            delta: self.boolean("adwin", true)?.then_some(delta),
            tree: HoeffdingParams {
                grace_period: self.float("grace_period", t.grace_period)?,
                split_confidence: self.float("split_confidence", t.split_confidence)?,
                tie_threshold: self.float("tie_threshold", t.tie_threshold)?,
                max_depth: self.int("max_depth", t.max_depth)?,
                bins: self.int("bins", t.bins)?,
                min_branch_fraction: self.float("min_branch_fraction", t.min_branch_fraction)?,
                leaf_prediction,
            },
        })
    }

    /// Builds a fresh learner for one run. `seed` drives any internal
    /// randomness through a stream separate from the data.
    pub fn build(&self, scenario: &Arc<Scenario>, seed: u64) -> Result<Box<dyn Classifier>> {
        self.check_keys()?;
        Ok(match self.kind {
            LearnerKind::BayesOracle => Box::new(BayesOracle::new(Arc::clone(scenario))?),
            LearnerKind::NaiveBayes => Box::new(NaiveBayes::new()),
            LearnerKind::SgdLinear => Box::new(self.sgd()?),
            LearnerKind::WindowKnn => Box::new(self.knn()?),
            LearnerKind::Dwm => Box::new(Dwm::new(self.dwm_params()?)?),
            LearnerKind::OzabagAdwin => {
                Box::new(OzaBagAdwin::new(self.ozabag_params()?, learner_rng(seed))?)
            }
        })
    }
}

/// A named learner configuration: `id` is used on the command line and in
/// file names, `label` in table headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub id: String,
    pub label: String,
    #[serde(flatten)]
    pub config: LearnerConfig,
}

impl LearnerSpec {
    pub fn new(id: &str, label: &str, config: LearnerConfig) -> Self {
        Self {
            id: id.to_string(),
            label: label.to_string(),
            config,
        }
    }

    pub fn is_oracle(&self) -> bool {
        self.config.kind == LearnerKind::BayesOracle
    }
}

/// Ids of the reference configurations, in table order.
pub const PRESET_IDS: [&str; 8] = ["opt", "nb", "sgd", "dwm", "ozab", "nn100", "nn1500", "nn6000"];

pub fn preset(id: &str) -> Result<LearnerSpec> {
    let knn = |w: i64| LearnerConfig::new(LearnerKind::WindowKnn).with("wsize", w);
    let spec = match id.to_ascii_lowercase().as_str() {
        "opt" => LearnerSpec::new("opt", "Opt.", LearnerConfig::new(LearnerKind::BayesOracle)),
        "nb" => LearnerSpec::new("nb", "NB", LearnerConfig::new(LearnerKind::NaiveBayes)),
        "sgd" => LearnerSpec::new("sgd", "SGD", LearnerConfig::new(LearnerKind::SgdLinear)),
        "dwm" => LearnerSpec::new("dwm", "DWM", LearnerConfig::new(LearnerKind::Dwm)),
        "ozab" => LearnerSpec::new("ozab", "OZAB", LearnerConfig::new(LearnerKind::OzabagAdwin)),
        "nn100" => LearnerSpec::new("nn100", "NN100", knn(100)),
        "nn1500" => LearnerSpec::new("nn1500", "NN1500", knn(1500)),
        "nn6000" => LearnerSpec::new("nn6000", "NN6000", knn(6000)),
        _ => {
            return Err(Error::NotFound(format!(
                "learner `{id}`; known ids: {}",
                PRESET_IDS.join(", ")
            )))
        }
    };
    Ok(spec)
}

pub fn presets() -> Vec<LearnerSpec> {
    PRESET_IDS.iter().map(|id| preset(id).expect("preset ids resolve")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        let s = Arc::new(crate::catalog::build("NSGT").unwrap().scenario);
        for spec in presets() {
            spec.config.validate().unwrap();
            spec.config.build(&s, 1).unwrap();
        }
    }

    #[test]
    fn flat_keys_parse_from_toml() {
        let spec: LearnerSpec = toml::from_str(
            "id = \"nn50\"\nlabel = \"NN50\"\nkind = \"window_knn\"\nwsize = 50\nk = 3\n",
        )
        .unwrap();
        assert_eq!(spec.config.kind, LearnerKind::WindowKnn);
        assert_eq!(spec.config.params["wsize"].as_integer(), Some(50));
        spec.config.validate().unwrap();
    }

    #[test]
    fn unknown_and_invalid_keys_rejected() {
        let c = LearnerConfig::new(LearnerKind::Dwm).with("wsize", 5);
        assert!(c.validate().unwrap_err().to_string().contains("wsize"));
        let c = LearnerConfig::new(LearnerKind::Dwm).with("beta", 2.0);
        assert!(c.validate().is_err());
        let c = LearnerConfig::new(LearnerKind::WindowKnn).with("wsize", 0);
        assert!(c.validate().is_err());
        let c = LearnerConfig::new(LearnerKind::OzabagAdwin).with("leaf_prediction", "mode");
        assert!(c.validate().is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for id in PRESET_IDS {
            let k = preset(id).unwrap().config.kind;
            assert_eq!(k.as_str().parse::<LearnerKind>().unwrap(), k);
        }
        assert!(preset("svm").is_err());
    }
}

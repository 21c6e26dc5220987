//! JSON experiment configuration.

use std::path::Path;

use serde::Deserialize;

use poissonlab_core::experiments::{ExperimentConfig, Mode};
use poissonlab_core::measures::GaussMixingAssumption;
use poissonlab_core::mixing::Functional;
use poissonlab_core::point_process::{make_interval_union, Interval};
use poissonlab_core::rational::parse_rational;
use poissonlab_core::{IntervalUnion, MeasureModel};

use crate::LabError;

/// A rational given either as a string (`"1/3"`, `"0.25"`) or a JSON number,
/// which is read through its shortest decimal form.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalLit {
    Text(String),
    Number(f64),
}

impl RationalLit {
    fn text(&self) -> String {
        match self {
            RationalLit::Text(s) => s.clone(),
            RationalLit::Number(x) => format!("{x}"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Iid {
        probs: Vec<RationalLit>,
    },
    Geometric {
        ratio: RationalLit,
    },
    Markov {
        transition: Vec<Vec<RationalLit>>,
    },
    GaussCf {
        #[serde(rename = "T", default)]
        t: Option<f64>,
        #[serde(default)]
        sigma: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    pub lo: RationalLit,
    pub hi: RationalLit,
    #[serde(default)]
    pub lo_closed: bool,
    #[serde(default = "yes")]
    pub hi_closed: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModeSpec {
    Annealed,
    Quenched,
    Oracle,
    Concentration,
    Mixing,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalSpec {
    Mean,
    Void(u64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tv")]
    pub tv: f64,
    #[serde(default = "default_pass_fraction")]
    pub replica_pass_fraction: f64,
}

fn default_tv() -> f64 {
    0.05
}

fn default_pass_fraction() -> f64 {
    0.9
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tv: default_tv(), replica_pass_fraction: default_pass_fraction() }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationSpec {
    #[serde(default)]
    pub t_grid: Vec<f64>,
    pub functional: Option<FunctionalSpec>,
    pub n_word_samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MixingSpec {
    pub truncations: Option<Vec<usize>>,
    pub assumed_t_sigma: Option<(f64, f64)>,
}

/// The raw config document. `sets` lists test sets, each a union of intervals.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: ModelSpec,
    pub k: usize,
    pub sets: Vec<Vec<IntervalSpec>>,
    pub mode: ModeSpec,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default = "default_replicas")]
    pub n_x_replicas: usize,
    pub n_cap: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub strict: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub concentration: ConcentrationSpec,
    #[serde(default)]
    pub mixing: MixingSpec,
}

fn default_samples() -> usize {
    10_000
}

fn default_replicas() -> usize {
    10
}

fn field_error(path: &str, e: impl std::fmt::Display) -> LabError {
    LabError::Config { path: path.to_string(), message: e.to_string() }
}

fn rational(path: &str, lit: &RationalLit) -> Result<poissonlab_core::BigRational, LabError> {
    parse_rational(&lit.text()).map_err(|e| field_error(path, e))
}

impl ModelSpec {
    pub fn build(&self) -> Result<(MeasureModel, GaussMixingAssumption), LabError> {
        let gauss = GaussMixingAssumption::default();
        let model = match self {
            ModelSpec::Iid { probs } => {
                let p = probs
                    .iter()
                    .enumerate()
                    .map(|(i, lit)| rational(&format!("model.probs[{i}]"), lit))
                    .collect::<Result<_, _>>()?;
                MeasureModel::iid(p).map_err(|e| field_error("model.probs", e))?
            }
            ModelSpec::Geometric { ratio } => {
                MeasureModel::geometric(rational("model.ratio", ratio)?).map_err(|e| field_error("model.ratio", e))?
            }
            ModelSpec::Markov { transition } => {
                let mut rows = Vec::with_capacity(transition.len());
                for (a, row) in transition.iter().enumerate() {
                    rows.push(
                        row.iter()
                            .enumerate()
                            .map(|(b, lit)| rational(&format!("model.transition[{a}][{b}]"), lit))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                MeasureModel::markov(rows).map_err(|e| field_error("model.transition", e))?
            }
            ModelSpec::GaussCf { t, sigma } => {
                let g = GaussMixingAssumption { t: t.unwrap_or(gauss.t), sigma: sigma.unwrap_or(gauss.sigma) };
                return Ok((MeasureModel::gauss_cf(), g));
            }
        };
        Ok((model, gauss))
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| LabError::Config {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Io { path: path.display().to_string(), source: e })?;
        Self::parse(&text)
    }

    fn sets(&self) -> Result<Vec<IntervalUnion>, LabError> {
        let mut out = Vec::with_capacity(self.sets.len());
        for (i, set) in self.sets.iter().enumerate() {
            let mut ivs = Vec::with_capacity(set.len());
            for (j, iv) in set.iter().enumerate() {
                let base = format!("sets[{i}][{j}]");
                ivs.push(Interval::new(
                    rational(&format!("{base}.lo"), &iv.lo)?,
                    rational(&format!("{base}.hi"), &iv.hi)?,
                    iv.lo_closed,
                    iv.hi_closed,
                ));
            }
            out.push(make_interval_union(ivs).map_err(|e| field_error(&format!("sets[{i}]"), e))?);
        }
        Ok(out)
    }

    /// Validated experiment config; `seed` overrides the document's seed.
    pub fn to_experiment(&self, seed: Option<u64>) -> Result<ExperimentConfig, LabError> {
        let (model, gauss) = self.model.build()?;
        let mode = match self.mode {
            ModeSpec::Annealed => Mode::Annealed,
            ModeSpec::Quenched => Mode::Quenched,
            ModeSpec::Oracle => Mode::Oracle,
            ModeSpec::Concentration => Mode::Concentration,
            ModeSpec::Mixing => Mode::Mixing,
        };
        if self.sets.is_empty() && mode != Mode::Mixing {
            return Err(field_error("sets", "at least one test set is required"));
        }
        let mut cfg = ExperimentConfig::new(model, self.k, self.sets()?, mode);
        cfg.gauss = gauss;
        cfg.n_samples = self.n_samples;
        cfg.n_x_replicas = self.n_x_replicas;
        cfg.n_cap = self.n_cap;
        cfg.seed = seed.unwrap_or(self.seed);
        cfg.strict = self.strict;
        cfg.tv_tolerance = self.tolerances.tv;
        cfg.replica_pass_fraction = self.tolerances.replica_pass_fraction;
        cfg.t_grid = self.concentration.t_grid.clone();
        cfg.functional = match self.concentration.functional {
            None | Some(FunctionalSpec::Mean) => Functional::Mean,
            Some(FunctionalSpec::Void(j)) => Functional::Void(j),
        };
        if let Some(n) = self.concentration.n_word_samples {
            cfg.n_word_samples = n;
        }
        if let Some(t) = &self.mixing.truncations {
            cfg.delta_truncations = t.clone();
        }
        cfg.assumed_t_sigma = self.mixing.assumed_t_sigma;
        cfg.validate().map_err(|e| match e {
            poissonlab_core::Error::InsufficientData { .. } => field_error("n_samples", e),
            poissonlab_core::Error::Domain(ref m) if m.contains("n_cap") => field_error("n_cap", e),
            poissonlab_core::Error::Domain(ref m) if m.contains("replica") => field_error("n_x_replicas", e),
            poissonlab_core::Error::Domain(ref m) if m.contains("k must") => field_error("k", e),
            other => LabError::Core(other),
        })?;
        Ok(cfg)
    }

    /// Mode as the CLI subcommand name.
    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            ModeSpec::Annealed => "annealed",
            ModeSpec::Quenched => "quenched",
            ModeSpec::Oracle => "oracle",
            ModeSpec::Concentration => "concentration",
            ModeSpec::Mixing => "mixing",
        }
    }
}

//! Experiment configuration, read from a TOML key-value file.

use std::path::Path;

use fec_core::product::Rule;
use fec_core::staircase::StairRule;
use fec_core::{CodeSpec, PyndiahCoefficients};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Product,
    Staircase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// Iteration-independent gamma rule.
    Proposed,
    /// Chase-Pyndiah with per-half-iteration alpha/beta and normalization.
    Pyndiah,
    /// Full list sums, constant alpha/beta, no normalization.
    PyndiahLike,
}

fn default_m() -> u32 {
    8
}
fn default_t() -> usize {
    2
}
fn default_p() -> usize {
    5
}
fn default_iterations() -> usize {
    4
}
fn default_window() -> usize {
    8
}
fn default_warmup() -> u64 {
    20
}
fn default_counted_blocks() -> u64 {
    200
}
fn default_min_errors() -> u64 {
    100
}
fn default_max_bits() -> u64 {
    1_000_000_000
}
fn default_batch() -> u64 {
    8
}
fn default_seed() -> u64 {
    1
}

/// Everything needed to run a sweep. Field names are the keys of the
/// configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    /// Extension degree of the constituent code (n = 2^m).
    #[serde(default = "default_m")]
    pub m: u32,
    /// Designed error-correction radius of the constituent code.
    #[serde(default = "default_t")]
    pub t: usize,
    pub rule: RuleKind,
    /// Gamma of the proposed rule; defaults to 2^-17.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Alternative to `gamma`: its base-2 logarithm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_log2: Option<f64>,
    /// Alpha schedule (one value per half-iteration, or one value for all).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    /// Number of least reliable positions flipped by Chase-II.
    #[serde(default = "default_p")]
    pub p: usize,
    /// Full iterations of product decoding.
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    /// Staircase window size in blocks.
    #[serde(default = "default_window")]
    pub window: usize,
    /// Staircase blocks decided before error counting starts.
    #[serde(default = "default_warmup")]
    pub warmup_blocks: u64,
    /// Counted staircase blocks per chain.
    #[serde(default = "default_counted_blocks")]
    pub counted_blocks: u64,
    /// Eb/N0 points in dB.
    pub ebn0_db: Vec<f64>,
    #[serde(default = "default_min_errors")]
    pub min_bit_errors: u64,
    #[serde(default = "default_max_bits")]
    pub max_bits: u64,
    /// Trials (frames or chains) per stopping-rule check.
    #[serde(default = "default_batch")]
    pub batch: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
}

/// Weighting coefficient used when the configuration does not set one.
pub const DEFAULT_GAMMA: f64 = 1.0 / 131_072.0;
/// Staircase baseline weights.
pub const DEFAULT_LIKE_ALPHA: f64 = 0.4;
pub const DEFAULT_LIKE_BETA: f64 = 3.6;

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn gamma_value(&self) -> f64 {
        match (self.gamma, self.gamma_log2) {
            (Some(g), _) => g,
            (None, Some(e)) => 2f64.powf(e),
            (None, None) => DEFAULT_GAMMA,
        }
    }

    pub fn half_iterations(&self) -> usize {
        2 * self.iterations
    }

    pub fn code(&self) -> Result<CodeSpec, HarnessError> {
        CodeSpec::new(self.m, self.t).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Overall code rate used for the Eb/N0 conversion.
    pub fn rate(&self, spec: &CodeSpec) -> f64 {
        match self.scheme {
            Scheme::Product => (spec.k() * spec.k()) as f64 / (spec.n() * spec.n()) as f64,
            Scheme::Staircase => fec_core::staircase::staircase_rate(spec),
        }
    }

    fn schedule(&self, values: &Option<Vec<f64>>, default: impl Fn(usize) -> Vec<f64>) -> Vec<f64> {
        let len = self.half_iterations().max(1);
        match values {
            None => default(len),
            Some(v) if v.len() == 1 => vec![v[0]; len],
            Some(v) => v.clone(),
        }
    }

    fn coefficients(&self) -> PyndiahCoefficients {
        match self.rule {
            RuleKind::PyndiahLike => PyndiahCoefficients {
                alpha: self.schedule(&self.alpha, |n| vec![DEFAULT_LIKE_ALPHA; n]),
                beta: self.schedule(&self.beta, |n| vec![DEFAULT_LIKE_BETA; n]),
            },
            _ => {
                let classic = PyndiahCoefficients::classic(self.half_iterations());
                PyndiahCoefficients {
                    alpha: self.schedule(&self.alpha, |_| classic.alpha.clone()),
                    beta: self.schedule(&self.beta, |_| classic.beta.clone()),
                }
            }
        }
    }

    pub fn product_rule(&self) -> Rule {
        match self.rule {
            RuleKind::Proposed => Rule::Proposed {
                gamma: self.gamma_value(),
            },
            RuleKind::Pyndiah => Rule::Pyndiah(self.coefficients()),
            RuleKind::PyndiahLike => Rule::PyndiahLike(self.coefficients()),
        }
    }

    pub fn stair_rule(&self) -> Result<StairRule, HarnessError> {
        match self.rule {
            RuleKind::Proposed => Ok(StairRule::Proposed {
                gamma: self.gamma_value(),
            }),
            RuleKind::PyndiahLike => {
                let c = self.coefficients();
                Ok(StairRule::PyndiahLike {
                    alpha: c.alpha[0],
                    beta: c.beta[0],
                })
            }
            RuleKind::Pyndiah => Err(HarnessError::Config(
                "the normalized Chase-Pyndiah rule is defined for product codes only; use pyndiah_like".into(),
            )),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.ebn0_db.is_empty() {
            return bad("ebn0_db sweep list is empty".into());
        }
        if self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return bad("ebn0_db values must be finite".into());
        }
        let spec = self.code()?;
        if self.rule == RuleKind::Proposed {
            let g = self.gamma_value();
            if !(g > 0.0 && g.is_finite()) {
                return bad(format!("gamma must be positive, got {g}"));
            }
        }
        if self.p >= 32 || self.p > spec.n() {
            return bad(format!("p = {} is out of range", self.p));
        }
        if self.batch == 0 {
            return bad("batch must be at least 1".into());
        }
        if self.max_bits == 0 {
            return bad("max_bits must be positive".into());
        }
        match self.scheme {
            Scheme::Product => {
                if self.iterations == 0 {
                    return bad("iterations must be at least 1".into());
                }
                self.product_rule()
                    .validate(self.half_iterations())
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
            }
            Scheme::Staircase => {
                if self.window < 2 {
                    return bad(format!("window must be at least 2, got {}", self.window));
                }
                if self.counted_blocks == 0 {
                    return bad("counted_blocks must be at least 1".into());
                }
                fec_core::staircase::info_bits_per_block(&spec).map_err(|e| HarnessError::Config(e.to_string()))?;
                self.stair_rule()?
                    .validate()
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRODUCT: &str = r#"
scheme = "product"
rule = "proposed"
ebn0_db = [3.5, 3.6]
"#;

    #[test]
    fn defaults_follow_the_reference_setup() {
        let cfg = ExperimentConfig::from_toml_str(PRODUCT).unwrap();
        cfg.validate().unwrap();
        assert_eq!((cfg.m, cfg.t, cfg.p, cfg.iterations), (8, 2, 5, 4));
        assert_eq!(cfg.gamma_value(), 2f64.powi(-17));
        assert_eq!(cfg.window, 8);
        assert_eq!(cfg.warmup_blocks, 20);
        assert_eq!(cfg.min_bit_errors, 100);
        assert_eq!(cfg.max_bits, 1_000_000_000);
        let spec = cfg.code().unwrap();
        assert!((cfg.rate(&spec) - 0.8716).abs() < 1e-4);
    }

    #[test]
    fn empty_sweep_rejected() {
        let cfg = ExperimentConfig::from_toml_str("scheme = \"product\"\nrule = \"proposed\"\nebn0_db = []\n").unwrap();
        assert!(matches!(cfg.validate(), Err(HarnessError::Config(_))));
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        assert!(ExperimentConfig::from_toml_str(&format!("{PRODUCT}\nbogus = 1\n")).is_err());
        let cfg = ExperimentConfig::from_toml_str(&format!("{PRODUCT}\ngamma = -1.0\n")).unwrap();
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig::from_toml_str(
            "scheme = \"staircase\"\nrule = \"proposed\"\nwindow = 1\nebn0_db = [3.5]\n",
        )
        .unwrap();
        assert!(cfg.validate().is_err());
        let cfg =
            ExperimentConfig::from_toml_str("scheme = \"staircase\"\nrule = \"pyndiah\"\nebn0_db = [3.5]\n").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn coefficient_defaults() {
        let cfg = ExperimentConfig::from_toml_str("scheme = \"staircase\"\nrule = \"pyndiah_like\"\nebn0_db = [3.5]\n")
            .unwrap();
        assert_eq!(
            cfg.stair_rule().unwrap(),
            StairRule::PyndiahLike { alpha: 0.4, beta: 3.6 }
        );
        let cfg =
            ExperimentConfig::from_toml_str("scheme = \"product\"\nrule = \"pyndiah\"\nebn0_db = [3.5]\n").unwrap();
        match cfg.product_rule() {
            Rule::Pyndiah(c) => assert_eq!(c, PyndiahCoefficients::classic(8)),
            other => panic!("{other:?}"),
        }
        let cfg = ExperimentConfig::from_toml_str(&format!("{PRODUCT}\ngamma_log2 = -10\n")).unwrap();
        assert_eq!(cfg.gamma_value(), 2f64.powi(-10));
    }

    #[test]
    fn toml_roundtrip() {
        let cfg = ExperimentConfig::from_toml_str(PRODUCT).unwrap();
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(cfg, back);
    }
}

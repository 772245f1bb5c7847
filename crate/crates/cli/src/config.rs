//! Experiment configuration: a single JSON object per run.
//!
//! ```json
//! { "experiment": "verifier", "seed": 7, "trials": 100000,
//!   "params": { "m_max": 8, "epsilon": 0.7853981633974483 } }
//! ```
//!
//! Unknown keys are rejected and every parameter is range-checked before
//! any sampling starts. Diagnostics carry the line of the offending key.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use clap::ValueEnum;
use qmclab_core::estimate::{Strategy, MAX_BISECTION_DEPTH};
use qmclab_core::fock::{poisson_tail, MAX_LEAKAGE};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::value::RawValue;

/// Per-run ceiling on copies for parameters that size a single estimate.
pub const MAX_COPIES_PER_ESTIMATE: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TomographyScaling,
    Bisection,
    MleScaling,
    UncertaintyCurve,
    Verifier,
    CloneFidelity,
    CloneTomography,
    Wigner,
    NumberPhase,
    ComplexityProfile,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::TomographyScaling,
        Experiment::Bisection,
        Experiment::MleScaling,
        Experiment::UncertaintyCurve,
        Experiment::Verifier,
        Experiment::CloneFidelity,
        Experiment::CloneTomography,
        Experiment::Wigner,
        Experiment::NumberPhase,
        Experiment::ComplexityProfile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::TomographyScaling => "tomography-scaling",
            Experiment::Bisection => "bisection",
            Experiment::MleScaling => "mle-scaling",
            Experiment::UncertaintyCurve => "uncertainty-curve",
            Experiment::Verifier => "verifier",
            Experiment::CloneFidelity => "clone-fidelity",
            Experiment::CloneTomography => "clone-tomography",
            Experiment::Wigner => "wigner",
            Experiment::NumberPhase => "number-phase",
            Experiment::ComplexityProfile => "complexity-profile",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Trials used when neither the config nor the command line sets them.
    pub fn default_trials(self) -> u64 {
        match self {
            Experiment::TomographyScaling => 200,
            Experiment::Bisection => 10_000,
            Experiment::MleScaling => 500,
            Experiment::Verifier => 100_000,
            Experiment::CloneFidelity => 1_000,
            Experiment::CloneTomography => 100,
            Experiment::ComplexityProfile => 51,
            Experiment::UncertaintyCurve | Experiment::Wigner | Experiment::NumberPhase => 1,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Invalid configuration, with the 1-based line it refers to when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config error at line {line}: {}", self.message),
            None => write!(f, "config error: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A failed range check on the named parameter.
#[derive(Debug)]
pub struct Invalid {
    pub key: &'static str,
    pub message: String,
}

fn invalid(key: &'static str, message: impl Into<String>) -> Invalid {
    Invalid {
        key,
        message: message.into(),
    }
}

fn check_counts(key: &'static str, values: &[u64], min: u64) -> Result<(), Invalid> {
    if values.is_empty() {
        return Err(invalid(key, "must not be empty"));
    }
    if let Some(v) = values.iter().find(|&&v| v < min || v > MAX_COPIES_PER_ESTIMATE) {
        return Err(invalid(
            key,
            format!("{v} is outside {min}..={MAX_COPIES_PER_ESTIMATE}"),
        ));
    }
    Ok(())
}

fn check_finite(key: &'static str, v: f64) -> Result<(), Invalid> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, "must be finite"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TomographyParams {
    /// Shots per Pauli axis.
    pub m_values: Vec<u64>,
    /// Bloch vector of the source; the default is `I/2`.
    pub bloch: [f64; 3],
}

impl Default for TomographyParams {
    fn default() -> Self {
        TomographyParams {
            m_values: vec![100, 1_000, 10_000],
            bloch: [0.0; 3],
        }
    }
}

impl TomographyParams {
    fn validate(&self) -> Result<(), Invalid> {
        check_counts("m_values", &self.m_values, 1)?;
        self.bloch.iter().try_for_each(|&v| check_finite("bloch", v))?;
        if self.bloch.iter().map(|v| v * v).sum::<f64>() > 1.0 + 1e-9 {
            return Err(invalid("bloch", "Bloch vector lies outside the unit ball"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BisectionParams {
    /// Every depth `1..=m_max` is searched for each angle.
    pub m_max: u32,
}

impl Default for BisectionParams {
    fn default() -> Self {
        BisectionParams { m_max: 20 }
    }
}

impl BisectionParams {
    fn validate(&self) -> Result<(), Invalid> {
        if !(1..=MAX_BISECTION_DEPTH).contains(&self.m_max) {
            return Err(invalid("m_max", format!("must be in 1..={MAX_BISECTION_DEPTH}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MleParams {
    /// Photons per estimate.
    pub n_values: Vec<u64>,
}

impl Default for MleParams {
    fn default() -> Self {
        MleParams {
            n_values: vec![16, 64, 256, 1_024, 4_096, 16_384],
        }
    }
}

impl MleParams {
    fn validate(&self) -> Result<(), Invalid> {
        check_counts("n_values", &self.n_values, 2)?;
        if self.n_values.len() < 2 {
            return Err(invalid("n_values", "need at least two sizes to fit a slope"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UncertaintyCurveParams {
    pub m_max: u32,
}

impl Default for UncertaintyCurveParams {
    fn default() -> Self {
        UncertaintyCurveParams { m_max: 20 }
    }
}

impl UncertaintyCurveParams {
    fn validate(&self) -> Result<(), Invalid> {
        if !(1..=MAX_BISECTION_DEPTH).contains(&self.m_max) {
            return Err(invalid("m_max", format!("must be in 1..={MAX_BISECTION_DEPTH}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum VerifierMode {
    #[default]
    Batch,
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifierParams {
    pub m_min: u32,
    pub m_max: u32,
    /// Offset of the false claim from the true angle.
    pub epsilon: f64,
    pub mode: VerifierMode,
}

impl Default for VerifierParams {
    fn default() -> Self {
        VerifierParams {
            m_min: 1,
            m_max: 8,
            epsilon: FRAC_PI_4,
            mode: VerifierMode::Batch,
        }
    }
}

impl VerifierParams {
    fn validate(&self) -> Result<(), Invalid> {
        if self.m_min == 0 {
            return Err(invalid("m_min", "must be at least 1"));
        }
        if self.m_max < self.m_min || self.m_max > 64 {
            return Err(invalid("m_max", "must be in m_min..=64"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= FRAC_PI_2) {
            return Err(invalid("epsilon", "must be in (0, π/2]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CloneFidelityParams {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CloneTomographyParams {
    /// Tomography shots per axis, taken from `3m` clones of one original.
    pub m_values: Vec<u64>,
}

impl Default for CloneTomographyParams {
    fn default() -> Self {
        CloneTomographyParams {
            m_values: vec![100, 1_000, 10_000],
        }
    }
}

impl CloneTomographyParams {
    fn validate(&self) -> Result<(), Invalid> {
        check_counts("m_values", &self.m_values, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerParams {
    /// `[Re α0, Im α0]`.
    pub alpha: [f64; 2],
    pub n_per_angle: u64,
    pub theta_bins: usize,
    pub x_bins: usize,
    pub cutoff: f64,
    pub grid_step: f64,
}

impl Default for WignerParams {
    fn default() -> Self {
        WignerParams {
            alpha: [0.0, 0.0],
            n_per_angle: 10_000,
            theta_bins: 180,
            x_bins: qmclab_core::wigner::DEFAULT_X_BINS,
            cutoff: qmclab_core::wigner::DEFAULT_CUTOFF,
            grid_step: 0.2,
        }
    }
}

impl WignerParams {
    fn validate(&self) -> Result<(), Invalid> {
        self.alpha.iter().try_for_each(|&v| check_finite("alpha", v))?;
        if self.alpha[0].hypot(self.alpha[1]) > 10.0 {
            return Err(invalid("alpha", "|alpha| must be at most 10"));
        }
        if self.n_per_angle == 0 || self.n_per_angle > MAX_COPIES_PER_ESTIMATE {
            return Err(invalid(
                "n_per_angle",
                format!("must be in 1..={MAX_COPIES_PER_ESTIMATE}"),
            ));
        }
        if !(1..=3600).contains(&self.theta_bins) {
            return Err(invalid("theta_bins", "must be in 1..=3600"));
        }
        if !(1..=100_000).contains(&self.x_bins) {
            return Err(invalid("x_bins", "must be in 1..=100000"));
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(invalid("cutoff", "must be positive"));
        }
        if !(self.grid_step.is_finite() && self.grid_step >= 1e-3) {
            return Err(invalid("grid_step", "must be at least 0.001"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumberPhaseParams {
    /// Real coherent amplitudes.
    pub alphas: Vec<f64>,
    /// Fock truncation.
    pub dim: usize,
}

impl Default for NumberPhaseParams {
    fn default() -> Self {
        NumberPhaseParams {
            alphas: vec![1.0, 2.0, 4.0, 5.0],
            dim: 256,
        }
    }
}

impl NumberPhaseParams {
    fn validate(&self) -> Result<(), Invalid> {
        if !(2..=4096).contains(&self.dim) {
            return Err(invalid("dim", "must be in 2..=4096"));
        }
        if self.alphas.is_empty() {
            return Err(invalid("alphas", "must not be empty"));
        }
        for &a in &self.alphas {
            check_finite("alphas", a)?;
            let leakage = poisson_tail(a * a, self.dim);
            if leakage >= MAX_LEAKAGE {
                return Err(invalid(
                    "alphas",
                    format!("alpha = {a} leaks {leakage:.3e} beyond dim = {}", self.dim),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComplexityProfileParams {
    /// Any of `bisection`, `mle`, `tomography`, `exact_oracle`,
    /// `probabilistic_oracle`.
    pub strategies: Vec<String>,
    /// Noise of the probabilistic oracle.
    pub sigma: f64,
    /// Accuracy targets in radians, strictly decreasing.
    pub targets: Vec<f64>,
}

impl Default for ComplexityProfileParams {
    fn default() -> Self {
        ComplexityProfileParams {
            strategies: ["bisection", "mle", "tomography", "exact_oracle", "probabilistic_oracle"]
                .map(String::from)
                .to_vec(),
            sigma: 0.1,
            targets: vec![0.1, 0.03, 0.01, 0.003],
        }
    }
}

impl ComplexityProfileParams {
    pub fn resolved_strategies(&self) -> Result<Vec<Strategy>, Invalid> {
        self.strategies
            .iter()
            .map(|name| match name.as_str() {
                "bisection" => Ok(Strategy::Bisection),
                "mle" => Ok(Strategy::Mle),
                "tomography" => Ok(Strategy::Tomography),
                "exact_oracle" => Ok(Strategy::ExactOracle),
                "probabilistic_oracle" => Ok(Strategy::ProbabilisticOracle { sigma: self.sigma }),
                other => Err(invalid("strategies", format!("unknown strategy {other:?}"))),
            })
            .collect()
    }

    fn validate(&self) -> Result<(), Invalid> {
        if self.strategies.is_empty() {
            return Err(invalid("strategies", "must not be empty"));
        }
        self.resolved_strategies()?;
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(invalid("sigma", "must be non-negative"));
        }
        if self.targets.is_empty() || self.targets.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(invalid("targets", "must be a non-empty list of positive values"));
        }
        if self.targets.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("targets", "must be strictly decreasing"));
        }
        Ok(())
    }
}

/// Experiment-specific parameter table.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    TomographyScaling(TomographyParams),
    Bisection(BisectionParams),
    MleScaling(MleParams),
    UncertaintyCurve(UncertaintyCurveParams),
    Verifier(VerifierParams),
    CloneFidelity(CloneFidelityParams),
    CloneTomography(CloneTomographyParams),
    Wigner(WignerParams),
    NumberPhase(NumberPhaseParams),
    ComplexityProfile(ComplexityProfileParams),
}

impl Params {
    pub fn defaults(experiment: Experiment) -> Self {
        match experiment {
            Experiment::TomographyScaling => Params::TomographyScaling(Default::default()),
            Experiment::Bisection => Params::Bisection(Default::default()),
            Experiment::MleScaling => Params::MleScaling(Default::default()),
            Experiment::UncertaintyCurve => Params::UncertaintyCurve(Default::default()),
            Experiment::Verifier => Params::Verifier(Default::default()),
            Experiment::CloneFidelity => Params::CloneFidelity(Default::default()),
            Experiment::CloneTomography => Params::CloneTomography(Default::default()),
            Experiment::Wigner => Params::Wigner(Default::default()),
            Experiment::NumberPhase => Params::NumberPhase(Default::default()),
            Experiment::ComplexityProfile => Params::ComplexityProfile(Default::default()),
        }
    }

    fn parse(experiment: Experiment, json: &str) -> serde_json::Result<Self> {
        fn de<T: DeserializeOwned>(json: &str) -> serde_json::Result<T> {
            serde_json::from_str(json)
        }
        Ok(match experiment {
            Experiment::TomographyScaling => Params::TomographyScaling(de(json)?),
            Experiment::Bisection => Params::Bisection(de(json)?),
            Experiment::MleScaling => Params::MleScaling(de(json)?),
            Experiment::UncertaintyCurve => Params::UncertaintyCurve(de(json)?),
            Experiment::Verifier => Params::Verifier(de(json)?),
            Experiment::CloneFidelity => Params::CloneFidelity(de(json)?),
            Experiment::CloneTomography => Params::CloneTomography(de(json)?),
            Experiment::Wigner => Params::Wigner(de(json)?),
            Experiment::NumberPhase => Params::NumberPhase(de(json)?),
            Experiment::ComplexityProfile => Params::ComplexityProfile(de(json)?),
        })
    }

    pub fn experiment(&self) -> Experiment {
        match self {
            Params::TomographyScaling(_) => Experiment::TomographyScaling,
            Params::Bisection(_) => Experiment::Bisection,
            Params::MleScaling(_) => Experiment::MleScaling,
            Params::UncertaintyCurve(_) => Experiment::UncertaintyCurve,
            Params::Verifier(_) => Experiment::Verifier,
            Params::CloneFidelity(_) => Experiment::CloneFidelity,
            Params::CloneTomography(_) => Experiment::CloneTomography,
            Params::Wigner(_) => Experiment::Wigner,
            Params::NumberPhase(_) => Experiment::NumberPhase,
            Params::ComplexityProfile(_) => Experiment::ComplexityProfile,
        }
    }

    pub fn validate(&self) -> Result<(), Invalid> {
        match self {
            Params::TomographyScaling(p) => p.validate(),
            Params::Bisection(p) => p.validate(),
            Params::MleScaling(p) => p.validate(),
            Params::UncertaintyCurve(p) => p.validate(),
            Params::Verifier(p) => p.validate(),
            Params::CloneFidelity(_) => Ok(()),
            Params::CloneTomography(p) => p.validate(),
            Params::Wigner(p) => p.validate(),
            Params::NumberPhase(p) => p.validate(),
            Params::ComplexityProfile(p) => p.validate(),
        }
    }
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub trials: u64,
    pub params: Params,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig<'a> {
    experiment: Option<String>,
    seed: Option<u64>,
    trials: Option<u64>,
    #[serde(borrow)]
    params: Option<&'a RawValue>,
}

/// Default seed when the config does not set one.
pub const DEFAULT_SEED: u64 = 1;

fn line_at(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

fn key_line(source: &str, key: &str) -> Option<usize> {
    source.find(&format!("\"{key}\"")).map(|pos| line_at(source, pos))
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: DEFAULT_SEED,
            trials: experiment.default_trials(),
            params: Params::defaults(experiment),
        }
    }

    /// Parses and validates a JSON config for `experiment`.
    pub fn parse(source: &str, experiment: Experiment) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            serde_json::from_str(source).map_err(|e| ConfigError::new(Some(e.line()), strip_position(&e)))?;
        if let Some(name) = &raw.experiment {
            match Experiment::from_name(name) {
                None => {
                    return Err(ConfigError::new(
                        key_line(source, "experiment"),
                        format!("unknown experiment {name:?}"),
                    ))
                }
                Some(e) if e != experiment => {
                    return Err(ConfigError::new(
                        key_line(source, "experiment"),
                        format!("config is for {e}, but {experiment} was requested"),
                    ))
                }
                Some(_) => {}
            }
        }
        let params = match raw.params {
            None => Params::defaults(experiment),
            Some(value) => {
                let text = value.get();
                // the raw value borrows from `source`, so its address gives its offset
                let offset = text.as_ptr() as usize - source.as_ptr() as usize;
                let first_line = line_at(source, offset);
                Params::parse(experiment, text)
                    .map_err(|e| ConfigError::new(Some(first_line + e.line() - 1), strip_position(&e)))?
            }
        };
        let config = ExperimentConfig {
            experiment,
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
            trials: raw.trials.unwrap_or(experiment.default_trials()),
            params,
        };
        if config.trials == 0 {
            return Err(ConfigError::new(
                key_line(source, "trials"),
                "trials must be at least 1",
            ));
        }
        config.params.validate().map_err(|bad| {
            let line = source
                .find("\"params\"")
                .and_then(|start| key_line(&source[start..], bad.key).map(|l| l + line_at(source, start) - 1));
            ConfigError::new(line, format!("params.{}: {}", bad.key, bad.message))
        })?;
        Ok(config)
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, seed: Option<u64>, trials: Option<u64>) -> Result<Self, ConfigError> {
        if let Some(seed) = seed {
            self.seed = seed;
        }
        if let Some(trials) = trials {
            if trials == 0 {
                return Err(ConfigError::new(None, "--trials must be at least 1"));
            }
            self.trials = trials;
        }
        Ok(self)
    }

    /// Canonical JSON used for the config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(pos) => text[..pos].to_string(),
        None => text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(Experiment::from_name(e.name()), Some(e));
            assert_eq!(serde_json::to_string(&e).unwrap(), format!("\"{}\"", e.name()));
        }
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let c = ExperimentConfig::parse("{}", Experiment::Verifier).unwrap();
        assert_eq!(c, ExperimentConfig::defaults(Experiment::Verifier));
    }

    #[test]
    fn unknown_top_level_key_has_line() {
        let src = "{\n  \"seed\": 3,\n  \"colour\": 1\n}";
        let err = ExperimentConfig::parse(src, Experiment::Bisection).unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.message.contains("colour"));
    }

    #[test]
    fn unknown_param_key_has_absolute_line() {
        let src = "{\n  \"seed\": 3,\n  \"params\": {\n    \"m_max\": 4,\n    \"depth\": 2\n  }\n}";
        let err = ExperimentConfig::parse(src, Experiment::Bisection).unwrap_err();
        assert_eq!(err.line, Some(5), "{err}");
        assert!(err.message.contains("depth"));
    }

    #[test]
    fn range_error_points_at_key() {
        let src = "{\n  \"params\": {\n    \"m_min\": 1,\n    \"epsilon\": 2.0\n  }\n}";
        let err = ExperimentConfig::parse(src, Experiment::Verifier).unwrap_err();
        assert_eq!(err.line, Some(4));
        assert!(err.message.contains("params.epsilon"));
    }

    #[test]
    fn mismatched_experiment() {
        let err = ExperimentConfig::parse("{\"experiment\": \"wigner\"}", Experiment::Verifier).unwrap_err();
        assert_eq!(err.line, Some(1));
        assert!(ExperimentConfig::parse("{\"experiment\": \"nope\"}", Experiment::Verifier).is_err());
        assert!(ExperimentConfig::parse("{\"experiment\": \"verifier\"}", Experiment::Verifier).is_ok());
    }

    #[test]
    fn truncation_checked_before_sampling() {
        let src = r#"{"params": {"alphas": [4.0], "dim": 20}}"#;
        let err = ExperimentConfig::parse(src, Experiment::NumberPhase).unwrap_err();
        assert!(err.message.contains("leaks"));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(ExperimentConfig::parse(r#"{"trials": 0}"#, Experiment::MleScaling).is_err());
        let c = ExperimentConfig::defaults(Experiment::MleScaling);
        assert!(c.clone().with_overrides(None, Some(0)).is_err());
        assert_eq!(c.with_overrides(Some(9), Some(3)).unwrap().seed, 9);
    }

    #[test]
    fn profile_targets_must_decrease() {
        let src = r#"{"params": {"targets": [0.01, 0.1]}}"#;
        assert!(ExperimentConfig::parse(src, Experiment::ComplexityProfile).is_err());
        let src = r#"{"params": {"strategies": ["guess"]}}"#;
        assert!(ExperimentConfig::parse(src, Experiment::ComplexityProfile).is_err());
    }

    #[test]
    fn malformed_json() {
        let err = ExperimentConfig::parse("{\n \"seed\": ,\n}", Experiment::Verifier).unwrap_err();
        assert_eq!(err.line, Some(2));
    }
}

//! Experiment configuration: a flat TOML document with CLI overrides.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scenario::BasisKind;

/// Which experiment the harness runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Spectral density of the designed waveform, with and without
    /// sensing uncertainty.
    Psd,
    /// Z-plane zeros of the designed waveform for the two extreme cases.
    Zplane,
    /// Closed-form matched-filter energy loss over a (ρ_T, ρ_R) grid.
    LossGrid,
    /// Waveform-book detection probability as uncertainty varies.
    DetectProb,
    /// Receiver identification ROC over Ep/N0, Q and P_FA.
    RocRx,
    /// Receiver miss-detection probability versus Ep/N0.
    PmdVsSnr,
    /// Complementary ROC of the noncooperative concurrence scheme.
    CrocNoncoop,
    /// Complementary ROC of the cooperative concurrence scheme.
    CrocCoop,
    /// Average correctly-identified DoF count at the transmitter.
    DofCountTx,
    /// Normalized chordal consensus distance for both schemes.
    Chordal,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Psd,
        Experiment::Zplane,
        Experiment::LossGrid,
        Experiment::DetectProb,
        Experiment::RocRx,
        Experiment::PmdVsSnr,
        Experiment::CrocNoncoop,
        Experiment::CrocCoop,
        Experiment::DofCountTx,
        Experiment::Chordal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Psd => "psd",
            Experiment::Zplane => "zplane",
            Experiment::LossGrid => "loss_grid",
            Experiment::DetectProb => "detect_prob",
            Experiment::RocRx => "roc_rx",
            Experiment::PmdVsSnr => "pmd_vs_snr",
            Experiment::CrocNoncoop => "croc_noncoop",
            Experiment::CrocCoop => "croc_coop",
            Experiment::DofCountTx => "dof_count_tx",
            Experiment::Chordal => "chordal",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Experiment::Psd => "PSD of the designed waveform (nulls on occupied carriers)",
            Experiment::Zplane => "z-plane zeros of the designed waveform",
            Experiment::LossGrid => "matched-filter energy loss grid in dB",
            Experiment::DetectProb => "waveform detection probability vs SNR degradation",
            Experiment::RocRx => "receiver identification ROC",
            Experiment::PmdVsSnr => "receiver miss-detection vs Ep/N0",
            Experiment::CrocNoncoop => "complementary ROC, noncooperative concurrence",
            Experiment::CrocCoop => "complementary ROC, cooperative concurrence",
            Experiment::DofCountTx => "identified-DoF count at the transmitter",
            Experiment::Chordal => "normalized chordal consensus distance",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .iter()
            .find(|e| e.name() == s)
            .copied()
            .ok_or_else(|| {
                Error::ConfigInvalid(format!(
                    "unknown experiment '{s}'; run with --list to see the choices"
                ))
            })
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn default_n() -> usize {
    64
}
fn default_d() -> usize {
    24
}
fn default_k0() -> usize {
    40
}
fn default_kappa() -> usize {
    12
}
fn default_basis() -> String {
    "fourier".into()
}
fn default_ep_list() -> Vec<f64> {
    vec![0.0, 10.0, 20.0]
}
fn default_q_list() -> Vec<usize> {
    vec![1, 10, 100]
}
fn default_p_fa_list() -> Vec<f64> {
    vec![0.1, 0.01]
}
fn default_inr() -> f64 {
    1.0
}
fn default_gain() -> f64 {
    1.0
}
fn default_tx_power() -> f64 {
    1.0
}
fn default_noise() -> f64 {
    1.0
}
fn default_trials() -> usize {
    1000
}
fn default_seed() -> u64 {
    1
}
fn default_out() -> String {
    "nullcast.csv".into()
}

/// Declarative sweep description. Field names double as the TOML keys.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name; the CLI positional argument takes precedence.
    #[serde(default)]
    pub experiment: Option<String>,
    /// Ambient dimension N.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Occupied DoF for the single-node experiments (psd, zplane).
    #[serde(default = "default_d")]
    pub d: usize,
    /// Effective shared dimension K₀ for the pairwise experiments.
    #[serde(default = "default_k0")]
    pub k0: usize,
    #[serde(default = "default_kappa")]
    pub kappa_t: usize,
    #[serde(default = "default_kappa")]
    pub kappa_r: usize,
    /// Interfered receiver-excess dimensions.
    #[serde(default)]
    pub eps_r: usize,
    /// Basis family: "fourier", "canonical" or "random".
    #[serde(default = "default_basis")]
    pub basis: String,
    #[serde(default = "default_ep_list")]
    pub ep_over_n0_db: Vec<f64>,
    #[serde(default = "default_q_list")]
    pub q_list: Vec<usize>,
    #[serde(default = "default_p_fa_list")]
    pub p_fa_list: Vec<f64>,
    #[serde(default = "default_inr")]
    pub inr_bar: f64,
    #[serde(default = "default_gain")]
    pub gain: f64,
    #[serde(default = "default_tx_power")]
    pub tx_power: f64,
    #[serde(default = "default_noise")]
    pub noise_density: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Aggregate CSV destination.
    #[serde(default = "default_out")]
    pub out: String,
    /// Optional per-trial CSV destination.
    #[serde(default)]
    pub raw_out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config populates all defaults")
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn basis_kind(&self) -> Result<BasisKind> {
        match self.basis.as_str() {
            "fourier" => Ok(BasisKind::Fourier),
            "canonical" => Ok(BasisKind::Canonical),
            "random" => Ok(BasisKind::RandomOrthonormal),
            other => Err(Error::ConfigInvalid(format!(
                "unknown basis '{other}' (expected fourier, canonical or random)"
            ))),
        }
    }

    /// Checks the invariants shared by all experiments.
    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::ConfigInvalid("trials must be at least 1".into()));
        }
        if self.ep_over_n0_db.is_empty() || self.q_list.is_empty() || self.p_fa_list.is_empty() {
            return Err(Error::ConfigInvalid("sweep lists must be nonempty".into()));
        }
        if self.q_list.contains(&0) {
            return Err(Error::ConfigInvalid("block lengths must be positive".into()));
        }
        if self.p_fa_list.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::ConfigInvalid(
                "false-alarm targets must lie in (0,1)".into(),
            ));
        }
        if self.gain <= 0.0 || self.tx_power <= 0.0 || self.noise_density <= 0.0 {
            return Err(Error::ConfigInvalid(
                "gain, tx_power and noise_density must be positive".into(),
            ));
        }
        if self.inr_bar < 0.0 {
            return Err(Error::ConfigInvalid("inr_bar must be nonnegative".into()));
        }
        self.basis_kind()?;
        match experiment {
            Experiment::Psd | Experiment::Zplane => {
                if self.d > self.n || self.n == 0 {
                    return Err(Error::ConfigInvalid(format!(
                        "d = {} must not exceed n = {}",
                        self.d, self.n
                    )));
                }
            }
            Experiment::LossGrid => {}
            _ => {
                if self.k0 == 0 || self.k0 + self.kappa_t + self.kappa_r > self.n {
                    return Err(Error::ConfigInvalid(format!(
                        "k0+kappa_t+kappa_r = {} must fit n = {}",
                        self.k0 + self.kappa_t + self.kappa_r,
                        self.n
                    )));
                }
                if self.eps_r > self.kappa_r {
                    return Err(Error::ConfigInvalid(format!(
                        "eps_r = {} exceeds kappa_r = {}",
                        self.eps_r, self.kappa_r
                    )));
                }
            }
        }
        Ok(())
    }
}

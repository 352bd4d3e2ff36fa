//! Experiment configuration: one TOML file describes one experiment.
//!
//! Sections are per component; every key is explicit and unknown keys are
//! rejected, so a typo fails loudly with the key name. Sweeps are explicit
//! lists, never implicit ranges, which keeps report bytes reproducible.

use crate::sequences::{
    self, AlmostPeriodicSpec, ExactReal, IntegerModel, LiteralExtend, MaBase, MultiplierSequence,
    PhasePolynomial,
};
use crate::spectra::{SpectralMeasure, SpectrumSet};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentTag {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
    Lemma3,
    Lemma5,
    Saddle,
    Witness,
    ZerosHistogram,
    L1loc,
}

impl ExperimentTag {
    pub fn dir_name(&self) -> &'static str {
        match self {
            ExperimentTag::Thm1 => "thm1",
            ExperimentTag::Thm2 => "thm2",
            ExperimentTag::Thm3 => "thm3",
            ExperimentTag::Thm4 => "thm4",
            ExperimentTag::Thm5 => "thm5",
            ExperimentTag::Thm6 => "thm6",
            ExperimentTag::Lemma3 => "lemma3",
            ExperimentTag::Lemma5 => "lemma5",
            ExperimentTag::Saddle => "saddle",
            ExperimentTag::Witness => "witness",
            ExperimentTag::ZerosHistogram => "zeros-histogram",
            ExperimentTag::L1loc => "l1loc",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub tag: ExperimentTag,
    /// Explicit seeds; deterministic experiments ignore them.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_precision_start")]
    pub precision_start: u32,
    #[serde(default = "default_precision_cap")]
    pub precision_cap: u32,
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}
fn default_precision_start() -> u32 {
    64
}
fn default_precision_cap() -> u32 {
    4096
}

/// Sequence descriptor as written in configs; `build` realizes it.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SequenceSpec {
    PolynomialPhase {
        /// `q_2, q_3, ...` as exact-value strings (`"sqrt(2)"`, `"1/2"`, ...).
        coefficients: Vec<String>,
    },
    PowerPhase {
        beta: String,
    },
    GaussianStationary {
        #[serde(default)]
        atoms: Vec<(f64, f64)>,
        #[serde(default)]
        density: Vec<(f64, f64, f64)>,
    },
    MovingAverage {
        kernel: Vec<f64>,
        base: MaBase,
    },
    AlmostPeriodic {
        /// `(lambda, re c, im c)` triples.
        pairs: Vec<(f64, f64, f64)>,
    },
    IntegerModel {
        #[serde(flatten)]
        model: IntegerModel,
    },
    Literal {
        values: Vec<(f64, f64)>,
        extend: LiteralExtend,
    },
}

impl SequenceSpec {
    /// Realize the descriptor. `n_max` bounds the index range the experiment
    /// will touch (realization-based kinds allocate it up front).
    pub fn build(&self, seed: u64, n_max: usize) -> Result<MultiplierSequence> {
        match self {
            SequenceSpec::PolynomialPhase { coefficients } => {
                let coeffs = coefficients
                    .iter()
                    .map(|s| s.parse::<ExactReal>())
                    .collect::<Result<Vec<_>>>()?;
                sequences::polynomial_phase_seq(PhasePolynomial::new(coeffs)?)
            }
            SequenceSpec::PowerPhase { beta } => sequences::power_phase_seq(beta.parse()?),
            SequenceSpec::GaussianStationary { atoms, density } => {
                let rho = SpectralMeasure::new(atoms.clone(), density.clone())?;
                sequences::gaussian_stationary_seq(&rho, n_max, seed)
            }
            SequenceSpec::MovingAverage { kernel, base } => {
                sequences::moving_average_seq(kernel.clone(), *base, seed)
            }
            SequenceSpec::AlmostPeriodic { pairs } => {
                let spec = AlmostPeriodicSpec::new(
                    pairs.iter().map(|&(l, re, im)| (l, (re, im))).collect(),
                )?;
                sequences::almost_periodic_seq(spec)
            }
            SequenceSpec::IntegerModel { model } => {
                let mut model = model.clone();
                if let IntegerModel::Markov { n_max: m, .. } = &mut model {
                    *m = (*m).max(n_max);
                }
                sequences::integer_stationary_seq(model, seed)
            }
            SequenceSpec::Literal { values, extend } => {
                sequences::literal_seq(values.clone(), *extend)
            }
        }
    }

    /// The spectrum of the sequence where it is determined by the descriptor.
    pub fn derived_spectrum(&self) -> Option<SpectrumSet> {
        match self {
            // Phase and mixing families have uniform angular statistics.
            SequenceSpec::PolynomialPhase { .. }
            | SequenceSpec::PowerPhase { .. }
            | SequenceSpec::MovingAverage { .. } => Some(SpectrumSet::full_circle()),
            SequenceSpec::GaussianStationary { atoms, density } => {
                let rho = SpectralMeasure::new(atoms.clone(), density.clone()).ok()?;
                rho.support().ok()
            }
            SequenceSpec::AlmostPeriodic { pairs } => {
                let angles: Vec<f64> = pairs
                    .iter()
                    .filter(|&&(_, re, im)| re != 0.0 || im != 0.0)
                    .map(|&(l, _, _)| l)
                    .collect();
                SpectrumSet::from_points(&angles).ok()
            }
            SequenceSpec::IntegerModel { .. } | SequenceSpec::Literal { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    #[serde(default)]
    pub arcs: Vec<(f64, f64)>,
    #[serde(default)]
    pub points: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosSection {
    pub radii: Vec<f64>,
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// Radii for reciprocal-sum stabilization checks (empty disables them).
    #[serde(default)]
    pub lindelof_radii: Vec<f64>,
}

fn default_bins() -> usize {
    8
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSection {
    pub a_values: Vec<f64>,
    pub delta: f64,
    #[serde(default = "default_window_half_width")]
    pub window: f64,
    #[serde(default = "default_grid_delta")]
    pub grid_delta: f64,
    pub j_lo: u32,
    pub j_hi: u32,
    #[serde(default = "default_pass_fraction")]
    pub pass_fraction: f64,
    /// `false` for negative controls that must fail the scan.
    #[serde(default = "default_true")]
    pub expect_pass: bool,
}

fn default_window_half_width() -> f64 {
    0.125
}
fn default_grid_delta() -> f64 {
    0.6
}
fn default_pass_fraction() -> f64 {
    0.9
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaddleSection {
    pub radii: Vec<u64>,
    #[serde(default = "default_theta_count")]
    pub theta_count: usize,
    /// Radius for the shifted-maximum lower-bound scan (0 disables).
    #[serde(default)]
    pub parseval_shift_radius: u64,
}

fn default_theta_count() -> usize {
    32
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma3Section {
    pub radii: Vec<u64>,
    #[serde(default = "default_theta_count_16")]
    pub theta_count: usize,
}

fn default_theta_count_16() -> usize {
    16
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma5Section {
    pub radii: Vec<u64>,
    #[serde(default = "default_m")]
    pub m: u32,
    /// Certified lower-bound coefficient for the diagonal (`c sqrt(R)`).
    #[serde(default = "default_diagonal_coefficient")]
    pub diagonal_coefficient: f64,
}

fn default_m() -> u32 {
    1
}
fn default_diagonal_coefficient() -> f64 {
    1.7
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct L1locSection {
    pub t_list: Vec<f64>,
    #[serde(default = "default_annulus_lo")]
    pub r_lo: f64,
    #[serde(default = "default_annulus_hi")]
    pub r_hi: f64,
    #[serde(default = "default_n_r")]
    pub n_r: usize,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
}

fn default_annulus_lo() -> f64 {
    0.5
}
fn default_annulus_hi() -> f64 {
    1.5
}
fn default_n_r() -> usize {
    4
}
fn default_n_theta() -> usize {
    12
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DichotomySection {
    #[serde(default = "default_sample_len")]
    pub sample_len: usize,
    #[serde(default = "default_max_period")]
    pub max_period: usize,
    #[serde(default = "default_pg_window")]
    pub window: usize,
    #[serde(default = "default_bandwidth")]
    pub bandwidth: usize,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_coverage_cutoff")]
    pub coverage_cutoff: f64,
    /// Expected verdict: "periodic" (with exact period) or "full-support".
    pub expect: DichotomyExpectation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DichotomyExpectation {
    Periodic,
    FullSupport,
}

fn default_sample_len() -> usize {
    1 << 14
}
fn default_max_period() -> usize {
    64
}
fn default_pg_window() -> usize {
    1 << 14
}
fn default_bandwidth() -> usize {
    64
}
fn default_tau() -> f64 {
    0.2
}
fn default_coverage_cutoff() -> f64 {
    0.9
}

/// Pass thresholds, mirrored from the acceptance rules; tightening them is a
/// data change.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Histogram: maximum per-sector relative deviation at the final radius.
    pub max_rel_dev: f64,
    /// Ray concentration: angular tolerance around predicted zero rays.
    pub angle_tol: f64,
    /// Ray concentration: required fraction of zeros within tolerance.
    pub angle_fraction: f64,
    /// Indicator profile: allowed deviation from the supporting function.
    pub indicator_tol: f64,
    /// Indicator profile: evaluation radius.
    pub indicator_r: f64,
    /// Indicator profile: number of sample angles.
    pub indicator_angles: usize,
    /// Reciprocal-sum magnitude bound.
    pub lindelof_bound: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            max_rel_dev: 0.2,
            angle_tol: 0.2,
            angle_fraction: 0.9,
            indicator_tol: 0.05,
            indicator_r: 500.0,
            indicator_angles: 8,
            lindelof_bound: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub sequence: Option<SequenceSpec>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSpec>,
    #[serde(default)]
    pub zeros: Option<ZerosSection>,
    #[serde(default)]
    pub witness: Option<WitnessSection>,
    #[serde(default)]
    pub saddle: Option<SaddleSection>,
    #[serde(default)]
    pub lemma3: Option<Lemma3Section>,
    #[serde(default)]
    pub lemma5: Option<Lemma5Section>,
    #[serde(default)]
    pub l1loc: Option<L1locSection>,
    #[serde(default)]
    pub dichotomy: Option<DichotomySection>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    fn require<T>(opt: &Option<T>, section: &str, tag: &str) -> Result<()> {
        if opt.is_none() {
            return Err(Error::Config(format!("experiment `{tag}` requires a [{section}] section")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let tag = self.experiment.tag.dir_name();
        if self.experiment.seeds.is_empty() {
            return Err(Error::Config("experiment.seeds must not be empty".into()));
        }
        if self.experiment.precision_start < 64 {
            return Err(Error::Config("experiment.precision_start below 64".into()));
        }
        if self.experiment.precision_cap < self.experiment.precision_start {
            return Err(Error::Config("experiment.precision_cap below precision_start".into()));
        }
        if let Some(z) = &self.zeros {
            if z.radii.is_empty() || z.radii.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config("zeros.radii must be non-empty and increasing".into()));
            }
            if z.radii.iter().any(|&r| r <= 0.0) {
                return Err(Error::Config("zeros.radii must be positive".into()));
            }
        }
        use ExperimentTag::*;
        match self.experiment.tag {
            Thm1 | Thm2 | Thm5 | ZerosHistogram => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.zeros, "zeros", tag)?;
            }
            Thm3 | Witness => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.witness, "witness", tag)?;
            }
            Thm4 => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.zeros, "zeros", tag)?;
            }
            Thm6 => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.dichotomy, "dichotomy", tag)?;
            }
            Lemma3 => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.lemma3, "lemma3", tag)?;
            }
            Lemma5 => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.lemma5, "lemma5", tag)?;
            }
            Saddle => Self::require(&self.saddle, "saddle", tag)?,
            L1loc => {
                Self::require(&self.sequence, "sequence", tag)?;
                Self::require(&self.l1loc, "l1loc", tag)?;
            }
        }
        match self.experiment.tag {
            Thm1 => {
                if let Some(SequenceSpec::PolynomialPhase { coefficients }) = &self.sequence {
                    let any_irrational = coefficients
                        .iter()
                        .filter_map(|s| s.parse::<ExactReal>().ok())
                        .any(|c| c.is_irrational());
                    if !any_irrational {
                        return Err(Error::Config(
                            "thm1 requires at least one irrational polynomial coefficient".into(),
                        ));
                    }
                } else {
                    return Err(Error::Config(
                        "thm1 requires sequence.kind = \"polynomial-phase\"".into(),
                    ));
                }
            }
            Thm2 => {
                if !matches!(&self.sequence, Some(SequenceSpec::PowerPhase { .. })) {
                    return Err(Error::Config(
                        "thm2 requires sequence.kind = \"power-phase\"".into(),
                    ));
                }
            }
            Thm6 => {
                if !matches!(&self.sequence, Some(SequenceSpec::IntegerModel { .. })) {
                    return Err(Error::Config(
                        "thm6 requires sequence.kind = \"integer-model\"".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Spectrum for predictions: explicit section if present, else derived
    /// from the sequence descriptor.
    pub fn prediction_spectrum(&self) -> Result<SpectrumSet> {
        if let Some(s) = &self.spectrum {
            return SpectrumSet::new(s.arcs.clone(), s.points.clone());
        }
        self.sequence
            .as_ref()
            .and_then(|s| s.derived_spectrum())
            .ok_or_else(|| {
                Error::Config(
                    "no [spectrum] section and the sequence kind determines no spectrum".into(),
                )
            })
    }
}

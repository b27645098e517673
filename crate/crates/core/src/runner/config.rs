use serde::{Deserialize, Serialize};

use crate::params::Params;
use crate::spectral::{Grid, SpectralError};

/// One experiment configuration, read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    pub params: Params,
    pub forcing: ForcingSpec,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub evolve: EvolveConfig,
    #[serde(default)]
    pub steady: SteadyConfig,
    #[serde(default)]
    pub decay: DecayConfig,
    #[serde(default)]
    pub stability: StabilityConfig,
    #[serde(default)]
    pub degiorgi: DeGiorgiConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_modes: usize,
    /// `L / π`; the domain is `[-L, L)`.
    pub half_period_pi: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid, SpectralError> {
        Grid::new(self.n_modes, self.half_period_pi * std::f64::consts::PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Unit-scale random amplitudes and phases on every band mode.
    RandomPhase,
    /// `sin(k x)` at the lowest band wavenumber.
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    XNorm(f64),
    Named(AutoGate),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutoGate {
    AutoGate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingSpec {
    pub seed: u64,
    /// Spectral gap; defaults to `params.rho`.
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default = "default_k_max_frac")]
    pub k_max_frac: f64,
    /// Either a value for `‖f‖_X` or `"auto-gate"`.
    pub target: Target,
    /// Fraction of the gate threshold used by `"auto-gate"`.
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_profile")]
    pub profile: Profile,
}

fn default_k_max_frac() -> f64 {
    0.5
}

fn default_margin() -> f64 {
    0.5
}

fn default_profile() -> Profile {
    Profile::RandomPhase
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Record every `stride` steps.
    pub stride: usize,
    /// Write trajectory snapshots (can be large).
    pub trajectory: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            stride: 10,
            trajectory: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    /// Peak value of the random initial datum; 0 starts from rest.
    pub u0_amplitude: f64,
    pub u0_seed: u64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            u0_amplitude: 0.0,
            u0_seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SteadyConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Tail tolerance of the time-integral route, relative to `‖U‖_{L²}`.
    pub tail_rtol: f64,
    /// Horizon cap of the time-integral route.
    pub horizon: f64,
    pub dual_route: bool,
    pub n_perturb: usize,
    pub probe_seed: u64,
}

impl Default for SteadyConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 40,
            tail_rtol: 1e-7,
            horizon: 2000.0,
            dual_route: true,
            n_perturb: 5,
            probe_seed: 99,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coefficient {
    /// `V = 0`
    Zero,
    /// `V` is the Picard steady state.
    Steady,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayConfig {
    pub t_a: f64,
    pub t_b: f64,
    pub coefficient: Coefficient,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            t_a: 1.0,
            t_b: f64::INFINITY,
            coefficient: Coefficient::Steady,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilityConfig {
    pub theta_seed: u64,
    /// `‖θ‖ / ‖U‖`
    pub theta_frac: f64,
    /// Required `‖w(T)‖ / ‖θ‖` at the horizon `params.t_end`.
    pub target_ratio: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            theta_seed: 5,
            theta_frac: 0.1,
            target_ratio: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeGiorgiConfig {
    pub t0: f64,
    pub n_max: usize,
    pub u0_amplitude: f64,
    pub u0_seed: u64,
    /// Datum band is `[π/L, u0_k_max_frac · k_max]`; stiff modes that die
    /// within one step would spoil the trapezoid time integrals.
    pub u0_k_max_frac: f64,
    /// Required `E_{n_max} / E₀`.
    pub target: f64,
    /// Slack of the level-set inequality, relative to `E₀`.
    pub pair_rtol: f64,
    pub cordoba_pairs: usize,
    /// Recording stride; the short windows near `t0` need dense samples.
    pub stride: usize,
}

impl Default for DeGiorgiConfig {
    fn default() -> Self {
        Self {
            t0: 2.0,
            n_max: 4,
            u0_amplitude: 0.5,
            u0_seed: 3,
            u0_k_max_frac: 0.125,
            target: 1e-8,
            pair_rtol: 1e-8,
            cordoba_pairs: 100,
            stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub family_size: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            family_size: 100,
        }
    }
}

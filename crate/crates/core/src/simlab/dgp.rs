use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Sample;
use crate::netgen::{CovariateTable, LinkFamily, LinkSpec, McEstimate};
use crate::numeric::{normal_cdf, pairwise_sum, sample_sd};
use crate::rng::stream;

pub const DEFAULT_MIXING: [[f64; 3]; 3] = [[0.7, 0.3, 0.0], [-0.1, 1.0, 0.4], [0.0, -0.6, 0.7]];

/// Columns of the generated covariate table.
pub const OBSERVED: [usize; 2] = [0, 1];
pub const UNOBSERVED: usize = 2;
/// Links form on `x2` and `x3`.
pub const LINK_COLS: [usize; 2] = [1, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeFamily {
    /// Constant effect 1, outcome linear in `x`.
    A,
    /// Effect `2 Phi(-x1 + x2 + x3)`, outcome linear in `x`.
    B,
    /// Effect as in `B`, outcome adds `x3^2 + x2 x3`.
    C,
    /// No effect and no covariate dependence; only the intercept and noise remain.
    Flat,
}

impl OutcomeFamily {
    pub fn label(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::Flat => "Flat",
        }
    }

    pub fn cate(self, x: &[f64]) -> f64 {
        match self {
            Self::A => 1.0,
            Self::B | Self::C => 2.0 * normal_cdf(-x[0] + x[1] + x[2]),
            Self::Flat => 0.0,
        }
    }

    /// Outcome without treatment and noise: `5 + g(x)`.
    pub fn baseline(self, x: &[f64]) -> f64 {
        let linear = x[0] + x[1] + x[2];
        match self {
            Self::A | Self::B => 5.0 + linear,
            Self::C => 5.0 + linear + x[2] * x[2] + x[1] * x[2],
            Self::Flat => 5.0,
        }
    }

    /// Population ATE. `-x1 + x2 + x3` is symmetric about zero because every component of `V`
    /// is, so `E[2 Phi(.)] = 1` exactly for `B` and `C`.
    pub fn population_ate(self) -> f64 {
        match self {
            Self::A | Self::B | Self::C => 1.0,
            Self::Flat => 0.0,
        }
    }
}

impl std::str::FromStr for OutcomeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            "C" | "c" => Ok(Self::C),
            "Flat" | "flat" => Ok(Self::Flat),
            _ => Err(Error::Input(format!("unknown outcome family {s:?}"))),
        }
    }
}

/// Which observables enter the kernel weights of the network estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    /// Only `x1`, the observable not used in link formation.
    #[default]
    Base,
    /// Both `x1` and `x2`.
    Over,
}

impl ControlMode {
    pub fn kernel_cols(self) -> Vec<usize> {
        match self {
            Self::Base => vec![0],
            Self::Over => vec![0, 1],
        }
    }
}

fn default_noise() -> f64 {
    1.0
}

fn default_mixing() -> [[f64; 3]; 3] {
    DEFAULT_MIXING
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpSpec {
    pub n: usize,
    pub beta3: f64,
    pub family: OutcomeFamily,
    #[serde(default = "default_mixing")]
    pub mixing: [[f64; 3]; 3],
    #[serde(default)]
    pub control_mode: ControlMode,
    #[serde(default)]
    pub seed: u64,
    /// Standard deviation of the outcome noise.
    #[serde(default = "default_noise")]
    pub noise_sd: f64,
}

impl DgpSpec {
    pub fn new(n: usize, family: OutcomeFamily, beta3: f64, seed: u64) -> Self {
        Self { n, beta3, family, mixing: DEFAULT_MIXING, control_mode: ControlMode::Base, seed, noise_sd: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Input(format!("n must be at least 2, got {}", self.n)));
        }
        if !self.beta3.is_finite() {
            return Err(Error::Input("beta3 must be finite".into()));
        }
        if !(self.noise_sd >= 0.0) || !self.noise_sd.is_finite() {
            return Err(Error::Input(format!("noise_sd must be nonnegative, got {}", self.noise_sd)));
        }
        let m = &self.mixing;
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if !(det.abs() > 1e-12) || !det.is_finite() {
            return Err(Error::Input("mixing matrix must be invertible".into()));
        }
        Ok(())
    }

    /// Gaussian link on `(x2, x3)` at unit scale; the scale is set by calibration.
    pub fn link_template(&self) -> LinkSpec {
        LinkSpec { family: LinkFamily::Gaussian, scale: 1.0, link_cols: LINK_COLS.to_vec(), dense: None }
    }
}

/// Generated data plus the true conditional effects.
#[derive(Debug, Clone)]
pub struct GeneratedSample {
    pub sample: Sample,
    pub cate: Vec<f64>,
    pub link: LinkSpec,
    pub kernel_cols: Vec<usize>,
}

/// One draw of `V`, each component standardized to mean 0 and variance 1.
fn draw_v(rng: &mut impl Rng) -> [f64; 3] {
    let u: [f64; 6] = std::array::from_fn(|_| rng.random::<f64>());
    let v1 = (u[0] - 0.5) * 12f64.sqrt();
    let v2 = (u[1] + u[2] - 1.0) * 6f64.sqrt();
    let v3 = (u[3] + u[4] + u[5] - 1.5) * 2.0;
    [v1, v2, v3]
}

/// Rows of the mixing matrix scaled so each `X` component has unit variance.
fn normalized_mixing(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    m.map(|row| {
        let norm = row.iter().map(|a| a * a).sum::<f64>().sqrt();
        row.map(|a| a / norm)
    })
}

fn mix(a: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|r| a[r][0] * v[0] + a[r][1] * v[1] + a[r][2] * v[2])
}

/// Draws `n` covariate rows `(x1, x2, x3)` with `x3` unobserved.
pub fn draw_covariates(n: usize, mixing: &[[f64; 3]; 3], seed: u64) -> Result<CovariateTable> {
    let a = normalized_mixing(mixing);
    let mut rng = stream(seed, &[0]);
    let mut values = Vec::with_capacity(3 * n);
    for _ in 0..n {
        values.extend(mix(&a, draw_v(&mut rng)));
    }
    CovariateTable::new(
        n,
        3,
        values,
        vec!["x1".into(), "x2".into(), "x3".into()],
        OBSERVED.to_vec(),
        vec![UNOBSERVED],
    )
}

/// Uniforms driving treatment and standard normals driving the outcome noise. Shared across
/// outcome families and `beta3` values drawn with the same seed.
#[derive(Debug, Clone)]
pub struct Shocks {
    pub treatment: Vec<f64>,
    pub noise: Vec<f64>,
}

impl Shocks {
    pub fn draw(n: usize, seed: u64) -> Self {
        let mut rt = stream(seed, &[1]);
        let mut re = stream(seed, &[2]);
        Self {
            treatment: (0..n).map(|_| rt.random::<f64>()).collect(),
            noise: (0..n).map(|_| re.sample::<f64, _>(StandardNormal)).collect(),
        }
    }
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Treatment and outcome for given covariates: `T = 1[u < logistic(x1 + x2 + beta3 x3)]`,
/// `Y = CATE(x) T + 5 + g(x) + noise_sd * e`. Returns the sample and true CATEs.
pub fn assign_outcomes(
    cov: &CovariateTable,
    family: OutcomeFamily,
    beta3: f64,
    noise_sd: f64,
    shocks: &Shocks,
) -> Result<(Sample, Vec<f64>)> {
    let n = cov.n();
    let mut t = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut cate = Vec::with_capacity(n);
    for i in 0..n {
        let x = cov.row(i);
        let p = logistic(x[0] + x[1] + beta3 * x[2]);
        let ti = u8::from(shocks.treatment[i] < p);
        let c = family.cate(x);
        t.push(ti);
        cate.push(c);
        y.push(c * f64::from(ti) + family.baseline(x) + noise_sd * shocks.noise[i]);
    }
    Ok((Sample::new(cov.clone(), t, y)?, cate))
}

/// Draws a full sample from the simulation design.
pub fn generate_sample(spec: &DgpSpec) -> Result<GeneratedSample> {
    spec.validate()?;
    let cov = draw_covariates(spec.n, &spec.mixing, spec.seed)?;
    let shocks = Shocks::draw(spec.n, spec.seed);
    let (sample, cate) = assign_outcomes(&cov, spec.family, spec.beta3, spec.noise_sd, &shocks)?;
    Ok(GeneratedSample { sample, cate, link: spec.link_template(), kernel_cols: spec.control_mode.kernel_cols() })
}

/// Monte-Carlo mean of `CATE(X)` under the covariate law of `spec`.
pub fn true_ate(spec: &DgpSpec, mc_draws: usize) -> Result<McEstimate> {
    spec.validate()?;
    if mc_draws < 10_000 {
        return Err(Error::Input(format!("true_ate needs at least 10000 draws, got {mc_draws}")));
    }
    if matches!(spec.family, OutcomeFamily::A | OutcomeFamily::Flat) {
        return Ok(McEstimate { value: spec.family.population_ate(), se: 0.0, draws: mc_draws });
    }
    let a = normalized_mixing(&spec.mixing);
    let mut rng = stream(spec.seed, &[0xA7E]);
    let vals: Vec<f64> = (0..mc_draws).map(|_| spec.family.cate(&mix(&a, draw_v(&mut rng)))).collect();
    let m = mc_draws as f64;
    Ok(McEstimate { value: pairwise_sum(&vals) / m, se: sample_sd(&vals) / m.sqrt(), draws: mc_draws })
}

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::CovariateTable;
use crate::error::{Error, Result};

/// Monotone piecewise-linear link profile with finite support.
///
/// Knots start at 0; values are nonincreasing, at most 1, and the last value is 0,
/// so `g` vanishes beyond the last knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabularLink {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl TabularLink {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() || knots.len() < 2 {
            return Err(Error::Input("tabular link needs at least two (knot, value) pairs".into()));
        }
        if knots[0] != 0.0 {
            return Err(Error::Input("tabular link knots must start at 0".into()));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) || knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::Input("tabular link knots must be finite and strictly increasing".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Input("tabular link values must be nonincreasing".into()));
        }
        if values[0] > 1.0 || values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Input("tabular link values must lie in [0, 1]".into()));
        }
        if *values.last().unwrap() != 0.0 {
            return Err(Error::NotIntegrable(
                "tabular link must reach 0 at its last knot (finite support)".into(),
            ));
        }
        Ok(Self { knots, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.values[0];
        }
        let k = self.knots.partition_point(|&t| t <= x);
        if k >= self.knots.len() {
            return 0.0;
        }
        let (x0, x1) = (self.knots[k - 1], self.knots[k]);
        let (y0, y1) = (self.values[k - 1], self.values[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn support(&self) -> f64 {
        *self.knots.last().unwrap()
    }
}

/// Shape `g` of the link function `w_n(x) = g(s_n x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "family")]
pub enum LinkFamily {
    /// `exp(-x^2 / 2)`
    Gaussian,
    /// `1[x < 1]`
    Hard,
    /// `max(1 - x, 0)`
    LinearMax,
    Tabular(TabularLink),
}

impl LinkFamily {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LinkFamily::Gaussian => (-0.5 * x * x).exp(),
            LinkFamily::Hard => {
                if x < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            LinkFamily::LinearMax => (1.0 - x).max(0.0),
            LinkFamily::Tabular(t) => t.eval(x),
        }
    }

    /// Radius beyond which `g` is zero, if finite.
    pub fn support(&self) -> Option<f64> {
        match self {
            LinkFamily::Gaussian => None,
            LinkFamily::Hard | LinkFamily::LinearMax => Some(1.0),
            LinkFamily::Tabular(t) => Some(t.support()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            LinkFamily::Gaussian => "gaussian",
            LinkFamily::Hard => "hard",
            LinkFamily::LinearMax => "linearmax",
            LinkFamily::Tabular(_) => "tabular",
        }
    }
}

/// Pairwise observed discrepancy `h(x_i^o, x_j^o)`.
pub trait PairDiscrepancy: Sync {
    fn h(&self, i: usize, j: usize) -> f64;
}

/// User-supplied symmetric table of discrepancies, indexed by unit.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    n: usize,
    values: Vec<f64>,
}

impl PairTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Input(format!("pair table needs {} entries, got {}", n * n, values.len())));
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (values[i * n + j], values[j * n + i]);
                if a != b || !a.is_finite() {
                    return Err(Error::Input(format!("pair table not symmetric/finite at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl PairDiscrepancy for PairTable {
    fn h(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Euclidean distance over a subset of covariate columns.
pub struct EuclideanDiscrepancy<'a> {
    pub cov: &'a CovariateTable,
    pub cols: &'a [usize],
}

impl PairDiscrepancy for EuclideanDiscrepancy<'_> {
    fn h(&self, i: usize, j: usize) -> f64 {
        sub_distance(self.cov.row(i), self.cov.row(j), self.cols)
    }
}

#[derive(Debug, Clone)]
pub enum HMode {
    Euclidean,
    Table(Arc<PairTable>),
}

/// Dense-model discrepancy: `h` over `h_cols` added to the distance over the link columns.
#[derive(Debug, Clone)]
pub struct DenseModel {
    pub h_cols: Vec<usize>,
    pub h: HMode,
}

#[derive(Debug, Clone)]
pub struct LinkSpec {
    pub family: LinkFamily,
    /// Selectivity `s_n`.
    pub scale: f64,
    /// Columns entering the homophily distance. In dense mode these are the unobserved columns.
    pub link_cols: Vec<usize>,
    pub dense: Option<DenseModel>,
}

#[inline]
pub(crate) fn sub_distance(a: &[f64], b: &[f64], cols: &[usize]) -> f64 {
    let mut s = 0.0;
    for &c in cols {
        let t = a[c] - b[c];
        s += t * t;
    }
    s.sqrt()
}

impl LinkSpec {
    pub fn new(family: LinkFamily, scale: f64, link_cols: Vec<usize>) -> Result<Self> {
        let spec = Self { family, scale, link_cols, dense: None };
        spec.validate(None)?;
        Ok(spec)
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..self.clone() }
    }

    pub fn validate(&self, d: Option<usize>) -> Result<()> {
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::Input(format!("scale must be positive and finite, got {}", self.scale)));
        }
        if self.link_cols.is_empty() {
            return Err(Error::Input("link_cols must be nonempty".into()));
        }
        if self.family.eval(0.0) > 1.0 {
            return Err(Error::Input("g(0) must not exceed 1".into()));
        }
        if let Some(d) = d {
            let dense_cols = self.dense.iter().flat_map(|m| m.h_cols.iter());
            if let Some(c) = self.link_cols.iter().chain(dense_cols).find(|&&c| c >= d) {
                return Err(Error::Input(format!("column {c} out of range for {d} covariates")));
            }
        }
        Ok(())
    }

    /// Link argument before the family is applied, for two covariate rows.
    fn argument(&self, xi: &[f64], xj: &[f64]) -> Result<f64> {
        let base = sub_distance(xi, xj, &self.link_cols);
        match &self.dense {
            None => Ok(base),
            Some(DenseModel { h_cols, h: HMode::Euclidean }) => Ok(sub_distance(xi, xj, h_cols) + base),
            Some(DenseModel { h: HMode::Table(_), .. }) => Err(Error::Input(
                "table discrepancy is indexed by unit; use pair_probability".into(),
            )),
        }
    }

    /// Link argument for units `i` and `j` of a table.
    #[inline]
    pub(crate) fn pair_argument(&self, cov: &CovariateTable, i: usize, j: usize) -> f64 {
        let (xi, xj) = (cov.row(i), cov.row(j));
        let base = sub_distance(xi, xj, &self.link_cols);
        match &self.dense {
            None => base,
            Some(DenseModel { h_cols, h: HMode::Euclidean }) => sub_distance(xi, xj, h_cols) + base,
            Some(DenseModel { h: HMode::Table(t), .. }) => t.h(i, j) + base,
        }
    }
}

/// Probability that two units with covariate rows `xi` and `xj` link.
pub fn link_probability(xi: &[f64], xj: &[f64], spec: &LinkSpec) -> Result<f64> {
    if xi.len() != xj.len() {
        return Err(Error::Input(format!("row dimensions differ: {} vs {}", xi.len(), xj.len())));
    }
    spec.validate(Some(xi.len()))?;
    Ok(spec.family.eval(spec.scale * spec.argument(xi, xj)?))
}

/// Probability that units `i` and `j` of `cov` link.
pub fn pair_probability(cov: &CovariateTable, i: usize, j: usize, spec: &LinkSpec) -> f64 {
    spec.family.eval(spec.scale * spec.pair_argument(cov, i, j))
}

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::netgen::CovariateTable;

pub const CLIP_LOW: f64 = 0.01;
pub const CLIP_HIGH: f64 = 0.99;

/// Logistic regression of treatment on observed covariates plus an intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct PropensityModel {
    /// Intercept first, then one coefficient per entry of `cols`.
    pub coefficients: Vec<f64>,
    pub cols: Vec<usize>,
    /// Fitted probabilities, clipped to `[0.01, 0.99]`.
    pub fitted: Vec<f64>,
    pub iterations: usize,
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn design(cov: &CovariateTable, cols: &[usize]) -> DMatrix<f64> {
    let n = cov.n();
    DMatrix::from_fn(n, cols.len() + 1, |i, c| if c == 0 { 1.0 } else { cov.get(i, cols[c - 1]) })
}

impl PropensityModel {
    /// Newton-Raphson fit on the columns `cols` of `cov`.
    pub fn fit(cov: &CovariateTable, cols: &[usize], t: &[u8]) -> Result<Self> {
        let n = cov.n();
        if t.len() != n {
            return Err(Error::Input(format!("{} treatments for {n} units", t.len())));
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= cov.d()) {
            return Err(Error::Input(format!("propensity column {c} out of range")));
        }
        let treated = t.iter().filter(|&&x| x == 1).count();
        if treated == 0 || treated == n {
            return Err(Error::Estimation("propensity model needs both treated and untreated units".into()));
        }
        let x = design(cov, cols);
        let p = x.ncols();
        let tv = DVector::from_iterator(n, t.iter().map(|&v| f64::from(v)));
        let mut beta = DVector::<f64>::zeros(p);
        let base = treated as f64 / n as f64;
        beta[0] = (base / (1.0 - base)).ln();
        let mut iterations = 0;
        for it in 1..=100 {
            iterations = it;
            let eta = &x * &beta;
            let mu = eta.map(logistic);
            let w = mu.map(|m| (m * (1.0 - m)).max(1e-12));
            let grad = x.transpose() * (&tv - &mu);
            let mut xtwx = DMatrix::<f64>::zeros(p, p);
            for r in 0..n {
                let row = x.row(r);
                xtwx += (row.transpose() * row) * w[r];
            }
            let step = match xtwx.clone().cholesky() {
                Some(ch) => ch.solve(&grad),
                None => {
                    let ridge = xtwx + DMatrix::<f64>::identity(p, p) * 1e-8;
                    ridge
                        .cholesky()
                        .ok_or_else(|| Error::Collinearity("propensity information matrix is singular".into()))?
                        .solve(&grad)
                }
            };
            beta += &step;
            if step.amax() < 1e-10 {
                break;
            }
        }
        let fitted = (&x * &beta).iter().map(|&z| logistic(z).clamp(CLIP_LOW, CLIP_HIGH)).collect();
        Ok(Self { coefficients: beta.iter().copied().collect(), cols: cols.to_vec(), fitted, iterations })
    }

    /// Clipped propensity for a covariate row.
    pub fn predict(&self, row: &[f64]) -> f64 {
        let z = self.coefficients[0]
            + self.cols.iter().zip(&self.coefficients[1..]).map(|(&c, b)| b * row[c]).sum::<f64>();
        logistic(z).clamp(CLIP_LOW, CLIP_HIGH)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn recovers_logistic_coefficients() {
        let mut rng = crate::rng::stream(5, &[]);
        let n = 20_000;
        let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random::<f64>() * 2.0 - 1.0]).collect();
        let t: Vec<u8> = rows
            .iter()
            .map(|r| u8::from(rng.random::<f64>() < logistic(0.3 + 1.5 * r[0])))
            .collect();
        let cov = CovariateTable::from_rows(&rows).unwrap();
        let pm = PropensityModel::fit(&cov, &[0], &t).unwrap();
        assert!((pm.coefficients[0] - 0.3).abs() < 0.1, "{:?}", pm.coefficients);
        assert!((pm.coefficients[1] - 1.5).abs() < 0.15, "{:?}", pm.coefficients);
        assert!(pm.fitted.iter().all(|&p| (CLIP_LOW..=CLIP_HIGH).contains(&p)));
        assert!((pm.predict(&rows[3]) - pm.fitted[3]).abs() < 1e-15);
    }

    #[test]
    fn separated_data_stays_clipped() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let t: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
        let pm = PropensityModel::fit(&CovariateTable::from_rows(&rows).unwrap(), &[0], &t).unwrap();
        assert!(pm.fitted.iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn single_arm_is_rejected() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let cov = CovariateTable::from_rows(&rows).unwrap();
        assert!(PropensityModel::fit(&cov, &[0], &[1; 5]).is_err());
    }
}

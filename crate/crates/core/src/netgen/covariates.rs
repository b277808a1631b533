use crate::error::{Error, Result};

/// Unit characteristics, split into observed and unobserved columns.
///
/// Stored row-major: row `i` is unit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateTable {
    n: usize,
    d: usize,
    values: Vec<f64>,
    names: Vec<String>,
    observed: Vec<usize>,
    unobserved: Vec<usize>,
}

impl CovariateTable {
    pub fn new(
        n: usize,
        d: usize,
        values: Vec<f64>,
        names: Vec<String>,
        observed: Vec<usize>,
        unobserved: Vec<usize>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input(format!("need at least 2 units, got {n}")));
        }
        if values.len() != n * d {
            return Err(Error::Input(format!(
                "expected {} values for {n}x{d} table, got {}",
                n * d,
                values.len()
            )));
        }
        if names.len() != d {
            return Err(Error::Input(format!("{} column names for {d} columns", names.len())));
        }
        let mut seen = vec![false; d];
        for &c in observed.iter().chain(unobserved.iter()) {
            if c >= d {
                return Err(Error::Input(format!("column index {c} out of range for {d} columns")));
            }
            if seen[c] {
                return Err(Error::Input(format!("column {c} listed twice in observed/unobserved split")));
            }
            seen[c] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::Input(format!("column {c} is neither observed nor unobserved")));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite covariate at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        Ok(Self { n, d, values, names, observed, unobserved })
    }

    /// All columns observed, with generated names `x0, x1, ...`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Input("ragged covariate rows".into()));
        }
        let values = rows.iter().flatten().copied().collect();
        let names = (0..d).map(|k| format!("x{k}")).collect();
        Self::new(n, d, values, names, (0..d).collect(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.d + k]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, k)).collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn observed(&self) -> &[usize] {
        &self.observed
    }

    pub fn unobserved(&self) -> &[usize] {
        &self.unobserved
    }

    /// Overwrites row `i`. Used to pin a probe unit in resampling experiments.
    pub fn set_row(&mut self, i: usize, row: &[f64]) -> Result<()> {
        if row.len() != self.d {
            return Err(Error::Input(format!("row has {} entries, table has {}", row.len(), self.d)));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite covariate".into()));
        }
        self.values[i * self.d..(i + 1) * self.d].copy_from_slice(row);
        Ok(())
    }
}

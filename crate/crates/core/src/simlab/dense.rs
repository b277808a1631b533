use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::cate_estimate;
use crate::groups::{kappa_truncated_group, ComparisonGroup, KappaPolicy};
use crate::netgen::{pair_probability, CovariateTable, DenseModel, EuclideanDiscrepancy, HMode, LinkFamily, LinkSpec, Network};
use crate::numeric::{pairwise_sum, sample_sd};
use crate::rng::{derive_seed, pair_uniform, stream};

/// Dense-network design with confounding through a single unobservable.
///
/// Unit 0 is a probe with `x^o = 0` and `x^u = probe_xu`. Other units draw
/// `x^o ~ U(-1, 1)` and `x^u ~ N(0, 1)`. Links follow `g(scale * (|dx^o| + |dx^u|))` with
/// `g(x) = max(1 - x, 0)`; `T ~ Bernoulli(logistic(selection * x^u))` and
/// `Y = tau T + gamma x^u + e`.
#[derive(Debug, Clone, Serialize)]
pub struct DenseDesign {
    pub n: usize,
    pub probe_xu: f64,
    pub scale: f64,
    pub tau: f64,
    pub gamma: f64,
    pub selection: f64,
}

impl Default for DenseDesign {
    fn default() -> Self {
        Self { n: 1000, probe_xu: 0.5, scale: 1.0, tau: 1.0, gamma: 1.0, selection: 1.0 }
    }
}

/// Bias of the probe's CATE estimate at one truncation level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaPoint {
    /// `None` keeps every neighbor.
    pub top_k: Option<usize>,
    pub bias: f64,
    pub mc_se: f64,
    pub mean_group_size: f64,
    pub successes: usize,
}

impl DenseDesign {
    pub fn link_spec(&self) -> LinkSpec {
        LinkSpec {
            family: LinkFamily::LinearMax,
            scale: self.scale,
            link_cols: vec![1],
            dense: Some(DenseModel { h_cols: vec![0], h: HMode::Euclidean }),
        }
    }

    /// Covariates `(x^o, x^u)`, treatments and outcomes for one replication.
    pub fn draw(&self, seed: u64) -> Result<(CovariateTable, Vec<u8>, Vec<f64>)> {
        let mut rng = stream(seed, &[0]);
        let mut values = vec![0.0, self.probe_xu];
        for _ in 1..self.n {
            values.push(rng.random::<f64>() * 2.0 - 1.0);
            values.push(rng.sample::<f64, _>(StandardNormal));
        }
        let cov = CovariateTable::new(self.n, 2, values, vec!["xo".into(), "xu".into()], vec![0], vec![1])?;
        let mut t = Vec::with_capacity(self.n);
        let mut y = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let xu = cov.get(i, 1);
            let p = 1.0 / (1.0 + (-self.selection * xu).exp());
            let ti = u8::from(rng.random::<f64>() < p);
            t.push(ti);
            y.push(self.tau * f64::from(ti) + self.gamma * xu + rng.sample::<f64, _>(StandardNormal));
        }
        Ok((cov, t, y))
    }

    /// Links of the probe only; the rest of the network does not enter its group.
    pub fn probe_network(&self, cov: &CovariateTable, seed: u64) -> Result<Network> {
        let spec = self.link_spec();
        spec.validate(Some(cov.d()))?;
        let edges = (1..self.n).filter(|&j| pair_uniform(seed, 0, j) < pair_probability(cov, 0, j, &spec)).map(|j| (0, j));
        Network::from_edges(self.n, edges)
    }
}

/// Bias of the probe's CATE under top-k κ-truncation, for each `k` in `ks`, over `reps`
/// replications. Replications where a group has an empty arm are not counted.
pub fn kappa_bias_sweep(design: &DenseDesign, ks: &[Option<usize>], reps: usize, base_seed: u64) -> Result<Vec<KappaPoint>> {
    if reps < 2 {
        return Err(Error::Input("need at least two replications".into()));
    }
    let per_rep: Vec<Vec<Option<(f64, usize)>>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(base_seed, &[r as u64]);
            let (cov, t, y) = design.draw(seed)?;
            let net = design.probe_network(&cov, derive_seed(seed, &[1]))?;
            let h = EuclideanDiscrepancy { cov: &cov, cols: &[0] };
            Ok(ks
                .iter()
                .map(|&k| {
                    let k = k.unwrap_or(usize::MAX);
                    let members = kappa_truncated_group(&net, 0, &h, KappaPolicy::TopK(Some(k)));
                    let size = members.len();
                    let weights = vec![1.0; size];
                    let g = ComparisonGroup::new(0, members, weights, &t).ok()?;
                    cate_estimate(&g, &y).ok().map(|e| (e.point - design.tau, size))
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(col, &k)| {
            let errs: Vec<f64> = per_rep.iter().filter_map(|r| r[col].map(|e| e.0)).collect();
            let sizes: Vec<f64> = per_rep.iter().filter_map(|r| r[col].map(|e| e.1 as f64)).collect();
            let m = errs.len();
            KappaPoint {
                top_k: k,
                bias: pairwise_sum(&errs) / m as f64,
                mc_se: if m > 1 { sample_sd(&errs) / (m as f64).sqrt() } else { f64::NAN },
                mean_group_size: pairwise_sum(&sizes) / m as f64,
                successes: m,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_network_is_a_star_with_dense_degree() {
        let d = DenseDesign { n: 400, ..Default::default() };
        let (cov, t, y) = d.draw(3).unwrap();
        assert_eq!((cov.get(0, 0), cov.get(0, 1)), (0.0, 0.5));
        assert_eq!((t.len(), y.len()), (400, 400));
        let net = d.probe_network(&cov, 4).unwrap();
        assert_eq!(net.edge_count(), net.degree(0));
        assert!(net.degree(0) > 40, "degree {}", net.degree(0));
    }

    #[test]
    fn sweep_shapes_and_full_group_is_biased_upward() {
        let d = DenseDesign::default();
        let pts = kappa_bias_sweep(&d, &[None, Some(10)], 100, 1).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].mean_group_size > pts[1].mean_group_size);
        // treated neighbors have higher x^u than untreated ones
        assert!(pts[0].bias > 3.0 * pts[0].mc_se, "{:?}", pts[0]);
    }
}

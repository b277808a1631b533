use rayon::prelude::*;

use super::link::LinkSpec;
use super::{CovariateTable, Network};
use crate::error::Result;
use crate::rng::{mix64, pair_uniform};

/// Draws a network: the pair `{i, j}` links iff its shock is at most the link probability.
///
/// Shocks are keyed by `(seed, min(i, j), max(i, j))`, so the result does not depend on
/// thread count or iteration order.
pub fn sample_network(cov: &CovariateTable, spec: &LinkSpec, seed: u64) -> Result<Network> {
    spec.validate(Some(cov.d()))?;
    let n = cov.n();
    let upper: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .filter(|&j| pair_links(cov, spec, seed, i, j))
                .collect()
        })
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, ups) in upper.iter().enumerate() {
        for &j in ups {
            adj[j].push(i);
        }
    }
    for (i, ups) in upper.into_iter().enumerate() {
        adj[i].extend(ups);
    }
    Ok(Network::from_sorted_adjacency(adj))
}

/// Number of edges the network drawn with `seed` would have, without storing it.
pub fn count_edges(cov: &CovariateTable, spec: &LinkSpec, seed: u64) -> Result<usize> {
    spec.validate(Some(cov.d()))?;
    let n = cov.n();
    Ok((0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).filter(|&j| pair_links(cov, spec, seed, i, j)).count())
        .sum())
}

#[inline]
fn pair_links(cov: &CovariateTable, spec: &LinkSpec, seed: u64, i: usize, j: usize) -> bool {
    let p = spec.family.eval(spec.scale * spec.pair_argument(cov, i, j));
    if p <= 0.0 {
        return false;
    }
    if p >= 1.0 {
        return true;
    }
    shock(seed, i, j) <= p
}

/// Shock in the open interval `(0, 1)`, so probabilities 0 and 1 are respected exactly.
#[inline]
fn shock(seed: u64, i: usize, j: usize) -> f64 {
    let u = pair_uniform(seed, i, j);
    // pair_uniform has 53-bit resolution; shift by half a step away from 0.
    u + 0.5 / (1u64 << 53) as f64
}

/// Seed of the `r`-th resampled network under a base seed.
pub(crate) fn replicate_seed(seed: u64, r: usize) -> u64 {
    mix64(seed ^ mix64(r as u64 + 1))
}

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{LinkFamily, Network};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transitivity {
    /// `3 * triangles / connected triples`, 0 when there are no triples.
    pub value: f64,
    pub triangles: u64,
    pub triples: u64,
    pub no_triples: bool,
}

/// Global transitivity of a network.
pub fn clustering_coefficient(net: &Network) -> Transitivity {
    let n = net.n();
    let triangles: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let ni = net.neighbors(i);
            let mut count = 0u64;
            for &j in ni.iter().filter(|&&j| j > i) {
                // common neighbors k > j, by merging the sorted lists
                let nj = net.neighbors(j);
                let (mut a, mut b) = (ni.partition_point(|&k| k <= j), nj.partition_point(|&k| k <= j));
                while a < ni.len() && b < nj.len() {
                    match ni[a].cmp(&nj[b]) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            count += 1;
                            a += 1;
                            b += 1;
                        }
                    }
                }
            }
            count
        })
        .sum();
    let triples: u64 = (0..n)
        .map(|i| {
            let d = net.degree(i) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let value = if triples == 0 { 0.0 } else { 3.0 * triangles as f64 / triples as f64 };
    Transitivity { value, triangles, triples, no_triples: triples == 0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub se: f64,
    pub draws: usize,
}

/// Large-network limit of the clustering coefficient under a homophilic link shape `g` in
/// `d_link` dimensions:
///
/// `∫ g(|a-b|) g(|a-c|) g(|b-c|) / ∫ g(|a-b|) g(|a-c|)`.
///
/// Fixing `a = 0` and drawing `b, c` independently from the density proportional to `g(|x|)`
/// turns the ratio into `E[g(|b - c|)]`, which is estimated by Monte Carlo.
pub fn clustering_limit(family: &LinkFamily, d_link: usize, mc_draws: usize, seed: u64) -> Result<McEstimate> {
    clustering_limit_scaled(family, 1.0, d_link, mc_draws, seed)
}

/// As [`clustering_limit`] for the link shape `x -> g(arg_scale * x)`.
pub fn clustering_limit_scaled(
    family: &LinkFamily,
    arg_scale: f64,
    d_link: usize,
    mc_draws: usize,
    seed: u64,
) -> Result<McEstimate> {
    if d_link == 0 || mc_draws < 2 {
        return Err(Error::Input("clustering_limit needs d_link >= 1 and at least two draws".into()));
    }
    if !(arg_scale > 0.0) {
        return Err(Error::Input("argument scale must be positive".into()));
    }
    let g0 = family.eval(0.0);
    if !(g0 > 0.0) {
        return Err(Error::NotIntegrable("g(0) = 0, the link shape integrates to zero".into()));
    }
    let sampler = RadialSampler::new(family, arg_scale, d_link)?;
    const CHUNK: usize = 4096;
    let chunks = mc_draws.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, &[c as u64]);
            let len = CHUNK.min(mc_draws - c * CHUNK);
            let mut b = vec![0.0; d_link];
            let mut cc = vec![0.0; d_link];
            let vals: Vec<f64> = (0..len)
                .map(|_| {
                    sampler.draw(&mut rng, &mut b);
                    sampler.draw(&mut rng, &mut cc);
                    let dist = b.iter().zip(&cc).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                    family.eval(arg_scale * dist)
                })
                .collect();
            let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
            (pairwise_sum(&vals), pairwise_sum(&sq))
        })
        .collect();
    let sum: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let sumsq: Vec<f64> = parts.iter().map(|p| p.1).collect();
    let m = mc_draws as f64;
    let mean = pairwise_sum(&sum) / m;
    let var = ((pairwise_sum(&sumsq) / m - mean * mean) * m / (m - 1.0)).max(0.0);
    Ok(McEstimate { value: mean, se: (var / m).sqrt(), draws: mc_draws })
}

/// Draws points with density proportional to `g(arg_scale * |x|)` on `R^d`.
enum RadialSampler<'a> {
    Gaussian { sd: f64 },
    /// Uniform in a ball, then accepted with probability `g(arg_scale * r) / g(0)`.
    Ball { radius: f64, family: &'a LinkFamily, arg_scale: f64, g0: f64 },
}

impl<'a> RadialSampler<'a> {
    fn new(family: &'a LinkFamily, arg_scale: f64, _d: usize) -> Result<Self> {
        match family.support() {
            None => match family {
                LinkFamily::Gaussian => Ok(RadialSampler::Gaussian { sd: 1.0 / arg_scale }),
                _ => Err(Error::NotIntegrable(format!("no sampler for unbounded {} shape", family.label()))),
            },
            Some(r) => Ok(RadialSampler::Ball {
                radius: r / arg_scale,
                family,
                arg_scale,
                g0: family.eval(0.0),
            }),
        }
    }

    fn draw(&self, rng: &mut impl Rng, out: &mut [f64]) {
        match *self {
            RadialSampler::Gaussian { sd } => {
                for x in out.iter_mut() {
                    *x = sd * rng.sample::<f64, _>(StandardNormal);
                }
            }
            RadialSampler::Ball { radius, family, arg_scale, g0 } => loop {
                uniform_in_ball(rng, radius, out);
                let r = out.iter().map(|x| x * x).sum::<f64>().sqrt();
                let accept = family.eval(arg_scale * r) / g0;
                if accept >= 1.0 || rng.random::<f64>() < accept {
                    return;
                }
            },
        }
    }
}

fn uniform_in_ball(rng: &mut impl Rng, radius: f64, out: &mut [f64]) {
    let d = out.len();
    let mut norm = 0.0;
    while norm == 0.0 {
        for x in out.iter_mut() {
            *x = rng.sample::<f64, _>(StandardNormal);
        }
        norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    for x in out.iter_mut() {
        *x *= r / norm;
    }
}

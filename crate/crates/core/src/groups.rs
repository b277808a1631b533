//! Comparison groups built from network structure.
//!
//! A comparison group for unit `i` is a set of peers used as counterfactual donors: the
//! order-`M` neighborhood, units sharing at least `c` friends with `i`, or (in dense
//! networks) the neighbors whose observed discrepancy `h` makes the link least explicable by
//! observables. Members can carry Gaussian kernel weights on covariates that do not enter
//! network formation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{CovariateTable, LinkFamily, Network, PairDiscrepancy};
use crate::numeric::sample_sd;

/// Units within `m` hops of `i`, excluding `i`, sorted.
pub fn neighborhood(net: &Network, i: usize, m: usize) -> Vec<usize> {
    let n = net.n();
    let mut seen = vec![false; n];
    seen[i] = true;
    let mut frontier = vec![i];
    let mut out = Vec::new();
    for _ in 0..m {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in net.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    out.sort_unstable();
    out
}

/// Units `j != i` sharing at least `c` neighbors with `i`. A direct link is not required.
pub fn common_friends_group(net: &Network, i: usize, c: usize) -> Vec<usize> {
    let mut two_hop: Vec<usize> = net
        .neighbors(i)
        .iter()
        .flat_map(|&k| net.neighbors(k).iter().copied())
        .filter(|&j| j != i)
        .collect();
    two_hop.sort_unstable();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < two_hop.len() {
        let j = two_hop[pos];
        let run = two_hop[pos..].iter().take_while(|&&x| x == j).count();
        if run >= c {
            out.push(j);
        }
        pos += run;
    }
    out
}

/// Truncation threshold for dense-network comparison groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaPolicy {
    /// Keep neighbors with `h > kappa`.
    Explicit(f64),
    /// Keep the `k` neighbors with the largest `h`; `None` uses `max(5, ceil(ln n))`.
    TopK(Option<usize>),
}

/// Default number of retained neighbors under top-k truncation.
pub fn default_top_k(n: usize) -> usize {
    ((n as f64).ln().ceil() as usize).max(5)
}

/// Neighbors of `i` retained by κ-truncation, sorted by index.
pub fn kappa_truncated_group(
    net: &Network,
    i: usize,
    h: &dyn PairDiscrepancy,
    policy: KappaPolicy,
) -> Vec<usize> {
    let nbrs = net.neighbors(i);
    match policy {
        KappaPolicy::Explicit(kappa) => nbrs.iter().copied().filter(|&j| h.h(i, j) > kappa).collect(),
        KappaPolicy::TopK(k) => {
            let k = k.unwrap_or_else(|| default_top_k(net.n()));
            if nbrs.len() <= k {
                return nbrs.to_vec();
            }
            let mut scored: Vec<(f64, usize)> = nbrs.iter().map(|&j| (h.h(i, j), j)).collect();
            // largest h first; ties broken by smaller index
            scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut out: Vec<usize> = scored[..k].iter().map(|&(_, j)| j).collect();
            out.sort_unstable();
            out
        }
    }
}

/// Largest observed discrepancy among linked pairs: an estimate of the end of the link
/// function's support.
pub fn support_end_estimate(net: &Network, h: &dyn PairDiscrepancy) -> Result<f64> {
    net.edges()
        .map(|(i, j)| h.h(i, j))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        .ok_or_else(|| Error::Estimation("support end needs at least one edge".into()))
}

/// κ-truncation is only operationalized for link functions with bounded support.
pub fn require_bounded_support(family: &LinkFamily) -> Result<f64> {
    family.support().ok_or_else(|| {
        Error::Input(format!(
            "kappa truncation needs a link function with bounded support; {} is unbounded",
            family.label()
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum GroupMode {
    OrderM { m: usize },
    CommonFriends { c: usize },
    KappaTruncation { policy: KappaPolicy },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthRule {
    /// `1.06 * sd * m^(-1/5)` with `m` the mean group size.
    Silverman,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRule {
    pub mode: GroupMode,
    /// Observed columns controlled by kernel weights.
    #[serde(default)]
    pub kernel_cols: Vec<usize>,
    #[serde(default = "default_bandwidth")]
    pub bandwidth: BandwidthRule,
}

fn default_bandwidth() -> BandwidthRule {
    BandwidthRule::Silverman
}

impl GroupRule {
    pub fn order_m(m: usize) -> Self {
        Self { mode: GroupMode::OrderM { m }, kernel_cols: Vec::new(), bandwidth: BandwidthRule::Silverman }
    }

    pub fn common_friends(c: usize) -> Self {
        Self { mode: GroupMode::CommonFriends { c }, kernel_cols: Vec::new(), bandwidth: BandwidthRule::Silverman }
    }

    pub fn kappa(policy: KappaPolicy) -> Self {
        Self {
            mode: GroupMode::KappaTruncation { policy },
            kernel_cols: Vec::new(),
            bandwidth: BandwidthRule::Silverman,
        }
    }

    pub fn with_kernel(mut self, cols: Vec<usize>, bandwidth: BandwidthRule) -> Self {
        self.kernel_cols = cols;
        self.bandwidth = bandwidth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            GroupMode::OrderM { m: 0 } => return Err(Error::Input("order M must be at least 1".into())),
            GroupMode::CommonFriends { c: 0 } => return Err(Error::Input("c must be at least 1".into())),
            GroupMode::KappaTruncation { policy: KappaPolicy::TopK(Some(0)) } => {
                return Err(Error::Input("top-k needs k >= 1".into()))
            }
            GroupMode::KappaTruncation { policy: KappaPolicy::Explicit(k) } if k.is_nan() => {
                return Err(Error::Input("kappa must not be NaN".into()))
            }
            _ => {}
        }
        if let BandwidthRule::Explicit(b) = self.bandwidth {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::Input(format!("bandwidth must be positive, got {b}")));
            }
        }
        Ok(())
    }

    /// Short label such as `M=1` or `c=2`.
    pub fn label(&self) -> String {
        match self.mode {
            GroupMode::OrderM { m } => format!("M={m}"),
            GroupMode::CommonFriends { c } => format!("c={c}"),
            GroupMode::KappaTruncation { policy: KappaPolicy::Explicit(k) } => format!("kappa>{k}"),
            GroupMode::KappaTruncation { policy: KappaPolicy::TopK(Some(k)) } => format!("top{k}"),
            GroupMode::KappaTruncation { policy: KappaPolicy::TopK(None) } => "topk".into(),
        }
    }
}

/// Comparison group of one unit, with aligned weights and a split by treatment.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonGroup {
    pub owner: usize,
    pub members: Vec<usize>,
    pub weights: Vec<f64>,
    /// Positions into `members`, by treatment value.
    arms: [Vec<usize>; 2],
}

impl ComparisonGroup {
    /// Assembles a group from members, weights and the treatment vector of the sample.
    pub fn new(owner: usize, members: Vec<usize>, weights: Vec<f64>, treatment: &[u8]) -> Result<Self> {
        if members.len() != weights.len() {
            return Err(Error::Input("members and weights must align".into()));
        }
        if members.contains(&owner) {
            return Err(Error::Input(format!("unit {owner} cannot belong to its own group")));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Input("group weights must be finite and nonnegative".into()));
        }
        let mut arms = [Vec::new(), Vec::new()];
        for (pos, &j) in members.iter().enumerate() {
            let t = *treatment
                .get(j)
                .ok_or_else(|| Error::Input(format!("member {j} has no treatment value")))?;
            arms[usize::from(t == 1)].push(pos);
        }
        Ok(Self { owner, members, weights, arms })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Positions into `members` of the arm with treatment `t`.
    pub fn arm_positions(&self, t: u8) -> &[usize] {
        &self.arms[usize::from(t == 1)]
    }

    /// `(unit, weight)` pairs of the arm with treatment `t`.
    pub fn arm(&self, t: u8) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.arm_positions(t).iter().map(|&p| (self.members[p], self.weights[p]))
    }

    pub fn arm_units(&self, t: u8) -> Vec<usize> {
        self.arm(t).map(|(j, _)| j).collect()
    }

    pub fn arm_weight(&self, t: u8) -> f64 {
        self.arm(t).map(|(_, w)| w).sum()
    }

    /// Both arms carry positive weight.
    pub fn has_both_arms(&self) -> bool {
        self.arm_weight(0) > 0.0 && self.arm_weight(1) > 0.0
    }

    pub fn record(&self) -> GroupRecord {
        GroupRecord { owner: self.owner, members: self.members.clone(), weights: self.weights.clone() }
    }
}

/// JSON form of a comparison group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub owner: usize,
    pub members: Vec<usize>,
    pub weights: Vec<f64>,
}

/// Sample data needed to weight and split groups.
#[derive(Clone, Copy)]
pub struct GroupInputs<'a> {
    pub covariates: Option<&'a CovariateTable>,
    pub treatment: &'a [u8],
    pub discrepancy: Option<&'a dyn PairDiscrepancy>,
}

/// All comparison groups for a rule, plus the kernel bandwidths used.
#[derive(Debug, Clone)]
pub struct GroupSet {
    pub groups: Vec<ComparisonGroup>,
    pub bandwidths: Vec<f64>,
}

/// Raw member set of unit `i` under the rule's mode.
pub fn group_members(net: &Network, i: usize, mode: GroupMode, h: Option<&dyn PairDiscrepancy>) -> Result<Vec<usize>> {
    match mode {
        GroupMode::OrderM { m } => Ok(neighborhood(net, i, m)),
        GroupMode::CommonFriends { c } => Ok(common_friends_group(net, i, c)),
        GroupMode::KappaTruncation { policy } => {
            let h = h.ok_or_else(|| Error::Input("kappa truncation needs a discrepancy h".into()))?;
            Ok(kappa_truncated_group(net, i, h, policy))
        }
    }
}

/// Silverman bandwidth per kernel column: `1.06 * sd * m^(-1/5)`.
pub fn silverman_bandwidths(cov: &CovariateTable, cols: &[usize], mean_group_size: f64) -> Vec<f64> {
    let m = mean_group_size.max(1.0);
    cols.iter()
        .map(|&k| {
            let sd = sample_sd(&cov.column(k));
            let b = 1.06 * sd * m.powf(-0.2);
            if b > 0.0 && b.is_finite() {
                b
            } else {
                1.0
            }
        })
        .collect()
}

/// Gaussian product kernel normalized to 1 at zero distance.
pub fn kernel_weight(cov: &CovariateTable, i: usize, j: usize, cols: &[usize], bandwidths: &[f64]) -> f64 {
    let mut q = 0.0;
    for (&k, &b) in cols.iter().zip(bandwidths) {
        let u = (cov.get(i, k) - cov.get(j, k)) / b;
        q += u * u;
    }
    (-0.5 * q).exp()
}

fn assemble(
    i: usize,
    members: Vec<usize>,
    rule: &GroupRule,
    inputs: &GroupInputs<'_>,
    bandwidths: &[f64],
) -> Result<ComparisonGroup> {
    let weights = if rule.kernel_cols.is_empty() {
        vec![1.0; members.len()]
    } else {
        let cov = inputs
            .covariates
            .ok_or_else(|| Error::Input("kernel weights need covariates".into()))?;
        members
            .iter()
            .map(|&j| kernel_weight(cov, i, j, &rule.kernel_cols, bandwidths))
            .collect()
    };
    ComparisonGroup::new(i, members, weights, inputs.treatment)
}

fn resolve_bandwidths(rule: &GroupRule, inputs: &GroupInputs<'_>, mean_size: f64) -> Result<Vec<f64>> {
    if rule.kernel_cols.is_empty() {
        return Ok(Vec::new());
    }
    let cov = inputs
        .covariates
        .ok_or_else(|| Error::Input("kernel weights need covariates".into()))?;
    if let Some(&k) = rule.kernel_cols.iter().find(|&&k| k >= cov.d()) {
        return Err(Error::Input(format!("kernel column {k} out of range")));
    }
    Ok(match rule.bandwidth {
        BandwidthRule::Explicit(b) => vec![b; rule.kernel_cols.len()],
        BandwidthRule::Silverman => silverman_bandwidths(cov, &rule.kernel_cols, mean_size),
    })
}

/// Comparison group of a single unit. `bandwidths` are per kernel column; with the
/// Silverman rule they come from [`build_groups`] over the whole sample.
pub fn build_group(
    net: &Network,
    i: usize,
    rule: &GroupRule,
    inputs: &GroupInputs<'_>,
    bandwidths: &[f64],
) -> Result<ComparisonGroup> {
    rule.validate()?;
    if i >= net.n() {
        return Err(Error::Input(format!("unit {i} out of range")));
    }
    let members = group_members(net, i, rule.mode, inputs.discrepancy)?;
    assemble(i, members, rule, inputs, bandwidths)
}

/// Builds every unit's comparison group. The Silverman bandwidth uses the mean raw group
/// size over all units.
pub fn build_groups(net: &Network, rule: &GroupRule, inputs: &GroupInputs<'_>) -> Result<GroupSet> {
    rule.validate()?;
    let n = net.n();
    if inputs.treatment.len() != n {
        return Err(Error::Input(format!("{} treatments for {n} units", inputs.treatment.len())));
    }
    if let Some(cov) = inputs.covariates {
        if cov.n() != n {
            return Err(Error::Input(format!("{} covariate rows for {n} units", cov.n())));
        }
    }
    let members: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| group_members(net, i, rule.mode, inputs.discrepancy))
        .collect::<Result<_>>()?;
    let mean_size = members.iter().map(Vec::len).sum::<usize>() as f64 / n.max(1) as f64;
    let bandwidths = resolve_bandwidths(rule, inputs, mean_size)?;
    let groups = members
        .into_par_iter()
        .enumerate()
        .map(|(i, m)| assemble(i, m, rule, inputs, &bandwidths))
        .collect::<Result<_>>()?;
    Ok(GroupSet { groups, bandwidths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::PairTable;
    use proptest::prelude::*;

    fn path3() -> Network {
        Network::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn neighborhood_on_path() {
        assert_eq!(neighborhood(&path3(), 0, 1), vec![1]);
        assert_eq!(neighborhood(&path3(), 0, 2), vec![1, 2]);
    }

    #[test]
    fn neighborhood_saturates_at_component() {
        let net = Network::from_edges(6, [(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap();
        assert_eq!(neighborhood(&net, 1, 10), vec![0, 2, 3]);
    }

    #[test]
    fn common_friends_triangle_and_cycle() {
        let k3 = Network::complete(3);
        assert_eq!(common_friends_group(&k3, 0, 1), vec![1, 2]);
        assert!(common_friends_group(&k3, 0, 2).is_empty());
        let c4 = Network::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(common_friends_group(&c4, 0, 2), vec![2]);
    }

    fn star_table() -> (Network, PairTable) {
        let net = Network::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut v = vec![0.0; 16];
        for (j, h) in [(1, 0.1), (2, 0.5), (3, 0.9)] {
            v[j] = h;
            v[j * 4] = h;
        }
        (net, PairTable::new(4, v).unwrap())
    }

    #[test]
    fn kappa_truncation_cases() {
        let (net, h) = star_table();
        assert_eq!(kappa_truncated_group(&net, 0, &h, KappaPolicy::Explicit(f64::NEG_INFINITY)), vec![1, 2, 3]);
        assert!(kappa_truncated_group(&net, 0, &h, KappaPolicy::Explicit(0.9)).is_empty());
        assert_eq!(kappa_truncated_group(&net, 0, &h, KappaPolicy::TopK(Some(2))), vec![2, 3]);
        assert_eq!(kappa_truncated_group(&net, 0, &h, KappaPolicy::TopK(Some(5))), vec![1, 2, 3]);
    }

    #[test]
    fn default_top_k_rule() {
        assert_eq!(default_top_k(10), 5);
        assert_eq!(default_top_k(500), 7);
        assert_eq!(default_top_k(100_000), 12);
    }

    #[test]
    fn support_end_cases() {
        let (net, h) = star_table();
        assert_eq!(support_end_estimate(&net, &h).unwrap(), 0.9);
        let single = Network::from_edges(4, [(0, 2)]).unwrap();
        assert_eq!(support_end_estimate(&single, &h).unwrap(), 0.5);
        assert!(support_end_estimate(&Network::empty(4), &h).is_err());
        let more = Network::from_edges(4, [(0, 2), (0, 3)]).unwrap();
        assert!(support_end_estimate(&more, &h).unwrap() > 0.5);
    }

    #[test]
    fn support_end_on_complete_graph_is_max_distance() {
        let cov = CovariateTable::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![1.0, 1.0]]).unwrap();
        let cols = [0, 1];
        let h = crate::netgen::EuclideanDiscrepancy { cov: &cov, cols: &cols };
        assert_eq!(support_end_estimate(&Network::complete(3), &h).unwrap(), 5.0);
    }

    #[test]
    fn unbounded_support_is_rejected() {
        assert!(require_bounded_support(&LinkFamily::Gaussian).is_err());
        assert_eq!(require_bounded_support(&LinkFamily::LinearMax).unwrap(), 1.0);
    }

    #[test]
    fn build_group_weights_and_arms() {
        let k3 = Network::complete(3);
        let t = [1u8, 0, 0];
        let inputs = GroupInputs { covariates: None, treatment: &t, discrepancy: None };
        let g = build_group(&k3, 0, &GroupRule::order_m(1), &inputs, &[]).unwrap();
        assert_eq!(g.members, vec![1, 2]);
        assert_eq!(g.weights, vec![1.0, 1.0]);
        assert!(g.arm_units(1).is_empty());
        assert_eq!(g.arm_units(0), vec![1, 2]);
    }

    #[test]
    fn kernel_weight_peaks_at_one() {
        let cov = CovariateTable::from_rows(&[vec![0.5], vec![0.5], vec![1.5]]).unwrap();
        let k3 = Network::complete(3);
        let t = [1u8, 0, 1];
        let inputs = GroupInputs { covariates: Some(&cov), treatment: &t, discrepancy: None };
        let rule = GroupRule::order_m(1).with_kernel(vec![0], BandwidthRule::Explicit(1.0));
        let g = build_group(&k3, 0, &rule, &inputs, &[1.0]).unwrap();
        assert_eq!(g.weights[0], 1.0);
        assert!((g.weights[1] - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn invalid_rules() {
        assert!(GroupRule::order_m(0).validate().is_err());
        assert!(GroupRule::common_friends(0).validate().is_err());
        assert!(GroupRule::order_m(1).with_kernel(vec![0], BandwidthRule::Explicit(0.0)).validate().is_err());
        assert!(ComparisonGroup::new(0, vec![0], vec![1.0], &[1]).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Network> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Network::from_edges(n, edges).unwrap()
            })
        })
    }

    fn dense(net: &Network) -> Vec<Vec<bool>> {
        let n = net.n();
        (0..n).map(|i| (0..n).map(|j| net.has_edge(i, j)).collect()).collect()
    }

    proptest! {
        #[test]
        fn neighborhoods_are_nested(net in arb_graph(12), m in 1usize..4) {
            for i in 0..net.n() {
                let a = neighborhood(&net, i, m);
                let b = neighborhood(&net, i, m + 1);
                prop_assert!(a.iter().all(|x| b.contains(x)));
                prop_assert!(!a.contains(&i));
            }
        }

        #[test]
        fn common_friends_anti_monotone(net in arb_graph(12), c in 1usize..4) {
            for i in 0..net.n() {
                let a = common_friends_group(&net, i, c + 1);
                let b = common_friends_group(&net, i, c);
                prop_assert!(a.iter().all(|x| b.contains(x)));
            }
        }

        #[test]
        fn kappa_anti_monotone(net in arb_graph(10), k1 in 0.0f64..1.0, dk in 0.0f64..1.0, seed in any::<u64>()) {
            let n = net.n();
            let mut v = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..i {
                    let h = crate::rng::pair_uniform(seed, i, j);
                    v[i * n + j] = h;
                    v[j * n + i] = h;
                }
            }
            let h = PairTable::new(n, v).unwrap();
            for i in 0..n {
                let tight = kappa_truncated_group(&net, i, &h, KappaPolicy::Explicit(k1 + dk));
                let loose = kappa_truncated_group(&net, i, &h, KappaPolicy::Explicit(k1));
                prop_assert!(tight.iter().all(|x| loose.contains(x)));
            }
        }

        #[test]
        fn set_operations_match_dense_definitions(net in arb_graph(12), m in 1usize..4, c in 1usize..3) {
            let a = dense(&net);
            let n = net.n();
            // powers of adjacency via repeated boolean products
            let mut reach = a.clone();
            let mut layer = a.clone();
            for _ in 1..m {
                let mut next = vec![vec![false; n]; n];
                for i in 0..n { for k in 0..n { if layer[i][k] { for j in 0..n { if a[k][j] { next[i][j] = true; } } } } }
                for i in 0..n { for j in 0..n { reach[i][j] |= next[i][j]; } }
                layer = next;
            }
            for i in 0..n {
                let expected: Vec<usize> = (0..n).filter(|&j| j != i && reach[i][j]).collect();
                prop_assert_eq!(neighborhood(&net, i, m), expected);
                let cf: Vec<usize> = (0..n)
                    .filter(|&j| j != i && (0..n).filter(|&k| a[i][k] && a[j][k]).count() >= c)
                    .collect();
                prop_assert_eq!(common_friends_group(&net, i, c), cf);
            }
        }

        #[test]
        fn groups_are_permutation_equivariant(net in arb_graph(10), seed in any::<u64>()) {
            let n = net.n();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut rng = crate::rng::stream(seed, &[]);
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            let relabeled = net.permuted(&perm).unwrap();
            for i in 0..n {
                let mut mapped: Vec<usize> = neighborhood(&net, i, 2).iter().map(|&j| perm[j]).collect();
                mapped.sort_unstable();
                prop_assert_eq!(neighborhood(&relabeled, perm[i], 2), mapped);
                let mut mapped: Vec<usize> = common_friends_group(&net, i, 1).iter().map(|&j| perm[j]).collect();
                mapped.sort_unstable();
                prop_assert_eq!(common_friends_group(&relabeled, perm[i], 1), mapped);
            }
        }
    }
}

use super::{Diagnostics, EstimateResult};
use crate::error::{Error, Result};
use crate::groups::ComparisonGroup;

/// Weighted summary of one treatment arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmStats {
    pub members: usize,
    pub weight: f64,
    pub mean: f64,
    /// Weighted variance with denominator `sum(w)`.
    pub variance: f64,
    /// `(sum w)^2 / sum w^2`.
    pub effective_size: f64,
}

impl ArmStats {
    pub fn of(group: &ComparisonGroup, y: &[f64], t: u8) -> Option<Self> {
        let (mut members, mut sw, mut sw2, mut swy) = (0usize, 0.0, 0.0, 0.0);
        for (j, w) in group.arm(t) {
            members += 1;
            sw += w;
            sw2 += w * w;
            swy += w * y[j];
        }
        if !(sw > 0.0) {
            return None;
        }
        let mean = swy / sw;
        let ss: f64 = group.arm(t).map(|(j, w)| w * (y[j] - mean) * (y[j] - mean)).sum();
        Some(Self { members, weight: sw, mean, variance: ss / sw, effective_size: sw * sw / sw2 })
    }
}

/// Difference between the weighted means of the treated and untreated arms of a group.
///
/// The standard error is `sqrt(s1^2/m1 + s0^2/m0)` with weighted arm variances and effective
/// sizes; it is undefined when an arm has fewer than two members.
pub fn cate_estimate(group: &ComparisonGroup, y: &[f64]) -> Result<EstimateResult> {
    let treated = ArmStats::of(group, y, 1);
    let control = ArmStats::of(group, y, 0);
    let (treated, control) = match (treated, control) {
        (Some(a), Some(b)) => (a, b),
        (a, _) => {
            return Err(Error::DegenerateGroup {
                owner: group.owner,
                reason: format!("{} arm is empty", if a.is_none() { "treated" } else { "control" }),
            })
        }
    };
    let se = (treated.members >= 2 && control.members >= 2).then(|| {
        (treated.variance / treated.effective_size + control.variance / control.effective_size).sqrt()
    });
    Ok(EstimateResult {
        estimator: "cate".into(),
        point: treated.mean - control.mean,
        se,
        n_effective: group.len(),
        theta: None,
        diagnostics: Diagnostics::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn group(members: Vec<usize>, weights: Vec<f64>, t: &[u8]) -> ComparisonGroup {
        ComparisonGroup::new(usize::MAX, members, weights, t).unwrap()
    }

    #[test]
    fn singleton_arms_have_undefined_se() {
        let y = [3.0, 1.0];
        let g = group(vec![0, 1], vec![1.0, 1.0], &[1, 0]);
        let r = cate_estimate(&g, &y).unwrap();
        assert_eq!(r.point, 2.0);
        assert_eq!(r.se, None);
    }

    #[test]
    fn hand_computed_se() {
        let y = [2.0, 4.0, 1.0, 1.0];
        let g = group(vec![0, 1, 2, 3], vec![1.0; 4], &[1, 1, 0, 0]);
        let r = cate_estimate(&g, &y).unwrap();
        assert_eq!(r.point, 2.0);
        assert_relative_eq!(r.se.unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn weighted_means() {
        let y = [1.0, 3.0, 0.0];
        let g = group(vec![0, 1, 2], vec![1.0, 3.0, 1.0], &[1, 1, 0]);
        assert_relative_eq!(cate_estimate(&g, &y).unwrap().point, 2.5, epsilon = 1e-15);
    }

    #[test]
    fn empty_arm_is_degenerate() {
        let g = group(vec![0, 1], vec![1.0, 1.0], &[0, 0]);
        assert!(matches!(cate_estimate(&g, &[1.0, 2.0]), Err(Error::DegenerateGroup { .. })));
    }

    #[test]
    fn se_shrinks_with_larger_arm_of_same_variance() {
        // arm values alternate so the weighted variance stays 1
        let mut last = f64::INFINITY;
        for size in [2usize, 4, 8, 16] {
            let mut y = Vec::new();
            let mut t = Vec::new();
            for k in 0..size {
                y.push(if k % 2 == 0 { 1.0 } else { -1.0 });
                t.push(1u8);
            }
            y.extend([0.0, 1.0]);
            t.extend([0u8, 0]);
            let g = group((0..y.len()).collect(), vec![1.0; y.len()], &t);
            let se = cate_estimate(&g, &y).unwrap().se.unwrap();
            assert!(se <= last);
            last = se;
        }
    }
}

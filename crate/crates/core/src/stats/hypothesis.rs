use serde::{Deserialize, Serialize};

use super::dist::{f_survival, t_two_tailed_p};
use super::{mean, sample_variance, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub f: f64,
    pub p: f64,
    pub df_between: usize,
    pub df_within: usize,
}

/// One-way analysis of variance across `groups`.
pub fn one_way_anova(groups: &[Vec<f64>]) -> Result<AnovaResult, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(groups.len()));
    }
    if let Some(i) = groups.iter().position(Vec::is_empty) {
        return Err(StatsError::EmptyGroup(i));
    }
    let total: usize = groups.iter().map(Vec::len).sum();
    if total <= groups.len() {
        return Err(StatsError::TooFewObservations {
            needed: groups.len() + 1,
            got: total,
        });
    }
    let grand = groups.iter().flatten().sum::<f64>() / total as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = mean(g);
        ssb += g.len() as f64 * (m - grand) * (m - grand);
        ssw += g.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
    }
    let df_between = groups.len() - 1;
    let df_within = total - groups.len();
    let msb = ssb / df_between as f64;
    let msw = ssw / df_within as f64;
    let f = if msb == 0.0 {
        0.0
    } else if msw == 0.0 {
        f64::INFINITY
    } else {
        msb / msw
    };
    Ok(AnovaResult {
        f,
        p: f_survival(f, df_between as f64, df_within as f64),
        df_between,
        df_within,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub p: f64,
    pub df: usize,
    pub mean_difference: f64,
}

/// Paired t-test on `a - b`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(StatsError::TooFewObservations { needed: 2, got: a.len() });
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = mean(&d);
    let var = sample_variance(&d);
    let df = d.len() - 1;
    if var == 0.0 {
        if m == 0.0 {
            return Ok(TTestResult {
                t: 0.0,
                p: 1.0,
                df,
                mean_difference: 0.0,
            });
        }
        return Err(StatsError::ZeroVariance { mean: m });
    }
    let t = m / (var / d.len() as f64).sqrt();
    Ok(TTestResult {
        t,
        p: t_two_tailed_p(t, df as f64),
        df,
        mean_difference: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_constant_groups() {
        let r = one_way_anova(&[vec![2.0; 4], vec![2.0; 3], vec![2.0; 5]]).unwrap();
        assert_eq!(r.f, 0.0);
        assert_eq!(r.p, 1.0);
        assert_eq!((r.df_between, r.df_within), (2, 9));
    }

    #[test]
    fn anova_textbook() {
        // Means 2, 5, 8 with SSW = 6 over 6 df and SSB = 54 over 2 df: F = 27
        let r = one_way_anova(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]]).unwrap();
        assert!((r.f - 27.0).abs() < 1e-12);
        assert!(r.p < 0.01);
    }

    #[test]
    fn anova_input_errors() {
        assert_eq!(one_way_anova(&[vec![1.0]]), Err(StatsError::TooFewGroups(1)));
        assert_eq!(one_way_anova(&[vec![1.0], vec![]]), Err(StatsError::EmptyGroup(1)));
    }

    #[test]
    fn paired_equal_samples() {
        let a = [1.0, 5.0, 3.0];
        let r = paired_t_test(&a, &a).unwrap();
        assert_eq!((r.t, r.p), (0.0, 1.0));
    }

    #[test]
    fn paired_constant_shift() {
        let a = [2.0, 3.0, 4.0];
        let b = [1.0, 2.0, 3.0];
        assert_eq!(paired_t_test(&a, &b), Err(StatsError::ZeroVariance { mean: 1.0 }));
    }

    #[test]
    fn paired_known_value() {
        // d = [1, 2, 3]: mean 2, sd 1, t = 2 sqrt(3)
        let r = paired_t_test(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((r.t - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.df, 2);
        assert_eq!(paired_t_test(&[1.0], &[1.0, 2.0]).unwrap_err(), StatsError::LengthMismatch { expected: 1, got: 2 });
    }
}

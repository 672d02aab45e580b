use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::LearnError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub p: f64,
    pub df: usize,
}

/// Two-tailed paired t-test on `a[i] - b[i]`. All-zero differences give
/// `p = 1`; constant non-zero differences give the smallest positive `p`.
pub fn paired_ttest(a: &[f64], b: &[f64]) -> Result<TTest, LearnError> {
    if a.len() != b.len() {
        return Err(LearnError::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.len() < 2 {
        return Err(LearnError::InvalidConfig("a paired t-test needs at least two pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let df = d.len() - 1;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if d.iter().all(|&x| x == 0.0) {
        return Ok(TTest { t: 0.0, p: 1.0, df });
    }
    if var == 0.0 {
        return Ok(TTest {
            t: mean.signum() * f64::INFINITY,
            p: f64::MIN_POSITIVE,
            df,
        });
    }
    let t = mean / (var / n).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    let p = (2.0 * dist.cdf(-t.abs())).min(1.0);
    Ok(TTest { t, p, df })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_conventions() {
        let a = [0.7, 0.8, 0.9];
        assert_eq!(paired_ttest(&a, &a).unwrap().p, 1.0);
        let r = paired_ttest(&[2.0; 5], &[1.0; 5]).unwrap();
        assert_eq!(r.p, f64::MIN_POSITIVE);
        assert!(paired_ttest(&a, &a[..2]).is_err());
    }

    #[test]
    fn hand_statistic() {
        let r = paired_ttest(&[2.0, -1.0, 3.0, 0.0, 1.0], &[0.0; 5]).unwrap();
        assert!((r.t - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.df, 4);
        assert!(r.p > 0.2 && r.p < 0.25, "{}", r.p);
    }
}

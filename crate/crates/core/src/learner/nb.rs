use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use super::{check_training, LearnError};
use crate::beliefnet::sigmoid;
use crate::corpus::Label;

pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Gaussian naive Bayes; index 0 is High, 1 is Low.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub mean: [Vec<f64>; 2],
    pub variance: [Vec<f64>; 2],
    pub log_prior: [f64; 2],
}

pub fn train_nb(x: &Array2<f64>, y: &[Label]) -> Result<NbModel, LearnError> {
    check_training(x, y)?;
    let n = y.len() as f64;
    let fit = |high: bool| {
        let rows: Vec<usize> = (0..y.len()).filter(|&i| y[i].is_high() == high).collect();
        let sub = x.select(Axis(0), &rows);
        let mean = sub.mean_axis(Axis(0)).expect("class present").to_vec();
        let var = sub.var_axis(Axis(0), 0.0).mapv(|v| v.max(VARIANCE_FLOOR)).to_vec();
        let prior = ((rows.len() as f64 + 1.0) / (n + 2.0)).ln();
        (mean, var, prior)
    };
    let (mh, vh, ph) = fit(true);
    let (ml, vl, pl) = fit(false);
    Ok(NbModel {
        mean: [mh, ml],
        variance: [vh, vl],
        log_prior: [ph, pl],
    })
}

impl NbModel {
    pub fn dim(&self) -> usize {
        self.mean[0].len()
    }

    fn log_joint(&self, c: usize, x: ArrayView1<f64>) -> f64 {
        let mut s = self.log_prior[c];
        for (j, &xj) in x.iter().enumerate() {
            let v = self.variance[c][j];
            let d = xj - self.mean[c][j];
            s -= 0.5 * ((2.0 * std::f64::consts::PI * v).ln() + d * d / v);
        }
        s
    }

    /// Log-posterior odds of High over Low.
    pub fn log_odds(&self, x: ArrayView1<f64>) -> Result<f64, LearnError> {
        if x.len() != self.dim() {
            return Err(LearnError::Dimension { expected: self.dim(), found: x.len() });
        }
        Ok(self.log_joint(0, x) - self.log_joint(1, x))
    }

    pub fn probability(&self, x: ArrayView1<f64>) -> Result<f64, LearnError> {
        self.log_odds(x).map(sigmoid)
    }

    pub fn predict(&self, x: ArrayView1<f64>) -> Result<Label, LearnError> {
        Ok(if self.log_odds(x)? > 0.0 { Label::High } else { Label::Low })
    }
}

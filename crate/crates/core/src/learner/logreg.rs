use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::{check_training, LearnError, DECISION_THRESHOLD};
use crate::beliefnet::sigmoid;
use crate::corpus::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogRegConfig {
    pub l2: f64,
    /// Upper bound on the step size.
    pub learning_rate: f64,
    pub n_iterations: usize,
    /// Stop once an accepted step lowers the loss by less than this.
    pub tol: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            l2: 1e-4,
            learning_rate: 0.1,
            n_iterations: 2000,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2: f64,
    pub loss_log: Vec<f64>,
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Mean log-loss plus `l2/2 · ‖w‖²` (bias unpenalized) and its gradient
/// with respect to `(w, b)`.
pub fn loss_and_gradient(x: &Array2<f64>, y: &[f64], w: &Array1<f64>, b: f64, l2: f64) -> (f64, Array1<f64>, f64) {
    let n = x.nrows() as f64;
    let z = x.dot(w) + b;
    let mut loss = 0.0;
    let mut resid = Array1::zeros(z.len());
    for (i, &zi) in z.iter().enumerate() {
        loss += softplus(zi) - y[i] * zi;
        resid[i] = sigmoid(zi) - y[i];
    }
    loss = loss / n + 0.5 * l2 * w.dot(w);
    let gw = x.t().dot(&resid) / n + l2 * w;
    let gb = resid.sum() / n;
    (loss, gw, gb)
}

/// Full-batch gradient descent from zero with step halving whenever a step
/// would raise the objective; the next step starts from twice the last
/// accepted one, capped at `learning_rate`. The L2 term is applied as a
/// proximal shrink `w / (1 + s·l2)` so a large penalty does not force tiny
/// steps on the bias.
pub fn train_logreg(x: &Array2<f64>, y: &[Label], cfg: &LogRegConfig) -> Result<LogRegModel, LearnError> {
    check_training(x, y)?;
    if !(cfg.learning_rate > 0.0 && cfg.l2 >= 0.0) {
        return Err(LearnError::InvalidConfig("learning_rate must be positive and l2 non-negative".into()));
    }
    let t: Vec<f64> = y.iter().map(|l| l.as_target()).collect();
    let mut w = Array1::zeros(x.ncols());
    let mut b = 0.0;
    let (mut loss, mut gw, mut gb) = loss_and_gradient(x, &t, &w, b, cfg.l2);
    let mut log = vec![loss];
    let mut step = cfg.learning_rate;
    for _ in 0..cfg.n_iterations {
        let mut accepted = None;
        while step > 1e-14 {
            let data_grad = &gw - &(&w * cfg.l2);
            let w2 = (&w - &(&data_grad * step)) / (1.0 + step * cfg.l2);
            let b2 = b - step * gb;
            let next = loss_and_gradient(x, &t, &w2, b2, cfg.l2);
            if next.0 <= loss {
                accepted = Some((w2, b2, next));
                break;
            }
            step *= 0.5;
        }
        let Some((w2, b2, (loss2, gw2, gb2))) = accepted else { break };
        let gain = loss - loss2;
        w = w2;
        b = b2;
        loss = loss2;
        gw = gw2;
        gb = gb2;
        log.push(loss);
        step = (2.0 * step).min(cfg.learning_rate);
        if gain < cfg.tol {
            break;
        }
    }
    Ok(LogRegModel {
        weights: w.to_vec(),
        bias: b,
        l2: cfg.l2,
        loss_log: log,
    })
}

impl LogRegModel {
    /// `w·x + b`.
    pub fn decision(&self, x: ArrayView1<f64>) -> Result<f64, LearnError> {
        if x.len() != self.weights.len() {
            return Err(LearnError::Dimension { expected: self.weights.len(), found: x.len() });
        }
        Ok(x.iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>() + self.bias)
    }

    pub fn probability(&self, x: ArrayView1<f64>) -> Result<f64, LearnError> {
        self.decision(x).map(sigmoid)
    }
}

/// `(σ(w·x + b), High iff > 0.5)`.
pub fn predict_quality(m: &LogRegModel, x: &[f64]) -> Result<(f64, Label), LearnError> {
    let p = m.probability(ArrayView1::from(x))?;
    Ok((p, if p > DECISION_THRESHOLD { Label::High } else { Label::Low }))
}

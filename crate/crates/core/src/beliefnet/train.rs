use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rbm::{check_len, sample_bernoulli, RbmLayer};
use super::BeliefError;
use crate::seed::rng_from_seed;

/// Probabilities are clamped to `[EPS, 1 − EPS]` inside the cross-entropy.
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainHyper {
    pub learning_rate: f64,
    pub weight_cost: f64,
    pub momentum_initial: f64,
    pub momentum_final: f64,
    /// First (0-based) epoch that uses `momentum_final`.
    pub momentum_switch_epoch: usize,
    pub n_epochs: usize,
    pub batch_size: usize,
    /// Standard deviation of the Gaussian weight initialization.
    pub init_std: f64,
    pub seed: u64,
}

impl Default for TrainHyper {
    fn default() -> Self {
        TrainHyper {
            learning_rate: 0.6,
            weight_cost: 0.0002,
            momentum_initial: 0.5,
            momentum_final: 0.9,
            momentum_switch_epoch: 5,
            n_epochs: 50,
            batch_size: 100,
            init_std: 0.01,
            seed: 0,
        }
    }
}

impl TrainHyper {
    pub fn validate(&self) -> Result<(), BeliefError> {
        let bad = |m: String| Err(BeliefError::InvalidHyper(m));
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return bad(format!("learning_rate {} must be finite and non-negative", self.learning_rate));
        }
        if !(self.weight_cost.is_finite() && self.weight_cost >= 0.0) {
            return bad(format!("weight_cost {} must be finite and non-negative", self.weight_cost));
        }
        for m in [self.momentum_initial, self.momentum_final] {
            if !(0.0..1.0).contains(&m) {
                return bad(format!("momentum {m} outside [0,1)"));
            }
        }
        if self.n_epochs == 0 {
            return bad("n_epochs must be at least 1".into());
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1".into());
        }
        if !(self.init_std.is_finite() && self.init_std >= 0.0) {
            return bad(format!("init_std {} must be finite and non-negative", self.init_std));
        }
        Ok(())
    }

    pub fn momentum_at(&self, epoch: usize) -> f64 {
        if epoch < self.momentum_switch_epoch {
            self.momentum_initial
        } else {
            self.momentum_final
        }
    }
}

/// Momentum state carried between CD-1 steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Velocity {
    pub weights: Array2<f64>,
    pub visible_bias: Array1<f64>,
    pub hidden_bias: Array1<f64>,
}

impl Velocity {
    pub fn zeros_like(layer: &RbmLayer) -> Self {
        Velocity {
            weights: Array2::zeros(layer.weights.raw_dim()),
            visible_bias: Array1::zeros(layer.n_visible()),
            hidden_bias: Array1::zeros(layer.n_hidden()),
        }
    }
}

/// Sufficient statistics of one CD-1 step.
#[derive(Debug, Clone, PartialEq)]
pub struct CdStatistics {
    /// `⟨a_i h_j⟩` under the data: batch mean of `a · p(h|a)ᵀ`.
    pub positive: Array2<f64>,
    /// `⟨a_i h_j⟩` under the one-step reconstruction: batch mean of
    /// `r · p(h|r)ᵀ`.
    pub negative: Array2<f64>,
    /// Mean over examples of the summed binary cross-entropy between the
    /// input and its reconstruction probabilities.
    pub reconstruction_error: f64,
}

fn cross_entropy(data: ArrayView2<f64>, recon: &Array2<f64>) -> f64 {
    let mut total = 0.0;
    for (&a, &r) in data.iter().zip(recon.iter()) {
        let r = r.clamp(EPS, 1.0 - EPS);
        total -= a * r.ln() + (1.0 - a) * (1.0 - r).ln();
    }
    total / data.nrows() as f64
}

/// One CD-1 update of `layer` on `batch` with the given `momentum`.
///
/// Positive phase uses `p(h|a)`; the hidden state is then sampled, the
/// visible layer is reconstructed as probabilities `r = p(a|h)`, and the
/// negative phase uses `p(h|r)`. Weights receive
/// `v ← μ v + ε (pos − neg − λ W)`, `W ← W + v`; biases get the analogous
/// update without the weight-cost term. Nothing is written when the update
/// would be non-finite.
pub fn cd1_step<R: Rng + ?Sized>(
    layer: &mut RbmLayer,
    batch: ArrayView2<f64>,
    hyper: &TrainHyper,
    momentum: f64,
    velocity: &mut Velocity,
    rng: &mut R,
) -> Result<CdStatistics, BeliefError> {
    if batch.nrows() == 0 {
        return Err(BeliefError::EmptyData);
    }
    check_len("batch width", layer.n_visible(), batch.ncols())?;
    check_len("velocity rows", layer.n_visible(), velocity.weights.nrows())?;
    check_len("velocity cols", layer.n_hidden(), velocity.weights.ncols())?;
    let m = batch.nrows() as f64;

    let pos_hidden = layer.hidden_probabilities_batch(batch)?;
    let hidden_sample = sample_bernoulli(&pos_hidden, rng);
    let recon = layer.visible_probabilities_batch(hidden_sample.view())?;
    let neg_hidden = layer.hidden_probabilities_batch(recon.view())?;

    let positive = batch.t().dot(&pos_hidden) / m;
    let negative = recon.t().dot(&neg_hidden) / m;
    let reconstruction_error = cross_entropy(batch, &recon);

    let lr = hyper.learning_rate;
    let vw = &velocity.weights * momentum + &((&positive - &negative - &layer.weights * hyper.weight_cost) * lr);
    let vb = &velocity.visible_bias * momentum + &((&batch - &recon).sum_axis(Axis(0)) * (lr / m));
    let vh = &velocity.hidden_bias * momentum + &((&pos_hidden - &neg_hidden).sum_axis(Axis(0)) * (lr / m));

    let finite = vw.iter().chain(&vb).chain(&vh).all(|v| v.is_finite());
    if !(finite && reconstruction_error.is_finite()) {
        return Err(BeliefError::NonFiniteUpdate);
    }

    layer.weights += &vw;
    layer.visible_bias += &vb;
    layer.hidden_bias += &vh;
    velocity.weights = vw;
    velocity.visible_bias = vb;
    velocity.hidden_bias = vh;

    Ok(CdStatistics {
        positive,
        negative,
        reconstruction_error,
    })
}

/// Per-epoch mean reconstruction cross-entropy.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainLog {
    pub epoch_errors: Vec<f64>,
}

pub(super) fn train_rbm_level(
    data: ArrayView2<f64>,
    n_hidden: usize,
    hyper: &TrainHyper,
    seed: u64,
    level: usize,
) -> Result<(RbmLayer, TrainLog), BeliefError> {
    hyper.validate()?;
    if data.nrows() == 0 {
        return Err(BeliefError::EmptyData);
    }
    if n_hidden == 0 {
        return Err(BeliefError::InvalidLayout("hidden layer needs at least one unit".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut layer = RbmLayer::random(data.ncols(), n_hidden, hyper.init_std, &mut rng);
    let mut velocity = Velocity::zeros_like(&layer);
    let mut order: Vec<usize> = (0..data.nrows()).collect();
    let mut log = TrainLog::default();

    for epoch in 0..hyper.n_epochs {
        order.shuffle(&mut rng);
        let momentum = hyper.momentum_at(epoch);
        let mut weighted_error = 0.0;
        for (batch_idx, chunk) in order.chunks(hyper.batch_size).enumerate() {
            let batch = data.select(Axis(0), chunk);
            let stats = cd1_step(&mut layer, batch.view(), hyper, momentum, &mut velocity, &mut rng).map_err(|e| match e {
                BeliefError::NonFiniteUpdate => BeliefError::NonFiniteAt {
                    level,
                    epoch,
                    batch: batch_idx,
                },
                other => other,
            })?;
            weighted_error += stats.reconstruction_error * chunk.len() as f64;
        }
        log.epoch_errors.push(weighted_error / data.nrows() as f64);
    }
    Ok((layer, log))
}

/// Train one RBM with CD-1 on the rows of `data`.
///
/// Weights start at `N(0, init_std²)`, biases at zero. Rows are reshuffled
/// every epoch and consumed in batches of `batch_size`; the momentum
/// switches from `momentum_initial` to `momentum_final` at
/// `momentum_switch_epoch`. A pure function of `(data, n_hidden, hyper)`.
pub fn train_rbm(data: ArrayView2<f64>, n_hidden: usize, hyper: &TrainHyper) -> Result<(RbmLayer, TrainLog), BeliefError> {
    train_rbm_level(data, n_hidden, hyper, hyper.seed, 0)
}

use ndarray::{Array, Array1, Array2, ArrayView1, ArrayView2, Axis, Dimension, Zip};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::BeliefError;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Independent Bernoulli draws: `1` where a uniform draw falls below `p`.
pub fn sample_bernoulli<D: Dimension, R: Rng + ?Sized>(p: &Array<f64, D>, rng: &mut R) -> Array<f64, D> {
    p.mapv(|pi| if rng.random::<f64>() < pi { 1.0 } else { 0.0 })
}

/// One binary-binary RBM: weights `W` (`n_visible × n_hidden`), visible
/// biases `b_i` and hidden biases `b_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbmLayer {
    pub weights: Array2<f64>,
    pub visible_bias: Array1<f64>,
    pub hidden_bias: Array1<f64>,
}

impl RbmLayer {
    pub fn zeros(n_visible: usize, n_hidden: usize) -> Self {
        RbmLayer {
            weights: Array2::zeros((n_visible, n_hidden)),
            visible_bias: Array1::zeros(n_visible),
            hidden_bias: Array1::zeros(n_hidden),
        }
    }

    /// Weights drawn from `N(0, std²)`, biases zero.
    pub fn random<R: Rng + ?Sized>(n_visible: usize, n_hidden: usize, std: f64, rng: &mut R) -> Self {
        let normal = Normal::new(0.0, std).expect("finite non-negative std");
        let weights = Array2::from_shape_simple_fn((n_visible, n_hidden), || normal.sample(rng));
        RbmLayer {
            weights,
            ..RbmLayer::zeros(n_visible, n_hidden)
        }
    }

    pub fn from_parts(weights: Array2<f64>, visible_bias: Array1<f64>, hidden_bias: Array1<f64>) -> Result<Self, BeliefError> {
        let (nv, nh) = weights.dim();
        check_len("visible bias", nv, visible_bias.len())?;
        check_len("hidden bias", nh, hidden_bias.len())?;
        let layer = RbmLayer {
            weights,
            visible_bias,
            hidden_bias,
        };
        if !layer.is_finite() {
            return Err(BeliefError::NonFiniteUpdate);
        }
        Ok(layer)
    }

    pub fn n_visible(&self) -> usize {
        self.weights.nrows()
    }

    pub fn n_hidden(&self) -> usize {
        self.weights.ncols()
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.visible_bias).chain(&self.hidden_bias).all(|v| v.is_finite())
    }

    /// `p(h_j = 1 | a) = σ(b_j + Σ_i a_i W_ij)`.
    pub fn hidden_probabilities(&self, a: ArrayView1<f64>) -> Result<Array1<f64>, BeliefError> {
        check_len("visible vector", self.n_visible(), a.len())?;
        let mut act = a.dot(&self.weights);
        Zip::from(&mut act).and(&self.hidden_bias).for_each(|x, &b| *x = sigmoid(*x + b));
        Ok(act)
    }

    /// `p(a_i = 1 | h) = σ(b_i + Σ_j W_ij h_j)`.
    pub fn visible_probabilities(&self, h: ArrayView1<f64>) -> Result<Array1<f64>, BeliefError> {
        check_len("hidden vector", self.n_hidden(), h.len())?;
        let mut act = self.weights.dot(&h);
        Zip::from(&mut act).and(&self.visible_bias).for_each(|x, &b| *x = sigmoid(*x + b));
        Ok(act)
    }

    /// Row-wise [`hidden_probabilities`](Self::hidden_probabilities).
    pub fn hidden_probabilities_batch(&self, a: ArrayView2<f64>) -> Result<Array2<f64>, BeliefError> {
        check_len("visible batch width", self.n_visible(), a.ncols())?;
        let mut act = a.dot(&self.weights);
        add_row_bias_sigmoid(&mut act, &self.hidden_bias);
        Ok(act)
    }

    /// Row-wise [`visible_probabilities`](Self::visible_probabilities).
    pub fn visible_probabilities_batch(&self, h: ArrayView2<f64>) -> Result<Array2<f64>, BeliefError> {
        check_len("hidden batch width", self.n_hidden(), h.ncols())?;
        let mut act = h.dot(&self.weights.t());
        add_row_bias_sigmoid(&mut act, &self.visible_bias);
        Ok(act)
    }

    /// One block-Gibbs transition from visible state `v`: sample `h ~ p(h|v)`,
    /// then `v' ~ p(v|h)`. Returns `(v', h)`.
    pub fn gibbs_step<R: Rng + ?Sized>(&self, v: ArrayView1<f64>, rng: &mut R) -> Result<(Array1<f64>, Array1<f64>), BeliefError> {
        let h = sample_bernoulli(&self.hidden_probabilities(v)?, rng);
        let v_next = sample_bernoulli(&self.visible_probabilities(h.view())?, rng);
        Ok((v_next, h))
    }
}

fn add_row_bias_sigmoid(act: &mut Array2<f64>, bias: &Array1<f64>) {
    for mut row in act.axis_iter_mut(Axis(0)) {
        Zip::from(&mut row).and(bias).for_each(|x, &b| *x = sigmoid(*x + b));
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), BeliefError> {
    if expected == found {
        Ok(())
    } else {
        Err(BeliefError::DimensionMismatch { what, expected, found })
    }
}

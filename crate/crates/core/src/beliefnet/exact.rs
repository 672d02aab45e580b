//! Exact model expectations by brute-force enumeration, for tiny RBMs.

use ndarray::Array2;

use super::rbm::RbmLayer;
use super::BeliefError;

pub const MAX_EXACT_UNITS: usize = 24;

/// `E[a_i h_j]` under `p(a, h) ∝ exp(aᵀ W h + b_vᵀ a + b_hᵀ h)`, summing
/// over all `2^(n_v + n_h)` joint binary states.
pub fn exact_rbm_statistics(layer: &RbmLayer) -> Result<Array2<f64>, BeliefError> {
    let (nv, nh) = (layer.n_visible(), layer.n_hidden());
    if nv + nh > MAX_EXACT_UNITS {
        return Err(BeliefError::TooLarge {
            units: nv + nh,
            limit: MAX_EXACT_UNITS,
        });
    }
    let bit = |state: u32, k: usize| (state >> k) & 1 == 1;
    let log_weight = |v: u32, h: u32| -> f64 {
        let mut s = 0.0;
        for i in (0..nv).filter(|&i| bit(v, i)) {
            s += layer.visible_bias[i];
            for j in (0..nh).filter(|&j| bit(h, j)) {
                s += layer.weights[[i, j]];
            }
        }
        for j in (0..nh).filter(|&j| bit(h, j)) {
            s += layer.hidden_bias[j];
        }
        s
    };

    let (n_v_states, n_h_states) = (1u32 << nv, 1u32 << nh);
    let mut max_lw = f64::NEG_INFINITY;
    for v in 0..n_v_states {
        for h in 0..n_h_states {
            max_lw = max_lw.max(log_weight(v, h));
        }
    }
    let mut z = 0.0;
    let mut acc = Array2::<f64>::zeros((nv, nh));
    for v in 0..n_v_states {
        for h in 0..n_h_states {
            let w = (log_weight(v, h) - max_lw).exp();
            z += w;
            for i in (0..nv).filter(|&i| bit(v, i)) {
                for j in (0..nh).filter(|&j| bit(h, j)) {
                    acc[[i, j]] += w;
                }
            }
        }
    }
    Ok(acc / z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn zero_parameters_give_one_quarter() {
        let e = exact_rbm_statistics(&RbmLayer::zeros(3, 2)).unwrap();
        assert!(e.iter().all(|&x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn one_by_one_with_log_three_weight() {
        let layer = RbmLayer::from_parts(array![[3f64.ln()]], array![0.0], array![0.0]).unwrap();
        let e = exact_rbm_statistics(&layer).unwrap();
        assert!((e[[0, 0]] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entries_are_probabilities_and_size_is_limited() {
        let layer = RbmLayer::from_parts(
            array![[2.0, -3.0], [0.5, 1.0], [-1.0, 4.0]],
            array![0.3, -0.2, 1.0],
            array![-0.5, 0.1],
        )
        .unwrap();
        let e = exact_rbm_statistics(&layer).unwrap();
        assert!(e.iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert!(matches!(
            exact_rbm_statistics(&RbmLayer::zeros(20, 5)),
            Err(BeliefError::TooLarge { units: 25, .. })
        ));
    }
}

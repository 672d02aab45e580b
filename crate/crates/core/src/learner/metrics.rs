use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::corpus::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// Precision, recall and F1 with High as the positive class.
pub fn prf1(predicted: &[Label], truth: &[Label]) -> Result<Prf1, LearnError> {
    if predicted.len() != truth.len() {
        return Err(LearnError::LengthMismatch { left: predicted.len(), right: truth.len() });
    }
    let (mut tp, mut fp, mut fneg) = (0u64, 0u64, 0u64);
    for (p, t) in predicted.iter().zip(truth) {
        match (p.is_high(), t.is_high()) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            _ => {}
        }
    }
    let precision = ratio(tp as f64, (tp + fp) as f64);
    let recall = ratio(tp as f64, (tp + fneg) as f64);
    Ok(Prf1 {
        precision,
        recall,
        f1: ratio(2.0 * precision * recall, precision + recall),
    })
}

/// Mann–Whitney AUC with midranks: the share of (High, Low) pairs where the
/// High example scores higher, ties counting one half.
pub fn auc(scores: &[f64], truth: &[Label]) -> Result<f64, LearnError> {
    if scores.len() != truth.len() {
        return Err(LearnError::LengthMismatch { left: scores.len(), right: truth.len() });
    }
    let n_pos = truth.iter().filter(|l| l.is_high()).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(LearnError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Doubled ranks keep midranks integral.
    let mut rank_sum2: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid2 = (i + 1 + j + 1) as u64;
        rank_sum2 += mid2 * order[i..=j].iter().filter(|&&k| truth[k].is_high()).count() as u64;
        i = j + 1;
    }
    let (p, q) = (n_pos as u64, n_neg as u64);
    let u2 = rank_sum2 - p * (p + 1);
    Ok(u2 as f64 / (2 * p * q) as f64)
}

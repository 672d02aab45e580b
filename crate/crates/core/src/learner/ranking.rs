use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::corpus::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub name: String,
    pub chi_squared: f64,
    /// Min-max rescaled to `[0, 100]` across the ranked features.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub entries: Vec<RankEntry>,
    pub n_bins: usize,
    pub note: String,
}

impl FeatureRanking {
    pub fn position(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn render(&self) -> String {
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(7).max(7);
        let mut out = format!("{:<width$}  {:>12}  {:>8}\n", "feature", "chi2", "scaled");
        for e in &self.entries {
            out.push_str(&format!("{:<width$}  {:>12.5}  {:>8.3}\n", e.name, e.chi_squared, e.scaled));
        }
        out
    }
}

fn check(values: &[f64], labels: &[Label]) -> Result<(), LearnError> {
    if values.len() != labels.len() {
        return Err(LearnError::LengthMismatch { left: values.len(), right: labels.len() });
    }
    Ok(())
}

/// Bin index per value. Features with at most `n_bins` distinct values keep
/// their categories; otherwise each distinct value goes to the equal-frequency
/// bin of its first sorted position, so ties never straddle bins.
fn discretize(values: &[f64], n_bins: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut distinct = 0usize;
    for (k, &i) in order.iter().enumerate() {
        if k == 0 || values[i] != values[order[k - 1]] {
            distinct += 1;
        }
    }
    let n = values.len();
    let mut bins = vec![0; n];
    let mut current = 0usize;
    let mut category = 0usize;
    for (k, &i) in order.iter().enumerate() {
        if k == 0 || values[i] != values[order[k - 1]] {
            if k > 0 {
                category += 1;
            }
            current = if distinct <= n_bins { category } else { k * n_bins / n };
        }
        bins[i] = current;
    }
    bins
}

fn contingency_chi_squared(bins: &[usize], labels: &[Label]) -> f64 {
    let mut table: BTreeMap<usize, [u64; 2]> = BTreeMap::new();
    for (&b, l) in bins.iter().zip(labels) {
        table.entry(b).or_default()[usize::from(!l.is_high())] += 1;
    }
    let n = labels.len() as f64;
    let col = [0, 1].map(|c| table.values().map(|r| r[c]).sum::<u64>() as f64);
    let mut chi = 0.0;
    for row in table.values() {
        let row_total = (row[0] + row[1]) as f64;
        for c in 0..2 {
            let e = row_total * col[c] / n;
            if e > 0.0 {
                chi += (row[c] as f64 - e).powi(2) / e;
            }
        }
    }
    chi
}

/// Rank named features by χ² against the label, descending; ties broken by
/// name.
pub fn chi_squared_rank(features: &[(String, Vec<f64>)], labels: &[Label], n_bins: usize) -> Result<FeatureRanking, LearnError> {
    if n_bins < 2 {
        return Err(LearnError::InvalidConfig("n_bins must be at least 2".into()));
    }
    if !(labels.iter().any(|l| l.is_high()) && labels.iter().any(|l| !l.is_high())) {
        return Err(LearnError::SingleClass);
    }
    let mut entries = Vec::with_capacity(features.len());
    for (name, values) in features {
        check(values, labels)?;
        entries.push(RankEntry {
            name: name.clone(),
            chi_squared: contingency_chi_squared(&discretize(values, n_bins), labels),
            scaled: 0.0,
        });
    }
    entries.sort_by(|a, b| b.chi_squared.total_cmp(&a.chi_squared).then_with(|| a.name.cmp(&b.name)));
    let hi = entries.first().map_or(0.0, |e| e.chi_squared);
    let lo = entries.last().map_or(0.0, |e| e.chi_squared);
    for e in &mut entries {
        e.scaled = if hi > lo { 100.0 * (e.chi_squared - lo) / (hi - lo) } else { 0.0 };
    }
    Ok(FeatureRanking {
        entries,
        n_bins,
        note: format!("chi2 over {n_bins} equal-frequency bins; scaled = min-max to [0, 100]"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRatio {
    pub lower: f64,
    pub upper: f64,
    pub size: usize,
    pub high_ratio: f64,
    pub low_ratio: f64,
}

/// Sort by value and cut into `n_groups` equal-size groups, the remainder
/// going one each to the leading groups.
pub fn distribution_report(values: &[f64], labels: &[Label], n_groups: usize) -> Result<Vec<GroupRatio>, LearnError> {
    check(values, labels)?;
    if n_groups < 2 {
        return Err(LearnError::InvalidConfig("n_groups must be at least 2".into()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let n = values.len();
    let (base, extra) = (n / n_groups, n % n_groups);
    let mut out = Vec::new();
    let mut start = 0;
    for g in 0..n_groups {
        let size = base + usize::from(g < extra);
        if size == 0 {
            continue;
        }
        let members = &order[start..start + size];
        let high = members.iter().filter(|&&i| labels[i].is_high()).count() as f64;
        out.push(GroupRatio {
            lower: values[members[0]],
            upper: values[members[size - 1]],
            size,
            high_ratio: high / size as f64,
            low_ratio: 1.0 - high / size as f64,
        });
        start += size;
    }
    Ok(out)
}

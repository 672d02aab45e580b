use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, Label};
use crate::seed::rng_from_seed;

/// Stratified assignment of pair ids to `k` folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: BTreeMap<String, usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignments.get(id).copied()
    }

    /// (train, test) for fold `f`, each in original corpus order. The train
    /// split is every pair not assigned to `f`.
    pub fn split(&self, corpus: &Corpus, fold: usize) -> (Corpus, Corpus) {
        let (test, train): (Vec<_>, Vec<_>) = corpus
            .pairs
            .iter()
            .cloned()
            .partition(|p| self.fold_of(&p.id) == Some(fold));
        (corpus.with_pairs(train), corpus.with_pairs(test))
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in self.assignments.values() {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified k-fold assignment.
///
/// Each class is shuffled independently, then the concatenation
/// (High then Low) is dealt round-robin over the folds. Per-class counts per
/// fold therefore differ by at most one, and so do total fold sizes.
pub fn make_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldPlan, CorpusError> {
    let smallest = Label::ALL.iter().map(|&l| corpus.count(l)).min().unwrap_or(0);
    if k < 2 || k > smallest {
        return Err(CorpusError::TooManyFolds { k, smallest });
    }
    let mut rng = rng_from_seed(seed);
    let mut assignments = BTreeMap::new();
    let mut next = 0usize;
    for label in Label::ALL {
        let mut ids: Vec<&str> = corpus
            .pairs
            .iter()
            .filter(|p| p.label == label)
            .map(|p| p.id.as_str())
            .collect();
        ids.shuffle(&mut rng);
        for id in ids {
            assignments.insert(id.to_string(), next % k);
            next += 1;
        }
    }
    Ok(FoldPlan { k, assignments, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusMeta, QaPair};
    use proptest::prelude::*;

    fn corpus(n_high: usize, n_low: usize) -> Corpus {
        let mk = |id: String, label| QaPair {
            id,
            question_text: String::new(),
            answer_text: String::new(),
            label,
            physician_id: String::new(),
            question_time: 0,
            answer_time: 0,
        };
        let mut pairs: Vec<QaPair> = (0..n_high).map(|i| mk(format!("h{i}"), Label::High)).collect();
        pairs.extend((0..n_low).map(|i| mk(format!("l{i}"), Label::Low)));
        Corpus::new(pairs, Default::default(), CorpusMeta::default())
    }

    fn per_class(plan: &FoldPlan, c: &Corpus, label: Label) -> Vec<usize> {
        let mut counts = vec![0; plan.k];
        for p in c.pairs.iter().filter(|p| p.label == label) {
            counts[plan.fold_of(&p.id).unwrap()] += 1;
        }
        counts
    }

    #[test]
    fn large_corpus_folds() {
        let c = corpus(1600, 1600);
        let plan = make_folds(&c, 5, 1).unwrap();
        assert_eq!(plan.fold_sizes(), vec![640; 5]);
        assert_eq!(per_class(&plan, &c, Label::High), vec![320; 5]);
        assert_eq!(per_class(&plan, &c, Label::Low), vec![320; 5]);
    }

    #[test]
    fn ten_pairs_five_folds() {
        let c = corpus(5, 5);
        let plan = make_folds(&c, 5, 9).unwrap();
        assert_eq!(plan.fold_sizes(), vec![2; 5]);
        assert_eq!(per_class(&plan, &c, Label::High), vec![1; 5]);
        assert_eq!(per_class(&plan, &c, Label::Low), vec![1; 5]);
    }

    #[test]
    fn two_folds_on_four_pairs() {
        let c = corpus(2, 2);
        let plan = make_folds(&c, 2, 0).unwrap();
        assert_eq!(plan.fold_sizes(), vec![2, 2]);
    }

    #[test]
    fn rejects_k_beyond_smallest_class() {
        let c = corpus(10, 3);
        assert!(matches!(make_folds(&c, 4, 0), Err(CorpusError::TooManyFolds { k: 4, smallest: 3 })));
        assert!(make_folds(&c, 1, 0).is_err());
    }

    proptest! {
        #[test]
        fn folds_partition_and_stratify(n_high in 2usize..60, n_low in 2usize..60, k in 2usize..6, seed in any::<u64>()) {
            prop_assume!(k <= n_high.min(n_low));
            let c = corpus(n_high, n_low);
            let plan = make_folds(&c, k, seed).unwrap();
            prop_assert_eq!(plan.assignments.len(), c.len());
            let sizes = plan.fold_sizes();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            for label in Label::ALL {
                let counts = per_class(&plan, &c, label);
                prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
            }
            for f in 0..k {
                let (train, test) = plan.split(&c, f);
                prop_assert_eq!(train.len() + test.len(), c.len());
                let test_ids: std::collections::HashSet<_> = test.pairs.iter().map(|p| &p.id).collect();
                prop_assert!(train.pairs.iter().all(|p| !test_ids.contains(&p.id)));
            }
            prop_assert_eq!(make_folds(&c, k, seed).unwrap(), plan);
        }
    }
}

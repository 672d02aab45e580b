use serde::{Deserialize, Serialize};

/// High iff the predicted probability is strictly above this.
pub const DECISION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Precision,
    Recall,
    F1,
    Auc,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Precision, Metric::Recall, Metric::F1, Metric::Auc];

    pub fn short(self) -> &'static str {
        match self {
            Metric::Precision => "P",
            Metric::Recall => "R",
            Metric::F1 => "F1",
            Metric::Auc => "AUC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub trial: usize,
    pub fold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: f64,
}

impl FoldMetrics {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
            Metric::Auc => self.auc,
        }
    }
}

/// Mean and sample (n−1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std: f64,
}

impl MetricSummary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        if values.is_empty() {
            return MetricSummary { mean: 0.0, std: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        MetricSummary { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub name: String,
    pub folds: Vec<FoldMetrics>,
    pub precision: MetricSummary,
    pub recall: MetricSummary,
    pub f1: MetricSummary,
    pub auc: MetricSummary,
    pub n_trials: usize,
    pub n_folds: usize,
    pub threshold: f64,
    pub fingerprint: String,
}

impl EvalReport {
    /// `folds` must be in (trial, fold) order.
    pub fn new(name: impl Into<String>, folds: Vec<FoldMetrics>, n_trials: usize, n_folds: usize, fingerprint: String) -> Self {
        let col = |m: Metric| MetricSummary::of(&folds.iter().map(|f| f.get(m)).collect::<Vec<_>>());
        EvalReport {
            name: name.into(),
            precision: col(Metric::Precision),
            recall: col(Metric::Recall),
            f1: col(Metric::F1),
            auc: col(Metric::Auc),
            folds,
            n_trials,
            n_folds,
            threshold: DECISION_THRESHOLD,
            fingerprint,
        }
    }

    pub fn summary(&self, m: Metric) -> MetricSummary {
        match m {
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
            Metric::Auc => self.auc,
        }
    }

    pub fn values(&self, m: Metric) -> Vec<f64> {
        self.folds.iter().map(|f| f.get(m)).collect()
    }

    pub fn render_table(reports: &[&EvalReport]) -> String {
        let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(6).max(6);
        let mut out = format!("{:<width$}", "method");
        for m in Metric::ALL {
            out.push_str(&format!("  {:>15}", m.short()));
        }
        out.push('\n');
        for r in reports {
            out.push_str(&format!("{:<width$}", r.name));
            for m in Metric::ALL {
                let s = r.summary(m);
                out.push_str(&format!("  {:>15}", format!("{:.4} ± {:.4}", s.mean, s.std)));
            }
            out.push('\n');
        }
        out
    }
}

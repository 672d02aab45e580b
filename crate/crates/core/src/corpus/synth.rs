//! Seeded generator for labeled QA corpora with planted quality signals.
//!
//! High answers reuse question words and draw from a domain lexicon; Low
//! answers draw from a promotional/template lexicon, have extreme lengths and
//! near-instant response times, and come from physicians with weaker
//! profiles. Each signal is scaled by its own strength in [0,1]; with every
//! strength at 0 the two classes are generated from identical distributions.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{
    Corpus, CorpusError, CorpusMeta, EducationGrade, HospitalGrade, Label, PhysicianGrade,
    PhysicianProfile, QaPair,
};
use crate::seed::rng_from_seed;

const DAY: i64 = 86_400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub n_high: usize,
    pub n_low: usize,
    pub domain_vocab: usize,
    pub promo_vocab: usize,
    pub general_vocab: usize,
    pub stopword_vocab: usize,
    /// 0 picks one physician per ten pairs.
    pub n_physicians: usize,
    /// Lexicon separation between classes.
    pub text_signal: f64,
    /// Question-word reuse in High answers.
    pub overlap_signal: f64,
    /// Probability that a High answer token copies a question token at full
    /// overlap signal.
    pub p_overlap: f64,
    /// Extreme lengths of Low answers.
    pub length_signal: f64,
    /// Near-zero response gaps of Low answers.
    pub gap_signal: f64,
    /// Label dependence of the answering physician's profile.
    pub social_signal: f64,
    pub missing_profile_rate: f64,
    pub missing_attribute_rate: f64,
    pub collection_time: i64,
    pub launch_time: i64,
    /// Mandatory in spec files; the CLI `--seed` flag overrides it.
    #[serde(default = "required_seed")]
    pub seed: u64,
}

fn required_seed() -> u64 {
    u64::MAX
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_high: 890,
            n_low: 110,
            domain_vocab: 80,
            promo_vocab: 40,
            general_vocab: 120,
            stopword_vocab: 8,
            n_physicians: 0,
            text_signal: 1.0,
            overlap_signal: 1.0,
            p_overlap: 0.4,
            length_signal: 1.0,
            gap_signal: 1.0,
            social_signal: 1.0,
            missing_profile_rate: 0.0,
            missing_attribute_rate: 0.02,
            collection_time: 1_458_000_000,
            launch_time: 1_136_073_600,
            seed: 0,
        }
    }
}

/// Generated corpus plus the lexicons it was drawn from.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub corpus: Corpus,
    pub domain_words: Vec<String>,
    pub stopwords: Vec<String>,
}

impl SynthSpec {
    /// Same sizes with every planted signal switched off.
    pub fn without_signal(mut self) -> Self {
        self.text_signal = 0.0;
        self.overlap_signal = 0.0;
        self.length_signal = 0.0;
        self.gap_signal = 0.0;
        self.social_signal = 0.0;
        self
    }

    /// Parse a spec document; fails when the mandatory `seed` is absent.
    pub fn from_json(text: &str) -> Result<Self, CorpusError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CorpusError::InvalidSpec(e.to_string()))?;
        if value.get("seed").and_then(|s| s.as_u64()).is_none() {
            return Err(CorpusError::InvalidSpec("missing integer `seed`".into()));
        }
        let spec: SynthSpec =
            serde_json::from_value(value).map_err(|e| CorpusError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let probs = [
            ("text_signal", self.text_signal),
            ("overlap_signal", self.overlap_signal),
            ("p_overlap", self.p_overlap),
            ("length_signal", self.length_signal),
            ("gap_signal", self.gap_signal),
            ("social_signal", self.social_signal),
            ("missing_profile_rate", self.missing_profile_rate),
            ("missing_attribute_rate", self.missing_attribute_rate),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(CorpusError::InvalidSpec(format!("{name} = {p} outside [0,1]")));
            }
        }
        for (name, n) in [
            ("domain_vocab", self.domain_vocab),
            ("promo_vocab", self.promo_vocab),
            ("general_vocab", self.general_vocab),
        ] {
            if n == 0 {
                return Err(CorpusError::InvalidSpec(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn domain_words(&self) -> Vec<String> {
        (0..self.domain_vocab).map(|i| format!("med{i}")).collect()
    }

    pub fn promo_words(&self) -> Vec<String> {
        (0..self.promo_vocab).map(|i| format!("promo{i}")).collect()
    }

    pub fn general_words(&self) -> Vec<String> {
        (0..self.general_vocab).map(|i| format!("word{i}")).collect()
    }

    pub fn stopwords(&self) -> Vec<String> {
        (0..self.stopword_vocab).map(|i| format!("sw{i}")).collect()
    }
}

/// Interpolate from the label-independent value towards the class target.
fn planted(strength: f64, null: f64, target: f64) -> f64 {
    null + strength * (target - null)
}

/// Zipf-weighted draws over a word list.
struct Lexicon {
    words: Vec<String>,
    cumulative: Vec<f64>,
}

impl Lexicon {
    fn new(words: Vec<String>) -> Self {
        let mut acc = 0.0;
        let cumulative = (0..words.len())
            .map(|r| {
                acc += 1.0 / (r as f64 + 1.0);
                acc
            })
            .collect();
        Lexicon { words, cumulative }
    }

    fn draw<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a str {
        let total = *self.cumulative.last().expect("non-empty lexicon");
        let u = rng.random::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.words.len() - 1);
        &self.words[i]
    }
}

struct Lexicons {
    domain: Lexicon,
    promo: Lexicon,
    general: Lexicon,
    stop: Option<Lexicon>,
}

fn render(tokens: &[String], rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(t);
        let last = i + 1 == tokens.len();
        if last {
            out.push('.');
        } else if rng.random::<f64>() < 0.12 {
            out.push(*['.', '!', '?'].choose(rng).unwrap());
        }
    }
    out
}

fn maybe_stopword(lex: &Lexicons, rng: &mut ChaCha8Rng) -> Option<String> {
    match &lex.stop {
        Some(stop) if rng.random::<f64>() < 0.15 => Some(stop.draw(rng).to_string()),
        _ => None,
    }
}

fn question_tokens(lex: &Lexicons, rng: &mut ChaCha8Rng) -> Vec<String> {
    let len = rng.random_range(8..=20);
    (0..len)
        .map(|_| {
            if let Some(s) = maybe_stopword(lex, rng) {
                return s;
            }
            if rng.random::<f64>() < 0.5 {
                lex.domain.draw(rng).to_string()
            } else {
                lex.general.draw(rng).to_string()
            }
        })
        .collect()
}

fn answer_tokens(spec: &SynthSpec, label: Label, question: &[String], lex: &Lexicons, rng: &mut ChaCha8Rng) -> Vec<String> {
    let high = label.is_high();
    let extreme = if high { 0.0 } else { planted(spec.length_signal, 0.0, 0.8) };
    let len = if rng.random::<f64>() < extreme {
        if rng.random::<bool>() {
            rng.random_range(3..=6)
        } else {
            rng.random_range(60..=90)
        }
    } else {
        rng.random_range(12..=40)
    };

    let overlap_null = spec.p_overlap / 2.0;
    let p_copy = planted(spec.overlap_signal, overlap_null, if high { spec.p_overlap } else { 0.0 });
    let (t_domain, t_promo) = if high { (0.65, 0.0) } else { (0.10, 0.55) };
    let p_domain = planted(spec.text_signal, 0.35, t_domain);
    let p_promo = planted(spec.text_signal, 0.15, t_promo);

    let content: Vec<&String> = question.iter().filter(|t| !t.starts_with("sw")).collect();
    (0..len)
        .map(|_| {
            if let Some(s) = maybe_stopword(lex, rng) {
                return s;
            }
            if !content.is_empty() && rng.random::<f64>() < p_copy {
                return content.choose(rng).unwrap().to_string();
            }
            let u = rng.random::<f64>();
            if u < p_domain {
                lex.domain.draw(rng).to_string()
            } else if u < p_domain + p_promo {
                lex.promo.draw(rng).to_string()
            } else {
                lex.general.draw(rng).to_string()
            }
        })
        .collect()
}

fn response_gap(spec: &SynthSpec, label: Label, rng: &mut ChaCha8Rng) -> i64 {
    let template = if label.is_high() { 0.0 } else { planted(spec.gap_signal, 0.0, 0.8) };
    if rng.random::<f64>() < template {
        rng.random_range(0..=30)
    } else {
        let lo = 300f64.ln();
        let hi = (2.0 * DAY as f64).ln();
        rng.random_range(lo..hi).exp().round() as i64
    }
}

fn lognormal_count(rng: &mut ChaCha8Rng, scale: f64, popularity: f64) -> u64 {
    let noise = Normal::<f64>::new(0.0, 0.3).unwrap().sample(rng);
    (scale * popularity * noise.exp()).round().max(0.0) as u64
}

fn make_profile(spec: &SynthSpec, id: String, good: bool, rng: &mut ChaCha8Rng) -> PhysicianProfile {
    let mu: f64 = if good { 1.0 } else { 0.0 };
    let popularity = Normal::<f64>::new(mu, 0.7).unwrap().sample(rng).exp();
    let year = 365 * DAY;
    let skew = |rng: &mut ChaCha8Rng, max: u8| -> u8 {
        let r: f64 = rng.random();
        let r = if good { r.sqrt() } else { r * r };
        ((r * (max as f64 + 1.0)).floor() as u8).min(max)
    };
    let fraction = |rng: &mut ChaCha8Rng| -> f64 {
        let lo = if good { 0.8 } else { 0.6 };
        (rng.random_range(lo..1.0f64) * 1000.0).round() / 1000.0
    };
    let gifts = lognormal_count(rng, 20.0, popularity);
    let mut p = PhysicianProfile {
        physician_id: id,
        service_rating: Some(fraction(rng)),
        patient_recommendation: Some(((3.0 + 0.4 * popularity.ln().max(-2.0)) * 10.0).round() / 10.0),
        thanks_messages: Some(lognormal_count(rng, 30.0, popularity)),
        gifts: Some(gifts),
        gift_givers: Some((gifts as f64 * rng.random_range(0.5..1.0)).round() as u64),
        care_value: Some(gifts * 10 + rng.random_range(0..10)),
        contribution_value: Some(lognormal_count(rng, 500.0, popularity)),
        total_visits: Some(lognormal_count(rng, 20_000.0, popularity)),
        previous_day_visits: Some(lognormal_count(rng, 20.0, popularity)),
        articles: Some(lognormal_count(rng, 5.0, popularity)),
        total_patients: Some(lognormal_count(rng, 200.0, popularity)),
        registered_outpatients: Some(lognormal_count(rng, 40.0, popularity)),
        previous_day_registered_outpatients: Some(rng.random_range(0..3)),
        wechat_registered_outpatients: Some(lognormal_count(rng, 3.0, popularity)),
        patient_votes: Some(lognormal_count(rng, 25.0, popularity)),
        last_online_time: Some(spec.collection_time - rng.random_range(0..30 * DAY)),
        joining_time: Some(
            spec.launch_time
                + if good {
                    rng.random_range(0..5 * year)
                } else {
                    rng.random_range(2 * year..9 * year)
                },
        ),
        grade: PhysicianGrade::new(skew(rng, PhysicianGrade::MAX)),
        hospital_grade: HospitalGrade::new(skew(rng, HospitalGrade::MAX)),
        education: EducationGrade::new(skew(rng, EducationGrade::MAX)),
        telephone_service: Some(rng.random::<f64>() < if good { 0.7 } else { 0.3 }),
        telephone_effect_satisfaction: Some(fraction(rng)),
        telephone_consultations: Some(lognormal_count(rng, 10.0, popularity)),
        telephone_attitude_satisfaction: Some(fraction(rng)),
        qr_communications: Some(lognormal_count(rng, 15.0, popularity)),
    };
    if spec.missing_attribute_rate > 0.0 {
        let drop = |rng: &mut ChaCha8Rng| rng.random::<f64>() < spec.missing_attribute_rate;
        macro_rules! maybe_clear {
            ($($field:ident),+) => { $( if drop(rng) { p.$field = None; } )+ };
        }
        maybe_clear!(
            service_rating, patient_recommendation, thanks_messages, gifts, gift_givers, care_value,
            contribution_value, total_visits, previous_day_visits, articles, total_patients,
            registered_outpatients, previous_day_registered_outpatients, wechat_registered_outpatients,
            patient_votes, last_online_time, joining_time, grade, hospital_grade, education,
            telephone_service, telephone_effect_satisfaction, telephone_consultations,
            telephone_attitude_satisfaction, qr_communications
        );
    }
    p
}

/// Generate a corpus from `spec`. Pure function of `(spec, seed)`;
/// `spec.seed` is ignored in favour of the explicit argument.
pub fn generate_synthetic(spec: &SynthSpec, seed: u64) -> Result<SynthOutput, CorpusError> {
    spec.validate()?;
    let mut rng = rng_from_seed(seed);
    let lex = Lexicons {
        domain: Lexicon::new(spec.domain_words()),
        promo: Lexicon::new(spec.promo_words()),
        general: Lexicon::new(spec.general_words()),
        stop: (spec.stopword_vocab > 0).then(|| Lexicon::new(spec.stopwords())),
    };

    let n_pairs = spec.n_high + spec.n_low;
    let n_physicians = if spec.n_physicians > 0 {
        spec.n_physicians
    } else {
        (n_pairs / 10).max(2)
    };
    let mut good_pool = Vec::new();
    let mut poor_pool = Vec::new();
    let mut profiles = BTreeMap::new();
    for i in 0..n_physicians {
        let id = format!("doc{i:05}");
        let good = i % 2 == 0;
        let profile = make_profile(spec, id.clone(), good, &mut rng);
        profiles.insert(id.clone(), profile);
        if good {
            good_pool.push(id);
        } else {
            poor_pool.push(id);
        }
    }

    let mut labels: Vec<Label> = std::iter::repeat_n(Label::High, spec.n_high)
        .chain(std::iter::repeat_n(Label::Low, spec.n_low))
        .collect();
    labels.shuffle(&mut rng);

    let start = 1_214_870_400; // 2008-07-01
    let end = spec.collection_time.max(start + DAY);
    let p_matching_pool = planted(spec.social_signal, 0.5, 0.9);
    let mut pairs = Vec::with_capacity(n_pairs);
    for (i, &label) in labels.iter().enumerate() {
        let q = question_tokens(&lex, &mut rng);
        let a = answer_tokens(spec, label, &q, &lex, &mut rng);
        let question_text = render(&q, &mut rng);
        let answer_text = render(&a, &mut rng);
        let question_time = rng.random_range(start..end);
        let answer_time = question_time + response_gap(spec, label, &mut rng);

        let matching = rng.random::<f64>() < p_matching_pool;
        let prefer_good = label.is_high() == matching;
        let pool = match (prefer_good, good_pool.is_empty(), poor_pool.is_empty()) {
            (true, false, _) | (false, _, true) => &good_pool,
            _ => &poor_pool,
        };
        let mut physician_id = pool.choose(&mut rng).unwrap().clone();
        if rng.random::<f64>() < spec.missing_profile_rate {
            physician_id = format!("unlisted{i:06}");
        }
        pairs.push(QaPair {
            id: format!("syn{i:06}"),
            question_text,
            answer_text,
            label,
            physician_id,
            question_time,
            answer_time,
        });
    }

    let meta = CorpusMeta {
        source: format!("synthetic(seed={seed})"),
        collection_time: spec.collection_time,
        launch_time: spec.launch_time,
    };
    Ok(SynthOutput {
        corpus: Corpus::new(pairs, profiles, meta),
        domain_words: spec.domain_words(),
        stopwords: spec.stopwords(),
    })
}

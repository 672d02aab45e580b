use hqa_core::beliefnet::TrainHyper;
use hqa_core::corpus::{generate_synthetic, make_folds, SynthSpec};
use hqa_core::handfeat::Lexicons;
use hqa_core::pipeline::{fit_fold, fold_seed, hand_matrix, Featurizer, Resources, TextualModel};
use hqa_core::textfeat::TokenizerMode;
use hqa_core::topicmodel::LdaConfig;
use hqa_core::PipelineConfig;

#[test]
fn test_fold_tokens_never_reach_fitted_state() {
    let out = generate_synthetic(&SynthSpec { n_high: 40, n_low: 40, ..Default::default() }, 5).unwrap();
    let res = Resources::new(
        TokenizerMode::UnicodeWords,
        true,
        out.stopwords.clone(),
        Lexicons::new(&out.stopwords, &out.domain_words, None),
    );
    let clean = out.corpus;
    let seed = 17;
    let plan = make_folds(&clean, 4, fold_seed(seed, 0)).unwrap();
    for fold in [0, 3] {
        let mut dirty = clean.clone();
        for p in dirty.pairs.iter_mut().filter(|p| plan.fold_of(&p.id) == Some(fold)) {
            p.answer_text.push_str(" qqleak qqleak qqleak");
        }
        for f in Featurizer::ALL {
            let cfg = PipelineConfig {
                featurizer: f,
                vocab_size: 40,
                dbn_layout: vec![40, 12],
                rbm: TrainHyper { n_epochs: 3, ..Default::default() },
                lda: LdaConfig { k: 3, n_iterations: 20, n_infer_iterations: 5, ..Default::default() },
                k: 4,
                seed,
                parallel: false,
                ..Default::default()
            };
            let a = fit_fold(&dirty, &hand_matrix(&dirty, &res).unwrap(), &plan, &cfg, &res, 0, fold).unwrap();
            let b = fit_fold(&clean, &hand_matrix(&clean, &res).unwrap(), &plan, &cfg, &res, 0, fold).unwrap();
            assert!(!a.textual.vocabulary().contains("qqleak"), "{}", f.name());
            if let TextualModel::Topic { model, .. } = &a.textual {
                assert!(model.vocabulary.position("qqleak").is_none());
            }
            assert_eq!(a.textual, b.textual, "{}", f.name());
            assert_eq!(a.normalizer, b.normalizer, "{}", f.name());
            assert_eq!(a.train, b.train);
        }
    }
}

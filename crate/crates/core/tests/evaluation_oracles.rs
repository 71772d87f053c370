use std::collections::BTreeMap;

use moviedesc::evaluation::{
    bleu4, mean_ranks, render_ranking_table, Criterion, EvalPair, RankingLayout, RankingRecord, Smoothing,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn count_in(tokens: &[String], gram: &[String]) -> usize {
    if tokens.len() < gram.len() {
        return 0;
    }
    (0..=tokens.len() - gram.len()).filter(|&i| &tokens[i..i + gram.len()] == gram).count()
}

/// Clipped-count BLEU written from the definition, linear scans only.
fn oracle_bleu(pairs: &[EvalPair]) -> f64 {
    let mut matched = [0usize; 4];
    let mut total = [0usize; 4];
    let (mut c, mut r) = (0usize, 0usize);
    for p in pairs {
        c += p.candidate.len();
        let mut best = p.references[0].len();
        for reference in &p.references {
            let (d_new, d_old) = (reference.len().abs_diff(p.candidate.len()), best.abs_diff(p.candidate.len()));
            if d_new < d_old || (d_new == d_old && reference.len() < best) {
                best = reference.len();
            }
        }
        r += best;
        for n in 1..=4 {
            if p.candidate.len() < n {
                continue;
            }
            let mut seen: Vec<&[String]> = Vec::new();
            for i in 0..=p.candidate.len() - n {
                let g = &p.candidate[i..i + n];
                total[n - 1] += 1;
                if seen.contains(&g) {
                    continue;
                }
                seen.push(g);
                let in_cand = count_in(&p.candidate, g);
                let in_refs = p.references.iter().map(|rf| count_in(rf, g)).max().unwrap();
                matched[n - 1] += in_cand.min(in_refs);
            }
        }
    }
    if matched.contains(&0) {
        return 0.0;
    }
    let geo = (0..4).map(|n| matched[n] as f64 / total[n] as f64).product::<f64>().powf(0.25);
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    100.0 * bp * geo
}

fn random_sentence(rng: &mut ChaCha8Rng, vocab: &[&str]) -> Vec<String> {
    let len = rng.random_range(1..=8);
    (0..len).map(|_| vocab[rng.random_range(0..vocab.len())].to_string()).collect()
}

fn random_corpus(seed: u64) -> Vec<EvalPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = ["a", "man", "opens", "the", "door", "walks"];
    let mut corpus = Vec::new();
    for i in 0..rng.random_range(1..12) {
        let candidate = random_sentence(&mut rng, &vocab);
        let mut references: Vec<Vec<String>> = (0..rng.random_range(1..=3)).map(|_| random_sentence(&mut rng, &vocab)).collect();
        // a near copy keeps higher-order matches common
        if rng.random_bool(0.7) {
            let mut near = candidate.clone();
            let at = rng.random_range(0..near.len());
            near[at] = vocab[rng.random_range(0..vocab.len())].to_string();
            if rng.random_bool(0.5) {
                near.push("door".into());
            }
            references.push(near);
        }
        corpus.push(EvalPair {
            snippet_id: format!("s{i}"),
            candidate,
            references,
        });
    }
    corpus
}

#[test]
fn bleu_matches_clipped_count_oracle() {
    let mut nonzero = 0;
    for seed in 0..50 {
        let corpus = random_corpus(seed);
        let got = bleu4(&corpus, Smoothing::None).unwrap();
        let want = oracle_bleu(&corpus);
        assert!((got - want).abs() < 1e-9, "seed {seed}: {got} vs {want}");
        if got > 0.0 {
            nonzero += 1;
        }
    }
    assert!(nonzero >= 10, "only {nonzero} corpora with non-zero BLEU");
}

proptest! {
    #[test]
    fn bleu_bounds_and_order_invariance(seed in 0u64..10_000) {
        let mut corpus = random_corpus(seed);
        let score = bleu4(&corpus, Smoothing::None).unwrap();
        prop_assert!((0.0..=100.0 + 1e-9).contains(&score));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        corpus.shuffle(&mut rng);
        prop_assert!((bleu4(&corpus, Smoothing::None).unwrap() - score).abs() < 1e-9);
    }

    #[test]
    fn reference_copy_never_lowers_sentence_bleu(seed in 0u64..10_000) {
        // an exact copy has no 4-grams below four tokens, which scores 0 unsmoothed
        for mut pair in random_corpus(seed).into_iter().filter(|p| p.references[0].len() >= 4) {
            let before = bleu4(std::slice::from_ref(&pair), Smoothing::None).unwrap();
            pair.candidate = pair.references[0].clone();
            let after = bleu4(std::slice::from_ref(&pair), Smoothing::None).unwrap();
            prop_assert!(after >= before - 1e-9);
            prop_assert!((after - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mean_ranks_lie_in_range(seed in 0u64..1000, n in 1usize..30) {
        let layout = RankingLayout::twelve_methods();
        let methods: Vec<&str> = layout.methods().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let records: Vec<RankingRecord> = (0..n)
            .map(|i| {
                let mut ranks: Vec<u32> = (1..=12).collect();
                ranks.shuffle(&mut rng);
                RankingRecord {
                    snippet_id: format!("s{i}"),
                    criterion: Criterion::Grammar,
                    ranks: methods.iter().map(|m| m.to_string()).zip(ranks).collect(),
                }
            })
            .collect();
        let means = mean_ranks(&records).unwrap();
        prop_assert_eq!(means.len(), 12);
        prop_assert!(means.values().all(|m| (1.0..=12.0).contains(m)));
        let total: f64 = means.values().sum();
        prop_assert!((total - 78.0).abs() < 1e-9);
    }
}

fn tokens(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

/// Pooling lets a short exact copy dilute a long, mostly matched candidate.
#[test]
fn corpus_pooling_can_drop_after_reference_copy() {
    let long = "a b c d e f g h i j k l";
    let mut corpus = vec![
        EvalPair {
            snippet_id: "good".into(),
            candidate: tokens(long),
            references: vec![tokens("x"), tokens(long)],
        },
        EvalPair {
            snippet_id: "poor".into(),
            candidate: tokens("a b c d q r s t u v w y"),
            references: vec![tokens("a b c d m n o p")],
        },
    ];
    let before = bleu4(&corpus, Smoothing::None).unwrap();
    corpus[0].candidate = corpus[0].references[0].clone();
    let after = bleu4(&corpus, Smoothing::None).unwrap();
    assert!(after < before, "{after} vs {before}");
}

#[test]
fn identical_and_disjoint_corpora() {
    let p = EvalPair::from_sentences("a", "Someone opens the door.", &["Someone opens the door."]);
    assert_eq!(bleu4(&[p.clone(), p], Smoothing::None).unwrap(), 100.0);
    let q = EvalPair::from_sentences("b", "xx yy zz", &["Someone opens the door."]);
    assert_eq!(bleu4(&[q], Smoothing::None).unwrap(), 0.0);
}

#[test]
fn twelve_method_table_golden() {
    let values: [(&str, [f64; 3]); 12] = [
        ("nn-dt", [7.6, 5.1, 7.5]),
        ("nn-lsda", [7.2, 4.9, 7.0]),
        ("nn-places", [7.0, 5.0, 7.1]),
        ("nn-hybrid", [6.8, 4.6, 7.1]),
        ("smt-visual-words", [7.6, 8.1, 7.5]),
        ("text-dt-30", [6.9, 8.1, 6.7]),
        ("text-dt-100", [5.8, 6.8, 5.5]),
        ("text-all-100", [4.6, 5.0, 4.9]),
        ("sense-dt-30", [6.3, 6.3, 5.8]),
        ("sense-dt-100", [4.9, 5.7, 5.1]),
        ("sense-all-100", [5.5, 5.7, 5.5]),
        ("reference", [2.9, 4.2, 3.2]),
    ];
    let mut means: BTreeMap<Criterion, BTreeMap<String, f64>> = BTreeMap::new();
    for (m, v) in values {
        for (c, x) in Criterion::ALL.iter().zip(v) {
            means.entry(*c).or_default().insert(m.to_string(), x);
        }
    }
    let table = render_ranking_table(&RankingLayout::twelve_methods(), &means);
    assert_eq!(table, include_str!("fixtures/ranking_table.golden"));
}

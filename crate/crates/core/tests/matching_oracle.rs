//! Greedy overlap matching against an exhaustive maximum-score matching.
//!
//! Greedy picks by overlap size, not by score, so it can lose to the
//! optimum when a large partial overlap blocks an exact match elsewhere.
//! The agreement count over the fixed seed is frozen below; a change means
//! the matcher changed behaviour.

use lexitrace_core::annotation::{Annotation, AnnotationSet, ConceptKind};
use lexitrace_core::corpus::{ProvisionRef, Span};
use lexitrace_core::scoring::{match_annotations, score, Score};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x1e71_7ace;
const CASES: usize = 2000;
const AGREEING_CASES: usize = 1737;

fn random_set(rng: &mut ChaCha8Rng, author: &str, prefix: &str) -> AnnotationSet {
    let n = rng.random_range(0..=6);
    let annotations = (0..n)
        .map(|i| {
            let para = if rng.random_bool(0.7) { "1" } else { "2" };
            let start = rng.random_range(0..30);
            let end = start + rng.random_range(1..12);
            Annotation {
                id: format!("{prefix}{i}"),
                span: Span::new(ProvisionRef::article("D", "1").with_paragraph(para), start, end),
                quote: String::new(),
                concept: ConceptKind::ALL[rng.random_range(0..3)],
                instance_hint: None,
                note: None,
            }
        })
        .collect();
    AnnotationSet { corpus_id: "D".into(), author: author.into(), annotations }
}

fn pair_tenths(g: &Annotation, c: &Annotation) -> Option<u32> {
    (g.span.overlap(&c.span) > 0).then(|| Score::from_outcome(g.span == c.span, g.concept == c.concept).tenths() as u32)
}

/// Best total over all one-to-one matchings, by exhaustive search.
fn brute_force(gold: &[Annotation], cand: &[Annotation], used: &mut Vec<bool>) -> u32 {
    let Some((g, rest)) = gold.split_first() else { return 0 };
    let mut best = brute_force(rest, cand, used);
    for (ci, c) in cand.iter().enumerate() {
        if used[ci] {
            continue;
        }
        if let Some(t) = pair_tenths(g, c) {
            used[ci] = true;
            best = best.max(t + brute_force(rest, cand, used));
            used[ci] = false;
        }
    }
    best
}

#[test]
fn greedy_agreement_with_exhaustive_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = 0;
    let mut logged = 0;
    for case in 0..CASES {
        let gold = random_set(&mut rng, "gold", "g");
        let cand = random_set(&mut rng, "cand", "c");
        let matching = match_annotations(&cand, &gold).unwrap();
        let greedy = score(&matching, &cand, &gold).total_tenths();
        let best = brute_force(&gold.annotations, &cand.annotations, &mut vec![false; cand.annotations.len()]);
        assert!(greedy <= best, "greedy beat exhaustive search in case {case}");
        if greedy == best {
            agree += 1;
        } else if logged < 5 {
            logged += 1;
            eprintln!("case {case}: greedy {greedy} < best {best}; greedy pairs {matching:?}");
        }
    }
    eprintln!("greedy agrees with exhaustive matching on {agree} of {CASES} cases");
    assert_eq!(agree, AGREEING_CASES);
}

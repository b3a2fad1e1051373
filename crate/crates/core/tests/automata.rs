mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sakubun_core::automata::{build_automaton, Automaton, AutomatonSpec, HookRegistry, MatchError, Predicate};
use sakubun_core::{PosMajor, Token};

#[test]
fn longest_match_equals_path_enumeration() {
    let summary = support::longest_match_oracle(0xC0FFEE, 200, 50).unwrap();
    println!("{summary}");
}

#[test]
fn longest_match_other_seeds() {
    for seed in 1..4 {
        support::longest_match_oracle(seed, 60, 30).unwrap();
    }
}

#[test]
fn stack_hooks_recognize_anbn() {
    support::anbn_check(11).unwrap();
    let a = support::anbn_automaton();
    for bad in ["ba", "aab", "abb", "abab", "b", "a", "aabbab"] {
        assert!(!support::accepts_whole(&a, bad), "{bad}");
    }
}

fn toks(s: &[&str]) -> Vec<Token> {
    s.iter().map(|x| Token::simple(*x, PosMajor::Other)).collect()
}

#[test]
fn overlapping_paths_of_length_two_and_three() {
    let lit = |s: &str| Predicate::LiteralSurface(s.into());
    let mut spec = AutomatonSpec::new();
    let x = spec.add_trans(0, lit("x"), false);
    spec.add_trans(x, lit("y"), true);
    let x2 = spec.add_trans(0, Predicate::Any, false);
    let y2 = spec.add_trans(x2, Predicate::Any, false);
    spec.add_trans(y2, lit("z"), true);
    let a = build_automaton(&spec, &HookRegistry::builtin()).unwrap();
    let tokens = toks(&["x", "y", "z"]);
    let paths = support::accepting_paths(&spec, &tokens, 0);
    assert_eq!(paths.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 3]);
    assert_eq!(a.match_at(&tokens, 0).unwrap().length, Some(3));
}

#[test]
fn self_loop_counter_is_stopped_by_budget() {
    let mut spec = AutomatonSpec::new();
    let n = spec.add_node(false);
    spec.add_edge(0, n, Predicate::Any);
    spec.add_edge(n, n, Predicate::Any).after = Some("inc:loops".into());
    let a = build_automaton(&spec, &HookRegistry::builtin()).unwrap().with_budget(500);
    let input = toks(&vec!["x"; 2000]);
    assert_eq!(a.match_at(&input, 0).unwrap_err(), MatchError::BudgetExceeded { budget: 500, start: 0 });
}

fn roundtrip(a: &Automaton) -> Automaton {
    Automaton::deserialize(&a.serialize(), &HookRegistry::builtin()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_preserves_outcomes(seed in any::<u64>(), words in prop::collection::vec(0usize..3, 0..8), start in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = support::random_spec(&mut rng);
        let a = build_automaton(&spec, &HookRegistry::builtin()).unwrap();
        let b = roundtrip(&a);
        let tokens: Vec<Token> = words.iter().map(|&w| Token::simple(["a", "b", "c"][w], PosMajor::Noun)).collect();
        prop_assert_eq!(a.match_at(&tokens, start).unwrap(), b.match_at(&tokens, start).unwrap());
        prop_assert_eq!(a.feed_partial(&tokens).unwrap(), b.feed_partial(&tokens).unwrap());
        prop_assert_eq!(a.serialize(), b.serialize());
    }

    #[test]
    fn matching_is_deterministic(seed in any::<u64>(), words in prop::collection::vec(0usize..3, 0..8)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = build_automaton(&support::random_spec(&mut rng), &HookRegistry::builtin()).unwrap();
        let tokens: Vec<Token> = words.iter().map(|&w| Token::simple(["a", "b", "c"][w], PosMajor::Particle)).collect();
        for start in 0..=tokens.len() {
            let mut c1 = a.context().clone();
            let mut c2 = a.context().clone();
            prop_assert_eq!(a.match_in(&mut c1, &tokens, start).unwrap(), a.match_in(&mut c2, &tokens, start).unwrap());
            prop_assert_eq!(c1, c2);
        }
    }

    #[test]
    fn matches_are_never_empty(seed in any::<u64>(), words in prop::collection::vec(0usize..3, 0..8)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = build_automaton(&support::random_spec(&mut rng), &HookRegistry::builtin()).unwrap();
        let tokens: Vec<Token> = words.iter().map(|&w| Token::simple(["a", "b", "c"][w], PosMajor::Noun)).collect();
        for start in 0..=tokens.len() {
            let out = a.match_at(&tokens, start).unwrap();
            prop_assert_eq!(out.matched, out.length.is_some());
            if let Some(n) = out.length {
                prop_assert!(n >= 1 && start + n <= tokens.len());
                prop_assert_eq!(out.steps.len(), n);
            }
        }
    }
}

mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randgroups::presentation::{relator_count, sample_seeded, Presentation, SampleOptions};
use randgroups::words::{cyclic_reduce, free_reduce, invert, is_reduced, sample_reduced_word, Letter, Word};

fn raw_letters(m: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=m, any::<bool>()), 0..max_len)
        .prop_map(|v| v.into_iter().map(|(g, inv)| if inv { Letter::inverse_generator(g) } else { Letter::generator(g) }).collect())
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent(raw in raw_letters(3, 40)) {
        let once = free_reduce(raw.iter().copied());
        prop_assert!(is_reduced(once.letters()));
        prop_assert_eq!(free_reduce(once.letters().iter().copied()), once);
    }

    #[test]
    fn word_times_inverse_is_trivial(raw in raw_letters(3, 40)) {
        let w = free_reduce(raw);
        prop_assert!(w.concat(&invert(&w)).is_empty());
    }

    #[test]
    fn cyclic_reduce_keeps_parity(raw in raw_letters(2, 40)) {
        let w = free_reduce(raw);
        let c = cyclic_reduce(&w);
        prop_assert!(c.len() <= w.len());
        prop_assert_eq!(c.len() % 2, w.len() % 2);
        prop_assert!(c.is_cyclically_reduced());
    }

    #[test]
    fn sampled_words_are_reduced(m in 1u32..5, ell in 0usize..50, seed: u64) {
        let w = sample_reduced_word(m, ell, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(w.len(), ell);
        prop_assert!(is_reduced(w.letters()));
        prop_assert!(w.letters().iter().all(|l| l.index() >= 1 && l.index() <= m));
    }

    #[test]
    fn text_round_trip(raw in raw_letters(4, 30)) {
        let w = free_reduce(raw);
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }
}

#[test]
fn sampled_presentations_hold_their_invariants() {
    for seed in 0..1000 {
        let p = sample_seeded(2, 8, 0.3, seed, SampleOptions::default()).unwrap();
        assert_eq!(p.len() as u64, relator_count(2, 8, 0.3).unwrap());
        let mut seen = std::collections::HashSet::new();
        for r in p.relators() {
            assert_eq!(r.len(), 8);
            assert!(r.is_cyclically_reduced());
            assert!(seen.insert(r.clone()), "duplicate relator at seed {seed}");
        }
        let again = Presentation::from_json(&p.to_json()).unwrap();
        assert_eq!(again, p);
    }
}

#[test]
fn relator_count_is_monotone() {
    for m in 2..5 {
        for ell in 1..30 {
            let mut previous = 0;
            for step in 0..=40 {
                let d = step as f64 / 100.0;
                let count = relator_count(m, ell, d).unwrap();
                assert!(count >= previous);
                assert!(count <= relator_count(m, ell + 1, d).unwrap());
                previous = count;
            }
        }
    }
}

mod support;

use num_rational::Ratio;
use proptest::prelude::*;
use randgroups::pieces::{
    find_relator_containing, find_sharing_pair, max_common_piece, oracle, piece_spectrum, small_cancellation_check,
    RotationIndex,
};
use randgroups::words::cyclic_subword;
use support::sample_count;

fn small_presentation() -> impl Strategy<Value = randgroups::presentation::Presentation> {
    (2usize..=16, 1usize..=20, any::<u64>()).prop_map(|(ell, count, seed)| {
        // Short lengths have few cyclically reduced words; stay below the supply.
        let count = count.min(1 << (ell / 2));
        sample_count(2, ell, count, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_matches_oracle(p in small_presentation()) {
        prop_assert_eq!(piece_spectrum(&RotationIndex::new(&p)), oracle::spectrum(&p));
    }

    #[test]
    fn spectrum_is_invariant_under_inversion(p in small_presentation()) {
        let a = piece_spectrum(&RotationIndex::new(&p));
        let inverted = p.inverted();
        let b = piece_spectrum(&RotationIndex::new(&inverted));
        prop_assert_eq!(a.histogram, b.histogram);
        prop_assert_eq!(a.max_length, b.max_length);
    }

    #[test]
    fn pairwise_piece_matches_oracle(p in small_presentation(), a: prop::sample::Index, b: prop::sample::Index) {
        let (i, j) = (a.index(p.len()), b.index(p.len()));
        let fast = max_common_piece(&p, i, j);
        prop_assert_eq!(fast, oracle::max_common_piece(&p, i, j));
        prop_assert_eq!(fast.length, max_common_piece(&p, j, i).length);
        prop_assert_eq!(fast.word(&p), cyclic_subword(p.relator(j).letters(), fast.orientation, fast.offset_j, fast.length));
    }

    #[test]
    fn first_sharing_pair_matches_oracle(p in small_presentation(), min_len in 1usize..8) {
        let fast = find_sharing_pair(&RotationIndex::new(&p), min_len).map(|m| m.key());
        let slow = oracle::first_sharing_pair(&p, min_len).map(|m| m.key());
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn containment_matches_oracle(p in small_presentation(), r: prop::sample::Index, offset: usize, len in 0usize..18, inverse: bool) {
        let ell = p.ell();
        let source = p.relator(r.index(p.len())).letters();
        let orientation = if inverse { randgroups::words::Orientation::Inverse } else { randgroups::words::Orientation::Direct };
        let x = cyclic_subword(source, orientation, offset % ell, len.min(ell));
        let fast = find_relator_containing(&p, &x).map(|c| (c.relator, c.orientation, c.offset));
        prop_assert_eq!(fast, oracle::find_relator_containing(&p, &x));
        prop_assert!(fast.is_some());
    }

    #[test]
    fn small_cancellation_agrees_with_maximum(p in small_presentation(), num in 1u64..6, den in 6u64..12) {
        let lambda = Ratio::new(num, den);
        let report = small_cancellation_check(&RotationIndex::new(&p), lambda);
        let max = oracle::spectrum(&p).max_length as u64;
        prop_assert_eq!(report.holds, max * den < num * p.ell() as u64);
    }
}

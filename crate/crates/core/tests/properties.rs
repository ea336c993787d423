use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use bfree::bset::{density_exact, DensityMethod};
use bfree::codes::{apply_code, compose, is_monotone, Code};
use bfree::sieve::{
    block, block_distribution, eta_window, hereditary_closure, is_admissible, language_blocks,
    translation_invariance_check,
};
use bfree::{BSet, Caps, LanguageTable, Source, Word};

fn word(offset: i64, bits: &[bool]) -> Word {
    Word::from_bits(offset, bits.iter().copied())
}

fn small_bset() -> impl Strategy<Value = BSet> {
    prop_oneof![
        Just(BSet::prime_squares()),
        Just(BSet::explicit([2, 3]).unwrap()),
        prop::collection::btree_set(2u64..30, 1..5).prop_map(|s| BSet::explicit(s).unwrap()),
    ]
}

fn code(max_radius: usize) -> impl Strategy<Value = Code> {
    (0..=max_radius).prop_flat_map(|r| {
        let l = 2 * r + 1;
        prop::collection::vec(any::<bool>(), 1 << l).prop_map(move |bits| Code::from_truth_table(r, &bits).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn admissibility_is_translation_invariant(
        b in small_bset(),
        bits in prop::collection::vec(any::<bool>(), 0..40),
        offset in -50i64..50,
        t in -1000i64..1000,
    ) {
        let w = word(offset, &bits);
        prop_assert!(translation_invariance_check(&w, t, &b));
        prop_assert_eq!(is_admissible(&w, &b), is_admissible(&w.translate(t), &b));
    }

    #[test]
    fn admissibility_is_hereditary(
        b in small_bset(),
        bits in prop::collection::vec(any::<bool>(), 1..40),
        drop in any::<prop::sample::Index>(),
    ) {
        let w = word(0, &bits);
        if is_admissible(&w, &b) && w.ones() > 0 {
            let s = w.support()[drop.index(w.ones())];
            prop_assert!(is_admissible(&w.with_bit(s, false), &b));
        }
    }

    #[test]
    fn eta_is_symmetric_and_admissible(b in small_bset(), z in 1i64..300) {
        let eta = eta_window(&b, -z, z).unwrap();
        prop_assert!(!eta.bit(0));
        for n in 1..=z {
            prop_assert_eq!(eta.bit(n), eta.bit(-n));
        }
        prop_assert!(is_admissible(&eta, &b));
    }

    #[test]
    fn density_methods_agree(bk in prop::collection::btree_set(2u64..40, 1..6)) {
        let bk: Vec<u64> = bk.into_iter().collect();
        let caps = Caps::default();
        let ie = density_exact(&bk, DensityMethod::InclusionExclusion, &caps).unwrap();
        let sieve = density_exact(&bk, DensityMethod::PeriodSieve, &caps).unwrap();
        prop_assert_eq!(ie, sieve);
    }

    #[test]
    fn block_distribution_sums_to_one(n in 1usize..7, bk in prop::collection::btree_set(2u64..12, 1..4)) {
        let bk: Vec<u64> = bk.into_iter().collect();
        let (dist, _) = block_distribution(n, &bk, &Caps::default()).unwrap();
        let total = dist.values().fold(BigRational::zero(), |a, x| a + x);
        prop_assert!(total.is_one());
    }

    #[test]
    fn hereditary_closure_is_hereditary(n in 1usize..8, blocks in prop::collection::btree_set(0u64..256, 1..6)) {
        let mask = block::mask(n);
        let base = LanguageTable::new(n, blocks.iter().map(|v| v & mask), Source::Admissible).unwrap();
        let closed = hereditary_closure(&base, Source::Admissible, &Caps::default()).unwrap();
        prop_assert!(closed.is_hereditary());
        prop_assert!(base.is_subset(&closed));
        for &v in closed.blocks() {
            prop_assert!(base.blocks().iter().any(|&u| v & !u == 0));
        }
    }

    #[test]
    fn admissible_language_matches_is_admissible(b in small_bset(), n in 1usize..10) {
        let table = language_blocks(&b, n, &Source::Admissible, &Caps::default()).unwrap();
        let listed: BTreeSet<u64> = table.blocks().iter().copied().collect();
        for v in 0..1u64 << n {
            prop_assert_eq!(listed.contains(&v), is_admissible(&Word::from_block(v, n, 0), &b));
        }
    }

    #[test]
    fn witness_is_sound(c in code(2)) {
        let verdict = is_monotone(&c);
        let l = c.window();
        for &t in &verdict.witness.set {
            let p = (t + c.radius() as i64) as usize;
            for v in c.ones() {
                prop_assert!(block::bit(v, l, p));
            }
        }
        prop_assert_eq!(verdict.witness.set.is_empty(), verdict.witness.canonical.is_none());
    }

    #[test]
    fn apply_commutes_with_translation(
        c in code(2),
        bits in prop::collection::vec(any::<bool>(), 5..40),
        t in -100i64..100,
    ) {
        let w = word(0, &bits);
        let a = apply_code(&c, &w).unwrap().translate(t);
        let b = apply_code(&c, &w.translate(t)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn compose_is_associative(a in code(1), b in code(1), c in code(1), bits in prop::collection::vec(any::<bool>(), 7..30)) {
        let caps = Caps::default();
        let left = compose(&compose(&a, &b, &caps).unwrap(), &c, &caps).unwrap();
        let right = compose(&a, &compose(&b, &c, &caps).unwrap(), &caps).unwrap();
        prop_assert_eq!(left.ones(), right.ones());
        let w = word(0, &bits);
        let direct = apply_code(&a, &apply_code(&b, &apply_code(&c, &w).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(apply_code(&left, &w).unwrap(), direct);
    }
}

#[test]
fn shift_codes_translate() {
    let w = word(0, &[true, false, true, true, false, false, true]);
    for t in -2i64..=2 {
        let out = apply_code(&Code::shift(t), &w).unwrap();
        for &n in out.support() {
            assert!(w.bit(n + t));
        }
        assert_eq!(out.ones(), w.window(out.offset() + t, out.end() - 1 + t).ones());
    }
}

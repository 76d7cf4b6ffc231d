// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{embeds, random_grammar};
use spk_ldd::{is_subsequence, oracle_is_valid, subseq_k, SymbolId};

fn word(v: SymbolId, max: usize) -> impl Strategy<Value = Vec<SymbolId>> {
    prop::collection::vec(0..v, 0..=max)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

proptest! {
    #[test]
    fn valid_strings_are_closed_under_deletion(seed in any::<u64>(), w in word(3, 12)) {
        let g = random_grammar(&mut ChaCha8Rng::seed_from_u64(seed), 3, &[2, 3], 1..=2);
        if oracle_is_valid(&g, &w).unwrap() {
            for i in 0..w.len() {
                let mut u = w.clone();
                u.remove(i);
                prop_assert!(oracle_is_valid(&g, &u).unwrap());
            }
        }
    }

    #[test]
    fn greedy_matches_exhaustive(v in word(3, 4), w in word(3, 10)) {
        prop_assert_eq!(is_subsequence(&v, &w), embeds(&v, &w));
    }

    #[test]
    fn subseq_k_size_bound(w in word(5, 9), k in 1usize..5) {
        let found = subseq_k(&w, k).len() as u128;
        let bound: u128 = (1..=k).map(|j| binomial(w.len(), j)).sum();
        prop_assert!(found <= bound);
        let mut distinct = w.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == w.len() {
            prop_assert_eq!(found, bound);
        }
    }

    #[test]
    fn subseq_k_is_exactly_the_embedded_words(w in word(3, 7), k in 1usize..4) {
        let got: Vec<Vec<SymbolId>> = subseq_k(&w, k).into_iter().map(|s| s.symbols().to_vec()).collect();
        let mut expected = Vec::new();
        for mask in 1u32..(1 << w.len()) {
            if mask.count_ones() as usize <= k {
                let u: Vec<SymbolId> = (0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect();
                expected.push(u);
            }
        }
        expected.sort();
        expected.dedup();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        prop_assert_eq!(got_sorted, expected);
    }

    #[test]
    fn empty_string_is_always_valid(seed in any::<u64>()) {
        let g = random_grammar(&mut ChaCha8Rng::seed_from_u64(seed), 4, &[2, 3, 4], 1..=4);
        prop_assert!(oracle_is_valid(&g, &[]).unwrap());
    }

    #[test]
    fn grammar_text_round_trips(seed in any::<u64>()) {
        let g = random_grammar(&mut ChaCha8Rng::seed_from_u64(seed), 4, &[2, 3], 1..=3);
        let back: spk_ldd::SpkGrammar = g.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), g.to_string());
    }
}

// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use proptest::prelude::*;

use spk_ldd::generator::{split_dataset, Generator, LengthPlan};
use spk_ldd::{oracle_is_valid, SpkGrammar};

fn sp2() -> SpkGrammar {
    "alphabet: abcd\nk: 2\nforbidden: ab,dc".parse().unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_strings_are_valid(seed in any::<u64>(), min in 2usize..30, width in 1usize..30, count in 1usize..200) {
        let g = sp2();
        let plan = LengthPlan::new(min, min + width - 1, count).unwrap();
        let d = Generator::new(&g, plan.max_len(), 1_000_000).unwrap().generate(&plan, seed).unwrap();
        for w in d.strings() {
            prop_assert!(oracle_is_valid(&g, w).unwrap());
        }
    }

    #[test]
    fn length_census_matches_plan(seed in any::<u64>(), min in 2usize..30, width in 1usize..30, count in 1usize..200) {
        let plan = LengthPlan::new(min, min + width - 1, count).unwrap();
        let d = Generator::new(&sp2(), plan.max_len(), 1_000_000).unwrap().generate(&plan, seed).unwrap();
        let mut got: BTreeMap<usize, usize> = BTreeMap::new();
        for w in d.strings() {
            *got.entry(w.len()).or_default() += 1;
        }
        let mut want: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..count {
            *want.entry(min + i % width).or_default() += 1;
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn split_conserves_strings(seed in any::<u64>(), count in 3usize..300, a in 1u32..10, b in 1u32..10, c in 1u32..10) {
        let total = (a + b + c) as f64;
        let fractions = [a as f64 / total, b as f64 / total, c as f64 / total];
        let plan = LengthPlan::new(2, 12, count).unwrap();
        let d = Generator::new(&sp2(), 12, 1_000_000).unwrap().generate(&plan, seed).unwrap();
        match split_dataset(&d, fractions) {
            Ok((train, valid, test)) => {
                let mut joined: Vec<_> = [train.strings(), valid.strings(), test.strings()].concat();
                let mut original = d.strings().to_vec();
                prop_assert_eq!(&joined, &original);
                joined.sort();
                original.sort();
                prop_assert_eq!(joined, original);
            }
            Err(e) => prop_assert!(e.to_string().contains("split"), "{e}"),
        }
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let g = sp2();
    let plan = LengthPlan::new(20, 80, 3000).unwrap();
    let gen = Generator::new(&g, plan.max_len(), 1_000_000).unwrap();
    let one = in_pool(1, || gen.generate(&plan, 42).unwrap().to_text());
    let four = in_pool(4, || gen.generate(&plan, 42).unwrap().to_text());
    assert_eq!(one, four);
    let again = in_pool(3, || gen.generate(&plan, 42).unwrap().to_text());
    assert_eq!(one, again);
}

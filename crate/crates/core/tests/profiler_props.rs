// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use statrs::function::gamma::digamma as statrs_digamma;

use spk_ldd::digamma::{digamma, TABLE_LEN};
use spk_ldd::profiler::{
    entropy_grassberger, entropy_plugin, mi_at_distance, CountVector, Estimator, JointCounts,
};
use spk_ldd::Corpus;

fn corpus(v: u16, max: usize) -> impl Strategy<Value = Corpus> {
    prop::collection::vec(0..v, 2..=max).prop_map(move |s| Corpus::new(s, v as usize).unwrap())
}

#[test]
fn digamma_matches_independent_implementation() {
    let mut n = 1u64;
    while n < 1 << 40 {
        let want = statrs_digamma(n as f64);
        let got = digamma(n);
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "n={n}: {got} vs {want}");
        n = n * 3 / 2 + 1;
    }
    for n in [TABLE_LEN as u64 - 1, TABLE_LEN as u64, TABLE_LEN as u64 + 1] {
        assert!((digamma(n) - statrs_digamma(n as f64)).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn estimators_converge(counts in prop::collection::vec(1u64..50, 1..8), scale in 100u64..400) {
        let k = counts.len() as u64;
        let scaled: Vec<u64> = counts.iter().map(|c| c * scale * k).collect();
        let c = CountVector::new(scaled).unwrap();
        prop_assert!(c.total() >= 100 * k);
        let gap = (entropy_grassberger(&c) - entropy_plugin(&c)).abs();
        prop_assert!(gap <= k as f64 / c.total() as f64, "gap {gap}");
    }

    #[test]
    fn reversal_preserves_mi(c in corpus(5, 300), d in 1usize..50) {
        prop_assume!(d < c.len());
        for est in [Estimator::Grassberger, Estimator::Plugin] {
            let a = mi_at_distance(&c, d, est).unwrap();
            let b = mi_at_distance(&c.reversed(), d, est).unwrap();
            prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn plugin_mi_is_bounded(c in corpus(6, 400), d in 1usize..60) {
        prop_assume!(d < c.len());
        let joint = JointCounts::accumulate(&c, d);
        let hx = entropy_plugin(&CountVector::new(joint.row_sums()).unwrap());
        let hy = entropy_plugin(&CountVector::new(joint.col_sums()).unwrap());
        let mi = joint.mutual_information(Estimator::Plugin).unwrap();
        prop_assert!(mi >= 0.0, "{mi}");
        prop_assert!(mi <= hx.min(hy) + 1e-12, "{mi} > min({hx}, {hy})");
    }

    #[test]
    fn joint_marginals_match_direct_counts(c in corpus(7, 300), d in 1usize..40) {
        prop_assume!(d < c.len());
        let joint = JointCounts::accumulate(&c, d);
        let s = c.symbols();
        let mut x = vec![0u64; 7];
        let mut y = vec![0u64; 7];
        for &v in &s[..s.len() - d] {
            x[v as usize] += 1;
        }
        for &v in &s[d..] {
            y[v as usize] += 1;
        }
        prop_assert_eq!(joint.row_sums(), x);
        prop_assert_eq!(joint.col_sums(), y);
        prop_assert_eq!(joint.total(), (s.len() - d) as u64);
    }
}

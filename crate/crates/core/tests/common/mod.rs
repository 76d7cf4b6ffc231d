// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::ops::RangeInclusive;

use rand::seq::IndexedRandom;
use rand::Rng;

use spk_ldd::{Alphabet, SpkGrammar, Subsequence, SymbolId};

/// A grammar over the first `v` letters with distinct forbidden entries.
pub fn random_grammar<R: Rng>(rng: &mut R, v: usize, ks: &[usize], entries: RangeInclusive<usize>) -> SpkGrammar {
    let alphabet = Alphabet::new(('a'..='z').take(v)).unwrap();
    let k = *ks.choose(rng).unwrap();
    let n = rng.random_range(entries);
    let mut forbidden: Vec<Subsequence> = Vec::new();
    while forbidden.len() < n {
        let s = Subsequence::new((0..k).map(|_| rng.random_range(0..v as SymbolId)).collect()).unwrap();
        if !forbidden.contains(&s) {
            forbidden.push(s);
        }
    }
    SpkGrammar::new(alphabet, k, forbidden).unwrap()
}

/// Every string over `v` symbols of length `0..=max_len`.
pub fn all_strings(v: usize, max_len: usize) -> Vec<Vec<SymbolId>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * v);
        for w in &layer {
            for s in 0..v as SymbolId {
                let mut x: Vec<SymbolId> = w.clone();
                x.push(s);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Subsequence test by trying every embedding position, no greediness.
pub fn embeds(v: &[SymbolId], w: &[SymbolId]) -> bool {
    match v.split_first() {
        None => true,
        Some((first, rest)) => (0..w.len()).any(|i| w[i] == *first && embeds(rest, &w[i + 1..])),
    }
}

pub fn brute_valid(g: &SpkGrammar, w: &[SymbolId]) -> bool {
    g.forbidden().iter().all(|f| !embeds(f.symbols(), w))
}

// SPDX-License-Identifier: Apache-2.0

//! Deterministic acceptor for an SPk grammar, exact per-length string
//! counts, and exactly uniform sampling of fixed-length strings.
//!
//! Each live state is a progress vector: for every forbidden entry, how many
//! of its leading symbols have been greedily matched so far. Completing any
//! entry moves the automaton to a single absorbing dead state. The acceptor
//! carries no length information; length is imposed by the counting table.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::grammar::{Alphabet, SpkGrammar, SymbolId};

pub type StateId = u32;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Matched-prefix lengths, one per forbidden entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProgressVector(Vec<usize>);

impl ProgressVector {
    pub fn progress(&self) -> &[usize] {
        &self.0
    }

    fn is_complete(&self, g: &SpkGrammar) -> bool {
        self.0
            .iter()
            .zip(g.forbidden())
            .any(|(&p, f)| p == f.len())
    }
}

#[derive(Clone, Debug)]
pub struct PiecewiseDfa {
    alphabet: Alphabet,
    /// Row-major `state * V + symbol`.
    transitions: Vec<StateId>,
    /// `None` marks the dead state.
    configurations: Vec<Option<ProgressVector>>,
    dead: StateId,
}

impl PiecewiseDfa {
    pub const INITIAL: StateId = 0;

    /// Product construction over the forbidden entries, exploring only
    /// reachable configurations. States are numbered in breadth-first order
    /// with symbols tried in alphabet order.
    pub fn compile(g: &SpkGrammar, state_cap: usize) -> Result<Self> {
        let required = g
            .forbidden()
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.len() as u128 + 1))
            .unwrap_or(u128::MAX);
        if required > state_cap as u128 {
            return Err(Error::StateCapExceeded {
                required,
                cap: state_cap,
            });
        }

        let v = g.alphabet().len();
        let mut ids: HashMap<ProgressVector, StateId> = HashMap::new();
        let mut configurations: Vec<Option<ProgressVector>> = Vec::new();
        let mut transitions: Vec<StateId> = Vec::new();
        let mut dead: Option<StateId> = None;

        let initial = ProgressVector(vec![0; g.forbidden().len()]);
        ids.insert(initial.clone(), 0);
        configurations.push(Some(initial));

        let mut cursor = 0usize;
        while cursor < configurations.len() {
            let current = configurations[cursor].clone();
            for sym in 0..v as SymbolId {
                let target = match &current {
                    None => cursor as StateId,
                    Some(pv) => {
                        let next = advance(g, pv, sym);
                        if next.is_complete(g) {
                            *dead.get_or_insert_with(|| {
                                configurations.push(None);
                                (configurations.len() - 1) as StateId
                            })
                        } else {
                            *ids.entry(next).or_insert_with_key(|pv| {
                                configurations.push(Some(pv.clone()));
                                (configurations.len() - 1) as StateId
                            })
                        }
                    }
                };
                transitions.push(target);
            }
            cursor += 1;
        }

        let dead = dead.expect("a non-empty forbidden set always reaches the dead state");
        Ok(PiecewiseDfa {
            alphabet: g.alphabet().clone(),
            transitions,
            configurations,
            dead,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.configurations.len()
    }

    pub fn dead_state(&self) -> StateId {
        self.dead
    }

    pub fn configuration(&self, state: StateId) -> Option<&ProgressVector> {
        self.configurations[state as usize].as_ref()
    }

    #[inline]
    pub fn next(&self, state: StateId, sym: SymbolId) -> StateId {
        self.transitions[state as usize * self.alphabet.len() + sym as usize]
    }

    pub fn run(&self, w: &[SymbolId]) -> Result<StateId> {
        self.alphabet.check(w)?;
        Ok(w.iter().fold(Self::INITIAL, |s, &sym| self.next(s, sym)))
    }

    pub fn accepts(&self, w: &[SymbolId]) -> Result<bool> {
        Ok(self.run(w)? != self.dead)
    }

    /// Adjacency listing, one `state σ -> state` edge per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for state in 0..self.state_count() as StateId {
            for (sym, &c) in self.alphabet.symbols().iter().enumerate() {
                let _ = writeln!(out, "{state} {c} -> {}", self.next(state, sym as SymbolId));
            }
        }
        out
    }
}

fn advance(g: &SpkGrammar, pv: &ProgressVector, sym: SymbolId) -> ProgressVector {
    ProgressVector(
        pv.0.iter()
            .zip(g.forbidden())
            .map(|(&p, f)| if f.symbols()[p] == sym { p + 1 } else { p })
            .collect(),
    )
}

/// `counts[r][s]`: number of strings of length `r` that keep state `s` live.
#[derive(Clone, Debug)]
pub struct LengthCountTable {
    counts: Vec<Vec<BigUint>>,
}

impl LengthCountTable {
    pub fn build(dfa: &PiecewiseDfa, max_length: usize) -> Self {
        let n = dfa.state_count();
        let v = dfa.alphabet().len();
        let mut counts = Vec::with_capacity(max_length + 1);
        counts.push(
            (0..n)
                .map(|s| {
                    if s as StateId == dfa.dead_state() {
                        BigUint::zero()
                    } else {
                        BigUint::one()
                    }
                })
                .collect::<Vec<_>>(),
        );
        for r in 1..=max_length {
            let prev: &Vec<BigUint> = &counts[r - 1];
            let row = (0..n as StateId)
                .map(|s| {
                    let mut total = BigUint::zero();
                    for sym in 0..v as SymbolId {
                        total += &prev[dfa.next(s, sym) as usize];
                    }
                    total
                })
                .collect();
            counts.push(row);
        }
        LengthCountTable { counts }
    }

    pub fn max_length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, state: StateId, remaining: usize) -> &BigUint {
        &self.counts[remaining][state as usize]
    }
}

/// Exact number of valid strings of exactly `length` symbols.
pub fn count_valid(dfa: &PiecewiseDfa, length: usize) -> BigUint {
    LengthCountTable::build(dfa, length)
        .count(PiecewiseDfa::INITIAL, length)
        .clone()
}

/// Draws a string uniformly from the valid strings of `length` symbols.
///
/// At each step the next symbol is chosen by comparing a fresh uniform
/// integer in `[0, counts[s][r])` against the cumulative completions of each
/// successor, so every valid string has probability exactly `1 / count`.
pub fn sample_uniform<R: Rng + ?Sized>(
    dfa: &PiecewiseDfa,
    table: &LengthCountTable,
    length: usize,
    rng: &mut R,
) -> Result<Vec<SymbolId>> {
    assert!(
        length <= table.max_length(),
        "count table covers lengths up to {}, asked for {length}",
        table.max_length()
    );
    if table.count(PiecewiseDfa::INITIAL, length).is_zero() {
        return Err(Error::EmptySlice(length));
    }
    let v = dfa.alphabet().len() as SymbolId;
    let mut state = PiecewiseDfa::INITIAL;
    let mut out = Vec::with_capacity(length);
    for remaining in (1..=length).rev() {
        let mut pick = random_below(rng, table.count(state, remaining));
        let mut chosen = None;
        for sym in 0..v {
            let target = dfa.next(state, sym);
            let weight = table.count(target, remaining - 1);
            if pick < *weight {
                chosen = Some((sym, target));
                break;
            }
            pick -= weight;
        }
        let (sym, target) = chosen.expect("successor weights sum to the state count");
        out.push(sym);
        state = target;
    }
    debug_assert_ne!(state, dfa.dead_state());
    Ok(out)
}

/// Uniform integer in `[0, bound)` by rejection on the bit length of `bound`.
pub(crate) fn random_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let limbs = bits.div_ceil(32) as usize;
    let top_mask = match bits % 32 {
        0 => u32::MAX,
        r => (1u32 << r) - 1,
    };
    let mut digits = vec![0u32; limbs];
    loop {
        rng.fill(&mut digits[..]);
        digits[limbs - 1] &= top_mask;
        let candidate = BigUint::from_slice(&digits);
        if candidate < *bound {
            return candidate;
        }
    }
}

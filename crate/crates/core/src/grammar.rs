// SPDX-License-Identifier: Apache-2.0

//! Strictly k-piecewise grammars and the subsequence relation.
//!
//! A grammar is stored by its forbidden k-subsequences; the permissible set
//! is everything else in Σ^k and is only materialized on request. A string is
//! in the language iff none of the forbidden entries occurs in it as a
//! (not necessarily contiguous) subsequence.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dense symbol index into an [`Alphabet`].
pub type SymbolId = u16;

/// Characters that cannot be grammar symbols because the file formats use them.
const RESERVED: &[char] = &[',', '#', ':'];

#[derive(Clone, Debug)]
pub struct Alphabet {
    symbols: Vec<char>,
    index: HashMap<char, SymbolId>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(Error::Grammar(format!(
                "alphabet needs at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > SymbolId::MAX as usize {
            return Err(Error::TooManySymbols(SymbolId::MAX as usize));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() || c.is_control() || RESERVED.contains(&c) {
                return Err(Error::Grammar(format!("{c:?} cannot be used as a symbol")));
            }
            if index.insert(c, i as SymbolId).is_some() {
                return Err(Error::Grammar(format!("duplicate alphabet symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> char {
        self.symbols[id as usize]
    }

    pub fn id(&self, symbol: char) -> Option<SymbolId> {
        self.index.get(&symbol).copied()
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.index.contains_key(&symbol)
    }

    pub fn encode(&self, text: &str) -> Result<Vec<SymbolId>> {
        text.chars()
            .map(|c| self.id(c).ok_or(Error::UnknownSymbol(c)))
            .collect()
    }

    pub fn decode(&self, ids: &[SymbolId]) -> String {
        ids.iter().map(|&id| self.symbol(id)).collect()
    }

    pub(crate) fn check(&self, ids: &[SymbolId]) -> Result<()> {
        match ids.iter().find(|&&id| id as usize >= self.len()) {
            Some(&id) => Err(Error::SymbolOutOfRange(id as usize, self.len())),
            None => Ok(()),
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

/// A non-empty sequence of symbol ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subsequence(Vec<SymbolId>);

impl Subsequence {
    pub fn new(symbols: Vec<SymbolId>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Grammar("empty subsequence".into()));
        }
        Ok(Subsequence(symbols))
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subsequence_of(&self, w: &[SymbolId]) -> bool {
        is_subsequence(&self.0, w)
    }
}

/// True iff the symbols of `v` occur in `w` in order, not necessarily
/// contiguously. Leftmost greedy matching is exact for this relation.
pub fn is_subsequence(v: &[SymbolId], w: &[SymbolId]) -> bool {
    let mut want = v.iter().peekable();
    for sym in w {
        match want.peek() {
            Some(&&next) if next == *sym => {
                want.next();
            }
            Some(_) => {}
            None => break,
        }
    }
    want.peek().is_none()
}

/// All distinct subsequences of `w` with length `1..=k`.
///
/// Each distinct subsequence is visited once through its leftmost embedding:
/// extending `u` by `σ` uses the first occurrence of `σ` after the end of
/// `u`'s leftmost match.
pub fn subseq_k(w: &[SymbolId], k: usize) -> BTreeSet<Subsequence> {
    let mut out = BTreeSet::new();
    if k == 0 || w.is_empty() {
        return out;
    }
    // `next[i]` lists, for each distinct symbol, its first position >= i.
    let distinct: BTreeSet<SymbolId> = w.iter().copied().collect();
    let first_from = |start: usize| -> Vec<usize> {
        distinct
            .iter()
            .filter_map(|&s| w[start..].iter().position(|&x| x == s).map(|p| start + p))
            .collect()
    };

    let mut frontier: Vec<(Vec<SymbolId>, usize)> = first_from(0)
        .into_iter()
        .map(|p| (vec![w[p]], p))
        .collect();
    for len in 1..=k {
        for (u, _) in &frontier {
            out.insert(Subsequence(u.clone()));
        }
        if len == k {
            break;
        }
        let mut next = Vec::new();
        for (u, end) in &frontier {
            for p in first_from(end + 1) {
                let mut ext = u.clone();
                ext.push(w[p]);
                next.push((ext, p));
            }
        }
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpkGrammar {
    alphabet: Alphabet,
    k: usize,
    forbidden: Vec<Subsequence>,
}

impl SpkGrammar {
    pub fn new(alphabet: Alphabet, k: usize, forbidden: Vec<Subsequence>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Grammar(format!("k must be at least 2, got {k}")));
        }
        if forbidden.is_empty() {
            return Err(Error::Grammar("at least one forbidden subsequence is required".into()));
        }
        let mut seen = HashSet::with_capacity(forbidden.len());
        for f in &forbidden {
            alphabet.check(f.symbols())?;
            if f.len() != k {
                return Err(Error::Grammar(format!(
                    "forbidden entry {:?} has length {}, expected k = {k}",
                    alphabet.decode(f.symbols()),
                    f.len()
                )));
            }
            if !seen.insert(f) {
                return Err(Error::Grammar(format!(
                    "duplicate forbidden entry {:?}",
                    alphabet.decode(f.symbols())
                )));
            }
        }
        let universe = (alphabet.len() as u128).checked_pow(k as u32);
        if universe == Some(forbidden.len() as u128) {
            return Err(Error::Grammar(
                "forbidden set covers all of Σ^k; the language would be empty".into(),
            ));
        }
        Ok(SpkGrammar {
            alphabet,
            k,
            forbidden,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn forbidden(&self) -> &[Subsequence] {
        &self.forbidden
    }

    /// Number of permissible k-subsequences, `V^k - |forbidden|`, if it fits.
    pub fn permissible_count(&self) -> Option<u128> {
        (self.alphabet.len() as u128)
            .checked_pow(self.k as u32)
            .map(|n| n - self.forbidden.len() as u128)
    }

    /// Enumerates Σ^k minus the forbidden set in lexicographic id order.
    /// Only sensible for small `V^k`.
    pub fn permissible(&self) -> impl Iterator<Item = Subsequence> + '_ {
        let v = self.alphabet.len();
        let forbidden: HashSet<&Subsequence> = self.forbidden.iter().collect();
        let total = self.permissible_count().map(|n| n + self.forbidden.len() as u128);
        let total = total.expect("Σ^k too large to enumerate");
        (0..total).filter_map(move |mut code| {
            let mut syms = vec![0; self.k];
            for slot in syms.iter_mut().rev() {
                *slot = (code % v as u128) as SymbolId;
                code /= v as u128;
            }
            let s = Subsequence(syms);
            (!forbidden.contains(&s)).then_some(s)
        })
    }

    pub fn encode(&self, text: &str) -> Result<Vec<SymbolId>> {
        self.alphabet.encode(text)
    }
}

/// Brute-force membership: no forbidden entry is a subsequence of `w`.
pub fn oracle_is_valid(g: &SpkGrammar, w: &[SymbolId]) -> Result<bool> {
    g.alphabet.check(w)?;
    Ok(!g.forbidden.iter().any(|f| f.is_subsequence_of(w)))
}

impl FromStr for SpkGrammar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut alphabet = None;
        let mut k = None;
        let mut forbidden = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| {
                Error::Grammar(format!("line {}: expected `key: value`", lineno + 1))
            })?;
            let value = value.trim();
            let slot_taken = match key.trim() {
                "alphabet" => alphabet.replace(value).is_some(),
                "k" => k.replace(value).is_some(),
                "forbidden" => forbidden.replace(value).is_some(),
                other => {
                    return Err(Error::Grammar(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            };
            if slot_taken {
                return Err(Error::Grammar(format!(
                    "line {}: key {:?} given twice",
                    lineno + 1,
                    key.trim()
                )));
            }
        }

        let alphabet = Alphabet::new(
            alphabet
                .ok_or_else(|| Error::Grammar("missing `alphabet:` line".into()))?
                .chars(),
        )?;
        let k: usize = k
            .ok_or_else(|| Error::Grammar("missing `k:` line".into()))?
            .parse()
            .map_err(|e| Error::Grammar(format!("bad k: {e}")))?;
        let forbidden = forbidden
            .ok_or_else(|| Error::Grammar("missing `forbidden:` line".into()))?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|entry| {
                alphabet
                    .encode(entry)
                    .map_err(|e| match e {
                        Error::UnknownSymbol(c) => Error::Grammar(format!(
                            "forbidden entry {entry:?} uses unknown symbol {c:?}"
                        )),
                        other => other,
                    })
                    .and_then(Subsequence::new)
            })
            .collect::<Result<Vec<_>>>()?;
        SpkGrammar::new(alphabet, k, forbidden)
    }
}

impl fmt::Display for SpkGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols: String = self.alphabet.symbols.iter().collect();
        writeln!(f, "alphabet: {symbols}")?;
        writeln!(f, "k: {}", self.k)?;
        let entries: Vec<String> = self
            .forbidden
            .iter()
            .map(|s| self.alphabet.decode(s.symbols()))
            .collect();
        writeln!(f, "forbidden: {}", entries.join(","))
    }
}

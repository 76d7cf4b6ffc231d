// SPDX-License-Identifier: Apache-2.0

//! Dataset generation, splitting, flattening and the dataset file format.

use std::fmt::{self, Write as _};
use std::time::SystemTime;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::automaton::{sample_uniform, LengthCountTable, PiecewiseDfa, DEFAULT_STATE_CAP};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::grammar::{Alphabet, SpkGrammar, SymbolId};

pub const TOOL_VERSION: &str = concat!("spk-ldd ", env!("CARGO_PKG_VERSION"));

/// Stream id reserved for the post-generation shuffle.
const SHUFFLE_STREAM: u64 = u64::MAX;

/// Inclusive length band and number of strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthPlan {
    min_len: usize,
    max_len: usize,
    count: usize,
}

impl LengthPlan {
    pub fn new(min_len: usize, max_len: usize, count: usize) -> Result<Self> {
        if min_len < 2 {
            return Err(Error::InvalidPlan(format!(
                "minimum length must be at least 2, got {min_len}"
            )));
        }
        if min_len > max_len {
            return Err(Error::InvalidPlan(format!(
                "minimum length {min_len} exceeds maximum {max_len}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidPlan("count must be at least 1".into()));
        }
        Ok(LengthPlan {
            min_len,
            max_len,
            count,
        })
    }

    /// Smallest plan over the band whose total length reaches `symbols`.
    pub fn with_target_symbols(min_len: usize, max_len: usize, symbols: usize) -> Result<Self> {
        let probe = LengthPlan::new(min_len, max_len, 1)?;
        let width = probe.width();
        let per_round: usize = (min_len..=max_len).sum();
        let rounds = symbols / per_round;
        let mut count = rounds * width;
        let mut total = rounds * per_round;
        while total < symbols {
            total += min_len + count % width;
            count += 1;
        }
        LengthPlan::new(min_len, max_len, count.max(1))
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn width(&self) -> usize {
        self.max_len - self.min_len + 1
    }

    /// Target length of string `i` before shuffling: round-robin over the band.
    pub fn length_of(&self, i: usize) -> usize {
        self.min_len + i % self.width()
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.count).map(|i| self.length_of(i))
    }

    pub fn total_symbols(&self) -> usize {
        self.lengths().sum()
    }
}

impl fmt::Display for LengthPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "min={} max={} count={}",
            self.min_len, self.max_len, self.count
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenerationInfo {
    pub tool_version: &'static str,
    pub created: SystemTime,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    alphabet: Alphabet,
    fingerprint: String,
    seed: u64,
    plan: LengthPlan,
    split: Option<Split>,
    strings: Vec<Vec<SymbolId>>,
    info: GenerationInfo,
}

impl Dataset {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn plan(&self) -> &LengthPlan {
        &self.plan
    }

    pub fn split(&self) -> Option<Split> {
        self.split
    }

    pub fn strings(&self) -> &[Vec<SymbolId>] {
        &self.strings
    }

    pub fn info(&self) -> &GenerationInfo {
        &self.info
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Sum of string lengths.
    pub fn symbol_count(&self) -> usize {
        self.strings.iter().map(Vec::len).sum()
    }

    /// Serialized form: `#` header lines, then one string per line. The
    /// creation time is not written.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.symbol_count() + self.len() + 256);
        let _ = writeln!(out, "# {}", self.info.tool_version);
        let _ = writeln!(out, "# grammar: {}", self.fingerprint);
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# plan: {}", self.plan);
        if let Some(split) = self.split {
            let _ = writeln!(out, "# split: {}", split.name());
        }
        for s in &self.strings {
            out.extend(s.iter().map(|&id| self.alphabet.symbol(id)));
            out.push('\n');
        }
        out
    }

    fn part(&self, split: Split, strings: Vec<Vec<SymbolId>>) -> Dataset {
        Dataset {
            alphabet: self.alphabet.clone(),
            fingerprint: self.fingerprint.clone(),
            seed: self.seed,
            plan: LengthPlan {
                count: strings.len(),
                ..self.plan
            },
            split: Some(split),
            strings,
            info: self.info.clone(),
        }
    }
}

/// Hex SHA-256 of the serialized grammar.
pub fn grammar_fingerprint(g: &SpkGrammar) -> String {
    hex::encode(Sha256::digest(g.to_string().as_bytes()))
}

/// A compiled grammar with a count table covering a maximum length; reusable
/// across plans whose band fits under that length.
pub struct Generator {
    dfa: PiecewiseDfa,
    table: LengthCountTable,
    fingerprint: String,
}

impl Generator {
    pub fn new(g: &SpkGrammar, max_len: usize, state_cap: usize) -> Result<Self> {
        let dfa = PiecewiseDfa::compile(g, state_cap)?;
        let table = LengthCountTable::build(&dfa, max_len);
        Ok(Generator {
            dfa,
            table,
            fingerprint: grammar_fingerprint(g),
        })
    }

    pub fn dfa(&self) -> &PiecewiseDfa {
        &self.dfa
    }

    /// String `i` is drawn from its own ChaCha stream `(seed, i)`, so the
    /// result does not depend on how work is spread over threads.
    pub fn generate(&self, plan: &LengthPlan, seed: u64) -> Result<Dataset> {
        if plan.max_len() > self.table.max_length() {
            return Err(Error::InvalidPlan(format!(
                "maximum length {} exceeds the prepared table ({})",
                plan.max_len(),
                self.table.max_length()
            )));
        }
        if let Some(len) = (plan.min_len()..=plan.max_len())
            .find(|&len| self.table.count(PiecewiseDfa::INITIAL, len).is_zero())
        {
            return Err(Error::EmptySlice(len));
        }

        let mut strings = (0..plan.count())
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                sample_uniform(&self.dfa, &self.table, plan.length_of(i), &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(SHUFFLE_STREAM);
        strings.shuffle(&mut rng);

        Ok(Dataset {
            alphabet: self.dfa.alphabet().clone(),
            fingerprint: self.fingerprint.clone(),
            seed,
            plan: *plan,
            split: None,
            strings,
            info: GenerationInfo {
                tool_version: TOOL_VERSION,
                created: SystemTime::now(),
            },
        })
    }
}

pub fn generate_dataset(g: &SpkGrammar, plan: &LengthPlan, seed: u64) -> Result<Dataset> {
    Generator::new(g, plan.max_len(), DEFAULT_STATE_CAP)?.generate(plan, seed)
}

/// Contiguous train/valid/test partition of the (already shuffled) strings.
/// Sizes are floored and the remainder goes to the training split.
pub fn split_dataset(d: &Dataset, fractions: [f64; 3]) -> Result<(Dataset, Dataset, Dataset)> {
    if fractions.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
        return Err(Error::InvalidSplit(format!(
            "fractions must be positive, got {fractions:?}"
        )));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidSplit(format!(
            "fractions must sum to 1, got {sum}"
        )));
    }
    let n = d.len();
    // The epsilon keeps products like 0.29 * 100 from flooring to 28.
    let mut sizes = fractions.map(|f| (f * n as f64 + 1e-9).floor() as usize);
    let assigned: usize = sizes.iter().sum();
    sizes[0] += n.saturating_sub(assigned);
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidSplit(format!(
            "{} split would be empty ({n} strings, fractions {fractions:?})",
            [Split::Train, Split::Valid, Split::Test][i].name()
        )));
    }
    let (train, rest) = d.strings.split_at(sizes[0]);
    let (valid, test) = rest.split_at(sizes[1]);
    Ok((
        d.part(Split::Train, train.to_vec()),
        d.part(Split::Valid, valid.to_vec()),
        d.part(Split::Test, test.to_vec()),
    ))
}

/// Concatenates the strings in dataset order. The separator, when given,
/// takes the id just past the alphabet.
pub fn flatten(d: &Dataset, separator: Option<char>) -> Result<Corpus> {
    let v = d.alphabet.len();
    if let Some(sep) = separator {
        if d.alphabet.contains(sep) {
            return Err(Error::SeparatorCollision(sep));
        }
    }
    let mut symbols = Vec::with_capacity(d.symbol_count() + d.len());
    for (i, s) in d.strings.iter().enumerate() {
        if i > 0 && separator.is_some() {
            symbols.push(v as SymbolId);
        }
        symbols.extend_from_slice(s);
    }
    Corpus::new(symbols, v + usize::from(separator.is_some()))
}

// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grammar::SymbolId;

/// A flat symbol sequence over `categories` dense ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    symbols: Vec<SymbolId>,
    categories: usize,
}

impl Corpus {
    pub fn new(symbols: Vec<SymbolId>, categories: usize) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= categories) {
            return Err(Error::SymbolOutOfRange(bad as usize, categories));
        }
        Ok(Corpus {
            symbols,
            categories,
        })
    }

    /// Every character of `text` is one symbol; ids follow sorted character
    /// order so the mapping is independent of where symbols first appear.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_chars(text.chars())
    }

    /// Reads a dataset file: `#` lines are headers, each remaining line is one
    /// string; strings are concatenated, optionally joined by `separator`.
    pub fn from_dataset_text(text: &str, separator: Option<char>) -> Result<Self> {
        let lines: Vec<&str> = dataset_lines(text).collect();
        if let Some(sep) = separator {
            if lines.iter().any(|l| l.contains(sep)) {
                return Err(Error::SeparatorCollision(sep));
            }
        }
        let mut chars: Vec<char> = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            if i > 0 {
                chars.extend(separator);
            }
            chars.extend(line.chars());
        }
        Self::from_chars(chars)
    }

    fn from_chars(chars: impl IntoIterator<Item = char>) -> Result<Self> {
        let chars: Vec<char> = chars.into_iter().collect();
        let distinct: Vec<char> = chars
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if distinct.len() > SymbolId::MAX as usize {
            return Err(Error::TooManySymbols(SymbolId::MAX as usize));
        }
        let symbols = chars
            .iter()
            .map(|c| distinct.binary_search(c).unwrap() as SymbolId)
            .collect();
        Ok(Corpus {
            symbols,
            categories: distinct.len().max(1),
        })
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn categories(&self) -> usize {
        self.categories
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Corpus {
            symbols,
            categories: self.categories,
        }
    }
}

/// Lines of a dataset file that are not `#` headers.
pub fn dataset_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .filter(|l| !l.starts_with('#'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_ids_are_sorted() {
        let c = Corpus::from_text("cab").unwrap();
        assert_eq!(c.symbols(), &[2, 0, 1]);
        assert_eq!(c.categories(), 3);
    }

    #[test]
    fn dataset_text_skips_headers() {
        let c = Corpus::from_dataset_text("# seed: 1\naa\nba\n", None).unwrap();
        assert_eq!(c.len(), 4);
        let c = Corpus::from_dataset_text("# seed: 1\naa\nba\n", Some('|')).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.categories(), 3);
        assert!(matches!(
            Corpus::from_dataset_text("a|\n", Some('|')),
            Err(Error::SeparatorCollision('|'))
        ));
    }

    #[test]
    fn out_of_range_ids() {
        assert!(Corpus::new(vec![0, 1, 2], 2).is_err());
        assert!(Corpus::new(vec![0, 1, 1], 2).is_ok());
    }
}

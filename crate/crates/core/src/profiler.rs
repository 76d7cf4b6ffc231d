// SPDX-License-Identifier: Apache-2.0

//! Mutual information between symbols a fixed distance apart, as a function
//! of that distance.
//!
//! For distance `D` the corpus is paired with itself shifted by `D`:
//! `X = s[0..n-D]`, `Y = s[D..n]`, and `I(D) = H(X) + H(Y) - H(X,Y)`.
//! Entropies are computed in nats and reported in bits.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::digamma::digamma;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Estimator {
    #[default]
    Grassberger,
    Plugin,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Grassberger => "grassberger",
            Estimator::Plugin => "plugin",
        }
    }

    pub fn entropy(self, c: &CountVector) -> f64 {
        match self {
            Estimator::Grassberger => entropy_grassberger(c),
            Estimator::Plugin => entropy_plugin(c),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grassberger" => Ok(Estimator::Grassberger),
            "plugin" => Ok(Estimator::Plugin),
            other => Err(Error::Recipe(format!("unknown estimator {other:?}"))),
        }
    }
}

/// Frequencies of the observed categories (zeros dropped).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
}

impl CountVector {
    pub fn new(counts: impl IntoIterator<Item = u64>) -> Result<Self> {
        let counts: Vec<u64> = counts.into_iter().filter(|&n| n > 0).collect();
        if counts.is_empty() {
            return Err(Error::EmptyCounts);
        }
        let total = counts.iter().sum();
        Ok(CountVector { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of observed categories.
    pub fn categories(&self) -> usize {
        self.counts.len()
    }
}

/// `ln N - (1/N) Σ N_i ψ(N_i)`, in nats.
pub fn entropy_grassberger(c: &CountVector) -> f64 {
    let n = c.total as f64;
    let weighted: f64 = c.counts.iter().map(|&ni| ni as f64 * digamma(ni)).sum();
    n.ln() - weighted / n
}

/// `-Σ p_i ln p_i` with `p_i = N_i / N`, in nats.
pub fn entropy_plugin(c: &CountVector) -> f64 {
    let n = c.total as f64;
    -c.counts
        .iter()
        .map(|&ni| {
            let p = ni as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Dense pair-frequency matrix for one distance.
#[derive(Clone, Debug)]
pub struct JointCounts {
    categories: usize,
    cells: Vec<u64>,
}

impl JointCounts {
    /// One pass over the aligned pairs `(s[i], s[i + distance])`.
    pub fn accumulate(corpus: &Corpus, distance: usize) -> Self {
        let k = corpus.categories();
        let s = corpus.symbols();
        let mut cells = vec![0u64; k * k];
        let n = s.len().saturating_sub(distance);
        for (&x, &y) in s[..n].iter().zip(&s[distance..]) {
            cells[x as usize * k + y as usize] += 1;
        }
        JointCounts {
            categories: k,
            cells,
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.cells[x * self.categories + y]
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.cells
            .chunks_exact(self.categories)
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.categories];
        for row in self.cells.chunks_exact(self.categories) {
            for (acc, &n) in out.iter_mut().zip(row) {
                *acc += n;
            }
        }
        out
    }

    pub fn joint(&self) -> Result<CountVector> {
        CountVector::new(self.cells.iter().copied())
    }

    /// Mutual information in nats under the chosen estimator.
    pub fn mutual_information(&self, estimator: Estimator) -> Result<f64> {
        let rows = self.row_sums();
        let cols = self.col_sums();
        match estimator {
            Estimator::Grassberger => {
                let hx = entropy_grassberger(&CountVector::new(rows)?);
                let hy = entropy_grassberger(&CountVector::new(cols)?);
                let hxy = entropy_grassberger(&self.joint()?);
                Ok(hx + hy - hxy)
            }
            // Same quantity as H(X) + H(Y) - H(X,Y) for plug-in entropies,
            // summed as Σ p(x,y) ln(p(x,y) / p(x)p(y)) so that exactly
            // independent counts give exactly zero.
            Estimator::Plugin => {
                let n = self.total();
                if n == 0 {
                    return Err(Error::EmptyCounts);
                }
                let k = self.categories;
                let mut acc = 0.0f64;
                for (x, &nx) in rows.iter().enumerate() {
                    for (y, &ny) in cols.iter().enumerate() {
                        let nxy = self.cells[x * k + y];
                        if nxy > 0 {
                            let ratio = (nxy as f64 * n as f64) / (nx as f64 * ny as f64);
                            acc += nxy as f64 * ratio.ln();
                        }
                    }
                }
                Ok(acc / n as f64)
            }
        }
    }
}

fn check_distance(corpus: &Corpus, distance: usize) -> Result<()> {
    if corpus.len() < 2 {
        return Err(Error::CorpusTooShort(corpus.len()));
    }
    if distance == 0 || distance >= corpus.len() {
        return Err(Error::DistanceOutOfRange {
            distance,
            max: corpus.len() - 1,
        });
    }
    Ok(())
}

/// `I(D)` in bits.
pub fn mi_at_distance(corpus: &Corpus, distance: usize, estimator: Estimator) -> Result<f64> {
    check_distance(corpus, distance)?;
    let joint = JointCounts::accumulate(corpus, distance);
    Ok(joint.mutual_information(estimator)? / std::f64::consts::LN_2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LddEntry {
    pub distance: usize,
    pub mi_bits: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LddProfile {
    pub corpus_id: String,
    pub estimator: Estimator,
    pub entries: Vec<LddEntry>,
}

impl LddProfile {
    pub fn max_distance(&self) -> usize {
        self.entries.last().map_or(0, |e| e.distance)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mi_bits).collect()
    }

    /// `I(D)` for `D` in `1..=max_distance`.
    pub fn at(&self, distance: usize) -> Option<f64> {
        distance
            .checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .map(|e| e.mi_bits)
    }

    /// `D,mi_bits` with 17 significant digits; values are written unclamped.
    pub fn to_csv(&self) -> String {
        self.render(None)
    }

    /// Same columns as [`to_csv`](Self::to_csv), with values below `floor`
    /// raised to it so the curve can be drawn on log axes.
    pub fn to_plot_csv(&self, floor: f64) -> String {
        self.render(Some(floor))
    }

    fn render(&self, floor: Option<f64>) -> String {
        let mut out = String::with_capacity(32 * (self.entries.len() + 1));
        out.push_str("D,mi_bits\n");
        for e in &self.entries {
            let v = match floor {
                Some(f) if e.mi_bits < f || e.mi_bits.is_nan() => f,
                _ => e.mi_bits,
            };
            let _ = writeln!(out, "{},{:.16e}", e.distance, v);
        }
        out
    }
}

/// `I(D)` for every `D` in `1..=max_distance`. Distances are computed in
/// parallel; each owns its counts, so output does not depend on scheduling.
pub fn ldd_profile(corpus: &Corpus, max_distance: usize, estimator: Estimator) -> Result<LddProfile> {
    check_distance(corpus, max_distance.max(1))?;
    if max_distance == 0 {
        return Err(Error::DistanceOutOfRange {
            distance: 0,
            max: corpus.len() - 1,
        });
    }
    let entries = (1..=max_distance)
        .into_par_iter()
        .map(|distance| {
            let joint = JointCounts::accumulate(corpus, distance);
            let mi = joint.mutual_information(estimator)? / std::f64::consts::LN_2;
            Ok(LddEntry {
                distance,
                mi_bits: mi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LddProfile {
        corpus_id: String::new(),
        estimator,
        entries,
    })
}

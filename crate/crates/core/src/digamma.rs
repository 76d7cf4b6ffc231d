// SPDX-License-Identifier: Apache-2.0

//! Digamma at positive integers.
//!
//! `ψ(n) = -γ + Σ_{j=1}^{n-1} 1/j`. Values up to [`TABLE_LEN`] come from a
//! table of compensated harmonic sums; larger arguments use the asymptotic
//! expansion, whose first omitted term is below 1e-40 there.

use std::sync::OnceLock;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub const TABLE_LEN: usize = 1 << 20;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Neumaier summation keeps the running harmonic sum within an ulp.
        let mut out = Vec::with_capacity(TABLE_LEN);
        out.push(f64::NEG_INFINITY);
        let (mut sum, mut comp) = (-EULER_GAMMA, 0.0f64);
        for n in 1..TABLE_LEN {
            out.push(sum + comp);
            let term = 1.0 / n as f64;
            let t = sum + term;
            if sum.abs() >= term {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        out
    })
}

/// `ψ(n)` for `n ≥ 1`; `ψ(0)` is `-∞`.
pub fn digamma(n: u64) -> f64 {
    match usize::try_from(n) {
        Ok(i) if i < TABLE_LEN => table()[i],
        _ => asymptotic(n as f64),
    }
}

fn asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    x.ln() - 0.5 / x - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0))
}

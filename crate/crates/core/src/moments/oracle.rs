use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Largest `n` for which partitions are enumerated explicitly.
pub const ORACLE_GUARD: usize = 40;

/// `F(k, n)`: total number of parts equal to `k` across all partitions of
/// `n`, for `1 ≤ k, n ≤ n_max`, built by listing every partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    n_max: usize,
    // counts[n][k], with row and column 0 unused
    counts: Vec<Vec<u64>>,
    partitions: Vec<u64>,
}

impl FrequencyTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `F(k, n)`; zero for `k > n` and for `k = 0`.
    pub fn get(&self, k: usize, n: usize) -> u64 {
        assert!(n <= self.n_max, "n={n} beyond table limit {}", self.n_max);
        self.counts[n].get(k).copied().unwrap_or(0)
    }

    /// `p(n)` as counted during enumeration.
    pub fn partition_count(&self, n: usize) -> u64 {
        self.partitions[n]
    }

    /// `Σ_k f(k)·F(k, n)`.
    pub fn moment(&self, f: impl Fn(u64) -> BigInt, n: usize) -> Result<BigInt> {
        if n > self.n_max {
            return Err(Error::OracleGuard {
                requested: n,
                guard: self.n_max,
            });
        }
        Ok((1..=n)
            .filter(|&k| self.counts[n][k] != 0)
            .map(|k| f(k as u64) * BigInt::from(self.counts[n][k]))
            .sum())
    }
}

pub fn frequency_oracle(n_max: usize) -> Result<FrequencyTable> {
    if n_max > ORACLE_GUARD {
        return Err(Error::OracleGuard {
            requested: n_max,
            guard: ORACLE_GUARD,
        });
    }
    let mut counts = vec![Vec::new(); n_max + 1];
    let mut partitions = vec![0u64; n_max + 1];
    let mut parts = Vec::new();
    for n in 0..=n_max {
        let mut row = vec![0u64; n + 1];
        enumerate(n, n, &mut parts, &mut |p| {
            partitions[n] += 1;
            for &k in p {
                row[k] += 1;
            }
        });
        counts[n] = row;
    }
    Ok(FrequencyTable {
        n_max,
        counts,
        partitions,
    })
}

/// Visit each partition of `n` into parts of size at most `max`, listed in
/// non-increasing order.
fn enumerate(n: usize, max: usize, parts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if n == 0 {
        visit(parts);
        return;
    }
    for k in (1..=max.min(n)).rev() {
        parts.push(k);
        enumerate(n - k, k, parts, visit);
        parts.pop();
    }
}

/// `Σ_k f(k)·F(k, n)` from a freshly enumerated table.
pub fn oracle_moment(f: impl Fn(u64) -> BigInt, n: usize) -> Result<BigInt> {
    frequency_oracle(n)?.moment(f, n)
}

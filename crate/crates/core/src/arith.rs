//! Elementary number theory: sieving, factorization, Kronecker symbols, the
//! index of `Γ₀(N)` in `SL₂(ℤ)` and half-integral Sturm bounds.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All primes up to a fixed limit, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> PrimeTable {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    PrimeTable { limit, primes }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Trial-division factorization into `(prime, exponent)` pairs, primes ascending.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Zero("factorize"));
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            let mut e = 0;
            while n % f == 0 {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Möbius function μ(n).
pub fn moebius(n: u64) -> Result<i64> {
    let factors = factorize(n)?;
    if factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Euler's totient φ(n).
pub fn totient(n: u64) -> Result<u64> {
    let factors = factorize(n)?;
    Ok(factors.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

/// `[SL₂(ℤ) : Γ₀(N)] = N · Π_{p | N} (1 + 1/p)`, in exact integer arithmetic.
pub fn index_gamma0(n: u64) -> Result<u64> {
    let factors = factorize(n)?;
    let mut num = n as u128;
    let mut den = 1u128;
    for &(p, _) in &factors {
        num *= (p + 1) as u128;
        den *= p as u128;
    }
    Ok((num / den) as u64)
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Kronecker symbol `(D / n)`, the completely multiplicative extension of the
/// Legendre symbol to all integers `n`.
pub fn kronecker_symbol(d: i64, n: i64) -> i8 {
    // (-1)^((b^2 - 1) / 8), indexed by b mod 8
    const TWO_TABLE: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

    let mut a = d as i128;
    let mut b = n as i128;
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a.is_even() && b.is_even() {
        return 0;
    }
    let mut v = 0;
    while b.is_even() {
        v += 1;
        b /= 2;
    }
    let mut k: i8 = if v % 2 == 0 {
        1
    } else {
        TWO_TABLE[(a & 7) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is now odd and positive
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let mut v = 0;
        while a.is_even() {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TWO_TABLE[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b.rem_euclid(r);
        b = r;
    }
}

/// Divisor of `k · index` in the half-integral Sturm bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    /// `⌊k · index / 24⌋`, as used in the ordinary-partition and filtered tables.
    Sharp24,
    /// `⌊k · index / 12⌋`, the usual integral-weight Sturm bound for `f·θ^k`.
    Conservative12,
}

impl BoundMode {
    pub fn divisor(self) -> u64 {
        match self {
            BoundMode::Sharp24 => 24,
            BoundMode::Conservative12 => 12,
        }
    }
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::Sharp24 => "sharp24",
            BoundMode::Conservative12 => "conservative12",
        })
    }
}

/// How the level `L` of `Γ₀(4L)` is chosen for a progression modulo `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelModel {
    /// `L = ℓ`
    Natural,
    /// `L = ℓ²`
    Safe,
    Custom(u64),
}

impl LevelModel {
    /// Resolve `L` for a progression modulo `ell`. `twist_modulus` is the
    /// modulus of a divisor twist (1 when untwisted); natural and safe levels
    /// use `lcm(ell, twist_modulus)` in place of `ell`.
    pub fn resolve(self, ell: u64, twist_modulus: u64) -> Result<u64> {
        match self {
            LevelModel::Custom(0) => Err(Error::Zero("custom level")),
            LevelModel::Custom(l) => Ok(l),
            LevelModel::Natural | LevelModel::Safe => {
                if !is_prime(ell) {
                    return Err(Error::NotPrime(ell));
                }
                if twist_modulus == 0 {
                    return Err(Error::Zero("twist modulus"));
                }
                let base = ell.lcm(&twist_modulus);
                Ok(if self == LevelModel::Safe {
                    base * base
                } else {
                    base
                })
            }
        }
    }

    /// Label in the `Γ₀(4ℓ)` / `Γ₀(4ℓ²)` notation.
    pub fn model_label(self) -> String {
        match self {
            LevelModel::Natural => "Gamma0(4l)".to_string(),
            LevelModel::Safe => "Gamma0(4l^2)".to_string(),
            LevelModel::Custom(l) => format!("Gamma0({})", 4 * l),
        }
    }
}

impl fmt::Display for LevelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelModel::Natural => f.write_str("natural"),
            LevelModel::Safe => f.write_str("safe"),
            LevelModel::Custom(l) => write!(f, "custom:{l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SturmConfig {
    pub mode: BoundMode,
    pub level_model: LevelModel,
}

impl SturmConfig {
    pub const fn new(mode: BoundMode, level_model: LevelModel) -> Self {
        Self { mode, level_model }
    }
}

impl Default for SturmConfig {
    fn default() -> Self {
        Self::new(BoundMode::Conservative12, LevelModel::Safe)
    }
}

/// Sturm bound for weight `m + 1/2` on `Γ₀(4L)` with `L` given directly.
pub fn sturm_bound_for_level(m: u32, mode: BoundMode, level_l: u64) -> Result<u64> {
    if m % 2 == 0 {
        return Err(Error::EvenMoment(m));
    }
    if level_l == 0 {
        return Err(Error::Zero("level"));
    }
    let k = 2 * m as u64 + 1;
    let index = index_gamma0(4 * level_l)?;
    Ok((k * index / mode.divisor()).max(1))
}

/// Sturm bound for the projection of an odd moment `M_m` to a progression
/// modulo the prime `ell`.
pub fn sturm_bound(m: u32, config: &SturmConfig, ell: u64) -> Result<u64> {
    if m % 2 == 0 {
        return Err(Error::EvenMoment(m));
    }
    let level_l = config.level_model.resolve(ell, 1)?;
    sturm_bound_for_level(m, config.mode, level_l)
}

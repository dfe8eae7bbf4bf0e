//! Euler products `Π_{r≥1} (1 − q^r)^{−c(r)}`, their exponent sequences, the
//! ensembles built on them, and the companion series used by the moment
//! transform.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Rational64;

use super::ring::{ExactInteger, Ring};
use super::series::{Series, SparseSeries};
use crate::error::{Error, Result};

/// Default truncation limit for products whose exponents grow linearly in `r`
/// (plane partitions), where factor-at-a-time generation costs `O(N³)`.
pub const GROWING_EXPONENT_LIMIT: usize = 5000;

/// Exponents `c(r) = v(r mod P) · r^e` given by a table of length `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicExponents {
    values: Vec<i64>,
    power_factor: u8,
}

impl PeriodicExponents {
    pub fn new(values: Vec<i64>, power_factor: u8) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidExponents("period must be at least 1".into()));
        }
        if values.iter().all(|&v| v == 0) {
            return Err(Error::InvalidExponents(
                "at least one exponent must be nonzero".into(),
            ));
        }
        if power_factor > 1 {
            return Err(Error::InvalidExponents(format!(
                "power factor must be 0 or 1, got {power_factor}"
            )));
        }
        Ok(Self { values, power_factor })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn power_factor(&self) -> u8 {
        self.power_factor
    }
}

/// The rule `r ↦ c(r)`. Positive exponents are partition-like: `c(r) = 1`
/// for all `r` gives `1/(q;q)∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentSequence {
    Ordinary,
    Coloured(u32),
    PlanePartition,
    /// `c(r) = 2` for odd `r`, `1` for even `r`.
    Overpartition,
    /// `c(r) = 2` for odd `r`, `−1` for even `r`.
    Theta,
    Periodic(PeriodicExponents),
}

impl ExponentSequence {
    pub fn validate(&self) -> Result<()> {
        match self {
            ExponentSequence::Coloured(0) => Err(Error::InvalidExponents(
                "coloured partitions need at least one colour".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn exponent(&self, r: u64) -> i64 {
        match self {
            ExponentSequence::Ordinary => 1,
            ExponentSequence::Coloured(k) => *k as i64,
            ExponentSequence::PlanePartition => r as i64,
            ExponentSequence::Overpartition => {
                if r % 2 == 1 {
                    2
                } else {
                    1
                }
            }
            ExponentSequence::Theta => {
                if r % 2 == 1 {
                    2
                } else {
                    -1
                }
            }
            ExponentSequence::Periodic(p) => {
                let v = p.values[(r % p.values.len() as u64) as usize];
                if p.power_factor == 1 {
                    v * r as i64
                } else {
                    v
                }
            }
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            ExponentSequence::Theta => false,
            ExponentSequence::Periodic(p) => p.values.iter().all(|&v| v >= 0),
            _ => true,
        }
    }

    fn grows_with_r(&self) -> bool {
        match self {
            ExponentSequence::PlanePartition => true,
            ExponentSequence::Periodic(p) => p.power_factor == 1,
            _ => false,
        }
    }

    /// `Π (1 − q^r)^{c(r)}` in closed sparse form when a classical identity
    /// gives one: Euler's pentagonal series, Gauss's `θ₄` for overpartitions,
    /// and Jacobi's cube for three colours.
    pub fn sparse_reciprocal<R: Ring>(&self, truncation: usize, ring: &R) -> Option<SparseSeries<R>> {
        match self {
            ExponentSequence::Ordinary | ExponentSequence::Coloured(1) => {
                Some(pentagonal_series(truncation, ring))
            }
            ExponentSequence::Overpartition => Some(theta4_series(truncation, ring)),
            ExponentSequence::Coloured(3) => Some(jacobi_cube_series(truncation, ring)),
            _ => None,
        }
    }
}

impl fmt::Display for ExponentSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentSequence::Ordinary => f.write_str("ordinary"),
            ExponentSequence::Coloured(k) => write!(f, "coloured({k})"),
            ExponentSequence::PlanePartition => f.write_str("plane"),
            ExponentSequence::Overpartition => f.write_str("overpartition"),
            ExponentSequence::Theta => f.write_str("theta"),
            ExponentSequence::Periodic(p) => {
                write!(f, "periodic({:?}", p.values)?;
                if p.power_factor == 1 {
                    f.write_str("*r")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// `(q;q)∞ = Σ_{k∈ℤ} (−1)^k q^{k(3k−1)/2}` through `q^N`.
pub fn pentagonal_series<R: Ring>(truncation: usize, ring: &R) -> SparseSeries<R> {
    let mut terms = vec![(0usize, 1i64)];
    for k in 1usize.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > truncation {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        terms.push((g1, sign));
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= truncation {
            terms.push((g2, sign));
        }
    }
    SparseSeries::from_terms(ring.clone(), terms)
}

/// `θ₄ = (q;q)∞ / (−q;q)∞ = 1 + 2 Σ_{j≥1} (−1)^j q^{j²}`.
pub fn theta4_series<R: Ring>(truncation: usize, ring: &R) -> SparseSeries<R> {
    let terms = std::iter::once((0usize, 1i64)).chain(
        (1usize..)
            .map(|j| (j * j, if j % 2 == 1 { -2 } else { 2 }))
            .take_while(|&(e, _)| e <= truncation),
    );
    SparseSeries::from_terms(ring.clone(), terms)
}

/// `(q;q)∞³ = Σ_{n≥0} (−1)^n (2n+1) q^{n(n+1)/2}`.
pub fn jacobi_cube_series<R: Ring>(truncation: usize, ring: &R) -> SparseSeries<R> {
    let terms = (0usize..)
        .map(|n| {
            let sign = if n % 2 == 1 { -1 } else { 1 };
            (n * (n + 1) / 2, sign * (2 * n as i64 + 1))
        })
        .take_while(|&(e, _)| e <= truncation);
    SparseSeries::from_terms(ring.clone(), terms)
}

/// Multiply `coeffs` in place by `Π_{r=1}^{N} (1 − q^r)^{−c(r)}`, one factor
/// at a time: `1/(1 − q^r)` is the prefix pass `a(i) += a(i−r)` and
/// `(1 − q^r)` is `a(i) −= a(i−r)`.
fn apply_euler_factors<R: Ring>(coeffs: &mut [R::Elem], ring: &R, exponent: impl Fn(u64) -> i64) {
    let n = coeffs.len() - 1;
    for r in 1..=n {
        let e = exponent(r as u64);
        // one pass per unit of |e| costs |e|·N; the binomial series costs N²/r
        if e.unsigned_abs() as usize > n / r + 1 {
            apply_binomial_factor(coeffs, ring, r, e);
            continue;
        }
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                for i in r..=n {
                    let prev = coeffs[i - r].clone();
                    ring.add_assign(&mut coeffs[i], &prev);
                }
            } else {
                for i in (r..=n).rev() {
                    let prev = coeffs[i - r].clone();
                    ring.sub_assign(&mut coeffs[i], &prev);
                }
            }
        }
    }
}

/// Multiply by `(1 − q^r)^{−e}` through its binomial series in `q^r`.
fn apply_binomial_factor<R: Ring>(coeffs: &mut [R::Elem], ring: &R, r: usize, e: i64) {
    let n = coeffs.len() - 1;
    let terms = n / r;
    // binom[j] = coefficient of q^{rj}
    let mut binom = Vec::with_capacity(terms + 1);
    let mut c = BigInt::from(1);
    binom.push(ring.one());
    for j in 1..=terms as i64 {
        // (1 − x)^{−e} = Σ_j C(e + j − 1, j) x^j, valid for either sign of e
        c = c * BigInt::from(e + j - 1) / BigInt::from(j);
        binom.push(ring.from_bigint(&c));
    }
    for i in (r..=n).rev() {
        let mut acc = coeffs[i].clone();
        for j in 1..=i / r {
            if !ring.is_zero(&binom[j]) {
                ring.add_assign(&mut acc, &ring.mul(&binom[j], &coeffs[i - j * r]));
            }
        }
        coeffs[i] = acc;
    }
}

/// `p(0..=N)` by Euler's pentagonal recurrence.
pub fn partition_counts<R: Ring>(truncation: usize, ring: &R) -> Series<R> {
    Series::one(ring.clone(), truncation)
        .divide_by_sparse(&pentagonal_series(truncation, ring))
        .expect("pentagonal series has unit constant term")
}

/// Coefficients of `Π_{r=1}^{N} (1 − q^r)^{−c(r)}` through `q^N`.
///
/// Products whose exponents grow with `r` are refused beyond
/// [`GROWING_EXPONENT_LIMIT`]; use [`euler_product_coefficients_unbounded`]
/// to lift the limit.
pub fn euler_product_coefficients<R: Ring>(
    c: &ExponentSequence,
    truncation: usize,
    ring: &R,
) -> Result<Series<R>> {
    if c.grows_with_r() && truncation > GROWING_EXPONENT_LIMIT {
        return Err(Error::GenerationLimit {
            ensemble: c.to_string(),
            requested: truncation,
            limit: GROWING_EXPONENT_LIMIT,
        });
    }
    euler_product_coefficients_unbounded(c, truncation, ring)
}

pub fn euler_product_coefficients_unbounded<R: Ring>(
    c: &ExponentSequence,
    truncation: usize,
    ring: &R,
) -> Result<Series<R>> {
    c.validate()?;
    let mut coeffs = Series::one(ring.clone(), truncation).into_coeffs();
    apply_euler_factors(&mut coeffs, ring, |r| c.exponent(r));
    Ok(Series::from_coeffs(ring.clone(), coeffs))
}

/// Coefficients of `(q;q)∞^k` (so `k = −1` gives partition counts).
pub fn eta_power_coefficients<R: Ring>(k: i64, truncation: usize, ring: &R) -> Series<R> {
    let mut coeffs = Series::one(ring.clone(), truncation).into_coeffs();
    if k != 0 {
        apply_euler_factors(&mut coeffs, ring, |_| -k);
    }
    Series::from_coeffs(ring.clone(), coeffs)
}

/// `τ(0..=N)` read off from `Δ = q·(q;q)∞²⁴`, with `τ(0) = 0`.
pub fn tau_coefficients<R: Ring>(truncation: usize, ring: &R) -> Result<Series<R>> {
    if truncation == 0 {
        return Err(Error::Zero("tau truncation"));
    }
    let eta24 = eta_power_coefficients(24, truncation - 1, ring);
    let mut coeffs = Vec::with_capacity(truncation + 1);
    coeffs.push(ring.zero());
    coeffs.extend(eta24.into_coeffs());
    Ok(Series::from_coeffs(ring.clone(), coeffs))
}

/// `r₂(n) = #{(x, y) ∈ ℤ² : x² + y² = n}` by lattice counting.
pub fn r2_coefficients(truncation: usize) -> Series<ExactInteger> {
    let mut counts = vec![0i64; truncation + 1];
    let mut s = 0i64;
    while ((s + 1) * (s + 1)) as usize <= truncation {
        s += 1;
    }
    for x in -s..=s {
        for y in -s..=s {
            let n = (x * x + y * y) as usize;
            if n <= truncation {
                counts[n] += 1;
            }
        }
    }
    Series::from_i64s(ExactInteger, &counts)
}

/// Where the companion coefficients `b(n)` come from.
#[derive(Debug, Clone)]
pub enum Companion {
    /// `b(n)` are the coefficients of the ensemble's own Euler product.
    SelfSeries,
    /// `b(n)` are supplied by an independent generator.
    Explicit {
        label: String,
        generator: fn(usize) -> Series<ExactInteger>,
    },
}

impl PartialEq for Companion {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Companion::SelfSeries, Companion::SelfSeries) => true,
            (Companion::Explicit { label: a, .. }, Companion::Explicit { label: b, .. }) => a == b,
            _ => false,
        }
    }
}

/// A partition ensemble: an Euler product together with its companion
/// series. `prefactor_alpha` records the `q^α` relating the product to an
/// eta-quotient and never enters arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub name: String,
    pub exponents: ExponentSequence,
    pub companion: Companion,
    pub prefactor_alpha: Rational64,
}

impl Ensemble {
    pub fn ordinary() -> Self {
        Self {
            name: "ordinary".into(),
            exponents: ExponentSequence::Ordinary,
            companion: Companion::SelfSeries,
            prefactor_alpha: Rational64::new(-1, 24),
        }
    }

    pub fn overpartition() -> Self {
        Self {
            name: "overpartition".into(),
            exponents: ExponentSequence::Overpartition,
            companion: Companion::SelfSeries,
            prefactor_alpha: Rational64::from_integer(0),
        }
    }

    /// Theta moments: exponents of `θ₃` with companion `θ₃² = Σ r₂(n) qⁿ`.
    pub fn theta() -> Self {
        Self {
            name: "theta".into(),
            exponents: ExponentSequence::Theta,
            companion: Companion::Explicit {
                label: "r2".into(),
                generator: r2_coefficients,
            },
            prefactor_alpha: Rational64::from_integer(0),
        }
    }

    pub fn coloured(k: u32) -> Result<Self> {
        let exponents = ExponentSequence::Coloured(k);
        exponents.validate()?;
        Ok(Self {
            name: format!("coloured({k})"),
            exponents,
            companion: Companion::SelfSeries,
            prefactor_alpha: Rational64::new(-(k as i64), 24),
        })
    }

    pub fn plane_partition() -> Self {
        Self {
            name: "plane".into(),
            exponents: ExponentSequence::PlanePartition,
            companion: Companion::SelfSeries,
            prefactor_alpha: Rational64::from_integer(0),
        }
    }

    /// Look up a preset: `ordinary`, `overpartition`, `theta`, `plane`, or
    /// `coloured(k)`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "ordinary" => return Ok(Self::ordinary()),
            "overpartition" => return Ok(Self::overpartition()),
            "theta" => return Ok(Self::theta()),
            "plane" => return Ok(Self::plane_partition()),
            _ => {}
        }
        for prefix in ["coloured(", "colored("] {
            if let Some(rest) = name.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
                let k = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::UnknownEnsemble(name.to_string()))?;
                return Self::coloured(k);
            }
        }
        Err(Error::UnknownEnsemble(name.to_string()))
    }

    /// Companion coefficients `b(0..=N)`.
    pub fn companion_series<R: Ring>(&self, truncation: usize, ring: &R) -> Result<Series<R>> {
        match &self.companion {
            Companion::SelfSeries => match self.exponents.sparse_reciprocal(truncation, ring) {
                Some(recip) => Series::one(ring.clone(), truncation).divide_by_sparse(&recip),
                None => euler_product_coefficients(&self.exponents, truncation, ring),
            },
            Companion::Explicit { generator, .. } => Ok(generator(truncation).reduce_into(ring)),
        }
    }

    /// `1/B(q)` in sparse form, when the companion is the ensemble's own
    /// product and that product has a sparse closed-form reciprocal.
    pub fn sparse_companion_reciprocal<R: Ring>(
        &self,
        truncation: usize,
        ring: &R,
    ) -> Option<SparseSeries<R>> {
        match self.companion {
            Companion::SelfSeries => self.exponents.sparse_reciprocal(truncation, ring),
            Companion::Explicit { .. } => None,
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Exact `b(n)` as `BigInt`s, a convenience for identity checks.
pub fn exact_companion(ensemble: &Ensemble, truncation: usize) -> Result<Vec<BigInt>> {
    Ok(ensemble
        .companion_series(truncation, &ExactInteger)?
        .into_coeffs())
}

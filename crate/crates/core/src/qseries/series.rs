use std::fmt::Write as _;
use std::io;

use num_bigint::BigInt;

use super::ring::{ExactInteger, Ring};
use crate::error::{Error, Result};

/// Truncated power series `a(0) + a(1)q + … + a(N)q^N`, exact through `q^N`
/// and undefined beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Series<R> {
    /// Panics on an empty coefficient vector: a series always carries `a(0)`.
    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a series holds at least a(0)");
        Self { ring, coeffs }
    }

    pub fn from_i64s(ring: R, values: &[i64]) -> Self {
        let coeffs = values.iter().map(|&v| ring.from_i64(v)).collect();
        Self::from_coeffs(ring, coeffs)
    }

    pub fn zero(ring: R, truncation: usize) -> Self {
        let coeffs = vec![ring.zero(); truncation + 1];
        Self { ring, coeffs }
    }

    pub fn one(ring: R, truncation: usize) -> Self {
        let mut s = Self::zero(ring, truncation);
        s.coeffs[0] = s.ring.one();
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// `N_max`: the highest exact power.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn get(&self, i: usize) -> Option<&R::Elem> {
        self.coeffs.get(i)
    }

    pub fn truncate(&self, truncation: usize) -> Result<Self> {
        if truncation > self.truncation() {
            return Err(Error::TruncationTooShort {
                needed: truncation,
                available: self.truncation(),
            });
        }
        Ok(Self::from_coeffs(
            self.ring.clone(),
            self.coeffs[..=truncation].to_vec(),
        ))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.descriptor().to_string(),
                right: other.ring.descriptor().to_string(),
            });
        }
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch {
                left: self.truncation(),
                right: other.truncation(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Ok(Self::from_coeffs(self.ring.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        Ok(Self::from_coeffs(self.ring.clone(), coeffs))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// Truncated Cauchy product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = (0..self.coeffs.len())
            .map(|n| self.ring.dot_reversed(&self.coeffs[..=n], &other.coeffs[..=n]))
            .collect();
        Ok(Self::from_coeffs(self.ring.clone(), coeffs))
    }

    /// Multiplicative inverse modulo `q^(N+1)`; requires a unit constant term.
    pub fn inverse(&self) -> Result<Self> {
        let r = &self.ring;
        let inv0 = r
            .inverse(&self.coeffs[0])
            .ok_or_else(|| Error::NonUnit(r.descriptor().to_string()))?;
        let n = self.truncation();
        let mut out = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            // a(0)·b(k) = -Σ_{j=1}^{k} a(j)·b(k-j)
            let s = r.dot_reversed(&self.coeffs[1..=k], &out[..k]);
            out.push(r.mul(&r.neg(&s), &inv0));
        }
        Ok(Self::from_coeffs(r.clone(), out))
    }

    /// Divide by a sparse series whose constant term is a unit, in
    /// `O(N · nnz)` time.
    pub fn divide_by_sparse(&self, divisor: &SparseSeries<R>) -> Result<Self> {
        if self.ring != divisor.ring {
            return Err(Error::RingMismatch {
                left: self.ring.descriptor().to_string(),
                right: divisor.ring.descriptor().to_string(),
            });
        }
        let r = &self.ring;
        let inv0 = r
            .inverse(&divisor.constant)
            .ok_or_else(|| Error::NonUnit(r.descriptor().to_string()))?;
        let unit_lead = divisor.constant == r.one();
        let mut out: Vec<R::Elem> = Vec::with_capacity(self.coeffs.len());
        for n in 0..self.coeffs.len() {
            let mut acc = self.coeffs[n].clone();
            for (j, c) in &divisor.terms {
                if *j > n {
                    break;
                }
                r.sub_assign(&mut acc, &r.mul(c, &out[n - j]));
            }
            out.push(if unit_lead { acc } else { r.mul(&acc, &inv0) });
        }
        Ok(Self::from_coeffs(r.clone(), out))
    }

    /// Write in the dump format: a header line followed by one decimal
    /// coefficient per line, index ascending.
    pub fn write_dump<W: io::Write>(&self, ensemble: &str, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "# ring={} N={} ensemble={}",
            self.ring.descriptor(),
            self.truncation(),
            ensemble
        )?;
        let mut buf = String::new();
        for c in &self.coeffs {
            buf.clear();
            let _ = write!(buf, "{c}");
            writeln!(out, "{buf}")?;
        }
        Ok(())
    }
}

impl Series<ExactInteger> {
    /// Image under the ring homomorphism `ℤ → R`.
    pub fn reduce_into<S: Ring>(&self, ring: &S) -> Series<S> {
        let coeffs = self.coeffs.iter().map(|c| ring.from_bigint(c)).collect();
        Series::from_coeffs(ring.clone(), coeffs)
    }

    pub fn as_bigints(&self) -> &[BigInt] {
        &self.coeffs
    }
}

/// A series with few nonzero terms, stored as its constant term plus a
/// sorted list of `(exponent, coefficient)` pairs with exponent ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSeries<R: Ring> {
    ring: R,
    constant: R::Elem,
    terms: Vec<(usize, R::Elem)>,
}

impl<R: Ring> SparseSeries<R> {
    /// Build from `(exponent, value)` pairs; repeated exponents are summed.
    pub fn from_terms(ring: R, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
        for (e, v) in terms {
            *acc.entry(e).or_default() += v;
        }
        let constant = ring.from_i64(acc.remove(&0).unwrap_or(0));
        let terms = acc
            .into_iter()
            .map(|(e, v)| (e, ring.from_i64(v)))
            .filter(|(_, v)| !ring.is_zero(v))
            .collect();
        Self {
            ring,
            constant,
            terms,
        }
    }

    pub fn nnz(&self) -> usize {
        self.terms.len() + usize::from(!self.ring.is_zero(&self.constant))
    }

    pub fn to_dense(&self, truncation: usize) -> Series<R> {
        let mut s = Series::zero(self.ring.clone(), truncation);
        s.coeffs[0] = self.constant.clone();
        for (e, v) in &self.terms {
            if *e <= truncation {
                s.coeffs[*e] = v.clone();
            }
        }
        s
    }
}

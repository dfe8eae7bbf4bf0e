//! Coefficient rings for truncated power series.
//!
//! Congruence work runs in [`IntegersMod`] with machine words; identity checks
//! run over the arbitrary-precision [`ExactInteger`] and [`ExactRational`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runtime description of a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    IntegersMod(u64),
    ExactInteger,
    ExactRational,
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::IntegersMod(n) => write!(f, "Z/{n}Z"),
            CoefficientRing::ExactInteger => f.write_str("ZZ"),
            CoefficientRing::ExactRational => f.write_str("QQ"),
        }
    }
}

pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync;

    fn descriptor(&self) -> CoefficientRing;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse, or `None` when `a` is not a unit.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, b);
    }

    fn from_u64(&self, v: u64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    /// `base^exp` for a small integer base.
    fn pow_u64(&self, base: u64, exp: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut b = self.from_u64(base);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// `Σ_i a[i] · b[len - 1 - i]` for slices of equal length.
    fn dot_reversed(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = self.zero();
        for (x, y) in a.iter().zip(b.iter().rev()) {
            if !self.is_zero(x) && !self.is_zero(y) {
                acc = self.add(&acc, &self.mul(x, y));
            }
        }
        acc
    }
}

/// `ℤ/Nℤ` with `2 ≤ N < 2³²`, elements kept in `[0, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegersMod {
    modulus: u64,
}

impl IntegersMod {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..(1u64 << 32)).contains(&modulus) {
            return Err(Error::UnsupportedModulus(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl Ring for IntegersMod {
    type Elem = u64;

    fn descriptor(&self) -> CoefficientRing {
        CoefficientRing::IntegersMod(self.modulus)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    fn from_u64(&self, v: u64) -> u64 {
        v % self.modulus
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits in u64")
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.modulus
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn inverse(&self, a: &u64) -> Option<u64> {
        let e = (*a as i64).extended_gcd(&(self.modulus as i64));
        (e.gcd == 1).then(|| e.x.rem_euclid(self.modulus as i64) as u64)
    }

    #[inline]
    fn add_assign(&self, a: &mut u64, b: &u64) {
        *a += b;
        if *a >= self.modulus {
            *a -= self.modulus;
        }
    }

    #[inline]
    fn sub_assign(&self, a: &mut u64, b: &u64) {
        *a = self.sub(a, b);
    }

    fn pow_u64(&self, base: u64, exp: u32) -> u64 {
        crate::arith::mod_pow(base, exp as u64, self.modulus)
    }

    fn dot_reversed(&self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        // products are below 2^64, so u128 never overflows here
        let acc: u128 = a.iter().zip(b.iter().rev()).map(|(&x, &y)| (x * y) as u128).sum();
        (acc % self.modulus as u128) as u64
    }
}

/// Arbitrary-precision integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExactInteger;

impl Ring for ExactInteger {
    type Elem = BigInt;

    fn descriptor(&self) -> CoefficientRing {
        CoefficientRing::ExactInteger
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }

    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }

    fn sub_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a -= b;
    }
}

/// Arbitrary-precision rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExactRational;

impl Ring for ExactRational {
    type Elem = BigRational;

    fn descriptor(&self) -> CoefficientRing {
        CoefficientRing::ExactRational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

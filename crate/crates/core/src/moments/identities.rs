use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{compute_moments, fermat_reduce, frequency_oracle, master_transform, MomentSeries, ORACLE_GUARD};
use crate::arith::moebius;
use crate::divisorweights::{sigma_table, DivisorWeight, WeightSelector};
use crate::error::{Error, Result};
use crate::qseries::{
    eta_power_coefficients, partition_counts, tau_coefficients, Companion, Ensemble, ExactInteger,
    ExactRational, IntegersMod, Ring, Series,
};

/// `C₁₂ = 65520/691` as (numerator, denominator).
pub const C12: (i64, i64) = (65520, 691);

/// First index at which two sides of an identity disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub left: String,
    pub right: String,
}

/// Outcome of an identity check over `0 ≤ n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub n_max: usize,
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn compare<T: PartialEq + fmt::Display>(
        check: impl Into<String>,
        n_max: usize,
        indices: impl IntoIterator<Item = usize>,
        left: impl Fn(usize) -> T,
        right: impl Fn(usize) -> T,
    ) -> Self {
        let counterexample = indices.into_iter().find_map(|n| {
            let (l, r) = (left(n), right(n));
            (l != r).then(|| Counterexample {
                n,
                left: l.to_string(),
                right: r.to_string(),
            })
        });
        Self {
            check: check.into(),
            n_max,
            counterexample,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{}: pass (n <= {})", self.check, self.n_max),
            Some(c) => write!(f, "{}: FAIL at n={} ({} != {})", self.check, c.n, c.left, c.right),
        }
    }
}

/// Moments `Σ_{d=1}^{n} σ_m(d)·b_k(n − d)` against the `k`-coloured
/// partition numbers `b_k`, with the plain divisor power `σ_m`.
pub fn coloured_moments<R: Ring>(k: u32, m: u32, truncation: usize, ring: &R) -> Result<MomentSeries<R>> {
    let ensemble = Ensemble::coloured(k)?;
    compute_moments(&ensemble, &DivisorWeight::unweighted(m), truncation, ring)
}

/// `n·p(n) = Σ_{d=1}^{n} σ₁(d)·p(n − d)` for `1 ≤ n ≤ N`, via the dense transform.
pub fn ford_recursion_check(n_max: usize) -> Result<CheckReport> {
    if n_max == 0 {
        return Err(Error::Zero("ford range"));
    }
    let p = partition_counts(n_max, &ExactInteger);
    let m1 = master_transform(&sigma_table(1, n_max, &ExactInteger), &p)?;
    let p = p.coeffs();
    Ok(CheckReport::compare(
        "ford",
        n_max,
        1..=n_max,
        |n| BigInt::from(n) * &p[n],
        |n| m1.values.coeffs()[n].clone(),
    ))
}

/// `M₁(n) = n·b(n)` for ensembles whose companion is their own product.
pub fn first_moment_check(ensemble: &Ensemble, n_max: usize) -> Result<CheckReport> {
    if !matches!(ensemble.companion, Companion::SelfSeries) {
        return Err(Error::Precondition(format!(
            "{ensemble} has an explicit companion; the first-moment identity does not apply"
        )));
    }
    let b = ensemble.companion_series(n_max, &ExactInteger)?;
    let m1 = compute_moments(
        ensemble,
        &WeightSelector::canonical_for(ensemble).at(1),
        n_max,
        &ExactInteger,
    )?;
    Ok(CheckReport::compare(
        format!("m1[{ensemble}]"),
        n_max,
        0..=n_max,
        |n| m1.values.coeffs()[n].clone(),
        |n| BigInt::from(n) * &b.coeffs()[n],
    ))
}

/// `Σ_k μ(k)·F(k, n) = p(n − 1)`, checked on the enumeration oracle and on
/// the transform of the Möbius divisor sums.
pub fn moebius_check(n_max: usize) -> Result<CheckReport> {
    if n_max == 0 {
        return Err(Error::Zero("moebius range"));
    }
    if n_max > ORACLE_GUARD {
        return Err(Error::OracleGuard {
            requested: n_max,
            guard: ORACLE_GUARD,
        });
    }
    let table = frequency_oracle(n_max)?;
    let mu = |k: u64| BigInt::from(moebius(k).expect("k >= 1"));
    let p = partition_counts(n_max, &ExactInteger);
    let transformed = master_transform(&super::divisor_sum_of(mu, n_max), &p)?;
    let oracle = CheckReport::compare(
        "moebius[oracle]",
        n_max,
        1..=n_max,
        |n| table.moment(mu, n).expect("within table"),
        |n| p.coeffs()[n - 1].clone(),
    );
    if !oracle.passed() {
        return Ok(oracle);
    }
    Ok(CheckReport::compare(
        "moebius",
        n_max,
        1..=n_max,
        |n| transformed.values.coeffs()[n].clone(),
        |n| p.coeffs()[n - 1].clone(),
    ))
}

/// `M_m(n) ≡ M_{m̄}(n) (mod ℓ)` with `m̄ = fermat_reduce(m, ℓ)`, for each
/// sampled `(m, ℓ, n)` and the ensemble's canonical weight.
pub fn fermat_value_check(ensemble: &Ensemble, samples: &[(u32, u64, usize)]) -> Result<CheckReport> {
    let n_max = samples.iter().map(|s| s.2).max().unwrap_or(0);
    let selector = WeightSelector::canonical_for(ensemble);
    let mut cache: BTreeMap<(u32, u64), Series<IntegersMod>> = BTreeMap::new();
    let mut series = |m: u32, ell: u64| -> Result<Series<IntegersMod>> {
        if let Some(s) = cache.get(&(m, ell)) {
            return Ok(s.clone());
        }
        let s = compute_moments(ensemble, &selector.at(m), n_max, &IntegersMod::new(ell)?)?.values;
        cache.insert((m, ell), s.clone());
        Ok(s)
    };
    for (i, &(m, ell, n)) in samples.iter().enumerate() {
        let reduced = fermat_reduce(m, ell)?;
        let (a, b) = (series(m, ell)?, series(reduced, ell)?);
        if a.coeffs()[n] != b.coeffs()[n] {
            return Ok(CheckReport {
                check: format!("fermat[{ensemble}]"),
                n_max,
                counterexample: Some(Counterexample {
                    n,
                    left: format!("M_{m} = {} mod {ell} (sample {i})", a.coeffs()[n]),
                    right: format!("M_{reduced} = {} mod {ell}", b.coeffs()[n]),
                }),
            });
        }
    }
    Ok(CheckReport {
        check: format!("fermat[{ensemble}]"),
        n_max,
        counterexample: None,
    })
}

/// `M₁₁(n) ≡ Σ_{d=1}^{n} τ(d)·p(n − d) (mod 691)` for `1 ≤ n ≤ N`.
pub fn tau_convolution_check(n_max: usize) -> Result<CheckReport> {
    if n_max == 0 {
        return Err(Error::Zero("tau range"));
    }
    let ring = IntegersMod::new(691)?;
    let p = partition_counts(n_max, &ring);
    let m11 = master_transform(&sigma_table(11, n_max, &ring), &p)?;
    let tau_p = tau_coefficients(n_max, &ring)?.multiply(&p)?;
    Ok(CheckReport::compare(
        "tau691",
        n_max,
        1..=n_max,
        |n| m11.values.coeffs()[n],
        |n| tau_p.coeffs()[n],
    ))
}

/// `q·E₁₂/Δ = (q;q)∞⁻²⁴ + (C₁₂/24)·Σ M₁₁^{(24)}(n) qⁿ` through `q^N`, over the
/// rationals.
///
/// `M^{(24)}₁₁` is the canonical 24-coloured moment, whose divisor weight
/// carries the exponent `c(r) = 24`. `E₁₂` is assembled as
/// `(441·E₄³ + 250·E₆²)/691`, so the left side does not reuse the `σ₁₁`
/// table of the right side.
pub fn j_identity_check(n_max: usize) -> Result<CheckReport> {
    if n_max == 0 {
        return Err(Error::Zero("j range"));
    }
    let z = &ExactInteger;
    let eisenstein = |weight_m: u32, c: i64| {
        let mut s = sigma_table(weight_m, n_max, z)
            .scale(&BigInt::from(c))
            .into_coeffs();
        s[0] = BigInt::from(1);
        Series::from_coeffs(ExactInteger, s)
    };
    let e4 = eisenstein(3, 240);
    let e6 = eisenstein(5, -504);
    let e4_cubed = e4.multiply(&e4)?.multiply(&e4)?;
    let e12_691 = e4_cubed
        .scale(&BigInt::from(441))
        .add(&e6.multiply(&e6)?.scale(&BigInt::from(250)))?;
    let inv_delta = eta_power_coefficients(-24, n_max, z);
    let left = e12_691
        .multiply(&inv_delta)?
        .reduce_into(&ExactRational)
        .scale(&BigRational::new(BigInt::from(1), BigInt::from(691)));

    let canonical = compute_moments(
        &Ensemble::coloured(24)?,
        &WeightSelector::canonical_for(&Ensemble::coloured(24)?).at(11),
        n_max,
        &ExactRational,
    )?;
    let c12_over_24 = BigRational::new(BigInt::from(C12.0), BigInt::from(C12.1 * 24));
    let right = inv_delta
        .reduce_into(&ExactRational)
        .add(&canonical.values.scale(&c12_over_24))?;
    Ok(CheckReport::compare(
        "j",
        n_max,
        0..=n_max,
        |n| left.coeffs()[n].clone(),
        |n| right.coeffs()[n].clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::euler_product_coefficients;
    use proptest::prelude::*;

    #[test]
    fn ford() {
        assert!(ford_recursion_check(1).unwrap().passed());
        assert!(ford_recursion_check(500).unwrap().passed());
        assert!(ford_recursion_check(0).is_err());
    }

    #[test]
    fn first_moment() {
        for e in [
            Ensemble::ordinary(),
            Ensemble::overpartition(),
            Ensemble::coloured(2).unwrap(),
        ] {
            let r = first_moment_check(&e, 2000).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert!(first_moment_check(&Ensemble::plane_partition(), 300)
            .unwrap()
            .passed());
        assert!(first_moment_check(&Ensemble::theta(), 10).is_err());
    }

    #[test]
    fn moebius() {
        assert!(moebius_check(40).unwrap().passed());
        assert!(moebius_check(41).is_err());
    }

    #[test]
    fn coloured_examples() {
        let c = coloured_moments(2, 1, 4, &ExactInteger).unwrap();
        assert_eq!(c.values.coeffs()[2], BigInt::from(5));
        let one = coloured_moments(1, 5, 100, &ExactInteger).unwrap();
        let ordinary = compute_moments(
            &Ensemble::ordinary(),
            &DivisorWeight::unweighted(5),
            100,
            &ExactInteger,
        )
        .unwrap();
        assert_eq!(one.values, ordinary.values);
        let c24 = coloured_moments(24, 11, 3, &ExactInteger).unwrap();
        assert_eq!(c24.values.coeffs()[1], BigInt::from(1));
        assert!(coloured_moments(0, 1, 3, &ExactInteger).is_err());
    }

    #[test]
    fn coloured_moments_use_plain_divisor_powers() {
        let n = 60;
        let b = euler_product_coefficients(&crate::qseries::ExponentSequence::Coloured(5), n, &ExactInteger)
            .unwrap();
        let direct = master_transform(&sigma_table(3, n, &ExactInteger), &b).unwrap();
        assert_eq!(
            coloured_moments(5, 3, n, &ExactInteger).unwrap().values,
            direct.values
        );
    }

    #[test]
    fn tau() {
        assert!(tau_convolution_check(300).unwrap().passed());
        let r = IntegersMod::new(691).unwrap();
        assert_eq!(r.from_i64(2050), 668);
        assert_eq!(r.from_i64(-23), 668);
    }

    #[test]
    fn j_identity() {
        assert!(j_identity_check(10).unwrap().passed());
        let r = j_identity_check(40).unwrap();
        assert!(r.passed(), "{r}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn fermat_values(samples in proptest::collection::vec(
            ((0u32..25).prop_map(|k| 2 * k + 1), prop::sample::select(vec![5u64, 7, 11, 13]), 0usize..=500),
            1..20,
        )) {
            for e in [Ensemble::ordinary(), Ensemble::overpartition()] {
                let r = fermat_value_check(&e, &samples).unwrap();
                prop_assert!(r.passed(), "{}", r);
            }
        }
    }

    #[test]
    fn failures_carry_witness() {
        let r = CheckReport::compare("demo", 3, 0..=3, |n| n, |n| if n == 2 { 7 } else { n });
        assert!(!r.passed());
        assert_eq!(r.counterexample.as_ref().unwrap().n, 2);
        assert_eq!(r.to_string(), "demo: FAIL at n=2 (2 != 7)");
    }
}

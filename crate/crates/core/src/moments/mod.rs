//! Frequency moments via the master transform, the enumeration oracle they
//! are tested against, and the classical identity checks.

mod identities;
mod oracle;

use std::fmt;

use num_bigint::BigInt;

pub use identities::{
    coloured_moments, fermat_value_check, first_moment_check, ford_recursion_check, j_identity_check,
    moebius_check, tau_convolution_check, CheckReport, Counterexample, C12,
};
pub use oracle::{frequency_oracle, oracle_moment, FrequencyTable, ORACLE_GUARD};

use crate::arith::is_prime;
use crate::divisorweights::{weighted_sigma_table, DivisorWeight};
use crate::error::{Error, Result};
use crate::qseries::{CoefficientRing, Ensemble, ExactInteger, Ring, Series};

/// `M(0..=N)` together with the labels needed to report on it.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeries<R: Ring> {
    pub values: Series<R>,
    pub ensemble_name: String,
    pub weight_descriptor: String,
}

impl<R: Ring> MomentSeries<R> {
    pub fn ring(&self) -> CoefficientRing {
        self.values.ring().descriptor()
    }

    pub fn truncation(&self) -> usize {
        self.values.truncation()
    }

    pub fn get(&self, n: usize) -> Option<&R::Elem> {
        self.values.get(n)
    }

    pub fn labelled(mut self, ensemble_name: impl Into<String>, weight: impl Into<String>) -> Self {
        self.ensemble_name = ensemble_name.into();
        self.weight_descriptor = weight.into();
        self
    }
}

impl<R: Ring> fmt::Display for MomentSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] over {} to N={}",
            self.ensemble_name,
            self.weight_descriptor,
            self.ring(),
            self.truncation()
        )
    }
}

/// `M(n) = Σ_{d=1}^{n} σ(d)·b(n − d)` by direct convolution.
pub fn master_transform<R: Ring>(sigma: &Series<R>, companion: &Series<R>) -> Result<MomentSeries<R>> {
    let ring = sigma.ring();
    if !ring.is_zero(&sigma.coeffs()[0]) {
        return Err(Error::Precondition("divisor table must have σ(0) = 0".into()));
    }
    if companion.coeffs()[0] != ring.one() {
        return Err(Error::Precondition("companion series must have b(0) = 1".into()));
    }
    Ok(MomentSeries {
        values: sigma.multiply(companion)?,
        ensemble_name: "custom".into(),
        weight_descriptor: "custom".into(),
    })
}

/// Moments of `ensemble` under `weight` through `q^N`.
///
/// When the companion `B(q)` has a sparse reciprocal `S(q)`, the product
/// `σ·B` is computed as `σ / S` in `O(N·√N)`; otherwise the dense transform
/// is used.
pub fn compute_moments<R: Ring>(
    ensemble: &Ensemble,
    weight: &DivisorWeight,
    truncation: usize,
    ring: &R,
) -> Result<MomentSeries<R>> {
    let sigma = weighted_sigma_table(weight, truncation, ring)?;
    let moments = match ensemble.sparse_companion_reciprocal(truncation, ring) {
        Some(recip) => MomentSeries {
            values: sigma.divide_by_sparse(&recip)?,
            ensemble_name: String::new(),
            weight_descriptor: String::new(),
        },
        None => master_transform(&sigma, &ensemble.companion_series(truncation, ring)?)?,
    };
    Ok(moments.labelled(ensemble.name.clone(), weight.descriptor()))
}

/// `a(n) = Σ_{d|n} f(d)` for an arbitrary arithmetic weight `f`.
pub fn divisor_sum_of(f: impl Fn(u64) -> BigInt, truncation: usize) -> Series<ExactInteger> {
    let mut coeffs = vec![BigInt::from(0); truncation + 1];
    for d in 1..=truncation {
        let w = f(d as u64);
        if w == BigInt::from(0) {
            continue;
        }
        for k in (d..=truncation).step_by(d) {
            coeffs[k] += &w;
        }
    }
    Series::from_coeffs(ExactInteger, coeffs)
}

/// The odd `m̄ ∈ {1, 3, …, ℓ − 2}` with `m̄ ≡ m (mod ℓ − 1)`.
pub fn fermat_reduce(m: u32, ell: u64) -> Result<u32> {
    if m % 2 == 0 {
        return Err(Error::EvenMoment(m));
    }
    if ell < 5 {
        return Err(Error::PrimeTooSmall { ell, min: 5 });
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    Ok((u64::from(m) % (ell - 1)) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisorweights::{sigma_table, GlaisherFilter, WeightSelector};
    use crate::qseries::{partition_counts, IntegersMod};
    use proptest::prelude::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn transform_examples() {
        let n = 10;
        let p = partition_counts(n, &ExactInteger);
        let m3 = master_transform(&sigma_table(3, n, &ExactInteger), &p).unwrap();
        assert_eq!(m3.get(0), Some(&int(0)));
        assert_eq!(m3.get(5), Some(&int(287)));
        let m1 = master_transform(&sigma_table(1, n, &ExactInteger), &p).unwrap();
        assert_eq!(m1.get(4), Some(&int(20)));
    }

    #[test]
    fn transform_preconditions() {
        let p = partition_counts(5, &ExactInteger);
        let bad_sigma = Series::from_i64s(ExactInteger, &[1, 1, 1, 1, 1, 1]);
        assert!(matches!(
            master_transform(&bad_sigma, &p),
            Err(Error::Precondition(_))
        ));
        let sigma = sigma_table(1, 5, &ExactInteger);
        let bad_companion = Series::from_i64s(ExactInteger, &[2, 1, 1, 1, 1, 1]);
        assert!(master_transform(&sigma, &bad_companion).is_err());
        assert!(matches!(
            master_transform(&sigma, &partition_counts(4, &ExactInteger)),
            Err(Error::TruncationMismatch { .. })
        ));
        let r = IntegersMod::new(7).unwrap();
        let mixed = partition_counts(5, &ExactInteger).reduce_into(&r);
        let sigma7 = sigma_table(1, 5, &IntegersMod::new(5).unwrap());
        assert!(matches!(
            master_transform(&sigma7, &mixed),
            Err(Error::RingMismatch { .. })
        ));
    }

    #[test]
    fn fermat_examples() {
        assert_eq!(fermat_reduce(3, 5).unwrap(), 3);
        assert_eq!(fermat_reduce(11, 5).unwrap(), 3);
        assert_eq!(fermat_reduce(7, 7).unwrap(), 1);
        assert_eq!(fermat_reduce(49, 31).unwrap(), 19);
        assert!(matches!(fermat_reduce(4, 5), Err(Error::EvenMoment(4))));
        assert!(fermat_reduce(3, 3).is_err());
        assert!(fermat_reduce(3, 9).is_err());
    }

    #[test]
    fn labels() {
        let m = compute_moments(
            &Ensemble::ordinary(),
            &WeightSelector::Filter(GlaisherFilter::OddDivisors).at(3),
            10,
            &ExactInteger,
        )
        .unwrap();
        assert_eq!(m.ensemble_name, "ordinary");
        assert_eq!(m.weight_descriptor, "m=3,filter=odd");
        assert_eq!(m.ring(), CoefficientRing::ExactInteger);
    }

    #[test]
    fn sparse_path_matches_dense_transform() {
        let ensembles = [
            Ensemble::ordinary(),
            Ensemble::overpartition(),
            Ensemble::coloured(3).unwrap(),
        ];
        for e in &ensembles {
            for m in [1u32, 3, 7] {
                let w = WeightSelector::canonical_for(e).at(m);
                let fast = compute_moments(e, &w, 600, &ExactInteger).unwrap();
                let companion =
                    crate::qseries::euler_product_coefficients(&e.exponents, 600, &ExactInteger).unwrap();
                let sigma = weighted_sigma_table(&w, 600, &ExactInteger).unwrap();
                let slow = master_transform(&sigma, &companion).unwrap();
                assert_eq!(fast.values, slow.values, "{e} m={m}");
            }
        }
    }

    #[test]
    fn divisor_sum_of_matches_sigma() {
        let t = divisor_sum_of(|d| BigInt::from(d).pow(3), 200);
        assert_eq!(t, sigma_table(3, 200, &ExactInteger));
    }

    proptest! {
        #[test]
        fn reduction_commutes_with_transform(m in (0u32..12).prop_map(|k| 2 * k + 1), ell in prop::sample::select(vec![5u64, 7, 11, 13, 691])) {
            let r = IntegersMod::new(ell).unwrap();
            let e = Ensemble::overpartition();
            let w = WeightSelector::canonical_for(&e).at(m);
            let exact = compute_moments(&e, &w, 300, &ExactInteger).unwrap();
            let reduced = compute_moments(&e, &w, 300, &r).unwrap();
            prop_assert_eq!(exact.values.reduce_into(&r), reduced.values);
        }
    }
}

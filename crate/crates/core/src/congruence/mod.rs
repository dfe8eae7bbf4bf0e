//! Progression projection, heuristic scanning for congruences
//! `M(ℓn + r) ≡ 0 (mod ℓ)`, and certification up to the Sturm bound.

mod certify;
mod scan;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use certify::{
    certify, certify_filtered, CertificationRecord, CertificationStatus, FailWitness, ResourceLimits,
    DEFAULT_MAX_COEFFICIENTS,
};
pub use scan::{scan, scan_task, ScanHit, ScanParameters, ScanReport, ScanTaskResult};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::moments::{fermat_reduce, MomentSeries};
use crate::qseries::{Ring, Series};

/// The arithmetic progression `ℓn + r`, `0 ≤ r < ℓ`, with `ℓ` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Progression {
    pub ell: u64,
    pub r: u64,
}

impl Progression {
    pub fn new(ell: u64, r: u64) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if r >= ell {
            return Err(Error::ResidueOutOfRange { r, ell });
        }
        Ok(Self { ell, r })
    }

    /// `ℓn + r`.
    pub fn index(&self, n: u64) -> u64 {
        self.ell * n + self.r
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}n+{}", self.ell, self.r)
    }
}

/// `M(ℓn + r)` for `0 ≤ n ≤ ⌊(N − r)/ℓ⌋`.
pub fn project<R: Ring>(moments: &MomentSeries<R>, prog: Progression) -> Result<Series<R>> {
    project_series(&moments.values, prog)
}

pub fn project_series<R: Ring>(series: &Series<R>, prog: Progression) -> Result<Series<R>> {
    let prog = Progression::new(prog.ell, prog.r)?;
    let n = series.truncation();
    let r = prog.r as usize;
    if r > n {
        return Err(Error::TruncationTooShort {
            needed: r,
            available: n,
        });
    }
    let coeffs = series.coeffs()[r..]
        .iter()
        .step_by(prog.ell as usize)
        .cloned()
        .collect();
    Ok(Series::from_coeffs(series.ring().clone(), coeffs))
}

/// Residues `r` with `M_m(ℓn + r) ≡ 0 (mod ℓ)` for ordinary partitions,
/// predicted for odd `m` from three sources: the zero class whenever
/// `m ≡ 1 (mod ℓ − 1)`, the Ramanujan classes lifted from `M₁`, and the base
/// congruences of `M₃` and `M₇` lifted by Fermat reduction.
pub fn predicted_hits(m_values: &[u32], ells: &[u64]) -> BTreeSet<(u32, u64, u64)> {
    const RAMANUJAN: [(u64, u64); 3] = [(5, 4), (7, 5), (11, 6)];
    const BASE: [(u32, u64, u64); 5] = [(3, 7, 0), (3, 7, 5), (3, 11, 0), (3, 11, 6), (7, 11, 6)];
    let mut out = BTreeSet::new();
    for &m in m_values.iter().filter(|m| *m % 2 == 1) {
        for &ell in ells.iter().filter(|&&l| is_prime(l)) {
            let fermat_one = u64::from(m) % (ell - 1) == 1 % (ell - 1);
            if fermat_one {
                out.insert((m, ell, 0));
                for &(l, r) in &RAMANUJAN {
                    if l == ell {
                        out.insert((m, ell, r));
                    }
                }
            }
            if let Ok(reduced) = fermat_reduce(m, ell) {
                for &(base, l, r) in &BASE {
                    if l == ell && base == reduced {
                        out.insert((m, ell, r));
                    }
                }
            }
        }
    }
    out
}

/// Zero-class hits `M_m(ℓn) ≡ 0 (mod ℓ)` predicted by `m ≡ 1 (mod ℓ − 1)`
/// alone, the complete prediction for ensembles without further modular
/// congruences (such as overpartitions).
pub fn predicted_zero_class_hits(m_values: &[u32], ells: &[u64]) -> BTreeSet<(u32, u64, u64)> {
    let mut out = BTreeSet::new();
    for &m in m_values.iter().filter(|m| *m % 2 == 1) {
        for &ell in ells.iter().filter(|&&l| is_prime(l)) {
            if u64::from(m) % (ell - 1) == 1 % (ell - 1) {
                out.insert((m, ell, 0));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisorweights::{DivisorWeight, WeightSelector};
    use crate::moments::compute_moments;
    use crate::qseries::{Ensemble, ExactInteger, IntegersMod};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn progression_validation() {
        assert!(Progression::new(7, 5).is_ok());
        assert!(matches!(
            Progression::new(7, 7),
            Err(Error::ResidueOutOfRange { .. })
        ));
        assert!(matches!(Progression::new(9, 1), Err(Error::NotPrime(9))));
        assert_eq!(Progression::new(7, 5).unwrap().index(3), 26);
    }

    #[test]
    fn projection_examples() {
        let s = Series::from_i64s(ExactInteger, &(0..=20).collect::<Vec<_>>());
        let p = project_series(&s, Progression::new(5, 0).unwrap()).unwrap();
        assert_eq!(p, Series::from_i64s(ExactInteger, &[0, 5, 10, 15, 20]));
        let bad = Progression { ell: 5, r: 5 };
        assert!(project_series(&s, bad).is_err());
        let short = Series::from_i64s(ExactInteger, &[0, 1]);
        assert!(project_series(&short, Progression::new(5, 4).unwrap()).is_err());

        let m1 = compute_moments(
            &Ensemble::ordinary(),
            &DivisorWeight::unweighted(1),
            20,
            &ExactInteger,
        )
        .unwrap();
        let p = project(&m1, Progression::new(5, 4).unwrap()).unwrap();
        assert_eq!(p.coeffs()[1], BigInt::from(270));
        let m3 = compute_moments(
            &Ensemble::ordinary(),
            &DivisorWeight::unweighted(3),
            20,
            &ExactInteger,
        )
        .unwrap();
        let p = project(&m3, Progression::new(7, 5).unwrap()).unwrap();
        assert_eq!(p.coeffs()[0], BigInt::from(287));
    }

    #[test]
    fn prediction_examples() {
        let p = predicted_hits(&[11], &[11]);
        assert!(p.contains(&(11, 11, 0)) && p.contains(&(11, 11, 6)));
        let p = predicted_hits(&[15], &[7]);
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![(15, 7, 0), (15, 7, 5)]);
        assert!(predicted_hits(&[3], &[5]).is_empty());
        assert_eq!(
            predicted_hits(&[17], &[11]).into_iter().collect::<Vec<_>>(),
            vec![(17, 11, 6)]
        );
        assert!(predicted_hits(&[4], &[5]).is_empty());
    }

    #[test]
    fn zero_class_first_moment() {
        let ensembles = [
            Ensemble::ordinary(),
            Ensemble::overpartition(),
            Ensemble::coloured(2).unwrap(),
            Ensemble::coloured(3).unwrap(),
            Ensemble::plane_partition(),
        ];
        for e in &ensembles {
            let w = WeightSelector::canonical_for(e).at(1);
            for ell in crate::arith::primes_up_to(31).iter() {
                let r = IntegersMod::new(ell).unwrap();
                let m = compute_moments(e, &w, 2000, &r).unwrap();
                let p = project(&m, Progression::new(ell, 0).unwrap()).unwrap();
                assert!(p.coeffs().iter().all(|c| *c == 0), "{e} ell={ell}");
            }
        }
    }

    proptest! {
        #[test]
        fn projection_commutes_with_reduction(
            m in (0u32..13).prop_map(|k| 2 * k + 1),
            ell in prop::sample::select(vec![5u64, 7, 11, 13, 17]),
            r_seed in 0u64..100,
        ) {
            let prog = Progression::new(ell, r_seed % ell).unwrap();
            let ring = IntegersMod::new(ell).unwrap();
            let e = Ensemble::ordinary();
            let w = DivisorWeight::unweighted(m);
            let exact = compute_moments(&e, &w, 400, &ExactInteger).unwrap();
            let reduced = compute_moments(&e, &w, 400, &ring).unwrap();
            prop_assert_eq!(
                project(&exact, prog).unwrap().reduce_into(&ring),
                project(&reduced, prog).unwrap()
            );
        }
    }
}

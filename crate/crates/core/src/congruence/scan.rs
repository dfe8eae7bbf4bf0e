use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{project_series, Progression};
use crate::divisorweights::WeightSelector;
use crate::error::{Error, Result};
use crate::moments::compute_moments;
use crate::qseries::{Ensemble, IntegersMod};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParameters {
    pub ensemble: String,
    /// Weight family without the exponent, empty when unweighted.
    pub weight: String,
    pub m_values: Vec<u32>,
    pub ells: Vec<u64>,
    pub n_scan: usize,
    pub include_r0: bool,
}

/// The residues found for one `(m, ℓ)` task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTaskResult {
    pub m: u32,
    pub ell: u64,
    pub residues: Vec<u64>,
}

/// One class `(ℓ, r)` and the sorted exponents `m` for which it vanished.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    pub ell: u64,
    pub r: u64,
    pub m: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub parameters: ScanParameters,
    pub zero_class: Vec<ScanHit>,
    pub nonzero_class: Vec<ScanHit>,
}

impl ScanReport {
    /// Group task results by `(ℓ, r)`. The order of `results` is irrelevant.
    pub fn from_results(
        parameters: ScanParameters,
        results: impl IntoIterator<Item = ScanTaskResult>,
    ) -> Self {
        let mut grouped: BTreeMap<(u64, u64), BTreeSet<u32>> = BTreeMap::new();
        for t in results {
            for r in t.residues {
                grouped.entry((t.ell, r)).or_default().insert(t.m);
            }
        }
        let (zero, nonzero): (Vec<_>, Vec<_>) = grouped
            .into_iter()
            .map(|((ell, r), ms)| ScanHit {
                ell,
                r,
                m: ms.into_iter().collect(),
            })
            .partition(|h| h.r == 0);
        Self {
            parameters,
            zero_class: zero,
            nonzero_class: nonzero,
        }
    }

    /// Every hit as `(m, ℓ, r)`.
    pub fn triples(&self) -> BTreeSet<(u32, u64, u64)> {
        self.zero_class
            .iter()
            .chain(&self.nonzero_class)
            .flat_map(|h| h.m.iter().map(move |&m| (m, h.ell, h.r)))
            .collect()
    }

    pub fn nonzero_triples(&self) -> BTreeSet<(u32, u64, u64)> {
        self.triples().into_iter().filter(|t| t.2 != 0).collect()
    }

    pub fn zero_triples(&self) -> BTreeSet<(u32, u64, u64)> {
        self.triples().into_iter().filter(|t| t.2 == 0).collect()
    }
}

/// Residues `r` (from 0 or 1 per `include_r0`) with `M_m(ℓn + r) ≡ 0 (mod ℓ)`
/// for every `ℓn + r ≤ n_scan`.
pub fn scan_task(
    ensemble: &Ensemble,
    selector: &WeightSelector,
    m: u32,
    ell: u64,
    n_scan: usize,
    include_r0: bool,
) -> Result<ScanTaskResult> {
    if m % 2 == 0 {
        return Err(Error::EvenMoment(m));
    }
    if (n_scan as u64) < ell {
        return Err(Error::Precondition(format!(
            "n_scan = {n_scan} is below ell = {ell}"
        )));
    }
    let ring = IntegersMod::new(ell)?;
    let moments = compute_moments(ensemble, &selector.at(m), n_scan, &ring)?;
    let mut residues = Vec::new();
    for r in u64::from(!include_r0)..ell {
        let projected = project_series(&moments.values, Progression::new(ell, r)?)?;
        if projected.coeffs().iter().all(|&c| c == 0) {
            residues.push(r);
        }
    }
    Ok(ScanTaskResult { m, ell, residues })
}

/// Run every `(m, ℓ)` task in sequence.
pub fn scan(
    ensemble: &Ensemble,
    selector: &WeightSelector,
    m_values: &[u32],
    ells: &[u64],
    n_scan: usize,
    include_r0: bool,
) -> Result<ScanReport> {
    let mut results = Vec::new();
    for &m in m_values {
        for &ell in ells {
            results.push(scan_task(ensemble, selector, m, ell, n_scan, include_r0)?);
        }
    }
    Ok(ScanReport::from_results(
        ScanParameters {
            ensemble: ensemble.name.clone(),
            weight: selector.to_string(),
            m_values: m_values.to_vec(),
            ells: ells.to_vec(),
            n_scan,
            include_r0,
        },
        results,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisorweights::DirichletCharacterSpec;

    fn triples(v: &[(u32, u64, u64)]) -> BTreeSet<(u32, u64, u64)> {
        v.iter().copied().collect()
    }

    #[test]
    fn ordinary_m3_at_7() {
        let r = scan(
            &Ensemble::ordinary(),
            &WeightSelector::Unweighted,
            &[3],
            &[7],
            2000,
            true,
        )
        .unwrap();
        assert_eq!(r.triples(), triples(&[(3, 7, 0), (3, 7, 5)]));
        let r = scan(
            &Ensemble::ordinary(),
            &WeightSelector::Unweighted,
            &[3],
            &[7],
            100,
            true,
        )
        .unwrap();
        assert_eq!(r.triples(), triples(&[(3, 7, 0), (3, 7, 5)]));
    }

    #[test]
    fn ordinary_m3_at_5_has_no_nonzero_class() {
        let r = scan(
            &Ensemble::ordinary(),
            &WeightSelector::Unweighted,
            &[3],
            &[5],
            2000,
            true,
        )
        .unwrap();
        assert!(r.nonzero_class.is_empty());
    }

    #[test]
    fn overpartition_m5_at_5() {
        let e = Ensemble::overpartition();
        let r = scan(&e, &WeightSelector::canonical_for(&e), &[5], &[5], 2000, true).unwrap();
        assert_eq!(r.triples(), triples(&[(5, 5, 0)]));
    }

    #[test]
    fn twisted_scan() {
        let chi5 = WeightSelector::Character(DirichletCharacterSpec::Kronecker(5));
        let r = scan(
            &Ensemble::ordinary(),
            &chi5,
            &[3, 11],
            &[5, 7, 11, 13],
            2000,
            true,
        )
        .unwrap();
        assert_eq!(
            r.triples(),
            triples(&[(3, 5, 0), (3, 5, 4), (11, 5, 0), (11, 5, 4)])
        );
    }

    #[test]
    fn include_r0_flag() {
        let r = scan(
            &Ensemble::ordinary(),
            &WeightSelector::Unweighted,
            &[1],
            &[5],
            500,
            false,
        )
        .unwrap();
        assert!(r.zero_class.is_empty());
        assert_eq!(r.nonzero_triples(), triples(&[(1, 5, 4)]));
    }

    #[test]
    fn grouping_is_order_independent() {
        let params = ScanParameters {
            ensemble: "x".into(),
            weight: String::new(),
            m_values: vec![1, 3],
            ells: vec![5, 7],
            n_scan: 10,
            include_r0: true,
        };
        let a = vec![
            ScanTaskResult {
                m: 3,
                ell: 7,
                residues: vec![0, 5],
            },
            ScanTaskResult {
                m: 1,
                ell: 7,
                residues: vec![0, 5],
            },
            ScanTaskResult {
                m: 1,
                ell: 5,
                residues: vec![0, 4],
            },
        ];
        let mut b = a.clone();
        b.reverse();
        let ra = ScanReport::from_results(params.clone(), a);
        assert_eq!(ra, ScanReport::from_results(params, b));
        assert_eq!(ra.nonzero_class[1].m, vec![1, 3]);
        assert_eq!(ra.zero_class.len(), 2);
    }

    #[test]
    fn preconditions() {
        let e = Ensemble::ordinary();
        assert!(scan_task(&e, &WeightSelector::Unweighted, 2, 5, 100, true).is_err());
        assert!(scan_task(&e, &WeightSelector::Unweighted, 3, 11, 10, true).is_err());
        assert!(scan_task(&e, &WeightSelector::Unweighted, 3, 9, 100, true).is_err());
    }
}

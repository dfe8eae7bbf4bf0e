use std::fmt;

use serde::{Deserialize, Serialize};

use super::{project_series, Progression};
use crate::arith::{is_prime, sturm_bound_for_level, BoundMode, SturmConfig};
use crate::divisorweights::DivisorWeight;
use crate::error::{Error, Result};
use crate::moments::compute_moments;
use crate::qseries::{Ensemble, IntegersMod};

/// Default cap on the number of coefficients a certification may build.
pub const DEFAULT_MAX_COEFFICIENTS: usize = 1 << 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceLimits {
    pub max_coefficients: usize,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        Self {
            max_coefficients: DEFAULT_MAX_COEFFICIENTS,
        }
    }
}

/// First nonvanishing coefficient: `M(t) ≢ 0` with `t = ℓn + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailWitness {
    pub n: u64,
    pub t: u64,
    pub residue: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CertificationStatus {
    Pass,
    Fail,
}

impl fmt::Display for CertificationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificationStatus::Pass => "PASS",
            CertificationStatus::Fail => "FAIL",
        })
    }
}

/// Everything needed to audit one Sturm check: the progression, the level
/// `4L`, the bound `B` and how far coefficients were inspected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationRecord {
    pub ensemble: String,
    pub weight: String,
    pub m: u32,
    pub ell: u64,
    pub r: u64,
    pub modulus: u64,
    pub mode: BoundMode,
    /// `4L`, the level of `Γ₀(4L)`.
    pub level: u64,
    #[serde(rename = "L")]
    pub level_l: u64,
    pub model: String,
    #[serde(rename = "bound_B")]
    pub bound_b: u64,
    pub max_index_checked: u64,
    pub status: CertificationStatus,
    pub fail_witness: Option<FailWitness>,
}

impl CertificationRecord {
    pub fn passed(&self) -> bool {
        self.status == CertificationStatus::Pass
    }
}

/// Check `M_m(ℓn + r) ≡ 0 (mod p)` for `0 ≤ n ≤ B`, where `B` is the Sturm
/// bound for weight `m + 1/2` on `Γ₀(4L)`. A PASS proves the congruence for
/// all `n`; a FAIL refutes it with a witness.
pub fn certify(
    ensemble: &Ensemble,
    weight: &DivisorWeight,
    prog: Progression,
    modulus: u64,
    config: &SturmConfig,
    limits: &ResourceLimits,
) -> Result<CertificationRecord> {
    let m = weight.exponent;
    if m % 2 == 0 {
        return Err(Error::EvenMoment(m));
    }
    let prog = Progression::new(prog.ell, prog.r)?;
    if !is_prime(modulus) {
        return Err(Error::NotPrime(modulus));
    }
    let level_l = config
        .level_model
        .resolve(prog.ell, weight.selector.twist_modulus())?;
    let bound = sturm_bound_for_level(m, config.mode, level_l)?;
    let max_index = prog.index(bound);
    let needed = usize::try_from(max_index + 1).unwrap_or(usize::MAX);
    if needed > limits.max_coefficients {
        return Err(Error::ResourceCap {
            requested: needed,
            cap: limits.max_coefficients,
        });
    }
    let ring = IntegersMod::new(modulus)?;
    let moments = compute_moments(ensemble, weight, max_index as usize, &ring)?;
    let projected = project_series(&moments.values, prog)?;
    let fail_witness = projected
        .coeffs()
        .iter()
        .position(|&c| c != 0)
        .map(|n| FailWitness {
            n: n as u64,
            t: prog.index(n as u64),
            residue: projected.coeffs()[n],
        });
    Ok(CertificationRecord {
        ensemble: ensemble.name.clone(),
        weight: weight.descriptor(),
        m,
        ell: prog.ell,
        r: prog.r,
        modulus,
        mode: config.mode,
        level: 4 * level_l,
        level_l,
        model: config.level_model.model_label(),
        bound_b: bound,
        max_index_checked: max_index,
        status: if fail_witness.is_some() {
            CertificationStatus::Fail
        } else {
            CertificationStatus::Pass
        },
        fail_witness,
    })
}

/// [`certify`] for a twisted or filtered divisor weight; the level absorbs
/// the twist modulus.
pub fn certify_filtered(
    ensemble: &Ensemble,
    weight: &DivisorWeight,
    prog: Progression,
    modulus: u64,
    config: &SturmConfig,
    limits: &ResourceLimits,
) -> Result<CertificationRecord> {
    if !weight.selector.is_twisted() {
        return Err(Error::InvalidWeight(format!(
            "{} carries no twist or filter",
            weight.descriptor()
        )));
    }
    certify(ensemble, weight, prog, modulus, config, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::LevelModel;
    use crate::divisorweights::{DirichletCharacterSpec, WeightSelector};

    fn run(e: &Ensemble, m: u32, ell: u64, r: u64, config: SturmConfig) -> CertificationRecord {
        let w = WeightSelector::canonical_for(e).at(m);
        certify(
            e,
            &w,
            Progression::new(ell, r).unwrap(),
            ell,
            &config,
            &ResourceLimits::default(),
        )
        .unwrap()
    }

    #[test]
    fn ordinary_examples() {
        let sharp_nat = SturmConfig::new(BoundMode::Sharp24, LevelModel::Natural);
        let sharp_safe = SturmConfig::new(BoundMode::Sharp24, LevelModel::Safe);
        let r = run(&Ensemble::ordinary(), 3, 7, 5, sharp_nat);
        assert!(r.passed());
        assert_eq!((r.bound_b, r.max_index_checked, r.level), (14, 103, 28));
        let r = run(&Ensemble::ordinary(), 7, 11, 6, sharp_safe);
        assert!(r.passed());
        assert_eq!((r.bound_b, r.max_index_checked, r.level_l), (495, 5451, 121));
    }

    #[test]
    fn overpartition_example() {
        let r = run(&Ensemble::overpartition(), 5, 5, 0, SturmConfig::default());
        assert!(r.passed());
        assert_eq!((r.bound_b, r.max_index_checked), (165, 825));
    }

    #[test]
    fn failure_has_witness() {
        let r = run(&Ensemble::ordinary(), 3, 5, 1, SturmConfig::default());
        assert_eq!(r.status, CertificationStatus::Fail);
        let w = r.fail_witness.unwrap();
        assert_eq!((w.n, w.t, w.residue), (0, 1, 1));
        assert_eq!(w.t, r.ell * w.n + r.r);
    }

    #[test]
    fn filtered_examples() {
        let chi5 = WeightSelector::Character(DirichletCharacterSpec::Kronecker(5));
        let config = SturmConfig::new(BoundMode::Sharp24, LevelModel::Safe);
        let limits = ResourceLimits::default();
        let prog = Progression::new(5, 4).unwrap();
        let e = Ensemble::ordinary();
        let r = certify_filtered(&e, &chi5.at(3), prog, 5, &config, &limits).unwrap();
        assert!(r.passed());
        assert_eq!((r.level, r.bound_b), (100, 52));
        let r = certify_filtered(&e, &chi5.at(11), prog, 5, &config, &limits).unwrap();
        assert!(r.passed());
        assert_eq!(r.bound_b, 23 * 180 / 24);
        assert!(certify_filtered(&e, &WeightSelector::Unweighted.at(3), prog, 5, &config, &limits).is_err());
    }

    #[test]
    fn resource_cap() {
        let e = Ensemble::ordinary();
        let limits = ResourceLimits {
            max_coefficients: 100,
        };
        let err = certify(
            &e,
            &WeightSelector::Unweighted.at(3),
            Progression::new(7, 5).unwrap(),
            7,
            &SturmConfig::new(BoundMode::Sharp24, LevelModel::Safe),
            &limits,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::ResourceCap {
                requested: 692,
                cap: 100
            }
        ));
    }

    #[test]
    fn rejects_bad_arguments() {
        let e = Ensemble::ordinary();
        let limits = ResourceLimits::default();
        let prog = Progression::new(7, 5).unwrap();
        let config = SturmConfig::default();
        assert!(certify(&e, &WeightSelector::Unweighted.at(4), prog, 7, &config, &limits).is_err());
        assert!(certify(&e, &WeightSelector::Unweighted.at(3), prog, 8, &config, &limits).is_err());
        assert!(certify(
            &e,
            &WeightSelector::Unweighted.at(3),
            Progression { ell: 7, r: 9 },
            7,
            &config,
            &limits
        )
        .is_err());
    }

    #[test]
    fn strict_pass_implies_sharp_pass() {
        let strict = SturmConfig::default();
        let loose = SturmConfig::new(BoundMode::Sharp24, LevelModel::Natural);
        for (m, ell, r) in [(3u32, 7u64, 5u64), (3, 11, 6), (1, 5, 4), (3, 5, 4), (5, 7, 3)] {
            let a = run(&Ensemble::ordinary(), m, ell, r, strict);
            let b = run(&Ensemble::ordinary(), m, ell, r, loose);
            assert!(b.bound_b <= a.bound_b);
            if a.passed() {
                assert!(b.passed());
            }
        }
    }

    #[test]
    fn serializes_with_stable_field_names() {
        let r = run(&Ensemble::ordinary(), 3, 5, 1, SturmConfig::default());
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "ensemble",
            "weight",
            "m",
            "ell",
            "r",
            "modulus",
            "mode",
            "level",
            "bound_B",
            "max_index_checked",
            "status",
            "fail_witness",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["status"], "FAIL");
        assert_eq!(v["mode"], "conservative12");
    }
}

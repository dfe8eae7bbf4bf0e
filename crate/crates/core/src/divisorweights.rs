//! Divisor-sum tables: plain powers `σ_m`, exponent-weighted sums
//! `Σ_{d|n} c(d)·d^m`, Dirichlet twists `σ_m(n; χ)` and Glaisher-filtered
//! sums, together with the filter-to-character dictionary.
//!
//! Filters are evaluated as divisor predicates. Their character expansions
//! are provided separately and checked against the predicates in tests.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Signed;

use crate::arith::{is_prime, kronecker_symbol, totient};
use crate::error::{Error, Result};
use crate::qseries::{Ensemble, ExponentSequence, Ring, Series};

/// A real Dirichlet character, described by how it is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DirichletCharacterSpec {
    Trivial,
    /// `χ₀^(m)`: 1 on integers coprime to `m`, else 0.
    Principal(u64),
    /// `d ↦ (D/d)`.
    Kronecker(i64),
}

impl DirichletCharacterSpec {
    /// The Legendre character `d ↦ (d/p)`, written as the Kronecker symbol of
    /// the discriminant `p* = ±p ≡ 1 (mod 4)`.
    pub fn legendre(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidWeight(format!(
                "Legendre character needs an odd prime, got {p}"
            )));
        }
        let p = p as i64;
        Ok(DirichletCharacterSpec::Kronecker(if p % 4 == 1 { p } else { -p }))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DirichletCharacterSpec::Principal(0) => Err(Error::InvalidWeight(
                "principal character modulus must be ≥ 1".into(),
            )),
            DirichletCharacterSpec::Kronecker(0) => Err(Error::InvalidWeight(
                "Kronecker discriminant must be nonzero".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn value(&self, d: u64) -> i64 {
        match self {
            DirichletCharacterSpec::Trivial => 1,
            DirichletCharacterSpec::Principal(m) => i64::from(d.gcd(m) == 1),
            DirichletCharacterSpec::Kronecker(disc) => kronecker_symbol(*disc, d as i64) as i64,
        }
    }

    /// The modulus by which the twist raises the level of the moment form.
    pub fn twist_modulus(&self) -> u64 {
        match self {
            DirichletCharacterSpec::Trivial => 1,
            DirichletCharacterSpec::Principal(m) => *m,
            DirichletCharacterSpec::Kronecker(disc) => disc.unsigned_abs(),
        }
    }
}

impl fmt::Display for DirichletCharacterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirichletCharacterSpec::Trivial => f.write_str("trivial"),
            DirichletCharacterSpec::Principal(m) => write!(f, "principal({m})"),
            DirichletCharacterSpec::Kronecker(d) => write!(f, "kronecker({d})"),
        }
    }
}

/// Glaisher-type divisor selection rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GlaisherFilter {
    AllDivisors,
    CoprimeTo(u64),
    OddDivisors,
    EvenDivisors,
    ResidueClass { residue: u64, modulus: u64 },
    QuadraticResidues(u64),
    KroneckerWeight(i64),
    ExcludeMultiplesOf(u64),
}

impl GlaisherFilter {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWeight(msg));
        match *self {
            GlaisherFilter::CoprimeTo(0) => bad("coprimality modulus must be ≥ 1".into()),
            GlaisherFilter::ResidueClass { residue, modulus } => {
                if modulus == 0 || residue >= modulus {
                    bad(format!("residue class {residue} mod {modulus} is invalid"))
                } else {
                    Ok(())
                }
            }
            GlaisherFilter::QuadraticResidues(p) | GlaisherFilter::ExcludeMultiplesOf(p) => {
                if is_prime(p) {
                    Ok(())
                } else {
                    bad(format!("filter modulus {p} must be prime"))
                }
            }
            GlaisherFilter::KroneckerWeight(0) => bad("Kronecker discriminant must be nonzero".into()),
            _ => Ok(()),
        }
    }

    /// Weight in `{−1, 0, 1}` attached to the divisor `d`.
    pub fn weight(&self, d: u64) -> i64 {
        match *self {
            GlaisherFilter::AllDivisors => 1,
            GlaisherFilter::CoprimeTo(m) => i64::from(d.gcd(&m) == 1),
            GlaisherFilter::OddDivisors => i64::from(d % 2 == 1),
            GlaisherFilter::EvenDivisors => i64::from(d % 2 == 0),
            GlaisherFilter::ResidueClass { residue, modulus } => i64::from(d % modulus == residue),
            GlaisherFilter::QuadraticResidues(p) => {
                i64::from(d % p != 0 && kronecker_symbol(d as i64, p as i64) == 1)
            }
            GlaisherFilter::KroneckerWeight(disc) => kronecker_symbol(disc, d as i64) as i64,
            GlaisherFilter::ExcludeMultiplesOf(p) => i64::from(d % p != 0),
        }
    }

    /// The modulus by which the filter raises the level of the moment form.
    pub fn twist_modulus(&self) -> u64 {
        match *self {
            GlaisherFilter::AllDivisors => 1,
            GlaisherFilter::OddDivisors | GlaisherFilter::EvenDivisors => 2,
            GlaisherFilter::CoprimeTo(m) => m,
            GlaisherFilter::ResidueClass { modulus, .. } => modulus,
            GlaisherFilter::QuadraticResidues(p) | GlaisherFilter::ExcludeMultiplesOf(p) => p,
            GlaisherFilter::KroneckerWeight(d) => d.unsigned_abs(),
        }
    }
}

impl fmt::Display for GlaisherFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlaisherFilter::AllDivisors => f.write_str("all"),
            GlaisherFilter::CoprimeTo(m) => write!(f, "coprime({m})"),
            GlaisherFilter::OddDivisors => f.write_str("odd"),
            GlaisherFilter::EvenDivisors => f.write_str("even"),
            GlaisherFilter::ResidueClass { residue, modulus } => {
                write!(f, "residue({residue},{modulus})")
            }
            GlaisherFilter::QuadraticResidues(p) => write!(f, "qr({p})"),
            GlaisherFilter::KroneckerWeight(d) => write!(f, "kronecker({d})"),
            GlaisherFilter::ExcludeMultiplesOf(p) => write!(f, "exclude({p})"),
        }
    }
}

/// The weight `w(d)` attached to each divisor, independent of the power `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSelector {
    Unweighted,
    Character(DirichletCharacterSpec),
    Filter(GlaisherFilter),
    /// `w(d) = c(d)`, the canonical weight of an Euler product.
    ExponentRule(ExponentSequence),
}

impl WeightSelector {
    /// The canonical moment weight of an ensemble.
    pub fn canonical_for(ensemble: &Ensemble) -> Self {
        match ensemble.exponents {
            ExponentSequence::Ordinary => WeightSelector::Unweighted,
            ref c => WeightSelector::ExponentRule(c.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSelector::Unweighted => Ok(()),
            WeightSelector::Character(c) => c.validate(),
            WeightSelector::Filter(f) => f.validate(),
            WeightSelector::ExponentRule(c) => c.validate(),
        }
    }

    pub fn weight(&self, d: u64) -> i64 {
        match self {
            WeightSelector::Unweighted => 1,
            WeightSelector::Character(c) => c.value(d),
            WeightSelector::Filter(f) => f.weight(d),
            WeightSelector::ExponentRule(c) => c.exponent(d),
        }
    }

    pub fn at(&self, exponent: u32) -> DivisorWeight {
        DivisorWeight {
            exponent,
            selector: self.clone(),
        }
    }

    /// Level contribution of a twist or filter; exponent rules contribute
    /// none since they belong to the ensemble's own modular data.
    pub fn twist_modulus(&self) -> u64 {
        match self {
            WeightSelector::Unweighted | WeightSelector::ExponentRule(_) => 1,
            WeightSelector::Character(c) => c.twist_modulus(),
            WeightSelector::Filter(f) => f.twist_modulus(),
        }
    }

    pub fn is_twisted(&self) -> bool {
        matches!(self, WeightSelector::Character(_) | WeightSelector::Filter(_))
    }
}

impl fmt::Display for WeightSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSelector::Unweighted => Ok(()),
            WeightSelector::Character(c) => write!(f, "twist={c}"),
            WeightSelector::Filter(g) => write!(f, "filter={g}"),
            WeightSelector::ExponentRule(c) => write!(f, "rule={c}"),
        }
    }
}

/// Divisor `d` of `n` contributes `w(d)·d^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorWeight {
    pub exponent: u32,
    pub selector: WeightSelector,
}

impl DivisorWeight {
    pub fn unweighted(exponent: u32) -> Self {
        WeightSelector::Unweighted.at(exponent)
    }

    /// Text form `m=<int>[,twist=…|filter=…|rule=…]`.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DivisorWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.exponent)?;
        if self.selector != WeightSelector::Unweighted {
            write!(f, ",{}", self.selector)?;
        }
        Ok(())
    }
}

/// `σ_m(0..=N)` with `σ_m(0) = 0`.
pub fn sigma_table<R: Ring>(m: u32, truncation: usize, ring: &R) -> Series<R> {
    weighted_sigma_table(&DivisorWeight::unweighted(m), truncation, ring)
        .expect("unweighted selector is always valid")
}

/// `a(n) = Σ_{d|n} w(d)·d^m`, built by striding over the multiples of each `d`.
pub fn weighted_sigma_table<R: Ring>(
    weight: &DivisorWeight,
    truncation: usize,
    ring: &R,
) -> Result<Series<R>> {
    weight.selector.validate()?;
    let mut coeffs = Series::zero(ring.clone(), truncation).into_coeffs();
    for d in 1..=truncation {
        let w = weight.selector.weight(d as u64);
        if w == 0 {
            continue;
        }
        let term = ring.mul(&ring.from_i64(w), &ring.pow_u64(d as u64, weight.exponent));
        if ring.is_zero(&term) {
            continue;
        }
        for k in (d..=truncation).step_by(d) {
            ring.add_assign(&mut coeffs[k], &term);
        }
    }
    Ok(Series::from_coeffs(ring.clone(), coeffs))
}

/// Real Dirichlet character modulo `modulus`: `d ↦ (D/d)` on integers coprime
/// to the modulus, 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RealCharacter {
    pub modulus: u64,
    pub discriminant: i64,
}

impl RealCharacter {
    pub fn value(&self, d: u64) -> i64 {
        if d.gcd(&self.modulus) != 1 {
            0
        } else {
            kronecker_symbol(self.discriminant, d as i64) as i64
        }
    }
}

impl fmt::Display for RealCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.discriminant == 1 {
            write!(f, "χ0^({})", self.modulus)
        } else if self.discriminant.unsigned_abs() == self.modulus {
            write!(f, "χ_{{{}}}", self.discriminant)
        } else {
            write!(f, "χ0^({})·χ_{{{}}}", self.modulus, self.discriminant)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub coefficient: Rational64,
    pub character: RealCharacter,
}

/// `1_{d ≡ a (mod m)} = (1/φ(m)) Σ_{χ mod m} χ̄(a) χ(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueExpansion {
    /// Every character modulo `m` is real, so the combination is explicit.
    Real {
        residue: u64,
        modulus: u64,
        terms: Vec<ExpansionTerm>,
    },
    /// Complex characters are involved, or `gcd(a, m) > 1`; recorded as
    /// metadata only.
    Formal {
        residue: u64,
        modulus: u64,
        phi: u64,
        description: String,
    },
}

impl ResidueExpansion {
    /// Evaluate the explicit combination at `d`.
    pub fn evaluate(&self, d: u64) -> Option<Rational64> {
        match self {
            ResidueExpansion::Real { terms, .. } => Some(
                terms
                    .iter()
                    .map(|t| t.coefficient * Rational64::from_integer(t.character.value(d)))
                    .sum(),
            ),
            ResidueExpansion::Formal { .. } => None,
        }
    }
}

impl fmt::Display for ResidueExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueExpansion::Real { terms, .. } => {
                for (i, t) in terms.iter().enumerate() {
                    let c = t.coefficient;
                    let sign = if c < Rational64::from_integer(0) { "-" } else { "+" };
                    if i == 0 {
                        if sign == "-" {
                            f.write_str("-")?;
                        }
                    } else {
                        write!(f, " {sign} ")?;
                    }
                    write!(f, "({})·{}", c.abs(), t.character)?;
                }
                Ok(())
            }
            ResidueExpansion::Formal { description, .. } => f.write_str(description),
        }
    }
}

fn fundamental_part(mut disc: i64) -> i64 {
    while disc % 16 == 0 && matches!((disc / 4).rem_euclid(4), 0 | 1) {
        disc /= 4;
    }
    disc
}

/// Character expansion of the residue-class indicator `d ≡ a (mod m)`.
pub fn expand_residue_filter(residue: u64, modulus: u64) -> Result<ResidueExpansion> {
    GlaisherFilter::ResidueClass { residue, modulus }.validate()?;
    let phi = totient(modulus)?;
    if residue.gcd(&modulus) != 1 {
        return Ok(ResidueExpansion::Formal {
            residue,
            modulus,
            phi,
            description: format!(
                "gcd({residue}, {modulus}) > 1: the orthogonality sum over characters mod {modulus} vanishes; \
                 evaluated as a divisor predicate"
            ),
        });
    }
    if 24 % modulus != 0 {
        return Ok(ResidueExpansion::Formal {
            residue,
            modulus,
            phi,
            description: format!("(1/{phi})·Σ_{{χ mod {modulus}}} χ̄({residue})·χ"),
        });
    }
    // the character group mod m | 24 is generated by these real characters
    let mut generators = Vec::new();
    if modulus % 4 == 0 {
        generators.push(-4i64);
    }
    if modulus % 8 == 0 {
        generators.push(8);
    }
    if modulus % 3 == 0 {
        generators.push(-3);
    }
    let mut terms = Vec::new();
    for mask in 0u32..(1 << generators.len()) {
        let disc = generators
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, g)| *g)
            .product::<i64>();
        let character = RealCharacter {
            modulus,
            discriminant: fundamental_part(disc),
        };
        // real characters are their own conjugates
        let coefficient = Rational64::new(character.value(residue), phi as i64);
        terms.push(ExpansionTerm {
            coefficient,
            character,
        });
    }
    Ok(ResidueExpansion::Real {
        residue,
        modulus,
        terms,
    })
}

/// Indicator of quadratic residues coprime to the odd prime `p`; equal to
/// `½(χ₀^(p) + (·/p))`.
pub fn quadratic_residue_weight(p: u64) -> Result<WeightSelector> {
    if p == 2 {
        return Err(Error::InvalidWeight(
            "quadratic residue filter needs an odd prime".into(),
        ));
    }
    let filter = GlaisherFilter::QuadraticResidues(p);
    filter.validate()?;
    Ok(WeightSelector::Filter(filter))
}

/// Weight, level and character of the odd filtered moment form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterModularData {
    /// `2s + 1`, i.e. twice the half-integral weight `s + 1/2`.
    pub weight_times_two: u32,
    pub level: u64,
    pub character: String,
}

pub fn filter_modular_data(filter: &GlaisherFilter, s: u32) -> Result<FilterModularData> {
    if s % 2 == 0 {
        return Err(Error::EvenMoment(s));
    }
    filter.validate()?;
    let (level, character) = match *filter {
        GlaisherFilter::AllDivisors => (4, "untwisted".to_string()),
        GlaisherFilter::CoprimeTo(m) => (4 * m, format!("χ0^({m})")),
        GlaisherFilter::OddDivisors => (8, "χ0^(2)".to_string()),
        GlaisherFilter::EvenDivisors => (8, "unspecified".to_string()),
        GlaisherFilter::ResidueClass { modulus, .. } => {
            (4 * modulus, format!("combination of characters mod {modulus}"))
        }
        GlaisherFilter::QuadraticResidues(p) => (4 * p, format!("χ0^({p}) and (·/{p})")),
        GlaisherFilter::KroneckerWeight(d) => (4 * d.unsigned_abs(), format!("χ_{{{d}}}")),
        GlaisherFilter::ExcludeMultiplesOf(p) => (4 * p, format!("χ0^({p})")),
    };
    Ok(FilterModularData {
        weight_times_two: 2 * s + 1,
        level,
        character,
    })
}

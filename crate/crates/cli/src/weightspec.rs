//! Weight specification grammar, version 1:
//!
//! ```text
//! spec     := item ("," item)*
//! item     := "m=" INT
//!           | "twist=" ("kronecker(" INT ")" | "principal(" INT ")" | "legendre(" INT ")" | "trivial")
//!           | "filter=" ("all" | "odd" | "even" | "coprime(" INT ")" | "residue(" INT "," INT ")"
//!                       | "qr(" INT ")" | "kronecker(" INT ")" | "exclude(" INT ")")
//!           | "rule=" ("plain" | ENSEMBLE)
//! ```
//!
//! At most one of `twist`, `filter` and `rule` may appear. Without any of
//! them the ensemble's canonical weight is used.

use freqmom_core::divisorweights::{
    quadratic_residue_weight, DirichletCharacterSpec, DivisorWeight, GlaisherFilter, WeightSelector,
};
use freqmom_core::qseries::Ensemble;

pub const GRAMMAR_VERSION: u32 = 1;

/// A parsed spec: an optional exponent and an optional explicit selector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightSpec {
    pub m: Option<u32>,
    pub selector: Option<WeightSelector>,
}

impl WeightSpec {
    pub fn selector_for(&self, ensemble: &Ensemble) -> WeightSelector {
        self.selector
            .clone()
            .unwrap_or_else(|| WeightSelector::canonical_for(ensemble))
    }

    pub fn weight_for(&self, ensemble: &Ensemble, m: u32) -> DivisorWeight {
        self.selector_for(ensemble).at(m)
    }
}

/// Split on commas that are not inside parentheses.
fn split_items(s: &str) -> Vec<&str> {
    let mut items = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(&s[start..]);
    items
}

/// `name(a, b, …)` or a bare `name`.
fn call(s: &str) -> Result<(&str, Vec<i64>), String> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s, Vec::new()));
    };
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("unbalanced parentheses in {s:?}"))?;
    let args = inner
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad integer {a:?} in {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((s[..open].trim(), args))
}

fn unsigned(v: i64, what: &str) -> Result<u64, String> {
    u64::try_from(v).map_err(|_| format!("{what} must be nonnegative, got {v}"))
}

fn parse_twist(s: &str) -> Result<WeightSelector, String> {
    let (name, args) = call(s)?;
    let c = match (name, args.as_slice()) {
        ("trivial", []) => DirichletCharacterSpec::Trivial,
        ("kronecker", [d]) => DirichletCharacterSpec::Kronecker(*d),
        ("principal", [m]) => DirichletCharacterSpec::Principal(unsigned(*m, "modulus")?),
        ("legendre", [p]) => {
            DirichletCharacterSpec::legendre(unsigned(*p, "prime")?).map_err(|e| e.to_string())?
        }
        _ => return Err(format!("unknown twist {s:?}")),
    };
    c.validate().map_err(|e| e.to_string())?;
    Ok(WeightSelector::Character(c))
}

fn parse_filter(s: &str) -> Result<WeightSelector, String> {
    let (name, args) = call(s)?;
    let f = match (name, args.as_slice()) {
        ("all", []) => GlaisherFilter::AllDivisors,
        ("odd", []) => GlaisherFilter::OddDivisors,
        ("even", []) => GlaisherFilter::EvenDivisors,
        ("coprime", [m]) => GlaisherFilter::CoprimeTo(unsigned(*m, "modulus")?),
        ("residue", [a, m]) => GlaisherFilter::ResidueClass {
            residue: unsigned(*a, "residue")?,
            modulus: unsigned(*m, "modulus")?,
        },
        ("qr", [p]) => return quadratic_residue_weight(unsigned(*p, "prime")?).map_err(|e| e.to_string()),
        ("kronecker", [d]) => GlaisherFilter::KroneckerWeight(*d),
        ("exclude", [p]) => GlaisherFilter::ExcludeMultiplesOf(unsigned(*p, "prime")?),
        _ => return Err(format!("unknown filter {s:?}")),
    };
    f.validate().map_err(|e| e.to_string())?;
    Ok(WeightSelector::Filter(f))
}

fn parse_rule(s: &str) -> Result<WeightSelector, String> {
    match s.trim() {
        "plain" => Ok(WeightSelector::Unweighted),
        name => Ensemble::from_name(name)
            .map(|e| WeightSelector::ExponentRule(e.exponents))
            .map_err(|e| e.to_string()),
    }
}

pub fn parse_weight_spec(s: &str) -> Result<WeightSpec, String> {
    let mut spec = WeightSpec::default();
    if s.trim().is_empty() {
        return Ok(spec);
    }
    for item in split_items(s) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {item:?}"))?;
        let key = key.trim();
        if key == "m" {
            if spec.m.is_some() {
                return Err("m given twice".into());
            }
            spec.m = Some(
                value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad exponent {value:?}"))?,
            );
            continue;
        }
        let selector = match key {
            "twist" => parse_twist(value)?,
            "filter" => parse_filter(value)?,
            "rule" => parse_rule(value)?,
            _ => return Err(format!("unknown weight key {key:?}")),
        };
        if spec.selector.is_some() {
            return Err("at most one of twist, filter, rule may be given".into());
        }
        spec.selector = Some(selector);
    }
    Ok(spec)
}

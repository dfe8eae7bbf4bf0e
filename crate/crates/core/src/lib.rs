//! Frequency moments of partition-type ensembles and their congruences.
//!
//! For an Euler product `F(q) = Π_{r≥1} (1 − q^r)^{−c(r)}` with companion
//! series `b(n)`, the `m`-th frequency moment is
//! `M_m(n) = Σ_{d=1}^{n} σ(d)·b(n − d)`, where `σ` is a weighted divisor sum.
//! The crate builds these series exactly or modulo a prime, scans them for
//! arithmetic-progression congruences and certifies candidates up to a Sturm
//! bound.

pub mod arith;
pub mod congruence;
pub mod divisorweights;
pub mod error;
pub mod moments;
pub mod qseries;

pub use error::{Error, Result};

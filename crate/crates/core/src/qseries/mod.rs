//! Truncated power series over pluggable coefficient rings, and coefficient
//! generators for the Euler products and companion series behind every
//! partition ensemble.

mod products;
mod ring;
mod series;

pub use products::{
    eta_power_coefficients, euler_product_coefficients, euler_product_coefficients_unbounded,
    exact_companion, jacobi_cube_series, partition_counts, pentagonal_series, r2_coefficients,
    tau_coefficients, theta4_series, Companion, Ensemble, ExponentSequence, PeriodicExponents,
    GROWING_EXPONENT_LIMIT,
};
pub use ring::{CoefficientRing, ExactInteger, ExactRational, IntegersMod, Ring};
pub use series::{Series, SparseSeries};

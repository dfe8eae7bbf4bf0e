//! Expected certification tables.

use freqmom_core::arith::LevelModel;

/// A row of the ordinary-partition table, certified in sharp24 mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdinaryRow {
    pub m: u32,
    pub ell: u64,
    pub r: u64,
    pub prime: u64,
    pub level_model: LevelModel,
    pub level_l: u64,
    pub bound: u64,
    pub max_index: u64,
}

const fn ord(m: u32, ell: u64, r: u64, safe: bool, bound: u64, max_index: u64) -> OrdinaryRow {
    OrdinaryRow {
        m,
        ell,
        r,
        prime: ell,
        level_model: if safe {
            LevelModel::Safe
        } else {
            LevelModel::Natural
        },
        level_l: if safe { ell * ell } else { ell },
        bound,
        max_index,
    }
}

pub const ORDINARY_TABLE: [OrdinaryRow; 10] = [
    ord(3, 7, 0, false, 14, 98),
    ord(3, 7, 0, true, 98, 686),
    ord(3, 7, 5, false, 14, 103),
    ord(3, 7, 5, true, 98, 691),
    ord(3, 11, 0, false, 21, 231),
    ord(3, 11, 0, true, 231, 2541),
    ord(3, 11, 6, false, 21, 237),
    ord(3, 11, 6, true, 231, 2547),
    ord(7, 11, 6, false, 45, 501),
    ord(7, 11, 6, true, 495, 5451),
];

/// Overpartition zero-class rows `(m, ℓ, B, ℓB)`, certified in
/// conservative12 mode at level `4ℓ²`.
pub const OVERPARTITION_TABLE: [(u32, u64, u64, u64); 6] = [
    (5, 5, 165, 825),
    (9, 5, 285, 1425),
    (7, 7, 420, 2940),
    (13, 7, 756, 5292),
    (11, 11, 1518, 16698),
    (13, 13, 2457, 31941),
];

/// A `χ₅`-twisted progression `5n + 4`, certified in sharp24 mode at level 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilteredRow {
    pub m: u32,
    pub bound: u64,
    /// The bound is computed from the formula rather than quoted.
    pub derived: bool,
}

pub const FILTERED_TABLE: [FilteredRow; 2] = [
    FilteredRow {
        m: 3,
        bound: 52,
        derived: false,
    },
    FilteredRow {
        m: 11,
        bound: 172,
        derived: true,
    },
];

pub const FILTERED_DISCRIMINANT: i64 = 5;
pub const FILTERED_LEVEL: u64 = 100;

/// Primes at which the `χ₅`-twisted third moment shows no progression.
pub const FILTERED_EMPTY_SCAN_PRIMES: [u64; 3] = [7, 11, 13];

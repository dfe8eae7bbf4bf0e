//! Acceptance suite. Prints one PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p freqmom-cli --test acceptance -- --nocapture
//! ```
//!
//! All comparisons are exact; the only tolerances are the runtime budgets
//! below.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde_json::Value;

use freqmom_core::arith::{index_gamma0, moebius, primes_up_to};
use freqmom_core::congruence::predicted_hits;
use freqmom_core::moments::{divisor_sum_of, frequency_oracle, master_transform};
use freqmom_core::qseries::{partition_counts, ExactInteger};

const BUDGET_ORDINARY_TABLE: Duration = Duration::from_secs(60);
const BUDGET_OVERPARTITION_TABLE: Duration = Duration::from_secs(300);
const BUDGET_IDENTITIES: Duration = Duration::from_secs(120);

const ORACLE_DEPTH: usize = 25;

/// `(m, ℓ, r, L, B, max index)`, all PASS in sharp24 mode.
const ORDINARY: [(u64, u64, u64, u64, u64, u64); 10] = [
    (3, 7, 0, 7, 14, 98),
    (3, 7, 0, 49, 98, 686),
    (3, 7, 5, 7, 14, 103),
    (3, 7, 5, 49, 98, 691),
    (3, 11, 0, 11, 21, 231),
    (3, 11, 0, 121, 231, 2541),
    (3, 11, 6, 11, 21, 237),
    (3, 11, 6, 121, 231, 2547),
    (7, 11, 6, 11, 45, 501),
    (7, 11, 6, 121, 495, 5451),
];

/// `(m, ℓ, B, max index)`, all PASS in conservative12 mode at `L = ℓ²`.
const OVERPARTITION: [(u64, u64, u64, u64); 6] = [
    (5, 5, 165, 825),
    (9, 5, 285, 1425),
    (7, 7, 420, 2940),
    (13, 7, 756, 5292),
    (11, 11, 1518, 16698),
    (13, 13, 2457, 31941),
];

const FILTERED_LEVEL: u64 = 100;
const FILTERED_M3_BOUND: u64 = 52;

type Weight = Box<dyn Fn(u64) -> BigInt>;
type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn freqmom(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_freqmom"))
        .args(args)
        .env_remove("FREQMOM_MAX_COEFFS")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 report"),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out) = freqmom(&full);
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

fn u(v: &Value) -> u64 {
    v.as_u64().unwrap_or(u64::MAX)
}

fn within(start: Instant, budget: Duration) -> (bool, String) {
    let t = start.elapsed();
    (
        t <= budget,
        format!("{:.2}s of {}s budget", t.as_secs_f64(), budget.as_secs()),
    )
}

fn ordinary_table() -> Verdict {
    let start = Instant::now();
    let (code, rows) = json(&["tables", "--which", "ordinary"]);
    let rows = rows.as_array().cloned().unwrap_or_default();
    let got: Vec<_> = rows
        .iter()
        .map(|r| {
            (
                u(&r["m"]),
                u(&r["ell"]),
                u(&r["r"]),
                u(&r["L"]),
                u(&r["bound_B"]),
                u(&r["max_index"]),
            )
        })
        .collect();
    let all_pass = rows.iter().all(|r| r["status"] == "PASS");
    let (fast, time) = within(start, BUDGET_ORDINARY_TABLE);
    verdict(
        code == 0 && got == ORDINARY && all_pass && fast,
        format!(
            "{}/10 rows exact, all PASS={all_pass}, {time}",
            got.iter().zip(&ORDINARY).filter(|(a, b)| a == b).count()
        ),
    )
}

fn overpartition_table() -> Verdict {
    let start = Instant::now();
    let (code, rows) = json(&["tables", "--which", "overpartition"]);
    let rows = rows.as_array().cloned().unwrap_or_default();
    let got: Vec<_> = rows
        .iter()
        .map(|r| (u(&r["m"]), u(&r["ell"]), u(&r["bound_B"]), u(&r["max_index"])))
        .collect();
    let safe = rows
        .iter()
        .all(|r| u(&r["L"]) == u(&r["ell"]).pow(2) && r["status"] == "PASS");
    let (fast, time) = within(start, BUDGET_OVERPARTITION_TABLE);
    verdict(
        code == 0 && got == OVERPARTITION && safe && fast,
        format!(
            "{}/6 rows exact, level 4l^2 and PASS={safe}, {time}",
            got.iter().zip(&OVERPARTITION).filter(|(a, b)| a == b).count()
        ),
    )
}

fn filtered_propositions() -> Verdict {
    let m11_bound = 23 * index_gamma0(FILTERED_LEVEL).unwrap() / 24;
    let certify = |m: &str| {
        json(&[
            "certify",
            "--weight",
            &format!("m={m},twist=kronecker(5)"),
            "--ell",
            "5",
            "--r",
            "4",
            "--mode",
            "sharp24",
            "--level",
            "safe",
        ])
    };
    let (c3, r3) = certify("3");
    let (c11, r11) = certify("11");
    let r3 = &r3[0];
    let r11 = &r11[0];
    let m3_ok = c3 == 0 && u(&r3["level"]) == FILTERED_LEVEL && u(&r3["bound_B"]) == FILTERED_M3_BOUND;
    let m11_ok = c11 == 0 && u(&r11["level"]) == FILTERED_LEVEL && u(&r11["bound_B"]) == m11_bound;
    let (cs, scan) = json(&[
        "scan",
        "--weight",
        "twist=kronecker(5)",
        "--m",
        "3",
        "--ell",
        "7,11,13",
        "--nscan",
        "2000",
    ]);
    let empty = cs == 0
        && scan["zero_class"].as_array().is_some_and(Vec::is_empty)
        && scan["nonzero_class"].as_array().is_some_and(Vec::is_empty);
    verdict(
        m3_ok && m11_ok && empty,
        format!(
            "m=3 B={} at level {}: {m3_ok}; m=11 B={} (formula {m11_bound}): {m11_ok}; scan at 7,11,13 empty: {empty}",
            u(&r3["bound_B"]),
            u(&r3["level"]),
            u(&r11["bound_B"])
        ),
    )
}

fn triples(v: &Value) -> BTreeSet<(u32, u64, u64)> {
    let mut out = BTreeSet::new();
    for key in ["zero_class", "nonzero_class"] {
        for hit in v[key].as_array().into_iter().flatten() {
            for m in hit["m"].as_array().into_iter().flatten() {
                out.insert((u(m) as u32, u(&hit["ell"]), u(&hit["r"])));
            }
        }
    }
    out
}

fn desk_exhaustion() -> Verdict {
    let (code, report) = json(&[
        "scan",
        "--ensemble",
        "ordinary",
        "--m-odd-max",
        "25",
        "--ell-max",
        "31",
        "--nscan",
        "2000",
        "--nonzero-only",
    ]);
    let ms: Vec<u32> = (1..=25).step_by(2).collect();
    let ells: Vec<u64> = primes_up_to(31).iter().filter(|&p| p >= 5).collect();
    let predicted: BTreeSet<_> = predicted_hits(&ms, &ells)
        .into_iter()
        .filter(|t| t.2 != 0)
        .collect();
    let got = triples(&report);
    let classes: BTreeSet<(u64, u64)> = got.iter().map(|t| (t.1, t.2)).collect();
    let expected_classes: BTreeSet<(u64, u64)> = [(5, 4), (7, 5), (11, 6)].into();
    verdict(
        code == 0 && got == predicted && classes == expected_classes,
        format!(
            "{} hits, {} predicted, classes {:?}",
            got.len(),
            predicted.len(),
            classes
        ),
    )
}

fn overpartition_contrast() -> Verdict {
    let (code, report) = json(&[
        "scan",
        "--ensemble",
        "overpartition",
        "--m-odd-max",
        "49",
        "--ell-max",
        "31",
        "--nscan",
        "2000",
    ]);
    let got = triples(&report);
    let mut expected = BTreeSet::new();
    for m in (1..=49u32).step_by(2) {
        for ell in primes_up_to(31).iter().filter(|&p| p >= 5) {
            if u64::from(m - 1) % (ell - 1) == 0 {
                expected.insert((m, ell, 0));
            }
        }
    }
    let nonzero = got.iter().filter(|t| t.2 != 0).count();
    verdict(
        code == 0 && nonzero == 0 && got == expected,
        format!(
            "{nonzero} nonzero-class hits, {} zero-class hits, {} expected",
            got.len() - nonzero,
            expected.len()
        ),
    )
}

fn oracle_equivalence() -> Verdict {
    let table = frequency_oracle(ORACLE_DEPTH).unwrap();
    let p = partition_counts(ORACLE_DEPTH, &ExactInteger);
    let weights: Vec<(&str, Weight)> = vec![
        ("k", Box::new(BigInt::from)),
        ("k^2", Box::new(|k| BigInt::from(k).pow(2))),
        ("k^3", Box::new(|k| BigInt::from(k).pow(3))),
        ("k^7", Box::new(|k| BigInt::from(k).pow(7))),
        ("mu(k)", Box::new(|k| BigInt::from(moebius(k).unwrap()))),
        (
            "odd k^3",
            Box::new(|k| {
                if k % 2 == 1 {
                    BigInt::from(k).pow(3)
                } else {
                    BigInt::from(0)
                }
            }),
        ),
    ];
    let mut failures = Vec::new();
    for (label, f) in &weights {
        let transformed = master_transform(&divisor_sum_of(f, ORACLE_DEPTH), &p).unwrap();
        for n in 1..=ORACLE_DEPTH {
            if table.moment(f, n).unwrap() != transformed.values.coeffs()[n] {
                failures.push(format!("{label} n={n}"));
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} weights, n <= {ORACLE_DEPTH}, mismatches: {failures:?}",
            weights.len()
        ),
    )
}

fn identity_suite() -> Verdict {
    let start = Instant::now();
    let (code, reports) = json(&["identities", "--check", "all", "--jobs", "4"]);
    let reports = reports.as_array().cloned().unwrap_or_default();
    let depth = |name: &str| {
        reports
            .iter()
            .find(|r| r["check"] == name)
            .map(|r| u(&r["n_max"]))
    };
    let depths_ok = depth("ford") >= Some(500)
        && depth("moebius") == Some(40)
        && depth("m1[ordinary]") >= Some(2000)
        && depth("m1[overpartition]") >= Some(2000)
        && depth("tau691") >= Some(300)
        && depth("j") >= Some(40)
        && depth("fermat[ordinary]").is_some();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r["counterexample"].is_null())
        .map(|r| r["check"].to_string())
        .collect();
    let (fast, time) = within(start, BUDGET_IDENTITIES);
    verdict(
        code == 0 && depths_ok && failed.is_empty() && fast,
        format!(
            "{} checks, failed {failed:?}, depths ok={depths_ok}, {time}",
            reports.len()
        ),
    )
}

fn determinism() -> Verdict {
    let batches: [&[&str]; 4] = [
        &[
            "scan",
            "--m-odd-max",
            "15",
            "--ell-max",
            "23",
            "--nscan",
            "1000",
            "--format",
            "json",
        ],
        &[
            "scan",
            "--ensemble",
            "overpartition",
            "--m-odd-max",
            "15",
            "--nscan",
            "1000",
            "--format",
            "csv",
        ],
        &[
            "certify",
            "--task",
            "3:7:0,3:7:5,3:11:6,7:11:6,3:5:1",
            "--mode",
            "sharp24",
            "--both-levels",
            "--format",
            "json",
        ],
        &[
            "certify",
            "--ensemble",
            "overpartition",
            "--task",
            "5:5:0,9:5:0,7:7:0",
            "--format",
            "csv",
        ],
    ];
    let mut differing = Vec::new();
    for (i, batch) in batches.iter().enumerate() {
        let run = |jobs: &str| {
            let mut args = batch.to_vec();
            args.extend(["--jobs", jobs]);
            freqmom(&args)
        };
        let (one, eight) = (run("1"), run("8"));
        if one != eight || one.1.is_empty() {
            differing.push(i);
        }
    }
    verdict(
        differing.is_empty(),
        format!(
            "{} batches compared at jobs 1 and 8, differing: {differing:?}",
            batches.len()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("ordinary-partition certification table", ordinary_table),
        ("overpartition certification table", overpartition_table),
        ("filtered propositions", filtered_propositions),
        ("desk-scale exhaustion", desk_exhaustion),
        ("overpartition contrast", overpartition_contrast),
        ("oracle equivalence", oracle_equivalence),
        ("identity suite", identity_suite),
        ("determinism across job counts", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        println!(
            "[{}] {}. {name}: {}",
            if v.ok { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
        if !v.ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}

use freqmom_core::arith::primes_up_to;
use freqmom_core::congruence::{predicted_hits, predicted_zero_class_hits, scan};
use freqmom_core::divisorweights::WeightSelector;
use freqmom_core::qseries::Ensemble;

fn odd_up_to(max: u32) -> Vec<u32> {
    (1..=max).step_by(2).collect()
}

fn primes_from_5(max: u64) -> Vec<u64> {
    primes_up_to(max).iter().filter(|&p| p >= 5).collect()
}

#[test]
fn ordinary_scan_equals_prediction() {
    let ms = odd_up_to(25);
    let ells = primes_from_5(31);
    let report = scan(
        &Ensemble::ordinary(),
        &WeightSelector::Unweighted,
        &ms,
        &ells,
        2000,
        true,
    )
    .unwrap();
    assert_eq!(report.triples(), predicted_hits(&ms, &ells));
    let classes: Vec<(u64, u64)> = report.nonzero_class.iter().map(|h| (h.ell, h.r)).collect();
    assert_eq!(classes, vec![(5, 4), (7, 5), (11, 6)]);
}

#[test]
fn overpartition_scan_has_only_fermat_zero_classes() {
    let e = Ensemble::overpartition();
    let ms = odd_up_to(49);
    let ells = primes_from_5(31);
    let report = scan(&e, &WeightSelector::canonical_for(&e), &ms, &ells, 2000, true).unwrap();
    assert!(report.nonzero_class.is_empty());
    assert_eq!(report.zero_triples(), predicted_zero_class_hits(&ms, &ells));
}

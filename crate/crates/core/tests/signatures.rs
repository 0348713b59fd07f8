//! Neighbor determinants of the checked-in maximal witnesses. All values are
//! integers, so every comparison here is exact.

use std::collections::BTreeMap;

use blindhop_core::channel::{max_det, neighbor_det_signature, witness};
use blindhop_core::hopping::{is_global_optimum, stopping_rule, StoppingRule};
use blindhop_core::matrix::det;

fn histogram(n: usize) -> BTreeMap<u64, usize> {
    let w = witness(n).unwrap();
    assert_eq!(det(&w).abs().round() as u64, max_det(n).unwrap());
    let mut h = BTreeMap::new();
    for d in neighbor_det_signature(&w) {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

/// Exact `max_det(n) * num / den`, which must be an integer.
fn scaled(n: usize, num: u64, den: u64) -> u64 {
    let m = max_det(n).unwrap();
    assert_eq!(m * num % den, 0);
    m * num / den
}

#[test]
fn six_by_six_neighbors() {
    let h = histogram(6);
    assert_eq!(h.keys().copied().collect::<Vec<_>>(), vec![64, 96, 128]);
    assert_eq!(h.values().sum::<usize>(), 36);
}

#[test]
fn eight_by_eight_neighbors() {
    assert_eq!(histogram(8), BTreeMap::from([(3072, 64)]));
}

#[test]
fn ten_by_ten_neighbors_match_the_rule() {
    let h = histogram(10);
    assert_eq!(h, BTreeMap::from([(scaled(10, 2, 3), 20), (scaled(10, 5, 6), 80)]));
    let StoppingRule::Counts(counts) = stopping_rule(10).unwrap() else { panic!("n = 10 uses counts") };
    assert_eq!(counts.len(), 2);
}

#[test]
fn twelve_by_twelve_neighbors_match_the_rule() {
    assert_eq!(histogram(12), BTreeMap::from([(scaled(12, 5, 6), 144)]));
}

#[test]
fn every_witness_with_a_rule_is_certified() {
    for n in 1..=12 {
        let Ok(_) = stopping_rule(n) else { continue };
        let w = witness(n).unwrap();
        let base = det(&w).abs();
        let ratios: Vec<f64> = neighbor_det_signature(&w).into_iter().map(|d| d as f64 / base).collect();
        assert!(is_global_optimum(&ratios, n).unwrap(), "n = {n}");
    }
}

//! Noiseless decoding never certifies a wrong answer when the block is
//! identifiable.

use std::collections::HashSet;

use blindhop_core::channel::{atm_equivalent, draw_channel, draw_symbols, has_msp, ChannelDistribution};
use blindhop_core::decoder::{blind_decode_with_rng, DecodeConfig};
use blindhop_core::{Matrix, Rng};

/// Columns up to sign, as bit patterns with the first entry normalized.
fn sign_classes(x: &Matrix) -> usize {
    (0..x.cols())
        .map(|j| {
            let flip = x[(0, j)] < 0.0;
            (0..x.rows()).fold(0u32, |acc, i| acc << 1 | u32::from((x[(i, j)] < 0.0) != flip))
        })
        .collect::<HashSet<_>>()
        .len()
}

/// MSP holds, and for `n = 3` every sign class is present: with one missing,
/// every sign matrix over the other three is maximal and `X` is not
/// identifiable.
fn identifiable(x: &Matrix) -> bool {
    let n = x.rows();
    has_msp(x).unwrap().has_msp && (n != 3 || sign_classes(x) == 4)
}

#[test]
fn certified_decodes_match_the_transmitted_block() {
    let cfg = DecodeConfig { epsilon: 0.0, ..Default::default() };
    for (n, k) in [(2, 8), (3, 13), (4, 18), (5, 18)] {
        let mut rng = Rng::seed_from(0x50 + n as u64);
        let mut successes = 0;
        for trial in 0..1000 {
            let x = loop {
                let x = draw_symbols(n, k, &mut rng);
                if identifiable(&x) {
                    break x;
                }
            };
            let a = draw_channel(n, ChannelDistribution::Gaussian, &mut rng);
            let res = blind_decode_with_rng(&a.matmul(&x), &cfg, &mut rng).unwrap();
            if res.is_success() {
                successes += 1;
                assert!(atm_equivalent(&res.xhat.unwrap(), &x).is_some(), "n = {n}, trial {trial}");
            }
        }
        assert!(successes >= 900, "n = {n}: only {successes} successes");
    }
}

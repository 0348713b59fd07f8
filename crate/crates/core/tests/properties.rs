//! Invariants of the solver pieces over randomly generated instances.

use blindhop_core::channel::{atm_equivalent, draw_channel, draw_symbols, Atm, ChannelDistribution};
use blindhop_core::decoder::{align, ber, rounding_matrix};
use blindhop_core::hopping::{search, SearchConfig};
use blindhop_core::matrix::{inverse, rank};
use blindhop_core::vertex::{feasible_start, find_vertex, FindConfig, FindStatus};
use blindhop_core::{Matrix, Rng};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn noiseless_block(n: usize, k: usize, rng: &mut Rng) -> Matrix {
    loop {
        let a = draw_channel(n, ChannelDistribution::Gaussian, rng);
        let y = a.matmul(&draw_symbols(n, k, rng));
        if rank(&y, 1e-9) == n {
            return y;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() })]

    // Each step runs all the way to the boundary, and log|det| is concave
    // along the step, so a single step can overshoot its peak and lose
    // ground. Over the whole walk the vertex still ends above the start.
    #[test]
    fn vertex_finding_ends_above_its_start(seed in any::<u64>(), n in 2usize..=6, extra in 0usize..12) {
        let mut rng = Rng::seed_from(seed);
        let y = noiseless_block(n, n + extra, &mut rng);
        let u0 = feasible_start(&y, &mut rng);
        let found = find_vertex(&u0, &y, &FindConfig::default()).unwrap();
        let path = &found.objective_path;
        prop_assert!(path.last().unwrap() >= &path[0]);
        prop_assert!(found.u.matmul(&y).max_abs() <= 1.0 + 1e-9);
        if found.status == FindStatus::Vertex {
            prop_assert!(found.active.is_full_rank());
        }
    }

    #[test]
    fn noisy_vertex_finding_ends_above_its_start(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = Rng::seed_from(seed);
        let clean = noiseless_block(n, 4 * n, &mut rng);
        let y = Matrix::from_fn(n, 4 * n, |i, j| clean[(i, j)] + 0.05 * rng.gaussian());
        let found = find_vertex(&feasible_start(&y, &mut rng), &y, &FindConfig::default()).unwrap();
        let path = &found.objective_path;
        prop_assert!(path.last().unwrap() >= &path[0]);
        prop_assert!(found.u.matmul(&y).max_abs() <= 1.0 + 1e-9);
        prop_assert_eq!(found.status, FindStatus::Vertex);
    }

    #[test]
    fn rounding_leaves_no_entry_near_a_level(
        entries in prop::collection::vec(-1.2f64..1.2, 12),
        epsilon in 0.0f64..0.49,
    ) {
        let uy = Matrix::from_vec(3, 4, entries).unwrap();
        let snapped = uy.sub(&rounding_matrix(&uy, epsilon).unwrap());
        for &v in snapped.as_slice() {
            let on_level = v == -1.0 || v == 0.0 || v == 1.0;
            let far = [-1.0, 0.0, 1.0].iter().all(|l: &f64| (v - l).abs() >= epsilon);
            prop_assert!(on_level || far, "{v} with epsilon {epsilon}");
        }
    }

    #[test]
    fn ber_ignores_row_permutation_and_negation(seed in any::<u64>(), n in 1usize..=6, k in 1usize..20) {
        let mut rng = Rng::seed_from(seed);
        let x = draw_symbols(n, k, &mut rng);
        let xhat = Matrix::from_fn(n, k, |i, j| if rng.uniform() < 0.2 { -x[(i, j)] } else { x[(i, j)] });
        let t = Atm::random(n, &mut rng);
        let base = ber(&x, &xhat);
        prop_assert_eq!(ber(&x, &t.apply(&xhat)), base);
        prop_assert_eq!(ber(&t.apply(&x), &xhat), base);
        prop_assert_eq!(align(&x, &t.apply(&x)).1, 0);
    }

    #[test]
    fn atm_equivalence_recovers_the_transform(seed in any::<u64>(), n in 1usize..=8, extra in 0usize..8) {
        let mut rng = Rng::seed_from(seed);
        let x = draw_symbols(n, n + extra, &mut rng);
        let t = Atm::random(n, &mut rng);
        let w = atm_equivalent(&t.apply(&x), &x).expect("equivalent by construction");
        prop_assert_eq!(w.apply(&x), t.apply(&x));
    }

    #[test]
    fn searched_vertices_keep_their_invariants(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = Rng::seed_from(seed);
        let y = noiseless_block(n, 4 * n, &mut rng);
        let found = find_vertex(&feasible_start(&y, &mut rng), &y, &FindConfig::default()).unwrap();
        let cfg = SearchConfig::default();
        // Too few independent good columns is a legitimate rejection.
        let Ok(out) = search(&found.u, &y, &cfg) else { return Ok(()) };
        let st = &out.state;
        let v = y.select_columns(&st.partition.basis);
        prop_assert!(st.u.matmul(&v).sub(&st.s).max_abs() <= 1e-9);
        prop_assert!(st.uinv.matmul(&st.u).sub(&Matrix::identity(n)).max_abs() <= 1e-8);
        prop_assert!(inverse(&v).unwrap().sub(&st.partition.vinv).max_abs() <= 1e-8 * st.partition.vinv.max_abs().max(1.0));
        for &j in &st.partition.bad {
            for i in 0..n {
                prop_assert!(st.uy[(i, j)].abs() <= 1.0 + cfg.feas_tol);
            }
        }
    }
}

//! Rank-one neighbor scoring and inverse maintenance against direct
//! recomputation.

use blindhop_core::hopping::{SearchConfig, VertexState, SINGULAR_RATIO};
use blindhop_core::matrix::{det, inverse, random_orthogonal};
use blindhop_core::{Matrix, Rng};

fn random_signs(n: usize, rng: &mut Rng) -> Matrix {
    Matrix::from_fn(n, n, |_, _| rng.sign())
}

/// A vertex `U = S V^{-1}` of the square block `Y = V`. With `k = n` every
/// column is in the basis, so all sign matrices are feasible vertices.
fn square_vertex(n: usize, rng: &mut Rng) -> (Matrix, VertexState) {
    // Mildly conditioned V so the direct inverse is itself a sound oracle.
    let q = random_orthogonal(n, rng);
    let y = Matrix::from_fn(n, n, |i, j| q[(i, j)] + 0.3 * rng.gaussian() / (n as f64).sqrt());
    let vinv = inverse(&y).unwrap();
    let s = loop {
        let s = random_signs(n, rng);
        if det(&s).abs() > 0.5 {
            break s;
        }
    };
    let state = VertexState::new(&s.matmul(&vinv), &y, SearchConfig::default().column_tol).unwrap();
    (y, state)
}

#[test]
fn neighbor_ratio_matches_determinant_ratio() {
    let mut rng = Rng::seed_from(0x1c0);
    let mut flips = 0;
    let mut worst: f64 = 0.0;
    while flips < 10_000 {
        let n = 2 + rng.below(7);
        let (_, state) = square_vertex(n, &mut rng);
        let base = det(&state.s).abs();
        for _ in 0..20 {
            let (i, j) = (rng.below(n), rng.below(n));
            let mut flipped = state.s.clone();
            flipped[(i, j)] = -flipped[(i, j)];
            // Both determinants are integers; the direct ratio is exact.
            let direct = det(&flipped).abs().round() / base.round();
            let fast = state.score_neighbor(i, j);
            worst = worst.max((fast - direct).abs() / direct.max(1.0));
            flips += 1;
        }
    }
    assert!(worst <= 1e-9, "worst relative deviation {worst:e}");
}

#[test]
fn maintained_inverse_survives_fifty_hops() {
    let mut rng = Rng::seed_from(0x1c1);
    let cfg = SearchConfig::default();
    // Every flip of a nonsingular 2x2 sign matrix is singular, so chains
    // start at n = 3.
    for n in 3..=8 {
        for _ in 0..20 {
            let (y, mut state) = square_vertex(n, &mut rng);
            for _ in 0..50 {
                let open: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| state.score_neighbor(i, j) >= SINGULAR_RATIO)
                    .collect();
                let (i, j) = open[rng.below(open.len())];
                state = state.hop(i, j, &y, cfg.feas_tol, cfg.column_tol).unwrap();
            }
            let direct = inverse(&state.u).unwrap();
            let err = state.uinv.sub(&direct).norm_inf();
            assert!(err <= 1e-8, "n = {n}: inverse drifted by {err:e}");
            let objective = det(&state.u).abs().ln();
            assert!((state.objective - objective).abs() <= 1e-8);
            let v = y.select_columns(&state.partition.basis);
            assert!(state.u.matmul(&v).sub(&state.s).max_abs() <= 1e-9);
        }
    }
}

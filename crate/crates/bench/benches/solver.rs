use std::hint::black_box;

use blindhop_core::channel::{draw_channel, draw_symbols, ChannelDistribution};
use blindhop_core::decoder::{blind_decode_with_rng, DecodeConfig};
use blindhop_core::hopping::{search, SearchConfig};
use blindhop_core::matrix::rank;
use blindhop_core::vertex::{feasible_start, find_vertex, ActiveSet, Constraint, FindConfig};
use blindhop_core::{Matrix, Rng};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn noiseless_block(n: usize, k: usize, rng: &mut Rng) -> Matrix {
    loop {
        let a = draw_channel(n, ChannelDistribution::Gaussian, rng);
        let y = a.matmul(&draw_symbols(n, k, rng));
        if rank(&y, 1e-9) == n {
            return y;
        }
    }
}

fn projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("project");
    for n in [4, 6, 8] {
        let mut rng = Rng::seed_from(1);
        let k = 4 * n;
        let cols: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.gaussian()).collect()).collect();
        let mut active = ActiveSet::new(n, k);
        while active.len() < n * n / 2 {
            let (row, col) = (rng.below(n), rng.below(k));
            active.push(Constraint { row, col, sign: rng.sign() }, &cols[col]);
        }
        let delta = Matrix::from_fn(n, n, |_, _| rng.gaussian());
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| active.project(black_box(&delta))));
    }
    group.finish();
}

fn neighbor_scoring(c: &mut Criterion) {
    let mut group = c.benchmark_group("score_neighbor");
    for n in [4, 6, 8] {
        let mut rng = Rng::seed_from(2);
        // Some vertices have too few good columns to search from; draw again.
        let st = loop {
            let y = noiseless_block(n, 4 * n, &mut rng);
            let found = find_vertex(&feasible_start(&y, &mut rng), &y, &FindConfig::default()).unwrap();
            if let Ok(out) = search(&found.u, &y, &SearchConfig::default()) {
                break out.state;
            }
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| st.score_neighbor(i, j)).sum::<f64>())
        });
    }
    group.finish();
}

fn decoding(c: &mut Criterion) {
    let mut group = c.benchmark_group("blind_decode");
    group.sample_size(20);
    for (n, k) in [(2, 8), (4, 18), (6, 22)] {
        let mut rng = Rng::seed_from(3);
        let y = noiseless_block(n, k, &mut rng);
        let cfg = DecodeConfig { epsilon: 0.0, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}x{k}")), &y, |b, y| {
            b.iter(|| blind_decode_with_rng(y, &cfg, &mut rng).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, projection, neighbor_scoring, decoding);
criterion_main!(benches);

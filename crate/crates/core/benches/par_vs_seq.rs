//! Sequential vs rayon execution of the embarrassingly parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use decohere::collisional::{
    evolve_exact_with, structure_factor_grid, GasSpec, MomentumTransferLaw, PositionDensityMatrix,
};
use decohere::dephasing::{Beta, DephasingModel, SpectralDensity};
use decohere::gksl::{certify_semigroup, CP_TOL};
use decohere::{sample, Execution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn structure_factor(c: &mut Criterion) {
    let gas = GasSpec::thermal(1.0, 1.0).unwrap();
    let qs: Vec<f64> = (1..=64).map(|k| 0.05 * k as f64).collect();
    let es: Vec<f64> = (0..256).map(|k| -4.0 + 8.0 * k as f64 / 255.0).collect();
    let mut group = c.benchmark_group("structure_factor_grid");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| structure_factor_grid(&gas, black_box(&qs), black_box(&es), exec).unwrap())
        });
    }
    group.finish();
}

fn dephasing_curve(c: &mut Criterion) {
    let model = DephasingModel::new(1.0, SpectralDensity::ohmic(0.5, 1.0, 1.0).unwrap(), Beta::Finite(1.0)).unwrap();
    let times: Vec<f64> = (1..=32).map(|k| 0.25 * k as f64).collect();
    let mut group = c.benchmark_group("dephasing_curve");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| model.curve(black_box(&times), exec).unwrap()));
    }
    group.finish();
}

fn cp_certification(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gen = sample::generator(&mut rng, 4, 3);
    let times: Vec<f64> = (1..=24).map(|k| 0.5 * k as f64).collect();
    let mut group = c.benchmark_group("cp_certification");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| certify_semigroup(&gen, black_box(&times), CP_TOL, exec).unwrap())
        });
    }
    group.finish();
}

fn collisional_exact(c: &mut Criterion) {
    let law = MomentumTransferLaw::gaussian(1.0, 1.0).unwrap();
    let mut group = c.benchmark_group("evolve_exact");
    for n in [64usize, 256] {
        let rho0 = PositionDensityMatrix::uniform_superposition((0..n).map(|i| 0.1 * i as f64).collect()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &rho0, |b, rho0| {
                b.iter(|| evolve_exact_with(rho0, &law, 1.0, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(
    benches,
    structure_factor,
    dephasing_curve,
    cp_certification,
    collisional_exact
);
criterion_main!(benches);

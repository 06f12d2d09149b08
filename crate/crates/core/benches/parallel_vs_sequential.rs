use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use openqec::bath::BathSpec;
use openqec::codes::{CodeKind, QecCode};
use openqec::dynamics::{integrate, me_rhs, Frame, IntegrateOptions, SystemModel};
use openqec::experiments::{run_protocol, ProtocolSpec};
use openqec::{DensityMatrix, Parallelism};

fn register(n: usize) -> DensityMatrix {
    let code = QecCode::build(if n == 7 { CodeKind::Steane } else { CodeKind::Toric822 });
    let k = code.k_logical();
    code.encode(&DensityMatrix::maximally_mixed(k)).unwrap()
}

fn rhs(c: &mut Criterion) {
    let mut group = c.benchmark_group("me_rhs");
    for n in [7, 8] {
        let rho = register(n);
        for par in [Parallelism::Sequential, Parallelism::Parallel] {
            let model = SystemModel::collective(n, BathSpec::new(1.0, 0.05).unwrap())
                .unwrap()
                .with_frame(Frame::Rotating)
                .with_parallelism(par);
            group.bench_with_input(BenchmarkId::new(format!("{par:?}"), n), &n, |b, _| {
                b.iter(|| me_rhs(black_box(&rho), 3.0, &model).unwrap())
            });
        }
    }
    group.finish();
}

fn integration(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_8_qubits");
    group.sample_size(10);
    let rho = register(8);
    for par in [Parallelism::Sequential, Parallelism::Parallel] {
        let model = SystemModel::collective(8, BathSpec::new(1.0, 0.05).unwrap())
            .unwrap()
            .with_frame(Frame::Rotating)
            .with_parallelism(par);
        group.bench_function(format!("{par:?}"), |b| {
            b.iter(|| integrate(&rho, &model, 2.0, &IntegrateOptions::new(0.25)).unwrap())
        });
    }
    group.finish();
}

fn protocol_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("protocol_grid");
    group.sample_size(10);
    for par in [Parallelism::Sequential, Parallelism::Parallel] {
        let mut spec = ProtocolSpec::default();
        spec.environment.bath = BathSpec::new(0.2, 0.1).unwrap();
        spec.environment.dt = 0.25;
        spec.environment.parallelism = par;
        spec.t_grid = (1..=8).map(|i| i as f64 * 1.25).collect();
        spec.cycles = vec![1, 2];
        group.bench_function(format!("{par:?}"), |b| b.iter(|| run_protocol(&spec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, rhs, integration, protocol_grid);
criterion_main!(benches);

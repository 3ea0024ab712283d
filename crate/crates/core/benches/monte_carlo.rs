use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qprivacy::exec::Execution;
use qprivacy::harness::{run, Command, Format, RunConfig};
use qprivacy::measures::classical_correlation_with;
use qprivacy::states::random_density;
use qprivacy::tensor::DimSignature;

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    if cfg!(feature = "parallel") {
        m.push(("parallel", Execution::Parallel));
    }
    m
}

fn verify_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-64-trials");
    group.sample_size(10);
    for (name, exec) in modes() {
        let mut cfg = RunConfig::new(Command::Verify);
        cfg.trials = 64;
        cfg.seed = 1;
        cfg.format = Format::Records;
        cfg.execution = exec;
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| run(cfg).unwrap()));
    }
    group.finish();
}

fn discord_grid(c: &mut Criterion) {
    let rho = random_density(&DimSignature::qubits(2).unwrap(), 4, 3).unwrap();
    let mut group = c.benchmark_group("classical-correlation");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| classical_correlation_with(&rho, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, verify_trials, discord_grid);
criterion_main!(benches);
